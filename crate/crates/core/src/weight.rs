//! Codeword enumeration, weight enumerators and extremality.
//!
//! A sweep visits all `3^k` codewords exactly once. Messages follow a
//! reflected ternary Gray sequence, so consecutive codewords differ by plus or
//! minus one generator row and each step costs one bitsliced addition and a
//! popcount. The message space is split on its top digits into independent
//! ranges which run in parallel and are merged in range order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::TernaryCode;
use crate::error::{Error, Result};
use crate::gf3::{add_planes, GF3Vector};

/// Step limit admitting a full sweep of an 18-dimensional code.
pub const DEFAULT_BUDGET: u128 = 387_420_489;

/// Number of top message digits used to split a sweep into parallel ranges.
pub const DEFAULT_SPLIT_DIGITS: usize = 4;

/// `A_0, ..., A_n`: number of codewords of each weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightEnumerator {
    counts: Vec<u64>,
}

impl WeightEnumerator {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        Self { counts }
    }

    pub fn n(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    #[inline]
    pub fn get(&self, w: usize) -> u64 {
        self.counts.get(w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    /// Least positive weight that occurs.
    pub fn min_weight(&self) -> Option<usize> {
        (1..self.counts.len()).find(|&w| self.counts[w] > 0)
    }

    /// Nonzero `(weight, count)` pairs, weight 0 excluded.
    pub fn support(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &c)| c > 0)
            .map(|(w, &c)| (w, c))
    }

    /// `weight,count` rows, header first, zero counts omitted.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("weight,count\n");
        for (w, &c) in self.counts.iter().enumerate() {
            if c > 0 {
                s.push_str(&format!("{w},{c}\n"));
            }
        }
        s
    }

    pub fn from_csv(n: usize, text: &str) -> Result<Self> {
        let mut counts = vec![0; n + 1];
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if line == "weight,count" {
                continue;
            }
            let (w, c) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bad enumerator row {line:?}")))?;
            let w: usize = w
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad weight {w:?}: {e}")))?;
            let c: u64 = c
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad count {c:?}: {e}")))?;
            *counts
                .get_mut(w)
                .ok_or_else(|| Error::Parse(format!("weight {w} exceeds length {n}")))? = c;
        }
        Ok(Self { counts })
    }
}

impl fmt::Display for WeightEnumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(w, c)| if w == 0 { c.to_string() } else { format!("{c} y^{w}") })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extremality {
    Extremal,
    NearExtremal,
    Neither,
}

impl fmt::Display for Extremality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Extremality::Extremal => "extremal",
            Extremality::NearExtremal => "near-extremal",
            Extremality::Neither => "neither",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalityClass {
    pub kind: Extremality,
    /// `3 * floor(n / 12) + 3`.
    pub bound: usize,
}

/// Places a self-dual code of length `n` and minimum weight `d` relative to
/// the bound `d <= 3 floor(n/12) + 3`.
pub fn classify_extremality(n: usize, d: usize) -> Result<ExtremalityClass> {
    if n == 0 || n % 4 != 0 {
        return Err(Error::Param(format!("self-dual length {n} is not a positive multiple of 4")));
    }
    let bound = 3 * (n / 12) + 3;
    if d > bound {
        return Err(Error::Internal(format!(
            "minimum weight {d} exceeds the bound {bound} at length {n}"
        )));
    }
    let kind = if d == bound {
        Extremality::Extremal
    } else if d + 3 == bound {
        Extremality::NearExtremal
    } else {
        Extremality::Neither
    };
    Ok(ExtremalityClass { kind, bound })
}

/// Weights carrying a nonzero coefficient in the length-36 near-extremal
/// enumerator, in order.
pub const NEAR_EXTREMAL_36_WEIGHTS: [usize; 11] = [0, 9, 12, 15, 18, 21, 24, 27, 30, 33, 36];

/// Constant and `alpha` parts of each coefficient, aligned with
/// [`NEAR_EXTREMAL_36_WEIGHTS`].
pub const NEAR_EXTREMAL_36_TERMS: [(i64, i64); 11] = [
    (1, 0),
    (0, 1),
    (42_840, -9),
    (1_400_256, 36),
    (18_452_280, -84),
    (90_370_368, 126),
    (162_663_480, -126),
    (97_808_480, 84),
    (16_210_656, -36),
    (471_240, 9),
    (888, -1),
];

/// The near-extremal length-36 coefficients at any integer `alpha`, unchecked.
pub fn near_extremal_36_coefficients(alpha: i64) -> [i64; 11] {
    NEAR_EXTREMAL_36_TERMS.map(|(c, a)| c + a * alpha)
}

/// Weight enumerator of a near-extremal self-dual code of length 36 with
/// `alpha` codewords of weight 9; `alpha = 8 beta`, `1 <= beta <= 111`.
pub fn near_extremal_enumerator_36(alpha: u64) -> Result<WeightEnumerator> {
    if alpha % 8 != 0 || !(8..=888).contains(&alpha) {
        return Err(Error::Range(format!(
            "alpha = {alpha} is not 8*beta with 1 <= beta <= 111"
        )));
    }
    let mut counts = vec![0u64; 37];
    for (w, c) in NEAR_EXTREMAL_36_WEIGHTS
        .iter()
        .zip(near_extremal_36_coefficients(alpha as i64))
    {
        counts[*w] = c as u64;
    }
    Ok(WeightEnumerator { counts })
}

/// Result of one sweep over a code.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub enumerator: WeightEnumerator,
    /// Collected codewords by weight, sorted.
    pub words: BTreeMap<usize, Vec<GF3Vector>>,
    /// Requested weights dropped because they exceeded the collection cap.
    pub truncated: BTreeSet<usize>,
}

impl Sweep {
    pub fn words_of_weight(&self, w: usize) -> &[GF3Vector] {
        self.words.get(&w).map_or(&[], Vec::as_slice)
    }
}

/// Options for [`sweep`].
#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub budget: u128,
    pub split_digits: usize,
    /// Weights whose codewords are returned.
    pub collect: Vec<usize>,
    /// A collected weight class larger than this is dropped and reported in
    /// [`Sweep::truncated`].
    pub collect_cap: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            split_digits: DEFAULT_SPLIT_DIGITS,
            collect: Vec::new(),
            collect_cap: usize::MAX,
        }
    }
}

impl SweepOptions {
    pub fn collecting(weights: &[usize]) -> Self {
        Self {
            collect: weights.to_vec(),
            ..Self::default()
        }
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.collect_cap = cap;
        self
    }
}

pub(crate) fn check_budget(k: usize, budget: u128) -> Result<()> {
    let needed = 3u128.checked_pow(k as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    Ok(())
}

struct RangeResult {
    hist: [u64; 65],
    words: Vec<(u64, u64)>,
    overflow: u128,
}

/// Enumerates `start + span(rows)` in reflected Gray order.
#[allow(unused_assignments)]
fn gray_range(
    rows: &[(u64, u64)],
    start: (u64, u64),
    mut collect_mask: u128,
    cap: usize,
) -> RangeResult {
    let mut hist = [0u64; 65];
    let mut words = Vec::new();
    let mut taken = [0usize; 65];
    let mut overflow = 0u128;
    let (mut c1, mut c2) = start;

    macro_rules! visit {
        () => {{
            let w = (c1 | c2).count_ones() as usize;
            hist[w] += 1;
            if (collect_mask >> w) & 1 != 0 {
                if taken[w] < cap {
                    taken[w] += 1;
                    words.push((c1, c2));
                } else {
                    collect_mask &= !(1 << w);
                    overflow |= 1 << w;
                }
            }
        }};
    }

    if rows.is_empty() {
        visit!();
        return RangeResult { hist, words, overflow };
    }

    // Moving digit j up adds row j, moving it down subtracts it.
    let up: Vec<(u64, u64)> = rows.to_vec();
    let down: Vec<(u64, u64)> = rows.iter().map(|&(a, b)| (b, a)).collect();
    let k = rows.len();
    // base-3 step counter over digits 1..k, and the current direction of
    // every digit (true = ascending)
    let mut counter = vec![0u8; k];
    let mut ascending = vec![true; k];
    let (r0u, r0d) = (up[0], down[0]);

    loop {
        // three values of digit 0
        let step0 = if ascending[0] { r0u } else { r0d };
        visit!();
        (c1, c2) = add_planes(c1, c2, step0.0, step0.1);
        visit!();
        (c1, c2) = add_planes(c1, c2, step0.0, step0.1);
        visit!();
        ascending[0] = !ascending[0];

        // advance the counter on digits >= 1
        let mut j = 1;
        while j < k && counter[j] == 2 {
            counter[j] = 0;
            ascending[j] = !ascending[j];
            j += 1;
        }
        if j == k {
            break;
        }
        counter[j] += 1;
        let step = if ascending[j] { up[j] } else { down[j] };
        (c1, c2) = add_planes(c1, c2, step.0, step.1);
    }
    RangeResult { hist, words, overflow }
}

/// Visits every codeword of `code` once, counting weights and collecting the
/// codewords whose weight is listed in `opts.collect`.
pub fn sweep(code: &TernaryCode, opts: &SweepOptions) -> Result<Sweep> {
    let n = code.n();
    let k = code.k();
    check_budget(k, opts.budget)?;
    let mut collect_mask = 0u128;
    for &w in &opts.collect {
        if w <= n {
            collect_mask |= 1 << w;
        }
    }
    let rows: Vec<(u64, u64)> = code.generator().rows().iter().map(|r| r.planes()).collect();
    let split = opts.split_digits.min(k);
    let (low, high) = rows.split_at(k - split);
    let ranges = 3usize.pow(split as u32);
    // ranges hold roughly equal shares of every weight class
    let range_cap = match opts.collect_cap {
        usize::MAX => usize::MAX,
        c => c.saturating_mul(2) / ranges + 64,
    };

    let partial: Vec<RangeResult> = (0..ranges)
        .into_par_iter()
        .map(|t| {
            let mut start = (0u64, 0u64);
            let mut rest = t;
            for &(a, b) in high {
                let digit = rest % 3;
                rest /= 3;
                for _ in 0..digit {
                    start = add_planes(start.0, start.1, a, b);
                }
            }
            gray_range(low, start, collect_mask, range_cap)
        })
        .collect();

    let mut counts = vec![0u64; n + 1];
    let mut words: BTreeMap<usize, Vec<GF3Vector>> =
        opts.collect.iter().filter(|&&w| w <= n).map(|&w| (w, Vec::new())).collect();
    let mut overflow = 0u128;
    for part in partial {
        overflow |= part.overflow;
        for (w, c) in counts.iter_mut().zip(part.hist.iter()) {
            *w += c;
        }
        for (a, b) in part.words {
            let v = GF3Vector::from_planes(n, a, b)?;
            words
                .get_mut(&(v.weight() as usize))
                .expect("collected weight was requested")
                .push(v);
        }
    }
    let mut truncated = BTreeSet::new();
    words.retain(|&w, list| {
        if (overflow >> w) & 1 != 0 || list.len() > opts.collect_cap {
            truncated.insert(w);
            false
        } else {
            list.sort_unstable();
            true
        }
    });
    Ok(Sweep {
        enumerator: WeightEnumerator { counts },
        words,
        truncated,
    })
}

/// Exact weight enumerator by full enumeration.
pub fn weight_enumerator(code: &TernaryCode, budget: u128) -> Result<WeightEnumerator> {
    Ok(sweep(code, &SweepOptions::default().with_budget(budget))?.enumerator)
}

/// Minimum nonzero weight by full enumeration.
pub fn min_weight(code: &TernaryCode, budget: u128) -> Result<usize> {
    if code.k() == 0 {
        return Err(Error::Param("the zero code has no minimum weight".into()));
    }
    weight_enumerator(code, budget)?
        .min_weight()
        .ok_or_else(|| Error::Internal("nonzero code without nonzero codewords".into()))
}

/// All codewords of weight `w`, sorted.
pub fn codewords_of_weight(code: &TernaryCode, w: usize, budget: u128) -> Result<Vec<GF3Vector>> {
    let mut s = sweep(code, &SweepOptions::collecting(&[w]).with_budget(budget))?;
    Ok(s.words.remove(&w).unwrap_or_default())
}
