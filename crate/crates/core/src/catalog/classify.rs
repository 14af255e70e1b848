//! Exhaustive classification of near-extremal codes in one family.
//!
//! Every parameter vector is tested with the cheap self-duality criterion
//! of its family. Survivors get their low-weight words from the two
//! systematic generators `(I | A)` and `(-A^T | I)`: a word of weight at most
//! `d` has at most `d / 2` nonzero entries in one half, so combinations of at
//! most `d / 2` rows of either generator find all of them. Codes of minimum
//! weight exactly `3 floor(n / 12)` are kept and labeled with a code
//! certificate; classes are formed once the whole space is covered.
//!
//! The checkpoint is a plain text file: a header, one `s` line per
//! surviving vector and `cursor` lines recording progress. Lines are only
//! appended, so the file can be diffed between runs.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use log::info;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::canonical::{code_cert, code_cert_from_sweep, CodeCertOptions};
use crate::code::{
    bordered_double_circulant, bordered_double_circulant_self_dual_fast, four_negacirculant,
    quasi_twisted, CodeSpec, Family, TernaryCode,
};
use crate::error::{Error, Result};
use crate::gf3::{GF3Matrix, GF3Vector};
use crate::weight::{near_extremal_enumerator_36, Sweep, DEFAULT_BUDGET};

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub family: Family,
    /// Code length.
    pub n: usize,
    /// Parameter vectors examined by this call before it suspends.
    pub budget: u128,
    /// Checkpoint file; created if missing, resumed if present.
    pub checkpoint: Option<PathBuf>,
    /// Vectors per checkpointed shard.
    pub shard: u64,
    /// Enumeration budget for certificates that need a full sweep.
    pub cert_budget: u128,
}

impl ClassifyOptions {
    pub fn new(family: Family, n: usize) -> Self {
        Self {
            family,
            n,
            budget: u128::MAX,
            checkpoint: None,
            shard: 1 << 20,
            cert_budget: DEFAULT_BUDGET,
        }
    }
}

/// One surviving parameter vector.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Survivor {
    params: String,
    /// Number of minimum weight codewords.
    a_min: u64,
    /// Digest of the generator, equal iff the codes are equal.
    code_digest: String,
    cert_digest: String,
}

impl Survivor {
    fn to_line(&self) -> String {
        format!(
            "s {} {} {} {}",
            self.params, self.a_min, self.code_digest, self.cert_digest
        )
    }

    fn from_line(line: &str) -> Result<Self> {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[..] {
            ["s", p, a, c, d] => Ok(Self {
                params: p.to_string(),
                a_min: a
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad checkpoint line {line:?}")))?,
                code_digest: c.to_string(),
                cert_digest: d.to_string(),
            }),
            _ => Err(Error::Parse(format!("bad checkpoint line {line:?}"))),
        }
    }
}

/// One equivalence class of near-extremal codes.
#[derive(Clone, Debug, Serialize)]
pub struct ClassRep {
    /// Smallest parameter vector in the class, as a code spec.
    pub spec: String,
    /// Number of minimum weight codewords.
    pub a_min: u64,
    /// Distinct codes in the class.
    pub codes: usize,
    /// Parameter vectors giving a code in the class.
    pub vectors: usize,
    pub cert: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub family: Family,
    pub n: usize,
    pub vectors: u64,
    pub survivors: usize,
    pub distinct_codes: usize,
    pub classes: Vec<ClassRep>,
}

/// Digits of the parameter vectors and their count.
fn param_digits(family: Family, n: usize) -> Result<usize> {
    let ok = |d: usize| (1..=crate::gf3::MAX_LEN).contains(&d);
    let digits = match family {
        Family::Bdc if n % 2 == 0 && n >= 4 => n / 2 - 1,
        Family::Qt if n % 2 == 0 => n / 2,
        Family::FourNega if n % 4 == 0 => 2 * (n / 4),
        _ => 0,
    };
    if !ok(digits) || n % 4 != 0 || digits > 40 {
        return Err(Error::Param(format!(
            "no {family} classification at length {n}"
        )));
    }
    Ok(digits)
}

fn spec_of(family: Family, n: usize, params: &str) -> CodeSpec {
    let (r_a, r_b) = match family {
        Family::FourNega => {
            let (a, b) = params.split_at(params.len() / 2);
            (a.to_string(), Some(b.to_string()))
        }
        _ => (params.to_string(), None),
    };
    CodeSpec {
        family,
        n,
        r_a,
        r_b,
        label: format!("{family}-{params}"),
    }
}

/// Base-3 digits of `idx`, most significant first.
fn digits_of(mut idx: u64, len: usize) -> Vec<u8> {
    let mut d = vec![0u8; len];
    for x in d.iter_mut().rev() {
        *x = (idx % 3) as u8;
        idx /= 3;
    }
    d
}

/// `sum_j a_j a_{j+s}` over the negacyclic shift.
fn nega_autocorrelation(a: &[u8], s: usize) -> u32 {
    let m = a.len();
    (0..m)
        .map(|j| {
            let p = (a[j] * a[(j + s) % m]) as u32;
            if j + s >= m {
                2 * p
            } else {
                p
            }
        })
        .sum::<u32>()
        % 3
}

/// The family's self-duality criterion on raw digits.
fn self_dual_fast(family: Family, d: &[u8]) -> bool {
    match family {
        Family::Bdc => GF3Vector::from_symbols(d).is_ok_and(|r| bordered_double_circulant_self_dual_fast(&r)),
        Family::Qt => (0..d.len()).all(|s| nega_autocorrelation(d, s) == if s == 0 { 2 } else { 0 }),
        Family::FourNega => {
            let (a, b) = d.split_at(d.len() / 2);
            (0..a.len()).all(|s| {
                (nega_autocorrelation(a, s) + nega_autocorrelation(b, s)) % 3 == if s == 0 { 2 } else { 0 }
            })
        }
        _ => false,
    }
}

fn build(family: Family, d: &[u8]) -> Result<TernaryCode> {
    match family {
        Family::Bdc => bordered_double_circulant(&GF3Vector::from_symbols(d)?),
        Family::Qt => quasi_twisted(&GF3Vector::from_symbols(d)?),
        Family::FourNega => {
            let (a, b) = d.split_at(d.len() / 2);
            four_negacirculant(&GF3Vector::from_symbols(a)?, &GF3Vector::from_symbols(b)?)
        }
        f => Err(Error::Param(format!("family {f} cannot be classified"))),
    }
}

/// All codewords of weight at most `limit` of a self-dual code with a
/// systematic generator `(I | A)`, both scalar multiples included, sorted.
pub fn low_weight_words(code: &TernaryCode, limit: usize) -> Result<Vec<GF3Vector>> {
    let g = code.construction_matrix();
    let (k, n) = (g.nrows(), g.ncols());
    if n != 2 * k || (0..k).any(|i| (0..k).any(|j| g.get(i, j) != u8::from(i == j))) {
        return Err(Error::Param(
            "low-weight search needs a self-dual code with generator (I | A)".into(),
        ));
    }
    // (-A^T | I) generates the dual, which is the code itself
    let mut other = GF3Matrix::zeros(k, n)?;
    for i in 0..k {
        for j in 0..k {
            other.set(i, j, (3 - g.get(j, k + i)) % 3);
        }
        other.set(i, k + i, 1);
    }
    let mut found: HashSet<GF3Vector> = HashSet::new();
    for rows in [g.rows(), other.rows()] {
        combine(rows, 0, GF3Vector::zero(n)?, limit / 2, limit, &mut found);
    }
    let mut out: Vec<GF3Vector> = found.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

fn combine(
    rows: &[GF3Vector],
    from: usize,
    acc: GF3Vector,
    left: usize,
    limit: usize,
    found: &mut HashSet<GF3Vector>,
) {
    if left == 0 {
        return;
    }
    for i in from..rows.len() {
        for c in [1, 2] {
            let x = acc.add(&rows[i].scale(c));
            if (x.weight() as usize) <= limit {
                found.insert(x);
            }
            combine(rows, i + 1, x, left - 1, limit, found);
        }
    }
}

/// Examines one parameter vector; `Some` for a near-extremal code.
fn examine(family: Family, n: usize, idx: u64, digits: usize, cert_budget: u128) -> Result<Option<Survivor>> {
    let d = digits_of(idx, digits);
    if !self_dual_fast(family, &d) {
        return Ok(None);
    }
    let code = build(family, &d)?;
    if !code.is_self_dual() {
        return Err(Error::Internal(format!(
            "fast self-duality check accepted a non-self-dual code at {idx}"
        )));
    }
    let target = 3 * (n / 12);
    if target == 0 {
        return Ok(None);
    }
    let words = low_weight_words(&code, target)?;
    if words.iter().any(|w| (w.weight() as usize) < target) || words.is_empty() {
        return Ok(None);
    }
    let opts = CodeCertOptions {
        budget: cert_budget,
        ..CodeCertOptions::default()
    };
    let cert = if n == 36 {
        let sweep = Sweep {
            enumerator: near_extremal_enumerator_36(words.len() as u64)?,
            words: BTreeMap::from([(target, words.clone())]),
            truncated: BTreeSet::new(),
        };
        code_cert_from_sweep(&code, &sweep, &opts)?
    } else {
        code_cert(&code, &opts)?
    };
    let mut h = Sha256::new();
    for r in code.generator().rows() {
        h.update(r.to_ternary_string().as_bytes());
        h.update(b"\n");
    }
    Ok(Some(Survivor {
        params: d.iter().map(|x| char::from(b'0' + x)).collect(),
        a_min: words.len() as u64,
        code_digest: hex::encode(&h.finalize()[..16]),
        cert_digest: cert.digest(),
    }))
}

struct Checkpoint {
    path: PathBuf,
    cursor: u64,
    survivors: Vec<Survivor>,
}

impl Checkpoint {
    fn header(opts: &ClassifyOptions) -> String {
        format!("family {}\nn {}\n", opts.family, opts.n)
    }

    fn open(path: &Path, opts: &ClassifyOptions) -> Result<Self> {
        let mut cp = Self {
            path: path.to_path_buf(),
            cursor: 0,
            survivors: Vec::new(),
        };
        if !path.exists() {
            let mut f = File::create(path)?;
            f.write_all(b"# classification checkpoint\n")?;
            f.write_all(Self::header(opts).as_bytes())?;
            return Ok(cp);
        }
        let mut header = String::new();
        for line in BufReader::new(File::open(path)?).lines() {
            let line = line?;
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            if line.starts_with("family ") || line.starts_with("n ") {
                header.push_str(&line);
                header.push('\n');
            } else if let Some(c) = line.strip_prefix("cursor ") {
                cp.cursor = c
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad cursor line {line:?}")))?;
            } else {
                cp.survivors.push(Survivor::from_line(&line)?);
            }
        }
        if header != Self::header(opts) {
            return Err(Error::Param(format!(
                "checkpoint {} belongs to a different run",
                path.display()
            )));
        }
        // survivors beyond the last cursor come from an interrupted shard
        let digits = param_digits(opts.family, opts.n)?;
        cp.survivors.retain(|s| index_of(&s.params) < cp.cursor);
        debug_assert!(cp.survivors.iter().all(|s| s.params.len() == digits));
        Ok(cp)
    }

    fn append(&mut self, found: &[Survivor], cursor: u64) -> Result<()> {
        let mut f = OpenOptions::new().append(true).open(&self.path)?;
        let mut text = String::new();
        for s in found {
            text.push_str(&s.to_line());
            text.push('\n');
        }
        text.push_str(&format!("cursor {cursor}\n"));
        f.write_all(text.as_bytes())?;
        f.sync_data()?;
        self.cursor = cursor;
        self.survivors.extend_from_slice(found);
        Ok(())
    }
}

fn index_of(params: &str) -> u64 {
    params.bytes().fold(0, |acc, b| acc * 3 + u64::from(b - b'0'))
}

/// Enumerates the family's parameter space, keeps the self-dual
/// near-extremal codes and groups them into equivalence classes.
///
/// When `budget` runs out before the space is covered the call returns
/// [`Error::Suspended`] (with a checkpoint) or [`Error::Budget`] (without);
/// calling again with the same checkpoint resumes.
pub fn classify_family(opts: &ClassifyOptions) -> Result<Classification> {
    let digits = param_digits(opts.family, opts.n)?;
    let total = 3u64.pow(digits as u32);
    let mut cp = match &opts.checkpoint {
        Some(p) => Some(Checkpoint::open(p, opts)?),
        None => None,
    };
    let mut cursor = cp.as_ref().map_or(0, |c| c.cursor);
    let mut survivors = cp.as_ref().map_or_else(Vec::new, |c| c.survivors.clone());
    let mut spent: u128 = 0;
    let shard = opts.shard.max(1);

    while cursor < total {
        if spent >= opts.budget {
            return Err(match &cp {
                Some(c) => Error::Suspended {
                    token: c.path.display().to_string(),
                    cursor,
                    total,
                },
                None => Error::Budget {
                    needed: u128::from(total),
                    budget: opts.budget,
                },
            });
        }
        let room = u64::try_from(opts.budget - spent).unwrap_or(u64::MAX);
        let end = total.min(cursor + shard.min(room));
        let found: Vec<Survivor> = (cursor..end)
            .into_par_iter()
            .map(|idx| examine(opts.family, opts.n, idx, digits, opts.cert_budget))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        if let Some(c) = cp.as_mut() {
            c.append(&found, end)?;
        }
        info!("{} {}: {end}/{total}, {} survivors in shard", opts.family, opts.n, found.len());
        spent += u128::from(end - cursor);
        survivors.extend(found);
        cursor = end;
    }

    Ok(summarize(opts, total, survivors))
}

fn summarize(opts: &ClassifyOptions, total: u64, mut survivors: Vec<Survivor>) -> Classification {
    survivors.sort_by(|a, b| a.params.cmp(&b.params));
    let distinct: HashSet<&str> = survivors.iter().map(|s| s.code_digest.as_str()).collect();
    let mut classes: BTreeMap<&str, (usize, HashSet<&str>, &Survivor)> = BTreeMap::new();
    for s in &survivors {
        let e = classes
            .entry(s.cert_digest.as_str())
            .or_insert_with(|| (0, HashSet::new(), s));
        e.0 += 1;
        e.1.insert(s.code_digest.as_str());
    }
    let mut reps: Vec<ClassRep> = classes
        .into_iter()
        .map(|(cert, (vectors, codes, first))| ClassRep {
            spec: spec_of(opts.family, opts.n, &first.params).to_string(),
            a_min: first.a_min,
            codes: codes.len(),
            vectors,
            cert: cert.to_string(),
        })
        .collect();
    reps.sort_by(|a, b| (a.a_min, &a.spec).cmp(&(b.a_min, &b.spec)));
    Classification {
        family: opts.family,
        n: opts.n,
        vectors: total,
        survivors: survivors.len(),
        distinct_codes: distinct.len(),
        classes: reps,
    }
}
