//! Recomputing table rows and diffing them against the bundled values.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;

use super::analysis::{AnalysisCache, CodeAnalysis};
use super::tables::{Bundle, MatrixRef};
use crate::canonical::{hadamard_cert, CanonCert};
use crate::error::{Error, Result};
use crate::hadamard::{code_from_hadamard, HadamardMatrix};

/// Tables that can be reproduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableId {
    /// `A_9` of the codes of user-supplied matrices.
    T1,
    /// `A_9` of the bordered codes.
    T3,
    /// `A_9` of the four-negacirculant codes.
    T5,
    /// Tuples of the bordered codes and of the user-supplied matrix codes.
    T6,
    /// Tuples of the four-negacirculant codes.
    Tuples,
    /// Automorphism group orders of the matrices found.
    Aut,
    /// Dimension and minimum weight of the codes of the matrices found.
    Related,
    /// Minimum weight of the codes of the transposes.
    Transposes,
    /// Classes across codes, equivalence chains and new transposes.
    Classes,
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "T1" => Ok(TableId::T1),
            "T3" => Ok(TableId::T3),
            "T5" => Ok(TableId::T5),
            "T6" => Ok(TableId::T6),
            "T7" | "T8" | "T7-8" | "TUPLES" => Ok(TableId::Tuples),
            "AUT" => Ok(TableId::Aut),
            "CH" | "RELATED" => Ok(TableId::Related),
            "CHT" | "TRANSPOSES" => Ok(TableId::Transposes),
            "PROP2" | "CLASSES" => Ok(TableId::Classes),
            _ => Err(Error::Parse(format!(
                "unknown table {s:?} (T1, T3, T5, T6, T7, T8, AUT, CH, CHT, PROP2)"
            ))),
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableId::T1 => "T1",
            TableId::T3 => "T3",
            TableId::T5 => "T5",
            TableId::T6 => "T6",
            TableId::Tuples => "T7-8",
            TableId::Aut => "AUT",
            TableId::Related => "CH",
            TableId::Transposes => "CHT",
            TableId::Classes => "PROP2",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "reason", rename_all = "lowercase")]
pub enum RowStatus {
    Match,
    Mismatch,
    Skipped(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportRow {
    pub key: String,
    pub expected: String,
    pub computed: String,
    pub status: RowStatus,
}

impl ReportRow {
    fn compare(key: impl Into<String>, expected: impl fmt::Display, computed: impl fmt::Display) -> Self {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        let status = if expected == computed {
            RowStatus::Match
        } else {
            RowStatus::Mismatch
        };
        Self {
            key: key.into(),
            expected,
            computed,
            status,
        }
    }

    fn skipped(key: impl Into<String>, expected: impl fmt::Display, reason: &str) -> Self {
        Self {
            key: key.into(),
            expected: expected.to_string(),
            computed: String::new(),
            status: RowStatus::Skipped(reason.into()),
        }
    }
}

/// Recomputed rows of one table. Skipped rows do not fail the report.
#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub table: String,
    pub rows: Vec<ReportRow>,
    pub pass: bool,
}

impl TableReport {
    fn new(table: TableId, rows: Vec<ReportRow>) -> Self {
        let pass = rows.iter().all(|r| r.status != RowStatus::Mismatch);
        Self {
            table: table.to_string(),
            rows,
            pass,
        }
    }

    pub fn skipped(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| matches!(r.status, RowStatus::Skipped(_)))
            .count()
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.status == RowStatus::Mismatch)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("table,key,expected,computed,status\n");
        for r in &self.rows {
            let status = match &r.status {
                RowStatus::Match => "match",
                RowStatus::Mismatch => "mismatch",
                RowStatus::Skipped(_) => "skipped",
            };
            s.push_str(&format!(
                "{},{},\"{}\",\"{}\",{}\n",
                self.table, r.key, r.expected, r.computed, status
            ));
        }
        s
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            match &r.status {
                RowStatus::Match => writeln!(f, "{:<12} ok        {}", r.key, r.computed)?,
                RowStatus::Mismatch => writeln!(
                    f,
                    "{:<12} MISMATCH  expected {}, computed {}",
                    r.key, r.expected, r.computed
                )?,
                RowStatus::Skipped(why) => writeln!(f, "{:<12} skipped   {why}", r.key)?,
            }
        }
        write!(
            f,
            "{}: {} rows, {} skipped, {}",
            self.table,
            self.rows.len(),
            self.skipped(),
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Inputs for [`reproduce_table`].
pub struct ReproduceOptions<'a> {
    /// Row indices to recompute; `None` means every row.
    pub sample: Option<Vec<usize>>,
    pub budget: u128,
    /// User-supplied matrices `T_1, T_2, ...` in order.
    pub t_matrices: Option<Vec<HadamardMatrix>>,
    /// Shared analyses; a private cache is used when absent.
    pub cache: Option<&'a AnalysisCache>,
}

impl Default for ReproduceOptions<'_> {
    fn default() -> Self {
        Self {
            sample: None,
            budget: crate::weight::DEFAULT_BUDGET,
            t_matrices: None,
            cache: None,
        }
    }
}

const NO_T_FILES: &str = "needs user-supplied T matrices";

struct Ctx<'a> {
    bundle: Bundle,
    budget: u128,
    cache: &'a AnalysisCache,
    t: Option<&'a [HadamardMatrix]>,
}

impl Ctx<'_> {
    fn f(&self, i: usize) -> Result<Arc<CodeAnalysis>> {
        self.cache.get(&self.bundle.four_nega_spec(i)?, self.budget)
    }

    fn d(&self, i: usize) -> Result<Arc<CodeAnalysis>> {
        self.cache.get(&self.bundle.bdc_spec(i)?, self.budget)
    }

    fn t(&self, i: usize) -> Result<Option<Arc<CodeAnalysis>>> {
        let Some(h) = self.t.and_then(|t| t.get(i - 1)) else {
            return Ok(None);
        };
        let code = code_from_hadamard(h)?.with_label(format!("C(T36-{i})"));
        Ok(Some(self.cache.get_code(&format!("C(T36-{i})"), &code, self.budget)?))
    }

    /// Analysis of `C(H)` for the representative of class `c` of `F_i`, or
    /// of its transpose.
    fn related(&self, i: usize, c: usize, transpose: bool) -> Result<Arc<CodeAnalysis>> {
        let f = self.f(i)?;
        let class = &f.search.classes[c];
        let h = &f.search.matrices[class.representative].matrix;
        let (h, tag) = if transpose {
            (h.transpose(), "T")
        } else {
            (h.clone(), "")
        };
        let key = format!("C(H{tag}:F36-{i}:{c})");
        let code = code_from_hadamard(&h)?.with_label(key.clone());
        self.cache.get_code(&key, &code, self.budget)
    }
}

fn sorted_list<T: Ord + fmt::Display>(mut v: Vec<T>) -> String {
    v.sort();
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn select(sample: &Option<Vec<usize>>, all: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let all: Vec<usize> = all.into_iter().collect();
    match sample {
        None => all,
        Some(s) => s.iter().copied().filter(|i| all.contains(i)).collect(),
    }
}

/// Matrix refs of `F_i` that the tables name, `(i, 1..=N)`.
fn refs_of(b: &Bundle, i: usize) -> Vec<MatrixRef> {
    let n = b.tuples_f.get(&i).map_or(0, |t| t.neq);
    (1..=n).map(|j| (i, j)).collect()
}

/// Recomputes the selected rows of `table` and compares them with the
/// bundled expectations.
pub fn reproduce_table(table: TableId, opts: &ReproduceOptions<'_>) -> Result<TableReport> {
    if opts.sample.as_ref().is_some_and(Vec::is_empty) {
        return Ok(TableReport::new(table, Vec::new()));
    }
    let own_cache;
    let cache = match opts.cache {
        Some(c) => c,
        None => {
            own_cache = AnalysisCache::new();
            &own_cache
        }
    };
    let ctx = Ctx {
        bundle: Bundle::load()?,
        budget: opts.budget,
        cache,
        t: opts.t_matrices.as_deref(),
    };
    let b = &ctx.bundle;
    let f_rows = || select(&opts.sample, 1..=260);
    let rows = match table {
        TableId::T1 => {
            let mut rows = Vec::new();
            for i in select(&opts.sample, 1..=10) {
                let expected = b.a9_t_of(i).map_or("-".to_string(), |a| a.to_string());
                rows.push(match ctx.t(i)? {
                    Some(a) => ReportRow::compare(format!("T{i}"), expected, a.a(9)),
                    None => ReportRow::skipped(format!("T{i}"), expected, NO_T_FILES),
                });
            }
            rows
        }
        TableId::T3 => select(&opts.sample, 1..=12)
            .into_iter()
            .map(|i| {
                let expected = b.a9_d_of(i).unwrap_or_default();
                Ok(ReportRow::compare(format!("D{i}"), expected, ctx.d(i)?.a(9)))
            })
            .collect::<Result<_>>()?,
        TableId::T5 => f_rows()
            .into_iter()
            .map(|i| {
                let expected = b.a9_f_of(i).unwrap_or_default();
                Ok(ReportRow::compare(format!("F{i}"), expected, ctx.f(i)?.a(9)))
            })
            .collect::<Result<_>>()?,
        TableId::T6 => {
            let mut rows = Vec::new();
            for st in &b.tuples_source {
                for i in select(&opts.sample, st.indices.iter().copied()) {
                    let key = format!("{}{i}", st.source);
                    let computed = match st.source {
                        'D' => Some(ctx.d(i)?),
                        _ => ctx.t(i)?,
                    };
                    rows.push(match computed {
                        Some(a) => ReportRow::compare(key, st.tuple, a.search.tuple),
                        None => ReportRow::skipped(key, st.tuple, NO_T_FILES),
                    });
                }
            }
            rows
        }
        TableId::Tuples => f_rows()
            .into_iter()
            .map(|i| Ok(ReportRow::compare(format!("F{i}"), b.tuples_f[&i], ctx.f(i)?.search.tuple)))
            .collect::<Result<_>>()?,
        TableId::Aut => {
            let aut = b.aut_by_matrix();
            f_rows()
                .into_iter()
                .map(|i| {
                    let expected: Vec<u64> = refs_of(b, i).iter().filter_map(|r| aut.get(r).copied()).collect();
                    let a = ctx.f(i)?;
                    let computed: Vec<BigUint> = a.search.classes.iter().map(|c| c.aut_order().clone()).collect();
                    Ok(ReportRow::compare(format!("F{i}"), sorted_list(expected), sorted_list(computed)))
                })
                .collect::<Result<_>>()?
        }
        TableId::Related => {
            let mut rows = Vec::new();
            for i in f_rows() {
                let expected: Vec<String> = refs_of(b, i)
                    .iter()
                    .map(|r| {
                        let dim = if b.dim16.contains(r) { 16 } else { 18 };
                        let d = if b.d12.contains(r) { 12 } else { 9 };
                        format!("({dim},{d})")
                    })
                    .collect();
                let mut computed = Vec::new();
                for c in 0..ctx.f(i)?.search.classes.len() {
                    let a = ctx.related(i, c, false)?;
                    let d = a.sweep.enumerator.min_weight().unwrap_or(0);
                    computed.push(format!("({},{d})", a.code.k()));
                }
                rows.push(ReportRow::compare(format!("F{i}"), sorted_list(expected), sorted_list(computed)));
            }
            rows
        }
        TableId::Transposes => {
            let mut rows = Vec::new();
            let p36 = ctx.cache.get(&b.p36_spec(), ctx.budget)?.code_cert(ctx.budget)?;
            for i in f_rows() {
                let refs = refs_of(b, i);
                let expected: Vec<u64> = refs
                    .iter()
                    .map(|r| if b.transpose_d12.contains(r) { 12 } else { 9 })
                    .collect();
                let mut computed = Vec::new();
                let mut p36_hits = 0;
                for c in 0..ctx.f(i)?.search.classes.len() {
                    let a = ctx.related(i, c, true)?;
                    computed.push(a.sweep.enumerator.min_weight().unwrap_or(0) as u64);
                    if a.code.k() == 18 && a.a(9) == 0 && a.code_cert(ctx.budget)? == p36 {
                        p36_hits += 1;
                    }
                }
                rows.push(ReportRow::compare(format!("F{i}"), sorted_list(expected), sorted_list(computed)));
                let expect_p36 = refs.iter().filter(|r| **r == b.transpose_p36).count();
                rows.push(ReportRow::compare(
                    format!("F{i}-P36"),
                    format!("{expect_p36} transposes give P36"),
                    format!("{p36_hits} transposes give P36"),
                ));
            }
            rows
        }
        TableId::Classes => classes_rows(&ctx, &f_rows())?,
    };
    Ok(TableReport::new(table, rows))
}

/// Global class count, chains, and (over the full table) the transposes
/// that are new.
fn classes_rows(ctx: &Ctx<'_>, codes: &[usize]) -> Result<Vec<ReportRow>> {
    let b = &ctx.bundle;
    let mut index: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    let mut certs: Vec<CanonCert> = Vec::new();
    // class ids of each code's classes
    let mut per_code: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &i in codes {
        let a = ctx.f(i)?;
        let ids = a
            .search
            .classes
            .iter()
            .map(|c| {
                let next = index.len();
                let id = *index.entry(c.cert.bytes.clone()).or_insert(next);
                if id == certs.len() {
                    certs.push(c.cert.clone());
                }
                id
            })
            .collect();
        per_code.insert(i, ids);
    }

    let sampled: BTreeSet<usize> = codes.iter().copied().collect();
    let total: usize = codes.iter().map(|i| b.tuples_f[i].neq).sum();
    let merged: usize = b
        .chains
        .iter()
        .map(|c| c.iter().filter(|(i, _)| sampled.contains(i)).count().saturating_sub(1))
        .sum();
    let mut rows = vec![ReportRow::compare("classes", total - merged, index.len())];

    for chain in &b.chains {
        let members: Vec<MatrixRef> = chain.iter().copied().filter(|(i, _)| sampled.contains(i)).collect();
        if members.len() < 2 {
            continue;
        }
        let key = members.iter().map(|(i, j)| format!("{i}:{j}")).collect::<Vec<_>>().join("~");
        // a member in a code with one class pins the class; the others must contain it
        let pinned: BTreeSet<usize> = members
            .iter()
            .filter(|(i, _)| per_code[i].len() == 1)
            .map(|(i, _)| per_code[i][0])
            .collect();
        let holds = pinned.len() == 1
            && members
                .iter()
                .all(|(i, _)| per_code[i].iter().any(|c| pinned.contains(c)));
        rows.push(ReportRow::compare(
            format!("chain {key}"),
            "equivalent",
            if holds { "equivalent" } else { "not equivalent" },
        ));
    }

    // matrices in the codes C(T_i), i = 1..8, 10, against the F-code classes
    let t_codes = [1, 2, 3, 4, 5, 6, 7, 8, 10];
    if ctx.t.is_some() {
        let mut t_certs: BTreeSet<Vec<u8>> = BTreeSet::new();
        for i in t_codes {
            if let Some(a) = ctx.t(i)? {
                t_certs.extend(a.search.classes.iter().map(|c| c.cert.bytes.clone()));
            }
        }
        rows.push(ReportRow::compare("T-code classes", b.count("prop1").unwrap_or_default(), t_certs.len()));
        if sampled.len() == 260 {
            let union = t_certs.len() + index.keys().filter(|k| !t_certs.contains(*k)).count();
            rows.push(ReportRow::compare(
                "union with T-code classes",
                b.count("prop1").unwrap_or_default() + b.count("prop2").unwrap_or_default(),
                union,
            ));
        }
    } else if sampled.len() == 260 {
        rows.push(ReportRow::skipped(
            "union with T-code classes",
            b.count("prop1").unwrap_or_default() + b.count("prop2").unwrap_or_default(),
            NO_T_FILES,
        ));
    }

    if sampled.len() == 260 {
        let reps: Vec<HadamardMatrix> = codes
            .iter()
            .flat_map(|&i| {
                let a = ctx.f(i).expect("analysed above");
                a.search
                    .classes
                    .iter()
                    .map(|c| a.search.matrices[c.representative].matrix.clone())
                    .collect::<Vec<_>>()
            })
            .collect();
        let known: BTreeSet<Vec<u8>> = index.keys().cloned().collect();
        let mut new_per_code: BTreeMap<usize, usize> = BTreeMap::new();
        let mut k = 0;
        for &i in codes {
            for _ in &per_code[&i] {
                let t = hadamard_cert(&reps[k].transpose());
                if !known.contains(&t.bytes) {
                    *new_per_code.entry(i).or_default() += 1;
                }
                k += 1;
            }
        }
        let mut expected: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, _) in &b.transpose_new {
            *expected.entry(*i).or_default() += 1;
        }
        let fmt_map = |m: &BTreeMap<usize, usize>| {
            m.iter().map(|(i, n)| format!("{i}x{n}")).collect::<Vec<_>>().join(" ")
        };
        rows.push(ReportRow::compare(
            "new transposes",
            fmt_map(&expected),
            fmt_map(&new_per_code),
        ));
    }
    Ok(rows)
}

