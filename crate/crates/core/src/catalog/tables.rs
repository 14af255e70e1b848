//! The bundled parameter and expectation tables.
//!
//! The data file is split into `[ID] sha256=<hex>` sections; each section
//! body is checksummed on load and a mismatch is reported as a corrupt
//! bundle. Index lists use `a-b` for ranges and `i:j` for matrix `j` of
//! code `i`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::code::{CodeSpec, Family};
use crate::error::{Error, Result};
use crate::hadamard::SearchTuple;

const BUNDLE: &str = include_str!("../../data/tables.txt");

/// Matrix `j` (1-based) found in code `i`.
pub type MatrixRef = (usize, usize);

/// Parameter tables that can be loaded as code specs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParamTable {
    /// The twelve bordered double circulant codes `D_i`.
    Bdc,
    /// The 260 four-negacirculant codes `F_i`.
    FourNega,
    /// The symmetry code.
    P36,
}

impl FromStr for ParamTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "T2-BDC" | "T2" | "BDC" => Ok(ParamTable::Bdc),
            "T4-4NC" | "T4" | "4NC" => Ok(ParamTable::FourNega),
            "P36" => Ok(ParamTable::P36),
            _ => Err(Error::Parse(format!(
                "unknown parameter table {s:?} (expected T2-bdc, T4-4nc or P36)"
            ))),
        }
    }
}

impl fmt::Display for ParamTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParamTable::Bdc => "T2-bdc",
            ParamTable::FourNega => "T4-4nc",
            ParamTable::P36 => "P36",
        })
    }
}

/// One row of the tuple table for the codes built from user-supplied
/// matrices (`T`) or bordered codes (`D`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceTuple {
    pub source: char,
    pub indices: Vec<usize>,
    pub tuple: SearchTuple,
}

/// Parsed, checksum-verified bundle.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub bdc: Vec<(usize, String)>,
    pub four_nega: Vec<(usize, String, String)>,
    pub p36: String,
    /// `A_9 -> indices` for the codes from user-supplied matrices.
    pub a9_t: BTreeMap<u64, Vec<usize>>,
    pub a9_d: BTreeMap<u64, Vec<usize>>,
    pub a9_f: BTreeMap<u64, Vec<usize>>,
    pub tuples_source: Vec<SourceTuple>,
    /// Tuple of every `F_i`, indexed by `i`.
    pub tuples_f: BTreeMap<usize, SearchTuple>,
    /// `|Aut| -> matrices`, one representative per class.
    pub aut: BTreeMap<u64, Vec<MatrixRef>>,
    /// Matrices whose transposes are equivalent to none of the classes.
    pub transpose_new: Vec<MatrixRef>,
    /// Matrices whose code has dimension 16 (all others 18).
    pub dim16: BTreeSet<MatrixRef>,
    /// Matrices whose code has minimum weight 12 (all others 9).
    pub d12: BTreeSet<MatrixRef>,
    /// Transposes whose code has minimum weight 12 (all others 9).
    pub transpose_d12: BTreeSet<MatrixRef>,
    /// The transpose whose code is the symmetry code.
    pub transpose_p36: MatrixRef,
    /// Chains of equivalent matrices across codes.
    pub chains: Vec<Vec<MatrixRef>>,
    pub counts: BTreeMap<String, usize>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Bundle(msg.into())
}

/// `1,3,5-8` into the listed numbers.
pub fn parse_index_list(s: &str) -> Result<Vec<usize>> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("bad index {t:?}: {e}")))
    };
    let mut out = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(Error::Parse(format!("empty range {part:?}")));
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    Ok(out)
}

fn parse_ref(t: &str) -> Result<MatrixRef> {
    let (i, j) = t
        .split_once(':')
        .ok_or_else(|| bad(format!("expected i:j, got {t:?}")))?;
    let i = i.parse().map_err(|_| bad(format!("bad code index in {t:?}")))?;
    let j = j.parse().map_err(|_| bad(format!("bad matrix index in {t:?}")))?;
    Ok((i, j))
}

fn parse_refs<'a>(toks: impl Iterator<Item = &'a str>) -> Result<Vec<MatrixRef>> {
    toks.map(parse_ref).collect()
}

fn parse_tuple(toks: &[&str]) -> Result<SearchTuple> {
    if toks.len() != 5 {
        return Err(bad(format!("tuple needs 5 numbers, got {toks:?}")));
    }
    format!("({})", toks.join(","))
        .parse()
        .map_err(|e: Error| bad(e.to_string()))
}

fn num<T: FromStr>(t: &str) -> Result<T> {
    t.parse().map_err(|_| bad(format!("bad number {t:?}")))
}

/// Splits the text into checksum-verified sections.
fn sections(text: &str) -> Result<BTreeMap<String, Vec<String>>> {
    let mut out: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut current: Option<(String, String, Vec<String>)> = None;
    let finish = |cur: Option<(String, String, Vec<String>)>,
                  out: &mut BTreeMap<String, Vec<String>>|
     -> Result<()> {
        if let Some((id, sum, lines)) = cur {
            let mut body = lines.join("\n");
            body.push('\n');
            let actual = hex::encode(Sha256::digest(body.as_bytes()));
            if actual != sum {
                return Err(bad(format!(
                    "section [{id}] has checksum {actual}, expected {sum}"
                )));
            }
            out.insert(id, lines);
        }
        Ok(())
    };
    for line in text.lines() {
        let line = line.trim_end();
        if line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            finish(current.take(), &mut out)?;
            let (id, sum) = rest
                .split_once("] sha256=")
                .ok_or_else(|| bad(format!("malformed section header {line:?}")))?;
            current = Some((id.to_string(), sum.to_string(), Vec::new()));
        } else if !line.is_empty() {
            match current.as_mut() {
                Some((_, _, lines)) => lines.push(line.to_string()),
                None => return Err(bad(format!("data outside a section: {line:?}"))),
            }
        }
    }
    finish(current, &mut out)?;
    Ok(out)
}

fn a9_map(lines: &[String]) -> Result<BTreeMap<u64, Vec<usize>>> {
    let mut m = BTreeMap::new();
    for l in lines {
        let (a, list) = l.split_once(' ').ok_or_else(|| bad(format!("bad row {l:?}")))?;
        m.insert(num(a)?, parse_index_list(list).map_err(|e| bad(e.to_string()))?);
    }
    Ok(m)
}

/// `kind value refs...` rows with `*` standing for every other matrix.
fn listed(lines: &[String], kind: &str, value: &str) -> Result<BTreeSet<MatrixRef>> {
    let mut out = BTreeSet::new();
    for l in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() >= 2 && toks[0] == kind && toks[1] == value && toks.get(2) != Some(&"*") {
            out.extend(parse_refs(toks[2..].iter().copied())?);
        }
    }
    Ok(out)
}

impl Bundle {
    /// The bundle compiled into the library.
    pub fn load() -> Result<Self> {
        Self::parse(BUNDLE)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let s = sections(text)?;
        let get = |id: &str| {
            s.get(id)
                .ok_or_else(|| bad(format!("missing section [{id}]")))
        };

        let mut bdc = Vec::new();
        for l in get("T2-bdc")? {
            let toks: Vec<&str> = l.split_whitespace().collect();
            match toks[..] {
                [i, r] => bdc.push((num(i)?, r.to_string())),
                _ => return Err(bad(format!("bad bordered row {l:?}"))),
            }
        }
        let mut four_nega = Vec::new();
        for l in get("T4-4nc")? {
            let toks: Vec<&str> = l.split_whitespace().collect();
            match toks[..] {
                [i, a, b] => four_nega.push((num(i)?, a.to_string(), b.to_string())),
                _ => return Err(bad(format!("bad four-negacirculant row {l:?}"))),
            }
        }
        let p36 = get("P36")?
            .first()
            .and_then(|l| l.strip_prefix("bdc "))
            .ok_or_else(|| bad("P36 section must hold `bdc <row>`"))?
            .to_string();

        let mut tuples_source = Vec::new();
        for l in get("T6-tuples")? {
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.len() != 7 || toks[0].len() != 1 {
                return Err(bad(format!("bad tuple row {l:?}")));
            }
            tuples_source.push(SourceTuple {
                source: toks[0].chars().next().unwrap_or('?'),
                indices: parse_index_list(toks[1]).map_err(|e| bad(e.to_string()))?,
                tuple: parse_tuple(&toks[2..])?,
            });
        }
        let mut tuples_f = BTreeMap::new();
        for l in get("T78-tuples")? {
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.len() != 6 {
                return Err(bad(format!("bad tuple row {l:?}")));
            }
            tuples_f.insert(num(toks[0])?, parse_tuple(&toks[1..])?);
        }

        let mut aut = BTreeMap::new();
        for l in get("AUT")? {
            let mut toks = l.split_whitespace();
            let order = num(toks.next().unwrap_or(""))?;
            aut.insert(order, parse_refs(toks)?);
        }
        let transpose_new = parse_refs(get("S")?.iter().flat_map(|l| l.split_whitespace()))?;
        let ch = get("CH")?;
        let cht = get("CHT")?;
        let transpose_p36 = cht
            .iter()
            .find_map(|l| l.strip_prefix("equiv "))
            .and_then(|rest| rest.strip_suffix(" P36"))
            .ok_or_else(|| bad("CHT section lacks the symmetry code equivalence"))
            .and_then(parse_ref)?;
        let chains = get("CHAINS")?
            .iter()
            .map(|l| parse_refs(l.split_whitespace()))
            .collect::<Result<_>>()?;
        let mut counts = BTreeMap::new();
        for l in get("COUNTS")? {
            let (k, v) = l.split_once(' ').ok_or_else(|| bad(format!("bad count {l:?}")))?;
            counts.insert(k.to_string(), num(v)?);
        }

        let bundle = Self {
            bdc,
            four_nega,
            p36,
            a9_t: a9_map(get("T1-a9")?)?,
            a9_d: a9_map(get("T3-a9")?)?,
            a9_f: a9_map(get("T5-a9")?)?,
            tuples_source,
            tuples_f,
            aut,
            transpose_new,
            dim16: listed(ch, "dim", "16")?,
            d12: listed(ch, "d", "12")?,
            transpose_d12: listed(cht, "d", "12")?,
            transpose_p36,
            chains,
            counts,
        };
        bundle.check_shape()?;
        Ok(bundle)
    }

    /// Row counts and index coverage that the transcription must satisfy.
    fn check_shape(&self) -> Result<()> {
        let expect_seq = |what: &str, got: Vec<usize>, n: usize| {
            if got != (1..=n).collect::<Vec<_>>() {
                return Err(bad(format!("{what} does not list indices 1..={n} in order")));
            }
            Ok(())
        };
        expect_seq("T2-bdc", self.bdc.iter().map(|r| r.0).collect(), 12)?;
        expect_seq("T4-4nc", self.four_nega.iter().map(|r| r.0).collect(), 260)?;
        expect_seq("T78-tuples", self.tuples_f.keys().copied().collect(), 260)?;
        for (what, m, n) in [("T3-a9", &self.a9_d, 12), ("T5-a9", &self.a9_f, 260)] {
            let mut all: Vec<usize> = m.values().flatten().copied().collect();
            all.sort_unstable();
            expect_seq(what, all, n)?;
        }
        let reps: usize = self.aut.values().map(Vec::len).sum();
        if Some(&reps) != self.counts.get("prop2") {
            return Err(bad(format!("AUT lists {reps} classes")));
        }
        Ok(())
    }

    pub fn count(&self, key: &str) -> Option<usize> {
        self.counts.get(key).copied()
    }

    pub fn bdc_spec(&self, i: usize) -> Result<CodeSpec> {
        let (_, r) = self
            .bdc
            .iter()
            .find(|(j, _)| *j == i)
            .ok_or_else(|| Error::Param(format!("no bordered code D{i} (1..=12)")))?;
        Ok(CodeSpec {
            family: Family::Bdc,
            n: 36,
            r_a: r.clone(),
            r_b: None,
            label: format!("D36-{i}"),
        })
    }

    pub fn four_nega_spec(&self, i: usize) -> Result<CodeSpec> {
        let (_, a, b) = self
            .four_nega
            .iter()
            .find(|(j, _, _)| *j == i)
            .ok_or_else(|| Error::Param(format!("no four-negacirculant code F{i} (1..=260)")))?;
        Ok(CodeSpec {
            family: Family::FourNega,
            n: 36,
            r_a: a.clone(),
            r_b: Some(b.clone()),
            label: format!("F36-{i}"),
        })
    }

    pub fn p36_spec(&self) -> CodeSpec {
        CodeSpec {
            family: Family::Bdc,
            n: 36,
            r_a: self.p36.clone(),
            r_b: None,
            label: "P36".into(),
        }
    }

    /// Expected `|Aut|` of every matrix named in the tables, chain members
    /// inheriting the value of their class representative.
    pub fn aut_by_matrix(&self) -> BTreeMap<MatrixRef, u64> {
        let mut m: BTreeMap<MatrixRef, u64> = BTreeMap::new();
        for (&order, refs) in &self.aut {
            for &r in refs {
                m.insert(r, order);
            }
        }
        for chain in &self.chains {
            if let Some(order) = chain.iter().find_map(|r| m.get(r).copied()) {
                for &r in chain {
                    m.insert(r, order);
                }
            }
        }
        m
    }

    /// The chain containing `r`, if any.
    pub fn chain_of(&self, r: MatrixRef) -> Option<&[MatrixRef]> {
        self.chains.iter().find(|c| c.contains(&r)).map(Vec::as_slice)
    }

    pub fn a9_f_of(&self, i: usize) -> Option<u64> {
        lookup(&self.a9_f, i)
    }

    pub fn a9_d_of(&self, i: usize) -> Option<u64> {
        lookup(&self.a9_d, i)
    }

    pub fn a9_t_of(&self, i: usize) -> Option<u64> {
        lookup(&self.a9_t, i)
    }
}

fn lookup(m: &BTreeMap<u64, Vec<usize>>, i: usize) -> Option<u64> {
    m.iter().find(|(_, v)| v.contains(&i)).map(|(a, _)| *a)
}

/// The bundled code specs of one parameter table.
pub fn load_bundled_params(table: ParamTable) -> Result<Vec<CodeSpec>> {
    let b = Bundle::load()?;
    match table {
        ParamTable::Bdc => b.bdc.iter().map(|(i, _)| b.bdc_spec(*i)).collect(),
        ParamTable::FourNega => b.four_nega.iter().map(|(i, _, _)| b.four_nega_spec(*i)).collect(),
        ParamTable::P36 => Ok(vec![b.p36_spec()]),
    }
}
