//! Construct, verify, enumerate, search, certify, persist.

use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

use super::analysis::CodeAnalysis;
use super::store::{CatalogRecord, CatalogStore, ClassRecord, MatrixRecord};
use super::tables::Bundle;
use crate::code::CodeSpec;
use crate::error::{Error, Result};
use crate::weight::classify_extremality;

/// Reads a code spec line, or one of the shorthands `P36`, `D<i>` /
/// `D36-<i>` and `F<i>` / `F36-<i>` for the bundled codes.
pub fn resolve_spec(text: &str) -> Result<CodeSpec> {
    let t = text.trim();
    if t.contains('=') {
        return t.parse();
    }
    let index = |s: &str| {
        s.trim_start_matches("36-")
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("unrecognized code {t:?}")))
    };
    let b = Bundle::load()?;
    if t.eq_ignore_ascii_case("P36") {
        Ok(b.p36_spec())
    } else if let Some(rest) = t.strip_prefix(['D', 'd']) {
        b.bdc_spec(index(rest)?)
    } else if let Some(rest) = t.strip_prefix(['F', 'f']) {
        b.four_nega_spec(index(rest)?)
    } else {
        Err(Error::Parse(format!("unrecognized code {t:?}")))
    }
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

/// Record of an analysed code.
pub fn record_of(spec: &CodeSpec, a: &CodeAnalysis, code_cert: Option<String>) -> Result<CatalogRecord> {
    let e = &a.sweep.enumerator;
    let min_weight = e.min_weight();
    let extremality = match (a.self_dual, min_weight) {
        (true, Some(d)) => Some(classify_extremality(a.code.n(), d)?.kind),
        _ => None,
    };
    let s = &a.search;
    Ok(CatalogRecord {
        label: spec.label.clone(),
        family: spec.family,
        spec: spec.to_string(),
        n: a.code.n(),
        k: a.code.k(),
        self_dual: a.self_dual,
        min_weight,
        extremality,
        enumerator: e.support().map(|(w, c)| format!("{w}:{c}")).collect::<Vec<_>>().join(" "),
        enumerator_sha256: hex::encode(Sha256::digest(e.to_csv().as_bytes())),
        tuple: Some(s.tuple),
        matrices: s
            .matrices
            .iter()
            .map(|m| MatrixRecord {
                parity: m.parity,
                class: m.class,
            })
            .collect(),
        classes: s
            .classes
            .iter()
            .map(|c| ClassRecord {
                aut_order: c.aut_order().to_string(),
                cert: c.cert.digest(),
                members: c.members.len(),
            })
            .collect(),
        code_cert,
        created_at: now(),
    })
}

/// Runs every stage for one code spec and, given a store, persists the
/// record. Errors carry the stage they came from; nothing is persisted
/// unless every stage succeeds.
pub fn full_pipeline(spec: &str, budget: u128, store: Option<&mut CatalogStore>) -> Result<CatalogRecord> {
    let spec = resolve_spec(spec).map_err(|e| e.at("parse"))?;
    let code = spec.build().map_err(|e| e.at("construct"))?;
    if !code.is_self_dual() {
        return Err(Error::Param(format!("{} is not self-dual", spec.label)).at("verify"));
    }
    let a = CodeAnalysis::run(code, budget)?;
    let cert = a.code_cert(budget)?;
    let rec = record_of(&spec, &a, Some(cert.digest()))?;
    if let Some(store) = store {
        store.insert(rec.clone()).map_err(|e| e.at("persist"))?;
    }
    Ok(rec)
}
