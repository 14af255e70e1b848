//! One sweep per code, shared by every table that needs it.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::canonical::{cert_sweep_options, code_cert_from_sweep, CanonCert, CodeCertOptions};
use crate::code::{CodeSpec, TernaryCode};
use crate::error::{Error, Result};
use crate::hadamard::{search_words, SearchOutcome};
use crate::weight::{sweep, Sweep, SweepOptions};

/// Enumerator, small weight classes and the full-weight search of a code.
#[derive(Debug)]
pub struct CodeAnalysis {
    pub code: TernaryCode,
    pub self_dual: bool,
    pub sweep: Sweep,
    pub search: SearchOutcome,
}

impl CodeAnalysis {
    pub fn run(code: TernaryCode, budget: u128) -> Result<Self> {
        let opts = CodeCertOptions {
            budget,
            ..CodeCertOptions::default()
        };
        let self_dual = code.is_self_dual();
        let mut s = sweep(&code, &cert_sweep_options(&opts)).map_err(|e| e.at("enumerate"))?;
        let n = code.n();
        if s.truncated.contains(&n) {
            let full = sweep(&code, &SweepOptions::collecting(&[n]).with_budget(budget))
                .map_err(|e| e.at("enumerate"))?;
            s.words.insert(n, full.words.into_values().next().unwrap_or_default());
        }
        let search = search_words(s.words_of_weight(n)).map_err(|e| e.at("search"))?;
        Ok(Self {
            code,
            self_dual,
            sweep: s,
            search,
        })
    }

    pub fn a(&self, w: usize) -> u64 {
        self.sweep.enumerator.get(w)
    }

    pub fn code_cert(&self, budget: u128) -> Result<CanonCert> {
        let opts = CodeCertOptions {
            budget,
            ..CodeCertOptions::default()
        };
        code_cert_from_sweep(&self.code, &self.sweep, &opts).map_err(|e| e.at("code certificate"))
    }
}

/// Analyses keyed by code spec, computed at most once each.
#[derive(Default)]
pub struct AnalysisCache {
    map: Mutex<HashMap<String, Arc<CodeAnalysis>>>,
}

impl AnalysisCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, spec: &CodeSpec, budget: u128) -> Result<Arc<CodeAnalysis>> {
        let key = spec.to_string();
        if let Some(a) = self.lock()?.get(&key) {
            return Ok(Arc::clone(a));
        }
        let code = spec.build().map_err(|e| e.at("construct"))?;
        let a = Arc::new(CodeAnalysis::run(code, budget)?);
        self.lock()?.insert(key, Arc::clone(&a));
        Ok(a)
    }

    /// Analysis of a code that has no spec, keyed by `key`.
    pub fn get_code(&self, key: &str, code: &TernaryCode, budget: u128) -> Result<Arc<CodeAnalysis>> {
        if let Some(a) = self.lock()?.get(key) {
            return Ok(Arc::clone(a));
        }
        let a = Arc::new(CodeAnalysis::run(code.clone(), budget)?);
        self.lock()?.insert(key.to_string(), Arc::clone(&a));
        Ok(a)
    }

    fn lock(&self) -> Result<std::sync::MutexGuard<'_, HashMap<String, Arc<CodeAnalysis>>>> {
        self.map
            .lock()
            .map_err(|_| Error::Internal("analysis cache poisoned".into()))
    }
}
