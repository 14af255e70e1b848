//! Download of the published list of matrices, with an on-disk cache.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use log::{info, warn};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::hadamard::{parse_hadamard_file, HadamardMatrix};

pub const DEFAULT_MATRIX_URL: &str = "https://www.math.is.tohoku.ac.jp/~mharada/F3-36/Hmat-F.txt";

/// Environment variable overriding [`DEFAULT_MATRIX_URL`].
pub const MATRIX_URL_ENV: &str = "SDCODES_HMAT_URL";

/// Number of matrices the published list should hold.
pub const PUBLISHED_COUNT: usize = 89;

#[derive(Debug)]
pub struct FetchOutcome {
    pub url: String,
    pub matrices: Vec<HadamardMatrix>,
    /// `(line, message)` for every rejected block.
    pub errors: Vec<(usize, String)>,
    pub from_cache: bool,
    /// SHA-256 of the raw file.
    pub sha256: String,
}

pub fn matrix_url() -> String {
    std::env::var(MATRIX_URL_ENV).unwrap_or_else(|_| DEFAULT_MATRIX_URL.to_string())
}

fn sha_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn cache_paths(dir: &Path, url: &str) -> (PathBuf, PathBuf) {
    let stem = &sha_hex(url.as_bytes())[..16];
    (dir.join(format!("{stem}.txt")), dir.join(format!("{stem}.sha256")))
}

/// Cached body if present and matching its checksum file.
fn read_cache(dir: &Path, url: &str) -> Option<String> {
    let (body, sum) = cache_paths(dir, url);
    let text = fs::read_to_string(&body).ok()?;
    let expected = fs::read_to_string(&sum).ok()?;
    if sha_hex(text.as_bytes()) == expected.trim() {
        Some(text)
    } else {
        warn!("cache entry {} fails its checksum, refetching", body.display());
        None
    }
}

fn download(url: &str) -> Result<String> {
    if let Some(path) = url.strip_prefix("file://") {
        return fs::read_to_string(path).map_err(|e| Error::Network(format!("{url}: {e}")));
    }
    let resp = ureq::get(url)
        .timeout(Duration::from_secs(60))
        .call()
        .map_err(|e| Error::Network(format!("{url}: {e}")))?;
    resp.into_string()
        .map_err(|e| Error::Network(format!("{url}: reading body: {e}")))
}

/// Fetches and parses the matrix list at `url` (default: [`matrix_url`]).
/// With a cache directory, a valid cached copy is used without touching the
/// network and a fresh download is stored with its checksum.
pub fn fetch_published_matrices(url: Option<&str>, cache_dir: Option<&Path>) -> Result<FetchOutcome> {
    let url = url.map_or_else(matrix_url, str::to_string);
    let cached = cache_dir.and_then(|d| read_cache(d, &url));
    let from_cache = cached.is_some();
    let text = match cached {
        Some(t) => t,
        None => {
            let t = download(&url)?;
            if let Some(dir) = cache_dir {
                fs::create_dir_all(dir)?;
                let (body, sum) = cache_paths(dir, &url);
                fs::write(&body, &t)?;
                fs::write(&sum, format!("{}\n", sha_hex(t.as_bytes())))?;
                info!("cached {url} at {}", body.display());
            }
            t
        }
    };
    // the parser rejects blocks that are not orthogonal
    let parsed = parse_hadamard_file(&text);
    Ok(FetchOutcome {
        url,
        matrices: parsed.matrices,
        errors: parsed.errors,
        from_cache,
        sha256: sha_hex(text.as_bytes()),
    })
}
