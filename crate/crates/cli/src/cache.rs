//! Content-addressed disk cache for serialized tables.
//!
//! A cache key is the SHA-256 of a canonical field string covering the schema
//! version, the command inputs, and the generator scheme; the payload is the
//! frozen JSON document. Writes go through a temp file and an atomic rename.
//! Corrupt or mismatched entries are discarded and recomputed; IO failures
//! degrade to recompute-with-warning and never change results.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub struct Cache {
    dir: Option<PathBuf>,
    audit: bool,
}

/// Why a cache lookup could not produce a payload.
pub enum CacheFailure {
    /// The underlying computation failed; the cache is not at fault.
    Compute(bp_homology::Error),
    /// Audit mode recomputed the artifact and the bytes differ.
    AuditMismatch(PathBuf),
}

impl Cache {
    pub fn new(dir: Option<PathBuf>, audit: bool) -> Cache {
        Cache { dir, audit }
    }

    pub fn disabled() -> Cache {
        Cache { dir: None, audit: false }
    }

    /// Content key for a canonical field list.
    pub fn key(fields: &[(&str, String)]) -> String {
        let canonical: Vec<String> = fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let digest = Sha256::digest(canonical.join(";").as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Look the payload up by its field list, or compute and store it.
    ///
    /// `validate` must reject any payload that does not parse back into the
    /// expected artifact. In audit mode a hit is recomputed anyway and the
    /// stored bytes must match the fresh ones exactly.
    pub fn get_or_compute(
        &self,
        fields: &[(&str, String)],
        validate: &dyn Fn(&str) -> bool,
        compute: &mut dyn FnMut() -> Result<String, bp_homology::Error>,
    ) -> Result<String, CacheFailure> {
        let Some(dir) = &self.dir else {
            return compute().map_err(CacheFailure::Compute);
        };
        let path = dir.join(format!("{}.json", Cache::key(fields)));
        if let Ok(stored) = fs::read_to_string(&path) {
            if validate(&stored) {
                if self.audit {
                    let fresh = compute().map_err(CacheFailure::Compute)?;
                    if fresh != stored {
                        return Err(CacheFailure::AuditMismatch(path));
                    }
                    eprintln!("audit: cached bytes match the recomputation");
                }
                return Ok(stored);
            }
            eprintln!("warning: discarding corrupt cache entry at {}", path.display());
        }
        let fresh = compute().map_err(CacheFailure::Compute)?;
        store(dir, &path, &fresh);
        Ok(fresh)
    }
}

/// Best-effort atomic write; failures cost recomputation later, nothing else.
fn store(dir: &Path, path: &Path, payload: &str) {
    if let Err(err) = fs::create_dir_all(dir) {
        eprintln!("warning: cannot create cache directory {}: {err}", dir.display());
        return;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    if let Err(err) = fs::write(&tmp, payload) {
        eprintln!("warning: cannot write cache entry {}: {err}", tmp.display());
        return;
    }
    if let Err(err) = fs::rename(&tmp, path) {
        eprintln!("warning: cannot commit cache entry {}: {err}", path.display());
        let _ = fs::remove_file(&tmp);
    }
}
