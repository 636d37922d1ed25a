//! On-disk report cache. Entries are JSON reports named by a SHA-256 of the
//! exact bit patterns of the inputs; writes go to a temporary file that is
//! then renamed into place, so readers never see a partial entry.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use landau_core::eigensolve::SpectralForm;
use landau_core::Params;
use sha2::{Digest, Sha256};

use crate::config::Op;
use crate::error::{CliError, Result};
use crate::report::JsonReport;

pub const DEFAULT_DIR: &str = ".landau-cache";

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

/// Content hash naming a cache entry.
pub fn key(op: Op, params: &Params, form: SpectralForm) -> String {
    let canonical = format!(
        "v1;op={op};a={:016x};sigma={:016x};n={};N={};form={form}",
        params.a.get().to_bits(),
        params.sigma.to_bits(),
        params.n,
        params.nodes,
    );
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `--cache PATH` if given, else `.landau-cache` under the working directory.
    pub fn at_or_default(dir: Option<PathBuf>) -> Result<Self> {
        match dir {
            Some(d) => Ok(Self::new(d)),
            None => {
                let cwd = std::env::current_dir().map_err(CliError::io("."))?;
                Ok(Self::new(cwd.join(DEFAULT_DIR)))
            }
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn entry_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// `None` when absent. An unreadable entry also counts as a miss and is
    /// overwritten by the next store.
    pub fn load(&self, key: &str) -> Option<JsonReport> {
        let text = fs::read_to_string(self.entry_path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn store(&self, key: &str, report: &JsonReport) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(CliError::io(&self.dir))?;
        let unique = TEMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = self.dir.join(format!(".{key}.{}.{unique}.tmp", std::process::id()));
        fs::write(&tmp, report.to_json()).map_err(CliError::io(&tmp))?;
        let dest = self.entry_path(key);
        fs::rename(&tmp, &dest).map_err(|e| {
            let _ = fs::remove_file(&tmp);
            CliError::io(&dest)(e)
        })
    }

    /// Cached report, computing and storing it on a miss. The flag is true
    /// when the report came from disk.
    pub fn get_or_compute(&self, op: Op, params: &Params, form: SpectralForm) -> Result<(JsonReport, bool)> {
        let k = key(op, params, form);
        if let Some(r) = self.load(&k) {
            return Ok((r, true));
        }
        let r = JsonReport::compute(op, params, form)?;
        self.store(&k, &r)?;
        Ok((r, false))
    }
}

/// Through the cache when one is configured, else a fresh computation.
pub fn report(cache: Option<&Cache>, op: Op, params: &Params, form: SpectralForm) -> Result<(JsonReport, bool)> {
    match cache {
        Some(c) => c.get_or_compute(op, params, form),
        None => Ok((JsonReport::compute(op, params, form)?, false)),
    }
}
