//! Append-only JSON-lines store of `N_f(k)` results.
//!
//! Appends hold an exclusive advisory lock on the file, reads a shared one.
//! Lines that do not parse, or parse into an impossible record, are skipped
//! with a warning on stderr.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use linform::{Certificate, ExtremalResult, KSet, LinearForm};
use serde::{Deserialize, Serialize};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub coeffs: LinearForm,
    pub k: usize,
    pub diameter: i64,
    /// Largest bootstrapped ladder rung; part of the key because it can
    /// change the certified lower bound.
    pub ladder: usize,
    pub lower: u64,
    pub certificate: Certificate,
    pub best: u64,
    pub exact: bool,
    pub witnesses: Vec<KSet>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub witness_overflow: bool,
    pub nodes: u64,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub tool_version: String,
}

impl CacheRecord {
    pub fn new(r: &ExtremalResult, ladder: usize) -> Self {
        CacheRecord {
            coeffs: r.form.clone(),
            k: r.k,
            diameter: r.diameter,
            ladder,
            lower: r.lower,
            certificate: r.certificate.clone(),
            best: r.best,
            exact: r.exact,
            witnesses: r.witnesses.clone(),
            witness_overflow: r.witness_overflow,
            nodes: r.nodes,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn matches(&self, f: &LinearForm, k: usize, diameter: i64, ladder: usize) -> bool {
        self.coeffs.coeffs() == f.coeffs()
            && self.k == k
            && self.diameter == diameter
            && self.ladder == ladder
    }

    pub fn to_result(&self) -> ExtremalResult {
        ExtremalResult {
            form: self.coeffs.clone(),
            k: self.k,
            diameter: self.diameter,
            lower: self.lower,
            certificate: self.certificate.clone(),
            best: self.best,
            exact: self.exact,
            witnesses: self.witnesses.clone(),
            witness_overflow: self.witness_overflow,
            nodes: self.nodes,
        }
    }

    fn check(&self) -> Result<(), String> {
        if self.lower > self.best {
            return Err(format!("lower {} exceeds best {}", self.lower, self.best));
        }
        if self.exact != (self.lower == self.best) {
            return Err("exact flag disagrees with the bracket".into());
        }
        if self.certificate.bound(self.k) != self.lower {
            return Err("certificate does not reproduce the lower bound".into());
        }
        if self.witnesses.iter().any(|w| w.k() != self.k) {
            return Err("witness of the wrong size".into());
        }
        Ok(())
    }
}

pub struct Cache {
    path: PathBuf,
}

impl Cache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Cache { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Every valid record in file order. A missing file is an empty cache.
    pub fn records(&self) -> Result<Vec<CacheRecord>> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e).with_context(|| format!("opening {}", self.path.display())),
        };
        file.lock_shared()
            .with_context(|| format!("locking {}", self.path.display()))?;
        let mut out = Vec::new();
        for (i, line) in BufReader::new(&file).lines().enumerate() {
            let line = match line {
                Ok(l) => l,
                Err(e) => {
                    eprintln!(
                        "warning: {}:{}: unreadable line skipped: {e}",
                        self.path.display(),
                        i + 1
                    );
                    continue;
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CacheRecord>(&line) {
                Ok(r) => match r.check() {
                    Ok(()) => out.push(r),
                    Err(e) => {
                        eprintln!(
                            "warning: {}:{}: inconsistent record skipped: {e}",
                            self.path.display(),
                            i + 1
                        )
                    }
                },
                Err(e) => eprintln!(
                    "warning: {}:{}: corrupt line skipped: {e}",
                    self.path.display(),
                    i + 1
                ),
            }
        }
        Ok(out)
    }

    pub fn lookup(
        &self,
        f: &LinearForm,
        k: usize,
        diameter: i64,
        ladder: usize,
    ) -> Result<Option<CacheRecord>> {
        Ok(self
            .records()?
            .into_iter()
            .find(|r| r.matches(f, k, diameter, ladder)))
    }

    pub fn append(&self, record: &CacheRecord) -> Result<()> {
        let mut line = serde_json::to_string(record)?;
        line.push('\n');
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("opening {}", self.path.display()))?;
        file.lock()
            .with_context(|| format!("locking {}", self.path.display()))?;
        file.write_all(line.as_bytes())
            .with_context(|| format!("appending to {}", self.path.display()))?;
        file.flush()?;
        Ok(())
    }
}
