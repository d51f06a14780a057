//! Corpus entries: a system (or canonical trinomial pair) with the outcome
//! one pipeline must reproduce.

use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use serde::{Deserialize, Serialize};

use fewnomial::curves::count_components;
use fewnomial::num::max_norm_dist;
use fewnomial::reduce::{count_roots, TrinomialCanonical};
use fewnomial::system::SystemDoc;
use fewnomial::{Error, FewnomialSystem};

use crate::Options;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanonicalDoc {
    /// (A, B).
    pub coeffs: [f64; 2],
    /// (a, b, c, d).
    pub exponents: [f64; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Expected {
    /// Positive roots of a square system.
    Count {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        exact: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        at_most: Option<usize>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        roots: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_residual: Option<f64>,
    },
    /// Traced components of one member.
    Components {
        compact: usize,
        non_compact: usize,
        #[serde(default)]
        member: usize,
    },
    /// Points that must solve the system.
    Residual {
        points: Vec<Vec<f64>>,
        max_residual: f64,
    },
    /// Roots of a canonical trinomial pair in an interval.
    Interval {
        lo: f64,
        hi: f64,
        roots: Vec<f64>,
        tol: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub name: String,
    pub anchor: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<CanonicalDoc>,
    pub expected: Expected,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntryResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CorpusEntry {
    fn system(&self) -> anyhow::Result<FewnomialSystem> {
        let doc = self
            .system
            .clone()
            .ok_or_else(|| Error::Validation(format!("{}: entry has no system", self.name)))?;
        Ok(doc.into_system()?)
    }

    /// Run the entry's pipeline; Ok((pass, detail)).
    pub fn check(&self, opts: &Options) -> anyhow::Result<(bool, String)> {
        match &self.expected {
            Expected::Count {
                exact,
                at_most,
                roots,
                tol,
                max_residual,
            } => {
                let r = count_roots(&self.system()?)?;
                let n = r.count();
                let tol = tol.unwrap_or(opts.tol);
                let mut fails = Vec::new();
                if exact.is_some_and(|e| e != n) {
                    fails.push(format!("expected {} roots", exact.unwrap()));
                }
                if at_most.is_some_and(|m| n > m) {
                    fails.push(format!("expected at most {} roots", at_most.unwrap()));
                }
                for want in roots {
                    if !r.roots.iter().any(|p| max_norm_dist(&p.x, want) <= tol) {
                        fails.push(format!("missing root {want:?}"));
                    }
                }
                let worst = r
                    .roots
                    .iter()
                    .flat_map(|p| p.residuals.iter().cloned())
                    .fold(0.0, f64::max);
                if max_residual.is_some_and(|m| worst >= m) {
                    fails.push(format!("residual {worst:.2e}"));
                }
                Ok((
                    fails.is_empty(),
                    format!("{n} roots via {:?}; {}", r.method, summary(&fails)),
                ))
            }
            Expected::Components {
                compact,
                non_compact,
                member,
            } => {
                let f = self.system()?;
                let g = f
                    .members()
                    .get(*member)
                    .ok_or_else(|| Error::Validation(format!("no member {member}")))?;
                let r = count_components(g, opts.window, opts.grid)?;
                let pass = r.compact == *compact && r.non_compact == *non_compact;
                Ok((
                    pass,
                    format!("{} compact, {} non-compact", r.compact, r.non_compact),
                ))
            }
            Expected::Residual {
                points,
                max_residual,
            } => {
                let f = self.system()?;
                let mut worst: f64 = 0.0;
                for p in points {
                    worst = f.evaluate(p)?.iter().fold(worst, |w, v| w.max(v.abs()));
                }
                Ok((
                    worst < *max_residual,
                    format!("{} points, worst residual {worst:.2e}", points.len()),
                ))
            }
            Expected::Interval { lo, hi, roots, tol } => {
                let c = self.canonical.as_ref().ok_or_else(|| {
                    Error::Validation(format!("{}: entry has no canonical pair", self.name))
                })?;
                let tc = TrinomialCanonical::new(c.coeffs[0], c.coeffs[1], c.exponents)?;
                let found: Vec<f64> = tc
                    .isolate()?
                    .values()
                    .into_iter()
                    .filter(|t| t > lo && t < hi)
                    .collect();
                let mut fails = Vec::new();
                if found.len() != roots.len() {
                    fails.push(format!("expected {} roots", roots.len()));
                }
                for want in roots {
                    if !found.iter().any(|t| (t - want).abs() <= *tol) {
                        fails.push(format!("missing root {want}"));
                    }
                }
                Ok((
                    fails.is_empty(),
                    format!("{} roots; {}", found.len(), summary(&fails)),
                ))
            }
        }
    }
}

fn summary(fails: &[String]) -> String {
    if fails.is_empty() {
        "as expected".into()
    } else {
        fails.join(", ")
    }
}

pub fn load_entry(path: &Path) -> anyhow::Result<CorpusEntry> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn load_dir(dir: &Path) -> anyhow::Result<Vec<CorpusEntry>> {
    let mut paths: Vec<_> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| load_entry(p)).collect()
}

/// Verify every entry concurrently; results keep the sorted file order.
pub fn verify_dir(dir: &Path, opts: &Options) -> anyhow::Result<Vec<EntryResult>> {
    let entries = load_dir(dir)?;
    Ok(std::thread::scope(|s| {
        let handles: Vec<_> = entries
            .iter()
            .map(|e| {
                s.spawn(move || {
                    let start = Instant::now();
                    let (pass, detail) = match e.check(opts) {
                        Ok(r) => r,
                        Err(err) => (false, format!("error: {err:#}")),
                    };
                    EntryResult {
                        name: e.name.clone(),
                        pass,
                        detail,
                        seconds: start.elapsed().as_secs_f64(),
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("corpus worker panicked"))
            .collect()
    }))
}
