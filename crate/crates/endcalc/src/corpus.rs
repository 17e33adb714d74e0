//! Batch classification of a directory of `.surf` files against optional
//! expectations.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use endcalc_core::{classify, ClassificationReport, FluxRank};
use serde::Deserialize;

use crate::dsl;

/// Expected outcome for one corpus file. Absent fields are not checked.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub verdict: Option<String>,
    /// Prefix of the rule tag, e.g. `"R2"`.
    pub rule: Option<String>,
    pub m: Option<u64>,
    pub c: Option<u64>,
    pub m_iso: Option<u64>,
    pub lower: Option<u64>,
    pub upper: Option<u64>,
    pub flux_rank: Option<u64>,
    /// `[free_rank, torsion2]` of the witness target.
    pub witness: Option<[usize; 2]>,
    /// Substring of the expected parse or validation error.
    pub error: Option<String>,
}

pub type Expectations = BTreeMap<String, Expectation>;

pub fn load_expectations(path: &Path) -> Result<Expectations, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

#[derive(Debug)]
pub enum Outcome {
    Classified(Box<ClassificationReport>),
    Failed(String),
}

#[derive(Debug)]
pub struct Entry {
    pub name: String,
    pub outcome: Outcome,
    pub mismatches: Vec<String>,
    pub error_expected: bool,
}

#[derive(Debug, Default)]
pub struct CorpusRun {
    pub entries: Vec<Entry>,
}

impl CorpusRun {
    pub fn mismatches(&self) -> usize {
        self.entries.iter().map(|e| e.mismatches.len()).sum()
    }

    /// Files that failed to parse or validate without an expectation
    /// saying so.
    pub fn unexpected_failures(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| matches!(e.outcome, Outcome::Failed(_)) && !e.error_expected)
            .count()
    }

    pub fn exit_code(&self) -> i32 {
        if self.mismatches() > 0 {
            1
        } else if self.unexpected_failures() > 0 {
            2
        } else {
            0
        }
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<24} {:<8} {:<4} {:>3} {:>3} {:>5} {:>5} {:>5}",
            "name", "verdict", "rule", "M", "C", "M_iso", "lower", "upper"
        );
        for e in &self.entries {
            match &e.outcome {
                Outcome::Classified(r) => {
                    let inv = &r.invariants;
                    let _ = writeln!(
                        out,
                        "{:<24} {:<8} {:<4} {:>3} {:>3} {:>5} {:>5} {:>5}",
                        e.name,
                        r.tng.verdict.to_string(),
                        &r.tng.rule.tag()[..2],
                        inv.m,
                        inv.c,
                        inv.m_iso,
                        r.bounds.lower,
                        r.bounds.upper
                    );
                }
                Outcome::Failed(msg) => {
                    let _ = writeln!(out, "{:<24} error    {msg}", e.name);
                }
            }
            for m in &e.mismatches {
                let _ = writeln!(out, "  MISMATCH {m}");
            }
        }
        out
    }
}

fn classify_text(text: &str) -> Outcome {
    let spec = match dsl::parse(text) {
        Ok(spec) => spec,
        Err(e) => return Outcome::Failed(e.to_string()),
    };
    match classify(&spec) {
        Ok(r) => Outcome::Classified(Box::new(r)),
        Err(diags) => Outcome::Failed(
            diags
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join("; "),
        ),
    }
}

fn compare(outcome: &Outcome, exp: &Expectation) -> Vec<String> {
    let mut out = Vec::new();
    let r = match (outcome, &exp.error) {
        (Outcome::Failed(msg), Some(want)) => {
            if !msg.contains(want.as_str()) {
                out.push(format!("error `{msg}` lacks `{want}`"));
            }
            return out;
        }
        (Outcome::Failed(msg), None) => {
            if exp.verdict.is_some() || exp.rule.is_some() {
                out.push(format!("unexpected error: {msg}"));
            }
            return out;
        }
        (Outcome::Classified(_), Some(want)) => {
            out.push(format!("expected an error containing `{want}`"));
            return out;
        }
        (Outcome::Classified(r), None) => r,
    };
    if let Some(want) = &exp.rule {
        if !r.tng.rule.tag().starts_with(want.as_str()) {
            out.push(format!("rule: got {}, expected {want}", r.tng.rule.tag()));
        }
    }
    let mut check = |field: &str, got: String, want: Option<String>| {
        if let Some(want) = want {
            if got != want {
                out.push(format!("{field}: got {got}, expected {want}"));
            }
        }
    };
    check("verdict", r.tng.verdict.to_string(), exp.verdict.clone());
    let inv = &r.invariants;
    check("M", inv.m.to_string(), exp.m.map(|v| v.to_string()));
    check("C", inv.c.to_string(), exp.c.map(|v| v.to_string()));
    check(
        "M_iso",
        inv.m_iso.to_string(),
        exp.m_iso.map(|v| v.to_string()),
    );
    check(
        "lower",
        r.bounds.lower.to_string(),
        exp.lower.map(|v| v.to_string()),
    );
    check(
        "upper",
        r.bounds.upper.to_string(),
        exp.upper.map(|v| v.to_string()),
    );
    let flux = match r.bounds.flux_rank {
        FluxRank::Rank(n) => n.to_string(),
        FluxRank::NotApplicable => "NOT_APPLICABLE".into(),
    };
    check("flux_rank", flux, exp.flux_rank.map(|v| v.to_string()));
    let target = r
        .tng
        .witness
        .as_ref()
        .map(|w| format!("{:?}", [w.target.free_rank, w.target.torsion2]))
        .unwrap_or_else(|| "none".into());
    check("witness", target, exp.witness.map(|v| format!("{v:?}")));
    out
}

fn surf_files(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "surf"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn run_corpus(dir: &Path, expectations: &Expectations) -> Result<CorpusRun, String> {
    let mut run = CorpusRun::default();
    for path in surf_files(dir)? {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        let outcome = classify_text(&text);
        let exp = expectations.get(&name);
        let mismatches = exp.map(|e| compare(&outcome, e)).unwrap_or_default();
        run.entries.push(Entry {
            name,
            outcome,
            mismatches,
            error_expected: exp.is_some_and(|e| e.error.is_some()),
        });
    }
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_errors_are_not_failures() {
        let outcome = classify_text("root omega^omega * 2 + 1\n");
        let exp = Expectation {
            error: Some("finite rank".into()),
            ..Default::default()
        };
        assert!(compare(&outcome, &exp).is_empty());
    }

    #[test]
    fn verdict_mismatch_is_reported() {
        let outcome = classify_text("root omega + 1\n");
        let exp = Expectation {
            verdict: Some("NO".into()),
            ..Default::default()
        };
        assert_eq!(compare(&outcome, &exp).len(), 1);
    }

    #[test]
    fn unknown_expectation_fields_are_rejected() {
        assert!(toml::from_str::<Expectations>("[a]\nverdcit = \"YES\"\n").is_err());
    }
}
