use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use dissect_core::extremal::SolveResult;

/// How a run compares with what was expected; decides the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Mismatch,
    BudgetExhausted,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Mismatch => 2,
            Outcome::BudgetExhausted => 3,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    /// Arguments after the program name.
    pub command: Vec<String>,
    /// SHA-256 of every input file or generated coordinatization.
    pub inputs: BTreeMap<String, String>,
    pub outcome: Outcome,
    pub outputs: Value,
    /// Wall-clock milliseconds; the only field that varies between identical runs.
    pub timing_ms: u64,
}

impl RunReport {
    pub fn new(argv: &[String]) -> Self {
        RunReport {
            command: argv.iter().skip(1).cloned().collect(),
            inputs: BTreeMap::new(),
            outcome: Outcome::Pass,
            outputs: Value::Null,
            timing_ms: 0,
        }
    }

    pub fn input(&mut self, name: impl Into<String>, bytes: &[u8]) {
        self.inputs.insert(name.into(), sha256(bytes));
    }

    /// Writes the report to `out`, or prints it.
    pub fn emit(&self, out: Option<&Path>) -> Result<()> {
        let text = serde_json::to_string_pretty(self)? + "\n";
        match out {
            Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

pub fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Solver result without timing, so reports are reproducible.
pub fn solve_json(r: &SolveResult) -> Value {
    json!({
        "optimum": r.optimum,
        "proven": r.proven,
        "bound": r.bound,
        "certificate": r.certificate.canonical_labels(),
        "stats": {
            "nodes": r.stats.nodes,
            "memo_entries": r.stats.memo_entries,
            "bound_progression": r.stats.bound_progression,
        },
    })
}
