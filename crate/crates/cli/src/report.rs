//! Machine report (JSON) and the aligned text summary.

use std::fmt::Write as _;

use mfcalc::invariants::PairingNormalization;
use serde_json::{json, Value};

use crate::document::Problem;
use crate::tasks::{q, Overrides, Status, TaskOutcome, DEFAULT_SEED};

pub const REPORT_SCHEMA: &str = "mfcalc-report/1";

pub struct Report {
    pub outcomes: Vec<TaskOutcome>,
    pub json: Value,
}

impl Report {
    pub fn new(problem: &Problem, norm: &PairingNormalization, over: Overrides, outcomes: Vec<TaskOutcome>) -> Report {
        let ring = &problem.ring;
        let tasks: Vec<Value> = outcomes
            .iter()
            .map(|o| {
                json!({
                    "index": o.index, "kind": o.kind, "status": o.status.as_str(),
                    "result": o.result, "error": o.error,
                })
            })
            .collect();
        let count = |s: Status| outcomes.iter().filter(|o| o.status == s).count();
        let json = json!({
            "schema": REPORT_SCHEMA,
            "ring": {"x": ring.x_vars(), "weights": ring.weights(), "t": ring.t_vars()},
            "settings": {
                "seed": over.seed.unwrap_or(DEFAULT_SEED),
                "degree_bound": over.degree_bound,
                "trials": over.trials,
            },
            "pairing_normalization": {"kappa": q(&norm.kappa), "description": norm.describe()},
            "tasks": tasks,
            "summary": {
                "tasks": outcomes.len(),
                "ok": count(Status::Ok),
                "failed": count(Status::Failed),
                "error": count(Status::Error),
            },
        });
        Report { outcomes, json }
    }

    pub fn all_ok(&self) -> bool {
        self.outcomes.iter().all(|o| o.status == Status::Ok)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let kind_w = self.outcomes.iter().map(|o| o.kind.len()).max().unwrap_or(4);
        let idx_w = self.outcomes.len().saturating_sub(1).to_string().len();
        let mut out = String::new();
        for o in &self.outcomes {
            let _ = writeln!(
                out,
                "[{:>idx_w$}] {:<kind_w$}  {:<6}  {}",
                o.index,
                o.kind,
                o.status.as_str(),
                o.headline
            );
        }
        let s = &self.json["summary"];
        let _ = writeln!(out, "{} tasks: {} ok, {} failed, {} error", s["tasks"], s["ok"], s["failed"], s["error"]);
        out
    }
}
