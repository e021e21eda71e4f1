//! Runs a manifest of checks in parallel and writes one report per check.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde_json::json;
use wfl_core::verify::CheckSpec;
use wfl_core::{Error, Limits, Result};

use crate::commands::report_reply;
use crate::output::{render, Reply, Status};

/// The shipped acceptance battery.
pub const DEFAULT_MANIFEST: &str = include_str!("../data/battery.json");

pub fn parse_manifest(text: &str) -> Result<Vec<CheckSpec>> {
    serde_json::from_str(text).map_err(|e| Error::Param(format!("malformed manifest: {e}")))
}

fn check_status(r: &Result<Reply>) -> Status {
    match r {
        Ok(reply) => reply.status,
        Err(e) => Status::from_error(e),
    }
}

/// Worst status wins: limit > usage > fail > pass.
fn overall(statuses: &[Status]) -> Status {
    let has = |s: Status| statuses.contains(&s);
    if has(Status::LimitExceeded) {
        Status::LimitExceeded
    } else if has(Status::UsageError) {
        Status::UsageError
    } else if has(Status::Fail) {
        Status::Fail
    } else {
        Status::Pass
    }
}

pub fn run(manifest: Option<&Path>, out: &Path, limits: &Limits) -> Result<Reply> {
    let text = match manifest {
        Some(p) => fs::read_to_string(p)?,
        None => DEFAULT_MANIFEST.to_string(),
    };
    let checks = parse_manifest(&text)?;
    fs::create_dir_all(out)?;
    let results: Vec<Result<Reply>> = checks
        .par_iter()
        .map(|c| c.run(limits).map(report_reply))
        .collect();
    let mut entries = Vec::with_capacity(checks.len());
    let mut statuses = Vec::with_capacity(checks.len());
    for (i, (spec, res)) in checks.iter().zip(&results).enumerate() {
        let status = check_status(res);
        statuses.push(status);
        let file = format!("check-{i:03}.json");
        let (result, stats) = match res {
            Ok(r) => (r.result.clone(), r.stats.clone()),
            Err(e) => (json!({ "error": e.to_string() }), json!({})),
        };
        let doc = crate::output::canonicalize(json!({
            "index": i,
            "label": spec.label(),
            "check": spec,
            "status": status,
            "result": result,
            "stats": stats,
        }));
        fs::write(out.join(&file), render(&doc))?;
        entries.push(json!({ "index": i, "label": spec.label(), "status": status, "file": file }));
    }
    let status = overall(&statuses);
    let count = |s: Status| statuses.iter().filter(|&&x| x == s).count();
    let summary = json!({
        "checks": entries.len(),
        "pass": count(Status::Pass),
        "fail": count(Status::Fail),
        "inconclusive_sampled": count(Status::InconclusiveSampled),
        "errors": statuses.iter().filter(|s| matches!(s, Status::UsageError | Status::LimitExceeded)).count(),
        "entries": entries,
    });
    fs::write(
        out.join("summary.json"),
        render(&crate::output::canonicalize(json!({ "status": status, "summary": summary }))),
    )?;
    Ok(Reply {
        result: json!({ "out": out.display().to_string(), "summary": summary }),
        status,
        stats: json!({}),
    })
}
