//! The JSON envelope printed by every command, and exit codes.

use serde::Serialize;
use serde_json::{json, Value};
use wfl_core::verify::Outcome;
use wfl_core::{Error, ErrorClass};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Pass,
    Fail,
    InconclusiveSampled,
    UsageError,
    LimitExceeded,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok | Status::Pass | Status::InconclusiveSampled => 0,
            Status::Fail => 1,
            Status::UsageError => 2,
            Status::LimitExceeded => 3,
        }
    }

    pub fn from_outcome(o: Outcome) -> Status {
        match o {
            Outcome::Pass => Status::Pass,
            Outcome::Fail => Status::Fail,
            Outcome::InconclusiveSampled => Status::InconclusiveSampled,
        }
    }

    pub fn from_error(e: &Error) -> Status {
        match e.class() {
            ErrorClass::Usage => Status::UsageError,
            ErrorClass::Limit => Status::LimitExceeded,
        }
    }
}

/// What a command produces before it is wrapped in the envelope.
#[derive(Debug, Clone)]
pub struct Reply {
    pub result: Value,
    pub status: Status,
    pub stats: Value,
}

impl Reply {
    pub fn ok(result: Value) -> Reply {
        Reply {
            result,
            status: Status::Ok,
            stats: json!({}),
        }
    }

    pub fn error(e: &Error) -> Reply {
        Reply {
            result: json!({ "error": e.to_string() }),
            status: Status::from_error(e),
            stats: json!({}),
        }
    }
}

/// Integers become decimal strings, recursively; everything else is kept.
pub fn canonicalize(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(canonicalize).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, canonicalize(v))).collect()),
        other => other,
    }
}

pub fn envelope(request: &Value, reply: &Reply) -> Value {
    canonicalize(json!({
        "schema_version": SCHEMA_VERSION,
        "request": request,
        "result": reply.result,
        "status": reply.status,
        "stats": reply.stats,
    }))
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn status_of(doc: &Value) -> Option<Status> {
    match doc.get("status")?.as_str()? {
        "ok" => Some(Status::Ok),
        "pass" => Some(Status::Pass),
        "fail" => Some(Status::Fail),
        "inconclusive-sampled" => Some(Status::InconclusiveSampled),
        "usage-error" => Some(Status::UsageError),
        "limit-exceeded" => Some(Status::LimitExceeded),
        _ => None,
    }
}
