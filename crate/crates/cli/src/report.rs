//! Report assembly and rendering. Everything here is single-threaded and ordered
//! so that a fixed configuration gives byte-identical output.

use std::collections::BTreeMap;

use birkhoff::{to_latex, Polynomial};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA: u32 = 1;

/// One result row. `residual`, when present, is expected to vanish.
#[derive(Clone, Debug)]
pub struct Item {
    pub label: String,
    pub indices: Vec<i32>,
    pub value: Option<Polynomial>,
    pub residual: Option<Polynomial>,
    pub trace: Vec<String>,
}

impl Item {
    pub fn value(label: impl Into<String>, indices: Vec<i32>, value: Polynomial) -> Self {
        Item { label: label.into(), indices, value: Some(value), residual: None, trace: Vec::new() }
    }

    pub fn check(label: impl Into<String>, indices: Vec<i32>, residual: Polynomial) -> Self {
        Item { label: label.into(), indices, value: None, residual: Some(residual), trace: Vec::new() }
    }

    pub fn both(label: impl Into<String>, indices: Vec<i32>, value: Polynomial, residual: Polynomial) -> Self {
        Item { label: label.into(), indices, value: Some(value), residual: Some(residual), trace: Vec::new() }
    }

    pub fn with_trace(mut self, trace: Vec<String>) -> Self {
        self.trace = trace;
        self
    }
}

/// What a verb hands back before timing and digests are attached.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub items: Vec<Item>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportItem {
    pub label: String,
    pub indices: Vec<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub label: String,
    pub indices: Vec<i32>,
    pub residual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub verb: String,
    pub version: String,
    pub bounds: BTreeMap<String, String>,
    pub input_digest: String,
    pub items_total: usize,
    pub items_zero: usize,
    pub items: Vec<ReportItem>,
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
    /// sha256 of the report with this field empty and `elapsed_ms` zero.
    pub digest: String,
    pub elapsed_ms: u64,
    #[serde(skip)]
    latex: Vec<(String, Option<String>, Option<String>)>,
}

fn sha(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Report {
    pub fn new(verb: &str, bounds: BTreeMap<String, String>, outcome: Outcome, elapsed_ms: u64) -> Report {
        let version = env!("CARGO_PKG_VERSION").to_string();
        let input_digest = sha(serde_json::to_string(&(verb, &version, &bounds)).expect("serializable").as_bytes());
        let mut items = Vec::new();
        let mut failures = Vec::new();
        let mut latex = Vec::new();
        let (mut total, mut zero) = (0, 0);
        for it in outcome.items {
            let z = it.residual.as_ref().map(|r| r.is_zero());
            if let Some(z) = z {
                total += 1;
                if z {
                    zero += 1;
                } else {
                    failures.push(Failure {
                        label: it.label.clone(),
                        indices: it.indices.clone(),
                        residual: it.residual.as_ref().expect("checked").to_string(),
                    });
                }
            }
            latex.push((it.label.clone(), it.value.as_ref().map(to_latex), it.residual.as_ref().map(to_latex)));
            items.push(ReportItem {
                label: it.label,
                indices: it.indices,
                value: it.value.map(|v| v.to_string()),
                residual: it.residual.map(|r| r.to_string()),
                zero: z,
                trace: it.trace,
            });
        }
        let mut r = Report {
            schema: SCHEMA,
            verb: verb.to_string(),
            version,
            bounds,
            input_digest,
            items_total: total,
            items_zero: zero,
            items,
            failures,
            notes: outcome.notes,
            digest: String::new(),
            elapsed_ms: 0,
            latex,
        };
        r.digest = sha(serde_json::to_string(&r).expect("serializable").as_bytes());
        r.elapsed_ms = elapsed_ms;
        r
    }

    pub fn all_zero(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_zero() {
            0
        } else {
            2
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# {} (schema {}, version {})\n", self.verb, self.schema, self.version);
        for (k, v) in &self.bounds {
            s += &format!("# {k} = {v}\n");
        }
        for it in &self.items {
            let idx = it.indices.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
            s += &format!("{} [{}]", it.label, idx);
            if let Some(v) = &it.value {
                s += &format!(": {v}");
            }
            s += "\n";
            if let Some(r) = &it.residual {
                s += &format!("  residual: {r}\n");
            }
        }
        for n in &self.notes {
            s += &format!("note: {n}\n");
        }
        s += &format!("{} of {} checked items zero; digest {}\n", self.items_zero, self.items_total, self.digest);
        s
    }

    pub fn to_latex(&self) -> String {
        let mut s = format!("% {}\n", self.verb);
        for (label, v, r) in &self.latex {
            s += &format!("% {label}\n");
            if let Some(v) = v {
                s += &format!("{v} = 0\n");
            }
            if let Some(r) = r {
                s += &format!("% residual: {r}\n");
            }
        }
        s
    }
}
