//! Run reports: the serializable result of a scenario, and its text and
//! JSON renderings.

use serde::{Deserialize, Serialize};

use crate::oracle::OracleRow;
use crate::theorems::TheoremReport;
use crate::tower::{Status, Verdict};

pub const SCHEMA_VERSION: u32 = 1;

/// One tower, system or named comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub label: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stages: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Theorem(TheoremReport),
    Entries {
        subject: String,
        entries: Vec<Entry>,
    },
    Oracle {
        subject: String,
        verdict: Verdict,
        rows: Vec<OracleRow>,
    },
}

impl Outcome {
    pub fn verdicts(&self) -> Vec<&Verdict> {
        match self {
            Outcome::Theorem(t) => t.conditions.iter().map(|c| &c.verdict).collect(),
            Outcome::Entries { entries, .. } => entries.iter().map(|e| &e.verdict).collect(),
            Outcome::Oracle { verdict, .. } => vec![verdict],
        }
    }

    pub fn discrepancy(&self) -> bool {
        matches!(self, Outcome::Theorem(t) if t.discrepancy)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskResult {
    pub index: usize,
    pub task: String,
    pub args: Vec<String>,
    pub line: usize,
    pub depth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Outcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl TaskResult {
    pub fn any_fails(&self) -> bool {
        self.outcome
            .as_ref()
            .is_some_and(|o| o.verdicts().iter().any(|v| v.is_fails()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gallery: Option<String>,
    /// SHA-256 of the scenario text.
    pub scenario_hash: String,
    pub discrepancy: bool,
    pub tasks: Vec<TaskResult>,
}

impl RunReport {
    pub fn empty(hash: String) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            gallery: None,
            scenario_hash: hash,
            discrepancy: false,
            tasks: vec![],
        }
    }

    pub fn has_errors(&self) -> bool {
        self.tasks.iter().any(|t| t.error.is_some())
    }

    pub fn any_fails(&self) -> bool {
        self.tasks.iter().any(|t| t.any_fails())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<RunReport> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "adicomp {}  scenario {}\n",
            self.tool_version,
            &self.scenario_hash[..12.min(self.scenario_hash.len())]
        ));
        if let Some(g) = &self.gallery {
            out.push_str(&format!("gallery {g}\n"));
        }
        if self.discrepancy {
            out.push_str("!! DISCREPANCY: see the flagged tasks below\n");
        }
        for t in &self.tasks {
            out.push('\n');
            out.push_str(&format!(
                "[{}] {} {}  (depth {}, line {})",
                t.index,
                t.task,
                t.args.join(" "),
                t.depth,
                t.line
            ));
            if let Some(ms) = t.elapsed_ms {
                out.push_str(&format!("  {ms:.1} ms"));
            }
            out.push('\n');
            if let Some(e) = &t.error {
                out.push_str(&format!("  error: {e}\n"));
            }
            if let Some(o) = &t.outcome {
                render_outcome(o, &mut out);
            }
        }
        out
    }
}

fn glyph(v: &Verdict) -> String {
    format!("{} {}", v.status.glyph(), v.status.label())
}

fn detail(v: &Verdict) -> String {
    let mut parts: Vec<String> = v.witnesses.iter().map(|w| w.to_string()).collect();
    parts.extend(v.evidence.iter().cloned());
    if let Some(n) = &v.note {
        parts.push(n.clone());
    }
    parts.join("; ")
}

/// Left-aligned columns; widths count characters, not bytes.
fn table(rows: &[Vec<String>], out: &mut String) {
    let ncols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    for r in rows {
        let mut line = String::from("  ");
        for (c, cell) in r.iter().enumerate() {
            line.push_str(cell);
            if c + 1 < r.len() {
                line.push_str(&" ".repeat(widths[c] - cell.chars().count() + 2));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
}

fn render_outcome(o: &Outcome, out: &mut String) {
    match o {
        Outcome::Theorem(t) => {
            out.push_str(&format!("  {} ({:?})\n", t.theorem, t.expectation));
            let rows: Vec<Vec<String>> = t
                .conditions
                .iter()
                .map(|c| vec![c.id.clone(), glyph(&c.verdict), c.statement.clone(), detail(&c.verdict)])
                .collect();
            table(&rows, out);
            for n in &t.notes {
                out.push_str(&format!("  note: {n}\n"));
            }
        }
        Outcome::Entries { subject, entries } => {
            out.push_str(&format!("  {subject}\n"));
            let rows: Vec<Vec<String>> = entries
                .iter()
                .map(|e| {
                    let mut d = detail(&e.verdict);
                    if let Some(v) = &e.value {
                        d = if d.is_empty() {
                            format!("value {v}")
                        } else {
                            format!("value {v}; {d}")
                        };
                    }
                    vec![e.label.clone(), glyph(&e.verdict), d]
                })
                .collect();
            table(&rows, out);
            for e in entries.iter().filter(|e| !e.stages.is_empty()) {
                out.push_str(&format!("  {} stages: {}\n", e.label, e.stages.join(" | ")));
            }
        }
        Outcome::Oracle { subject, verdict, rows } => {
            out.push_str(&format!("  {subject}: {}\n", glyph(verdict)));
            let mut t = vec![vec!["invariant".into(), "library".into(), "oracle".into(), "".into()]];
            t.extend(rows.iter().map(|r| {
                vec![
                    r.invariant.clone(),
                    r.library.clone(),
                    r.oracle.clone(),
                    if r.agree {
                        Status::Holds.glyph()
                    } else {
                        Status::FailsUpToDepth.glyph()
                    }
                    .into(),
                ]
            }));
            table(&t, out);
        }
    }
}
