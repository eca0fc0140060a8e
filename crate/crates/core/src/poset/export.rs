use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{FinitePoset, PosetError};

/// `{"elements": [...], "covers": [[i, j, "label"], ...]}`. Unlabelled
/// covers carry an empty label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<Value>,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

impl FinitePoset {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph {\n");
        for x in 0..self.len() {
            if self.upper_covers(x).is_empty() && self.lower_covers(x).is_empty() {
                let _ = writeln!(out, "  {};", quote(self.name(x)));
            }
        }
        for &(a, b) in self.covers() {
            let _ = write!(out, "  {} -> {}", quote(self.name(a)), quote(self.name(b)));
            match self.cover_label(a, b) {
                Some(l) => {
                    let _ = writeln!(out, " [label={}];", quote(l));
                }
                None => out.push_str(";\n"),
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> PosetJson {
        let covers = self
            .covers()
            .iter()
            .map(|&(a, b)| serde_json::json!([a, b, self.cover_label(a, b).unwrap_or("")]))
            .collect();
        PosetJson { elements: self.names().to_vec(), covers }
    }

    /// Inverse of [`FinitePoset::to_json`]. Covers may omit the label.
    pub fn from_json(text: &str) -> Result<Self, PosetError> {
        let bad = |msg: &str| PosetError::Json(msg.to_string());
        let parsed: PosetJson = serde_json::from_str(text).map_err(|e| PosetError::Json(e.to_string()))?;
        let mut covers = Vec::new();
        let mut labels = Vec::new();
        let mut any_label = false;
        for c in &parsed.covers {
            let arr = c.as_array().ok_or_else(|| bad("cover is not an array"))?;
            let index = |k: usize| {
                arr.get(k)
                    .and_then(Value::as_u64)
                    .map(|i| i as usize)
                    .ok_or_else(|| bad("cover endpoint is not an index"))
            };
            let (a, b) = (index(0)?, index(1)?);
            let label = match arr.get(2) {
                None => String::new(),
                Some(v) => v.as_str().ok_or_else(|| bad("cover label is not a string"))?.to_string(),
            };
            if arr.len() > 3 {
                return Err(bad("cover has too many fields"));
            }
            any_label |= !label.is_empty();
            covers.push((a, b));
            labels.push(((a, b), label));
        }
        let p = FinitePoset::from_covers(parsed.elements, covers)?;
        if !any_label {
            return Ok(p);
        }
        labels.sort();
        labels.dedup_by(|x, y| x.0 == y.0);
        p.with_labels(labels.into_iter().map(|(_, l)| l).collect())
    }
}
