use num_rational::BigRational;
use reglab::rational::format_rational;
use reglab::{Rational, VertexSet};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// The JSON document every subcommand emits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub runtime_ms: u64,
}

impl ReportFile {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports contain only plain JSON values");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Found,
    None,
    Computed,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Found => "found",
            Verdict::None => "none",
            Verdict::Computed => "computed",
        }
    }

    pub fn holds_if(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn found_if(b: bool) -> Self {
        if b {
            Verdict::Found
        } else {
            Verdict::None
        }
    }
}

/// What a subcommand hands back before the common fields are filled in.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub parameters: Map<String, Value>,
    pub verdict: Verdict,
    pub witness: Option<Value>,
    pub audit: Option<Value>,
    pub seed: Option<u64>,
    /// Text to print instead of the report when no report file was asked for.
    pub stdout: Option<String>,
}

impl Outcome {
    pub fn new(verdict: Verdict) -> Self {
        Outcome { parameters: Map::new(), verdict, witness: None, audit: None, seed: None, stdout: None }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn audit(mut self, a: Value) -> Self {
        self.audit = Some(a);
        self
    }

    /// Adds the keys of `extra` to the audit object, creating it if needed.
    pub fn merge_audit(mut self, extra: Value) -> Self {
        let mut base = self.audit.take().unwrap_or_else(|| Value::Object(Map::new()));
        if let (Some(b), Value::Object(e)) = (base.as_object_mut(), extra) {
            b.extend(e);
        }
        self.audit = Some(base);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

pub fn rat(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn big(r: &BigRational) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

pub fn set(s: &VertexSet) -> Value {
    s.to_vec().into()
}

pub fn sets(s: &[VertexSet]) -> Value {
    Value::Array(s.iter().map(set).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn report_round_trips() {
        let r = ReportFile {
            command: "density".into(),
            parameters: json!({"eps": "1/4", "left": [0, 1]}).as_object().unwrap().clone(),
            verdict: "computed".into(),
            witness: Some(json!({"density": "3/4"})),
            audit: None,
            seed: Some(7),
            runtime_ms: 0,
        };
        let text = r.to_json();
        assert!(!text.contains("0.75"));
        assert_eq!(serde_json::from_str::<ReportFile>(&text).unwrap(), r);
    }

    #[test]
    fn rationals_are_strings() {
        assert_eq!(rat(&Rational::new(2, 1)), json!("2/1"));
        assert_eq!(big(&BigRational::new(6.into(), 4.into())), json!("3/2"));
    }
}
