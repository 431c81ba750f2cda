//! On-disk formats.
//!
//! Instance (JSON):
//!
//! ```json
//! {"format": "anfsat-instance/1", "num_vars": 4,
//!  "factors": [[[1],[2],[2,3]], [[2],[3],[3,4]]]}
//! ```
//!
//! Each factor is written in array-of-arrays notation, which is itself valid
//! JSON. A single function uses `"format": "anfsat-function/1"` and a
//! `"function"` field instead of `"factors"`.
//!
//! Instance (plain text): one factor per line such as `x1 + x2 + x2*x3`,
//! `1` for the constant. Blank lines and lines starting with `#` are ignored;
//! a line `vars N` sets the variable count.

use std::fmt;

use anfsat_core::anf::{parse_anf, parse_anf_text, AnfError};
use anfsat_core::{AnfPoly, Formula, Term};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::CliError;

pub const INSTANCE_FORMAT: &str = "anfsat-instance/1";
pub const FUNCTION_FORMAT: &str = "anfsat-function/1";
pub const RESULT_FORMAT: &str = "anfsat-result/1";
pub const SPEEDUP_FORMAT: &str = "anfsat-speedup/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum InputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Deserialize)]
struct RawDoc {
    format: String,
    num_vars: Option<u32>,
    factors: Option<Vec<Box<RawValue>>>,
    function: Option<Box<RawValue>>,
}

fn parse_factor(index: usize, raw: &str) -> Result<AnfPoly, CliError> {
    parse_anf(raw).map_err(|e| CliError::Input(format!("factor {index}: {e}")))
}

fn check_num_vars(num_vars: Option<u32>, factors: &[AnfPoly]) -> Result<u32, CliError> {
    let needed = factors.iter().map(AnfPoly::num_vars).max().unwrap_or(0);
    match num_vars {
        Some(n) if n < needed => Err(CliError::Input(format!(
            "num_vars is {n} but factors mention x{needed}"
        ))),
        Some(n) => Ok(n),
        None => Ok(needed),
    }
}

/// Reads a system of factors.
pub fn read_instance(text: &str, format: InputFormat) -> Result<Formula, CliError> {
    let (factors, num_vars) = match format {
        InputFormat::Json => {
            let doc: RawDoc = serde_json::from_str(text)
                .map_err(|e| CliError::Input(format!("invalid instance document: {e}")))?;
            if doc.format != INSTANCE_FORMAT {
                return Err(CliError::Input(format!(
                    "expected format \"{INSTANCE_FORMAT}\", found \"{}\"",
                    doc.format
                )));
            }
            let raw = doc
                .factors
                .ok_or_else(|| CliError::Input("instance has no \"factors\" field".into()))?;
            let factors = raw
                .iter()
                .enumerate()
                .map(|(i, r)| parse_factor(i, r.get()))
                .collect::<Result<Vec<_>, _>>()?;
            (factors, doc.num_vars)
        }
        InputFormat::Text => read_text_lines(text)?,
    };
    let n = check_num_vars(num_vars, &factors)?;
    Ok(Formula::new(factors, n))
}

/// Reads a single function; returns it with its ambient variable count.
pub fn read_function(text: &str, format: InputFormat) -> Result<(AnfPoly, u32), CliError> {
    let (f, num_vars) = match format {
        InputFormat::Json => {
            let doc: RawDoc = serde_json::from_str(text)
                .map_err(|e| CliError::Input(format!("invalid function document: {e}")))?;
            let f = match doc.format.as_str() {
                FUNCTION_FORMAT => {
                    let raw = doc.function.ok_or_else(|| {
                        CliError::Input("function document has no \"function\" field".into())
                    })?;
                    parse_factor(0, raw.get())?
                }
                INSTANCE_FORMAT => match doc.factors.as_deref() {
                    Some([one]) => parse_factor(0, one.get())?,
                    _ => {
                        return Err(CliError::Input(
                            "an instance passed as a function must have exactly one factor".into(),
                        ))
                    }
                },
                other => {
                    return Err(CliError::Input(format!(
                        "expected format \"{FUNCTION_FORMAT}\", found \"{other}\""
                    )))
                }
            };
            (f, doc.num_vars)
        }
        InputFormat::Text => {
            let (mut factors, n) = read_text_lines(text)?;
            if factors.len() != 1 {
                return Err(CliError::Input(format!(
                    "expected exactly one function line, found {}",
                    factors.len()
                )));
            }
            (factors.remove(0), n)
        }
    };
    let n = check_num_vars(num_vars, std::slice::from_ref(&f))?;
    Ok((f.with_num_vars(n), n))
}

fn read_text_lines(text: &str) -> Result<(Vec<AnfPoly>, Option<u32>), CliError> {
    let mut factors = Vec::new();
    let mut num_vars = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vars") {
            let n = rest.trim().parse::<u32>().map_err(|_| {
                CliError::Input(format!("line {}: bad variable count '{}'", lineno + 1, rest.trim()))
            })?;
            num_vars = Some(n);
            continue;
        }
        let f = parse_anf_text(line).map_err(|e: AnfError| {
            CliError::Input(format!("line {}: {e}", lineno + 1))
        })?;
        factors.push(f);
    }
    Ok((factors, num_vars))
}

fn raw(text: String) -> Box<RawValue> {
    RawValue::from_string(text).expect("array-of-arrays notation is valid JSON")
}

#[derive(Serialize)]
struct InstanceOut<'a> {
    format: &'a str,
    num_vars: u32,
    factors: Vec<Box<RawValue>>,
}

/// Renders an instance document; factors stay one per line.
pub fn write_instance(formula: &Formula) -> String {
    let doc = InstanceOut {
        format: INSTANCE_FORMAT,
        num_vars: formula.num_vars(),
        factors: formula.factors().iter().map(|f| raw(f.to_string())).collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("serializable");
    out.push('\n');
    out
}

/// Renders the plain-text instance form.
pub fn write_instance_text(formula: &Formula) -> String {
    let mut out = format!("vars {}\n", formula.num_vars());
    for f in formula.factors() {
        out.push_str(&anfsat_core::anf::to_anf_text(f));
        out.push('\n');
    }
    out
}

/// A term as a signed-integer tuple; serialized on one line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedTerm(pub Vec<i64>);

impl SignedTerm {
    pub fn to_term(&self) -> Result<Term, CliError> {
        let lits = self
            .0
            .iter()
            .map(|&k| {
                anfsat_core::Literal::from_signed(k)
                    .ok_or_else(|| CliError::Input(format!("invalid literal {k}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Term::from_literals(lits)
            .ok_or_else(|| CliError::Input(format!("repeated variable in implicant {self}")))
    }
}

impl From<&Term> for SignedTerm {
    fn from(t: &Term) -> Self {
        SignedTerm(t.to_signed())
    }
}

impl fmt::Display for SignedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for SignedTerm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        raw(self.to_string()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SignedTerm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Vec::<i64>::deserialize(d).map(SignedTerm)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Sat,
    Unsat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingDoc {
    pub wall_time_ms: f64,
    pub critical_path_ms: f64,
    pub busy_time_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsDoc {
    pub segments_total: u64,
    pub longest_chain: u64,
    pub pruned: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing: Option<TimingDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightDoc {
    pub weight: u64,
    pub implicants: Vec<SignedTerm>,
    pub witnesses: Vec<String>,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioDoc {
    pub exact: String,
    pub approx: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeedupRow {
    pub procs: u64,
    pub speedup: RatioDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeedupDoc {
    pub format: String,
    pub segments_total: u64,
    pub longest_chain: u64,
    pub max_speedup: RatioDoc,
    pub parallel_fraction: RatioDoc,
    pub critical_speedup: RatioDoc,
    pub table: Vec<SpeedupRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub format: String,
    pub status: Status,
    pub num_vars: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub implicants: Option<Vec<SignedTerm>>,
    /// Decimal string; counts exceed 64 bits easily.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub model_count: Option<String>,
    /// Bit strings, `x1` first.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub solutions: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub minwt: Option<WeightDoc>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub maxwt: Option<WeightDoc>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stats: Option<StatsDoc>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub speedup: Option<SpeedupDoc>,
}

impl ResultDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: ResultDocument = serde_json::from_str(text)
            .map_err(|e| CliError::Input(format!("invalid result document: {e}")))?;
        if doc.format != RESULT_FORMAT {
            return Err(CliError::Input(format!(
                "expected format \"{RESULT_FORMAT}\", found \"{}\"",
                doc.format
            )));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("serializable");
        out.push('\n');
        out
    }

    /// The document with timing measurements removed, for comparisons.
    pub fn without_timing(&self) -> ResultDocument {
        let mut doc = self.clone();
        if let Some(stats) = &mut doc.stats {
            stats.timing = None;
        }
        doc
    }

    pub fn terms(&self) -> Result<Vec<Term>, CliError> {
        self.implicants
            .as_ref()
            .ok_or_else(|| CliError::Input("result document has no implicants".into()))?
            .iter()
            .map(SignedTerm::to_term)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SYSTEM: &str = r#"{
        "format": "anfsat-instance/1",
        "num_vars": 4,
        "factors": [[[1],[2],[2,3]], [[2],[3],[3,4]], [[3],[4],[4,1]], [[4],[1],[1,2]]]
    }"#;

    #[test]
    fn reads_json_instance() {
        let f = read_instance(SYSTEM, InputFormat::Json).unwrap();
        assert_eq!(f.num_vars(), 4);
        assert_eq!(f.factors()[2].to_string(), "[[3],[4],[1,4]]");
    }

    #[test]
    fn instance_round_trip() {
        let f = read_instance(SYSTEM, InputFormat::Json).unwrap();
        let text = write_instance(&f);
        assert!(text.contains("[[1],[2],[2,3]]"));
        assert_eq!(read_instance(&text, InputFormat::Json).unwrap(), f);
        let plain = write_instance_text(&f);
        assert_eq!(read_instance(&plain, InputFormat::Text).unwrap(), f);
    }

    #[test]
    fn reads_text_instance() {
        let text = "# comment\nvars 6\nx1 + x2 + x2*x3\n\n1 + x4\n";
        let f = read_instance(text, InputFormat::Text).unwrap();
        assert_eq!(f.num_vars(), 6);
        assert_eq!(f.factors().len(), 2);
        assert_eq!(f.factors()[1].to_string(), "[1,[4]]");
    }

    #[test]
    fn rejects_bad_instances() {
        let wrong_tag = SYSTEM.replace("anfsat-instance/1", "other/1");
        assert!(read_instance(&wrong_tag, InputFormat::Json).is_err());
        let small = SYSTEM.replace("\"num_vars\": 4", "\"num_vars\": 3");
        assert!(read_instance(&small, InputFormat::Json).is_err());
        let bad_factor = SYSTEM.replace("[[1],[2],[2,3]]", "[[1],[0]]");
        let err = read_instance(&bad_factor, InputFormat::Json).unwrap_err();
        assert!(err.to_string().contains("factor 0"), "{err}");
        assert!(read_instance("x1 +\n", InputFormat::Text).is_err());
        assert!(read_instance("{", InputFormat::Json).is_err());
    }

    #[test]
    fn reads_functions() {
        let doc = r#"{"format":"anfsat-function/1","num_vars":5,"function":[1,[1],[2,3]]}"#;
        let (f, n) = read_function(doc, InputFormat::Json).unwrap();
        assert_eq!((f.to_string(), n), ("[1,[1],[2,3]]".to_string(), 5));
        let (g, n) = read_function("x1 + x3", InputFormat::Text).unwrap();
        assert_eq!((g.to_string(), n), ("[[1],[3]]".to_string(), 3));
        assert!(read_function(SYSTEM, InputFormat::Json).is_err());
        assert!(read_function("x1\nx2\n", InputFormat::Text).is_err());
    }

    #[test]
    fn signed_terms_stay_on_one_line() {
        let doc = ResultDocument {
            format: RESULT_FORMAT.into(),
            status: Status::Sat,
            num_vars: 4,
            implicants: Some(vec![SignedTerm(vec![-1, 2, -3, 4])]),
            model_count: Some("1".into()),
            solutions: None,
            minwt: None,
            maxwt: None,
            stats: None,
            speedup: None,
        };
        let json = doc.to_json();
        assert!(json.contains("[-1,2,-3,4]"), "{json}");
        assert!(!json.contains("solutions"));
        assert_eq!(ResultDocument::parse(&json).unwrap(), doc);
        assert_eq!(doc.terms().unwrap(), vec![Term::from_signed(&[-1, 2, -3, 4])]);
    }
}
