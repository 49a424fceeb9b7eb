//! Text formats and machine-readable records for the `surjvcsp` binary.
//!
//! Instance files (`boolean-vcsp` header) and GMC files (`gmc` header) are
//! UTF-8, whitespace-separated and line-based, with `#` comments. Values
//! are `inf`, `P`, or `P/Q`. Variable and vertex indices are 1-based in
//! files (the API is 0-based); set-function masks use vertex i at bit
//! 2^(i−1). Results are single-line JSON objects with a fixed field order,
//! so identical inputs print byte-identical output.

use serde::Serialize;
use thiserror::Error;

use surjvcsp::classify::{RelationPart, TractableReason, Verdict};
use surjvcsp::gmc::{GmcInstance, SetFunction};
use surjvcsp::instance::{Assignment, Instance};
use surjvcsp::mincut::Graph;
use surjvcsp::relation::{Language, WeightedRelation, R_MAX};
use surjvcsp::solver::{SolveResult, SolveStatus};
use surjvcsp::value::Value;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] surjvcsp::Error),
}

impl CliError {
    /// Exit codes: 0 ok, 1 usage, 2 parse/data, 3 resource guard,
    /// 4 verify mismatch (produced by the verify command itself).
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse { .. } | CliError::Data(_) => 2,
            CliError::Core(surjvcsp::Error::Resource(_)) => 3,
            CliError::Core(_) => 2,
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn parse_value(tok: &str, line: usize) -> Result<Value, CliError> {
    tok.parse::<Value>()
        .map_err(|e| parse_err(line, e.to_string()))
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize, CliError> {
    tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("malformed {what}")))
}

/// Parses a `boolean-vcsp` file into its named language and the instance.
pub fn parse_instance(text: &str) -> Result<(Language, Instance), CliError> {
    let mut header_seen = false;
    let mut lang = Language::new();
    let mut instance: Option<Instance> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let ln = idx + 1;
        if !header_seen {
            if line == "boolean-vcsp" {
                header_seen = true;
                continue;
            }
            return Err(parse_err(ln, "expected header `boolean-vcsp`"));
        }
        let mut tok = line.split_whitespace();
        match tok.next().unwrap() {
            "vars" => {
                if instance.is_some() {
                    return Err(parse_err(ln, "duplicate `vars` line"));
                }
                let n = parse_usize(tok.next(), ln, "variable count")?;
                instance = Some(Instance::new(n).map_err(|e| parse_err(ln, e.to_string()))?);
            }
            "rel" => {
                let name = tok
                    .next()
                    .ok_or_else(|| parse_err(ln, "missing relation name"))?
                    .to_string();
                if lang.get(&name).is_some() {
                    return Err(parse_err(ln, format!("relation `{name}` redefined")));
                }
                let arity = parse_usize(tok.next(), ln, "arity")?;
                if !(1..=R_MAX).contains(&arity) {
                    return Err(parse_err(ln, format!("arity must be in 1..={R_MAX}")));
                }
                let mut table = Vec::with_capacity(1 << arity);
                for _ in 0..1usize << arity {
                    let v = tok
                        .next()
                        .ok_or_else(|| parse_err(ln, "too few table values"))?;
                    table.push(parse_value(v, ln)?);
                }
                if tok.next().is_some() {
                    return Err(parse_err(ln, "too many table values"));
                }
                let rel = WeightedRelation::new(arity, table)
                    .map_err(|e| parse_err(ln, e.to_string()))?;
                lang.insert(name, rel);
            }
            "con" => {
                let inst = instance
                    .as_mut()
                    .ok_or_else(|| parse_err(ln, "`con` before `vars`"))?;
                let weight = parse_value(
                    tok.next().ok_or_else(|| parse_err(ln, "missing weight"))?,
                    ln,
                )?;
                let name = tok
                    .next()
                    .ok_or_else(|| parse_err(ln, "missing relation name"))?;
                let rel = lang
                    .get(name)
                    .ok_or_else(|| parse_err(ln, format!("unknown relation `{name}`")))?
                    .clone();
                let mut scope = Vec::with_capacity(rel.arity());
                for _ in 0..rel.arity() {
                    let i = parse_usize(tok.next(), ln, "scope index")?;
                    if i < 1 || i > inst.num_vars() {
                        return Err(parse_err(ln, format!("variable index {i} out of range")));
                    }
                    scope.push(i - 1);
                }
                if tok.next().is_some() {
                    return Err(parse_err(ln, "trailing tokens after scope"));
                }
                inst.add_constraint(weight, rel, scope)
                    .map_err(|e| parse_err(ln, e.to_string()))?;
            }
            other => return Err(parse_err(ln, format!("unknown directive `{other}`"))),
        }
    }
    if !header_seen {
        return Err(parse_err(1, "empty file: expected header `boolean-vcsp`"));
    }
    let instance = instance.ok_or_else(|| parse_err(1, "missing `vars` line"))?;
    Ok((lang, instance))
}

/// Recognisable stock tables get stable names in serialized files.
fn stock_name(rel: &WeightedRelation) -> Option<String> {
    use surjvcsp::relation::stock;
    let crisp = WeightedRelation::crisp;
    let candidates: Vec<(&str, WeightedRelation)> = vec![
        ("const0", stock::constant_crisp(false)),
        ("const1", stock::constant_crisp(true)),
        ("soft0", stock::soft_constant(false)),
        ("soft1", stock::soft_constant(true)),
        ("eq", crisp(&stock::equality())),
        ("neq", crisp(&stock::disequality())),
        ("leq", crisp(&stock::leq())),
        ("geq", crisp(&stock::geq())),
        ("softeq", stock::soft_equality()),
        ("softgeq", stock::soft_geq()),
        ("parity3", crisp(&stock::even_parity(3))),
        ("parity4", crisp(&stock::even_parity(4))),
    ];
    for (name, table) in candidates {
        if rel == &table {
            return Some(name.to_string());
        }
    }
    // The ternary max-cut gadget family, keyed by its `otherwise` value.
    if rel.arity() == 3 {
        if let Some(w) = rel.value_at(0b010).as_rational() {
            if w.denom() == &1 && rel == &stock::maxcut_gadget(*w.numer()) {
                return Some(format!("maxcut{}", w.numer()));
            }
        }
    }
    None
}

/// Canonical serialization of an instance: header, vars, relations in
/// first-use order, constraints in instance order. Parsing the output
/// reproduces the instance exactly.
pub fn write_instance(instance: &Instance) -> String {
    let mut names: Vec<(WeightedRelation, String)> = Vec::new();
    let mut fresh = 0usize;
    for c in instance.constraints() {
        if names.iter().any(|(r, _)| r == &c.relation) {
            continue;
        }
        let name = stock_name(&c.relation).unwrap_or_else(|| {
            fresh += 1;
            format!("rel{fresh}")
        });
        names.push((c.relation.clone(), name));
    }
    let mut out = String::from("boolean-vcsp\n");
    out.push_str(&format!("vars {}\n", instance.num_vars()));
    for (rel, name) in &names {
        out.push_str(&format!("rel {name} {}", rel.arity()));
        for v in rel.table() {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    for c in instance.constraints() {
        let name = &names
            .iter()
            .find(|(r, _)| r == &c.relation)
            .expect("relation was collected")
            .1;
        out.push_str(&format!("con {} {name}", c.weight));
        for v in &c.scope {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    out
}

/// Parses a `gmc` file into a GMC instance with a dense oracle table.
/// Superadditivity is validated for up to 16 vertices and is a data error
/// when violated; 17..20 vertices are accepted unvalidated.
pub fn parse_gmc(text: &str) -> Result<GmcInstance, CliError> {
    let mut header_seen = false;
    let mut verts: Option<usize> = None;
    let mut edges: Vec<(usize, usize, Value)> = Vec::new();
    let mut f_entries: Vec<(u64, Value, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let ln = idx + 1;
        if !header_seen {
            if line == "gmc" {
                header_seen = true;
                continue;
            }
            return Err(parse_err(ln, "expected header `gmc`"));
        }
        let mut tok = line.split_whitespace();
        match tok.next().unwrap() {
            "verts" => {
                if verts.is_some() {
                    return Err(parse_err(ln, "duplicate `verts` line"));
                }
                let n = parse_usize(tok.next(), ln, "vertex count")?;
                if !(1..=20).contains(&n) {
                    return Err(parse_err(ln, "vertex count must be in 1..=20"));
                }
                verts = Some(n);
            }
            "edge" => {
                let n = verts.ok_or_else(|| parse_err(ln, "`edge` before `verts`"))?;
                let u = parse_usize(tok.next(), ln, "endpoint")?;
                let v = parse_usize(tok.next(), ln, "endpoint")?;
                if u < 1 || u > n || v < 1 || v > n {
                    return Err(parse_err(ln, "edge endpoint out of range"));
                }
                if u == v {
                    return Err(parse_err(ln, "self-loops are not allowed"));
                }
                let w = parse_value(
                    tok.next().ok_or_else(|| parse_err(ln, "missing weight"))?,
                    ln,
                )?;
                if w <= Value::zero() {
                    return Err(parse_err(ln, "edge weight must be positive or inf"));
                }
                edges.push((u - 1, v - 1, w));
            }
            "f" => {
                let n = verts.ok_or_else(|| parse_err(ln, "`f` before `verts`"))?;
                let mask_tok = tok.next().ok_or_else(|| parse_err(ln, "missing mask"))?;
                let mask: u64 = mask_tok
                    .parse()
                    .map_err(|_| parse_err(ln, format!("malformed mask `{mask_tok}`")))?;
                if mask >> n != 0 {
                    return Err(parse_err(ln, format!("mask {mask} exceeds 2^{n} - 1")));
                }
                let value = parse_value(
                    tok.next().ok_or_else(|| parse_err(ln, "missing value"))?,
                    ln,
                )?;
                if f_entries.iter().any(|(m, _, _)| *m == mask) {
                    return Err(parse_err(ln, format!("duplicate mask {mask}")));
                }
                f_entries.push((mask, value, ln));
            }
            other => return Err(parse_err(ln, format!("unknown directive `{other}`"))),
        }
    }
    if !header_seen {
        return Err(parse_err(1, "empty file: expected header `gmc`"));
    }
    let n = verts.ok_or_else(|| parse_err(1, "missing `verts` line"))?;
    let mut table = vec![Value::zero(); 1usize << n];
    for (mask, value, ln) in f_entries {
        if mask == 0 && !value.is_zero() {
            return Err(parse_err(ln, "mask 0 must map to value 0"));
        }
        if value < Value::zero() {
            return Err(parse_err(ln, "set function values must be non-negative"));
        }
        table[mask as usize] = value;
    }
    let f = SetFunction::dense(n, table).map_err(|e| CliError::Data(e.to_string()))?;
    if n <= 16 {
        f.validate(false)
            .map_err(|e| CliError::Data(format!("set function is not superadditive: {e}")))?;
    }
    let graph = Graph::new(n, &edges).map_err(|e| CliError::Data(e.to_string()))?;
    GmcInstance::new(graph, f).map_err(|e| CliError::Data(e.to_string()))
}

/// Parses only the graph part of a `gmc` file (for the max-cut gadget);
/// any `f` lines are ignored.
pub fn parse_graph(text: &str) -> Result<Graph, CliError> {
    let mut header_seen = false;
    let mut verts: Option<usize> = None;
    let mut edges: Vec<(usize, usize, Value)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let ln = idx + 1;
        if !header_seen {
            if line == "gmc" {
                header_seen = true;
                continue;
            }
            return Err(parse_err(ln, "expected header `gmc`"));
        }
        let mut tok = line.split_whitespace();
        match tok.next().unwrap() {
            "verts" => verts = Some(parse_usize(tok.next(), ln, "vertex count")?),
            "edge" => {
                let n = verts.ok_or_else(|| parse_err(ln, "`edge` before `verts`"))?;
                let u = parse_usize(tok.next(), ln, "endpoint")?;
                let v = parse_usize(tok.next(), ln, "endpoint")?;
                if u < 1 || u > n || v < 1 || v > n || u == v {
                    return Err(parse_err(ln, "bad edge endpoints"));
                }
                let w = parse_value(
                    tok.next().ok_or_else(|| parse_err(ln, "missing weight"))?,
                    ln,
                )?;
                edges.push((u - 1, v - 1, w));
            }
            "f" => {}
            other => return Err(parse_err(ln, format!("unknown directive `{other}`"))),
        }
    }
    let n = verts.ok_or_else(|| parse_err(1, "missing `verts` line"))?;
    Graph::new(n, &edges).map_err(|e| CliError::Data(e.to_string()))
}

/// Parses a parity check matrix: one row per line of 0/1 characters.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<bool>>, CliError> {
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let ln = idx + 1;
        let mut row = Vec::with_capacity(line.len());
        for ch in line.chars() {
            match ch {
                '0' => row.push(false),
                '1' => row.push(true),
                _ => return Err(parse_err(ln, format!("unexpected character `{ch}`"))),
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(1, "empty matrix"));
    }
    Ok(rows)
}

fn bits(assignment: &Assignment) -> Vec<u8> {
    assignment.0.iter().map(|b| u8::from(*b)).collect()
}

/// One solver result as a JSON line.
#[derive(Debug, Serialize)]
pub struct ResultRecord {
    pub status: String,
    pub value: String,
    pub assignment: Option<Vec<u8>>,
    pub path: String,
    pub candidates_examined: usize,
}

impl From<&SolveResult> for ResultRecord {
    fn from(result: &SolveResult) -> Self {
        ResultRecord {
            status: match result.status {
                SolveStatus::Optimal => "optimal".into(),
                SolveStatus::Infeasible => "infeasible".into(),
            },
            value: result.value.to_string(),
            assignment: result.assignment.as_ref().map(bits),
            path: result.path.as_str().into(),
            candidates_examined: result.candidates_examined,
        }
    }
}

pub fn write_result(record: &ResultRecord) -> String {
    serde_json::to_string(record).expect("record serializes")
}

#[derive(Debug, Serialize)]
pub struct AssignmentRecord {
    pub assignment: Vec<u8>,
    pub value: String,
}

impl AssignmentRecord {
    pub fn new(instance: &Instance, s: &Assignment) -> Self {
        let value = instance
            .evaluate(s)
            .map(|v| v.to_string())
            .unwrap_or_else(|_| "inf".into());
        AssignmentRecord {
            assignment: bits(s),
            value,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct EdsWitnessRecord {
    pub relation: String,
    pub part: String,
    pub x: Vec<u8>,
    pub y: Vec<u8>,
}

#[derive(Debug, Serialize)]
pub struct MultimorphismFailureRecord {
    pub multimorphism: String,
    pub relation: String,
    pub witness: Vec<Vec<u8>>,
}

/// A classification verdict as a JSON line.
#[derive(Debug, Serialize)]
pub struct VerdictRecord {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub non_eds: Option<EdsWitnessRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub non_neg_eds: Option<EdsWitnessRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multimorphism_failures: Option<Vec<MultimorphismFailureRecord>>,
}

fn eds_witness_record(v: &surjvcsp::classify::EdsViolation) -> EdsWitnessRecord {
    EdsWitnessRecord {
        relation: v.relation.clone(),
        part: match v.part {
            RelationPart::Feas => "feas".into(),
            RelationPart::Opt => "opt".into(),
        },
        x: v.pair.0.iter().map(|b| u8::from(*b)).collect(),
        y: v.pair.1.iter().map(|b| u8::from(*b)).collect(),
    }
}

impl From<&Verdict> for VerdictRecord {
    fn from(verdict: &Verdict) -> Self {
        match verdict {
            Verdict::GloballySTractable(reason) => VerdictRecord {
                status: "globally_s_tractable".into(),
                reason: Some(reason.as_str().into()),
                non_eds: None,
                non_neg_eds: None,
                multimorphism_failures: None,
            },
            Verdict::GloballySIntractable(ev) => VerdictRecord {
                status: "globally_s_intractable".into(),
                reason: None,
                non_eds: Some(eds_witness_record(&ev.non_eds)),
                non_neg_eds: Some(eds_witness_record(&ev.non_neg_eds)),
                multimorphism_failures: Some(
                    ev.failures
                        .iter()
                        .map(|f| MultimorphismFailureRecord {
                            multimorphism: TractableReason::as_str(&f.multimorphism).into(),
                            relation: f.relation.clone(),
                            witness: f
                                .witness
                                .iter()
                                .map(|t| t.iter().map(|b| u8::from(*b)).collect())
                                .collect(),
                        })
                        .collect(),
                ),
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct LambdaRecord {
    pub lambda_class: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Serialize)]
pub struct SolutionRecord {
    pub vertices: Vec<usize>,
    pub objective: String,
}

impl SolutionRecord {
    pub fn new(j: &GmcInstance, mask: u64) -> Self {
        SolutionRecord {
            vertices: surjvcsp::subset::elements(mask)
                .into_iter()
                .map(|v| v + 1)
                .collect(),
            objective: j.objective(mask).to_string(),
        }
    }
}

/// Parses a 0/1 bitstring into an assignment.
pub fn parse_assignment(text: &str) -> Result<Assignment, CliError> {
    let mut out = Vec::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '0' => out.push(false),
            '1' => out.push(true),
            _ => {
                return Err(CliError::Usage(format!(
                    "assignments are 0/1 strings, found `{ch}`"
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("empty assignment".into()));
    }
    Ok(Assignment(out))
}

/// Parses a rational CLI argument (`P` or `P/Q`).
pub fn parse_rational_arg(text: &str) -> Result<Value, CliError> {
    let value: Value = text
        .parse()
        .map_err(|e: surjvcsp::Error| CliError::Usage(e.to_string()))?;
    if !value.is_finite() {
        return Err(CliError::Usage("expected a finite rational".into()));
    }
    Ok(value)
}

pub use surjvcsp::gadgets::ParityCheckMatrix;

/// Builds the parity check matrix type from parsed rows.
pub fn matrix_from_rows(rows: Vec<Vec<bool>>) -> Result<ParityCheckMatrix, CliError> {
    ParityCheckMatrix::new(rows).map_err(CliError::from)
}

// Re-exported so the binary and the tests share one commented example.
pub const EXAMPLE_INSTANCE: &str = "\
boolean-vcsp
# global min-cut on a unit 4-cycle
vars 4
rel softeq 2 0 1 1 0
con 1 softeq 1 2
con 1 softeq 2 3
con 1 softeq 3 4
con 1 softeq 4 1
";
