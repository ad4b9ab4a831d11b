//! Text formats: DAG and weight JSON, maxoid JSON, CI statements and
//! implication queries. Every parser here accepts untrusted input and
//! reports problems as [`Error::Parse`] or a validation error, never a panic.

use serde_json::{json, Value};

use crate::graph::{Dag, Node};
use crate::nodeset::{NodeSet, MAX_NODES};
use crate::rational::{format_rational, ExtRational, Rational};
use crate::separation::{CiStatement, Maxoid};
use crate::tropical::WeightedDag;
use crate::{Error, Result};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn json_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(format!("invalid JSON: {e}")))
}

fn as_node(v: &Value) -> Result<Node> {
    let k = v
        .as_u64()
        .ok_or_else(|| parse_err(format!("expected a node id, got {v}")))?;
    if k == 0 || k > MAX_NODES as u64 {
        return Err(parse_err(format!("node id {k} outside 1..={MAX_NODES}")));
    }
    Ok(k as Node)
}

/// `{"n": 4, "edges": [[1, 2], [2, 4]]}`.
pub fn parse_dag_json(text: &str) -> Result<Dag> {
    dag_from_value(&json_value(text)?)
}

pub fn dag_from_value(v: &Value) -> Result<Dag> {
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err("DAG must be a JSON object"))?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err("DAG needs a nonnegative integer field \"n\""))?;
    if n > MAX_NODES as u64 {
        return Err(Error::TooManyNodes(n.min(usize::MAX as u64) as usize));
    }
    let edges = obj
        .get("edges")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("DAG needs an array field \"edges\""))?;
    let mut out = Vec::with_capacity(edges.len());
    for e in edges {
        match e.as_array().map(Vec::as_slice) {
            Some([u, v]) => out.push((as_node(u)?, as_node(v)?)),
            _ => return Err(parse_err(format!("edge must be a pair [u, v], got {e}"))),
        }
    }
    Dag::from_edges(n as usize, &out)
}

pub fn dag_to_value(g: &Dag) -> Value {
    json!({ "n": g.n(), "edges": g.edges().iter().map(|&(u, v)| json!([u, v])).collect::<Vec<_>>() })
}

/// Rationals are strings `"p/q"`, integer strings, or JSON integers;
/// `"-inf"` is the tropical zero. Floats are rejected.
pub fn ext_rational_from_value(v: &Value) -> Result<ExtRational> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(num) if num.is_i64() || num.is_u64() => num.to_string().parse(),
        _ => Err(parse_err(format!("expected a rational string or integer, got {v}"))),
    }
}

fn rational_from_value(v: &Value) -> Result<Rational> {
    match ext_rational_from_value(v)? {
        ExtRational::Finite(r) => Ok(r),
        ExtRational::NegInf => Err(parse_err("edge weight cannot be -inf")),
    }
}

pub fn rational_to_value(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn ext_rational_to_value(r: &ExtRational) -> Value {
    Value::String(r.to_string())
}

/// Either an `n x n` matrix (finite entries exactly on the edges) or a list
/// of edge weights in sorted edge order. A list needs `graph`; a matrix
/// without `graph` defines the graph by its finite entries.
pub fn parse_weights_json(text: &str, graph: Option<&Dag>) -> Result<WeightedDag> {
    weights_from_value(&json_value(text)?, graph)
}

pub fn weights_from_value(v: &Value, graph: Option<&Dag>) -> Result<WeightedDag> {
    let items = v
        .as_array()
        .ok_or_else(|| parse_err("weights must be a JSON array"))?;
    let is_matrix = !items.is_empty() && items.iter().all(Value::is_array);
    if is_matrix {
        if items.len() > MAX_NODES {
            return Err(Error::TooManyNodes(items.len()));
        }
        let m = items
            .iter()
            .map(|row| {
                row.as_array()
                    .expect("checked")
                    .iter()
                    .map(ext_rational_from_value)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        match graph {
            Some(g) => WeightedDag::from_matrix(g.clone(), &m),
            None => WeightedDag::from_support(&m),
        }
    } else {
        let g = graph.ok_or_else(|| parse_err("an edge-ordered weight list needs a graph"))?;
        let w = items.iter().map(rational_from_value).collect::<Result<Vec<_>>>()?;
        WeightedDag::new(g.clone(), w)
    }
}

pub fn weights_to_value(wd: &WeightedDag) -> Value {
    Value::Array(
        wd.matrix()
            .iter()
            .map(|row| Value::Array(row.iter().map(ext_rational_to_value).collect()))
            .collect(),
    )
}

pub fn weight_list_to_value(w: &[Rational]) -> Value {
    Value::Array(w.iter().map(rational_to_value).collect())
}

fn parse_node(tok: &str) -> Result<Node> {
    let t = tok.trim();
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) || t.len() > 3 {
        return Err(Error::InvalidStatement(format!("bad node id {tok:?}")));
    }
    let k: usize = t.parse().expect("digits");
    if k == 0 || k > MAX_NODES {
        return Err(Error::InvalidStatement(format!("node id {k} outside 1..={MAX_NODES}")));
    }
    Ok(k)
}

fn parse_node_list(s: &str, compact: bool) -> Result<Vec<Node>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if compact && !s.contains(',') {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| parse_node(c.encode_utf8(&mut [0; 4])))
            .collect()
    } else {
        s.split(',').map(parse_node).collect()
    }
}

/// `"i,j|k1,k2"` (conditioning side may be empty) or the compact digit form
/// `"ij|kl"` for single-digit nodes. A comma on the left selects the comma
/// form for both sides. With `n`, nodes must lie in `1..=n`.
pub fn parse_ci_statement(text: &str, n: Option<usize>) -> Result<CiStatement> {
    let (left, right) = text
        .split_once('|')
        .ok_or_else(|| Error::InvalidStatement(format!("missing '|' in {text:?}")))?;
    if right.contains('|') {
        return Err(Error::InvalidStatement(format!("more than one '|' in {text:?}")));
    }
    let compact = !left.contains(',');
    let ij = parse_node_list(left, compact)?;
    let [i, j] = ij[..] else {
        return Err(Error::InvalidStatement(format!(
            "expected two nodes before '|' in {text:?}"
        )));
    };
    let cond_nodes = parse_node_list(right, compact)?;
    let cond: NodeSet = cond_nodes.iter().copied().collect();
    if cond.len() != cond_nodes.len() {
        return Err(Error::InvalidStatement(format!("repeated conditioning node in {text:?}")));
    }
    let s = CiStatement::new(i, j, cond)?;
    if let Some(n) = n {
        if s.max_node() > n {
            return Err(Error::NodeOutOfRange { node: s.max_node(), n });
        }
    }
    Ok(s)
}

fn parse_statement_list(text: &str, n: Option<usize>) -> Result<Vec<CiStatement>> {
    let parts: Vec<&str> = if text.contains(';') {
        text.split(';').map(str::trim).filter(|t| !t.is_empty()).collect()
    } else {
        // a comma glued to the end of a token separates statements
        text.split_whitespace()
            .map(|t| t.trim_end_matches(','))
            .filter(|t| !t.is_empty())
            .collect()
    };
    parts.into_iter().map(|t| parse_ci_statement(t, n)).collect()
}

/// `"premises => conclusions"`; statements on each side separated by `;`
/// or, when no `;` is present, by whitespace (optionally after a comma).
pub fn parse_query(text: &str, n: Option<usize>) -> Result<(Vec<CiStatement>, Vec<CiStatement>)> {
    let (lhs, rhs) = text
        .split_once("=>")
        .ok_or_else(|| parse_err(format!("missing '=>' in query {text:?}")))?;
    if rhs.contains("=>") {
        return Err(parse_err("query has more than one '=>'"));
    }
    Ok((parse_statement_list(lhs, n)?, parse_statement_list(rhs, n)?))
}

pub fn statement_to_value(s: &CiStatement) -> Value {
    Value::String(s.to_string())
}

/// Sorted list of statement strings.
pub fn maxoid_to_value(m: &Maxoid) -> Value {
    Value::Array(m.iter().map(statement_to_value).collect())
}

/// A list of statement strings, or `{"n": .., "statements": [..]}`. For a
/// bare list the ground set size is `n` if given, else the largest node.
pub fn parse_maxoid_json(text: &str, n: Option<usize>) -> Result<Maxoid> {
    maxoid_from_value(&json_value(text)?, n)
}

pub fn maxoid_from_value(v: &Value, n: Option<usize>) -> Result<Maxoid> {
    let (items, n) = match v {
        Value::Array(items) => (items, n),
        Value::Object(obj) => {
            let items = obj
                .get("statements")
                .and_then(Value::as_array)
                .ok_or_else(|| parse_err("maxoid object needs an array field \"statements\""))?;
            let declared = match obj.get("n") {
                Some(k) => Some(
                    k.as_u64()
                        .filter(|&k| k <= MAX_NODES as u64)
                        .ok_or_else(|| parse_err("maxoid \"n\" must be an integer up to 63"))?
                        as usize,
                ),
                None => None,
            };
            (items, declared.or(n))
        }
        _ => return Err(parse_err("maxoid must be a JSON array or object")),
    };
    let stmts = items
        .iter()
        .map(|s| {
            let t = s
                .as_str()
                .ok_or_else(|| parse_err(format!("statement must be a string, got {s}")))?;
            parse_ci_statement(t, n)
        })
        .collect::<Result<Vec<_>>>()?;
    let n = n.unwrap_or_else(|| stmts.iter().map(CiStatement::max_node).max().unwrap_or(0));
    Maxoid::new(n, stmts)
}
