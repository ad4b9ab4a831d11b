//! Plain-text renderings for `--pretty`. They work from the JSON value, so
//! text and JSON output can never disagree.

use serde_json::Value;

fn s(v: &Value) -> String {
    match v {
        Value::String(x) => x.clone(),
        other => other.to_string(),
    }
}

fn list(v: &Value) -> Vec<String> {
    v.as_array().map(|a| a.iter().map(s).collect()).unwrap_or_default()
}

fn statements(v: &Value) -> String {
    let items = list(v);
    if items.is_empty() {
        "(none)".into()
    } else {
        items.iter().map(|x| format!("({x})")).collect::<Vec<_>>().join(" ")
    }
}

fn edges(dag: &Value) -> String {
    let es: Vec<String> = dag["edges"]
        .as_array()
        .map(|a| a.iter().map(|e| format!("{}->{}", e[0], e[1])).collect())
        .unwrap_or_default();
    if es.is_empty() {
        "(no edges)".into()
    } else {
        es.join(" ")
    }
}

fn table(rows: &Value) -> String {
    let cells: Vec<Vec<String>> = rows.as_array().map(|r| r.iter().map(list).collect()).unwrap_or_default();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    cells
        .iter()
        .map(|r| r.iter().map(|c| format!("{c:>width$}")).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn text(kind: &str, v: &Value) -> String {
    let mut out = Vec::<String>::new();
    match kind {
        "maxoid" => {
            out.extend(list(v));
            if out.is_empty() {
                out.push("(empty maxoid)".into());
            }
        }
        "kleene" => {
            out.push(table(&v["kleene_star"]));
            if v["generic"] == Value::Bool(true) {
                out.push("generic".into());
            } else {
                let w = &v["genericity_witness"];
                out.push(format!("not generic: tied critical paths {} and {}", w[0], w[1]));
            }
        }
        "fan" => {
            let cones = v["cones"].as_array().cloned().unwrap_or_default();
            out.push(format!("{} maximal cones on edges {}", cones.len(), edges(&v["dag"])));
            for (k, c) in cones.iter().enumerate() {
                out.push(format!("cone {k}: {}", statements(&c["maxoid"])));
                for ineq in c["inequalities"].as_array().into_iter().flatten() {
                    out.push(format!("  {}", s(&ineq["text"])));
                }
                out.push(format!("  witness {}", list(&c["witness"]).join(" ")));
            }
            let adj: Vec<String> = v["adjacency"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|p| format!("{}-{}", p[0], p[1]))
                .collect();
            out.push(format!("adjacent: {}", adj.join(" ")));
            out.push(format!("lineality dimension {}", v["lineality_dimension"]));
        }
        "polytope" => {
            out.push(format!("dimension {}, f-vector {}", v["dim"], v["f_vector"]));
            for (k, p) in v["vertices"].as_array().into_iter().flatten().enumerate() {
                out.push(format!("v{k}: {p}"));
            }
            for f in v["faces"].as_array().into_iter().flatten() {
                let mut line = format!("dim {} face {}", f["dim"], f["vertices"]);
                if !f["maxoid"].is_null() {
                    line += &format!(": {}", statements(&f["maxoid"]));
                }
                out.push(line);
            }
        }
        "census" => {
            for key in ["tdags", "maxoids", "generic"] {
                if !v[key].is_null() {
                    out.push(format!("{key:>8} {}", v[key]));
                }
            }
            for m in v["all"].as_array().into_iter().flatten() {
                out.push(statements(m));
            }
        }
        "implies" => {
            let verb = if v["holds"] == Value::Bool(true) { "holds" } else { "fails" };
            let generic = if v["generic"] == Value::Bool(true) { ", generic" } else { "" };
            out.push(format!(
                "{} => {}: {verb} ({}{generic})",
                list(&v["premises"]).join(", "),
                list(&v["conclusions"]).join(", "),
                s(&v["mode"])
            ));
            if let Some(c) = v.get("counterexample").filter(|c| !c.is_null()) {
                out.push(format!("counterexample on edges {}", edges(c)));
                out.push(table(&c["weights"]));
                out.push(format!("maxoid {}", statements(&c["maxoid"])));
            }
        }
        "axioms" => {
            for (rule, reports) in v["rules"].as_object().into_iter().flatten() {
                let reports = reports.as_array().cloned().unwrap_or_default();
                out.push(format!("{rule}: {} violation(s)", reports.len()));
                for r in &reports {
                    let slots: Vec<String> = r["slots"]
                        .as_array()
                        .into_iter()
                        .flatten()
                        .map(|p| format!("{}={{{}}}", s(&p[0]), s(&p[1])))
                        .collect();
                    out.push(format!(
                        "  {} [{}] has {} lacks {}",
                        s(&r["rule"]),
                        slots.join(" "),
                        statements(&r["premises"]),
                        statements(&r["missing"])
                    ));
                }
            }
        }
        "tdags" => {
            for g in v.as_array().into_iter().flatten() {
                out.push(edges(g));
            }
        }
        _ => out.push(v.to_string()),
    }
    out.join("\n")
}
