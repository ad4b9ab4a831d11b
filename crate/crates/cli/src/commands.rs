use std::fmt;
use std::fs;
use std::path::Path as FsPath;

use maxoid::axioms::{
    check_amalgamation, check_compositional_graphoid, check_strong_spohn, check_weak_transitivity,
    CheckOptions, ViolationReport,
};
use maxoid::census::{all_maxoids, all_top_ordered_tdags, census, Cache};
use maxoid::fan::{cone_adjacency, edge_var_name, enumerate_maximal_cones, lineality_dimension};
use maxoid::format::{
    dag_to_value, maxoid_to_value, parse_dag_json, parse_maxoid_json, parse_query, parse_weights_json,
    statement_to_value, weight_list_to_value, weights_to_value,
};
use maxoid::implication::{decide_implication, GraphClass, Scope};
use maxoid::linarith::Constraint;
use maxoid::polytope::{face_maxoid, vertices_of, Polytope};
use maxoid::separation::maxoid;
use maxoid::tropical::{genericity_witness, kleene_star};
use maxoid::{Dag, Maxoid, WeightedDag};
use serde_json::{json, Value};

use crate::render;
use crate::{AxiomsArgs, Command, ImpliesArgs, WeightedInput};

/// Largest `n` for which the census runs without `--unbounded`.
const CENSUS_BOUND: usize = 5;

#[derive(Debug)]
pub struct CliError {
    kind: &'static str,
    message: String,
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        self.kind
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<maxoid::Error> for CliError {
    fn from(e: maxoid::Error) -> Self {
        CliError {
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        kind: "usage",
        message: message.into(),
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &FsPath) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError {
        kind: "io",
        message: format!("{}: {e}", path.display()),
    })
}

fn load_dag(path: &FsPath) -> Result<Dag> {
    Ok(parse_dag_json(&read(path)?)?)
}

fn load_weighted(input: &WeightedInput) -> Result<WeightedDag> {
    let g = load_dag(&input.dag)?;
    Ok(parse_weights_json(&read(&input.weights)?, Some(&g))?)
}

fn finish(kind: &str, v: Value, pretty: bool) -> String {
    if pretty {
        render::text(kind, &v)
    } else {
        v.to_string()
    }
}

pub fn run(cmd: &Command, pretty: bool) -> Result<String> {
    match cmd {
        Command::Maxoid(input) => {
            let wd = load_weighted(input)?;
            Ok(finish("maxoid", maxoid_to_value(&maxoid(&wd)), pretty))
        }
        Command::Kleene(input) => Ok(finish("kleene", kleene(&load_weighted(input)?), pretty)),
        Command::Fan { dag } => Ok(finish("fan", fan(&load_dag(dag)?), pretty)),
        Command::Polytope {
            dag,
            dot,
            no_face_maxoids,
        } => {
            let g = load_dag(dag)?;
            let cones = enumerate_maximal_cones(&g);
            let points = vertices_of(&g, &cones).into_iter().map(|(_, v)| v).collect();
            let p = Polytope::new(points)?;
            if *dot {
                return Ok(p.face_lattice().to_dot().trim_end().to_string());
            }
            Ok(finish("polytope", polytope(&g, &p, !no_face_maxoids)?, pretty))
        }
        Command::Census {
            nodes,
            generic_only,
            unbounded,
            dump,
        } => {
            if *nodes > CENSUS_BOUND && !unbounded {
                return Err(usage(format!(
                    "the census on {nodes} nodes is very long running; pass --unbounded to run it"
                )));
            }
            let cache = Cache::from_env();
            let v = if *generic_only {
                let family = all_top_ordered_tdags(*nodes)?;
                let generic = all_maxoids(&family, true, cache.as_ref())?;
                let mut v = json!({ "tdags": family.graphs.len(), "generic": generic.len() });
                if *dump {
                    v["all"] = maxoid_list(&generic);
                }
                v
            } else {
                let (counts, all) = census(*nodes, cache.as_ref())?;
                let mut v = json!({ "tdags": counts.tdags, "maxoids": counts.maxoids, "generic": counts.generic });
                if *dump {
                    v["all"] = maxoid_list(&all);
                }
                v
            };
            Ok(finish("census", v, pretty))
        }
        Command::Implies(args) => Ok(finish("implies", implies(args)?, pretty)),
        Command::Axioms(args) => Ok(finish("axioms", axioms(args)?, pretty)),
        Command::Tdags { nodes, dot } => {
            let family = all_top_ordered_tdags(*nodes)?;
            if *dot {
                let dots: Vec<String> = family.graphs.iter().map(Dag::to_dot).collect();
                return Ok(dots.join("").trim_end().to_string());
            }
            let v = Value::Array(family.graphs.iter().map(dag_to_value).collect());
            Ok(finish("tdags", v, pretty))
        }
    }
}

fn maxoid_list<'a>(ms: impl IntoIterator<Item = &'a Maxoid>) -> Value {
    Value::Array(ms.into_iter().map(maxoid_to_value).collect())
}

fn kleene(wd: &WeightedDag) -> Value {
    let star = kleene_star(wd);
    let matrix: Vec<Value> = star
        .rows()
        .iter()
        .map(|row| Value::Array(row.iter().map(|x| Value::String(x.to_string())).collect()))
        .collect();
    let witness = genericity_witness(wd).map(|(a, b)| json!([a.nodes(), b.nodes()]));
    json!({
        "kleene_star": matrix,
        "generic": witness.is_none(),
        "genericity_witness": witness,
    })
}

fn constraint_value(g: &Dag, c: &Constraint) -> Value {
    let (terms, _) = c.integer_form();
    let mut coeffs = vec![Value::from(0); g.num_edges()];
    for (k, a) in terms {
        coeffs[k] = i64::try_from(&a).map_or_else(|_| Value::String(a.to_string()), Value::from);
    }
    json!({
        "coefficients": coeffs,
        "relation": c.relation().symbol(),
        "text": c.display_with(&|k| edge_var_name(g, k)),
    })
}

fn fan(g: &Dag) -> Value {
    let cones = enumerate_maximal_cones(g);
    let adjacency = cone_adjacency(&cones, g.num_edges());
    let cone_values: Vec<Value> = cones
        .iter()
        .map(|c| {
            let paths: Vec<Value> = c
                .system
                .iter()
                .map(|(&(i, j), p)| json!({ "pair": [i, j], "path": p.nodes() }))
                .collect();
            json!({
                "critical_paths": paths,
                "inequalities": c.cone.strict.iter().map(|r| constraint_value(g, r)).collect::<Vec<_>>(),
                "witness": weight_list_to_value(&c.witness),
                "maxoid": maxoid_to_value(&c.maxoid),
            })
        })
        .collect();
    json!({
        "dag": dag_to_value(g),
        "edges": g.edges().iter().map(|&(u, v)| json!([u, v])).collect::<Vec<_>>(),
        "cones": cone_values,
        "adjacency": adjacency.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
        "lineality_dimension": lineality_dimension(g),
    })
}

fn polytope(g: &Dag, p: &Polytope, with_maxoids: bool) -> Result<Value> {
    let lattice = p.face_lattice();
    let mut faces = Vec::with_capacity(lattice.faces.len());
    for f in &lattice.faces {
        let mut v = json!({ "dim": f.dim, "vertices": f.vertices });
        if with_maxoids {
            v["maxoid"] = maxoid_to_value(&face_maxoid(g, p, f)?);
        }
        faces.push(v);
    }
    Ok(json!({
        "dag": dag_to_value(g),
        "dim": p.dim(),
        "vertices": p.points(),
        "f_vector": p.f_vector(),
        "faces": faces,
        "covers": lattice.covers.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
    }))
}

fn implies(args: &ImpliesArgs) -> Result<Value> {
    let (scope, mode) = match (&args.graph, args.nodes) {
        (Some(path), None) => (Scope::Graph(load_dag(path)?), "local"),
        (None, Some(n)) => {
            let class = if args.all_dags {
                GraphClass::AllDags
            } else if args.posets {
                GraphClass::Posets
            } else {
                GraphClass::Default
            };
            (Scope::Nodes { n, class }, "global")
        }
        _ => return Err(usage("exactly one of --graph and --nodes is required")),
    };
    let n = match &scope {
        Scope::Graph(g) => g.n(),
        Scope::Nodes { n, .. } => *n,
    };
    let (premises, conclusions) = parse_query(&args.query, Some(n))?;
    let verdict = decide_implication(&scope, &premises, &conclusions, args.generic)?;
    let counterexample = verdict.counterexample.as_ref().map(|wd| {
        let mut c = dag_to_value(wd.graph());
        c["weights"] = weights_to_value(wd);
        c["maxoid"] = maxoid_to_value(&maxoid(wd));
        c
    });
    Ok(json!({
        "holds": verdict.holds,
        "mode": mode,
        "generic": args.generic,
        "premises": premises.iter().map(statement_to_value).collect::<Vec<_>>(),
        "conclusions": conclusions.iter().map(statement_to_value).collect::<Vec<_>>(),
        "counterexample": counterexample,
    }))
}

fn report_value(r: &ViolationReport) -> Value {
    let slots: Vec<Value> = r
        .rule
        .slots()
        .iter()
        .zip(&r.slots)
        .map(|(name, set)| json!([name, set.to_string()]))
        .collect();
    json!({
        "rule": r.rule.name(),
        "slots": slots,
        "premises": r.premises.iter().map(statement_to_value).collect::<Vec<_>>(),
        "missing": r.missing.iter().map(statement_to_value).collect::<Vec<_>>(),
    })
}

fn axioms(args: &AxiomsArgs) -> Result<Value> {
    let m = match (&args.maxoid, &args.dag, &args.weights) {
        (Some(path), None, None) => parse_maxoid_json(&read(path)?, args.nodes)?,
        (None, Some(dag), Some(weights)) => maxoid(&load_weighted(&WeightedInput {
            dag: dag.clone(),
            weights: weights.clone(),
        })?),
        _ => return Err(usage("give either <dag> <weights> or --maxoid <file>")),
    };
    let mut opts = CheckOptions {
        set_level: args.set_level,
        ..CheckOptions::default()
    };
    if let Some(k) = args.max_nodes {
        opts.max_nodes = k;
    }
    let groups = [
        ("compositional_graphoid", check_compositional_graphoid(&m, &opts)?),
        ("amalgamation", check_amalgamation(&m, &opts)?),
        ("strong_spohn", check_strong_spohn(&m, &opts)?),
        ("weak_transitivity", check_weak_transitivity(&m, &opts)?),
    ];
    let mut rules = serde_json::Map::new();
    for (name, reports) in &groups {
        rules.insert(name.to_string(), Value::Array(reports.iter().map(report_value).collect()));
    }
    Ok(json!({ "n": m.n(), "maxoid": maxoid_to_value(&m), "rules": rules }))
}
