//! Commands behind the `fewnomial` binary. Each command returns an
//! [`Outcome`] holding a JSON report, a short text rendering and an exit code.

pub mod corpus;
pub mod plot;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use serde_json::{json, Value};

use fewnomial::bounds::{
    best_root_bound_with, component_bounds, make_witness, polygon_class_bound, Structure,
    WitnessKind,
};
use fewnomial::curves::{count_components, ComponentReport};
use fewnomial::polytope::{is_pyramidal, system_mixed_volume_zero, PolytopeInfo};
use fewnomial::reduce::{
    classify_case, count_roots, trinomial_canonical, univariate_reduction, CanonicalOutcome,
};
use fewnomial::system::parse_system;
use fewnomial::{Error, Fewnomial, FewnomialSystem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Flags shared by every command.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Options {
    pub window: f64,
    pub grid: usize,
    /// Recorded in reports; every current pipeline is deterministic.
    pub seed: u64,
    pub tol: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            window: fewnomial::curves::DEFAULT_WINDOW,
            grid: fewnomial::curves::DEFAULT_GRID,
            seed: 0,
            tol: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn new(json: Value, text: String, code: i32) -> Outcome {
        Outcome { json, text, code }
    }
}

/// Exit code for a library error.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<Error>() {
        Some(Error::Schema { .. } | Error::Validation(_) | Error::DimensionMismatch { .. }) => {
            EXIT_SCHEMA
        }
        Some(Error::Numerical(_) | Error::NearBoundary | Error::Continuum(_)) => EXIT_NUMERICAL,
        Some(_) => EXIT_FAIL,
        None if err.downcast_ref::<serde_json::Error>().is_some() => EXIT_SCHEMA,
        None => EXIT_FAIL,
    }
}

pub fn load_system(path: &Path) -> anyhow::Result<FewnomialSystem> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_system(&text)?)
}

fn member(f: &FewnomialSystem, k: usize) -> anyhow::Result<Fewnomial> {
    f.members().get(k).cloned().ok_or_else(|| {
        Error::Validation(format!(
            "member {k} does not exist; the system has {}",
            f.len()
        ))
        .into()
    })
}

pub fn default_corpus() -> PathBuf {
    match std::env::var_os("FEWNOMIAL_CORPUS") {
        Some(dir) => PathBuf::from(dir),
        None => PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus")),
    }
}

pub fn cmd_bound(path: &Path, structure: Option<&Path>) -> anyhow::Result<Outcome> {
    let f = load_system(path)?;
    let s: Structure = match structure {
        Some(p) => serde_json::from_str(
            &fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        )?,
        None => Structure::default(),
    };
    let r = best_root_bound_with(&f, &s)?;
    let mut text = format!("roots <= {} ({})\n", r.value, r.binding_rule());
    for e in &r.trail {
        text.push_str(&format!("  {:<32} {}\n", e.rule, e.value));
    }
    Ok(Outcome::new(serde_json::to_value(&r)?, text, EXIT_OK))
}

pub fn cmd_component_bounds(n: u64, m: u64) -> anyhow::Result<Outcome> {
    let b = component_bounds(n, m)?;
    let text = format!(
        "compact {}..{}\nnon-compact {}..{}\ntotal <= {}\n",
        b.compact_lower.value,
        b.compact_upper.value,
        b.non_compact_lower.value,
        b.non_compact_upper.value,
        b.total_upper.value
    );
    Ok(Outcome::new(serde_json::to_value(&b)?, text, EXIT_OK))
}

pub fn cmd_count(path: &Path, opts: &Options) -> anyhow::Result<Outcome> {
    let f = load_system(path)?;
    let r = count_roots(&f)?;
    let loose = r
        .roots
        .iter()
        .any(|p| p.residuals.iter().any(|v| *v > opts.tol));
    let mut text = format!(
        "{} roots via {:?}{}\n",
        r.count(),
        r.method,
        if r.certified { "" } else { " (uncertified)" }
    );
    for p in &r.roots {
        let worst = p.residuals.iter().cloned().fold(0.0, f64::max);
        text.push_str(&format!(
            "  {:?}  residual {worst:.2e}{}\n",
            p.x,
            if p.suspect { "  suspect" } else { "" }
        ));
    }
    for d in &r.diagnostics {
        text.push_str(&format!("  note: {d}\n"));
    }
    let code = if r.certified && !loose {
        EXIT_OK
    } else {
        EXIT_NUMERICAL
    };
    Ok(Outcome::new(serde_json::to_value(&r)?, text, code))
}

pub fn cmd_components(path: &Path, index: usize, opts: &Options) -> anyhow::Result<Outcome> {
    let f = load_system(path)?;
    let r = count_components(&member(&f, index)?, opts.window, opts.grid)?;
    let text = components_text(&r);
    let code = if r.certified { EXIT_OK } else { EXIT_NUMERICAL };
    let mut json = serde_json::to_value(&r)?;
    json["seed"] = json!(opts.seed);
    Ok(Outcome::new(json, text, code))
}

fn components_text(r: &ComponentReport) -> String {
    let mut text = format!(
        "{} compact, {} non-compact{}\n",
        r.compact,
        r.non_compact,
        if r.certified { "" } else { " (uncertified)" }
    );
    for (k, c) in r.components.iter().enumerate() {
        let facets: Vec<String> = c
            .escapes
            .iter()
            .map(|e| e.facet.map_or("-".into(), |f| f.to_string()))
            .collect();
        text.push_str(&format!(
            "  #{k}: {} points, {}{}\n",
            c.points.len(),
            if c.compact { "compact" } else { "non-compact" },
            if facets.is_empty() {
                String::new()
            } else {
                format!(", escapes via facets {}", facets.join(","))
            }
        ));
    }
    for d in &r.diagnostics {
        text.push_str(&format!("  note: {d}\n"));
    }
    text
}

pub fn cmd_classify(path: &Path) -> anyhow::Result<Outcome> {
    let f = load_system(path)?;
    let mut json = json!({ "type": f.type_signature(), "n": f.dim() });
    let mut text = format!("type {:?} in {} variables\n", f.type_signature(), f.dim());
    let polys: Vec<Value> = f
        .members()
        .iter()
        .map(|g| {
            PolytopeInfo::of(g)
                .map(|p| json!({"dim": p.dim, "vertices": p.vertex_points()}))
                .unwrap_or(Value::Null)
        })
        .collect();
    json["newton_polytopes"] = json!(polys);
    let mvz = f.len() == f.dim()
        && f.members().iter().all(|g| !g.is_empty())
        && system_mixed_volume_zero(&f)?.is_some();
    json["mixed_volume_zero"] = json!(mvz);
    json["pyramidal"] = serde_json::to_value(is_pyramidal(&f))?;
    if mvz {
        text.push_str("mixed volume zero\n");
    }
    if f.dim() == 2 && f.type_signature() == [3, 3] {
        let b = polygon_class_bound(&f)?;
        let class = b
            .entry("polygon-class")
            .map(|e| e.inputs["class"].clone())
            .unwrap_or(Value::Null);
        text.push_str(&format!("polygon class {} (roots <= {})\n", class, b.value));
        json["polygon_class"] = serde_json::to_value(&b)?;
        if let CanonicalOutcome::Canonical(tc) = trinomial_canonical(&f)? {
            let [a, b, c, d] = tc.abcd();
            let case = classify_case(a, b, c, d);
            text.push_str(&format!(
                "case {:?} for (a,b,c,d) = ({a}, {b}, {c}, {d})\n",
                case.tag
            ));
            json["case"] = serde_json::to_value(&case)?;
        }
    }
    Ok(Outcome::new(json, text, EXIT_OK))
}

pub fn cmd_reduce(path: &Path) -> anyhow::Result<Outcome> {
    let f = load_system(path)?;
    if f.dim() == 2 && f.type_signature() == [3, 3] {
        let c = trinomial_canonical(&f)?;
        let text = match &c {
            CanonicalOutcome::Canonical(tc) => {
                let [a, b, cc, d] = tc.abcd();
                format!(
                    "1 - {} t^{a} (1-t)^{b} - {} t^{cc} (1-t)^{d} on (0, 1)\n",
                    tc.coeffs[0], tc.coeffs[1]
                )
            }
            CanonicalOutcome::Infeasible { member } => {
                format!("member {member} has no positive zeros\n")
            }
            CanonicalOutcome::Segment => "Newton polygons lie on parallel segments\n".into(),
        };
        return Ok(Outcome::new(serde_json::to_value(&c)?, text, EXIT_OK));
    }
    let r = univariate_reduction(&f)?;
    let text = match &r {
        fewnomial::reduce::ReductionOutcome::Reduced(red) => format!(
            "univariate in x{} with {} terms over {} linear forms, interval {:?}\n",
            red.parameter + 1,
            red.lfp.len(),
            red.lfp.forms().len(),
            red.interval
        ),
        fewnomial::reduce::ReductionOutcome::NoIsolatedRoots { .. } => "no isolated roots\n".into(),
    };
    Ok(Outcome::new(serde_json::to_value(&r)?, text, EXIT_OK))
}

pub fn cmd_witness(kind: &str, n: usize, m: usize) -> anyhow::Result<Outcome> {
    let w = make_witness(kind.parse::<WitnessKind>()?, n, m)?;
    let text = format!("{}\n", w.system.to_json());
    Ok(Outcome::new(serde_json::to_value(&w)?, text, EXIT_OK))
}

pub fn cmd_verify(dir: &Path, opts: &Options) -> anyhow::Result<Outcome> {
    let results = corpus::verify_dir(dir, opts)?;
    let mut text = String::new();
    for r in &results {
        text.push_str(&format!(
            "{:<4} {:<24} {:>7.2}s  {}\n",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.seconds,
            r.detail
        ));
    }
    let passed = results.iter().filter(|r| r.pass).count();
    text.push_str(&format!("{passed}/{} entries pass\n", results.len()));
    let code = if passed == results.len() {
        EXIT_OK
    } else {
        EXIT_FAIL
    };
    Ok(Outcome::new(serde_json::to_value(&results)?, text, code))
}

pub fn cmd_plot(path: &Path, index: usize, svg: &Path, opts: &Options) -> anyhow::Result<Outcome> {
    let f = load_system(path)?;
    let r = count_components(&member(&f, index)?, opts.window, opts.grid)?;
    fs::write(svg, plot::render_svg(&r)).with_context(|| format!("writing {}", svg.display()))?;
    let text = format!("{}wrote {}\n", components_text(&r), svg.display());
    let code = if r.certified { EXIT_OK } else { EXIT_NUMERICAL };
    Ok(Outcome::new(
        json!({"svg": svg, "compact": r.compact, "non_compact": r.non_compact, "certified": r.certified}),
        text,
        code,
    ))
}
