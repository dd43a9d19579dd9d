//! Command-line front end. Every subcommand prints one JSON document with
//! sorted keys; exit status 0 on success, 1 when the operation itself fails
//! (an exceeded bound, an incomplete solve, a non-ADE input, …) and 2 on
//! usage or parse errors.

use std::collections::HashMap;
use std::io::Read;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::classifier::{consistency, enumerate_quotients, find_top, lemma1_table, theorem1_report};
use crate::fpgroups::{
    abelianization, coset_enumerate, default_coset_bound, hom_count_cyclic, mumford_presentation, Abelianization,
    FpError, Presentation,
};
use crate::lattice::{blow_down_label, ii_star_with_section, recognize_components, CurveConfig};
use crate::plane_action::{builtin_action, close_group, parse_action, quotient_profile, StabilizerType, DEFAULT_GROUP_CAP};
use crate::surfaces::{
    cone_singular_points, curve_singularities, euler_identity, fiber_configurations, germ_classify,
    is_quasi_homogeneous, noether_check, parse_point, parse_weighted, za_surface, KodairaFiber, SolveOutcome,
};

#[derive(Parser, Debug)]
#[command(name = "delpezzo", version, about = "Gorenstein quotients of the projective plane")]
struct Cli {
    /// Indented JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Singularity profile of P²/G for a monomial action.
    Quotient {
        /// JSON file with the generators (`-` for stdin).
        #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
        action: Option<String>,
        #[arg(long)]
        builtin: Option<String>,
        #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
        cap: usize,
    },
    /// Finite covers of a surface from the table, filtered arithmetically.
    Classify {
        /// `P2`, `Q`, a row name such as `V3`, `lemma1:<row>` or a configuration.
        #[arg(long)]
        top: String,
        #[arg(long)]
        degree: Option<u64>,
    },
    /// Degrees and singularity types with simply connected smooth locus.
    Lemma1,
    /// Order and abelianization of a finitely presented group.
    Group {
        /// `gens=2; rel=...`; read from stdin when omitted (text or JSON).
        #[arg(long)]
        presentation: Option<String>,
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long)]
        abelianization: bool,
        /// Count homomorphisms to Z/d.
        #[arg(long)]
        hom: Option<u64>,
    },
    /// Boundary presentation of the E-type configuration with index i.
    Mumford {
        #[arg(long)]
        i: i64,
    },
    /// ADE type of a configuration of curves.
    Recognize {
        #[arg(long)]
        config: String,
    },
    /// Contract (-1)-curves in order.
    Blowdown {
        /// JSON file (`-` for stdin); the II* fibre with a section when omitted.
        #[arg(long)]
        config: Option<String>,
        #[arg(long, required = true)]
        curve: Vec<String>,
    },
    /// Weighted projective hypersurface data.
    Wps {
        #[arg(long, conflicts_with = "za", required_unless_present = "za")]
        poly: Option<String>,
        /// The surface Z_a in P(1,1,2,3) for the given rational a.
        #[arg(long)]
        za: Option<String>,
        /// `name=value`, repeatable.
        #[arg(long)]
        param: Vec<String>,
        #[arg(long)]
        singular: bool,
    },
    /// Node/cusp classification of a plane curve germ.
    Germ {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        at: String,
        #[arg(long)]
        param: Vec<String>,
    },
    /// Singular fibre configurations of an elliptic surface.
    Fibers {
        #[arg(long, default_value = "II*")]
        must: String,
        #[arg(long, default_value_t = 12)]
        total: u32,
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        others_irreducible: bool,
    },
    /// Status of every candidate surface.
    Report,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    /// Operation-level failure with a JSON body.
    Operation(Value),
}

fn usage(msg: impl ToString) -> Failure {
    Failure::Usage(msg.to_string())
}

type Outcome = Result<(i32, Value), Failure>;

pub fn run<I, S>(args: I, stdin: &mut dyn Read) -> CliOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CliOutput { code, stdout: text, stderr: String::new() }
            } else {
                CliOutput { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let render = |v: &Value| {
        let mut s = if cli.pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) }.expect("json");
        s.push('\n');
        s
    };
    match dispatch(cli.command, stdin) {
        Ok((code, v)) => CliOutput { code, stdout: render(&v), stderr: String::new() },
        Err(Failure::Operation(v)) => CliOutput { code: 1, stdout: render(&v), stderr: String::new() },
        Err(Failure::Usage(msg)) => {
            CliOutput { code: 2, stdout: render(&json!({ "error": msg })), stderr: format!("error: {msg}\n") }
        }
    }
}

fn dispatch(cmd: Command, stdin: &mut dyn Read) -> Outcome {
    match cmd {
        Command::Quotient { action, builtin, cap } => quotient(action, builtin, cap, stdin),
        Command::Classify { top, degree } => classify(&top, degree),
        Command::Lemma1 => Ok((0, lemma1())),
        Command::Group { presentation, bound, abelianization, hom } => group(presentation, bound, abelianization, hom, stdin),
        Command::Mumford { i } => mumford(i),
        Command::Recognize { config } => recognize(&config, stdin),
        Command::Blowdown { config, curve } => blowdown(config, &curve, stdin),
        Command::Wps { poly, za, param, singular } => wps(poly, za, &param, singular),
        Command::Germ { poly, at, param } => germ(&poly, &at, &param),
        Command::Fibers { must, total, others_irreducible } => fibers(&must, total, others_irreducible),
        Command::Report => {
            let r = theorem1_report().map_err(|e| Failure::Operation(json!({ "error": e.to_string() })))?;
            Ok((0, r.to_json()))
        }
    }
}

fn read_source(path: &str, stdin: &mut dyn Read) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(|e| usage(format!("reading stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| usage(format!("reading {path}: {e}")))
    }
}

fn big_json(b: &BigInt) -> Value {
    match b.to_u64() {
        Some(x) => json!(x),
        None => json!(b.to_string()),
    }
}

fn ab_json(ab: &Abelianization) -> Value {
    json!({
        "group": ab.to_string(),
        "torsion": ab.torsion.iter().map(big_json).collect::<Vec<_>>(),
        "free_rank": ab.free_rank,
        "order": ab.order().as_ref().map(big_json),
    })
}

fn quotient(action: Option<String>, builtin: Option<String>, cap: usize, stdin: &mut dyn Read) -> Outcome {
    let named = match (action, builtin) {
        (_, Some(name)) => builtin_action(&name).map_err(usage)?,
        (Some(path), None) => parse_action(&read_source(&path, stdin)?).map_err(usage)?,
        (None, None) => return Err(usage("one of --action or --builtin is required")),
    };
    let fail = |e: crate::plane_action::ActionError| Failure::Operation(json!({ "name": named.name, "error": e.to_string() }));
    let group = close_group(&named.generators, cap).map_err(fail)?;
    let profile = quotient_profile(&group).map_err(fail)?;
    let (lhs, rhs) = profile.euler_multiplicativity();
    let mut v = profile.to_json();
    v["name"] = json!(named.name);
    v["generators"] = json!(named.generators.iter().map(|g| g.to_json()).collect::<Vec<_>>());
    v["euler"] = json!({
        "orbifold": profile.orbifold_euler().to_string(),
        "unramified_count": [lhs, rhs],
    });
    let unsupported = profile.orbits.iter().any(|o| matches!(o.classification, StabilizerType::Unsupported(_)));
    Ok((if unsupported { 1 } else { 0 }, v))
}

fn classify(top: &str, degree: Option<u64>) -> Outcome {
    let profile = find_top(top).ok_or_else(|| usage(format!("unknown top `{top}`")))?;
    let e = match degree {
        Some(n) => crate::classifier::enumerate_quotients_of_degrees(&profile, &[n]),
        None => enumerate_quotients(&profile),
    };
    Ok((0, e.to_json(degree)))
}

fn lemma1() -> Value {
    let table = lemma1_table();
    let mut v = table.to_json();
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            let mut row = r.to_json();
            row["consistency"] = consistency(r).to_json();
            row["noether"] = noether_check(r.d as i64, &r.config).map(|n| n.to_json()).unwrap_or(Value::Null);
            row
        })
        .collect();
    v["rows"] = json!(rows);
    let mut pairs: Vec<(String, u32)> = Vec::new();
    for r in table.rows.iter().filter(|r| !r.config.is_empty()) {
        let pair = (r.config.to_string(), r.d);
        if !pairs.contains(&pair) {
            pairs.push(pair);
        }
    }
    v["pairs"] = json!(pairs);
    v
}

fn parse_presentation_input(text: &str) -> Result<Presentation, Failure> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let v: Value = serde_json::from_str(trimmed).map_err(usage)?;
        if let Some(s) = v.get("presentation").and_then(Value::as_str) {
            return s.parse().map_err(usage);
        }
        let p: Presentation = serde_json::from_value(v).map_err(usage)?;
        p.validate().map_err(usage)?;
        return Ok(p);
    }
    trimmed.parse().map_err(usage)
}

fn group(presentation: Option<String>, bound: Option<usize>, ab: bool, hom: Option<u64>, stdin: &mut dyn Read) -> Outcome {
    let text = match presentation {
        Some(s) => s,
        None => read_source("-", stdin)?,
    };
    let p = parse_presentation_input(&text)?;
    let bound = bound.unwrap_or_else(default_coset_bound);
    if hom == Some(0) {
        return Err(usage("--hom needs d >= 1"));
    }
    let mut v = json!({ "presentation": p.to_string(), "bound": bound });
    if ab {
        v["abelianization"] = ab_json(&abelianization(&p));
    }
    if let Some(d) = hom {
        v["hom"] = json!({ "d": d, "count": big_json(&hom_count_cyclic(&p, d)) });
    }
    match coset_enumerate(&p, bound) {
        Ok(t) => {
            v["order"] = json!(t.len());
            Ok((0, v))
        }
        Err(e @ FpError::Exceeded(_)) => {
            v["error"] = json!(e.to_string());
            v["order"] = Value::Null;
            Err(Failure::Operation(v))
        }
        Err(e) => Err(usage(e)),
    }
}

fn mumford(i: i64) -> Outcome {
    let p = mumford_presentation(i).map_err(usage)?;
    let ab = abelianization(&p);
    let d = (9 - i) as u64;
    Ok((
        0,
        json!({
            "i": i,
            "presentation": p.to_string(),
            "generators": p.generators,
            "relators": p.relators,
            "abelianization": ab_json(&ab),
            "hom": { "d": d, "count": big_json(&hom_count_cyclic(&p, d)) },
        }),
    ))
}

fn parse_curve_config(text: &str) -> Result<CurveConfig, Failure> {
    let c: CurveConfig = serde_json::from_str(text).map_err(usage)?;
    c.validate().map_err(usage)?;
    Ok(c)
}

fn recognize(path: &str, stdin: &mut dyn Read) -> Outcome {
    let c = parse_curve_config(&read_source(path, stdin)?)?;
    match recognize_components(&c) {
        Ok(cfg) => Ok((0, json!({ "ade": true, "config": cfg.labels(), "type": cfg.to_string(), "rank": cfg.rank() }))),
        Err(e) => {
            let mut v = serde_json::to_value(&e).expect("serializable");
            v["ade"] = json!(false);
            v["message"] = json!(e.to_string());
            Err(Failure::Operation(v))
        }
    }
}

fn blowdown(path: Option<String>, curves: &[String], stdin: &mut dyn Read) -> Outcome {
    let mut c = match path {
        Some(p) => parse_curve_config(&read_source(&p, stdin)?)?,
        None => ii_star_with_section(),
    };
    let mut steps = Vec::new();
    for label in curves {
        c = blow_down_label(&c, label).map_err(|e| {
            Failure::Operation(json!({ "error": e.to_string(), "contracted": steps, "config": serde_json::to_value(&c).expect("json") }))
        })?;
        steps.push(label.clone());
    }
    let minus_two: Vec<usize> = (0..c.len()).filter(|&i| c.self_intersection(i) == -2).collect();
    let types = recognize_components(&c.restrict(&minus_two));
    Ok((
        0,
        json!({
            "contracted": steps,
            "config": serde_json::to_value(&c).expect("json"),
            "minus_two": match types {
                Ok(cfg) => json!(cfg.labels()),
                Err(e) => json!({ "not_ade": e.to_string() }),
            },
            "rho": c.len() + 1,
        }),
    ))
}

fn parse_params(params: &[String]) -> Result<HashMap<String, BigRational>, Failure> {
    let mut out = HashMap::new();
    for p in params {
        let (k, v) = p.split_once('=').ok_or_else(|| usage(format!("parameter `{p}` is not name=value")))?;
        let q: BigRational = v.trim().parse().map_err(|_| usage(format!("`{v}` is not a rational number")))?;
        out.insert(k.trim().to_string(), q);
    }
    Ok(out)
}

fn points_json(pts: &[Vec<crate::cyclotomic::CyclotomicNumber>]) -> Value {
    json!(pts.iter().map(|p| p.iter().map(|c| c.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn wps(poly: Option<String>, za: Option<String>, params: &[String], singular: bool) -> Outcome {
    let f = match (poly, za) {
        (_, Some(a)) => {
            let a: BigRational = a.trim().parse().map_err(|_| usage(format!("`{a}` is not a rational number")))?;
            za_surface(&a)
        }
        (Some(s), None) => parse_weighted(&s, &parse_params(params)?).map_err(usage)?,
        (None, None) => return Err(usage("one of --poly or --za is required")),
    };
    let degree = is_quasi_homogeneous(&f);
    let mut v = f.to_json();
    v["degree"] = json!(degree);
    v["euler_identity"] = json!(degree.map(|d| euler_identity(&f, d)).unwrap_or(false));
    if !singular {
        return Ok((0, v));
    }
    if f.nvars() == 3 {
        let (sings, complete) = curve_singularities(&f).map_err(usage)?;
        v["singular"] = json!({
            "complete": complete,
            "points": sings.iter().map(|s| json!({
                "chart": s.chart,
                "point": s.point.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "germ": s.germ.to_string(),
            })).collect::<Vec<_>>(),
        });
        return Ok((if complete { 0 } else { 1 }, v));
    }
    let outcome = cone_singular_points(&f).map_err(usage)?;
    v["singular"] = match &outcome {
        SolveOutcome::Complete(p) => json!({ "complete": true, "points": points_json(p) }),
        SolveOutcome::Indeterminate { found, residual } => {
            json!({ "complete": false, "points": points_json(found), "residual": residual })
        }
    };
    Ok((if outcome.is_complete() { 0 } else { 1 }, v))
}

fn germ(poly: &str, at: &str, params: &[String]) -> Outcome {
    let f = parse_weighted(poly, &parse_params(params)?).map_err(usage)?;
    let p = parse_point(at).map_err(usage)?;
    match germ_classify(&f.poly, &p) {
        Ok(g) => Ok((
            0,
            json!({
                "vars": f.names,
                "point": p.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "germ": g.to_string(),
            }),
        )),
        Err(crate::surfaces::SurfaceError::NotOnCurve(val)) => {
            Err(Failure::Operation(json!({ "error": "point is not on the curve", "value": val })))
        }
        Err(e) => Err(usage(e)),
    }
}

fn fibers(must: &str, total: u32, others_irreducible: bool) -> Outcome {
    let must: KodairaFiber = must.parse().map_err(usage)?;
    let configs = fiber_configurations(must, total, others_irreducible);
    Ok((
        0,
        json!({
            "must": must.to_string(),
            "total_euler": total,
            "others_irreducible": others_irreducible,
            "configs": configs.iter().map(|c| c.iter().map(|f| f.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> CliOutput {
        let mut argv = vec!["delpezzo"];
        argv.extend_from_slice(args);
        run(argv, &mut std::io::empty())
    }

    fn value(o: &CliOutput) -> Value {
        serde_json::from_str(&o.stdout).unwrap()
    }

    #[test]
    fn quotient_builtin() {
        let o = call(&["quotient", "--builtin", "z3xz3"]);
        assert_eq!(o.code, 0);
        let v = value(&o);
        assert_eq!(v["k2"], json!(1));
        assert_eq!(v["config"], json!(["A2", "A2", "A2", "A2"]));
    }

    #[test]
    fn fibers_default() {
        let v = value(&call(&["fibers"]));
        assert_eq!(v["configs"], json!([["II*", "II"], ["II*", "I1", "I1"]]));
    }

    #[test]
    fn mumford_pipe() {
        let m = call(&["mumford", "--i", "8"]);
        let mut input = m.stdout.as_bytes();
        let o = run(["delpezzo", "group", "--bound", "10000"], &mut input);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert_eq!(value(&o)["order"], json!(120));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["nonsense"]).code, 2);
        assert_eq!(call(&["quotient", "--builtin", "nope"]).code, 2);
        assert_eq!(call(&["group", "--presentation", "gens=1; rel=1^3", "--bound", "3"]).code, 0);
        assert_eq!(call(&["group", "--presentation", "gens=1", "--bound", "50"]).code, 1);
        assert_eq!(call(&["germ", "--poly", "vars x y; y^2 - x^3", "--at", "1,0"]).code, 1);
    }
}
