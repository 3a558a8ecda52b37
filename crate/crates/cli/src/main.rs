//! `wallspace`: spec validation, properness and dispersal experiments,
//! hyperbolic geodesic-measure checks, and modular-weight reports.
//!
//! Exit codes: 0 success, 2 validation failure, 3 truncation, 4 numeric,
//! 5 instability, 64 usage.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use wallspace::assembly::AmalgamWallspace;
use wallspace::dispersal::{coset_distance_table, dispersal_profile};
use wallspace::graph_spec::{
    modular_weights, monic_rescale, parse_spec, validate, GraphOfGroupsSpec, ValidationBudgets,
};
use wallspace::group::amalgam::VertexKind;
use wallspace::group::free::FreeWord;
use wallspace::group::{GroupElement, SubgroupSpec};
use wallspace::hyperbolic::{
    calibrate, d0_of_theta0, hyperbolic_distance, random_disjoint_pair, HPoint, Isometry,
    QuadratureSettings,
};
use wallspace::space::Point;
use wallspace::Error;

#[derive(Parser)]
#[command(name = "wallspace", version, about = "measured wallspace experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the gluing axioms of a graph-of-groups spec.
    Validate(SpecArgs),
    /// Per-sphere minimum displacement table for the assembled wallspace.
    Properness(SpecArgs),
    /// Dispersal profile of the subgroup named in the spec.
    Dispersal(SpecArgs),
    /// Hyperbolic geodesic-measure calibration, Crofton and bound checks.
    Hyp(HypArgs),
    /// Modular weights, cycle products, and the monic rescale.
    Modular(SpecArgs),
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct SpecArgs {
    /// Path to the JSON spec document.
    spec: PathBuf,
    /// Tree / table truncation radius.
    #[arg(long, default_value_t = 6)]
    radius: u32,
    /// Orbit truncation budget.
    #[arg(long, default_value_t = 4)]
    orbit: u32,
    /// Relative tolerance for numeric checks.
    #[arg(long, default_value_t = 0.02)]
    tol: f64,
    /// Random seed (all commands are deterministic given it).
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; each command has a natural default.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct HypArgs {
    #[arg(long, default_value_t = 6)]
    radius: u32,
    #[arg(long, default_value_t = 4)]
    orbit: u32,
    #[arg(long, default_value_t = 0.02)]
    tol: f64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

struct Failure {
    code: u8,
    msg: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 64, msg: msg.into() }
}

fn lib_err(e: Error) -> Failure {
    let code = match &e {
        Error::TruncationOverflow { .. } | Error::HostOutsideTruncation(_) | Error::TableTooLarge(_) => 3,
        Error::QuadratureDivergence(_)
        | Error::BisectionFailure
        | Error::CrossingAxes
        | Error::NotTranslationAxis
        | Error::RankDeficient
        | Error::NotCubeType => 4,
        Error::UnstableTruncation(_) | Error::UndecidableAtRadius { .. } => 5,
        _ => 2,
    };
    Failure { code, msg: e.to_string() }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap's own help/version output keeps exit 0
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(64);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let outcome = match cli.command {
        Command::Validate(a) => cmd_validate(&a),
        Command::Properness(a) => cmd_properness(&a),
        Command::Dispersal(a) => cmd_dispersal(&a),
        Command::Hyp(a) => cmd_hyp(&a),
        Command::Modular(a) => cmd_modular(&a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol > 0.0 && tol < 0.2 {
        Ok(())
    } else {
        Err(usage(format!("tolerance {tol} outside (0, 0.2)")))
    }
}

fn read_spec(path: &PathBuf) -> Result<GraphOfGroupsSpec, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_spec(&text).map_err(lib_err)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(p) => std::fs::write(p, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
    }
}

fn format_of(args_format: Option<Format>, natural: Format) -> Format {
    args_format.unwrap_or(natural)
}

fn cmd_validate(a: &SpecArgs) -> Result<u8, Failure> {
    check_tol(a.tol)?;
    if format_of(a.format, Format::Json) == Format::Csv {
        return Err(usage("validate reports are JSON only"));
    }
    let spec = read_spec(&a.spec)?;
    let report = validate(&spec, ValidationBudgets { rep_radius: 3, orbit_k: a.orbit });
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    emit(&a.out, &format!("{text}\n"))?;
    Ok(if report.pass { 0 } else { 2 })
}

fn cmd_modular(a: &SpecArgs) -> Result<u8, Failure> {
    check_tol(a.tol)?;
    if format_of(a.format, Format::Json) == Format::Csv {
        return Err(usage("modular reports are JSON only"));
    }
    let spec = read_spec(&a.spec)?;
    let data = modular_weights(&spec);
    let rescale = match monic_rescale(&spec, 0) {
        Ok(r) => json!({
            "lambdas": r.vertices.iter().map(|v| v.lambda).collect::<Vec<_>>(),
        }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let report = json!({
        "weights": data.weights,
        "cycles": data.cycles,
        "image_trivial": data.image_trivial(),
        "rescale": rescale,
    });
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    emit(&a.out, &format!("{text}\n"))?;
    Ok(0)
}

fn cmd_properness(a: &SpecArgs) -> Result<u8, Failure> {
    check_tol(a.tol)?;
    let spec = read_spec(&a.spec)?;
    let aw = AmalgamWallspace::assemble(&spec, a.radius, 3).map_err(lib_err)?;
    let rows = aw.properness_profile(a.radius).map_err(lib_err)?;
    let text = match format_of(a.format, Format::Csv) {
        Format::Csv => {
            let mut s = String::from("n,min_hash,argmin_word\n");
            for r in &rows {
                s.push_str(&format!("{},{},{}\n", r.n, r.min_hash, r.argmin_word));
            }
            s
        }
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&rows).expect("rows serialize")),
    };
    emit(&a.out, &text)?;
    Ok(0)
}

fn cmd_dispersal(a: &SpecArgs) -> Result<u8, Failure> {
    check_tol(a.tol)?;
    let spec = read_spec(&a.spec)?;
    let Some(req) = spec.dispersal.clone() else {
        return Err(usage("spec has no dispersal section"));
    };
    let model = spec.vertex_model(req.vertex);
    let w = spec.vertex_wallspace(req.vertex);
    let kind = spec.vertices[req.vertex].kind.clone();
    let gens: Vec<GroupElement> = req
        .subgroup
        .iter()
        .map(|g| match kind {
            VertexKind::FreeAbelian { .. } => GroupElement::Abelian(g.clone()),
            VertexKind::Free { .. } => {
                GroupElement::Free(FreeWord::new(g.iter().map(|&x| x as i32)))
            }
        })
        .collect();
    let x = match &kind {
        VertexKind::FreeAbelian { rank } => Point::lattice(vec![0; *rank]),
        VertexKind::Free { .. } => Point::tree(FreeWord::identity()),
    };
    let h = SubgroupSpec::new(&model, gens).map_err(lib_err)?;
    let table = coset_distance_table(&w, &model, &h, &x, a.radius, a.orbit).map_err(lib_err)?;
    table.ensure_stable().map_err(lib_err)?;
    let profile = dispersal_profile(&table, &req.grid).map_err(lib_err)?;
    let text = match format_of(a.format, Format::Csv) {
        Format::Csv => {
            let mut s = String::from("d,n_of_d\n");
            for &(d, n) in &profile.entries {
                s.push_str(&format!("{d},{n}\n"));
            }
            s.push_str("# stable: true\n");
            s
        }
        Format::Json => {
            let rows: Vec<_> =
                profile.entries.iter().map(|&(d, n)| json!({"d": d, "n_of_d": n})).collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&json!({"stable": true, "profile": rows}))
                    .expect("profile serializes")
            )
        }
    };
    emit(&a.out, &text)?;
    Ok(0)
}

fn cmd_hyp(a: &HypArgs) -> Result<u8, Failure> {
    check_tol(a.tol)?;
    if format_of(a.format, Format::Json) == Format::Csv {
        return Err(usage("hyp reports are JSON only"));
    }
    let gm = calibrate(&QuadratureSettings { tol: Some(a.tol), ..Default::default() })
        .map_err(lib_err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let origin = HPoint::new(0.0, 0.0);
    let mut crofton = Vec::new();
    let mut all_pass = true;
    for _ in 0..20 {
        let d: f64 = rng.gen_range(0.5..5.0);
        let iso = Isometry::rotation(rng.gen_range(0.0..std::f64::consts::TAU))
            .compose(&Isometry::boost(rng.gen_range(0.0..1.0)));
        let x = iso.apply(&origin);
        let y = iso.apply(&HPoint::new((d / 2.0).tanh(), 0.0));
        let measured = gm.crossing_measure(&x, &y);
        let exact = hyperbolic_distance(&x, &y);
        let rel = (measured - exact).abs() / exact;
        all_pass &= rel <= a.tol;
        crofton.push(json!({"d": exact, "measured": measured, "rel_err": rel}));
    }
    let theta0 = gm.half_measure_angle().map_err(lib_err)?;
    let d0 = d0_of_theta0(theta0);
    let mut bounds = Vec::new();
    for _ in 0..50 {
        let d = rng.gen_range(2.0..8.0);
        let (a1, a2) = random_disjoint_pair(d, &mut rng);
        let rep = gm.distance_bound_check(&a1, &a2, theta0).map_err(lib_err)?;
        all_pass &= rep.pass;
        bounds.push(json!({
            "distance": rep.distance,
            "lhs": rep.lhs,
            "rhs": rep.rhs,
            "pass": rep.pass,
        }));
    }
    let report = json!({
        "calibration_c": gm.c,
        "alpha_steps": gm.alpha_steps,
        "theta0": theta0,
        "d0": d0,
        "crofton": crofton,
        "bound_trials": bounds,
        "pass": all_pass,
    });
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    emit(&a.out, &format!("{text}\n"))?;
    Ok(if all_pass { 0 } else { 4 })
}
