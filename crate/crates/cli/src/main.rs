//! Command-line front end for the arith-fractal library.
//!
//! Exit codes: 0 = success / property verified, 1 = property violated
//! (overlap, gap, uncovered seed, inconsistent dimensions, non-member),
//! 2 = usage or input error, 3 = work budget or depth cap exceeded.
//! Errors are emitted as JSON objects on standard error.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use arith_fractal::census::{
    compare, count_pn_ffield, count_pn_q, schanuel_constant, serre_wan_constant, CensusError,
    SchanuelInputs,
};
use arith_fractal::dimension::{
    check_monotone, estimate_dimension, solve_box_equation, DEFAULT_TOL,
};
use arith_fractal::ifs::{
    count_series, generate, member, verify_self_similar, Membership, SimilarityMap,
};
use arith_fractal::projective::{
    check_height_scaling, find_preperiodic, orbit_generate, verify_projective_self_similar,
    Monomial, PolyEndo, ProjPoint,
};
use arith_fractal::rings::Coords;
use arith_fractal::{FractalSpec, RingElement, RingSpec, VerifyStatus};

const EXIT_VIOLATED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "arith-fractal",
    about = "Arithmetic self-similar sets: generation, verification, dimension, dynamics, censuses",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DimFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the disjoint-union self-similarity of a fractal spec inside a norm window.
    Verify {
        /// Path to a fractal spec JSON file.
        #[arg(long)]
        spec: String,
        /// Norm window X (decimal integer).
        #[arg(long)]
        window: String,
    },
    /// Generate the orbit closure truncated to a norm window.
    Generate {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        window: String,
    },
    /// Backward-recursion membership test for one element.
    Member {
        #[arg(long)]
        spec: String,
        /// Element: "n" over Z, "u,v" over a quadratic order.
        #[arg(long)]
        element: String,
        /// Maximum number of backward division steps [default: 10000].
        #[arg(long, default_value_t = 10_000)]
        depth_cap: usize,
    },
    /// Solve the box equation sum N_i^(-s/n_i) = 1 for explicit weights.
    Dim {
        /// Comma-separated weights "N:n" (leading-coefficient norm : degree), e.g. 10:1,10:1,10:1.
        #[arg(long)]
        weights: String,
        /// Bisection tolerance [default: 1e-12].
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = DimFormat::Text)]
        format: DimFormat,
    },
    /// Estimate dimension from exact counts at norm thresholds (log-log fit).
    EstimateDim {
        #[arg(long)]
        spec: String,
        /// Comma-separated ascending norm thresholds, e.g. 10,100,1000.
        #[arg(long)]
        thresholds: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check F_A subset F_B within a window and compare box dimensions.
    Monotone {
        #[arg(long)]
        spec_a: String,
        #[arg(long)]
        spec_b: String,
        #[arg(long)]
        window: String,
        /// Dimension comparison tolerance [default: 1e-9].
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Generate a projective orbit closure truncated to a height bound.
    Orbit {
        /// Path to an endomorphism-system JSON file.
        #[arg(long)]
        endos: String,
        /// Height bound H_max (decimal integer).
        #[arg(long)]
        h_max: String,
    },
    /// Verify projective disjoint-union self-similarity inside a height window.
    VerifyProj {
        #[arg(long)]
        endos: String,
        #[arg(long)]
        h_max: String,
        /// Safety margin dividing the derived window [default: 4].
        #[arg(long, default_value_t = 4.0)]
        margin: f64,
    },
    /// Measure |h(f(P)) - m h(P)| over random rational points of P^1.
    HeightScaling {
        #[arg(long)]
        endos: String,
        /// Which endomorphism of the file to test [default: 0].
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// Number of sample points [default: 10000].
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Height bound for the random sample [default: 1000000].
        #[arg(long, default_value_t = 1_000_000)]
        height_bound: u64,
        /// RNG seed [default: 0].
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustive preperiodic-point scan of P^1(Q) up to a search height.
    Preperiodic {
        #[arg(long)]
        endos: String,
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// Scan all seeds of height <= this bound [default: 100].
        #[arg(long, default_value_t = 100)]
        h_search: u64,
        /// Iteration cap per orbit [default: 64].
        #[arg(long, default_value_t = 64)]
        iteration_cap: usize,
        /// Height above which an orbit counts as escaped [default: 1000000].
        #[arg(long, default_value_t = 1_000_000)]
        h_escape: u64,
    },
    /// Count points of P^n(Q) of height <= x against the Schanuel prediction.
    CensusPn {
        /// Projective dimension n >= 1.
        #[arg(long)]
        n: u32,
        /// Comma-separated height bounds, e.g. 25,50,100.
        #[arg(long)]
        x: String,
        /// Work budget in tuple evaluations [default: 100000000].
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
        /// Worker threads [default: $ARITH_FRACTAL_WORKERS or 1].
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Count points of P^n(F_q(t)) of degree <= d against the Serre-Wan prediction.
    CensusFfield {
        /// Prime q.
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
        /// Comma-separated degree bounds, e.g. 0,1,2,3,4,5,6.
        #[arg(long)]
        d: String,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!(
                "{}",
                json!({"error": {"kind": e.kind, "message": e.message}})
            );
            ExitCode::from(e.exit)
        }
    }
}

struct CliError {
    kind: &'static str,
    message: String,
    exit: u8,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            kind: "input",
            message: message.into(),
            exit: EXIT_INPUT,
        }
    }

    fn budget(message: impl Into<String>) -> Self {
        CliError {
            kind: "budget",
            message: message.into(),
            exit: EXIT_BUDGET,
        }
    }
}

fn from_census(e: CensusError) -> CliError {
    match e {
        CensusError::BudgetExceeded { .. } => CliError::budget(e.to_string()),
        other => CliError::input(other.to_string()),
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Verify { spec, window } => cmd_verify(&spec, &window),
        Command::Generate { spec, window } => cmd_generate(&spec, &window),
        Command::Member {
            spec,
            element,
            depth_cap,
        } => cmd_member(&spec, &element, depth_cap),
        Command::Dim {
            weights,
            tol,
            format,
        } => cmd_dim(&weights, tol, format),
        Command::EstimateDim {
            spec,
            thresholds,
            format,
        } => cmd_estimate_dim(&spec, &thresholds, format),
        Command::Monotone {
            spec_a,
            spec_b,
            window,
            tol,
        } => cmd_monotone(&spec_a, &spec_b, &window, tol),
        Command::Orbit { endos, h_max } => cmd_orbit(&endos, &h_max),
        Command::VerifyProj {
            endos,
            h_max,
            margin,
        } => cmd_verify_proj(&endos, &h_max, margin),
        Command::HeightScaling {
            endos,
            index,
            samples,
            height_bound,
            seed,
        } => cmd_height_scaling(&endos, index, samples, height_bound, seed),
        Command::Preperiodic {
            endos,
            index,
            h_search,
            iteration_cap,
            h_escape,
        } => cmd_preperiodic(&endos, index, h_search, iteration_cap, h_escape),
        Command::CensusPn {
            n,
            x,
            budget,
            workers,
            format,
        } => cmd_census_pn(n, &x, budget, resolve_workers(workers)?, format),
        Command::CensusFfield {
            q,
            n,
            d,
            budget,
            workers,
            format,
        } => cmd_census_ffield(q, n, &d, budget, resolve_workers(workers)?, format),
    }
}

fn resolve_workers(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(w) = flag {
        if w == 0 {
            return Err(CliError::input("--workers must be >= 1"));
        }
        return Ok(w);
    }
    match std::env::var("ARITH_FRACTAL_WORKERS") {
        Ok(s) => s
            .parse::<usize>()
            .ok()
            .filter(|&w| w >= 1)
            .ok_or_else(|| CliError::input("ARITH_FRACTAL_WORKERS must be a positive integer")),
        Err(_) => Ok(1),
    }
}

// ---------- input parsing ----------

fn parse_bigint(s: &str) -> Result<BigInt, CliError> {
    s.parse::<BigInt>()
        .map_err(|_| CliError::input(format!("not an integer: {:?}", s)))
}

fn json_bigint(v: &Value, what: &str) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else {
                Err(CliError::input(format!("{}: non-integer number", what)))
            }
        }
        Value::String(s) => parse_bigint(s),
        _ => Err(CliError::input(format!(
            "{}: expected an integer (number or decimal string)",
            what
        ))),
    }
}

fn json_element(v: &Value, ring: RingSpec) -> Result<RingElement, CliError> {
    match ring {
        RingSpec::Integers => Ok(RingElement::integer(json_bigint(v, "element")?)),
        RingSpec::Quadratic { .. } => {
            let pair = v
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| CliError::input("quadratic element must be a pair [u, v]"))?;
            let u = json_bigint(&pair[0], "element u")?;
            let w = json_bigint(&pair[1], "element v")?;
            RingElement::quadratic(ring, u, w).map_err(|e| CliError::input(e.to_string()))
        }
    }
}

fn read_json(path: &str) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {}", path, e)))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: invalid JSON: {}", path, e)))
}

fn load_spec(path: &str) -> Result<FractalSpec, CliError> {
    let doc = read_json(path)?;
    let ring = match doc.get("ring") {
        Some(Value::String(s)) if s == "Z" => RingSpec::Integers,
        Some(Value::Object(o)) => {
            let d = o
                .get("quadratic")
                .and_then(Value::as_i64)
                .ok_or_else(|| CliError::input("ring: expected {\"quadratic\": d}"))?;
            RingSpec::quadratic(d).map_err(|e| CliError::input(e.to_string()))?
        }
        _ => return Err(CliError::input("ring: expected \"Z\" or {\"quadratic\": d}")),
    };
    let maps_json = doc
        .get("maps")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::input("maps: expected an array"))?;
    let mut maps = Vec::with_capacity(maps_json.len());
    for m in maps_json {
        let coeffs_json = m
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| CliError::input("map: expected {\"coeffs\": [c0, ..., a]}"))?;
        let coeffs = coeffs_json
            .iter()
            .map(|c| json_element(c, ring))
            .collect::<Result<Vec<_>, _>>()?;
        maps.push(SimilarityMap::new(ring, coeffs).map_err(|e| CliError::input(e.to_string()))?);
    }
    let base_json = doc
        .get("base_points")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::input("base_points: expected an array"))?;
    let base_points = base_json
        .iter()
        .map(|b| json_element(b, ring))
        .collect::<Result<Vec<_>, _>>()?;
    FractalSpec::new(ring, maps, base_points).map_err(|e| CliError::input(e.to_string()))
}

fn load_endos(path: &str) -> Result<(Vec<PolyEndo>, Vec<ProjPoint>), CliError> {
    let doc = read_json(path)?;
    let endos_json = doc
        .get("endos")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::input("endos: expected an array"))?;
    let mut endos = Vec::with_capacity(endos_json.len());
    for endo in endos_json {
        let comps_json = endo
            .as_array()
            .ok_or_else(|| CliError::input("endo: expected an array of coordinate components"))?;
        let mut components = Vec::with_capacity(comps_json.len());
        for comp in comps_json {
            let monos_json = comp
                .as_array()
                .ok_or_else(|| CliError::input("component: expected an array of monomials"))?;
            let mut monomials = Vec::with_capacity(monos_json.len());
            for mono in monos_json {
                let coeff = json_bigint(
                    mono.get("coeff").unwrap_or(&Value::Null),
                    "monomial coeff",
                )?;
                let exps = mono
                    .get("exps")
                    .and_then(Value::as_array)
                    .ok_or_else(|| CliError::input("monomial: expected {\"coeff\": c, \"exps\": [...]}"))?
                    .iter()
                    .map(|e| {
                        e.as_u64()
                            .map(|x| x as u32)
                            .ok_or_else(|| CliError::input("exps: expected nonnegative integers"))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                monomials.push(Monomial { coeff, exps });
            }
            components.push(monomials);
        }
        endos.push(PolyEndo::new(components).map_err(|e| CliError::input(e.to_string()))?);
    }
    let base_json = doc
        .get("base_points")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::input("base_points: expected an array"))?;
    let mut base = Vec::with_capacity(base_json.len());
    for b in base_json {
        let coords = b
            .as_array()
            .ok_or_else(|| CliError::input("base point: expected an array of coordinates"))?
            .iter()
            .map(|c| json_bigint(c, "coordinate"))
            .collect::<Result<Vec<_>, _>>()?;
        base.push(ProjPoint::normalize(coords).map_err(|e| CliError::input(e.to_string()))?);
    }
    Ok((endos, base))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<T>()
                .map_err(|_| CliError::input(format!("bad {} entry: {:?}", what, part)))
        })
        .collect()
}

fn parse_weights(s: &str) -> Result<Vec<(u64, u32)>, CliError> {
    s.split(',')
        .map(|part| {
            let (n, deg) = part
                .trim()
                .split_once(':')
                .ok_or_else(|| CliError::input(format!("weight must look like N:n, got {:?}", part)))?;
            Ok((
                n.parse::<u64>()
                    .map_err(|_| CliError::input(format!("bad weight norm: {:?}", n)))?,
                deg.parse::<u32>()
                    .map_err(|_| CliError::input(format!("bad weight degree: {:?}", deg)))?,
            ))
        })
        .collect()
}

// ---------- output rendering ----------

fn element_value(e: &RingElement) -> Value {
    match e.coords() {
        Coords::Int(n) => Value::String(n.to_string()),
        Coords::Quad(u, v) => json!([u.to_string(), v.to_string()]),
    }
}

fn point_value(p: &ProjPoint) -> Value {
    Value::Array(
        p.coords()
            .iter()
            .map(|c| Value::String(c.to_string()))
            .collect(),
    )
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn status_exit(status: VerifyStatus) -> u8 {
    if status == VerifyStatus::Verified {
        0
    } else {
        EXIT_VIOLATED
    }
}

// ---------- subcommands ----------

fn cmd_verify(spec_path: &str, window: &str) -> Result<u8, CliError> {
    let spec = load_spec(spec_path)?;
    let window = parse_bigint(window)?;
    let report = verify_self_similar(&spec, &window).map_err(|e| CliError::input(e.to_string()))?;
    print_json(&json!({
        "checked_count": report.checked_count,
        "density_sum": report.density_sum.render(),
        "density_sum_value": report.density_sum.to_f64(),
        "element_count": report.element_count,
        "gap_witnesses": report.gap_witnesses.iter().map(element_value).collect::<Vec<_>>(),
        "overlap_witnesses": report.overlap_witnesses.iter().map(|w| json!({
            "element": element_value(&w.element),
            "map_i": w.map_i,
            "map_j": w.map_j,
        })).collect::<Vec<_>>(),
        "safe_window": report.safe_window.to_string(),
        "seed_only": report.seed_only.iter().map(element_value).collect::<Vec<_>>(),
        "status": report.status.as_str(),
        "uncovered_seeds": report.uncovered_seeds.iter().map(element_value).collect::<Vec<_>>(),
        "window": report.window.to_string(),
    }));
    Ok(status_exit(report.status))
}

fn cmd_generate(spec_path: &str, window: &str) -> Result<u8, CliError> {
    let spec = load_spec(spec_path)?;
    let window = parse_bigint(window)?;
    let sample = generate(&spec, &window).map_err(|e| CliError::input(e.to_string()))?;
    print_json(&json!({
        "count": sample.elements.len(),
        "elements": sample.elements.iter().map(element_value).collect::<Vec<_>>(),
        "window": sample.window.to_string(),
    }));
    Ok(0)
}

fn cmd_member(spec_path: &str, element: &str, depth_cap: usize) -> Result<u8, CliError> {
    let spec = load_spec(spec_path)?;
    let x = match spec.ring() {
        RingSpec::Integers => RingElement::integer(parse_bigint(element)?),
        ring @ RingSpec::Quadratic { .. } => {
            let (u, v) = element
                .split_once(',')
                .ok_or_else(|| CliError::input("quadratic element must look like u,v"))?;
            RingElement::quadratic(ring, parse_bigint(u.trim())?, parse_bigint(v.trim())?)
                .map_err(|e| CliError::input(e.to_string()))?
        }
    };
    let result = member(&spec, &x, depth_cap).map_err(|e| CliError::input(e.to_string()))?;
    let verdict = match result {
        Membership::Yes => "yes",
        Membership::No => "no",
        Membership::Unknown => "unknown",
    };
    print_json(&json!({
        "depth_cap": depth_cap,
        "element": element_value(&x),
        "result": verdict,
    }));
    Ok(match result {
        Membership::Yes => 0,
        Membership::No => EXIT_VIOLATED,
        Membership::Unknown => EXIT_BUDGET,
    })
}

fn cmd_dim(weights: &str, tol: f64, format: DimFormat) -> Result<u8, CliError> {
    let weights = parse_weights(weights)?;
    let result = solve_box_equation(&weights, tol).map_err(|e| CliError::input(e.to_string()))?;
    match format {
        DimFormat::Text => println!("{:.12}", result.s),
        DimFormat::Json => print_json(&json!({
            "iterations": result.iterations,
            "residual": result.residual,
            "s": result.s,
        })),
    }
    Ok(0)
}

fn cmd_estimate_dim(spec_path: &str, thresholds: &str, format: Format) -> Result<u8, CliError> {
    let spec = load_spec(spec_path)?;
    let thresholds: Vec<BigInt> = thresholds
        .split(',')
        .map(|t| parse_bigint(t.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let series = count_series(&spec, &thresholds).map_err(|e| CliError::input(e.to_string()))?;
    match format {
        Format::Csv => {
            println!("threshold,count");
            for (t, c) in series.thresholds.iter().zip(&series.counts) {
                println!("{},{}", t, c);
            }
        }
        Format::Json => {
            let fit = estimate_dimension(&series).map_err(|e| CliError::input(e.to_string()))?;
            print_json(&json!({
                "counts": series.counts,
                "intercept": fit.intercept,
                "points_used": fit.points_used,
                "r2": fit.r2,
                "slope": fit.slope,
                "span_warning": fit.span_warning,
                "thresholds": series.thresholds.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            }));
        }
    }
    Ok(0)
}

fn cmd_monotone(spec_a: &str, spec_b: &str, window: &str, tol: f64) -> Result<u8, CliError> {
    let a = load_spec(spec_a)?;
    let b = load_spec(spec_b)?;
    let window = parse_bigint(window)?;
    let report = check_monotone(&a, &b, &window, tol).map_err(|e| CliError::input(e.to_string()))?;
    print_json(&json!({
        "consistent": report.consistent,
        "counterexample": report.counterexample.as_ref().map(element_value),
        "dim_a": report.dim_a,
        "dim_b": report.dim_b,
        "subset_confirmed": report.subset_confirmed,
    }));
    Ok(if report.subset_confirmed && report.consistent {
        0
    } else {
        EXIT_VIOLATED
    })
}

fn cmd_orbit(endos_path: &str, h_max: &str) -> Result<u8, CliError> {
    let (endos, base) = load_endos(endos_path)?;
    let h_max = parse_bigint(h_max)?;
    let points =
        orbit_generate(&endos, &base, &h_max).map_err(|e| CliError::input(e.to_string()))?;
    print_json(&json!({
        "count": points.len(),
        "h_max": h_max.to_string(),
        "points": points.iter().map(point_value).collect::<Vec<_>>(),
    }));
    Ok(0)
}

fn cmd_verify_proj(endos_path: &str, h_max: &str, margin: f64) -> Result<u8, CliError> {
    let (endos, base) = load_endos(endos_path)?;
    let h_max = parse_bigint(h_max)?;
    let report = verify_projective_self_similar(&endos, &base, &h_max, margin)
        .map_err(|e| CliError::input(e.to_string()))?;
    print_json(&json!({
        "checked_count": report.checked_count,
        "coeff_bound": report.coeff_bound.to_string(),
        "gap_witnesses": report.gap_witnesses.iter().map(point_value).collect::<Vec<_>>(),
        "h_max": report.h_max.to_string(),
        "margin": report.margin,
        "orbit_size": report.orbit_size,
        "overlap_witnesses": report.overlap_witnesses.iter().map(|(p, i, j)| json!({
            "map_i": i,
            "map_j": j,
            "point": point_value(p),
        })).collect::<Vec<_>>(),
        "status": report.status.as_str(),
        "uncovered_seeds": report.uncovered_seeds.iter().map(point_value).collect::<Vec<_>>(),
        "window_y": report.window_y.to_string(),
    }));
    Ok(status_exit(report.status))
}

fn random_p1_sample(samples: usize, height_bound: u64, seed: u64) -> Vec<ProjPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = height_bound as i64;
    let mut out = Vec::with_capacity(samples);
    while out.len() < samples {
        let p = rng.gen_range(-bound..=bound);
        let q = rng.gen_range(-bound..=bound);
        if p == 0 && q == 0 {
            continue;
        }
        out.push(ProjPoint::from_i64(&[p, q]).expect("nonzero pair"));
    }
    out
}

fn cmd_height_scaling(
    endos_path: &str,
    index: usize,
    samples: usize,
    height_bound: u64,
    seed: u64,
) -> Result<u8, CliError> {
    let (endos, _) = load_endos(endos_path)?;
    let f = endos
        .get(index)
        .ok_or_else(|| CliError::input(format!("endo index {} out of range", index)))?;
    if f.nvars() != 2 {
        return Err(CliError::input("height-scaling sampling is implemented for P^1"));
    }
    let sample = random_p1_sample(samples, height_bound, seed);
    let scaling = check_height_scaling(f, &sample).map_err(|e| CliError::input(e.to_string()))?;
    print_json(&json!({
        "degree": f.degree(),
        "height_bound": height_bound,
        "max_deviation": scaling.max_deviation,
        "mean_deviation": scaling.mean_deviation,
        "sample_size": scaling.sample_size,
        "seed": seed,
    }));
    Ok(0)
}

fn cmd_preperiodic(
    endos_path: &str,
    index: usize,
    h_search: u64,
    iteration_cap: usize,
    h_escape: u64,
) -> Result<u8, CliError> {
    let (endos, _) = load_endos(endos_path)?;
    let f = endos
        .get(index)
        .ok_or_else(|| CliError::input(format!("endo index {} out of range", index)))?;
    let report = find_preperiodic(f, h_search, iteration_cap, h_escape)
        .map_err(|e| CliError::input(e.to_string()))?;
    print_json(&json!({
        "escaped": report.escaped,
        "h_escape": report.h_escape,
        "h_search": report.h_search,
        "iteration_cap": report.iteration_cap,
        "preperiodic": report.preperiodic.iter().map(|p| json!({
            "cycle": p.cycle,
            "point": point_value(&p.point),
            "tail": p.tail,
        })).collect::<Vec<_>>(),
        "seeds_scanned": report.seeds_scanned,
        "unresolved": report.unresolved.iter().map(point_value).collect::<Vec<_>>(),
    }));
    Ok(if report.unresolved.is_empty() {
        0
    } else {
        EXIT_BUDGET
    })
}

fn census_output(
    xs: &[f64],
    fit_xs: &[f64],
    observed: &[u64],
    predicted: &[f64],
    constant: f64,
    extra: BTreeMap<&'static str, Value>,
    format: Format,
) -> Result<u8, CliError> {
    let rel = |obs: u64, pred: f64| (obs as f64 - pred).abs() / pred;
    match format {
        Format::Csv => {
            println!("x,observed,predicted,rel_error");
            for ((&x, &obs), &pred) in xs.iter().zip(observed).zip(predicted) {
                println!("{},{},{:.6},{:.6}", x, obs, pred, rel(obs, pred));
            }
        }
        Format::Json => {
            let fitted = if xs.len() >= 2 {
                let cmp = compare(fit_xs, observed, predicted).map_err(from_census)?;
                Value::from(cmp.fitted_exponent)
            } else {
                Value::Null
            };
            let rows: Vec<Value> = xs
                .iter()
                .zip(observed)
                .zip(predicted)
                .map(|((&x, &obs), &pred)| {
                    json!({
                        "observed": obs,
                        "predicted": pred,
                        "rel_error": rel(obs, pred),
                        "x": x,
                    })
                })
                .collect();
            let mut doc = serde_json::Map::new();
            doc.insert("constant".into(), Value::from(constant));
            for (k, v) in extra {
                doc.insert(k.into(), v);
            }
            doc.insert("fitted_exponent".into(), fitted);
            doc.insert("rows".into(), Value::Array(rows));
            print_json(&Value::Object(doc));
        }
    }
    Ok(0)
}

fn cmd_census_pn(
    n: u32,
    x: &str,
    budget: u64,
    workers: usize,
    format: Format,
) -> Result<u8, CliError> {
    let bounds: Vec<u64> = parse_list(x, "--x")?;
    if bounds.is_empty() {
        return Err(CliError::input("--x needs at least one bound"));
    }
    let constant = schanuel_constant(&SchanuelInputs::rationals(n));
    let mut observed = Vec::with_capacity(bounds.len());
    for &b in &bounds {
        observed.push(count_pn_q(n, b, budget, workers).map_err(from_census)?);
    }
    let xs: Vec<f64> = bounds.iter().map(|&b| b as f64).collect();
    let predicted: Vec<f64> = xs.iter().map(|&b| constant * b.powi(n as i32 + 1)).collect();
    let mut extra = BTreeMap::new();
    extra.insert("n", Value::from(n));
    census_output(&xs, &xs, &observed, &predicted, constant, extra, format)
}

fn cmd_census_ffield(
    q: u32,
    n: u32,
    d: &str,
    budget: u64,
    workers: usize,
    format: Format,
) -> Result<u8, CliError> {
    let degrees: Vec<u32> = parse_list(d, "--d")?;
    if degrees.is_empty() {
        return Err(CliError::input("--d needs at least one degree"));
    }
    let constant = serre_wan_constant(q, n);
    let mut observed = Vec::with_capacity(degrees.len());
    for &deg in &degrees {
        observed.push(count_pn_ffield(q, n, deg, budget, workers).map_err(from_census)?);
    }
    let xs: Vec<f64> = degrees.iter().map(|&deg| deg as f64).collect();
    let predicted: Vec<f64> = degrees
        .iter()
        .map(|&deg| constant * (q as f64).powi((deg * (n + 1)) as i32))
        .collect();
    // The regression runs against the height analog q^d rather than d
    // itself, so the fitted exponent estimates n+1 as in the rational case.
    let fit_xs: Vec<f64> = degrees.iter().map(|&deg| (q as f64).powi(deg as i32)).collect();
    let mut extra = BTreeMap::new();
    extra.insert("n", Value::from(n));
    extra.insert("q", Value::from(q));
    census_output(&xs, &fit_xs, &observed, &predicted, constant, extra, format)
}
