//! Command-line surface: build reduction instances from CNF/OV inputs,
//! compute Fréchet distances, run verification campaigns, measure
//! packedness, and benchmark scaling.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use frechet_reductions::frechet::{
    continuous_decision, continuous_value, discrete_decision_with_tol, discrete_frechet, FrechetValue,
};
use frechet_reductions::geometry::{Curve, Scalar, FLOAT_CMP_TOL};
use frechet_reductions::harness::{bench_scaling, replay_witness, run_campaign, CampaignConfig, KindSpec};
use frechet_reductions::json::{curve_from_str, curve_to_string, instance_to_string};
use frechet_reductions::ov::{ov_brute, ov_to_curves, OvInstance};
use frechet_reductions::packedness::{estimate_packedness, Effort};
use frechet_reductions::reduction_highdim::DEFAULT_EPSILON;
use frechet_reductions::reduction_plane::GadgetConstants;
use frechet_reductions::sat::{parse_dimacs, split_variables, VariableSplit};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "frechet-reductions", version, about = "SAT/OV-to-curves reductions and Fréchet distance toolkit")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a DIMACS CNF file into a curve-pair instance.
    Reduce(ReduceArgs),
    /// Compute or decide the Fréchet distance of two curve files.
    Dist(DistArgs),
    /// Run the verification campaign (exit code 1 on any failed check).
    Verify(VerifyArgs),
    /// Estimate the packedness of a curve file.
    Pack(PackArgs),
    /// Time the distance computations across instance sizes.
    Bench(BenchArgs),
    /// Solve an orthogonal-vectors instance, optionally emitting curves.
    Ov(OvArgs),
}

#[derive(Args)]
struct ReduceArgs {
    /// DIMACS CNF input file.
    #[arg(long)]
    input: PathBuf,
    /// Construction: plane | imbalanced | or-packed | highdim.
    #[arg(long)]
    kind: String,
    /// Split exponent for the imbalanced kind (m ~ n^gamma).
    #[arg(long)]
    gamma: Option<f64>,
    /// Bucket count per side for the OR-composed kinds.
    #[arg(long)]
    ell: Option<usize>,
    /// Gadget separation: a rational like "1/1000" (planar kinds) or a
    /// float (highdim).
    #[arg(long)]
    epsilon: Option<String>,
    /// Output instance file.
    #[arg(long)]
    out: PathBuf,
    /// Also write the two curves as PREFIX.p1.json / PREFIX.p2.json.
    #[arg(long)]
    curves_out: Option<String>,
}

#[derive(Args)]
struct DistArgs {
    /// discrete | continuous.
    #[arg(long)]
    mode: String,
    /// Decide "distance <= DELTA" instead of computing the value.
    #[arg(long)]
    decision: Option<f64>,
    /// Bracket width for the continuous value (default 1e-6).
    #[arg(long)]
    tol: Option<f64>,
    /// Two curve JSON files.
    #[arg(required = true, num_args = 2)]
    curves: Vec<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest variable count to draw formulas at (even counts from 2 up).
    #[arg(long, default_value_t = 10)]
    max_vars: usize,
    /// Random formulas per variable count.
    #[arg(long, default_value_t = 40)]
    trials: usize,
    #[arg(long, default_value_t = 0x0F5E_C4E7)]
    seed: u64,
    /// Comma-separated kinds: plane,imbalanced,or-packed,highdim.
    #[arg(long, value_delimiter = ',')]
    kinds: Vec<String>,
    /// Replay a failure witness JSON file instead of running a campaign.
    #[arg(long)]
    replay: Option<PathBuf>,
}

#[derive(Args)]
struct PackArgs {
    curve: PathBuf,
    /// Add grid refinement around the fast witness.
    #[arg(long)]
    thorough: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// plane | imbalanced | or-packed | highdim.
    #[arg(long, default_value = "plane")]
    kind: String,
    /// Comma-separated ascending target vertex counts.
    #[arg(long, value_delimiter = ',', default_values_t = vec![128usize, 256, 512])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    reps: usize,
}

#[derive(Args)]
struct OvArgs {
    /// First vector set (one 0/1 string per line), or a single two-section
    /// file with a "---" separator when --s2 is omitted.
    #[arg(long)]
    s1: PathBuf,
    /// Second vector set.
    #[arg(long)]
    s2: Option<PathBuf>,
    /// Write the curve instance driven by the vectors.
    #[arg(long)]
    to_curves: Option<PathBuf>,
}

fn parse_kind(name: &str, gamma: Option<f64>, ell: Option<usize>, epsilon_f: Option<f64>) -> Result<KindSpec> {
    match name {
        "plane" => Ok(KindSpec::Plane),
        "imbalanced" => Ok(KindSpec::Imbalanced { gamma: gamma.unwrap_or(1.0) }),
        "or-packed" | "or_packed" => Ok(KindSpec::OrPacked { buckets: ell.unwrap_or(2) }),
        "highdim" => Ok(KindSpec::HighDim {
            epsilon: epsilon_f.unwrap_or(DEFAULT_EPSILON),
            buckets: ell.unwrap_or(2),
        }),
        other => bail!("unknown kind '{other}' (expected plane | imbalanced | or-packed | highdim)"),
    }
}

/// Parses "p/q", an integer, or a decimal string into an exact rational.
fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    if let Ok(r) = BigRational::from_str(text) {
        return Ok(r);
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let digits = frac_part.len() as u32;
        let scale = BigInt::from(10u32).pow(digits);
        let int_val: BigInt = if int_part.is_empty() || int_part == "-" { BigInt::from(0) } else { int_part.parse()? };
        let frac_val: BigInt = frac_part.parse()?;
        let num = &int_val * &scale + if negative { -frac_val } else { frac_val };
        return Ok(BigRational::new(num, scale));
    }
    bail!("cannot parse '{text}' as a rational (use p/q or a decimal)")
}

fn cmd_reduce(args: &ReduceArgs, as_json: bool) -> Result<()> {
    let text = fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let formula = parse_dimacs(&text)?;
    let eps_f = args.epsilon.as_deref().and_then(|s| s.parse::<f64>().ok());
    let kind = parse_kind(&args.kind, args.gamma, args.ell, eps_f)?;

    // planar kinds take an exact-rational separation when one is supplied
    let instance = match (&kind, &args.epsilon) {
        (KindSpec::HighDim { .. }, _) | (_, None) => frechet_reductions::harness::build_instance(&formula, &kind)?,
        (_, Some(eps)) => {
            let constants = GadgetConstants::with_epsilon(parse_rational(eps)?)?;
            let split = match &kind {
                KindSpec::Imbalanced { gamma } => split_variables(formula.num_vars(), *gamma)?,
                _ => VariableSplit::halves(formula.num_vars())?,
            };
            match &kind {
                KindSpec::Plane | KindSpec::Imbalanced { .. } => {
                    let a1s = frechet_reductions::sat::enumerate_assignments(&split.v1())?;
                    let a2s = frechet_reductions::sat::enumerate_assignments(&split.v2())?;
                    let mut inst = frechet_reductions::reduction_plane::build_plane_curves(
                        &constants, &formula, &split, &a1s, &a2s,
                    )?;
                    if let KindSpec::Imbalanced { gamma } = kind {
                        inst.kind = frechet_reductions::instance::ReductionKind::Imbalanced;
                        inst.params.gamma = Some(gamma);
                    }
                    inst
                }
                KindSpec::OrPacked { buckets } => {
                    let family = frechet_reductions::or_gadget::plane_pair_family(&constants, &formula, &split, *buckets)?;
                    frechet_reductions::or_gadget::build_or_curves(&family)?
                }
                KindSpec::HighDim { .. } => unreachable!(),
            }
        }
    };

    fs::write(&args.out, instance_to_string(&instance)).with_context(|| format!("writing {}", args.out.display()))?;
    if let Some(prefix) = &args.curves_out {
        fs::write(format!("{prefix}.p1.json"), curve_to_string(&instance.p1))?;
        fs::write(format!("{prefix}.p2.json"), curve_to_string(&instance.p2))?;
    }
    if as_json {
        println!(
            "{}",
            json!({
                "out": args.out.display().to_string(),
                "kind": instance.kind.as_str(),
                "n": instance.p1.len(),
                "m": instance.p2.len(),
            })
        );
    } else {
        println!(
            "wrote {} ({}; |P1| = {}, |P2| = {})",
            args.out.display(),
            instance.kind.as_str(),
            instance.p1.len(),
            instance.p2.len()
        );
    }
    Ok(())
}

fn load_curve(path: &PathBuf) -> Result<Curve> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(curve_from_str(&text)?)
}

fn cmd_dist(args: &DistArgs, as_json: bool) -> Result<()> {
    let a = load_curve(&args.curves[0])?;
    let b = load_curve(&args.curves[1])?;
    match args.mode.as_str() {
        "discrete" => {
            if let Some(delta) = args.decision {
                // in rational mode a decimal delta decides exactly
                let verdict = match a.mode() {
                    frechet_reductions::geometry::ScalarMode::Rational => {
                        let d = parse_rational(&format!("{delta}"))?;
                        discrete_decision_with_tol(&a, &b, &Scalar::Rational(d), 0.0)?
                    }
                    frechet_reductions::geometry::ScalarMode::Float => {
                        discrete_decision_with_tol(&a, &b, &Scalar::float(delta), FLOAT_CMP_TOL)?
                    }
                };
                print_verdict(verdict, as_json);
            } else {
                let (value, _) = discrete_frechet(&a, &b)?;
                match (&value, as_json) {
                    (FrechetValue::RationalSquared(sq), true) => {
                        println!("{}", json!({"distance": value.distance_f64(), "squared_exact": sq.to_string()}));
                    }
                    (FrechetValue::RationalSquared(sq), false) => {
                        println!("{} (squared exactly {sq})", value.distance_f64());
                    }
                    (FrechetValue::Float(v), true) => println!("{}", json!({ "distance": v })),
                    (FrechetValue::Float(v), false) => println!("{v}"),
                }
            }
        }
        "continuous" => {
            let fa = a.to_float();
            let fb = b.to_float();
            if let Some(delta) = args.decision {
                print_verdict(continuous_decision(&fa, &fb, delta)?, as_json);
            } else {
                let bracket = continuous_value(&fa, &fb, args.tol.unwrap_or(1e-6))?;
                if as_json {
                    println!("{}", json!({"lower": bracket.lower, "upper": bracket.upper}));
                } else {
                    println!("[{}, {}]", bracket.lower, bracket.upper);
                }
            }
        }
        other => bail!("unknown mode '{other}' (expected discrete | continuous)"),
    }
    Ok(())
}

fn print_verdict(yes: bool, as_json: bool) {
    if as_json {
        println!("{}", json!({ "within": yes }));
    } else {
        println!("{}", if yes { "YES" } else { "NO" });
    }
}

fn cmd_verify(args: &VerifyArgs, as_json: bool) -> Result<bool> {
    if let Some(path) = &args.replay {
        let witness = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let report = replay_witness(&witness)?;
        emit_report(&report, as_json);
        return Ok(report.passed());
    }

    let kinds = if args.kinds.is_empty() {
        CampaignConfig::default().kinds
    } else {
        args.kinds
            .iter()
            .map(|k| parse_kind(k, Some(0.5), Some(2), Some(DEFAULT_EPSILON)))
            .collect::<Result<Vec<_>>>()?
    };
    let var_counts: Vec<usize> = (1..=args.max_vars / 2).map(|k| 2 * k).collect();
    if var_counts.is_empty() {
        bail!("--max-vars must be at least 2");
    }
    let config = CampaignConfig {
        seed: args.seed,
        var_counts,
        trials_per_count: args.trials,
        kinds,
        ..CampaignConfig::default()
    };
    let report = run_campaign(&config);
    emit_report(&report, as_json);
    Ok(report.passed())
}

fn emit_report(report: &frechet_reductions::report::VerificationReport, as_json: bool) {
    if as_json {
        println!("{}", report.to_json());
        return;
    }
    for check in &report.checks {
        if check.passed {
            println!("ok   {} — {}", check.name, check.detail);
        } else {
            println!("FAIL {} — {}", check.name, check.detail);
            if let Some(w) = &check.witness {
                println!("     witness: {w}");
            }
        }
    }
    println!("{}", report.summary());
}

fn cmd_pack(args: &PackArgs, as_json: bool) -> Result<()> {
    let curve = load_curve(&args.curve)?.to_float();
    let effort = if args.thorough { Effort::Thorough } else { Effort::Fast };
    let est = estimate_packedness(&curve, effort)?;
    if as_json {
        println!(
            "{}",
            json!({
                "packedness": est.value,
                "center": est.center,
                "radius": est.radius,
                "candidates": est.candidates_tested,
            })
        );
    } else {
        println!("packedness >= {:.6}", est.value);
        println!("witness ball: center {:?}, radius {:.6}", est.center, est.radius);
        println!("candidates tested: {}", est.candidates_tested);
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs, as_json: bool) -> Result<()> {
    let kind = parse_kind(&args.kind, Some(0.5), Some(2), Some(DEFAULT_EPSILON))?;
    let table = bench_scaling(&kind, &args.sizes, args.reps)?;
    if as_json {
        let rows: Vec<_> = table
            .rows
            .iter()
            .map(|r| {
                json!({
                    "kind": r.kind,
                    "n": r.n,
                    "m": r.m,
                    "dp_cells": r.dp_cells,
                    "c_estimate": r.c_estimate,
                    "t_discrete_ms": r.t_discrete_ms,
                    "t_continuous_ms": r.t_continuous_ms,
                })
            })
            .collect();
        println!("{}", json!({"rows": rows, "discrete_slope": table.discrete_slope}));
    } else {
        print!("{}", table.render());
    }
    Ok(())
}

fn cmd_ov(args: &OvArgs, as_json: bool) -> Result<()> {
    let s1_text = fs::read_to_string(&args.s1).with_context(|| format!("reading {}", args.s1.display()))?;
    let inst = match &args.s2 {
        Some(s2_path) => {
            let s2_text = fs::read_to_string(s2_path).with_context(|| format!("reading {}", s2_path.display()))?;
            OvInstance::from_sections(&s1_text, &s2_text)?
        }
        None => OvInstance::parse(&s1_text)?,
    };
    let pair = ov_brute(&inst);
    if let Some(out) = &args.to_curves {
        let constants = GadgetConstants::standard();
        let curves = ov_to_curves(&constants, &inst)?;
        fs::write(out, instance_to_string(&curves)).with_context(|| format!("writing {}", out.display()))?;
    }
    if as_json {
        println!(
            "{}",
            json!({
                "orthogonal_pair": pair.map(|(i, j)| json!({"u": i, "v": j})),
                "n1": inst.s1().len(),
                "n2": inst.s2().len(),
                "dim": inst.dim(),
            })
        );
    } else {
        match pair {
            Some((i, j)) => println!("orthogonal pair: u[{i}] v[{j}]"),
            None => println!("no orthogonal pair"),
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<bool> = match &cli.command {
        Command::Reduce(args) => cmd_reduce(args, cli.json).map(|()| true),
        Command::Dist(args) => cmd_dist(args, cli.json).map(|()| true),
        Command::Verify(args) => cmd_verify(args, cli.json),
        Command::Pack(args) => cmd_pack(args, cli.json).map(|()| true),
        Command::Bench(args) => cmd_bench(args, cli.json).map(|()| true),
        Command::Ov(args) => cmd_ov(args, cli.json).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
