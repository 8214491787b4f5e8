//! `twinpeaks` — drive the two-bubble construction from the command line.
//!
//! Subcommands:
//! * `construct` — validate a peak model, solve the reduced map in closed
//!   form, certify the root (residual, Jacobian sign, Brouwer degree) and
//!   write `construct.json`;
//! * `verify` — run a named verification suite and write its CSV table;
//! * `plot-data` — emit profile and sweep CSVs from a prior construct run.
//!
//! Exit codes: 0 success, 2 user/config error, 3 numerical failure.
//! All randomness is seeded: `--seed` wins over `TWINPEAKS_SEED`, default 0.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use twinpeaks_core::bubble::{Bubble, BubbleConfig};
use twinpeaks_core::peaks::c_tilde;
use twinpeaks_core::reduce::{
    compute_constants, degree_on_box, gamma_o_estimate, ReducedPoint, ReductionConstants, TMap,
};
use twinpeaks_core::suites::run_suite;
use twinpeaks_core::TwinPeakModel;

const EXIT_OK: u8 = 0;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "twinpeaks", version, about = "two-bubble construction driver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the reduced map for a peak model and certify the root.
    Construct {
        /// Peak-model JSON file.
        #[arg(long)]
        model: PathBuf,
        /// RNG seed (wins over TWINPEAKS_SEED; default 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Tolerance overrides, key=value (repeatable).
        #[arg(long = "tol")]
        tol: Vec<String>,
    },
    /// Run a named verification suite.
    Verify {
        /// One of: reduction-lemma, interaction-scaling, weak-interaction,
        /// mass-bound, inequalities, pairing-consistency.
        #[arg(long)]
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long = "tol")]
        tol: Vec<String>,
    },
    /// Emit plotting CSVs from a prior construct output.
    PlotData {
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

/// Everything `construct` certifies, serialized as `construct.json`.
#[derive(Serialize, Deserialize)]
struct ConstructOutput {
    model: TwinPeakModel,
    constants: ReductionConstants,
    p_tau: ReducedPoint,
    det_sign: i8,
    degree: i64,
    gamma_o: f64,
    d_tau: f64,
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("TWINPEAKS_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(0)
}

fn parse_tol(raw: &[String]) -> Result<BTreeMap<String, f64>> {
    let mut map = BTreeMap::new();
    for item in raw {
        let (key, val) = item
            .split_once('=')
            .with_context(|| format!("--tol expects key=value, got '{item}'"))?;
        let val: f64 = val
            .parse()
            .with_context(|| format!("tolerance '{key}' has a non-numeric value '{val}'"))?;
        map.insert(key.to_string(), val);
    }
    Ok(map)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Construct {
            model,
            seed,
            out,
            tol,
        } => cmd_construct(&model, resolve_seed(seed), &out, &tol),
        Command::Verify {
            suite,
            seed,
            out,
            tol,
        } => cmd_verify(&suite, resolve_seed(seed), &out, &tol),
        Command::PlotData { out } => cmd_plot_data(&out),
    };
    match code {
        Ok(c) => ExitCode::from(c),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn cmd_construct(model_path: &Path, seed: u64, out: &Path, tol_raw: &[String]) -> Result<u8> {
    let tol = parse_tol(tol_raw)?;
    let text = match fs::read_to_string(model_path) {
        Ok(t) => t,
        Err(err) => {
            eprintln!("cannot read model file {}: {err}", model_path.display());
            return Ok(EXIT_CONFIG);
        }
    };
    let model: TwinPeakModel = match serde_json::from_str(&text) {
        Ok(m) => m,
        Err(err) => {
            eprintln!("model file is not a valid peak model: {err}");
            return Ok(EXIT_CONFIG);
        }
    };

    let violations = model.validate();
    if !violations.is_empty() {
        eprintln!("model violates {} hypothesis(es):", violations.len());
        for v in &violations {
            eprintln!("  {v}");
        }
        return Ok(EXIT_CONFIG);
    }

    fs::create_dir_all(out)?;
    let mut summary = String::new();
    summary.push_str(&format!(
        "model: n = {}, ℓ = {}, γ = {}\nvalidation: all hypotheses hold\n",
        model.n, model.ell, model.gamma
    ));

    let k = match compute_constants(model.n, model.ell) {
        Ok(k) => k,
        Err(err) => {
            eprintln!("constants: {err}");
            return Ok(EXIT_CONFIG);
        }
    };

    let run = || -> twinpeaks_core::Result<(ReducedPoint, f64, i8, i64, f64, f64, f64)> {
        let tm = TMap::new(&model, &k)?;
        let p_tau = tm.solve_tau()?;
        let t = tm.eval(&p_tau);
        let scales = tm.component_scales(&p_tau);
        let res = t.iter().map(|v| v * v).sum::<f64>().sqrt();
        let scale = scales.iter().map(|v| v * v).sum::<f64>().sqrt();
        let residual_rel = res / scale;
        let det_sign = twinpeaks_core::reduce::det_sign_at_tau(&model, &k)?;
        let mu = tol.get("mu").copied().unwrap_or(0.1);
        let starts = tol.get("degree_starts").copied().unwrap_or(200.0) as usize;
        let tm_deg = TMap::new(&model, &k)?;
        let n = model.n;
        let outcome = degree_on_box(
            move |x: &[f64]| tm_deg.eval(&ReducedPoint::from_vec(n, x).unwrap()),
            &p_tau,
            mu,
            &k,
            seed,
            starts,
        )?;
        let d_threshold = tol.get("d_threshold").copied().unwrap_or(100.0);
        let gamma_o = gamma_o_estimate(&model, &k, d_threshold)?;
        let d_tau = model.gamma / (p_tau.lambda1 * p_tau.lambda2).sqrt();
        Ok((
            p_tau,
            residual_rel,
            det_sign,
            outcome.degree,
            outcome.min_boundary_norm,
            gamma_o,
            d_tau,
        ))
    };

    let (p_tau, residual_rel, det_sign, degree, min_boundary, gamma_o, d_tau) = match run() {
        Ok(v) => v,
        Err(err) => {
            eprintln!("numerical failure: {err}");
            summary.push_str(&format!("numerical failure: {err}\n"));
            fs::write(out.join("summary.txt"), summary)?;
            return Ok(EXIT_NUMERICAL);
        }
    };

    let residual_tol = tol.get("t_residual").copied().unwrap_or(1e-10);
    let residual_ok = residual_rel <= residual_tol;
    summary.push_str(&format!(
        "T(P_τ) relative residual: {residual_rel:.3e} (tol {residual_tol:.1e}) — {}\n",
        if residual_ok { "ok" } else { "FAIL" }
    ));
    summary.push_str(&format!(
        "Jacobian determinant sign at P_τ: {det_sign} — {}\n",
        if det_sign == -1 { "ok" } else { "FAIL" }
    ));
    summary.push_str(&format!(
        "Brouwer degree on B(P_τ, 0.1·λ₁τ): {degree} (min boundary ‖T‖ = {min_boundary:.3e}) — {}\n",
        if degree == -1 { "ok" } else { "FAIL" }
    ));
    summary.push_str(&format!(
        "λ₁τ = {:.6e}, λ₂τ = {:.6e}, D_τ = {d_tau:.3}, γ_o(D̄) = {gamma_o:.6e}\n",
        p_tau.lambda1, p_tau.lambda2
    ));

    let output = ConstructOutput {
        model,
        constants: k,
        p_tau,
        det_sign,
        degree,
        gamma_o,
        d_tau,
    };
    let mut json = serde_json::to_string_pretty(&output)?;
    json.push('\n');
    fs::write(out.join("construct.json"), json)?;

    let ok = residual_ok && det_sign == -1 && degree == -1;
    summary.push_str(if ok {
        "construct: PASS\n"
    } else {
        "construct: FAIL\n"
    });
    fs::write(out.join("summary.txt"), &summary)?;
    print!("{summary}");
    Ok(if ok { EXIT_OK } else { EXIT_NUMERICAL })
}

fn cmd_verify(suite: &str, seed: u64, out: &Path, tol_raw: &[String]) -> Result<u8> {
    let tol = parse_tol(tol_raw)?;
    let report = match run_suite(suite, seed, &tol) {
        Ok(r) => r,
        Err(twinpeaks_core::Error::Invalid(msg)) => {
            eprintln!("{msg}");
            return Ok(EXIT_CONFIG);
        }
        Err(err) => {
            eprintln!("numerical failure: {err}");
            return Ok(EXIT_NUMERICAL);
        }
    };
    fs::create_dir_all(out)?;
    fs::write(out.join(format!("{}.csv", report.name)), report.to_csv())?;
    let summary = report.summary();
    fs::write(out.join("summary.txt"), &summary)?;
    print!("{summary}");
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_NUMERICAL
    })
}

fn cmd_plot_data(out: &Path) -> Result<u8> {
    let construct_path = out.join("construct.json");
    let text = match fs::read_to_string(&construct_path) {
        Ok(t) => t,
        Err(err) => {
            eprintln!(
                "no prior construct output at {}: {err}",
                construct_path.display()
            );
            return Ok(EXIT_CONFIG);
        }
    };
    let c: ConstructOutput = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(err) => {
            eprintln!("cannot parse {}: {err}", construct_path.display());
            return Ok(EXIT_CONFIG);
        }
    };
    let model = &c.model;
    let n = model.n;
    let gamma = model.gamma;

    // profile of z_σ and K along the line through the two bubble centers
    let axis: Vec<f64> = {
        let diff: Vec<f64> = c
            .p_tau
            .xi2
            .iter()
            .zip(&c.p_tau.xi1)
            .map(|(a, b)| a - b)
            .collect();
        let norm = diff.iter().map(|x| x * x).sum::<f64>().sqrt();
        diff.into_iter().map(|x| x / norm).collect()
    };
    let cfg = BubbleConfig::new(
        Bubble::new(n, c.p_tau.lambda1, c.p_tau.xi1.clone())
            .map_err(|e| anyhow::anyhow!("{e}"))?,
        Bubble::new(n, c.p_tau.lambda2, c.p_tau.xi2.clone())
            .map_err(|e| anyhow::anyhow!("{e}"))?,
        gamma,
    )
    .map_err(|e| anyhow::anyhow!("{e}"))?;

    let mut profile = String::from("s [axis coordinate, model units],z_sigma [-],K [-]\n");
    let steps = 1200;
    for i in 0..=steps {
        let s = -0.25 * gamma + 1.5 * gamma * i as f64 / steps as f64;
        let y: Vec<f64> = c
            .p_tau
            .xi1
            .iter()
            .zip(&axis)
            .map(|(x0, e)| x0 + s * e)
            .collect();
        let z = cfg.z_sigma(&y);
        let kv = model.k_eval(&y).map_err(|e| anyhow::anyhow!("{e}"))?;
        profile.push_str(&format!("{s:.8e},{z:.8e},{kv:.8e}\n"));
    }
    fs::write(out.join("profile.csv"), profile)?;

    // gap sweep: how the root scales as the peaks approach each other
    let mut sweep =
        String::from("gamma [model units],lambda1_tau [-],lambda2_tau [-],d_tau [-]\n");
    for kk in 0..6 {
        let g = gamma * 0.5f64.powi(kk);
        let mut m = model.clone();
        m.gamma = g;
        for (q, q0) in m.q2.iter_mut().zip(&model.q2) {
            *q = q0 * g / gamma;
        }
        let tm = TMap::new(&m, &c.constants).map_err(|e| anyhow::anyhow!("{e}"))?;
        let p = tm.solve_tau().map_err(|e| anyhow::anyhow!("{e}"))?;
        let d = g / (p.lambda1 * p.lambda2).sqrt();
        sweep.push_str(&format!(
            "{g:.8e},{:.8e},{:.8e},{d:.8e}\n",
            p.lambda1, p.lambda2
        ));
    }
    fs::write(out.join("sweep.csv"), sweep)?;

    // reference line for K at the peaks
    let n_f = n as f64;
    println!(
        "profile.csv and sweep.csv written; K at the peaks is n(n−2)/c̃ₙ = {:.6}",
        n_f * (n_f - 2.0) / c_tilde(n)
    );
    Ok(EXIT_OK)
}
