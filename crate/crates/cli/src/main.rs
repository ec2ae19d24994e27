use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use curvemetrics::constructions::{
    baseball_curve, bound_table, d_of_h, gamma_h, gamma_h_length, gamma_h_width, l5_curve, solve_h0,
};
use curvemetrics::curve::Curve;
use curvemetrics::format::{curve_from_json, piecewise_to_json};
use curvemetrics::horizon::{horizon, horizon_by_counting, i_grid_csv};
use curvemetrics::integral::{crofton_length_2d, spherical_crofton_length};
use curvemetrics::metrics::{verify_bounds_with, DEFAULT_INRADIUS_TOL, DEFAULT_WIDTH_TOL};
use curvemetrics::{PiecewiseCurve, PolyCurve};
use serde_json::json;

mod verify;

/// Piecewise curves are turned into polylines with this many vertices.
const SAMPLES: f64 = 4000.0;

#[derive(Parser)]
#[command(name = "curvemetrics", version, about = "Width, inradius and horizon of space curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Length, width, inradius and the ratio bounds of a curve.
    Metrics {
        file: PathBuf,
        /// Width tolerance; the inradius uses ten times this.
        #[arg(long)]
        tol: Option<f64>,
        /// Treat the curve as closed regardless of the file.
        #[arg(long)]
        closed: bool,
    },
    /// Horizon functional of a curve outside the unit sphere.
    Horizon {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Estimate by counting tangent-plane crossings at N random points.
        #[arg(long, value_name = "N")]
        mc: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Write one of the built-in curves as JSON.
    Construct {
        which: Construction,
        /// Height for gamma-h; defaults to h0.
        #[arg(long)]
        h: Option<f64>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// CSV of h, L(h), d(h), min(h, d(h)), L/w for the Γ_h family.
    SweepH {
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Solve d(h) = h for the Γ_h family.
    SolveH0 {
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Recompute every published constant and print a pass/fail table.
    VerifyPaper,
    /// Length by a Crofton formula.
    Crofton {
        file: PathBuf,
        #[arg(long)]
        mode: CroftonMode,
        /// Circle radius on the sphere (spherical mode).
        #[arg(long, default_value_t = PI / 4.0)]
        rho: f64,
        /// Directions (planar) or random circles (spherical).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// CSV of the ratio lower bounds for curves traversed k times.
    BoundTable {
        #[arg(long)]
        kmax: usize,
    },
    /// CSV of I(x, y) over x ∈ [1, 3], y ∈ [1/x, 1].
    IGrid {
        #[arg(long)]
        nx: usize,
        #[arg(long)]
        ny: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    GammaH,
    L5,
    Baseball,
}

#[derive(Clone, Copy, ValueEnum)]
enum CroftonMode {
    Planar,
    Spherical,
}

fn load(path: &Path, force_closed: bool) -> anyhow::Result<Curve> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let curve = curve_from_json(&text).with_context(|| format!("{}", path.display()))?;
    if !force_closed || curve.is_closed() {
        return Ok(curve);
    }
    Ok(match curve {
        Curve::Poly(p) => Curve::Poly(PolyCurve::closed(p.vertices().to_vec())?),
        Curve::Piecewise(p) => Curve::Piecewise(PiecewiseCurve::new(p.segments().to_vec(), true)?),
    })
}

fn to_poly(curve: &Curve) -> anyhow::Result<PolyCurve> {
    Ok(curve.to_poly(SAMPLES / curve.length())?)
}

/// Polyline that stays outside the unit sphere whenever the exact curve does.
fn to_poly_outside(curve: &Curve) -> anyhow::Result<PolyCurve> {
    Ok(match curve {
        Curve::Poly(p) => p.clone(),
        Curve::Piecewise(p) => p.sample_circumscribed(SAMPLES / p.length())?,
    })
}

fn print_json(value: &impl serde::Serialize) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Metrics { file, tol, closed } => {
            let curve = load(&file, closed)?;
            let poly = to_poly(&curve)?;
            let wtol = tol.unwrap_or(DEFAULT_WIDTH_TOL);
            let rtol = tol.map_or(DEFAULT_INRADIUS_TOL, |t| 10.0 * t);
            let mut report = verify_bounds_with(&poly, wtol, rtol)?;
            // Report the exact length of analytic curves.
            report.length = curve.length();
            print_json(&report)?;
        }
        Command::Horizon { file, tol, mc, seed } => {
            let poly = to_poly_outside(&load(&file, false)?)?;
            let estimate = match mc {
                Some(n) => {
                    eprintln!("seed {seed}");
                    horizon_by_counting(&poly, n, seed)?
                }
                None => horizon(&poly, tol)?,
            };
            print_json(&estimate)?;
        }
        Command::Construct { which, h, output } => {
            if h.is_some() && !matches!(which, Construction::GammaH) {
                bail!("--h only applies to gamma-h");
            }
            let curve = match which {
                Construction::GammaH => gamma_h(h.map_or_else(|| solve_h0(1e-12), Ok)?)?,
                Construction::L5 => l5_curve()?,
                Construction::Baseball => baseball_curve()?,
            };
            let text = piecewise_to_json(&curve);
            match output {
                Some(path) => fs::write(&path, text + "\n").with_context(|| format!("cannot write {}", path.display()))?,
                None => println!("{text}"),
            }
        }
        Command::SweepH { from, to, steps } => {
            if steps < 2 || !(from > 0.0 && to > from) {
                bail!("need 0 < from < to and steps >= 2");
            }
            println!("h,L,d,w,L/w");
            for i in 0..steps {
                let h = from + (to - from) * i as f64 / (steps - 1) as f64;
                let (l, w) = (gamma_h_length(h), gamma_h_width(h));
                println!("{h},{l},{},{w},{}", d_of_h(h), l / w);
            }
        }
        Command::SolveH0 { tol } => {
            let h0 = solve_h0(tol)?;
            let length = gamma_h_length(h0);
            print_json(&json!({ "h0": h0, "length": length, "ratio": length / h0 }))?;
        }
        Command::VerifyPaper => {
            let rows = verify::run()?;
            print!("{}", verify::table(&rows));
            if rows.iter().any(|r| !r.pass) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Crofton { file, mode, rho, n, seed } => {
            let poly = to_poly(&load(&file, false)?)?;
            match mode {
                CroftonMode::Planar => {
                    let value = crofton_length_2d(&poly, n.unwrap_or(10_000))?;
                    print_json(&json!({ "mode": "planar", "value": value, "length": poly.length() }))?;
                }
                CroftonMode::Spherical => {
                    eprintln!("seed {seed}");
                    let e = spherical_crofton_length(&poly, rho, n.unwrap_or(100_000), seed)?;
                    print_json(&json!({
                        "mode": "spherical",
                        "value": e.value,
                        "abs_error": e.abs_error,
                        "length": poly.length(),
                        "seed": seed,
                    }))?;
                }
            }
        }
        Command::BoundTable { kmax } => {
            println!("k,open_w,open_r,closed_w,closed_r");
            for r in bound_table(kmax)? {
                println!("{},{},{},{},{}", r.k, r.open_w, r.open_r, r.closed_w, r.closed_r);
            }
        }
        Command::IGrid { nx, ny } => print!("{}", i_grid_csv(nx, ny)?),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
