//! Command-line front end for the `ch_ist` library.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use ch_ist::asymptotics::{AsymptoticEvaluator, AsymptoticResult};
use ch_ist::io::{fmt, read_datum_file, write_table};
use ch_ist::numerics::spline::CubicSpline;
use ch_ist::pde_oracle::{self, GridSpec};
use ch_ist::phase::{sign_re_i_theta, RegionInfo, Sign, Xi};
use ch_ist::scattering::{self, InitialDatum, ScatterOptions};
use ch_ist::soliton::{invert_x, one_soliton, SolitonData};
use ch_ist::spectral::SpectralData;
use ch_ist::verify::{run_suite, SUITES};
use ch_ist::{Error, Result};
use clap::{Parser, Subcommand};
use ch_ist::Complex64;
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "ch-ist", version, about = "Camassa-Holm inverse scattering and long-time asymptotics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Region data for a ray ξ = y/t, optionally with ρ and j0 from a spectrum.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        xi: f64,
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Write the sign of Re(iθ) on a grid over [−2, 2]² to this CSV file.
        #[arg(long)]
        sign_grid: Option<PathBuf>,
        #[arg(long, default_value_t = 101)]
        grid_n: usize,
    },
    /// Forward scattering of a datum CSV (columns x,q0) into spectral JSON.
    Scatter {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 5.0)]
        z_max: f64,
        #[arg(long, default_value_t = 250)]
        n_z: usize,
        #[arg(long, default_value_t = InitialDatum::DEFAULT_TAIL_TOL)]
        tail_tol: f64,
    },
    /// Tabulate the one-soliton at physical points.
    Soliton {
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// Comma-separated times.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        t: Vec<f64>,
        /// Range start:end:count.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate the long-time asymptotic formula.
    Asymptote {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Pseudo-spectral evolution of a datum CSV.
    Evolve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 100.0)]
        half_length: f64,
        #[arg(long, default_value_t = 4096)]
        n: usize,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        center: f64,
        #[arg(long)]
        t_final: f64,
        #[arg(long)]
        save_every: Option<f64>,
        #[arg(long)]
        trajectory: PathBuf,
        #[arg(long)]
        conserved: PathBuf,
    },
    /// Run a verification suite (or `all`).
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Parallel evaluation of the asymptotic formula over an (x, t) grid.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::Domain(format!("range '{s}' must be start:end:count"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].parse().map_err(|_| bad())?;
    let b: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    Ok(match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
    })
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

const ASYMPTOTE_HEADER: [&str; 6] = ["x", "t", "q_leading", "correction", "q_total", "order_tag"];

fn asymptote_row(r: &AsymptoticResult) -> Vec<String> {
    vec![fmt(r.x), fmt(r.t), fmt(r.q_leading), fmt(r.correction), fmt(r.q_total), r.order_tag.clone()]
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Classify { xi, spec, sign_grid, grid_n } => {
            let xi = Xi::new(xi)?;
            let mut info = RegionInfo::classify(xi);
            if let Some(p) = spec {
                info = info.with_poles(&SpectralData::read(&p)?.pole_heights());
            }
            println!("{}", serde_json::to_string_pretty(&info)?);
            if let Some(path) = sign_grid {
                let axis = parse_range(&format!("-2:2:{grid_n}"))?;
                let mut rows = Vec::new();
                for &im in &axis {
                    for &re in &axis {
                        let s = match sign_re_i_theta(Complex64::new(re, im), xi) {
                            Ok(Sign::Positive) => "1",
                            Ok(Sign::Negative) => "-1",
                            Ok(Sign::Zero) => "0",
                            Err(_) => "nan",
                        };
                        rows.push(vec![fmt(re), fmt(im), s.to_string()]);
                    }
                }
                write_table(File::create(path)?, &["re", "im", "sign"], rows)?;
            }
        }
        Command::Scatter { input, output, z_max, n_z, tail_tol } => {
            let (x, q0) = read_datum_file(&input)?;
            let datum = InitialDatum::new(x, q0, tail_tol)?;
            let spec = scattering::scatter(&datum, ScatterOptions { z_max, n_z, ..Default::default() })?;
            let text = spec.to_json_string()?;
            let mut w = sink(&output)?;
            writeln!(w, "{text}")?;
        }
        Command::Soliton { a, gamma, t, x, output } => {
            let data = SolitonData::new(a, gamma)?;
            let xs = parse_range(&x)?;
            let mut rows = Vec::new();
            for &tv in &t {
                for &xv in &xs {
                    let y = invert_x(&data, xv, tv)?;
                    let p = one_soliton(&data, y, tv);
                    rows.push(vec![fmt(xv), fmt(tv), fmt(p.q), fmt(p.y), fmt(p.alpha)]);
                }
            }
            write_table(sink(&output)?, &["x", "t", "q", "y", "alpha"], rows)?;
        }
        Command::Asymptote { spec, t, x, output } => {
            let spec = SpectralData::read(&spec)?;
            let ev = AsymptoticEvaluator::new(&spec);
            let xs = parse_range(&x)?;
            let mut rows = Vec::new();
            for &tv in &t {
                for &xv in &xs {
                    rows.push(asymptote_row(&ev.evaluate(xv, tv)?));
                }
            }
            write_table(sink(&output)?, &ASYMPTOTE_HEADER, rows)?;
        }
        Command::Evolve { input, half_length, n, dt, center, t_final, save_every, trajectory, conserved } => {
            let (xin, qin) = read_datum_file(&input)?;
            let spline = CubicSpline::new(&xin, &qin)?;
            let grid = GridSpec::new(half_length, n, dt).with_center(center);
            let q0: Vec<f64> = grid
                .x()
                .iter()
                .map(|&v| if v < spline.x_min() || v > spline.x_max() { 0.0 } else { spline.eval(v) })
                .collect();
            let times: Vec<f64> = match save_every {
                Some(h) if h > 0.0 => {
                    let k = (t_final / h).floor() as usize;
                    let mut v: Vec<f64> = (1..=k).map(|i| i as f64 * h).collect();
                    if v.last().is_none_or(|&l| (l - t_final).abs() > 1e-12) {
                        v.push(t_final);
                    }
                    v
                }
                _ => vec![t_final],
            };
            let tr = pde_oracle::evolve(&q0, &grid, &times)?;
            let x = grid.x();
            let rows = tr.snapshots.iter().flat_map(|s| {
                let x = &x;
                s.q.iter().enumerate().map(move |(j, q)| vec![fmt(s.t), fmt(x[j]), fmt(*q)])
            });
            write_table(File::create(trajectory)?, &["t", "x", "q"], rows)?;
            let rows = tr.conserved.iter().map(|c| vec![fmt(c.t), fmt(c.mass), fmt(c.energy)]);
            write_table(File::create(conserved)?, &["t", "mass", "energy"], rows)?;
        }
        Command::Verify { suite, seed } => {
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let mut failed = 0;
            for name in names {
                for c in run_suite(name, seed)? {
                    let tag = if c.passed { "PASS" } else { "FAIL" };
                    println!("{tag} [{name}] {}: {:.3e} (threshold {:.1e})", c.name, c.value, c.threshold);
                    failed += usize::from(!c.passed);
                }
            }
            if failed > 0 {
                return Err(Error::NonConvergence(format!("{failed} verification check(s) failed")));
            }
        }
        Command::Sweep { spec, t, x, output } => {
            let spec = SpectralData::read(&spec)?;
            let xs = parse_range(&x)?;
            let jobs: Vec<(f64, f64)> = t.iter().flat_map(|&tv| xs.iter().map(move |&xv| (xv, tv))).collect();
            let threads = std::env::var("CH_IST_THREADS").ok().and_then(|v| v.parse().ok()).unwrap_or(0);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Domain(e.to_string()))?;
            let ev = AsymptoticEvaluator::new(&spec);
            let results: Vec<Result<AsymptoticResult>> =
                pool.install(|| jobs.par_iter().map(|&(xv, tv)| ev.evaluate(xv, tv)).collect());
            let rows = results.into_iter().collect::<Result<Vec<_>>>()?;
            write_table(sink(&output)?, &ASYMPTOTE_HEADER, rows.iter().map(asymptote_row))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
