//! Built-in verification suites and the numerical experiments behind them.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asymptotics::{correction_terms, local_coeffs, AsymptoticEvaluator};
use crate::error::{Error, Result};
use crate::numerics::ode::OdeOptions;
use crate::pde_oracle::{self, decay_fit, GridSpec};
use crate::phase::{self, RegionCase, RegionInfo, Xi};
use crate::scattering::{self, InitialDatum, ScatterOptions};
use crate::soliton::{q_of_x, SolitonData};
use crate::spectral::{Pole, ReflectionSample, SpectralData};
use crate::weightfn::Conjugation;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub const SUITES: [&str; 6] = ["phase", "weight", "soliton", "scattering", "oracle", "asymptotic-decay"];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
}

impl Check {
    fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), passed: value <= threshold, value, threshold }
    }

    fn within(name: &str, value: f64, lo: f64, hi: f64) -> Self {
        let passed = value >= lo && value <= hi;
        let dist = if passed { 0.0 } else { (value - lo).abs().min((value - hi).abs()) };
        Self { name: format!("{name} in [{lo}, {hi}] (value {value:.4})"), passed, value: dist, threshold: 0.0 }
    }
}

pub fn run_suite(name: &str, seed: u64) -> Result<Vec<Check>> {
    match name {
        "phase" => phase_suite(seed),
        "weight" => weight_suite(seed),
        "soliton" => soliton_suite(),
        "scattering" => scattering_suite(),
        "oracle" => oracle_suite(),
        "asymptotic-decay" => decay_suite(),
        other => Err(Error::Domain(format!("unknown suite '{other}'; expected one of {SUITES:?}"))),
    }
}

/// Draw ξ uniformly from the open interval of a case with stationary points.
pub fn random_xi(rng: &mut impl Rng, case: RegionCase) -> Xi {
    let (lo, hi) = match case {
        RegionCase::II => (0.0, 2.0),
        RegionCase::III => (-0.25, 0.0),
        RegionCase::I => (2.0, 10.0),
        RegionCase::IV => (-10.0, -0.25),
    };
    loop {
        if let Ok(xi) = Xi::new(rng.gen_range(lo..hi)) {
            if xi.value() != lo {
                return xi;
            }
        }
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn phase_suite(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut resid, mut gap) = (0.0f64, 0.0f64);
    for case in [RegionCase::II, RegionCase::III] {
        for _ in 0..100 {
            let xi = random_xi(&mut rng, case);
            let info = RegionInfo::classify(xi);
            let v = xi.value();
            for &p in &info.positive_points() {
                resid = resid.max(phase::theta_prime_real(p, v).abs());
            }
            // θ′ is even; z0 lies in (0, √3/2) where θ′ is increasing, z1 in (√3/2, ∞).
            let pts = info.positive_points();
            let z0 = bisect(|s| phase::theta_prime_real(s, v), 1e-300, 0.75f64.sqrt());
            gap = gap.max((pts[0] - z0).abs());
            if case == RegionCase::III {
                let z1 = bisect(|s| phase::theta_prime_real(s, v), 0.75f64.sqrt(), 1e8);
                gap = gap.max((pts[1] - z1).abs());
            }
        }
    }
    let expected = [(-1.0, RegionCase::IV, 0), (-0.1, RegionCase::III, 4), (1.0, RegionCase::II, 2), (3.0, RegionCase::I, 0)];
    let mismatches = expected
        .iter()
        .filter(|(v, c, n)| {
            let info = RegionInfo::classify(Xi::new(*v).unwrap());
            info.case != *c || info.n_xi != *n
        })
        .count();
    Ok(vec![
        Check::at_most("max |theta'| at closed-form points", resid, 1e-10),
        Check::at_most("closed form vs bisection", gap, 1e-10),
        Check::at_most("classification mismatches", mismatches as f64, 0.0),
    ])
}

/// Reflection samples r(z) = amp·e^{iφ}·e^{−z²/w²} on the half grid (k + ½)Δ.
pub fn gaussian_reflection(amp: f64, phase: f64, width: f64, z_max: f64, n: usize) -> Vec<ReflectionSample> {
    let dz = z_max / n as f64;
    (0..n)
        .map(|k| {
            let z = (k as f64 + 0.5) * dz;
            let r = Complex64::from_polar(amp * (-(z * z) / (width * width)).exp(), phase + 0.3 * z);
            ReflectionSample { z, r }
        })
        .collect()
}

pub fn random_spectrum(rng: &mut impl Rng) -> Result<SpectralData> {
    let amp = rng.gen_range(0.05..0.95);
    let phase = rng.gen_range(-3.0..3.0);
    let width = rng.gen_range(0.5..3.0);
    let n_poles = rng.gen_range(0..3);
    let mut poles: Vec<Pole> = Vec::new();
    while poles.len() < n_poles {
        let a = rng.gen_range(0.02..0.48);
        if poles.iter().all(|p| (p.a - a).abs() > 0.03) {
            poles.push(Pole { a, gamma: rng.gen_range(0.1..5.0) });
        }
    }
    SpectralData::new(poles, gaussian_reflection(amp, phase, width, 6.0, 240))
}

/// max |β_ℓ|² − ν(z_ℓ)| over random spectra, rays and times.
pub fn beta_modulus_defect(seed: u64, count: usize) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for k in 0..count {
        let spec = random_spectrum(&mut rng)?;
        let case = if k % 2 == 0 { RegionCase::II } else { RegionCase::III };
        let info = RegionInfo::classify(random_xi(&mut rng, case)).with_poles(&spec.pole_heights());
        let conj = Conjugation::new(&spec, &info);
        let coeffs = local_coeffs(&spec, &conj, rng.gen_range(1.0..500.0))?;
        for c in &coeffs.points {
            worst = worst.max((c.beta.norm_sqr() - c.nu).abs());
        }
    }
    Ok(worst)
}

/// Largest |correction| produced by reflectionless data in cases II and III.
pub fn reflectionless_correction(seed: u64, count: usize) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for k in 0..count {
        let spec = SpectralData::reflectionless(vec![Pole { a: rng.gen_range(0.05..0.45), gamma: 1.0 }])?;
        let case = if k % 2 == 0 { RegionCase::II } else { RegionCase::III };
        let info = RegionInfo::classify(random_xi(&mut rng, case)).with_poles(&spec.pole_heights());
        let conj = Conjugation::new(&spec, &info);
        let coeffs = local_coeffs(&spec, &conj, rng.gen_range(1.0..100.0))?;
        let terms = correction_terms(&coeffs, None)?;
        let mut m = terms.f1.norm();
        for v in terms.b0.iter().chain(&terms.b1) {
            m = m.max(v.norm());
        }
        worst = worst.max(m);
    }
    Ok(worst)
}

fn weight_suite(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = SpectralData::new(vec![Pole { a: 0.3, gamma: 1.0 }], gaussian_reflection(0.6, 0.4, 1.5, 6.0, 240))?;
    let mut sym = 0.0f64;
    for k in 0..100 {
        let case = [RegionCase::I, RegionCase::II, RegionCase::III, RegionCase::IV][k % 4];
        let info = RegionInfo::classify(random_xi(&mut rng, case));
        let conj = Conjugation::new(&spec, &info);
        let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.05..2.0) * if k % 3 == 0 { -1.0 } else { 1.0 });
        if (z - I * 0.3).norm() < 0.05 || (z + I * 0.3).norm() < 0.05 {
            continue;
        }
        sym = sym.max((conj.t(z)? * conj.t(-z)? - 1.0).norm());
    }
    let info = RegionInfo::classify(Xi::new(-0.1)?);
    let conj = Conjugation::new(&spec, &info);
    let eps = 1e-8;
    let mut jump = 0.0f64;
    for s in spec.samples().iter().filter(|s| info.in_jump_set(s.z)).step_by(7) {
        let ratio = conj.delta(Complex64::new(s.z, eps))? / conj.delta(Complex64::new(s.z, -eps))?;
        jump = jump.max((ratio - (1.0 - s.r.norm_sqr())).norm());
    }
    let single = SpectralData::reflectionless(vec![Pole { a: 0.25, gamma: 1.0 }])?;
    let info = RegionInfo::classify(Xi::new(1.0)?);
    let t_half = Conjugation::new(&single, &info).t(I * 0.5)?;
    Ok(vec![
        Check::at_most("|T(z)T(-z) - 1|", sym, 1e-8),
        Check::at_most("Plemelj jump defect", jump, 1e-6),
        Check::at_most("|T(i/2) - 3| single pole", (t_half - 3.0).norm(), 1e-12),
        Check::at_most("max ||beta|^2 - nu|", beta_modulus_defect(seed, 100)?, 1e-14),
        Check::at_most("reflectionless correction", reflectionless_correction(seed, 20)?, 0.0),
    ])
}

pub fn soliton_residual(data: &SolitonData) -> Result<f64> {
    let xs: Vec<f64> = (0..=80).map(|k| -20.0 + 0.5 * k as f64).collect();
    let ts: Vec<f64> = (0..=8).map(|k| 1.0 + 0.5 * k as f64).collect();
    pde_oracle::residual(|x, t| Ok(q_of_x(data, x, t)?.q), &xs, &ts, 1e-2)
}

fn soliton_suite() -> Result<Vec<Check>> {
    let data = SolitonData::new(0.25, 1.0)?;
    let res = soliton_residual(&data)?;
    let peak = crate::soliton::one_soliton(&data, 2.0f64.ln() / 0.5, 0.0);
    Ok(vec![
        Check::at_most("PDE residual (h = 1e-2)", res, 1e-4),
        Check::at_most("|q(alpha = 1) - 8a^2/(1-4a^2)|", (peak.q - data.amplitude()).abs(), 1e-14),
    ])
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundTrip {
    pub poles: Vec<Pole>,
    pub sup_r: f64,
}

/// Sample the one-soliton at t = 0 on [−L, L] and run forward scattering.
pub fn scattering_roundtrip(data: &SolitonData, half_length: f64, h: f64) -> Result<RoundTrip> {
    let datum = InitialDatum::from_fn(
        |x| q_of_x(data, x, 0.0).map(|p| p.q).unwrap_or(f64::NAN),
        half_length,
        h,
        InitialDatum::DEFAULT_TAIL_TOL,
    )?;
    let spec = scattering::scatter(&datum, ScatterOptions { n_z: 100, ..Default::default() })?;
    let sup_r = spec.samples().iter().map(|s| s.r.norm()).fold(0.0, f64::max);
    Ok(RoundTrip { poles: spec.poles().to_vec(), sup_r })
}

fn scattering_suite() -> Result<Vec<Check>> {
    let data = SolitonData::new(0.25, 1.0)?;
    let rt = scattering_roundtrip(&data, 60.0, 1.0 / 64.0)?;
    let (da, dg) = match rt.poles.as_slice() {
        [p] => ((p.a - 0.25).abs(), (p.gamma - 1.0).abs()),
        _ => (f64::INFINITY, f64::INFINITY),
    };
    Ok(vec![
        Check::at_most("|a - 0.25|", da, 1e-3),
        Check::at_most("|gamma - 1| relative", dg, 0.05),
        Check::at_most("sup |r|", rt.sup_r, 1e-3),
    ])
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OracleRun {
    pub sup_error: f64,
    pub mass_drift: f64,
    pub energy_drift: f64,
}

/// Evolve the one-soliton on a periodic box and compare with the exact profile.
pub fn soliton_oracle_run(data: &SolitonData, grid: &GridSpec, t_final: f64) -> Result<OracleRun> {
    let x = grid.x();
    let q0 = x.iter().map(|&v| q_of_x(data, v, 0.0).map(|p| p.q)).collect::<Result<Vec<_>>>()?;
    let tr = pde_oracle::evolve(&q0, grid, &[t_final])?;
    let last = tr.last();
    let mut sup = 0.0f64;
    for (xv, qv) in x.iter().zip(&last.q) {
        sup = sup.max((qv - q_of_x(data, *xv, t_final)?.q).abs());
    }
    let (c0, c1) = (tr.conserved[0], tr.conserved[tr.conserved.len() - 1]);
    Ok(OracleRun {
        sup_error: sup,
        mass_drift: ((c1.mass - c0.mass) / c0.mass).abs(),
        energy_drift: ((c1.energy - c0.energy) / c0.energy).abs(),
    })
}

fn oracle_suite() -> Result<Vec<Check>> {
    let run = soliton_oracle_run(&SolitonData::new(0.25, 1.0)?, &GridSpec::new(100.0, 4096, 0.01), 10.0)?;
    Ok(vec![
        Check::at_most("sup error at t = 10", run.sup_error, 1e-3),
        Check::at_most("relative mass drift", run.mass_drift, 1e-6),
        Check::at_most("relative energy drift", run.energy_drift, 1e-6),
    ])
}

#[derive(Debug, Clone)]
pub struct DecayConfig {
    pub soliton: SolitonData,
    pub bump_amplitude: f64,
    pub bump_center: f64,
    pub times: Vec<f64>,
    pub grid: GridSpec,
    /// Window of ξ = y/t in which errors are measured.
    pub xi_window: (f64, f64),
    /// Evaluate the asymptotic formula at every `stride`-th grid point.
    pub stride: usize,
    pub scatter_half_length: f64,
    pub scatter_step: f64,
    pub scatter: ScatterOptions,
}

impl Default for DecayConfig {
    fn default() -> Self {
        Self {
            soliton: SolitonData { a: 0.25, gamma: 1.0 },
            bump_amplitude: 0.1,
            bump_center: -10.0,
            times: vec![25.0, 50.0, 100.0, 200.0],
            grid: GridSpec::new(350.0, 8192, 0.02).with_center(250.0),
            xi_window: (0.5, 1.5),
            stride: 4,
            scatter_half_length: 60.0,
            scatter_step: 1.0 / 64.0,
            scatter: ScatterOptions { ode: OdeOptions::default(), z_max: 5.0, n_z: 250 },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecaySeries {
    pub poles: Vec<Pole>,
    pub times: Vec<f64>,
    /// sup |q_num − q_leading| over the window.
    pub leading_errors: Vec<f64>,
    /// sup |q_num − (q_leading + correction)| over the window.
    pub total_errors: Vec<f64>,
    pub points: Vec<usize>,
    pub leading_slope: f64,
    pub total_slope: f64,
}

impl DecayConfig {
    pub fn initial(&self, x: f64) -> Result<f64> {
        let bump = self.bump_amplitude * (-(x - self.bump_center).powi(2)).exp();
        Ok(q_of_x(&self.soliton, x, 0.0)?.q + bump)
    }
}

/// Soliton plus a small Gaussian: evolve numerically, scatter the datum, and compare
/// with the asymptotic formula along rays in the window.
pub fn decay_experiment(cfg: &DecayConfig) -> Result<DecaySeries> {
    let datum = InitialDatum::from_fn(
        |x| cfg.initial(x).unwrap_or(f64::NAN),
        cfg.scatter_half_length,
        cfg.scatter_step,
        InitialDatum::DEFAULT_TAIL_TOL,
    )?;
    let spec = scattering::scatter(&datum, cfg.scatter)?;
    let x = cfg.grid.x();
    let q0 = x.iter().map(|&v| cfg.initial(v)).collect::<Result<Vec<_>>>()?;
    let traj = pde_oracle::evolve(&q0, &cfg.grid, &cfg.times)?;
    let ev = AsymptoticEvaluator::new(&spec);
    let (mut lead, mut total, mut points) = (Vec::new(), Vec::new(), Vec::new());
    for snap in traj.snapshots.iter().skip(1) {
        let t = snap.t;
        let (lo, hi) = (cfg.xi_window.0 * t - 1.0, cfg.xi_window.1 * t + 2.0 * cfg.soliton.p().ln() + 1.0);
        let (mut el, mut et, mut count) = (0.0f64, 0.0f64, 0usize);
        for j in (0..x.len()).step_by(cfg.stride.max(1)) {
            if x[j] < lo || x[j] > hi {
                continue;
            }
            let r = ev.evaluate(x[j], t)?;
            if r.xi < cfg.xi_window.0 || r.xi > cfg.xi_window.1 {
                continue;
            }
            el = el.max((snap.q[j] - r.q_leading).abs());
            et = et.max((snap.q[j] - r.q_total).abs());
            count += 1;
        }
        lead.push(el);
        total.push(et);
        points.push(count);
    }
    let leading_slope = decay_fit(&cfg.times, &lead)?.slope;
    let total_slope = decay_fit(&cfg.times, &total)?.slope;
    Ok(DecaySeries {
        poles: spec.poles().to_vec(),
        times: cfg.times.clone(),
        leading_errors: lead,
        total_errors: total,
        points,
        leading_slope,
        total_slope,
    })
}

fn decay_suite() -> Result<Vec<Check>> {
    let s = decay_experiment(&DecayConfig::default())?;
    Ok(vec![Check::within("log-log slope of the leading-order error", s.leading_slope, -0.75, -0.25)])
}
