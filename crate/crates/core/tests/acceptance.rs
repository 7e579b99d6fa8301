//! Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.
//! Run with `cargo test -p ch-ist --test acceptance -- --nocapture --test-threads=1`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use ch_ist::asymptotics::{correction_terms, local_coeffs};
use ch_ist::pde_oracle::GridSpec;
use ch_ist::phase::{theta_prime_real, RegionCase, RegionInfo, Xi};
use ch_ist::soliton::{one_soliton, SolitonData};
use ch_ist::spectral::{Pole, SpectralData};
use ch_ist::verify::{
    beta_modulus_defect, decay_experiment, gaussian_reflection, random_spectrum, random_xi, scattering_roundtrip,
    soliton_oracle_run, soliton_residual, DecayConfig,
};
use ch_ist::weightfn::Conjugation;
use ch_ist::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: &str, passed: bool, started: Instant, budget: Duration, detail: String) {
    let elapsed = started.elapsed();
    let ok = passed && elapsed <= budget;
    println!(
        "ACCEPTANCE {id}: {} ({detail}; {:.2}s of {:.0}s budget)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    assert!(ok, "criterion {id} failed: {detail}");
}

/// Independent root finder: plain bisection on the sign of θ′.
fn oracle_root(xi: f64, mut lo: f64, mut hi: f64) -> f64 {
    let f = |s: f64| theta_prime_real(s, xi);
    let up = f(lo) < 0.0;
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == up {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn criterion_1_stationary_points() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut resid, mut gap) = (0.0f64, 0.0f64);
    for case in [RegionCase::II, RegionCase::III] {
        for _ in 0..100 {
            let xi = random_xi(&mut rng, case);
            let info = RegionInfo::classify(xi);
            let v = xi.value();
            let pts = info.positive_points();
            for &p in &pts {
                resid = resid.max(theta_prime_real(p, v).abs());
            }
            // θ′ increases on (0, √3/2) and decreases beyond; z0 lies in the first branch.
            gap = gap.max((pts[0] - oracle_root(v, 0.0, 0.75f64.sqrt())).abs());
            if case == RegionCase::III {
                gap = gap.max((pts[1] - oracle_root(v, 0.75f64.sqrt(), 1e6)).abs());
            }
        }
    }
    report(
        "1 stationary points",
        resid <= 1e-10 && gap <= 1e-10,
        started,
        Duration::from_secs(1),
        format!("max|theta'| = {resid:.2e}, max bisection gap = {gap:.2e}"),
    );
}

#[test]
fn criterion_2_region_classification() {
    let started = Instant::now();
    let table = [
        (-1.0, RegionCase::IV, 0usize),
        (-0.1, RegionCase::III, 4),
        (1.0, RegionCase::II, 2),
        (3.0, RegionCase::I, 0),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (v, case, n) in table {
        let info = RegionInfo::classify(Xi::new(v).unwrap());
        let real_z0 = info.case == RegionCase::II || info.case == RegionCase::III;
        let matches = info.case == case && info.n_xi == n && real_z0 == (n > 0);
        ok &= matches;
        detail.push(format!("xi={v}: case {} n={}", info.case, info.n_xi));
    }
    report("2 region classification", ok, started, Duration::from_secs(1), detail.join(", "));
}

/// Independent jump oracle: ln(δ(s+iε)/δ(s−iε)) = i∫ν(u)·2iε/((u−s)²+ε²)du, evaluated
/// after u = s + ε tan φ with composite Simpson in φ over the jump set.
fn poisson_log_jump(spec: &SpectralData, info: &RegionInfo, s: f64, eps: f64) -> f64 {
    let n = 400_000;
    let (a, b) = (-PI / 2.0 + 1e-9, PI / 2.0 - 1e-9);
    let h = (b - a) / n as f64;
    let f = |phi: f64| {
        let u = s + eps * phi.tan();
        if info.in_jump_set(u) { spec.nu(u) } else { 0.0 }
    };
    let mut sum = f(a) + f(b);
    for k in 1..n {
        sum += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    // i · (2i ∫ν dφ) = −2∫ν dφ
    -2.0 * sum * h / 3.0
}

#[test]
fn criterion_3_t_function_identities() {
    let started = Instant::now();
    let spec =
        SpectralData::new(vec![Pole { a: 0.3, gamma: 1.0 }], gaussian_reflection(0.6, 0.4, 1.5, 6.0, 240)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut sym = 0.0f64;
    let mut count = 0;
    while count < 100 {
        let case = [RegionCase::I, RegionCase::II, RegionCase::III, RegionCase::IV][count % 4];
        let info = RegionInfo::classify(random_xi(&mut rng, case));
        let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-2.0..2.0));
        if z.im.abs() < 0.05 || (z.norm() - 0.3).abs() < 0.05 {
            continue;
        }
        let c = Conjugation::new(&spec, &info);
        sym = sym.max((c.t(z).unwrap() * c.t(-z).unwrap() - 1.0).norm());
        count += 1;
    }
    let info = RegionInfo::classify(Xi::new(-0.1).unwrap());
    let c = Conjugation::new(&spec, &info);
    let eps = 1e-8;
    let (mut jump, mut oracle) = (0.0f64, 0.0f64);
    let interior: Vec<_> = spec
        .samples()
        .iter()
        .filter(|s| info.in_jump_set(s.z - 0.05) && info.in_jump_set(s.z + 0.05))
        .collect();
    for s in interior.iter().step_by(5) {
        let target = 1.0 - s.r.norm_sqr();
        let ratio = c.delta(Complex64::new(s.z, eps)).unwrap() / c.delta(Complex64::new(s.z, -eps)).unwrap();
        jump = jump.max((ratio - target).norm());
        oracle = oracle.max((poisson_log_jump(&spec, &info, s.z, eps).exp() - target).abs());
    }
    let single = SpectralData::reflectionless(vec![Pole { a: 0.25, gamma: 1.0 }]).unwrap();
    let t_half = Conjugation::new(&single, &RegionInfo::classify(Xi::new(1.0).unwrap()))
        .t(Complex64::new(0.0, 0.5))
        .unwrap();
    let t_err = (t_half - 3.0).norm();
    report(
        "3 T-function identities",
        sym <= 1e-8 && jump <= 1e-6 && oracle <= 1e-6 && t_err <= 1e-12,
        started,
        Duration::from_secs(10),
        format!(
            "max|T(z)T(-z)-1| = {sym:.2e}, Plemelj defect = {jump:.2e} (Poisson oracle {oracle:.2e}), |T(i/2)-3| = {t_err:.1e}"
        ),
    );
}

#[test]
fn criterion_4a_one_soliton_residual() {
    let started = Instant::now();
    let res = soliton_residual(&SolitonData::new(0.25, 1.0).unwrap()).unwrap();
    report(
        "4a one-soliton PDE residual",
        res <= 1e-4,
        started,
        Duration::from_secs(30),
        format!("sup residual over x in [-20,20], t in [1,5], h = 1e-2: {res:.2e}"),
    );
}

#[test]
fn criterion_4b_one_soliton_alpha_one_value() {
    let started = Instant::now();
    let data = SolitonData::new(0.25, 1.0).unwrap();
    // α = γ/(2a)·e^{−2a y} = 1 at t = 0.
    let y = (data.gamma / (2.0 * data.a)).ln() / (2.0 * data.a);
    let p = one_soliton(&data, y, 0.0);
    report(
        "4b one-soliton value at alpha = 1, a = 0.25",
        (p.alpha - 1.0).abs() < 1e-14 && (p.q - 0.5).abs() <= 1e-12,
        started,
        Duration::from_secs(30),
        format!("q = {:.15} (expected 0.5)", p.q),
    );
}

#[test]
fn criterion_5_scattering_roundtrip() {
    let started = Instant::now();
    let rt = scattering_roundtrip(&SolitonData::new(0.25, 1.0).unwrap(), 60.0, 1.0 / 64.0).unwrap();
    let (a, g) = match rt.poles.as_slice() {
        [p] => (p.a, p.gamma),
        _ => (f64::NAN, f64::NAN),
    };
    report(
        "5 scattering roundtrip",
        (a - 0.25).abs() <= 1e-3 && ((g - 1.0) / 1.0).abs() <= 0.05 && rt.sup_r <= 1e-3,
        started,
        Duration::from_secs(60),
        format!("{} pole(s), a = {a:.12}, gamma = {g:.9}, sup|r| = {:.2e}", rt.poles.len(), rt.sup_r),
    );
}

#[test]
fn criterion_6_oracle_fidelity() {
    let started = Instant::now();
    let run = soliton_oracle_run(&SolitonData::new(0.25, 1.0).unwrap(), &GridSpec::new(100.0, 4096, 0.01), 10.0)
        .unwrap();
    report(
        "6 pseudo-spectral oracle fidelity",
        run.sup_error <= 1e-3 && run.mass_drift <= 1e-6 && run.energy_drift <= 1e-6,
        started,
        Duration::from_secs(300),
        format!(
            "sup error {:.2e}, mass drift {:.2e}, energy drift {:.2e}",
            run.sup_error, run.mass_drift, run.energy_drift
        ),
    );
}

#[test]
fn criterion_7_asymptotic_decay_trend() {
    let started = Instant::now();
    let s = decay_experiment(&DecayConfig::default()).unwrap();
    let errs: Vec<String> = s.leading_errors.iter().map(|e| format!("{e:.2e}")).collect();
    report(
        "7 asymptotic decay trend",
        (-0.75..=-0.25).contains(&s.leading_slope),
        started,
        Duration::from_secs(900),
        format!(
            "slope {:.3} from errors [{}] at t = {:?}; with t^-1/2 correction slope {:.3}",
            s.leading_slope,
            errs.join(", "),
            s.times,
            s.total_slope
        ),
    );
}

#[test]
fn criterion_8_beta_structure() {
    let started = Instant::now();
    let defect = beta_modulus_defect(8, 100).unwrap();
    let mut worst_zero = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for k in 0..50 {
        // Same random pole sets as the reflective spectra, with r ≡ 0.
        let poles = random_spectrum(&mut rng).unwrap().poles().to_vec();
        let spec = SpectralData::reflectionless(poles).unwrap();
        let case = if k % 2 == 0 { RegionCase::II } else { RegionCase::III };
        let info = RegionInfo::classify(random_xi(&mut rng, case)).with_poles(&spec.pole_heights());
        let conj = Conjugation::new(&spec, &info);
        let coeffs = local_coeffs(&spec, &conj, rng.gen_range(1.0..300.0)).unwrap();
        let terms = correction_terms(&coeffs, None).unwrap();
        for v in terms.b0.iter().chain(&terms.b1).chain([&terms.f1, &terms.x_shift]) {
            worst_zero = worst_zero.max(v.norm());
        }
        for c in &coeffs.points {
            worst_zero = worst_zero.max(c.beta.norm());
        }
    }
    report(
        "8 beta-coefficient structure",
        defect <= 1e-14 && worst_zero == 0.0,
        started,
        Duration::from_secs(1),
        format!("max||beta|^2 - nu| = {defect:.2e} over 100 spectra, max reflectionless term = {worst_zero:e}"),
    );
}
