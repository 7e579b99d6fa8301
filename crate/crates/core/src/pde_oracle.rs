//! Periodic pseudo-spectral reference solver, conserved quantities, a
//! finite-difference PDE residual and log-log decay fits.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};

/// Periodic grid x_j = center − L + j·2L/N, RK4 step `dt`, and 2/3-rule style dealiasing
/// keeping |k| ≤ dealias·k_max.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub half_length: f64,
    pub n: usize,
    pub dt: f64,
    pub dealias: f64,
    pub center: f64,
}

impl GridSpec {
    pub fn new(half_length: f64, n: usize, dt: f64) -> Self {
        Self { half_length, n, dt, dealias: 2.0 / 3.0, center: 0.0 }
    }

    pub fn with_center(mut self, center: f64) -> Self {
        self.center = center;
        self
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_length / self.n as f64
    }

    pub fn x(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.n).map(|j| self.center - self.half_length + j as f64 * dx).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.n < 256 || !self.n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("N = {} must be a power of two >= 256", self.n)));
        }
        if !(self.half_length > 0.0 && self.dt > 0.0 && self.dealias > 0.0 && self.dealias <= 1.0) {
            return Err(Error::InvalidGrid("L, dt must be positive and dealias in (0, 1]".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Conserved {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub q: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: GridSpec,
    pub snapshots: Vec<Snapshot>,
    pub conserved: Vec<Conserved>,
}

impl Trajectory {
    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("trajectory always holds the initial state")
    }
}

pub const TAIL_TOL_INITIAL: f64 = 1e-10;
pub const TAIL_TOL_RUN: f64 = 1e-6;
pub const BLOWUP_FACTOR: f64 = 1e3;

struct Spectral {
    n: usize,
    k: Vec<f64>,
    mask: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Spectral {
    fn new(grid: &GridSpec) -> Self {
        let n = grid.n;
        let base = PI / grid.half_length;
        let k: Vec<f64> = (0..n)
            .map(|j| {
                if j < n / 2 {
                    j as f64 * base
                } else if j == n / 2 {
                    0.0
                } else {
                    (j as f64 - n as f64) * base
                }
            })
            .collect();
        let kmax = (n / 2) as f64 * base;
        let mask = (0..n)
            .map(|j| if j != n / 2 && k[j].abs() <= grid.dealias * kmax { 1.0 } else { 0.0 })
            .collect();
        let mut planner = FftPlanner::new();
        Self { n, k, mask, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
    }

    fn fft(&self, v: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = v.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        self.forward.process(&mut buf);
        buf
    }

    fn ifft(&self, v: &[Complex64]) -> Vec<f64> {
        let mut buf = v.to_vec();
        self.inverse.process(&mut buf);
        let s = 1.0 / self.n as f64;
        buf.iter().map(|c| c.re * s).collect()
    }

    fn q_hat(&self, w_hat: &[Complex64]) -> Vec<Complex64> {
        w_hat.iter().zip(&self.k).map(|(w, k)| w / (1.0 + k * k)).collect()
    }

    fn derivative(&self, f_hat: &[Complex64]) -> Vec<Complex64> {
        f_hat.iter().zip(&self.k).map(|(f, k)| f * Complex64::new(0.0, *k)).collect()
    }

    /// Time derivative of ŵ for w = q − q_xx: w_t = −(q w_x + 2 q_x w) − 2 q_x.
    fn rhs(&self, w_hat: &[Complex64]) -> Vec<Complex64> {
        let qh = self.q_hat(w_hat);
        let q = self.ifft(&qh);
        let qx = self.ifft(&self.derivative(&qh));
        let w = self.ifft(w_hat);
        let wx = self.ifft(&self.derivative(w_hat));
        let nl: Vec<f64> = (0..self.n).map(|j| -(q[j] * wx[j] + 2.0 * qx[j] * w[j]) - 2.0 * qx[j]).collect();
        self.fft(&nl).iter().zip(&self.mask).map(|(v, m)| v * m).collect()
    }
}

fn axpy(y: &[Complex64], k: &[Complex64], h: f64) -> Vec<Complex64> {
    y.iter().zip(k).map(|(a, b)| a + b * h).collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn edge(v: &[f64]) -> f64 {
    v[0].abs().max(v[v.len() - 1].abs())
}

/// Mass ∫q dx and energy ∫(q² + q_x²) dx of a periodic sample vector.
pub fn conserved(q: &[f64], grid: &GridSpec) -> Conserved {
    let sp = Spectral::new(grid);
    conserved_with(&sp, q, grid.dx(), 0.0)
}

fn conserved_with(sp: &Spectral, q: &[f64], dx: f64, t: f64) -> Conserved {
    let qx = sp.ifft(&sp.derivative(&sp.fft(q)));
    Conserved {
        t,
        mass: dx * q.iter().sum::<f64>(),
        energy: dx * q.iter().zip(&qx).map(|(a, b)| a * a + b * b).sum::<f64>(),
    }
}

/// Integrate from t = 0, storing the state at each time in `save_times` (ascending).
pub fn evolve(q0: &[f64], grid: &GridSpec, save_times: &[f64]) -> Result<Trajectory> {
    grid.validate()?;
    if q0.len() != grid.n {
        return Err(Error::InvalidDatum(format!("expected {} samples, got {}", grid.n, q0.len())));
    }
    if q0.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidDatum("non-finite initial sample".into()));
    }
    if edge(q0) > TAIL_TOL_INITIAL {
        return Err(Error::InvalidDatum(format!("|q0| = {:e} at the domain edge", edge(q0))));
    }
    let q_max0 = max_abs(q0);
    let limit = 0.5 * grid.dx() / q_max0.max(1e-300);
    if grid.dt > limit {
        return Err(Error::Cfl { dt: grid.dt, limit });
    }
    if save_times.windows(2).any(|w| w[1] < w[0]) || save_times.iter().any(|&t| t < 0.0) {
        return Err(Error::InvalidGrid("save times must be non-negative and ascending".into()));
    }
    let sp = Spectral::new(grid);
    let dx = grid.dx();
    let qh0 = sp.fft(q0);
    let mut w_hat: Vec<Complex64> = qh0
        .iter()
        .zip(&sp.k)
        .zip(&sp.mask)
        .map(|((q, k), m)| q * (1.0 + k * k) * m)
        .collect();
    let mut t = 0.0;
    let mut snapshots = vec![Snapshot { t: 0.0, q: q0.to_vec() }];
    let mut cons = vec![conserved_with(&sp, q0, dx, 0.0)];
    for &target in save_times {
        if target == 0.0 {
            continue;
        }
        while t < target - 1e-12 {
            let h = grid.dt.min(target - t);
            let k1 = sp.rhs(&w_hat);
            let k2 = sp.rhs(&axpy(&w_hat, &k1, 0.5 * h));
            let k3 = sp.rhs(&axpy(&w_hat, &k2, 0.5 * h));
            let k4 = sp.rhs(&axpy(&w_hat, &k3, h));
            for j in 0..sp.n {
                w_hat[j] += (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) * (h / 6.0);
            }
            t += h;
            let q = sp.ifft(&sp.q_hat(&w_hat));
            let m = max_abs(&q);
            if !m.is_finite() || m > BLOWUP_FACTOR * q_max0.max(1e-300) {
                return Err(Error::BlowUp { t, max: m });
            }
            if edge(&q) > TAIL_TOL_RUN {
                return Err(Error::TailLeak { t, value: edge(&q) });
            }
        }
        let q = sp.ifft(&sp.q_hat(&w_hat));
        cons.push(conserved_with(&sp, &q, dx, target));
        snapshots.push(Snapshot { t: target, q });
    }
    Ok(Trajectory { grid: *grid, snapshots, conserved: cons })
}

/// sup |m_t + 2q_x + 3q q_x − 2q_x q_xx − q q_xxx| over the sample points, using
/// fourth-order centred differences in x and second-order centred differences in t.
pub fn residual<F>(q: F, xs: &[f64], ts: &[f64], h: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let mut sup: f64 = 0.0;
    for &t in ts {
        for &x in xs {
            let s = |tt: f64| -> Result<[f64; 7]> {
                let mut v = [0.0; 7];
                for (j, slot) in v.iter_mut().enumerate() {
                    *slot = q(x + (j as f64 - 3.0) * h, tt)?;
                }
                Ok(v)
            };
            let c = s(t)?;
            let qxx = |v: &[f64; 7]| (-v[1] + 16.0 * v[2] - 30.0 * v[3] + 16.0 * v[4] - v[5]) / (12.0 * h * h);
            let qx = (v_diff(&c)) / (12.0 * h);
            let q2 = qxx(&c);
            let q3 = (-c[6] + 8.0 * c[5] - 13.0 * c[4] + 13.0 * c[2] - 8.0 * c[1] + c[0]) / (8.0 * h * h * h);
            let (p, m) = (s(t + h)?, s(t - h)?);
            let mt = ((p[3] - qxx(&p)) - (m[3] - qxx(&m))) / (2.0 * h);
            let r = mt + 2.0 * qx + 3.0 * c[3] * qx - 2.0 * qx * q2 - c[3] * q3;
            if !r.is_finite() {
                return Err(Error::NonConvergence(format!("non-finite residual at x = {x}, t = {t}")));
            }
            sup = sup.max(r.abs());
        }
    }
    Ok(sup)
}

fn v_diff(v: &[f64; 7]) -> f64 {
    v[1] - 8.0 * v[2] + 8.0 * v[4] - v[5]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Least-squares fit of log e = intercept + slope·log t.
pub fn decay_fit(ts: &[f64], errors: &[f64]) -> Result<DecayFit> {
    if ts.len() != errors.len() || ts.len() < 4 {
        return Err(Error::Fit(format!("need at least 4 paired samples, got {}", ts.len())));
    }
    if errors.iter().any(|e| !(*e > 0.0 && e.is_finite())) || ts.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::Fit("times and errors must be positive and finite".into()));
    }
    let (lo, hi) = ts.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &t| (a.min(t), b.max(t)));
    if hi / lo < 8.0 {
        return Err(Error::Fit(format!("time span ratio {} below 8", hi / lo)));
    }
    let n = ts.len() as f64;
    let lx: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ly: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    Ok(DecayFit { slope, intercept: my - slope * mx })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decay_fit_recovers_power_law() {
        let ts = [10.0, 20.0, 40.0, 80.0, 160.0];
        let es: Vec<f64> = ts.iter().map(|t: &f64| 3.0 * t.powf(-0.5)).collect();
        let f = decay_fit(&ts, &es).unwrap();
        assert!((f.slope + 0.5).abs() < 1e-12);
        assert!((f.intercept - 3.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn decay_fit_rejects_short_span() {
        assert!(decay_fit(&[1.0, 2.0, 3.0, 4.0], &[1.0; 4]).is_err());
        assert!(decay_fit(&[1.0, 10.0, 100.0, 1000.0], &[1.0, 0.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn residual_vanishes_for_constant() {
        let r = residual(|_, _| Ok(0.0), &[0.0, 1.0], &[1.0], 1e-2).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn linear_waves_keep_mass() {
        let grid = GridSpec::new(40.0, 512, 0.01);
        let q0: Vec<f64> = grid.x().iter().map(|x| 1e-3 * (-x * x).exp()).collect();
        let tr = evolve(&q0, &grid, &[1.0]).unwrap();
        let (c0, c1) = (tr.conserved[0], tr.conserved[1]);
        assert!((c0.mass - c1.mass).abs() < 1e-12);
        assert!((c0.energy - c1.energy).abs() < 1e-10);
    }

    #[test]
    fn cfl_and_grid_checks() {
        let grid = GridSpec::new(40.0, 500, 0.01);
        assert!(matches!(evolve(&vec![0.0; 500], &grid, &[1.0]), Err(Error::InvalidGrid(_))));
        let grid = GridSpec::new(40.0, 512, 1.0);
        let q0: Vec<f64> = grid.x().iter().map(|x| (-x * x).exp()).collect();
        assert!(matches!(evolve(&q0, &grid, &[1.0]), Err(Error::Cfl { .. })));
    }
}
