//! Forward scattering for the spectral problem
//! ψ_xx = ¼ψ − (z² + ¼) m(x) ψ, m = q − q_xx + 1,
//! via Jost solutions normalised by e^{∓izx} at x → ∓∞.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::ode::{self, OdeOptions, State};
use crate::numerics::spline::CubicSpline;
use crate::spectral::{Pole, ReflectionSample, SpectralData};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Sampled initial datum q0 on a uniform grid, with the derived momentum m0.
#[derive(Debug, Clone)]
pub struct InitialDatum {
    x: Vec<f64>,
    q0: Vec<f64>,
    m0: Vec<f64>,
    m_spline: CubicSpline,
}

impl InitialDatum {
    pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

    pub fn new(x: Vec<f64>, q0: Vec<f64>, tail_tol: f64) -> Result<Self> {
        let n = x.len();
        if n < 16 || q0.len() != n {
            return Err(Error::InvalidDatum(format!("need at least 16 matching samples, got {n}")));
        }
        if x.iter().chain(&q0).any(|v| !v.is_finite()) {
            return Err(Error::InvalidDatum("non-finite sample".into()));
        }
        let h = (x[n - 1] - x[0]) / (n - 1) as f64;
        if !(h > 0.0) || x.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(1.0)) {
            return Err(Error::InvalidDatum("grid must be uniform and increasing".into()));
        }
        let tail = q0[0].abs().max(q0[n - 1].abs());
        if tail > tail_tol {
            return Err(Error::InvalidDatum(format!(
                "|q0| = {tail:e} at the grid ends exceeds the tail tolerance {tail_tol:e}"
            )));
        }
        let m0 = momentum(&q0, h);
        if let Some((i, v)) = m0.iter().enumerate().find(|(_, v)| **v <= 0.0) {
            return Err(Error::InvalidDatum(format!("m0 = {v} <= 0 at x = {}", x[i])));
        }
        let m_spline = CubicSpline::new(&x, &m0)?;
        Ok(Self { x, q0, m0, m_spline })
    }

    /// Sample `f` on [−half_length, half_length] with spacing `h`.
    pub fn from_fn(f: impl Fn(f64) -> f64, half_length: f64, h: f64, tail_tol: f64) -> Result<Self> {
        let n = (2.0 * half_length / h).round() as usize + 1;
        let x: Vec<f64> = (0..n).map(|i| -half_length + i as f64 * h).collect();
        let q0 = x.iter().map(|&v| f(v)).collect();
        Self::new(x, q0, tail_tol)
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn q0(&self) -> &[f64] {
        &self.q0
    }

    pub fn m0(&self) -> &[f64] {
        &self.m0
    }

    pub fn m(&self, x: f64) -> f64 {
        if x <= self.x[0] || x >= self.x[self.x.len() - 1] {
            1.0
        } else {
            self.m_spline.eval(x)
        }
    }

    fn left(&self) -> f64 {
        self.x[0]
    }

    fn right(&self) -> f64 {
        self.x[self.x.len() - 1]
    }

    fn matching_point(&self) -> f64 {
        0.5 * (self.left() + self.right())
    }
}

/// m = q − q_xx + 1 with fourth-order central differences (second order next to the ends).
fn momentum(q: &[f64], h: f64) -> Vec<f64> {
    let n = q.len();
    let get = |i: isize| -> f64 {
        if i < 0 || i as usize >= n {
            0.0
        } else {
            q[i as usize]
        }
    };
    (0..n as isize)
        .map(|i| {
            let qxx = if i >= 2 && i + 2 < n as isize {
                (-get(i - 2) + 16.0 * get(i - 1) - 30.0 * get(i) + 16.0 * get(i + 1) - get(i + 2))
                    / (12.0 * h * h)
            } else {
                (get(i - 1) - 2.0 * get(i) + get(i + 1)) / (h * h)
            };
            get(i) - qxx + 1.0
        })
        .collect()
}

/// Transition coefficients: a(z) = W(ψ₋, ψ₊)/(2iz), b(z) = W(ψ₋, ψ₊(·, −z))/(−2iz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JostPair {
    pub a: Complex64,
    pub b: Complex64,
}

#[derive(Debug, Clone, Copy)]
pub struct ScatterOptions {
    pub ode: OdeOptions,
    /// Half-width of the reflection grid.
    pub z_max: f64,
    /// Number of reflection samples on z > 0.
    pub n_z: usize,
}

impl Default for ScatterOptions {
    fn default() -> Self {
        Self { ode: OdeOptions::default(), z_max: 5.0, n_z: 250 }
    }
}

impl ScatterOptions {
    /// Midpoint grid ±(k − ½)Δ, symmetric and excluding the origin.
    pub fn grid(&self) -> Vec<f64> {
        let dz = self.z_max / self.n_z as f64;
        let pos: Vec<f64> = (0..self.n_z).map(|k| (k as f64 + 0.5) * dz).collect();
        pos.iter().rev().map(|v| -v).chain(pos.iter().copied()).collect()
    }
}

fn rhs(datum: &InitialDatum, z: Complex64) -> impl Fn(f64, &State) -> State + '_ {
    let k = z * z + 0.25;
    move |x, y| [y[1], y[0] * (0.25 - k * datum.m(x))]
}

fn left_jost(datum: &InitialDatum, z: Complex64, opts: OdeOptions) -> Result<State> {
    let x0 = datum.left();
    let e = (-I * z * x0).exp();
    ode::integrate(rhs(datum, z), x0, datum.matching_point(), [e, -I * z * e], opts)
}

fn right_jost(datum: &InitialDatum, z: Complex64, opts: OdeOptions) -> Result<State> {
    let x0 = datum.right();
    let e = (I * z * x0).exp();
    ode::integrate(rhs(datum, z), x0, datum.matching_point(), [e, I * z * e], opts)
}

fn wronskian(f: &State, g: &State) -> Complex64 {
    f[0] * g[1] - f[1] * g[0]
}

pub fn jost_pair(datum: &InitialDatum, z: Complex64, opts: OdeOptions) -> Result<JostPair> {
    if z.norm() == 0.0 {
        return Err(Error::Domain("transition coefficients are singular at z = 0".into()));
    }
    let minus = left_jost(datum, z, opts)?;
    let plus = right_jost(datum, z, opts)?;
    let plus_reflected = if z.im == 0.0 {
        [plus[0].conj(), plus[1].conj()]
    } else {
        right_jost(datum, -z, opts)?
    };
    Ok(JostPair {
        a: wronskian(&minus, &plus) / (2.0 * I * z),
        b: wronskian(&minus, &plus_reflected) / (-2.0 * I * z),
    })
}

/// r(z) = b(z)/a(z) on a grid symmetric about 0 that excludes 0.
pub fn reflection_coefficient(
    datum: &InitialDatum,
    grid: &[f64],
    opts: OdeOptions,
) -> Result<Vec<ReflectionSample>> {
    let n = grid.len();
    if n % 2 == 1 || grid.iter().any(|z| z.abs() <= 1e-14) {
        return Err(Error::InvalidGrid("reflection grid must be symmetric and exclude 0".into()));
    }
    let mut out = Vec::with_capacity(n);
    for &z in grid {
        let jp = jost_pair(datum, Complex64::new(z, 0.0), opts)?;
        let r = jp.b / jp.a;
        if r.norm() >= 1.0 {
            return Err(Error::ReflectionTooLarge { z, modulus: r.norm() });
        }
        out.push(ReflectionSample { z, r });
    }
    Ok(out)
}

fn bound_state_function(datum: &InitialDatum, a: f64, opts: OdeOptions) -> Result<f64> {
    let z = I * a;
    let minus = left_jost(datum, z, opts)?;
    let plus = right_jost(datum, z, opts)?;
    Ok((wronskian(&minus, &plus) / (2.0 * I * z)).re)
}

fn scan_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (0..40).map(|k| 1e-6 * (1e4f64).powf(k as f64 / 40.0)).collect();
    let n = 392;
    g.extend((0..=n).map(|k| 0.01 + (0.5 - 1e-6 - 0.01) * k as f64 / n as f64));
    g
}

/// Zeros a_j ∈ (0, ½) of a(ia) with norming constants γ_j = b_j / (d/da) a(ia).
pub fn discrete_spectrum(datum: &InitialDatum, opts: OdeOptions) -> Result<Vec<Pole>> {
    let grid = scan_grid();
    let values = grid
        .iter()
        .map(|&a| bound_state_function(datum, a, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut poles = Vec::new();
    for k in 0..grid.len() - 1 {
        let (mut lo, mut hi) = (grid[k], grid[k + 1]);
        let (mut flo, fhi) = (values[k], values[k + 1]);
        if flo == 0.0 || flo.signum() == fhi.signum() {
            continue;
        }
        for _ in 0..200 {
            if hi - lo <= 1e-14 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let fm = bound_state_function(datum, mid, opts)?;
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        let a = 0.5 * (lo + hi);
        if !(1e-6..=0.5 - 1e-6).contains(&a) {
            return Err(Error::Eigenvalue(format!("eigenvalue a = {a} too close to the end of (0, 1/2)")));
        }
        poles.push(Pole { a, gamma: norming_constant(datum, a, opts)? });
    }
    poles.sort_by(|x, y| y.a.total_cmp(&x.a));
    Ok(poles)
}

fn norming_constant(datum: &InitialDatum, a: f64, opts: OdeOptions) -> Result<f64> {
    let z = I * a;
    let minus = left_jost(datum, z, opts)?;
    let plus = right_jost(datum, z, opts)?;
    let b = ((minus[0] * plus[0] + minus[1] * plus[1]) / (plus[0] * plus[0] + plus[1] * plus[1])).re;
    let step = (1e-5f64).min(0.5 * a).min(0.5 * (0.5 - a));
    let derivative = (bound_state_function(datum, a + step, opts)?
        - bound_state_function(datum, a - step, opts)?)
        / (2.0 * step);
    let gamma = b / derivative;
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::Eigenvalue(format!("norming constant {gamma} at a = {a} is not positive")));
    }
    Ok(gamma)
}

/// Full forward transform.
pub fn scatter(datum: &InitialDatum, opts: ScatterOptions) -> Result<SpectralData> {
    let poles = discrete_spectrum(datum, opts.ode)?;
    let samples = reflection_coefficient(datum, &opts.grid(), opts.ode)?;
    SpectralData::new(poles, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vacuum() -> InitialDatum {
        InitialDatum::from_fn(|_| 0.0, 10.0, 0.05, 1e-10).unwrap()
    }

    #[test]
    fn vacuum_is_transparent() {
        let jp = jost_pair(&vacuum(), Complex64::new(0.7, 0.0), OdeOptions::default()).unwrap();
        assert!((jp.a - 1.0).norm() < 1e-9);
        assert!(jp.b.norm() < 1e-9);
        assert!(discrete_spectrum(&vacuum(), OdeOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn unitarity_for_a_bump() {
        let d = InitialDatum::from_fn(|x| 0.3 * (-x * x).exp(), 20.0, 1.0 / 64.0, 1e-10).unwrap();
        for z in [0.05, 0.4, 1.3] {
            let jp = jost_pair(&d, Complex64::new(z, 0.0), OdeOptions::default()).unwrap();
            assert!((jp.a.norm_sqr() - jp.b.norm_sqr() - 1.0).abs() < 1e-8, "z = {z}");
        }
    }

    #[test]
    fn momentum_of_gaussian() {
        let h = 1.0 / 64.0;
        let d = InitialDatum::from_fn(|x| (-x * x).exp(), 10.0, h, 1e-10).unwrap();
        let i = d.x().iter().position(|&x| x.abs() < 1e-12).unwrap();
        // q − q'' + 1 at 0 equals 1 + 1 + 2 = 4.
        assert!((d.m0()[i] - 4.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_heavy_tails() {
        let err = InitialDatum::from_fn(|x| 0.1 / (1.0 + x * x), 10.0, 0.1, 1e-10);
        assert!(matches!(err, Err(Error::InvalidDatum(_))));
    }

    #[test]
    fn rejects_nonpositive_momentum() {
        let err = InitialDatum::from_fn(|x| -2.0 * (-x * x).exp(), 10.0, 0.05, 1e-10);
        assert!(matches!(err, Err(Error::InvalidDatum(_))));
    }

    #[test]
    fn grid_is_symmetric() {
        let g = ScatterOptions { n_z: 4, z_max: 2.0, ..Default::default() }.grid();
        assert_eq!(g, vec![-1.75, -1.25, -0.75, -0.25, 0.25, 0.75, 1.25, 1.75]);
    }
}
