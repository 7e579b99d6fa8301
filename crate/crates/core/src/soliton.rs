//! Reflectionless solutions: the one-soliton in parametric form, its inversion to the
//! physical variable, and the N-pole outer matrix.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub type Mat2 = Matrix2<Complex64>;

/// Pole height `a ∈ (0, ½)` and (modified) norming constant `gamma > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolitonData {
    pub a: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParametricPoint {
    pub y: f64,
    pub t: f64,
    pub x: f64,
    pub q: f64,
    pub alpha: f64,
}

impl SolitonData {
    pub fn new(a: f64, gamma: f64) -> Result<Self> {
        if !(a > 0.0 && a < 0.5) {
            return Err(Error::Domain(format!("soliton parameter a = {a} outside (0, 1/2)")));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Domain(format!("norming constant {gamma} must be positive")));
        }
        Ok(Self { a, gamma })
    }

    /// Speed of the crest in the physical variable x.
    pub fn speed(&self) -> f64 {
        2.0 / (1.0 - 4.0 * self.a * self.a)
    }

    pub fn amplitude(&self) -> f64 {
        8.0 * self.a * self.a / (1.0 - 4.0 * self.a * self.a)
    }

    /// p = (1 + 2a)/(1 − 2a); the total shift x − y runs over (0, 2 ln p).
    pub fn p(&self) -> f64 {
        (1.0 + 2.0 * self.a) / (1.0 - 2.0 * self.a)
    }

    pub fn log_alpha(&self, y: f64, t: f64) -> f64 {
        (self.gamma / (2.0 * self.a)).ln() - 2.0 * self.a * (y - self.speed() * t)
    }

    /// q as a function of log α.
    pub fn q_from_log_alpha(&self, la: f64) -> f64 {
        let a2 = self.a * self.a;
        let s = 1.0 - 4.0 * a2;
        let k = 32.0 * a2 / (s * s);
        let b = 16.0 * a2 / s;
        // α/((1+α)² + Bα) = 1/(α + 2 + B + 1/α)
        k / (la.exp() + 2.0 + b + (-la).exp())
    }

    /// c = ln[(1 + αp)/(1 + α/p)] as a function of log α.
    pub fn shift_from_log_alpha(&self, la: f64) -> f64 {
        let p = self.p();
        if la <= 0.0 {
            let alpha = la.exp();
            (alpha * p).ln_1p() - (alpha / p).ln_1p()
        } else {
            let inv = (-la).exp();
            2.0 * p.ln() + (inv / p).ln_1p() - (inv * p).ln_1p()
        }
    }
}

pub fn one_soliton(data: &SolitonData, y: f64, t: f64) -> ParametricPoint {
    let la = data.log_alpha(y, t);
    ParametricPoint {
        y,
        t,
        x: y + data.shift_from_log_alpha(la),
        q: data.q_from_log_alpha(la),
        alpha: la.exp(),
    }
}

/// Solve x = y + c(y, t) for y.
pub fn invert_x(data: &SolitonData, x: f64, t: f64) -> Result<f64> {
    let g = |y: f64| y + data.shift_from_log_alpha(data.log_alpha(y, t)) - x;
    let pad = 1e-9 * (1.0 + x.abs());
    let (mut lo, mut hi) = (x - 2.0 * data.p().ln() - pad, x + pad);
    if g(lo) > 0.0 || g(hi) < 0.0 {
        return Err(Error::NonConvergence(format!("no bracket for y at x = {x}, t = {t}")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let y = 0.5 * (lo + hi);
    if g(y).abs() > 1e-12 * x.abs().max(1.0) {
        return Err(Error::NonConvergence(format!("x-inversion residual {:e}", g(y))));
    }
    Ok(y)
}

/// The profile at physical position x.
pub fn q_of_x(data: &SolitonData, x: f64, t: f64) -> Result<ParametricPoint> {
    let y = invert_x(data, x, t)?;
    let mut p = one_soliton(data, y, t);
    p.x = x;
    Ok(p)
}

/// Reflectionless solution M(y, t, z) of the residue problem with poles at ia_j and
/// residue constants γ_j. Returns the 2×2 matrix whose first column has simple
/// poles at ia_j and second column at −ia_j.
pub fn outer_matrix(poles: &[SolitonData], y: f64, t: f64, z: Complex64) -> Result<Mat2> {
    let n = poles.len();
    if n == 0 {
        return Ok(Mat2::identity());
    }
    let zs: Vec<Complex64> = poles.iter().map(|p| I * p.a).collect();
    // c_j = iγ_j e^{2itθ(ia_j)}, d_j = −iγ_j e^{2itθ(ia_j)}, computed in log form.
    let logs: Vec<f64> = poles.iter().map(|p| p.log_alpha(y, t) + (2.0 * p.a).ln()).collect();
    let mut mat = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
    let mut rhs = DMatrix::<Complex64>::zeros(2 * n, 2);
    for j in 0..n {
        let scale_big = logs[j] > 0.0;
        let e = if scale_big { Complex64::new(1.0, 0.0) } else { Complex64::new(logs[j].exp(), 0.0) };
        let inv = if scale_big { Complex64::new((-logs[j]).exp(), 0.0) } else { Complex64::new(1.0, 0.0) };
        let c = I * e;
        let d = -I * e;
        // Row j: inv·U_j − c Σ_k W_k/(z_j − z̄_k) = c e2
        mat[(j, j)] += inv;
        for k in 0..n {
            mat[(j, n + k)] -= c / (zs[j] - zs[k].conj());
        }
        rhs[(j, 1)] = c;
        // Row n + j: inv·W_j − d Σ_k U_k/(z̄_j − z_k) = d e1
        mat[(n + j, n + j)] += inv;
        for k in 0..n {
            mat[(n + j, k)] -= d / (zs[j].conj() - zs[k]);
        }
        rhs[(n + j, 0)] = d;
    }
    let sol = mat.lu().solve(&rhs).ok_or(Error::Singular("outer matrix"))?;
    if sol.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Singular("outer matrix"));
    }
    let mut m = Mat2::identity();
    for j in 0..n {
        let cu = 1.0 / (z - zs[j]);
        let cw = 1.0 / (z - zs[j].conj());
        for r in 0..2 {
            m[(r, 0)] += sol[(j, r)] * cu;
            m[(r, 1)] += sol[(n + j, r)] * cw;
        }
    }
    Ok(m)
}

/// The row (1 1)·M.
pub fn row(m: &Mat2) -> [Complex64; 2] {
    [m[(0, 0)] + m[(1, 0)], m[(0, 1)] + m[(1, 1)]]
}
