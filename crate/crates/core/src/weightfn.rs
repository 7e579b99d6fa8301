//! The scalar conjugation function
//! T(z) = ∏_{k∈P(ξ)} (z + ia_k)/(z − ia_k) · δ(z), δ(z) = exp(i ∫_{I(ξ)} ν(s)/(s − z) ds),
//! its boundary values, its expansion at z = i/2 and its local behaviour at the
//! stationary points.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::quad::{integrate, Tolerance};
use crate::phase::{RegionCase, RegionInfo};
use crate::spectral::SpectralData;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Side of the real axis for boundary values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// T restricted to one ray: the pole subset, the jump set and the reflection data.
#[derive(Debug, Clone)]
pub struct Conjugation<'a> {
    spec: &'a SpectralData,
    info: RegionInfo,
    poles: Vec<f64>,
    /// I(ξ) intersected with the sampled range of ν.
    segments: Vec<(f64, f64)>,
    tol: Tolerance,
}

/// Local form T(z) ≈ T_k·P_k(z) near a real stationary point ξ_k, where
/// P_k = (z − ξ_k)^{iν_k} at right endpoints of I(ξ) and (ξ_k − z)^{−iν_k} at left
/// endpoints (principal branches, cut along I(ξ)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalLimit {
    pub point: f64,
    pub orientation: i8,
    pub nu: f64,
    pub t_k: Complex64,
}

impl LocalLimit {
    pub fn power(&self, z: Complex64) -> Complex64 {
        if self.orientation > 0 {
            ((z - self.point).ln() * (I * self.nu)).exp()
        } else {
            ((-(z - self.point)).ln() * (-I * self.nu)).exp()
        }
    }

    pub fn model(&self, z: Complex64) -> Complex64 {
        self.t_k * self.power(z)
    }
}

fn in_pole_set(info: &RegionInfo, a: f64) -> bool {
    match info.case {
        RegionCase::I => info.kappa0.is_some_and(|k| a > k),
        _ => true,
    }
}

impl<'a> Conjugation<'a> {
    pub fn new(spec: &'a SpectralData, info: &RegionInfo) -> Self {
        let poles = spec.poles().iter().map(|p| p.a).filter(|&a| in_pole_set(info, a)).collect();
        let segments = match spec.support() {
            Some((lo, hi)) => info
                .intervals
                .iter()
                .map(|i| (i.lo.max(lo), i.hi.min(hi)))
                .filter(|(a, b)| b > a)
                .collect(),
            None => Vec::new(),
        };
        Self {
            spec,
            info: info.clone(),
            poles,
            segments,
            tol: Tolerance { abs: 1e-12, rel: 1e-13, max_panels: 50_000 },
        }
    }

    /// The same function with pole `a` removed from the product (T̂ when `a = a_{j0}`).
    pub fn excluding(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.poles.retain(|&p| p != a);
        out
    }

    pub fn poles(&self) -> &[f64] {
        &self.poles
    }

    pub fn info(&self) -> &RegionInfo {
        &self.info
    }

    fn breaks(&self, lo: f64, hi: f64, extra: &[f64]) -> Vec<f64> {
        let mut b = vec![lo];
        b.extend(self.spec.knots().iter().copied().filter(|&k| k > lo && k < hi));
        b.extend(extra.iter().copied().filter(|&k| k > lo && k < hi));
        b.push(hi);
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// ∫_{I(ξ)} ν(s)/(s − z) ds for z off the closure of I(ξ) on the real line; for
    /// real z inside I(ξ) this returns the principal value.
    fn cauchy_parts(&self, z: Complex64) -> Result<(Complex64, f64)> {
        let mut total = Complex64::new(0.0, 0.0);
        let mut on_contour_nu = 0.0;
        for &(a, b) in &self.segments {
            let x0 = z.re.clamp(a, b);
            let nu0 = self.spec.nu(x0);
            let breaks = self.breaks(a, b, &[x0]);
            let rem = integrate(|s| (self.spec.nu(s) - nu0) / (s - z), &breaks, self.tol)?;
            total += rem.value;
            if z.im == 0.0 {
                if z.re > a && z.re < b {
                    total += nu0 * ((b - z.re) / (z.re - a)).ln();
                    on_contour_nu = nu0;
                } else if z.re == a || z.re == b {
                    if nu0 != 0.0 {
                        return Err(Error::Domain(format!("Cauchy integral singular at endpoint {}", z.re)));
                    }
                } else {
                    total += nu0 * ((z - b) / (z - a)).ln();
                }
            } else {
                total += nu0 * ((z - b) / (z - a)).ln();
            }
        }
        Ok((total, on_contour_nu))
    }

    pub fn cauchy(&self, z: Complex64) -> Result<Complex64> {
        if z.im == 0.0 && self.info.in_jump_set(z.re) && self.spec.nu(z.re) != 0.0 {
            return Err(Error::Domain(format!("z = {} lies on the jump contour", z.re)));
        }
        Ok(self.cauchy_parts(z)?.0)
    }

    pub fn delta(&self, z: Complex64) -> Result<Complex64> {
        Ok((I * self.cauchy(z)?).exp())
    }

    /// δ_±(s) = exp(i(PV ± iπν(s))) on the jump contour.
    pub fn delta_boundary(&self, s: f64, side: Side) -> Result<Complex64> {
        let (pv, nu) = self.cauchy_parts(Complex64::new(s, 0.0))?;
        let jump = match side {
            Side::Plus => I * std::f64::consts::PI * nu,
            Side::Minus => -I * std::f64::consts::PI * nu,
        };
        Ok((I * (pv + jump)).exp())
    }

    pub fn blaschke(&self, z: Complex64) -> Complex64 {
        self.poles
            .iter()
            .map(|&a| (z + I * a) / (z - I * a))
            .product()
    }

    pub fn t(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.blaschke(z) * self.delta(z)?)
    }

    /// (T(i/2), T1) with T(z) = T(i/2)(1 + T1(z − i/2) + O((z − i/2)²)).
    pub fn t_expansion(&self) -> Result<(Complex64, Complex64)> {
        let z = I * 0.5;
        let value = self.t(z)?;
        let mut t1: Complex64 = self.poles.iter().map(|&a| 1.0 / (z + I * a) - 1.0 / (z - I * a)).sum();
        for &(a, b) in &self.segments {
            let breaks = self.breaks(a, b, &[]);
            let est = integrate(|s| self.spec.nu(s) / ((s - z) * (s - z)), &breaks, self.tol)?;
            t1 += I * est.value;
        }
        Ok((value, t1))
    }

    /// Local limit at the stationary point `point` (an endpoint of I(ξ)).
    pub fn local_limit(&self, point: f64) -> Result<LocalLimit> {
        let orientation = self
            .info
            .endpoint_orientation(point)
            .ok_or_else(|| Error::Domain(format!("{point} is not an endpoint of I(xi)")))?;
        let nu_k = self.spec.nu(point);
        let (j_lo, j_hi) = if orientation > 0 { (point - 1.0, point) } else { (point, point + 1.0) };
        let mut reg = 0.0;
        if let Some((lo, hi)) = self.spec.support() {
            let lo = lo.min(j_lo);
            let hi = hi.max(j_hi);
            let mut extra = vec![j_lo, j_hi];
            for i in &self.info.intervals {
                extra.push(i.lo);
                extra.push(i.hi);
            }
            let info = &self.info;
            let spec = self.spec;
            let breaks = self.breaks(lo, hi, &extra);
            let est = integrate(
                |s| {
                    let inside = if info.in_jump_set(s) { spec.nu(s) } else { 0.0 };
                    let chi = if s > j_lo && s < j_hi { nu_k } else { 0.0 };
                    Complex64::new((inside - chi) / (s - point), 0.0)
                },
                &breaks,
                self.tol,
            )?;
            reg = est.value.re;
        }
        let t_k = self.blaschke(Complex64::new(point, 0.0)) * Complex64::from_polar(1.0, reg);
        Ok(LocalLimit { point, orientation, nu: nu_k, t_k })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::Xi;
    use crate::spectral::{Pole, ReflectionSample};

    fn gaussian_spec(poles: Vec<Pole>) -> SpectralData {
        let samples = (0..300)
            .map(|k| {
                let z = 0.01 + 0.02 * k as f64;
                ReflectionSample { z, r: Complex64::new(0.4, 0.2) * (-z * z).exp() }
            })
            .collect();
        SpectralData::new(poles, samples).unwrap()
    }

    #[test]
    fn reflectionless_t_is_blaschke() {
        let spec = SpectralData::reflectionless(vec![Pole { a: 0.25, gamma: 1.0 }]).unwrap();
        let info = RegionInfo::classify(Xi::new(1.0).unwrap());
        let c = Conjugation::new(&spec, &info);
        let t = c.t(I * 0.5).unwrap();
        assert!((t - 3.0).norm() < 1e-15);
    }

    #[test]
    fn tends_to_one_at_infinity() {
        let spec = gaussian_spec(vec![Pole { a: 0.3, gamma: 1.0 }]);
        let info = RegionInfo::classify(Xi::new(-0.1).unwrap());
        let c = Conjugation::new(&spec, &info);
        let t = c.t(Complex64::new(700.0, 700.0)).unwrap();
        assert!((t - 1.0).norm() < 1e-3);
    }

    #[test]
    fn case_one_has_trivial_delta() {
        let spec = gaussian_spec(vec![]);
        let info = RegionInfo::classify(Xi::new(3.0).unwrap());
        let c = Conjugation::new(&spec, &info);
        assert_eq!(c.delta(Complex64::new(0.3, 0.2)).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn local_limit_is_unimodular() {
        let spec = gaussian_spec(vec![Pole { a: 0.3, gamma: 1.0 }]);
        let info = RegionInfo::classify(Xi::new(-0.1).unwrap());
        let c = Conjugation::new(&spec, &info);
        for &p in &info.stationary_points {
            let l = c.local_limit(p).unwrap();
            assert!((l.t_k.norm() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn boundary_values_of_reflectionless_data() {
        let spec = SpectralData::reflectionless(vec![]).unwrap();
        let info = RegionInfo::classify(Xi::new(-1.0).unwrap());
        let c = Conjugation::new(&spec, &info);
        assert_eq!(c.delta_boundary(0.4, Side::Plus).unwrap(), Complex64::new(1.0, 0.0));
    }
}
