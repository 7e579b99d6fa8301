//! The oscillatory phase θ(z) = z(ξ − 2/(1 + 4z²)), its stationary points and the
//! partition of the (x, t) half-plane into the four asymptotic regions.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Values of ξ separating the four regions.
pub const BOUNDARIES: [f64; 3] = [-0.25, 0.0, 2.0];

/// A validated ray parameter ξ = y/t.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Xi(f64);

impl Xi {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::Domain(format!("xi must be finite, got {value}")));
        }
        if BOUNDARIES.contains(&value) {
            return Err(Error::BoundaryRay(value));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegionCase {
    I,
    II,
    III,
    IV,
}

impl RegionCase {
    pub fn of(xi: Xi) -> Self {
        let v = xi.0;
        if v > 2.0 {
            RegionCase::I
        } else if v > 0.0 {
            RegionCase::II
        } else if v > -0.25 {
            RegionCase::III
        } else {
            RegionCase::IV
        }
    }

    pub fn has_stationary_points(self) -> bool {
        matches!(self, RegionCase::II | RegionCase::III)
    }
}

impl fmt::Display for RegionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegionCase::I => "I",
            RegionCase::II => "II",
            RegionCase::III => "III",
            RegionCase::IV => "IV",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDerivatives {
    pub theta: Complex64,
    pub theta_prime: Complex64,
    pub theta_double_prime: Complex64,
}

fn denominator(z: Complex64) -> Result<Complex64> {
    let d = z * z * 4.0 + 1.0;
    if d.norm() <= 1e-14 {
        return Err(Error::PhasePole(format!("{z}")));
    }
    Ok(d)
}

pub fn theta(z: Complex64, xi: Xi) -> Result<Complex64> {
    let d = denominator(z)?;
    Ok(z * (xi.0 - 2.0 / d))
}

pub fn theta_derivatives(z: Complex64, xi: Xi) -> Result<PhaseDerivatives> {
    let d = denominator(z)?;
    let z2 = z * z;
    Ok(PhaseDerivatives {
        theta: z * (xi.0 - 2.0 / d),
        theta_prime: xi.0 - (1.0 - z2 * 4.0) * 2.0 / (d * d),
        theta_double_prime: (z * 48.0 - z * z2 * 64.0) / (d * d * d),
    })
}

/// Real-valued θ′ on the real line.
pub fn theta_prime_real(s: f64, xi: f64) -> f64 {
    let d = 1.0 + 4.0 * s * s;
    xi - 2.0 * (1.0 - 4.0 * s * s) / (d * d)
}

pub fn theta_double_prime_real(s: f64) -> f64 {
    let d = 1.0 + 4.0 * s * s;
    (48.0 * s - 64.0 * s * s * s) / (d * d * d)
}

/// The principal-branch closed forms (z0, z1) for the positive stationary points.
pub fn closed_form_points(xi: Xi) -> (Complex64, Complex64) {
    let v = xi.0;
    let root = Complex64::new(1.0 + 4.0 * v, 0.0).sqrt();
    let z0 = ((-(root * -1.0 + (v + 1.0)) / v).sqrt()) * 0.5;
    let z1 = ((-(root + (v + 1.0)) / v).sqrt()) * 0.5;
    (z0, z1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// Sign of Re(iθ(z)) from the explicit rational expression.
pub fn sign_re_i_theta(z: Complex64, xi: Xi) -> Result<Sign> {
    let d = denominator(z)?;
    let (u, v) = (z.re, z.im);
    let val = -v * xi.0 + (2.0 * v * (1.0 + 4.0 * u * u - 4.0 * v * v) - 16.0 * u * u * v) / d.norm_sqr();
    let threshold = 1e-14 * (1.0 + z.norm());
    Ok(if val > threshold {
        Sign::Positive
    } else if val < -threshold {
        Sign::Negative
    } else {
        Sign::Zero
    })
}

/// Interval of the real line, possibly unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, s: f64) -> bool {
        s > self.lo && s < self.hi
    }
}

/// Stationary-point data of θ for a fixed ξ, with the spectral selections
/// (ρ and j0) filled in once spectral data are attached.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionInfo {
    pub xi: f64,
    pub case: RegionCase,
    /// Real stationary points in decreasing order (ξ1 > ξ2 > ξ3 > ξ4 when four exist).
    pub stationary_points: Vec<f64>,
    /// Number of real stationary points.
    pub n_xi: usize,
    /// The set I(ξ) = {s : θ′(s) < 0}.
    pub intervals: Vec<Interval>,
    pub kappa0: Option<f64>,
    pub rho: Option<f64>,
    pub j0: Option<usize>,
}

impl RegionInfo {
    pub fn classify(xi: Xi) -> Self {
        let case = RegionCase::of(xi);
        let (z0, z1) = closed_form_points(xi);
        let inf = f64::INFINITY;
        let (points, intervals) = match case {
            RegionCase::I => (vec![], vec![]),
            RegionCase::IV => (vec![], vec![Interval { lo: -inf, hi: inf }]),
            RegionCase::II => {
                let p = z0.re;
                (vec![p, -p], vec![Interval { lo: -p, hi: p }])
            }
            RegionCase::III => {
                let (p0, p1) = (z0.re, z1.re);
                (
                    vec![p1, p0, -p0, -p1],
                    vec![
                        Interval { lo: -inf, hi: -p1 },
                        Interval { lo: -p0, hi: p0 },
                        Interval { lo: p1, hi: inf },
                    ],
                )
            }
        };
        let kappa0 = (case == RegionCase::I).then(|| 0.5 * (1.0 - 2.0 / xi.0).sqrt());
        Self {
            xi: xi.0,
            case,
            n_xi: points.len(),
            stationary_points: points,
            intervals,
            kappa0,
            rho: None,
            j0: None,
        }
    }

    pub fn xi(&self) -> Xi {
        Xi(self.xi)
    }

    /// Positive stationary points z0 (and z1 in case III).
    pub fn positive_points(&self) -> Vec<f64> {
        match self.case {
            RegionCase::II => vec![self.stationary_points[0]],
            RegionCase::III => vec![self.stationary_points[1], self.stationary_points[0]],
            _ => vec![],
        }
    }

    pub fn in_jump_set(&self, s: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(s))
    }

    /// +1 if `s` is the right endpoint of an interval of I(ξ), −1 if a left endpoint.
    pub fn endpoint_orientation(&self, s: f64) -> Option<i8> {
        for i in &self.intervals {
            if i.hi == s {
                return Some(1);
            }
            if i.lo == s {
                return Some(-1);
            }
        }
        None
    }

    /// Attach ρ and j0 computed from the pole list.
    pub fn with_poles(mut self, poles: &[f64]) -> Self {
        let rho = rho(poles);
        self.rho = Some(rho);
        self.j0 = select_j0(poles, &self, rho);
        self
    }
}

/// Pole-separation radius ρ for the given pole heights a_j ∈ (0, ½).
pub fn rho(poles: &[f64]) -> f64 {
    let mut r: f64 = 1.0 / 6.0;
    for (j, &a) in poles.iter().enumerate() {
        r = r.min(a / 2.0).min((0.5 - a) / 2.0);
        for &b in &poles[j + 1..] {
            r = r.min((a - b).abs() / 3.0);
        }
    }
    r
}

/// Index of the pole whose soliton is visible along the ray, if any.
pub fn select_j0(poles: &[f64], info: &RegionInfo, rho: f64) -> Option<usize> {
    let target = match info.case {
        RegionCase::I => info.kappa0?,
        RegionCase::II | RegionCase::III => 0.5,
        RegionCase::IV => return None,
    };
    poles
        .iter()
        .enumerate()
        .filter(|(_, &a)| (a - target).abs() < rho)
        .min_by(|x, y| (x.1 - target).abs().total_cmp(&(y.1 - target).abs()))
        .map(|(j, _)| j)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xi(v: f64) -> Xi {
        Xi::new(v).unwrap()
    }

    #[test]
    fn rejects_boundaries() {
        for b in BOUNDARIES {
            assert!(matches!(Xi::new(b), Err(Error::BoundaryRay(_))));
        }
        assert!(Xi::new(f64::NAN).is_err());
    }

    #[test]
    fn value_at_half() {
        let t = theta(Complex64::new(0.5, 0.0), xi(1.0)).unwrap();
        assert!((t.re + 0.0).abs() < 1e-15 && t.im == 0.0);
    }

    #[test]
    fn pole_is_reported() {
        assert!(matches!(theta(Complex64::new(0.0, 0.5), xi(1.0)), Err(Error::PhasePole(_))));
    }

    #[test]
    fn z0_at_one() {
        let info = RegionInfo::classify(xi(1.0));
        assert_eq!(info.case, RegionCase::II);
        assert!((info.stationary_points[0] - 0.242_934_135_878_322_9).abs() < 1e-12);
    }

    #[test]
    fn case_four_kills_stationary_points() {
        let info = RegionInfo::classify(xi(-1.0));
        assert_eq!(info.case, RegionCase::IV);
        assert_eq!(info.n_xi, 0);
        assert_eq!(info.intervals.len(), 1);
    }

    #[test]
    fn kappa0_in_case_one() {
        let info = RegionInfo::classify(xi(3.0));
        assert!((info.kappa0.unwrap() - 0.5 * (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rho_rules() {
        assert_eq!(rho(&[]), 1.0 / 6.0);
        assert!((rho(&[0.25]) - 0.125).abs() < 1e-15);
        assert!((rho(&[0.2, 0.26]) - 0.02).abs() < 1e-15);
    }

    #[test]
    fn j0_selection() {
        let info = RegionInfo::classify(xi(1.0)).with_poles(&[0.45]);
        assert!((info.rho.unwrap() - 0.025).abs() < 1e-15);
        assert_eq!(info.j0, None);
        // ρ ≤ (½ − a)/2 keeps every pole away from the line a = ½.
        let info = RegionInfo::classify(xi(1.0)).with_poles(&[0.499]);
        assert_eq!(info.j0, None);
        let k0 = 0.5 * (1.0f64 - 2.0 / 2.5).sqrt();
        let info = RegionInfo::classify(xi(2.5)).with_poles(&[k0 + 0.01, 0.1]);
        assert_eq!(info.j0, Some(0));
    }

    #[test]
    fn sign_matches_direct_evaluation() {
        let z = Complex64::new(0.0, 0.25);
        let direct = (Complex64::i() * theta(z, xi(-1.0)).unwrap()).re;
        let s = sign_re_i_theta(z, xi(-1.0)).unwrap();
        assert_eq!(s, if direct > 0.0 { Sign::Positive } else { Sign::Negative });
    }
}
