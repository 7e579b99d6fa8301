//! Scattering data {r(z), z ∈ ℝ} ∪ {(ia_j, γ_j)} and its JSON form.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::spline::CubicSpline;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub a: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionSample {
    pub z: f64,
    pub r: Complex64,
}

#[derive(Debug, Serialize, Deserialize)]
struct SampleRecord {
    z: f64,
    re: f64,
    im: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct SpectralFile {
    kappa: f64,
    poles: Vec<Pole>,
    reflection: Vec<SampleRecord>,
}

/// Validated scattering data. The reflection coefficient is known on a grid that is
/// symmetric about the origin; ν = −ln(1 − |r|²)/2π is interpolated by a cubic spline
/// of its samples and set to zero outside the sampled range.
#[derive(Debug, Clone)]
pub struct SpectralData {
    poles: Vec<Pole>,
    samples: Vec<ReflectionSample>,
    nu_spline: Option<CubicSpline>,
    r_splines: Option<(CubicSpline, CubicSpline)>,
}

/// ν from a reflection modulus.
pub fn nu_from_modulus(modulus: f64) -> Result<f64> {
    if !(modulus < 1.0) || !modulus.is_finite() {
        return Err(Error::Domain(format!("|r| = {modulus} outside [0, 1)")));
    }
    Ok(-(-modulus * modulus).ln_1p() / (2.0 * PI))
}

impl SpectralData {
    pub fn new(poles: Vec<Pole>, samples: Vec<ReflectionSample>) -> Result<Self> {
        let mut poles = poles;
        for p in &poles {
            if !(p.a > 0.0 && p.a < 0.5) {
                return Err(Error::InvalidSpectrum(format!("pole height {} outside (0, 1/2)", p.a)));
            }
            if !(p.gamma > 0.0 && p.gamma.is_finite()) {
                return Err(Error::InvalidSpectrum(format!("norming constant {} not positive", p.gamma)));
            }
        }
        poles.sort_by(|x, y| y.a.total_cmp(&x.a));
        if poles.windows(2).any(|w| (w[0].a - w[1].a).abs() <= 1e-12) {
            return Err(Error::InvalidSpectrum("pole heights must be distinct".into()));
        }
        let samples = symmetrize(samples)?;
        let (nu_spline, r_splines) = if samples.len() >= 2 {
            let z: Vec<f64> = samples.iter().map(|s| s.z).collect();
            let nu = samples
                .iter()
                .map(|s| nu_from_modulus(s.r.norm()))
                .collect::<Result<Vec<_>>>()?;
            let re: Vec<f64> = samples.iter().map(|s| s.r.re).collect();
            let im: Vec<f64> = samples.iter().map(|s| s.r.im).collect();
            (
                Some(CubicSpline::new(&z, &nu)?),
                Some((CubicSpline::new(&z, &re)?, CubicSpline::new(&z, &im)?)),
            )
        } else if samples.is_empty() {
            (None, None)
        } else {
            return Err(Error::InvalidSpectrum("need at least one pair of reflection samples".into()));
        };
        Ok(Self { poles, samples, nu_spline, r_splines })
    }

    /// Pure soliton data (r ≡ 0).
    pub fn reflectionless(poles: Vec<Pole>) -> Result<Self> {
        Self::new(poles, Vec::new())
    }

    /// Poles sorted by decreasing height.
    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    pub fn pole_heights(&self) -> Vec<f64> {
        self.poles.iter().map(|p| p.a).collect()
    }

    pub fn samples(&self) -> &[ReflectionSample] {
        &self.samples
    }

    pub fn is_reflectionless(&self) -> bool {
        self.samples.iter().all(|s| s.r == Complex64::new(0.0, 0.0))
    }

    /// Sampled range [z_min, z_max], if any.
    pub fn support(&self) -> Option<(f64, f64)> {
        self.nu_spline.as_ref().map(|s| (s.x_min(), s.x_max()))
    }

    pub fn knots(&self) -> &[f64] {
        self.nu_spline.as_ref().map(|s| s.knots()).unwrap_or(&[])
    }

    pub fn nu(&self, s: f64) -> f64 {
        match &self.nu_spline {
            Some(sp) if s >= sp.x_min() && s <= sp.x_max() => sp.eval(s).max(0.0),
            _ => 0.0,
        }
    }

    pub fn r(&self, s: f64) -> Complex64 {
        match &self.r_splines {
            Some((re, im)) if s >= re.x_min() && s <= re.x_max() => Complex64::new(re.eval(s), im.eval(s)),
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: SpectralFile = serde_json::from_str(text)?;
        if file.kappa != 1.0 {
            return Err(Error::InvalidSpectrum(format!("kappa must be 1, got {}", file.kappa)));
        }
        let samples = file
            .reflection
            .iter()
            .map(|r| ReflectionSample { z: r.z, r: Complex64::new(r.re, r.im) })
            .collect();
        Self::new(file.poles, samples)
    }

    pub fn to_json_string(&self) -> Result<String> {
        let file = SpectralFile {
            kappa: 1.0,
            poles: self.poles.clone(),
            reflection: self
                .samples
                .iter()
                .map(|s| SampleRecord { z: s.z, re: s.r.re, im: s.r.im })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json_string()?)?;
        Ok(())
    }
}

/// Sort, mirror a half-line grid, and enforce r(−z) = conj r(z) on a symmetric grid.
fn symmetrize(mut samples: Vec<ReflectionSample>) -> Result<Vec<ReflectionSample>> {
    for s in &samples {
        if !(s.z.is_finite() && s.r.re.is_finite() && s.r.im.is_finite()) {
            return Err(Error::InvalidSpectrum("non-finite reflection sample".into()));
        }
        if s.z.abs() <= 1e-14 {
            return Err(Error::InvalidSpectrum("reflection grid must exclude z = 0".into()));
        }
        let modulus = s.r.norm();
        if modulus >= 1.0 {
            return Err(Error::ReflectionTooLarge { z: s.z, modulus });
        }
    }
    if !samples.is_empty() && samples.iter().all(|s| s.z > 0.0) {
        let mirrored: Vec<_> = samples
            .iter()
            .map(|s| ReflectionSample { z: -s.z, r: s.r.conj() })
            .collect();
        samples.extend(mirrored);
    }
    samples.sort_by(|x, y| x.z.total_cmp(&y.z));
    let n = samples.len();
    for k in 0..n / 2 {
        let (lo, hi) = (samples[k], samples[n - 1 - k]);
        if (lo.z + hi.z).abs() > 1e-12 * hi.z.abs().max(1.0) {
            return Err(Error::InvalidSpectrum(format!(
                "reflection grid not symmetric: {} vs {}",
                lo.z, hi.z
            )));
        }
        let r = 0.5 * (hi.r + lo.r.conj());
        samples[n - 1 - k].r = r;
        samples[k].r = r.conj();
    }
    if n % 2 == 1 {
        return Err(Error::InvalidSpectrum("reflection grid must have an even number of points".into()));
    }
    Ok(samples)
}
