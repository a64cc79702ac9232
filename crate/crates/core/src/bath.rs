//! Bath spectral density, Planck occupation and the correlation function D(ω).
//!
//! The bath is characterised by the power-law spectral function
//! g(ω) = g ω^s exp(−ω/ω_c) at temperature T (units ħ = k_B = 1).
//! The thermally weighted correlation combines emission and absorption
//! branches and satisfies detailed balance D(−ω) = e^{−ω/T} D(ω).

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BathError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("bath correlation D(0) diverges in the sub-ohmic regime (s = {s})")]
    DivergentZeroFrequency { s: f64 },
}

/// Low-frequency regime of the spectral function, classified by the exponent s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// s = 1
    Ohmic,
    /// s > 1
    SuperOhmic,
    /// s < 1
    SubOhmic,
}

/// Zero-frequency limit of the bath correlation, D₀ = lim_{ω→0} g(ω) T / ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ZeroFreqLimit {
    /// Ohmic: D₀ = gT.
    Finite(f64),
    /// Super-ohmic.
    Zero,
    /// Sub-ohmic; kept as a tag, never as a floating-point infinity.
    Infinite,
}

impl ZeroFreqLimit {
    /// Finite numerical value, if one exists (0.0 for the super-ohmic case).
    pub fn value(&self) -> Option<f64> {
        match self {
            ZeroFreqLimit::Finite(v) => Some(*v),
            ZeroFreqLimit::Zero => Some(0.0),
            ZeroFreqLimit::Infinite => None,
        }
    }
}

/// Parameters of the bosonic bath: spectral function g ω^s e^{−ω/ω_c} and temperature T.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathParams {
    /// Spectral strength prefactor, g > 0.
    pub g: f64,
    /// Spectral exponent, s > 0.
    pub s: f64,
    /// Cutoff frequency, ω_c > 0.
    pub omega_c: f64,
    /// Bath temperature, T > 0.
    pub temperature: f64,
}

impl BathParams {
    pub fn new(g: f64, s: f64, omega_c: f64, temperature: f64) -> Result<Self, BathError> {
        let check = |name: &str, v: f64| -> Result<(), BathError> {
            if !(v > 0.0) || !v.is_finite() {
                return Err(BathError::Domain(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
            Ok(())
        };
        check("g", g)?;
        check("s", s)?;
        check("omega_c", omega_c)?;
        check("T", temperature)?;
        Ok(Self {
            g,
            s,
            omega_c,
            temperature,
        })
    }

    pub fn regime(&self) -> Regime {
        if self.s == 1.0 {
            Regime::Ohmic
        } else if self.s > 1.0 {
            Regime::SuperOhmic
        } else {
            Regime::SubOhmic
        }
    }
}

/// Planck occupation n(ω) = 1/(e^{ω/T} − 1).
///
/// Uses `exp_m1` so small ω/T does not cancel.
pub fn planck_occupation(omega: f64, temperature: f64) -> Result<f64, BathError> {
    if !(omega > 0.0) {
        return Err(BathError::Domain(format!("omega must be > 0, got {omega}")));
    }
    if !(temperature > 0.0) {
        return Err(BathError::Domain(format!(
            "T must be > 0, got {temperature}"
        )));
    }
    Ok(1.0 / (omega / temperature).exp_m1())
}

/// Spectral function g(ω) = g ω^s e^{−ω/ω_c}, defined on ω ≥ 0.
pub fn spectral_density(omega: f64, bath: &BathParams) -> Result<f64, BathError> {
    if omega < 0.0 {
        return Err(BathError::Domain(format!(
            "spectral density defined on omega >= 0, got {omega}"
        )));
    }
    if omega == 0.0 {
        // ω^s vanishes for every s > 0.
        return Ok(0.0);
    }
    Ok(bath.g * omega.powf(bath.s) * (-omega / bath.omega_c).exp())
}

/// Zero-frequency limit D₀ = lim_{ω→0} g(ω) T / ω, by regime.
pub fn zero_frequency_limit(bath: &BathParams) -> ZeroFreqLimit {
    match bath.regime() {
        Regime::Ohmic => ZeroFreqLimit::Finite(bath.g * bath.temperature),
        Regime::SuperOhmic => ZeroFreqLimit::Zero,
        Regime::SubOhmic => ZeroFreqLimit::Infinite,
    }
}

/// Bath correlation D(ω) = g(ω)(1+n(ω)) η(ω) + g(−ω) n(−ω) η(−ω).
///
/// At ω = 0 the regime limit is used; sub-ohmic baths have no representable
/// value there and yield an error.
pub fn bath_correlation(omega: f64, bath: &BathParams) -> Result<f64, BathError> {
    if !omega.is_finite() {
        return Err(BathError::Domain(format!(
            "omega must be finite, got {omega}"
        )));
    }
    if omega == 0.0 {
        return match zero_frequency_limit(bath) {
            ZeroFreqLimit::Finite(v) => Ok(v),
            ZeroFreqLimit::Zero => Ok(0.0),
            ZeroFreqLimit::Infinite => Err(BathError::DivergentZeroFrequency { s: bath.s }),
        };
    }
    let t = bath.temperature;
    if omega > 0.0 {
        Ok(spectral_density(omega, bath)? * (1.0 + planck_occupation(omega, t)?))
    } else {
        Ok(spectral_density(-omega, bath)? * planck_occupation(-omega, t)?)
    }
}
