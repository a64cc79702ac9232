//! Principal-value quadrature engine and the Lamb-shift integrals Δ, Δ±,
//! plus the ε-resolvent integral used as an independent numerical oracle.
//!
//! The generic engine uses symmetric excision around each simple pole
//! (the local odd part cancels exactly when f(x₀+u) is paired with
//! f(x₀−u)) and adaptive Gauss–Kronrod G7K15 panels elsewhere.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bath::{
    bath_correlation, planck_occupation, spectral_density, zero_frequency_limit, BathError,
    BathParams, Regime, ZeroFreqLimit,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("quadrature failed to converge: {panels} panels, last estimate {last_estimate:e}, error estimate {error_estimate:e}")]
    NonConvergence {
        panels: usize,
        last_estimate: f64,
        error_estimate: f64,
    },
    #[error("poles too close for excision: |{a} - {b}| <= {min_separation}")]
    PoleCollision { a: f64, b: f64, min_separation: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("sub-ohmic divergence: the 1/omega pole of the Delta_pm integrals meets a divergent D(0) for s = {s} < 1")]
    SubOhmicDivergence { s: f64 },
    #[error(transparent)]
    Bath(#[from] BathError),
}

/// Tolerances and cutoffs for the quadrature engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Integration truncated at ω = multiplier · ω_c.
    pub tail_cutoff_multiplier: f64,
    /// Excision half-width, relative to the nearest scale around each pole.
    pub excision_halfwidth_factor: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            tail_cutoff_multiplier: 50.0,
            excision_halfwidth_factor: 1e-3,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), QuadratureError> {
        for (name, v) in [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("tail_cutoff_multiplier", self.tail_cutoff_multiplier),
            ("excision_halfwidth_factor", self.excision_halfwidth_factor),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(QuadratureError::Domain(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// The scalar bundle feeding the closed-form kernel blocks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftIntegrals {
    /// g(ω₀)
    pub g0: f64,
    /// n(ω₀)
    pub n0: f64,
    /// D₀ regime limit
    pub d0: ZeroFreqLimit,
    /// Δ
    pub delta: f64,
    /// Δ₊
    pub delta_plus: f64,
    /// Δ₋
    pub delta_minus: f64,
}

// G7K15 nodes and weights on [-1, 1] (abscissae of the 15-point Kronrod rule;
// every second node is a Gauss point).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

const MAX_PANELS: usize = 60_000;

/// One G7K15 evaluation on [a, b]; returns (kronrod, |kronrod - gauss|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let fsum = f(c - x) + f(c + x);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    (kronrod * h, (kronrod - gauss).abs() * h.abs())
}

/// Adaptive G7K15 on [a, b] with optional forced interior breakpoints.
pub fn adaptive_quad<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
    breakpoints: &[f64],
) -> Result<f64, QuadratureError> {
    if !(a < b) {
        if a == b {
            return Ok(0.0);
        }
        return Err(QuadratureError::Domain(format!(
            "invalid interval [{a}, {b}]"
        )));
    }
    let mut pts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|x| *x > a && *x < b)
        .collect();
    pts.push(a);
    pts.push(b);
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup();

    // (err, value, a, b), kept as a max-heap by error estimate.
    struct Panel {
        err: f64,
        val: f64,
        a: f64,
        b: f64,
    }
    let mut panels: Vec<Panel> = Vec::new();
    for w in pts.windows(2) {
        let (val, err) = gk15(f, w[0], w[1]);
        panels.push(Panel {
            err,
            val,
            a: w[0],
            b: w[1],
        });
    }
    loop {
        let total: f64 = panels.iter().map(|p| p.val).sum();
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err <= tol && panels.iter().all(|p| p.val.is_finite()) {
            return Ok(total);
        }
        if panels.len() >= MAX_PANELS {
            return Err(QuadratureError::NonConvergence {
                panels: panels.len(),
                last_estimate: total,
                error_estimate: total_err,
            });
        }
        // split the worst panel; NaN error estimates sort first
        let key = |e: f64| if e.is_nan() { f64::INFINITY } else { e };
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|(_, p), (_, q)| key(p.err).total_cmp(&key(q.err)))
            .unwrap();
        let Panel { a: pa, b: pb, val, .. } = panels.swap_remove(worst);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            // interval exhausted at machine precision
            if !val.is_finite() {
                return Err(QuadratureError::Domain(format!(
                    "integrand non-finite on the machine-width panel [{pa}, {pb}]"
                )));
            }
            panels.push(Panel {
                err: 0.0,
                val,
                a: pa,
                b: pb,
            });
            continue;
        }
        for (na, nb) in [(pa, mid), (mid, pb)] {
            let (val, err) = gk15(f, na, nb);
            panels.push(Panel {
                err,
                val,
                a: na,
                b: nb,
            });
        }
    }
}

/// Cauchy principal value of `f` over `domain` with simple poles at `poles`.
///
/// Each pole is excised symmetrically; inside the excision the integrand is
/// folded as f(x₀+u) + f(x₀−u), which cancels the pole's odd component
/// analytically. The remaining panels are integrated adaptively.
pub fn principal_value<F: Fn(f64) -> f64>(
    f: F,
    poles: &[f64],
    domain: (f64, f64),
    cfg: &QuadratureConfig,
) -> Result<f64, QuadratureError> {
    cfg.validate()?;
    let (a, b) = domain;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(QuadratureError::Domain(format!(
            "invalid domain [{a}, {b}]"
        )));
    }
    let mut poles: Vec<f64> = poles.to_vec();
    poles.sort_by(|x, y| x.partial_cmp(y).unwrap());
    for p in &poles {
        if !(*p > a && *p < b) {
            return Err(QuadratureError::Domain(format!(
                "pole {p} not interior to [{a}, {b}]"
            )));
        }
    }
    // per-pole excision half-widths
    let mut halfwidths = Vec::with_capacity(poles.len());
    for (i, &x0) in poles.iter().enumerate() {
        let mut scale = (x0 - a).min(b - x0);
        if i > 0 {
            scale = scale.min((x0 - poles[i - 1]) * 0.5);
        }
        if i + 1 < poles.len() {
            scale = scale.min((poles[i + 1] - x0) * 0.5);
        }
        let h = cfg.excision_halfwidth_factor * scale;
        if !(h > 0.0) {
            let other = if i > 0 { poles[i - 1] } else { poles[i + 1] };
            return Err(QuadratureError::PoleCollision {
                a: x0,
                b: other,
                min_separation: 2.0 * h,
            });
        }
        halfwidths.push(h);
    }
    for w in poles.windows(2) {
        let hmax = halfwidths.iter().cloned().fold(0.0, f64::max);
        if w[1] - w[0] <= 2.0 * hmax {
            return Err(QuadratureError::PoleCollision {
                a: w[0],
                b: w[1],
                min_separation: 2.0 * hmax,
            });
        }
    }

    let mut total = 0.0;
    // Folded excision contributions. The fold f(x₀+u) + f(x₀−u) cancels the
    // pole analytically, but in floating point the two sample points straddle
    // x₀ asymmetrically by ~ulp(x₀), leaving residue-sized jitter ~R·ulp(x₀)/u²
    // that diverges toward u = 0. So: stop at a floor, reconstruct the sliver
    // from the fold's even Taylor form c₀ + c₂u², and don't let the adaptive
    // loop chase error estimates below the jitter's integrated magnitude.
    for (&x0, &h) in poles.iter().zip(&halfwidths) {
        let folded = |u: f64| f(x0 + u) + f(x0 - u);
        if x0 == 0.0 {
            // fl(±u) is exactly symmetric, so the fold is jitter-free; the
            // integrand may carry a fractional power (non-polynomial) slope
            // at 0, so clip only a midpoint-rectangle sliver
            let u_floor = 1e-6 * h;
            total += u_floor * folded(0.5 * u_floor);
            total += adaptive_quad(&folded, u_floor, h, cfg, &[])?;
        } else {
            // the fold is analytic (even in u) away from any structure of f,
            // so a generous floor with the c₀ + c₂u² sliver loses nothing
            let u_floor = 1e-3 * h;
            let f1 = folded(u_floor);
            let f2 = folded(2.0 * u_floor);
            let c0 = (4.0 * f1 - f2) / 3.0;
            let c2 = (f2 - f1) / (3.0 * u_floor * u_floor);
            total += c0 * u_floor + c2 * u_floor.powi(3) / 3.0;
            let residue_scale = 0.5 * (f(x0 + u_floor) - f(x0 - u_floor)).abs() * u_floor;
            let noise = 10.0 * residue_scale * x0.abs() * f64::EPSILON / u_floor;
            let fold_cfg = QuadratureConfig {
                abs_tol: cfg.abs_tol.max(noise),
                ..*cfg
            };
            total += adaptive_quad(&folded, u_floor, h, &fold_cfg, &[])?;
        }
    }
    // regular panels between excisions
    let mut edges = vec![a];
    for (&x0, &h) in poles.iter().zip(&halfwidths) {
        edges.push(x0 - h);
        edges.push(x0 + h);
    }
    edges.push(b);
    for seg in edges.chunks(2) {
        total += adaptive_quad(&f, seg[0], seg[1], cfg, &[])?;
    }
    Ok(total)
}

/// D(ω), with the (integrable) sub-ohmic divergence at ω = 0 masked so the
/// adaptive engine can sample arbitrarily close to zero.
fn d_or_zero(omega: f64, bath: &BathParams) -> f64 {
    bath_correlation(omega, bath).unwrap_or(0.0)
}

fn truncation(bath: &BathParams, cfg: &QuadratureConfig) -> f64 {
    cfg.tail_cutoff_multiplier * bath.omega_c
}

fn check_omega0(omega0: f64, limit: f64) -> Result<(), QuadratureError> {
    if !(omega0 > 0.0) || !omega0.is_finite() {
        return Err(QuadratureError::Domain(format!(
            "omega0 must be finite and > 0, got {omega0}"
        )));
    }
    if omega0 >= limit {
        return Err(QuadratureError::Domain(format!(
            "omega0 = {omega0} outside truncated integration domain (±{limit})"
        )));
    }
    Ok(())
}

/// Δ = P∫ (dω/2π) D(ω) [1/(ω+ω₀) − 1/(ω−ω₀)].
pub fn shift_delta(
    bath: &BathParams,
    omega0: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, QuadratureError> {
    let limit = truncation(bath, cfg);
    check_omega0(omega0, limit)?;
    let f = |w: f64| {
        d_or_zero(w, bath) * (1.0 / (w + omega0) - 1.0 / (w - omega0))
            / (2.0 * std::f64::consts::PI)
    };
    principal_value(f, &[-omega0, omega0], (-limit, limit), cfg)
}

/// Δ± = 2 P∫ (dω/2π) D(ω) [1/(ω±ω₀) − 1/ω], returned as (Δ₊, Δ₋).
///
/// The 1/ω pole is a regular principal-value point for s ≥ 1 (D continuous
/// at 0); sub-ohmic input is rejected.
pub fn shift_delta_pm(
    bath: &BathParams,
    omega0: f64,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64), QuadratureError> {
    if bath.regime() == Regime::SubOhmic {
        return Err(QuadratureError::SubOhmicDivergence { s: bath.s });
    }
    let limit = truncation(bath, cfg);
    check_omega0(omega0, limit)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let fp =
        |w: f64| 2.0 * d_or_zero(w, bath) * (1.0 / (w + omega0) - 1.0 / w) / two_pi;
    let plus = principal_value(fp, &[-omega0, 0.0], (-limit, limit), cfg)?;
    let fm =
        |w: f64| 2.0 * d_or_zero(w, bath) * (1.0 / (w - omega0) - 1.0 / w) / two_pi;
    let minus = principal_value(fm, &[0.0, omega0], (-limit, limit), cfg)?;
    Ok((plus, minus))
}

/// Bundle g₀, n₀, D₀ and the three shift integrals for one (bath, ω₀) pair.
pub fn compute_shift_integrals(
    bath: &BathParams,
    omega0: f64,
    cfg: &QuadratureConfig,
) -> Result<ShiftIntegrals, QuadratureError> {
    let g0 = spectral_density(omega0, bath)?;
    let n0 = planck_occupation(omega0, bath.temperature)?;
    let d0 = zero_frequency_limit(bath);
    let delta = shift_delta(bath, omega0, cfg)?;
    let (delta_plus, delta_minus) = shift_delta_pm(bath, omega0, cfg)?;
    Ok(ShiftIntegrals {
        g0,
        n0,
        d0,
        delta,
        delta_plus,
        delta_minus,
    })
}

/// ∫ (dω/2π) D(ω)/(x − ω + iε).
///
/// As ε → 0 the imaginary part tends to −D(x)/2 (half residue) and the real
/// part to the principal value over 2π.
pub fn epsilon_resolvent(
    bath: &BathParams,
    x: f64,
    epsilon: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64, QuadratureError> {
    resolvent_impl(bath, x, epsilon, false, cfg)
}

/// Same integral with D(−ω) in the numerator; the second kernel element of
/// the Born integrals.
pub fn epsilon_resolvent_reflected(
    bath: &BathParams,
    x: f64,
    epsilon: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64, QuadratureError> {
    resolvent_impl(bath, x, epsilon, true, cfg)
}

fn resolvent_impl(
    bath: &BathParams,
    x: f64,
    epsilon: f64,
    reflected: bool,
    cfg: &QuadratureConfig,
) -> Result<Complex64, QuadratureError> {
    cfg.validate()?;
    if !(epsilon > 0.0) {
        return Err(QuadratureError::Domain(format!(
            "epsilon must be > 0, got {epsilon}"
        )));
    }
    let limit = truncation(bath, cfg);
    let two_pi = 2.0 * std::f64::consts::PI;
    let num = move |w: f64| {
        if reflected {
            d_or_zero(-w, bath)
        } else {
            d_or_zero(w, bath)
        }
    };
    let re = |w: f64| num(w) * (x - w) / ((x - w).powi(2) + epsilon * epsilon) / two_pi;
    let im = |w: f64| -num(w) * epsilon / ((x - w).powi(2) + epsilon * epsilon) / two_pi;
    // seed panels around the Lorentzian peak and the D kink at zero
    let bp = [
        0.0,
        x - 100.0 * epsilon,
        x - epsilon,
        x,
        x + epsilon,
        x + 100.0 * epsilon,
    ];
    let re_val = adaptive_quad(&re, -limit, limit, cfg, &bp)?;
    let im_val = adaptive_quad(&im, -limit, limit, cfg, &bp)?;
    Ok(Complex64::new(re_val, im_val))
}

/// ε → 0 extrapolation of the resolvent over the ladder ε = {1e−2, 1e−3, 1e−4}·scale,
/// removing the O(ε) and O(ε²) corrections in turn.
pub fn resolvent_richardson(
    bath: &BathParams,
    x: f64,
    scale: f64,
    reflected: bool,
    cfg: &QuadratureConfig,
) -> Result<Complex64, QuadratureError> {
    if !(scale > 0.0) {
        return Err(QuadratureError::Domain(format!(
            "extrapolation scale must be > 0, got {scale}"
        )));
    }
    let r1 = resolvent_impl(bath, x, 1e-2 * scale, reflected, cfg)?;
    let r2 = resolvent_impl(bath, x, 1e-3 * scale, reflected, cfg)?;
    let r3 = resolvent_impl(bath, x, 1e-4 * scale, reflected, cfg)?;
    // the leading correction is linear in ε (odd part of D around the pole
    // plus the truncated tails), the next one quadratic; ladder ratio 10
    let a = (r2 * 10.0 - r1) / 9.0;
    let b = (r3 * 10.0 - r2) / 9.0;
    Ok((b * 100.0 - a) / 99.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig_bath() -> BathParams {
        BathParams::new(1.0, 1.0, 100.0, 10.0).unwrap()
    }

    #[test]
    fn pv_odd_integrand_vanishes() {
        let cfg = QuadratureConfig::default();
        let v = principal_value(|x| 1.0 / x, &[0.0], (-3.0, 3.0), &cfg).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn pv_textbook_log() {
        let cfg = QuadratureConfig::default();
        let v = principal_value(|x| 1.0 / x, &[0.0], (-1.0, 2.0), &cfg).unwrap();
        assert_relative_eq!(v, 2.0_f64.ln(), max_relative = 1e-10);
    }

    #[test]
    fn pv_bath_resolvent_golden() {
        // P∫ D(ω)/(ω − 5) dω for the fig bath; golden value from a 30-digit
        // independent quadrature, cross-checked by ε-resolvent extrapolation.
        let bath = fig_bath();
        let cfg = QuadratureConfig::default();
        let v = principal_value(
            |w| d_or_zero(w, &bath) / (w - 5.0),
            &[5.0],
            (-5000.0, 5000.0),
            &cfg,
        )
        .unwrap();
        assert_relative_eq!(v, 100.76351462373838, max_relative = 1e-8);
    }

    #[test]
    fn pv_pole_on_boundary_rejected() {
        let cfg = QuadratureConfig::default();
        assert!(principal_value(|x| 1.0 / x, &[0.0], (0.0, 1.0), &cfg).is_err());
    }

    #[test]
    fn pv_pole_collision_rejected() {
        let cfg = QuadratureConfig {
            excision_halfwidth_factor: 1.0,
            ..Default::default()
        };
        let f = |x: f64| 1.0 / (x - 1e-9) + 1.0 / (x + 1e-9);
        match principal_value(f, &[-1e-9, 1e-9], (-1.0, 1.0), &cfg) {
            Err(QuadratureError::PoleCollision { .. }) => {}
            other => panic!("expected pole collision, got {other:?}"),
        }
    }

    #[test]
    fn shift_delta_golden() {
        let bath = fig_bath();
        let cfg = QuadratureConfig::default();
        let d = shift_delta(&bath, 5.0, &cfg).unwrap();
        assert_relative_eq!(d, -0.51521216040326009, max_relative = 1e-8);
    }

    #[test]
    fn shift_delta_pm_golden_and_identity() {
        let bath = fig_bath();
        let cfg = QuadratureConfig::default();
        let (dp, dm) = shift_delta_pm(&bath, 5.0, &cfg).unwrap();
        assert_relative_eq!(dp, -0.78739006782469626, max_relative = 1e-8);
        assert_relative_eq!(dm, 0.24303425298182393, max_relative = 1e-8);
        let d = shift_delta(&bath, 5.0, &cfg).unwrap();
        assert!((2.0 * d - (dp - dm)).abs() <= 1e-8 * (dp.abs() + dm.abs() + 1.0));
    }

    #[test]
    fn shift_scales_linearly_in_g() {
        let cfg = QuadratureConfig::default();
        let weak = BathParams::new(1e-9, 1.0, 100.0, 10.0).unwrap();
        let d = shift_delta(&weak, 5.0, &cfg).unwrap();
        assert!(d.abs() < 1e-8);
        let (dp, dm) = shift_delta_pm(&weak, 5.0, &cfg).unwrap();
        assert!(dp.abs() < 1e-8 && dm.abs() < 1e-8);
    }

    #[test]
    fn sub_ohmic_delta_pm_rejected() {
        let bath = BathParams::new(1.0, 0.5, 100.0, 10.0).unwrap();
        let cfg = QuadratureConfig::default();
        match shift_delta_pm(&bath, 5.0, &cfg) {
            Err(QuadratureError::SubOhmicDivergence { .. }) => {}
            other => panic!("expected sub-ohmic rejection, got {other:?}"),
        }
    }

    #[test]
    fn tail_truncation_negligible() {
        let bath = fig_bath();
        let base = QuadratureConfig::default();
        let doubled = QuadratureConfig {
            tail_cutoff_multiplier: 100.0,
            ..base
        };
        let d1 = shift_delta(&bath, 5.0, &base).unwrap();
        let d2 = shift_delta(&bath, 5.0, &doubled).unwrap();
        assert!((d1 - d2).abs() <= 1e-10 * d1.abs());
        let p1 = shift_delta_pm(&bath, 5.0, &base).unwrap();
        let p2 = shift_delta_pm(&bath, 5.0, &doubled).unwrap();
        assert!((p1.0 - p2.0).abs() <= 1e-10 * p1.0.abs());
        assert!((p1.1 - p2.1).abs() <= 1e-10 * p1.1.abs());
    }

    #[test]
    fn excision_robustness() {
        let bath = fig_bath();
        let base = QuadratureConfig::default();
        let halved = QuadratureConfig {
            excision_halfwidth_factor: 0.5e-3,
            ..base
        };
        let d1 = shift_delta(&bath, 5.0, &base).unwrap();
        let d2 = shift_delta(&bath, 5.0, &halved).unwrap();
        assert!((d1 - d2).abs() <= base.rel_tol.max(1e-10) * d1.abs().max(1.0));
    }

    #[test]
    fn resolvent_golden() {
        let bath = fig_bath();
        let cfg = QuadratureConfig::default();
        let r = epsilon_resolvent(&bath, 5.0, 1e-3, &cfg).unwrap();
        assert_relative_eq!(r.re, -16.036794760984753, max_relative = 1e-9);
        assert_relative_eq!(r.im, -6.0438916800251733, max_relative = 1e-9);
    }

    #[test]
    fn resolvent_zero_coupling() {
        let bath = BathParams::new(1e-300, 1.0, 100.0, 10.0).unwrap();
        let cfg = QuadratureConfig::default();
        let r = epsilon_resolvent(&bath, 5.0, 1e-3, &cfg).unwrap();
        assert!(r.norm() < 1e-290);
    }

    #[test]
    fn plemelj_half_residue() {
        let bath = fig_bath();
        let cfg = QuadratureConfig::default();
        let r = resolvent_richardson(&bath, 5.0, 5.0, false, &cfg).unwrap();
        let d = bath_correlation(5.0, &bath).unwrap();
        assert!((r.im + d / 2.0).abs() <= 1e-6 * (1.0 + d.abs()));
        // real part extrapolates to -PV/2π (golden PV = 100.76351462373838)
        let pv = 100.76351462373838 / (2.0 * std::f64::consts::PI);
        assert!((r.re + pv).abs() <= 1e-7 * pv);
    }

    #[test]
    fn shift_identity_random_draws() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let cfg = QuadratureConfig::default();
        for _ in 0..20 {
            let s = if rng.gen_bool(0.5) {
                1.0
            } else {
                rng.gen_range(1.1..2.5)
            };
            let bath = BathParams::new(
                rng.gen_range(0.1..2.0),
                s,
                rng.gen_range(20.0..200.0),
                rng.gen_range(1.0..20.0),
            )
            .unwrap();
            let omega0 = rng.gen_range(0.5..30.0);
            let d = shift_delta(&bath, omega0, &cfg).unwrap();
            let (dp, dm) = shift_delta_pm(&bath, omega0, &cfg).unwrap();
            assert!(
                (2.0 * d - (dp - dm)).abs() <= 1e-8 * (dp.abs() + dm.abs() + 1.0),
                "identity failed: bath={bath:?} omega0={omega0}"
            );
        }
    }
}
