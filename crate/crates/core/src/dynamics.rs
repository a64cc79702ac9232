//! Steady states, time propagation, Bloch representation, positivity
//! diagnostics, negativity-threshold search, decay-rate extraction and the
//! exact dephasing-damping validation integral.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bath::{BathError, BathParams, Regime};
use crate::integrals::{
    adaptive_quad, compute_shift_integrals, QuadratureConfig, QuadratureError, ShiftIntegrals,
};
use crate::kernels::{Generator, KernelError, Model, QubitParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("generator fails the steady-state precondition: {0}")]
    Precondition(String),
    #[error("rank-deficient steady-state system (degenerate steady-state manifold)")]
    RankDeficient,
    #[error("steady-state residual too large: {residual:e} > {bound:e}")]
    ResidualTooLarge { residual: f64, bound: f64 },
    #[error("closed-form denominator vanishes")]
    DegenerateDenominator,
    #[error("sub-ohmic limit inputs violate 2*Delta = Delta_plus - Delta_minus: defect {defect:e}")]
    InconsistentLimits { defect: f64 },
    #[error("degenerate sub-ohmic limits: Delta = 0")]
    DegenerateLimits,
    #[error("invalid bracket [{lo}, {hi}]: rho_pp = ({f_lo:e}, {f_hi:e}); need a (+,-) sign change")]
    BracketInvalid {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("no zero crossing: the population stays positive (quantum map preserved)")]
    NoCrossing,
    #[error("insufficient coherence decay for a rate fit (need a factor e^2, got {ratio})")]
    InsufficientDecay { ratio: f64 },
    #[error("trace drift {drift:e} along trajectory exceeds 1e-10")]
    TraceDrift { drift: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Bath(#[from] BathError),
}

/// 2×2 qubit density matrix in the energy basis {|+⟩, |−⟩}.
///
/// Hermiticity and unit trace are diagnostics, not constructor guarantees:
/// Redfield outputs may violate positivity and carry numerical defects.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix {
    pub rho_pp: Complex64,
    pub rho_mm: Complex64,
    pub rho_pm: Complex64,
    pub rho_mp: Complex64,
}

impl DensityMatrix {
    pub fn new(rho_pp: Complex64, rho_mm: Complex64, rho_pm: Complex64, rho_mp: Complex64) -> Self {
        Self {
            rho_pp,
            rho_mm,
            rho_pm,
            rho_mp,
        }
    }

    /// Vectorized form in the wire order [ρ₊₊, ρ₋₋, ρ₊₋, ρ₋₊].
    pub fn to_vector(&self) -> Vector4<Complex64> {
        Vector4::new(self.rho_pp, self.rho_mm, self.rho_pm, self.rho_mp)
    }

    pub fn from_vector(v: &Vector4<Complex64>) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn trace(&self) -> Complex64 {
        self.rho_pp + self.rho_mm
    }

    pub fn trace_defect(&self) -> f64 {
        (self.trace() - Complex64::new(1.0, 0.0)).norm()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (self.rho_mp - self.rho_pm.conj())
            .norm()
            .max(self.rho_pp.im.abs())
            .max(self.rho_mm.im.abs())
    }

    /// Hermitian part (ρ + ρ†)/2.
    pub fn symmetrized(&self) -> Self {
        let pm = (self.rho_pm + self.rho_mp.conj()) / 2.0;
        Self::new(
            Complex64::new(self.rho_pp.re, 0.0),
            Complex64::new(self.rho_mm.re, 0.0),
            pm,
            pm.conj(),
        )
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let s = self.symmetrized();
        let half_trace = (s.rho_pp.re + s.rho_mm.re) / 2.0;
        let radius = (((s.rho_pp.re - s.rho_mm.re) / 2.0).powi(2) + s.rho_pm.norm_sqr()).sqrt();
        [half_trace - radius, half_trace + radius]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

/// Real 3-vector v with ρ = (I + v·σ)/2.
///
/// Convention: v_z = ρ₊₊ − ρ₋₋, v_x = 2 Re ρ₊₋, v_y = 2 Im ρ₋₊.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

pub fn to_bloch(rho: &DensityMatrix) -> BlochVector {
    BlochVector {
        x: 2.0 * rho.rho_pm.re,
        y: 2.0 * rho.rho_mp.im,
        z: rho.rho_pp.re - rho.rho_mm.re,
    }
}

pub fn from_bloch(v: &BlochVector) -> DensityMatrix {
    DensityMatrix::new(
        Complex64::new((1.0 + v.z) / 2.0, 0.0),
        Complex64::new((1.0 - v.z) / 2.0, 0.0),
        Complex64::new(v.x / 2.0, -v.y / 2.0),
        Complex64::new(v.x / 2.0, v.y / 2.0),
    )
}

/// Positivity / quantum-map diagnostic for a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub eigenvalues: [f64; 2],
    pub min_eigenvalue: f64,
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
}

impl PositivityReport {
    pub fn is_physical(&self, tol: f64) -> bool {
        self.min_eigenvalue >= -tol && self.hermiticity_defect <= tol && self.trace_defect <= tol
    }
}

pub fn positivity_report(rho: &DensityMatrix) -> PositivityReport {
    let eigenvalues = rho.eigenvalues();
    PositivityReport {
        eigenvalues,
        min_eigenvalue: eigenvalues[0],
        hermiticity_defect: rho.hermiticity_defect(),
        trace_defect: rho.trace_defect(),
    }
}

/// Steady state of a generator: the homogeneous 4×4 system with one
/// population row replaced by the trace row [1, 1, 0, 0] = 1.
pub fn steady_state(gen: &Generator) -> Result<DensityMatrix, DynamicsError> {
    let diag = crate::kernels::validate_generator(gen);
    if diag.trace_defect > 1e-12 {
        return Err(DynamicsError::Precondition(format!(
            "trace defect {:e} > 1e-12",
            diag.trace_defect
        )));
    }
    let mut a = gen.matrix;
    a[(0, 0)] = Complex64::new(1.0, 0.0);
    a[(0, 1)] = Complex64::new(1.0, 0.0);
    a[(0, 2)] = Complex64::new(0.0, 0.0);
    a[(0, 3)] = Complex64::new(0.0, 0.0);
    let b = Vector4::new(
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
    );
    let lu = a.full_piv_lu();
    let v = lu.solve(&b).ok_or(DynamicsError::RankDeficient)?;
    let residual = (gen.matrix * v).norm();
    let bound = 1e-10 * gen.matrix.norm().max(1.0);
    if residual > bound {
        return Err(DynamicsError::ResidualTooLarge { residual, bound });
    }
    Ok(DensityMatrix::from_vector(&v).symmetrized())
}

/// Slowest nonzero relaxation rate of a generator: min |Re λ| over the
/// eigenvalues of the 4×4 superoperator, excluding the stationary eigenvalue
/// λ ≈ 0. This sets the time scale on which every initial state reaches the
/// steady state; it can be far smaller than the bare rates Γ₁, Γ₂ when the
/// interference terms mix the population and coherence sectors.
pub fn spectral_gap(gen: &Generator) -> Result<f64, DynamicsError> {
    let scale = gen.matrix.norm().max(1.0);
    let schur = gen
        .matrix
        .try_schur(1e-14, 0)
        .ok_or_else(|| DynamicsError::Domain("Schur decomposition did not converge".into()))?;
    let eigs = schur
        .eigenvalues()
        .ok_or_else(|| DynamicsError::Domain("Schur form yielded no eigenvalues".into()))?;
    let gap = eigs
        .iter()
        .map(|l| l.re.abs())
        .filter(|r| *r > 1e-10 * scale)
        .fold(f64::INFINITY, f64::min);
    if !gap.is_finite() {
        return Err(DynamicsError::RankDeficient);
    }
    Ok(gap)
}

/// Closed-form Redfield steady state.
pub fn closed_form_steady_state(
    qubit: &QubitParams,
    shifts: &ShiftIntegrals,
) -> Result<DensityMatrix, DynamicsError> {
    let d0 = shifts
        .d0
        .value()
        .ok_or(KernelError::SubOhmicZeroFrequency)?;
    let (f1, f2) = (qubit.f1, qubit.f2);
    let (g0, n0) = (shifts.g0, shifts.n0);
    let (delta, dp, dm) = (shifts.delta, shifts.delta_plus, shifts.delta_minus);
    let stark = qubit.omega0 + 2.0 * f2 * f2 * delta;
    let den = stark * g0 * (1.0 + 2.0 * n0) + 4.0 * f1 * f1 * d0 * delta;
    if den.abs() < 1e-300 {
        return Err(DynamicsError::DegenerateDenominator);
    }
    let rho_pp = (stark * g0 * n0 + 2.0 * f1 * f1 * d0 * dp) / den;
    let rho_mm = (stark * g0 * (1.0 + n0) - 2.0 * f1 * f1 * d0 * dm) / den;
    let rho_pm = f1 * f2 * (g0 * n0 * dm + g0 * (1.0 + n0) * dp) / den;
    Ok(DensityMatrix::new(
        Complex64::new(rho_pp, 0.0),
        Complex64::new(rho_mm, 0.0),
        Complex64::new(rho_pm, 0.0),
        Complex64::new(rho_pm, 0.0),
    ))
}

/// Sub-ohmic (s < 1) limit of the Redfield steady state, from externally
/// supplied finite limit values of Δ, Δ±.
pub fn sub_ohmic_limit_state(
    delta: f64,
    delta_plus: f64,
    delta_minus: f64,
) -> Result<DensityMatrix, DynamicsError> {
    let defect = (2.0 * delta - (delta_plus - delta_minus)).abs();
    let tol = 1e-8 * (delta_plus.abs() + delta_minus.abs() + 1.0);
    if defect > tol {
        return Err(DynamicsError::InconsistentLimits { defect });
    }
    if delta == 0.0 {
        return Err(DynamicsError::DegenerateLimits);
    }
    Ok(DensityMatrix::new(
        Complex64::new(delta_plus / (2.0 * delta), 0.0),
        Complex64::new(-delta_minus / (2.0 * delta), 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
    ))
}

/// Time-ordered states ρ(tᵢ).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

/// ρ(t) = exp(L t) vec(ρ₀) by dense 4×4 scaling-and-squaring exponentials.
pub fn propagate(
    gen: &Generator,
    rho0: &DensityMatrix,
    times: &[f64],
) -> Result<Trajectory, DynamicsError> {
    if rho0.hermiticity_defect() > 1e-12 {
        return Err(DynamicsError::Domain(format!(
            "initial state not Hermitian: defect {:e}",
            rho0.hermiticity_defect()
        )));
    }
    if rho0.trace_defect() > 1e-12 {
        return Err(DynamicsError::Domain(format!(
            "initial state trace defect {:e}",
            rho0.trace_defect()
        )));
    }
    if times.is_empty() {
        return Err(DynamicsError::Domain("empty time grid".into()));
    }
    if times[0] < 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(DynamicsError::Domain(
            "times must be nonnegative and strictly increasing".into(),
        ));
    }
    let mut states = Vec::with_capacity(times.len());
    let mut v = rho0.to_vector();
    let mut t_prev = 0.0;
    for &t in times {
        let dt = t - t_prev;
        if dt > 0.0 {
            let step: Matrix4<Complex64> = (gen.matrix * Complex64::new(dt, 0.0)).exp();
            v = step * v;
        }
        let state = DensityMatrix::from_vector(&v);
        let drift = state.trace_defect();
        if drift > 1e-10 {
            return Err(DynamicsError::TraceDrift { drift });
        }
        states.push(state);
        t_prev = t;
    }
    Ok(Trajectory {
        times: times.to_vec(),
        states,
    })
}

/// Which decay rate a trajectory fit extracts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecayChannel {
    /// Γ₁: coherence decay of the dissipative channel.
    Coherence,
    /// Γ₂: pure dephasing.
    Dephasing,
}

/// Analytic decay rates Γ₁ = ½f₂²g₀(1+2n₀), Γ₂ = 2f₁²D₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayRates {
    pub gamma1: f64,
    pub gamma2: f64,
}

impl DecayRates {
    pub fn analytic(qubit: &QubitParams, shifts: &ShiftIntegrals) -> Option<Self> {
        let d0 = shifts.d0.value()?;
        Some(Self {
            gamma1: 0.5 * qubit.f2 * qubit.f2 * shifts.g0 * (1.0 + 2.0 * shifts.n0),
            gamma2: 2.0 * qubit.f1 * qubit.f1 * d0,
        })
    }
}

/// Log-linear least-squares fit of |ρ₊₋(t)|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub channel: DecayChannel,
    pub rate: f64,
    /// RMS residual of the log-linear fit.
    pub residual: f64,
}

pub fn fit_decay_rate(
    traj: &Trajectory,
    channel: DecayChannel,
) -> Result<DecayFit, DynamicsError> {
    let pts: Vec<(f64, f64)> = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, s)| (t, s.rho_pm.norm()))
        .filter(|&(_, c)| c > 1e-280)
        .collect();
    if pts.len() < 3 {
        return Err(DynamicsError::InsufficientDecay { ratio: 0.0 });
    }
    let first = pts.first().unwrap().1;
    let last = pts.last().unwrap().1;
    let ratio = first / last;
    if !(first > 0.0) || ratio < std::f64::consts::E.powi(2) {
        return Err(DynamicsError::InsufficientDecay { ratio });
    }
    let n = pts.len() as f64;
    let (mut st, mut sy, mut stt, mut sty) = (0.0, 0.0, 0.0, 0.0);
    for &(t, c) in &pts {
        let y = c.ln();
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    let slope = (n * sty - st * sy) / (n * stt - st * st);
    let intercept = (sy - slope * st) / n;
    let mut ss = 0.0;
    for &(t, c) in &pts {
        ss += (c.ln() - (intercept + slope * t)).powi(2);
    }
    Ok(DecayFit {
        channel,
        rate: -slope,
        residual: (ss / n).sqrt(),
    })
}

/// First zero of the Redfield steady-state population ρ₊₊(ω₀), by bisection
/// to absolute width 1e−6.
pub fn negativity_threshold(
    qubit_template: &QubitParams,
    bath: &BathParams,
    model: Model,
    bracket: (f64, f64),
    cfg: &QuadratureConfig,
) -> Result<f64, DynamicsError> {
    let (lo, hi) = bracket;
    if !(lo > 0.0 && hi > lo) {
        return Err(DynamicsError::Domain(format!(
            "invalid bracket [{lo}, {hi}]"
        )));
    }
    let population = |omega0: f64| -> Result<f64, DynamicsError> {
        let shifts = compute_shift_integrals(bath, omega0, cfg)?;
        match model {
            Model::Redfield => {
                let qubit = QubitParams::new(omega0, qubit_template.f1, qubit_template.f2)?;
                Ok(closed_form_steady_state(&qubit, &shifts)?.rho_pp.re)
            }
            // Lindblad populations are the Gibbs weights for any couplings
            _ => Ok(shifts.n0 / (1.0 + 2.0 * shifts.n0)),
        }
    };
    let f_lo = population(lo)?;
    let f_hi = population(hi)?;
    if f_lo > 0.0 && f_hi > 0.0 {
        return Err(DynamicsError::NoCrossing);
    }
    if !(f_lo > 0.0 && f_hi < 0.0) {
        return Err(DynamicsError::BracketInvalid { lo, hi, f_lo, f_hi });
    }
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if population(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// ∫₀^∞ dω e^{−ω/ω_c} coth(ω/2T) (1 − cos ωt): the exact dephasing damping
/// exponent shape (ohmic case), by oscillation-aware adaptive quadrature.
pub fn dephasing_damping_integral(
    t: f64,
    bath: &BathParams,
    cfg: &QuadratureConfig,
) -> Result<f64, DynamicsError> {
    if bath.regime() != Regime::Ohmic {
        return Err(DynamicsError::Domain(format!(
            "damping integral is the ohmic (s = 1) comparison; got s = {}",
            bath.s
        )));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(DynamicsError::Domain(format!("t must be >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let limit = cfg.tail_cutoff_multiplier * bath.omega_c;
    let two_t = 2.0 * bath.temperature;
    let f = |w: f64| {
        if w <= 0.0 {
            return 0.0;
        }
        let coth = 1.0 / (w / two_t).tanh();
        (-w / bath.omega_c).exp() * coth * (1.0 - (w * t).cos())
    };
    // panel seams every two oscillation periods
    let spacing = 4.0 * std::f64::consts::PI / t;
    let n_break = (limit / spacing) as usize;
    if n_break > 40_000 {
        return Err(DynamicsError::Quadrature(QuadratureError::NonConvergence {
            panels: n_break,
            last_estimate: f64::NAN,
            error_estimate: f64::INFINITY,
        }));
    }
    let breakpoints: Vec<f64> = (1..=n_break).map(|k| k as f64 * spacing).collect();
    let relaxed = QuadratureConfig {
        rel_tol: cfg.rel_tol.max(1e-10),
        ..*cfg
    };
    Ok(adaptive_quad(&f, 0.0, limit, &relaxed, &breakpoints)?)
}

/// Numerical long-time slope of the damping integral over [t₁, 2t₁].
pub fn damping_long_time_slope(
    t1: f64,
    bath: &BathParams,
    cfg: &QuadratureConfig,
) -> Result<f64, DynamicsError> {
    let f1 = dephasing_damping_integral(t1, bath, cfg)?;
    let f2 = dephasing_damping_integral(2.0 * t1, bath, cfg)?;
    Ok((f2 - f1) / t1)
}
