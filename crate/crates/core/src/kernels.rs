//! Assembly of the 4×4 Redfield and Lindblad generators from closed-form
//! blocks, plus a generic integral-based construction evaluated directly
//! from the Born kernel, used as a cross-validation oracle.
//!
//! Vectorization order is fixed everywhere as [ρ₊₊, ρ₋₋, ρ₊₋, ρ₋₊]:
//! populations first, then coherences.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bath::{BathParams, ZeroFreqLimit};
use crate::integrals::{
    epsilon_resolvent, epsilon_resolvent_reflected, resolvent_richardson, QuadratureConfig,
    QuadratureError, ShiftIntegrals,
};

/// Wire order of the vectorized density matrix.
pub const INDEX_ORDER: [&str; 4] = ["rho_pp", "rho_mm", "rho_pm", "rho_mp"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("sub-ohmic D0 is infinite; closed-form kernels require s >= 1 (use the sub-ohmic limit formulas)")]
    SubOhmicZeroFrequency,
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Qubit level splitting and the two coupling amplitudes of the composite
/// interaction (f₁ dephasing, f₂ dissipative).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitParams {
    pub omega0: f64,
    pub f1: f64,
    pub f2: f64,
}

impl QubitParams {
    pub fn new(omega0: f64, f1: f64, f2: f64) -> Result<Self, KernelError> {
        if !(omega0 > 0.0) || !omega0.is_finite() {
            return Err(KernelError::Domain(format!(
                "omega0 must be finite and > 0 (non-degenerate qubit), got {omega0}"
            )));
        }
        if !f1.is_finite() || !f2.is_finite() {
            return Err(KernelError::Domain(format!(
                "couplings must be finite, got f1={f1}, f2={f2}"
            )));
        }
        Ok(Self { omega0, f1, f2 })
    }
}

/// Matrix elements S_pp′ of the composite coupling operator in the energy basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingMatrix {
    pub s_pp: f64,
    pub s_mm: f64,
    pub s_pm: f64,
    pub s_mp: f64,
}

pub fn coupling_matrix(qubit: &QubitParams) -> CouplingMatrix {
    CouplingMatrix {
        s_pp: qubit.f1,
        s_mm: -qubit.f1,
        s_pm: qubit.f2,
        s_mp: qubit.f2,
    }
}

impl CouplingMatrix {
    /// Entry by level signs, p, p′ ∈ {+1, −1}.
    pub fn entry(&self, p: i8, pp: i8) -> f64 {
        match (p, pp) {
            (1, 1) => self.s_pp,
            (-1, -1) => self.s_mm,
            (1, -1) => self.s_pm,
            (-1, 1) => self.s_mp,
            _ => panic!("invalid level signs ({p}, {pp})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Redfield,
    Lindblad,
    GenericOracle,
}

/// Selection rule applied to the Born kernel in the generic construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionRule {
    /// Full Born kernel (Redfield).
    None,
    /// Energy conservation at the Born level (Lindblad).
    EnergyConserving,
}

/// 4×4 superoperator L = E + K + iΔ acting on vectorized density matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub matrix: Matrix4<Complex64>,
    pub model: Model,
}

impl Generator {
    /// Population block (rows/cols 1–2).
    pub fn pop(&self) -> Matrix2<Complex64> {
        self.matrix.fixed_view::<2, 2>(0, 0).into_owned()
    }
    /// Coherence block (rows/cols 3–4).
    pub fn coh(&self) -> Matrix2<Complex64> {
        self.matrix.fixed_view::<2, 2>(2, 2).into_owned()
    }
    /// Population-rows × coherence-columns interference block.
    pub fn int_a(&self) -> Matrix2<Complex64> {
        self.matrix.fixed_view::<2, 2>(0, 2).into_owned()
    }
    /// Coherence-rows × population-columns interference block.
    pub fn int_b(&self) -> Matrix2<Complex64> {
        self.matrix.fixed_view::<2, 2>(2, 0).into_owned()
    }
}

fn finite_d0(shifts: &ShiftIntegrals) -> Result<f64, KernelError> {
    shifts
        .d0
        .value()
        .ok_or(KernelError::SubOhmicZeroFrequency)
}

fn energy_matrix(omega0: f64) -> Matrix4<Complex64> {
    let mut e = Matrix4::zeros();
    e[(2, 2)] = Complex64::new(0.0, -omega0);
    e[(3, 3)] = Complex64::new(0.0, omega0);
    e
}

/// Redfield generator from the closed-form blocks.
///
/// The coherence block carries, besides the diagonal −(½f₂²g₀(1+2n₀) + 2f₁²D₀),
/// a real off-diagonal coupling +½f₂²g₀(1+2n₀) between ρ₊₋ and ρ₋₊; the
/// integral-based oracle construction pins this term (and all signs) down.
pub fn redfield_generator(
    qubit: &QubitParams,
    _bath: &BathParams,
    shifts: &ShiftIntegrals,
) -> Result<Generator, KernelError> {
    let d0 = finite_d0(shifts)?;
    let (f1, f2) = (qubit.f1, qubit.f2);
    let (g0, n0) = (shifts.g0, shifts.n0);
    let (delta, dp, dm) = (shifts.delta, shifts.delta_plus, shifts.delta_minus);
    let c = |re: f64, im: f64| Complex64::new(re, im);

    let mut m = energy_matrix(qubit.omega0);

    // population block
    let f2g = f2 * f2 * g0;
    m[(0, 0)] += c(-f2g * (1.0 + n0), 0.0);
    m[(0, 1)] += c(f2g * n0, 0.0);
    m[(1, 0)] += c(f2g * (1.0 + n0), 0.0);
    m[(1, 1)] += c(-f2g * n0, 0.0);

    // coherence block: dissipative part + i Δ_coh
    let a = 0.5 * f2 * f2 * g0 * (1.0 + 2.0 * n0);
    let dephase = 2.0 * f1 * f1 * d0;
    m[(2, 2)] += c(-a - dephase, -f2 * f2 * delta);
    m[(2, 3)] += c(a, -f2 * f2 * delta);
    m[(3, 2)] += c(a, f2 * f2 * delta);
    m[(3, 3)] += c(-a - dephase, f2 * f2 * delta);

    // interference blocks
    let f12 = f1 * f2;
    m[(0, 2)] += c(f12 * d0, 0.0);
    m[(0, 3)] += c(f12 * d0, 0.0);
    m[(1, 2)] += c(-f12 * d0, 0.0);
    m[(1, 3)] += c(-f12 * d0, 0.0);

    m[(2, 0)] += c(f12 * g0 * (1.0 + n0), f12 * dm);
    m[(2, 1)] += c(-f12 * g0 * n0, f12 * dp);
    m[(3, 0)] += c(f12 * g0 * (1.0 + n0), -f12 * dm);
    m[(3, 1)] += c(-f12 * g0 * n0, -f12 * dp);

    Ok(Generator {
        matrix: m,
        model: Model::Redfield,
    })
}

/// Lindblad generator: identical population and coherence dissipative
/// diagonals, no interference blocks, diagonal shift f₂²·diag(−Δ, +Δ).
pub fn lindblad_generator(
    qubit: &QubitParams,
    _bath: &BathParams,
    shifts: &ShiftIntegrals,
) -> Result<Generator, KernelError> {
    let d0 = finite_d0(shifts)?;
    let (f1, f2) = (qubit.f1, qubit.f2);
    let (g0, n0) = (shifts.g0, shifts.n0);
    let c = |re: f64, im: f64| Complex64::new(re, im);

    let mut m = energy_matrix(qubit.omega0);

    let f2g = f2 * f2 * g0;
    m[(0, 0)] += c(-f2g * (1.0 + n0), 0.0);
    m[(0, 1)] += c(f2g * n0, 0.0);
    m[(1, 0)] += c(f2g * (1.0 + n0), 0.0);
    m[(1, 1)] += c(-f2g * n0, 0.0);

    let a = 0.5 * f2 * f2 * g0 * (1.0 + 2.0 * n0);
    let dephase = 2.0 * f1 * f1 * d0;
    m[(2, 2)] += c(-a - dephase, -f2 * f2 * shifts.delta);
    m[(3, 3)] += c(-a - dephase, f2 * f2 * shifts.delta);

    Ok(Generator {
        matrix: m,
        model: Model::Lindblad,
    })
}

const IDX: [(i8, i8); 4] = [(1, 1), (-1, -1), (1, -1), (-1, 1)];

/// Generator built element by element from the Born-kernel integrals with a
/// finite regulator ε. Tagged `GenericOracle`.
pub fn generic_generator(
    qubit: &QubitParams,
    bath: &BathParams,
    selection_rule: SelectionRule,
    epsilon: f64,
    cfg: &QuadratureConfig,
) -> Result<Generator, KernelError> {
    let resolvent = |x: f64| epsilon_resolvent(bath, x, epsilon, cfg);
    let reflected = |x: f64| epsilon_resolvent_reflected(bath, x, epsilon, cfg);
    build_generic(qubit, selection_rule, resolvent, reflected)
}

/// Generic generator with the ε-ladder {1e−2, 1e−3, 1e−4}·ω₀ Richardson
/// extrapolation applied to every resolvent element.
pub fn generic_generator_extrapolated(
    qubit: &QubitParams,
    bath: &BathParams,
    selection_rule: SelectionRule,
    cfg: &QuadratureConfig,
) -> Result<Generator, KernelError> {
    let scale = qubit.omega0;
    let resolvent = |x: f64| resolvent_richardson(bath, x, scale, false, cfg);
    let reflected = |x: f64| resolvent_richardson(bath, x, scale, true, cfg);
    build_generic(qubit, selection_rule, resolvent, reflected)
}

fn build_generic<R, Rm>(
    qubit: &QubitParams,
    selection_rule: SelectionRule,
    resolvent: R,
    reflected: Rm,
) -> Result<Generator, KernelError>
where
    R: Fn(f64) -> Result<Complex64, QuadratureError>,
    Rm: Fn(f64) -> Result<Complex64, QuadratureError>,
{
    let s = coupling_matrix(qubit);
    let energy = |p: i8| f64::from(p) * qubit.omega0 / 2.0;

    // the only kernel arguments are E_pq ∈ {0, ±ω₀}; evaluate each integral once
    let mut r_cache = [None::<Complex64>; 3];
    let mut rm_cache = [None::<Complex64>; 3];
    let key = |x: f64| -> usize {
        if x > qubit.omega0 / 2.0 {
            2
        } else if x < -qubit.omega0 / 2.0 {
            0
        } else {
            1
        }
    };
    let mut r = |x: f64| -> Result<Complex64, QuadratureError> {
        let k = key(x);
        if let Some(v) = r_cache[k] {
            return Ok(v);
        }
        let v = resolvent(x)?;
        r_cache[k] = Some(v);
        Ok(v)
    };
    let mut rm = |x: f64| -> Result<Complex64, QuadratureError> {
        let k = key(x);
        if let Some(v) = rm_cache[k] {
            return Ok(v);
        }
        let v = reflected(x)?;
        rm_cache[k] = Some(v);
        Ok(v)
    };

    let lindblad = selection_rule == SelectionRule::EnergyConserving;
    let i_unit = Complex64::new(0.0, 1.0);
    let mut m = energy_matrix(qubit.omega0);
    for (row, &(p, pp)) in IDX.iter().enumerate() {
        for (col, &(q, qq)) in IDX.iter().enumerate() {
            let mut t = Complex64::new(0.0, 0.0);
            // term 1: −i δ_{p'q'} Σ_l S_pl S_lq R(E_ql)
            if pp == qq && (!lindblad || p == q) {
                for l in [1i8, -1] {
                    let w = s.entry(p, l) * s.entry(l, q);
                    if w != 0.0 {
                        t -= i_unit * w * r(energy(q) - energy(l))?;
                    }
                }
            }
            // term 2: −i δ_{pq} Σ_l S_q'l S_lp' Rm(E_lq')
            if p == q && (!lindblad || pp == qq) {
                for l in [1i8, -1] {
                    let w = s.entry(qq, l) * s.entry(l, pp);
                    if w != 0.0 {
                        t -= i_unit * w * rm(energy(l) - energy(qq))?;
                    }
                }
            }
            // terms 3+4: +i S_pq S_q'p' [Rm(E_p'q') + R(E_qp)],
            // gated by δ(E_pq − E_p'q') under the selection rule
            if !lindblad || (p - q) == (pp - qq) {
                let w = s.entry(p, q) * s.entry(qq, pp);
                if w != 0.0 {
                    t += i_unit * w * rm(energy(pp) - energy(qq))?;
                    t += i_unit * w * r(energy(q) - energy(p))?;
                }
            }
            m[(row, col)] += t;
        }
    }
    Ok(Generator {
        matrix: m,
        model: Model::GenericOracle,
    })
}

/// Structural diagnostics of a generator (reporting, never failing).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorDiagnostics {
    /// max_j |L₍₊₊₎ⱼ + L₍₋₋₎ⱼ| — trace preservation defect.
    pub trace_defect: f64,
    /// max |L_pp',qq' − conj(L_p'p,q'q)| — Hermiticity preservation defect.
    pub hermiticity_defect: f64,
    /// |det L| — must vanish for a steady state to exist.
    pub det_abs: f64,
    /// max-abs entry over both interference blocks.
    pub interference_norm: f64,
}

pub fn validate_generator(gen: &Generator) -> GeneratorDiagnostics {
    let m = &gen.matrix;
    let trace_defect = (0..4)
        .map(|j| (m[(0, j)] + m[(1, j)]).norm())
        .fold(0.0, f64::max);
    // conjugation index swap: (++)↔(++), (−−)↔(−−), (+−)↔(−+)
    let sigma = [0usize, 1, 3, 2];
    let mut hermiticity_defect: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let d = (m[(i, j)] - m[(sigma[i], sigma[j])].conj()).norm();
            hermiticity_defect = hermiticity_defect.max(d);
        }
    }
    let det_abs = m.determinant().norm();
    let interference_norm = gen
        .int_a()
        .iter()
        .chain(gen.int_b().iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    GeneratorDiagnostics {
        trace_defect,
        hermiticity_defect,
        det_abs,
        interference_norm,
    }
}

/// JSON wire form: row-major entries as [re, im] pairs in the fixed
/// [ρ₊₊, ρ₋₋, ρ₊₋, ρ₋₊] index order.
#[derive(Serialize, Deserialize)]
struct GeneratorRepr {
    model: Model,
    index_order: [String; 4],
    matrix: [[[f64; 2]; 4]; 4],
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut matrix = [[[0.0; 2]; 4]; 4];
        for (i, row) in matrix.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = [self.matrix[(i, j)].re, self.matrix[(i, j)].im];
            }
        }
        GeneratorRepr {
            model: self.model,
            index_order: INDEX_ORDER.map(String::from),
            matrix,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = GeneratorRepr::deserialize(deserializer)?;
        let mut m = Matrix4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = Complex64::new(repr.matrix[i][j][0], repr.matrix[i][j][1]);
            }
        }
        Ok(Generator {
            matrix: m,
            model: repr.model,
        })
    }
}

/// Shift bundle check used by generator constructors in the dynamics layer.
pub fn shifts_compatible(shifts: &ShiftIntegrals) -> bool {
    !matches!(shifts.d0, ZeroFreqLimit::Infinite)
}
