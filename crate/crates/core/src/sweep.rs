//! Parameter sweeps over the qubit splitting ω₀.
//!
//! Each grid point is independent (fresh shift integrals, generator, steady
//! state), so the sweep is data-parallel. With the default `parallel` feature
//! the points are evaluated on the rayon pool; `run_sweep_seq` is always
//! available and the two produce identical rows in identical order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bath::BathParams;
use crate::dynamics::{
    closed_form_steady_state, positivity_report, steady_state, to_bloch, DensityMatrix,
    DynamicsError,
};
use crate::integrals::{compute_shift_integrals, QuadratureConfig, ShiftIntegrals};
use crate::kernels::{lindblad_generator, redfield_generator, Model, QubitParams};

/// One sweep: a grid of ω₀ values evaluated for one or more models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRequest {
    pub omega0_values: Vec<f64>,
    pub models: Vec<Model>,
    pub f1: f64,
    pub f2: f64,
    pub bath: BathParams,
    pub quadrature: QuadratureConfig,
}

impl SweepRequest {
    /// Linearly spaced grid over [from, to] inclusive.
    pub fn linear_grid(from: f64, to: f64, steps: usize) -> Vec<f64> {
        if steps <= 1 {
            return vec![from];
        }
        let h = (to - from) / (steps - 1) as f64;
        (0..steps)
            .map(|k| {
                if k == steps - 1 {
                    to
                } else {
                    from + k as f64 * h
                }
            })
            .collect()
    }

    /// Log-spaced grid over [from, to] inclusive; requires from, to > 0.
    pub fn log_grid(from: f64, to: f64, steps: usize) -> Option<Vec<f64>> {
        if !(from > 0.0 && to > 0.0) {
            return None;
        }
        if steps <= 1 {
            return Some(vec![from]);
        }
        let (lf, lt) = (from.ln(), to.ln());
        let h = (lt - lf) / (steps - 1) as f64;
        Some(
            (0..steps)
                .map(|k| {
                    if k == steps - 1 {
                        to
                    } else {
                        (lf + k as f64 * h).exp()
                    }
                })
                .collect(),
        )
    }
}

/// One (ω₀, model) result, one output row.
///
/// On failure the numeric fields are NaN and `error` carries the message,
/// so a sweep never loses the rest of the grid to one bad point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub omega0: f64,
    pub model: Model,
    pub rho_pp: f64,
    pub rho_mm: f64,
    pub rho_pm_re: f64,
    pub rho_pm_im: f64,
    pub vx: f64,
    pub vy: f64,
    pub vz: f64,
    pub min_eig: f64,
    pub g0: f64,
    pub n0: f64,
    pub d0: f64,
    pub delta: f64,
    pub delta_plus: f64,
    pub delta_minus: f64,
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(omega0: f64, model: Model, err: &DynamicsError) -> Self {
        Self {
            omega0,
            model,
            rho_pp: f64::NAN,
            rho_mm: f64::NAN,
            rho_pm_re: f64::NAN,
            rho_pm_im: f64::NAN,
            vx: f64::NAN,
            vy: f64::NAN,
            vz: f64::NAN,
            min_eig: f64::NAN,
            g0: f64::NAN,
            n0: f64::NAN,
            d0: f64::NAN,
            delta: f64::NAN,
            delta_plus: f64::NAN,
            delta_minus: f64::NAN,
            error: Some(err.to_string()),
        }
    }

    fn from_state(
        omega0: f64,
        model: Model,
        rho: &DensityMatrix,
        shifts: &ShiftIntegrals,
    ) -> Self {
        let v = to_bloch(rho);
        let rep = positivity_report(rho);
        Self {
            omega0,
            model,
            rho_pp: rho.rho_pp.re,
            rho_mm: rho.rho_mm.re,
            rho_pm_re: rho.rho_pm.re,
            rho_pm_im: rho.rho_pm.im,
            vx: v.x,
            vy: v.y,
            vz: v.z,
            min_eig: rep.min_eigenvalue,
            g0: shifts.g0,
            n0: shifts.n0,
            d0: shifts.d0.value().unwrap_or(f64::NAN),
            delta: shifts.delta,
            delta_plus: shifts.delta_plus,
            delta_minus: shifts.delta_minus,
            error: None,
        }
    }
}

fn evaluate_point(req: &SweepRequest, omega0: f64, model: Model) -> SweepRow {
    let inner = || -> Result<SweepRow, DynamicsError> {
        let qubit = QubitParams::new(omega0, req.f1, req.f2)?;
        let shifts = compute_shift_integrals(&req.bath, omega0, &req.quadrature)?;
        let rho = match model {
            Model::Redfield => {
                // cross-check the kernel solve against the closed forms
                let gen = redfield_generator(&qubit, &req.bath, &shifts)?;
                let solved = steady_state(&gen)?;
                let cf = closed_form_steady_state(&qubit, &shifts)?;
                let gap = (solved.rho_pp - cf.rho_pp)
                    .norm()
                    .max((solved.rho_pm - cf.rho_pm).norm());
                if gap > 1e-8 {
                    return Err(DynamicsError::ResidualTooLarge {
                        residual: gap,
                        bound: 1e-8,
                    });
                }
                solved
            }
            _ => {
                let gen = lindblad_generator(&qubit, &req.bath, &shifts)?;
                steady_state(&gen)?
            }
        };
        Ok(SweepRow::from_state(omega0, model, &rho, &shifts))
    };
    inner().unwrap_or_else(|e| SweepRow::failed(omega0, model, &e))
}

fn point_list(req: &SweepRequest) -> Vec<(f64, Model)> {
    let mut pts = Vec::with_capacity(req.omega0_values.len() * req.models.len());
    for &omega0 in &req.omega0_values {
        for &model in &req.models {
            pts.push((omega0, model));
        }
    }
    pts
}

/// Sequential reference implementation.
pub fn run_sweep_seq(req: &SweepRequest) -> Vec<SweepRow> {
    point_list(req)
        .iter()
        .map(|&(omega0, model)| evaluate_point(req, omega0, model))
        .collect()
}

/// Data-parallel sweep; row order matches `run_sweep_seq` exactly.
#[cfg(feature = "parallel")]
pub fn run_sweep(req: &SweepRequest) -> Vec<SweepRow> {
    point_list(req)
        .par_iter()
        .map(|&(omega0, model)| evaluate_point(req, omega0, model))
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn run_sweep(req: &SweepRequest) -> Vec<SweepRow> {
    run_sweep_seq(req)
}
