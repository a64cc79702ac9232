//! Subcommand implementations. Each returns a process exit code:
//! 0 success, 1 computation/check failure, 2 usage error.

use std::time::Instant;

use redlin_core::bath::{bath_correlation, Regime};
use redlin_core::dynamics::{
    closed_form_steady_state, from_bloch, negativity_threshold, positivity_report, propagate,
    steady_state, sub_ohmic_limit_state, to_bloch, BlochVector, DynamicsError,
};
use redlin_core::integrals::compute_shift_integrals;
use redlin_core::kernels::{
    generic_generator_extrapolated, lindblad_generator, redfield_generator, Model, SelectionRule,
};
use redlin_core::sweep::{run_sweep, SweepRequest, SweepRow};

use crate::config::{ModelChoice, OutputFormat, RawConfig, RunConfig};
use crate::output::{emit, emit_error, fmt_num, model_name, rows_to_string};

fn sweep_request(run: &RunConfig, omega0_values: Vec<f64>) -> SweepRequest {
    SweepRequest {
        omega0_values,
        models: run.model.models(),
        f1: run.qubit.f1,
        f2: run.qubit.f2,
        bath: run.bath,
        quadrature: run.quadrature,
    }
}

pub fn cmd_steady(run: &RunConfig) -> i32 {
    let rows = run_sweep(&sweep_request(run, vec![run.qubit.omega0]));
    if let Some(bad) = rows.iter().find_map(|r: &SweepRow| r.error.as_deref()) {
        emit_error(bad, run);
        return 1;
    }
    match rows_to_string(&rows, run).and_then(|s| emit(&s, run)) {
        Ok(()) => 0,
        Err(e) => {
            emit_error(&e, run);
            1
        }
    }
}

pub fn cmd_sweep(run: &RunConfig, raw: &RawConfig) -> i32 {
    let grid = match raw.sweep_grid() {
        Ok(g) => g,
        Err(e) => {
            emit_error(&e.to_string(), run);
            return 2;
        }
    };
    let rows = run_sweep(&sweep_request(run, grid));
    match rows_to_string(&rows, run).and_then(|s| emit(&s, run)) {
        Ok(()) => 0,
        Err(e) => {
            emit_error(&e, run);
            1
        }
    }
}

pub fn cmd_threshold(
    run: &RunConfig,
    from: f64,
    to: f64,
    golden: Option<&str>,
) -> i32 {
    if !(from > 0.0 && to > from) {
        emit_error(
            &format!("threshold bracket must satisfy 0 < from < to, got [{from}, {to}]"),
            run,
        );
        return 2;
    }
    let model = match run.model {
        ModelChoice::Lindblad => Model::Lindblad,
        _ => Model::Redfield,
    };
    match negativity_threshold(&run.qubit, &run.bath, model, (from, to), &run.quadrature) {
        Ok(star) => {
            println!(
                "model = {}: population crosses zero at omega0* = {}",
                model_name(model),
                fmt_num(star, run.precision)
            );
            if let Some(path) = golden {
                match std::fs::read_to_string(path)
                    .map_err(|e| e.to_string())
                    .and_then(|s| s.trim().parse::<f64>().map_err(|e| e.to_string()))
                {
                    Ok(expected) => {
                        println!(
                            "golden comparison: expected {}, difference {}",
                            fmt_num(expected, run.precision),
                            fmt_num(star - expected, run.precision)
                        );
                    }
                    Err(e) => {
                        emit_error(&format!("cannot read golden file {path}: {e}"), run);
                        return 2;
                    }
                }
            }
            0
        }
        Err(DynamicsError::NoCrossing) => {
            println!(
                "model = {}: no crossing: quantum map preserved on [{from}, {to}]",
                model_name(model)
            );
            0
        }
        Err(e @ DynamicsError::BracketInvalid { .. }) => {
            emit_error(&e.to_string(), run);
            1
        }
        Err(e) => {
            emit_error(&e.to_string(), run);
            1
        }
    }
}

const EVOLVE_HEADER: &str =
    "t,model,rho_pp,rho_mm,rho_pm_re,rho_pm_im,vx,vy,vz,trace_defect,dist_to_steady";

pub fn cmd_evolve(run: &RunConfig, raw: &RawConfig) -> i32 {
    if raw.t_max < 0.0 || raw.samples == 0 {
        emit_error(
            &format!(
                "evolve needs t_max >= 0 and samples >= 1, got t_max={}, samples={}",
                raw.t_max, raw.samples
            ),
            run,
        );
        return 2;
    }
    let rho0 = from_bloch(&BlochVector {
        x: raw.rho0.0,
        y: raw.rho0.1,
        z: raw.rho0.2,
    });
    let times: Vec<f64> = if raw.t_max == 0.0 {
        vec![0.0]
    } else {
        (0..raw.samples)
            .map(|k| k as f64 * raw.t_max / (raw.samples - 1).max(1) as f64)
            .collect()
    };

    let inner = || -> Result<String, DynamicsError> {
        let shifts = compute_shift_integrals(&run.bath, run.qubit.omega0, &run.quadrature)?;
        let mut out = String::from(EVOLVE_HEADER);
        out.push('\n');
        let mut json_rows = Vec::new();
        for model in run.model.models() {
            let gen = match model {
                Model::Redfield => redfield_generator(&run.qubit, &run.bath, &shifts)?,
                _ => lindblad_generator(&run.qubit, &run.bath, &shifts)?,
            };
            let traj = propagate(&gen, &rho0, &times)?;
            let rho_st = steady_state(&gen)?;
            let n = traj.states.len();
            for (i, (t, s)) in traj.times.iter().zip(&traj.states).enumerate() {
                let v = to_bloch(s);
                let dist = if i + 1 == n {
                    let d = (s.rho_pp - rho_st.rho_pp)
                        .norm()
                        .max((s.rho_mm - rho_st.rho_mm).norm())
                        .max((s.rho_pm - rho_st.rho_pm).norm());
                    Some(d)
                } else {
                    None
                };
                match run.format {
                    OutputFormat::Csv => {
                        let f = |x: f64| fmt_num(x, run.precision);
                        out.push_str(&format!(
                            "{},{},{},{},{},{},{},{},{},{},{}\n",
                            f(*t),
                            model_name(model),
                            f(s.rho_pp.re),
                            f(s.rho_mm.re),
                            f(s.rho_pm.re),
                            f(s.rho_pm.im),
                            f(v.x),
                            f(v.y),
                            f(v.z),
                            f(s.trace_defect()),
                            dist.map(f).unwrap_or_default(),
                        ));
                    }
                    OutputFormat::Json => {
                        json_rows.push(serde_json::json!({
                            "t": t,
                            "model": model_name(model),
                            "rho_pp": s.rho_pp.re,
                            "rho_mm": s.rho_mm.re,
                            "rho_pm_re": s.rho_pm.re,
                            "rho_pm_im": s.rho_pm.im,
                            "vx": v.x,
                            "vy": v.y,
                            "vz": v.z,
                            "trace_defect": s.trace_defect(),
                            "dist_to_steady": dist,
                        }));
                    }
                }
            }
        }
        if run.format == OutputFormat::Json {
            let mut s = serde_json::to_string_pretty(&json_rows)
                .map_err(|e| DynamicsError::Domain(e.to_string()))?;
            s.push('\n');
            Ok(s)
        } else {
            Ok(out)
        }
    };
    match inner() {
        Ok(text) => match emit(&text, run) {
            Ok(()) => 0,
            Err(e) => {
                emit_error(&e, run);
                1
            }
        },
        Err(e) => {
            emit_error(&e.to_string(), run);
            1
        }
    }
}

enum CheckStatus {
    Ok,
    Fail(String),
    Skipped(&'static str),
}

fn run_check(
    name: &str,
    status: CheckStatus,
    started: Instant,
    all_ok: &mut bool,
) {
    let ms = started.elapsed().as_secs_f64() * 1e3;
    match status {
        CheckStatus::Ok => println!("check {name}: ok ({ms:.1} ms)"),
        CheckStatus::Fail(detail) => {
            *all_ok = false;
            println!("check {name}: FAIL ({ms:.1} ms) — {detail}");
        }
        CheckStatus::Skipped(reason) => println!("check {name}: skipped — {reason}"),
    }
}

pub fn cmd_validate(run: &RunConfig, tol: Option<f64>) -> i32 {
    let bath = &run.bath;
    let qubit = &run.qubit;
    let sub_ohmic = bath.regime() == Regime::SubOhmic;
    let mut all_ok = true;
    let t = |def: f64| tol.unwrap_or(def);

    // detailed balance D(-w) = e^{-w/T} D(w)
    let started = Instant::now();
    let status = {
        let mut worst = 0.0_f64;
        let mut bad = None;
        for k in 1..=40 {
            let w = k as f64 * bath.omega_c / 20.0;
            match (bath_correlation(w, bath), bath_correlation(-w, bath)) {
                (Ok(dp), Ok(dn)) => {
                    let rhs = (-w / bath.temperature).exp() * dp;
                    worst = worst.max((dn - rhs).abs() / dp.max(1e-300));
                }
                _ => bad = Some(w),
            }
        }
        if let Some(w) = bad {
            CheckStatus::Fail(format!("correlation evaluation failed at omega = {w}"))
        } else if worst <= t(1e-12) {
            CheckStatus::Ok
        } else {
            CheckStatus::Fail(format!("max relative defect {worst:.2e}"))
        }
    };
    run_check("detailed-balance", status, started, &mut all_ok);

    let shifts = if sub_ohmic {
        None
    } else {
        Some(compute_shift_integrals(bath, qubit.omega0, &run.quadrature))
    };

    // 2*Delta = Delta_plus - Delta_minus
    let started = Instant::now();
    let status = match &shifts {
        None => CheckStatus::Skipped("sub-ohmic bath: shift integrals diverge"),
        Some(Err(e)) => CheckStatus::Fail(e.to_string()),
        Some(Ok(s)) => {
            let scale = s.delta_plus.abs().max(s.delta_minus.abs()).max(1e-300);
            let defect = (2.0 * s.delta - (s.delta_plus - s.delta_minus)).abs() / scale;
            if defect <= t(1e-8) {
                CheckStatus::Ok
            } else {
                CheckStatus::Fail(format!("relative defect {defect:.2e}"))
            }
        }
    };
    run_check("shift-identity", status, started, &mut all_ok);

    // generic Born kernel vs closed-form generators
    let started = Instant::now();
    let status = match &shifts {
        None => CheckStatus::Skipped("sub-ohmic bath: closed-form kernels undefined"),
        Some(Err(e)) => CheckStatus::Fail(e.to_string()),
        Some(Ok(s)) => {
            let mut worst = 0.0_f64;
            let mut failure = None;
            for (rule, closed) in [
                (SelectionRule::None, redfield_generator(qubit, bath, s)),
                (
                    SelectionRule::EnergyConserving,
                    lindblad_generator(qubit, bath, s),
                ),
            ] {
                match (
                    closed,
                    generic_generator_extrapolated(qubit, bath, rule, &run.quadrature),
                ) {
                    (Ok(c), Ok(o)) => {
                        let scale = c
                            .matrix
                            .iter()
                            .map(|z| z.norm())
                            .fold(1e-300_f64, f64::max);
                        for (a, b) in o.matrix.iter().zip(c.matrix.iter()) {
                            worst = worst.max((a - b).norm() / scale);
                        }
                    }
                    (Err(e), _) => failure = Some(e.to_string()),
                    (_, Err(e)) => failure = Some(e.to_string()),
                }
            }
            if let Some(e) = failure {
                CheckStatus::Fail(e)
            } else if worst <= t(1e-4) {
                CheckStatus::Ok
            } else {
                CheckStatus::Fail(format!("max relative entrywise gap {worst:.2e}"))
            }
        }
    };
    run_check("oracle-agreement", status, started, &mut all_ok);

    // Lindblad steady state stays a physical state
    let started = Instant::now();
    let status = match &shifts {
        None => CheckStatus::Skipped("sub-ohmic bath: shift integrals diverge"),
        Some(Err(e)) => CheckStatus::Fail(e.to_string()),
        Some(Ok(s)) => match lindblad_generator(qubit, bath, s).and_then(|g| {
            steady_state(&g).map_err(|e| redlin_core::kernels::KernelError::Domain(e.to_string()))
        }) {
            Ok(rho) => {
                let min_eig = positivity_report(&rho).min_eigenvalue;
                if min_eig >= -t(1e-12) {
                    CheckStatus::Ok
                } else {
                    CheckStatus::Fail(format!("min eigenvalue {min_eig:.2e}"))
                }
            }
            Err(e) => CheckStatus::Fail(e.to_string()),
        },
    };
    run_check("positivity", status, started, &mut all_ok);

    // closed forms vs the row-replacement solve
    let started = Instant::now();
    let status = match &shifts {
        None => CheckStatus::Skipped("sub-ohmic bath: closed forms undefined"),
        Some(Err(e)) => CheckStatus::Fail(e.to_string()),
        Some(Ok(s)) => {
            let result = redfield_generator(qubit, bath, s)
                .map_err(|e| e.to_string())
                .and_then(|g| steady_state(&g).map_err(|e| e.to_string()))
                .and_then(|solved| {
                    closed_form_steady_state(qubit, s)
                        .map(|cf| (solved, cf))
                        .map_err(|e| e.to_string())
                });
            match result {
                Ok((solved, cf)) => {
                    let gap = (solved.rho_pp - cf.rho_pp)
                        .norm()
                        .max((solved.rho_mm - cf.rho_mm).norm())
                        .max((solved.rho_pm - cf.rho_pm).norm());
                    if gap <= t(1e-8) {
                        CheckStatus::Ok
                    } else {
                        CheckStatus::Fail(format!("entrywise gap {gap:.2e}"))
                    }
                }
                Err(e) => CheckStatus::Fail(e),
            }
        }
    };
    run_check("closed-form-vs-nullspace", status, started, &mut all_ok);

    // sub-ohmic limit formulas
    let started = Instant::now();
    let status = if sub_ohmic {
        // consistent synthetic limits: Delta = (Delta_plus - Delta_minus)/2
        let (dp, dm) = (-2.5, 1.5);
        match sub_ohmic_limit_state((dp - dm) / 2.0, dp, dm) {
            Ok(rho) => {
                let trace_ok = rho.trace_defect() <= t(1e-12);
                let coh_ok = rho.rho_pm.norm() <= t(1e-12);
                let inconsistent_rejected = sub_ohmic_limit_state(1.0, dp, dm).is_err();
                if trace_ok && coh_ok && inconsistent_rejected {
                    CheckStatus::Ok
                } else {
                    CheckStatus::Fail(format!(
                        "trace defect {:.2e}, |rho_pm| {:.2e}, inconsistent rejected {}",
                        rho.trace_defect(),
                        rho.rho_pm.norm(),
                        inconsistent_rejected
                    ))
                }
            }
            Err(e) => CheckStatus::Fail(e.to_string()),
        }
    } else {
        CheckStatus::Skipped("bath is not sub-ohmic")
    };
    run_check("sub-ohmic-limit", status, started, &mut all_ok);

    if all_ok {
        0
    } else {
        1
    }
}
