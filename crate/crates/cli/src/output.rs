//! Deterministic CSV/JSON emission.
//!
//! Numbers are printed with a fixed significant-digit scientific format so a
//! given configuration always produces byte-identical output.

use std::io::Write;

use redlin_core::sweep::SweepRow;

use crate::config::{OutputFormat, RunConfig};

pub const SWEEP_HEADER: &str = "omega0,model,rho_pp,rho_mm,rho_pm_re,rho_pm_im,vx,vy,vz,min_eig,g0,n0,D0,Delta,Delta_plus,Delta_minus,error";

/// Fixed-precision scientific form: `precision` significant digits,
/// lowercase `e` exponent. NaN prints as `nan`.
pub fn fmt_num(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    format!("{:.*e}", precision.saturating_sub(1), x)
}

pub fn model_name(model: redlin_core::kernels::Model) -> &'static str {
    match model {
        redlin_core::kernels::Model::Redfield => "redfield",
        redlin_core::kernels::Model::Lindblad => "lindblad",
        redlin_core::kernels::Model::GenericOracle => "generic",
    }
}

pub fn sweep_row_csv(row: &SweepRow, precision: usize) -> String {
    let f = |x: f64| fmt_num(x, precision);
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        f(row.omega0),
        model_name(row.model),
        f(row.rho_pp),
        f(row.rho_mm),
        f(row.rho_pm_re),
        f(row.rho_pm_im),
        f(row.vx),
        f(row.vy),
        f(row.vz),
        f(row.min_eig),
        f(row.g0),
        f(row.n0),
        f(row.d0),
        f(row.delta),
        f(row.delta_plus),
        f(row.delta_minus),
        row.error.as_deref().unwrap_or("").replace(',', ";"),
    )
}

pub fn rows_to_string(rows: &[SweepRow], cfg: &RunConfig) -> Result<String, String> {
    match cfg.format {
        OutputFormat::Csv => {
            let mut s = String::from(SWEEP_HEADER);
            s.push('\n');
            for row in rows {
                s.push_str(&sweep_row_csv(row, cfg.precision));
                s.push('\n');
            }
            Ok(s)
        }
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(rows).map_err(|e| e.to_string())?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// Write to `--out` or stdout.
pub fn emit(text: &str, cfg: &RunConfig) -> Result<(), String> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write output {path}: {e}")),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| format!("cannot write stdout: {e}"))
        }
    }
}

/// Machine-readable error (JSON mode) or plain message on stderr.
pub fn emit_error(message: &str, cfg: &RunConfig) {
    if cfg.format == OutputFormat::Json {
        eprintln!("{{\"error\": {}}}", serde_json::to_string(message).unwrap());
    } else {
        eprintln!("error: {message}");
    }
}
