//! Acceptance suite: one test per numbered claim about the physics, each
//! printing a single `acceptance NN <name>: PASS|FAIL` line before asserting.
//!
//! Criterion 01 asserts the published zero-crossing window [20, 30] for the
//! Redfield population. The implemented equations place the crossing near
//! ω₀* ≈ 8.8794 (it is insensitive to the quadrature settings and agrees
//! with an independent high-precision evaluation of the closed forms), so
//! that test fails by design rather than being weakened to fit.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use redlin_core::bath::BathParams;
use redlin_core::dynamics::{
    closed_form_steady_state, dephasing_damping_integral, fit_decay_rate, from_bloch,
    negativity_threshold, positivity_report, propagate, spectral_gap, steady_state,
    sub_ohmic_limit_state, DecayChannel, DecayRates,
};
use redlin_core::integrals::{adaptive_quad, compute_shift_integrals, QuadratureConfig};
use redlin_core::kernels::{
    generic_generator_extrapolated, lindblad_generator, redfield_generator, Model, QubitParams,
    SelectionRule,
};
use redlin_core::sweep::{run_sweep, SweepRequest};
use redlin_core::BlochVector;

fn fig_bath() -> BathParams {
    BathParams::new(1.0, 1.0, 100.0, 10.0).unwrap()
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn report(number: u8, name: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("acceptance {number:02} {name}: {verdict} ({detail})");
    assert!(ok, "acceptance {number:02} {name} failed: {detail}");
}

fn random_ohmic_bath(rng: &mut ChaCha8Rng) -> BathParams {
    BathParams::new(
        rng.gen_range(0.3..2.0),
        1.0,
        rng.gen_range(30.0..200.0),
        rng.gen_range(1.0..25.0),
    )
    .unwrap()
}

#[test]
fn criterion_01_population_sweep_window() {
    let start = Instant::now();
    let req = SweepRequest {
        omega0_values: SweepRequest::linear_grid(1.0, 50.0, 200),
        models: vec![Model::Redfield, Model::Lindblad],
        f1: 1.0,
        f2: 1.0,
        bath: fig_bath(),
        quadrature: cfg(),
    };
    let rows = run_sweep(&req);
    let elapsed = start.elapsed().as_secs_f64();

    let redfield: Vec<f64> = rows
        .iter()
        .filter(|r| r.model == Model::Redfield)
        .map(|r| r.rho_pp)
        .collect();
    let lindblad: Vec<f64> = rows
        .iter()
        .filter(|r| r.model == Model::Lindblad)
        .map(|r| r.rho_pp)
        .collect();
    assert!(rows.iter().all(|r| r.error.is_none()));

    let sign_changes = redfield
        .windows(2)
        .filter(|w| w[0] > 0.0 && w[1] <= 0.0)
        .count();
    let lindblad_positive = lindblad.iter().all(|&p| p > 0.0);
    let lindblad_monotone = lindblad.windows(2).all(|w| w[1] <= w[0] + 1e-12);

    let star = negativity_threshold(
        &QubitParams::new(5.0, 1.0, 1.0).unwrap(),
        &fig_bath(),
        Model::Redfield,
        (1.0, 50.0),
        &cfg(),
    )
    .unwrap();

    let ok = sign_changes == 1
        && (20.0..=30.0).contains(&star)
        && lindblad_positive
        && lindblad_monotone
        && elapsed <= 10.0;
    report(
        1,
        "population-sweep-window",
        ok,
        &format!(
            "crossings={sign_changes}, omega0*={star:.6}, lindblad positive={lindblad_positive}, \
             monotone={lindblad_monotone}, elapsed={elapsed:.2}s"
        ),
    );
}

#[test]
fn criterion_02_gibbs_limit_f1_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_pop = 0.0_f64;
    let mut worst_coh = 0.0_f64;
    for _ in 0..50 {
        let bath = random_ohmic_bath(&mut rng);
        let omega0 = rng.gen_range(0.5..20.0);
        let qubit = QubitParams::new(omega0, 0.0, rng.gen_range(0.2..2.0)).unwrap();
        let shifts = compute_shift_integrals(&bath, omega0, &cfg()).unwrap();
        let gibbs = shifts.n0 / (1.0 + 2.0 * shifts.n0);
        for gen in [
            redfield_generator(&qubit, &bath, &shifts).unwrap(),
            lindblad_generator(&qubit, &bath, &shifts).unwrap(),
        ] {
            let rho = steady_state(&gen).unwrap();
            worst_pop = worst_pop.max((rho.rho_pp.re - gibbs).abs());
            worst_coh = worst_coh.max(rho.rho_pm.norm());
        }
    }
    let ok = worst_pop <= 1e-10 && worst_coh <= 1e-12;
    report(
        2,
        "gibbs-limit",
        ok,
        &format!("max |rho_pp - gibbs| = {worst_pop:.2e}, max |rho_pm| = {worst_coh:.2e}"),
    );
}

#[test]
fn criterion_03_closed_form_vs_nullspace() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let bath = random_ohmic_bath(&mut rng);
        let omega0 = rng.gen_range(0.5..0.4 * bath.omega_c);
        let qubit = QubitParams::new(
            omega0,
            rng.gen_range(0.0..2.0),
            rng.gen_range(0.0..2.0),
        )
        .unwrap();
        let shifts = compute_shift_integrals(&bath, omega0, &cfg()).unwrap();
        let gen = redfield_generator(&qubit, &bath, &shifts).unwrap();
        let solved = steady_state(&gen).unwrap();
        let cf = closed_form_steady_state(&qubit, &shifts).unwrap();
        for (a, b) in [
            (solved.rho_pp, cf.rho_pp),
            (solved.rho_mm, cf.rho_mm),
            (solved.rho_pm, cf.rho_pm),
            (solved.rho_mp, cf.rho_mp),
        ] {
            worst = worst.max((a - b).norm());
        }
    }
    let ok = worst <= 1e-8;
    report(
        3,
        "closed-form-vs-nullspace",
        ok,
        &format!("max entrywise gap = {worst:.2e} over 100 draws"),
    );
}

#[test]
fn criterion_04_kernel_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let bath = random_ohmic_bath(&mut rng);
        let omega0 = rng.gen_range(1.0..0.2 * bath.omega_c);
        let qubit = QubitParams::new(
            omega0,
            rng.gen_range(0.2..1.5),
            rng.gen_range(0.2..1.5),
        )
        .unwrap();
        let shifts = compute_shift_integrals(&bath, omega0, &cfg()).unwrap();
        for (rule, closed) in [
            (
                SelectionRule::None,
                redfield_generator(&qubit, &bath, &shifts).unwrap(),
            ),
            (
                SelectionRule::EnergyConserving,
                lindblad_generator(&qubit, &bath, &shifts).unwrap(),
            ),
        ] {
            let oracle = generic_generator_extrapolated(&qubit, &bath, rule, &cfg()).unwrap();
            let scale = closed
                .matrix
                .iter()
                .map(|z| z.norm())
                .fold(0.0_f64, f64::max);
            for (a, b) in oracle.matrix.iter().zip(closed.matrix.iter()) {
                worst = worst.max((a - b).norm() / scale);
            }
        }
    }
    let ok = worst <= 1e-4;
    report(
        4,
        "kernel-oracle-equivalence",
        ok,
        &format!("max relative entrywise gap = {worst:.2e} over 10 draws"),
    );
}

#[test]
fn criterion_05_shift_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0_f64;
    for k in 0..20 {
        let s = if k % 2 == 0 {
            1.0
        } else {
            rng.gen_range(1.2..2.5)
        };
        let bath = BathParams::new(
            rng.gen_range(0.3..2.0),
            s,
            rng.gen_range(30.0..200.0),
            rng.gen_range(1.0..25.0),
        )
        .unwrap();
        let omega0 = rng.gen_range(0.5..0.3 * bath.omega_c);
        let shifts = compute_shift_integrals(&bath, omega0, &cfg()).unwrap();
        let scale = shifts
            .delta_plus
            .abs()
            .max(shifts.delta_minus.abs())
            .max(2.0 * shifts.delta.abs());
        let defect = (2.0 * shifts.delta - (shifts.delta_plus - shifts.delta_minus)).abs();
        worst = worst.max(defect / scale);
    }
    let ok = worst <= 1e-8;
    report(
        5,
        "shift-identity",
        ok,
        &format!("max relative defect = {worst:.2e} over 20 draws"),
    );
}

#[test]
fn criterion_06_decay_rates() {
    let bath = fig_bath();
    let quad = cfg();
    let shifts = compute_shift_integrals(&bath, 5.0, &quad).unwrap();

    // Γ₁ from the dissipative channel (f₁ = 0); the Lindblad generator keeps
    // the coherence decay single-exponential at exactly this rate.
    let qubit1 = QubitParams::new(5.0, 0.0, 1.0).unwrap();
    let rates = DecayRates::analytic(&qubit1, &shifts).unwrap();
    let gen1 = lindblad_generator(&qubit1, &bath, &shifts).unwrap();
    let rho0 = from_bloch(&BlochVector {
        x: 1.0,
        y: 0.0,
        z: 0.0,
    });
    let t_end = 3.0 / rates.gamma1;
    let times: Vec<f64> = (1..=80).map(|k| k as f64 * t_end / 80.0).collect();
    let traj1 = propagate(&gen1, &rho0, &times).unwrap();
    let fit1 = fit_decay_rate(&traj1, DecayChannel::Coherence).unwrap();
    let err1 = (fit1.rate - rates.gamma1).abs() / rates.gamma1;

    // Γ₂ from the pure-dephasing model (f₂ = 0); expected 2 f₁² g T = 20.
    let qubit2 = QubitParams::new(5.0, 1.0, 0.0).unwrap();
    let gamma2 = DecayRates::analytic(&qubit2, &shifts).unwrap().gamma2;
    let gen2 = redfield_generator(&qubit2, &bath, &shifts).unwrap();
    let t_end = 3.0 / gamma2;
    let times: Vec<f64> = (1..=80).map(|k| k as f64 * t_end / 80.0).collect();
    let traj2 = propagate(&gen2, &rho0, &times).unwrap();
    let fit2 = fit_decay_rate(&traj2, DecayChannel::Dephasing).unwrap();
    let err2 = (fit2.rate - 20.0).abs() / 20.0;

    let ok = err1 <= 0.01 && (gamma2 - 20.0).abs() <= 1e-12 && err2 <= 0.01;
    report(
        6,
        "decay-rates",
        ok,
        &format!(
            "gamma1 fit {:.6} vs {:.6} ({err1:.2e}); gamma2 fit {:.6} vs 20 ({err2:.2e})",
            fit1.rate, rates.gamma1, fit2.rate
        ),
    );
}

#[test]
fn criterion_07_quantum_map_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_lindblad = 0.0_f64;
    for _ in 0..200 {
        let bath = random_ohmic_bath(&mut rng);
        let omega0 = rng.gen_range(0.5..0.3 * bath.omega_c);
        let qubit = QubitParams::new(
            omega0,
            rng.gen_range(0.0..2.0),
            rng.gen_range(0.0..2.0),
        )
        .unwrap();
        let shifts = compute_shift_integrals(&bath, omega0, &cfg()).unwrap();
        let gen = lindblad_generator(&qubit, &bath, &shifts).unwrap();
        let rho_st = steady_state(&gen).unwrap();
        worst_lindblad = worst_lindblad.min(positivity_report(&rho_st).min_eigenvalue);

        let v = loop {
            let v = BlochVector {
                x: rng.gen_range(-1.0..1.0),
                y: rng.gen_range(-1.0..1.0),
                z: rng.gen_range(-1.0..1.0),
            };
            if v.norm() <= 1.0 {
                break v;
            }
        };
        let t_scale = 1.0 / (qubit.f2 * qubit.f2 * shifts.g0 + 1.0);
        let times: Vec<f64> = (1..=5).map(|k| k as f64 * t_scale).collect();
        let traj = propagate(&gen, &from_bloch(&v), &times).unwrap();
        for s in &traj.states {
            worst_lindblad = worst_lindblad.min(positivity_report(s).min_eigenvalue);
        }
    }

    let mut worst_redfield = f64::INFINITY;
    for k in 0..31 {
        let omega0 = 10.0 + k as f64;
        let qubit = QubitParams::new(omega0, 1.0, 1.0).unwrap();
        let shifts = compute_shift_integrals(&fig_bath(), omega0, &cfg()).unwrap();
        let rho = closed_form_steady_state(&qubit, &shifts).unwrap();
        worst_redfield = worst_redfield.min(positivity_report(&rho).min_eigenvalue);
    }

    let ok = worst_lindblad >= -1e-12 && worst_redfield < -1e-3;
    report(
        7,
        "quantum-map-property",
        ok,
        &format!(
            "lindblad min eig = {worst_lindblad:.2e} over 200 draws; \
             redfield min eig = {worst_redfield:.2e} over omega0 in [10, 40]"
        ),
    );
}

#[test]
fn criterion_08_regime_limits() {
    // super-ohmic: D0 = 0 makes the populations exactly Gibbs and
    // rho_pm = f1 f2 [n0 Δ- + (1+n0) Δ+] / [(ω0 + 2 f2² Δ)(1 + 2 n0)]
    let bath = BathParams::new(1.0, 2.0, 100.0, 10.0).unwrap();
    let qubit = QubitParams::new(5.0, 1.0, 1.0).unwrap();
    let shifts = compute_shift_integrals(&bath, 5.0, &cfg()).unwrap();
    let rho = closed_form_steady_state(&qubit, &shifts).unwrap();
    let gibbs = shifts.n0 / (1.0 + 2.0 * shifts.n0);
    let stark = qubit.omega0 + 2.0 * qubit.f2 * qubit.f2 * shifts.delta;
    let coh = qubit.f1 * qubit.f2
        * (shifts.n0 * shifts.delta_minus + (1.0 + shifts.n0) * shifts.delta_plus)
        / (stark * (1.0 + 2.0 * shifts.n0));
    let super_ok = (rho.rho_pp.re - gibbs).abs() <= 1e-8
        && (rho.rho_pm.re - coh).abs() <= 1e-8
        && rho.rho_pm.im.abs() <= 1e-12;

    let solved = steady_state(&redfield_generator(&qubit, &bath, &shifts).unwrap()).unwrap();
    let solve_ok = (solved.rho_pp - rho.rho_pp).norm() <= 1e-8
        && (solved.rho_pm - rho.rho_pm).norm() <= 1e-8;

    // sub-ohmic limit state from consistent limit values
    let sub = sub_ohmic_limit_state(-2.0, -2.5, 1.5).unwrap();
    let sub_ok = sub.rho_pm == Complex64::new(0.0, 0.0)
        && (sub.trace() - Complex64::new(1.0, 0.0)).norm() <= 1e-15
        && sub_ohmic_limit_state(-2.0, -2.0, 1.5).is_err();

    let ok = super_ok && solve_ok && sub_ok;
    report(
        8,
        "regime-limits",
        ok,
        &format!(
            "super-ohmic pop gap {:.2e}, coh gap {:.2e}; sub-ohmic checks {}",
            (rho.rho_pp.re - gibbs).abs(),
            (rho.rho_pm.re - coh).abs(),
            sub_ok
        ),
    );
}

#[test]
fn criterion_09_conservation_and_convergence() {
    let bath = fig_bath();
    let qubit = QubitParams::new(5.0, 1.0, 1.0).unwrap();
    let shifts = compute_shift_integrals(&bath, 5.0, &cfg()).unwrap();
    let rho0 = from_bloch(&BlochVector {
        x: 0.7,
        y: -0.2,
        z: 0.5,
    });

    let mut gap = 0.0_f64;
    let mut drift = 0.0_f64;
    for gen in [
        redfield_generator(&qubit, &bath, &shifts).unwrap(),
        lindblad_generator(&qubit, &bath, &shifts).unwrap(),
    ] {
        // The slowest relaxation rate is the generator's spectral gap; the
        // interference terms make it much smaller than min(Γ₁, Γ₂) here.
        let min_rate = spectral_gap(&gen).unwrap();
        let t_final = 20.0 / min_rate;
        let times: Vec<f64> = (1..=50).map(|k| k as f64 * t_final / 50.0).collect();
        // propagate() itself rejects trace drift > 1e-10
        let traj = propagate(&gen, &rho0, &times).unwrap();
        let rho_st = steady_state(&gen).unwrap();
        let last = traj.states.last().unwrap();
        gap = gap
            .max((last.rho_pp - rho_st.rho_pp).norm())
            .max((last.rho_pm - rho_st.rho_pm).norm());
        for s in &traj.states {
            drift = drift.max(s.trace_defect());
        }
    }
    let ok = drift <= 1e-10 && gap <= 1e-6;
    report(
        9,
        "conservation-and-convergence",
        ok,
        &format!("max trace drift = {drift:.2e}; final gap to steady state = {gap:.2e}"),
    );
}

#[test]
fn criterion_10_dephasing_shape() {
    let bath = fig_bath();
    let quad = cfg();
    let at_zero = dephasing_damping_integral(0.0, &bath, &quad).unwrap();

    // small-t: F(t) ≈ t²/2 ∫ dω e^{-ω/ωc} coth(ω/2T) ω²
    let coeff = adaptive_quad(
        &|w: f64| {
            if w <= 0.0 {
                return 0.0;
            }
            (-w / bath.omega_c).exp() / (w / (2.0 * bath.temperature)).tanh() * w * w / 2.0
        },
        0.0,
        quad.tail_cutoff_multiplier * bath.omega_c,
        &quad,
        &[],
    )
    .unwrap();
    let t = 1e-4;
    let small = dephasing_damping_integral(t, &bath, &quad).unwrap();
    let small_err = (small - coeff * t * t).abs() / (coeff * t * t);

    let hot = BathParams::new(1.0, 1.0, 100.0, 20.0).unwrap();
    let slope = |b: &BathParams| {
        let f1 = dephasing_damping_integral(10.0, b, &quad).unwrap();
        let f2 = dephasing_damping_integral(20.0, b, &quad).unwrap();
        (f2 - f1) / 10.0
    };
    let ratio = slope(&hot) / slope(&bath);
    let ratio_err = (ratio - 2.0).abs() / 2.0;

    let ok = at_zero == 0.0 && small_err <= 0.05 && ratio_err <= 0.02;
    report(
        10,
        "dephasing-shape",
        ok,
        &format!(
            "F(0) = {at_zero}; small-t relative error = {small_err:.2e}; \
             slope ratio = {ratio:.4} (err {ratio_err:.2e})"
        ),
    );
}
