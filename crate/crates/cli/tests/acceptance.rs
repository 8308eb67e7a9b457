//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use adiashort::commands::TRACE_COLUMNS;
use adiashort_core::coupledwave::{self, WaveParameters};
use adiashort_core::dynamics::{self, HamiltonianSample, StateVector};
use adiashort_core::experiments;
use adiashort_core::profiles::{self, CouplingSchedule, DetuningMode, PlainGaussianParams, RescalingParams};
use adiashort_core::{IntegratorSettings, SweepSpec};
use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn base() -> PlainGaussianParams<f64> {
    PlainGaussianParams::reference()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let settings = IntegratorSettings::default();
    let mut worst = 0.0f64;
    for a in [2.0, 5.0, 10.0] {
        for delta in [0.0, base().kappa0] {
            let dev = experiments::rescaling_deviation(base(), a, delta, &settings).map_err(err)?;
            worst = worst.max(dev);
        }
    }
    let elapsed = start.elapsed();
    check(
        worst <= 1e-6 && elapsed < Duration::from_secs(5),
        format!("shortcut equivalence: max deviation {worst:.3e} (<= 1e-6), {:.2} s (< 5 s)", elapsed.as_secs_f64()),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut mins = Vec::new();
    for mode in [DetuningMode::Rescaled, DetuningMode::Constant] {
        let spec = SweepSpec { detuning_mode: mode, ..SweepSpec::reference() };
        let sweep = experiments::sweep_contraction(&spec).map_err(err)?;
        if sweep.rows.len() != spec.a_values.len() * spec.delta_values.len() {
            return Err(format!("sweep returned {} rows", sweep.rows.len()));
        }
        mins.push(sweep.min_fidelity());
    }
    let elapsed = start.elapsed();
    check(
        mins.iter().all(|&f| f > 0.995) && elapsed < Duration::from_secs(30),
        format!(
            "approximated-schedule sweep a in 1..10, delta in {{0, k0}}: min F {:.6} (rescaled delta), {:.6} (constant delta), > 0.995, {:.2} s (< 30 s)",
            mins[0],
            mins[1],
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_3() -> Outcome {
    let sched = CouplingSchedule::time_rescaled(base(), 10.0, 0.0).map_err(err)?;
    let len = sched.domain_length();
    let res = dynamics::propagate(StateVector::basis(0), &sched, 0.0, &IntegratorSettings::default()).map_err(err)?;
    let f = dynamics::fidelity(&res);
    let reached = res.z_grid.iter().zip(&res.populations).find(|(_, p)| p[2] >= 0.99).map(|(z, _)| *z);
    check(
        len == 8.0 && f >= 0.99,
        format!("contracted length: domain {len} mm (== 8), F {f:.6} (>= 0.99), |c3|^2 >= 0.99 first at z = {reached:?} mm"),
    )
}

fn criterion_4() -> Outcome {
    let b = base();
    let n = 200_000;
    let mut worst_rate = 0.0f64;
    let mut details = Vec::new();
    for a in [2.0, 5.0, 10.0] {
        let rescale = RescalingParams::new(a, b.length).map_err(err)?;
        let sched = CouplingSchedule::time_rescaled(b, a, 0.0).map_err(err)?;
        let len = sched.domain_length();
        let (mut max_rate, mut max_k1) = (f64::MIN, f64::MIN);
        for k in 0..=n {
            let z = len * k as f64 / n as f64;
            max_rate = max_rate.max(profiles::rescaling_rate(z, &rescale).map_err(err)?);
            max_k1 = max_k1.max(profiles::coupling_pair(z, &sched).map_err(err)?.0);
        }
        let top = (2.0 * a - 1.0) * b.kappa0;
        let floor = top * (-(b.d / b.s).powi(2)).exp() * 0.9;
        worst_rate = worst_rate.max((max_rate - (2.0 * a - 1.0)).abs());
        if !(floor..=top).contains(&max_k1) {
            return Err(format!("a = {a}: max k1' {max_k1:.6} outside [{floor:.6}, {top:.6}]"));
        }
        details.push(format!("a={a}: max k1' {max_k1:.4} in [{floor:.4}, {top:.4}]"));
    }
    check(
        worst_rate <= 1e-9,
        format!("peak amplification: |max f' - (2a-1)| {worst_rate:.2e} (<= 1e-9); {}", details.join("; ")),
    )
}

fn criterion_5() -> Outcome {
    let sched = CouplingSchedule::plain(base(), 0.0).map_err(err)?;
    let res = dynamics::propagate(StateVector::basis(0), &sched, 0.0, &IntegratorSettings::default()).map_err(err)?;
    let f = dynamics::fidelity(&res);
    let leak = dynamics::max_intermediate_population(&res);
    let by65 = res.z_grid.iter().zip(&res.populations).filter(|(z, _)| **z <= 65.0).map(|(_, p)| p[2]).fold(0.0, f64::max);
    check(
        f >= 0.99 && leak < 0.05 && by65 >= 0.95,
        format!("plain transfer: F {f:.6} (>= 0.99), max |c2|^2 {leak:.4} (< 0.05), max |c3|^2 up to 65 mm {by65:.4} (>= 0.95)"),
    )
}

fn criterion_6() -> Outcome {
    let b = base();
    let mut worst = 0.0f64;
    let mut count = 0;
    for delta in [0.0, b.kappa0] {
        for sched in [
            CouplingSchedule::plain(b, delta).map_err(err)?,
            CouplingSchedule::time_rescaled(b, 5.0, delta).map_err(err)?,
            CouplingSchedule::gaussian_approx(b, 5.0, delta).map_err(err)?,
        ] {
            let len = sched.domain_length();
            // stratified samples with a deterministic golden-ratio jitter
            for i in 0..100 {
                let u = (i as f64 + (i as f64 * 0.618_033_988_749_895).fract()) / 100.0;
                let z = len * u;
                let h = dynamics::hamiltonian_at(z, &sched, 0.0).map_err(err)?;
                let n0 = dynamics::dark_state(z, &sched).map_err(err)?;
                worst = worst.max(h.apply(&n0).norm_sqr().sqrt());
                count += 1;
            }
        }
    }
    check(worst < 1e-12, format!("dark-state identity: max ||H n0|| {worst:.2e} (< 1e-12) over {count} samples"))
}

fn exact_propagator(h: &HamiltonianSample<f64>, z: f64, psi0: &StateVector<f64>) -> StateVector<f64> {
    let eig = SymmetricEigen::new(Matrix3::from_fn(|i, j| h.entries[i][j]));
    let mut out = StateVector::zero();
    for k in 0..3 {
        let v: Vector3<f64> = eig.eigenvectors.column(k).into();
        let overlap: Complex64 = (0..3).map(|i| psi0.0[i] * v[i]).sum();
        let phase = Complex64::from_polar(1.0, -eig.eigenvalues[k] * z);
        for i in 0..3 {
            out.0[i] += phase * overlap * v[i];
        }
    }
    out
}

fn criterion_7() -> Outcome {
    let b = base();
    let settings = IntegratorSettings::default();
    let psi0 = StateVector::basis(0);

    let mut drift = 0.0f64;
    for delta in [0.0, b.kappa0] {
        for a in [2.0, 5.0, 10.0] {
            for sched in [
                CouplingSchedule::plain(b, delta).map_err(err)?,
                CouplingSchedule::time_rescaled(b, a, delta).map_err(err)?,
                CouplingSchedule::gaussian_approx(b, a, delta).map_err(err)?,
            ] {
                let res = dynamics::propagate(psi0, &sched, 0.0, &settings).map_err(err)?;
                drift = drift.max(res.max_norm_drift());
            }
        }
    }

    let frozen = CouplingSchedule::plain(b, b.kappa0).map_err(err)?;
    let h = dynamics::hamiltonian_at(b.length / 2.0, &frozen, 0.0).map_err(err)?;
    let (zs, states) = dynamics::integrate(psi0, b.length, &settings, |_| Ok(h)).map_err(err)?;
    let oracle = zs.iter().zip(&states).map(|(z, s)| s.distance(&exact_propagator(&h, *z, &psi0))).fold(0.0, f64::max);

    let exact = exact_propagator(&h, b.length, &psi0);
    let error_at = |n: usize| -> Result<f64, String> {
        let s = IntegratorSettings::new(n, n).map_err(err)?;
        let (_, states) = dynamics::integrate(psi0, b.length, &s, |_| Ok(h)).map_err(err)?;
        Ok(states.last().expect("final state").distance(&exact))
    };
    let ratio = error_at(400)? / error_at(800)?;

    check(
        drift <= 1e-9 && oracle <= 1e-9 && (8.0..=32.0).contains(&ratio),
        format!(
            "numerical integrity: norm drift {drift:.2e} (<= 1e-9), eigen oracle {oracle:.2e} (<= 1e-9), step-halving ratio {ratio:.2} (in [8, 32])"
        ),
    )
}

fn criterion_8() -> Outcome {
    let input = coupledwave::reference_input();
    let settings = IntegratorSettings::default();
    let mut mr = 0.0f64;
    for kappa0 in [1.0, 10.0] {
        let sched = CouplingSchedule::plain(PlainGaussianParams::with_length(80.0, kappa0), 0.0).map_err(err)?;
        let params = coupledwave::matched_parameters(&sched, &WaveParameters::reference(), &input).map_err(err)?;
        let traj = coupledwave::propagate_waves(input, &params, &settings).map_err(err)?;
        let d = traj.max_invariant_drift(&params);
        mr = mr.max(d[0]).max(d[1]);
    }
    let compare = |kappa0: f64| {
        let sched = CouplingSchedule::plain(PlainGaussianParams::with_length(80.0, kappa0), 0.0).map_err(err)?;
        coupledwave::compare_models(&sched, &WaveParameters::reference(), &input, &settings).map_err(err)
    };
    let strong = compare(10.0)?;
    let weak = compare(0.1)?;
    check(
        mr <= 1e-8
            && strong.wave_conversion >= 0.99
            && strong.level_conversion >= 0.99
            && weak.wave_conversion < 0.5
            && weak.level_conversion < 0.5,
        format!(
            "coupled-wave oracle: Manley-Rowe drift {mr:.2e} (<= 1e-8); k0=10 conversion wave {:.4} / levels {:.4} (>= 0.99); k0=0.1 wave {:.4} / levels {:.4} (< 0.5)",
            strong.wave_conversion, strong.level_conversion, weak.wave_conversion, weak.level_conversion
        ),
    )
}

fn criterion_9() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_adiashort");
    let golden = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/propagate_default.csv");
    let expected = std::fs::read(&golden).map_err(err)?;
    let run = |args: &[&str]| Command::new(bin).args(args).output().map_err(err);

    let first = run(&["propagate"])?;
    let second = run(&["propagate"])?;
    let header_ok = String::from_utf8_lossy(&first.stdout).lines().next() == Some(TRACE_COLUMNS.join(",").as_str());
    let identical = first.stdout == second.stdout && first.stdout == expected;

    let codes = [
        (run(&["profile"])?.status.code(), Some(0)),
        (run(&["propagate", "--a", "0.5"])?.status.code(), Some(2)),
        (run(&["no-such-command"])?.status.code(), Some(2)),
        (run(&["profile", "--out", "/nonexistent-dir/out"])?.status.code(), Some(1)),
    ];
    let codes_ok = codes.iter().all(|(got, want)| got == want);
    check(
        first.status.success() && header_ok && identical && codes_ok,
        format!(
            "CLI determinism: golden CSV byte-identical across runs: {identical}; exit codes (0, 2, 2, 1): {:?}",
            codes.iter().map(|(c, _)| c.unwrap_or(-1)).collect::<Vec<_>>()
        ),
    )
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        match run() {
            Ok(detail) => println!("[PASS] criterion {n}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {n}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
