//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use num_complex::Complex64;
use photonic_core::physics::{format_significant, max_parity_weight, pi_phase_time};
use photonic_core::rng::seeded;
use photonic_core::{
    compile, feasibility_report, fidelity, pauli, run_parity_check, run_parity_check_dense,
    AtomReadout, CavityParams, CorrectionPolicy, DeviceLimits, Engine, Execution, ParityCheck,
    PhotonTrain, Polarization, RunConfig, StabilizerTableau, StateVector, TargetState,
};
use rand::Rng;

const TOL: f64 = 1e-10;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bell_factory() -> Outcome {
    let schedule = compile(&TargetState::bell(), DeviceLimits { max_weight: 2 }, 1)
        .map_err(|e| e.to_string())?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let even =
        StateVector::from_amplitudes(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]).unwrap();
    let odd = StateVector::from_amplitudes(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-s, 0.0)])
        .unwrap();
    let runs = 200;
    let mut ones = 0;
    for seed in 0..runs {
        let mut config = RunConfig::new(device_for(2), 1.5, seed);
        config.engine = Engine::Both;
        config.policy = CorrectionPolicy::Frame;
        let mut rng = seeded(seed);
        let mut exec = Execution::new(&schedule, config).map_err(|e| e.to_string())?;
        let first = exec
            .step(&mut rng)
            .map_err(|e| e.to_string())?
            .unwrap()
            .clone();
        ensure(first.operator == pauli("+XX"), || {
            format!("first check is {}", first.operator)
        })?;
        let photons = exec
            .dense()
            .unwrap()
            .drop_last_qubit()
            .map_err(|e| e.to_string())?;
        let expected = if first.atom == 0 { &even } else { &odd };
        let f = fidelity(expected, &photons).unwrap();
        ensure(f >= 1.0 - TOL, || {
            format!(
                "seed {seed}: uncorrected fidelity {f} for atom {}",
                first.atom
            )
        })?;
        ones += usize::from(first.atom);
        let (report, _) = exec.finish(&mut rng).map_err(|e| e.to_string())?;
        ensure(report.verified(), || {
            format!("seed {seed}: run did not verify")
        })?;
    }
    let freq = ones as f64 / runs as f64;
    ensure((freq - 0.5).abs() <= 0.07, || {
        format!("odd-parity frequency {freq}")
    })?;
    Ok(format!(
        "{runs} seeds verified, odd-parity frequency {freq:.3}"
    ))
}

fn parity_projection() -> Outcome {
    let mut rng = seeded(2);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let n = 2 + i % 5;
        let amps = random_amplitudes(&mut rng, n);
        let dim = 1usize << n;
        let mask = dim - 1;
        let mut full = amps.clone();
        full.extend(vec![c(0.0, 0.0); dim]);
        let base = StateVector::from_amplitudes(full).unwrap();
        let mut passed = base.clone();
        for q in 0..n {
            passed.module_pass(q).unwrap();
        }
        for (outcome, sign) in [(0u8, 1.0), (1u8, -1.0)] {
            // (I ± X^{⊗n})/2 applied directly: X^{⊗n} flips every bit.
            let projected: Vec<Complex64> = (0..dim)
                .map(|k| (amps[k] + amps[k ^ mask] * sign) * 0.5)
                .collect();
            let norm2: f64 = projected.iter().map(|a| a.norm_sqr()).sum();
            let mut branch = passed.clone();
            let p = branch
                .project_qubit(n, outcome)
                .map_err(|e| e.to_string())?;
            worst = worst.max((p - norm2).abs());
            ensure((p - norm2).abs() <= TOL, || {
                format!("n={n}: branch probability {p} vs {norm2}")
            })?;
            if norm2 > 1e-12 {
                let photons = branch.drop_last_qubit().unwrap();
                let expected = StateVector::from_amplitudes(projected).unwrap();
                let f = fidelity(&expected, &photons).unwrap();
                ensure(f >= 1.0 - TOL, || format!("n={n}: projected fidelity {f}"))?;
                for (a, b) in photons.amplitudes().iter().zip(expected.amplitudes()) {
                    ensure((a - b).norm() <= 1e-9, || {
                        format!("n={n}: amplitude mismatch")
                    })?;
                }
            }
        }
    }
    Ok(format!("100 states, max probability error {worst:.1e}"))
}

fn engine_equivalence() -> Outcome {
    let mut rng = seeded(3);
    for case in 0..200 {
        let n = rng.random_range(1..=8);
        let k = rng.random_range(1..=20);
        let mut t = StabilizerTableau::all_horizontal(n).unwrap();
        let mut sv = StateVector::from_train(&vec![Polarization::H; n], Some(0)).unwrap();
        let train = PhotonTrain::new(n, 1.5).unwrap();
        let mut device = device_for(n);
        let mut checks = 0;
        while checks < k {
            let p = random_pauli(&mut rng, n, true);
            if p.is_identity() {
                continue;
            }
            checks += 1;
            let check = ParityCheck::new(p).unwrap();
            let a = run_parity_check(&mut t, &train, &mut device, &check, &mut rng)
                .map_err(|e| e.to_string())?;
            run_parity_check_dense::<rand_chacha::ChaCha8Rng>(
                &mut sv,
                &train,
                &mut device,
                &check,
                AtomReadout::Forced(a.atom),
            )
            .map_err(|e| format!("case {case}: {e}"))?;
            if let Some(c) = &a.correction {
                t.apply_pauli(c).unwrap();
                sv.apply_pauli(c).unwrap();
            }
        }
        for g in t.stabilizers() {
            let e = sv.expectation(g).unwrap();
            ensure((e - 1.0).abs() <= TOL, || {
                format!("case {case}: <{g}> = {e}")
            })?;
        }
    }
    Ok("200 random check sequences".into())
}

fn arbitrary_targets() -> Outcome {
    let mut rng = seeded(4);
    let seeds_per_target = 5;
    for case in 0..200 {
        let n = rng.random_range(1..=8);
        let target = TargetState::explicit(random_stabilizer_state(&mut rng, n, 5 * n))
            .map_err(|e| e.to_string())?;
        for _ in 0..seeds_per_target {
            let seed = rng.random();
            let (report, _) = run_target(
                &target,
                8,
                2,
                Engine::Tableau,
                CorrectionPolicy::Eager,
                seed,
            )
            .map_err(|e| format!("case {case}: {e}"))?;
            ensure(report.verdict.tableau_equal == Some(true), || {
                format!("case {case}, seed {seed}: group differs")
            })?;
        }
    }
    Ok(format!("200 targets x {seeds_per_target} seeds"))
}

fn feasibility_table() -> Outcome {
    let rows = [
        ("Cs", 34.0, 2.6, "0.29", 1),
        ("Rb", 366.0, 6.3, "0.027", 6),
        ("NV", 1.0e4, 83.0, "0.00099", 12),
    ];
    let mut parts = Vec::new();
    for (label, beta, gamma, t_expected, pm) in rows {
        let t = pi_phase_time(beta, 0.1).map_err(|e| e.to_string())?;
        let shown = format_significant(t, 2);
        ensure(shown == t_expected, || {
            format!("{label}: t = {shown} us, expected {t_expected}")
        })?;
        let got = max_parity_weight(t, gamma);
        ensure(got == pm, || format!("{label}: P_m = {got}, expected {pm}"))?;
        let report = feasibility_report(&CavityParams::preset(label).unwrap()).unwrap();
        ensure(report.max_parity_weight == pm, || {
            format!("{label}: preset P_m {}", report.max_parity_weight)
        })?;
        parts.push(format!("{label} {shown}us P_m={got}"));
    }
    Ok(parts.join(", "))
}

fn parity_weights() -> Outcome {
    let limits = DeviceLimits { max_weight: 64 };
    let pm = |t: TargetState| {
        compile(&t, limits, 1)
            .map(|s| s.max_weight())
            .map_err(|e| e.to_string())
    };
    for (w, h) in [(3, 3), (3, 4), (4, 3), (5, 5), (6, 4)] {
        let got = pm(TargetState::grid_cluster(w, h).unwrap())?;
        ensure(got == 5, || format!("grid_cluster({w},{h}): P_m = {got}"))?;
    }
    for n in 3..=20 {
        let got = pm(TargetState::linear_cluster(n).unwrap())?;
        ensure(got == 3, || format!("linear_cluster({n}): P_m = {got}"))?;
    }
    for n in 1..=20 {
        let got = pm(TargetState::ghz(n).unwrap())?;
        ensure(got == n, || format!("ghz({n}): P_m = {got}"))?;
    }
    Ok("grid 5, linear 3, ghz(n) n".into())
}

fn fusion() -> Outcome {
    let ghz10 = TargetState::ghz(10).unwrap();
    let schedule = compile(&ghz10, DeviceLimits { max_weight: 6 }, 2).map_err(|e| e.to_string())?;
    ensure(!schedule.fusions().is_empty(), || "no fusion step".into())?;
    for seed in 0..20 {
        let (report, _) = run_target(&ghz10, 6, 2, Engine::Both, CorrectionPolicy::Eager, seed)
            .map_err(|e| e.to_string())?;
        ensure(report.verdict.tableau_equal == Some(true), || {
            format!("ghz(10) seed {seed}: group differs")
        })?;
        ensure(report.verified(), || {
            format!("ghz(10) seed {seed}: dense check failed")
        })?;
    }
    for (n, half) in [(4, 2), (6, 3)] {
        let target = TargetState::ghz(n).unwrap();
        let schedule =
            compile(&target, DeviceLimits { max_weight: half }, 1).map_err(|e| e.to_string())?;
        ensure(schedule.fusions().len() == 1, || {
            format!("ghz({n}) at weight {half}: fusions")
        })?;
        for seed in 0..50 {
            let (report, _) = run_target(
                &target,
                half,
                1,
                Engine::Both,
                CorrectionPolicy::Eager,
                seed,
            )
            .map_err(|e| e.to_string())?;
            let f = report.verdict.fidelity.unwrap_or(0.0);
            ensure(f >= 1.0 - TOL, || {
                format!("ghz({half}) x ghz({half}) seed {seed}: fidelity {f}")
            })?;
        }
    }
    Ok("ghz(10) at weight 6, ghz(2)+ghz(2), ghz(3)+ghz(3)".into())
}

fn policy_equivalence() -> Outcome {
    let mut rng = seeded(8);
    for case in 0..100 {
        let n = rng.random_range(2..=8);
        let target = TargetState::explicit(random_stabilizer_state(&mut rng, n, 5 * n))
            .map_err(|e| e.to_string())?;
        let seed = rng.random();
        let run = |policy| {
            run_target(&target, 8, 2, Engine::Tableau, policy, seed).map_err(|e| e.to_string())
        };
        let (eager, _) = run(CorrectionPolicy::Eager)?;
        let (frame, _) = run(CorrectionPolicy::Frame)?;
        ensure(eager.verdict.tableau_equal == Some(true), || {
            format!("case {case}: eager differs")
        })?;
        ensure(frame.verdict.tableau_equal == Some(true), || {
            format!("case {case}: frame differs")
        })?;
        ensure(eager.eigenvalues() == frame.eigenvalues(), || {
            format!("case {case}: eigenvalues differ")
        })?;
    }
    Ok("100 random schedules".into())
}

fn main() -> ExitCode {
    type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("Bell factory", Some(Duration::from_secs(5)), bell_factory),
        (
            "parity-projection law",
            Some(Duration::from_secs(30)),
            parity_projection,
        ),
        (
            "engine equivalence",
            Some(Duration::from_secs(60)),
            engine_equivalence,
        ),
        ("arbitrary stabilizer targets", None, arbitrary_targets),
        ("cavity feasibility table", None, feasibility_table),
        ("Parity-weight facts", None, parity_weights),
        ("GHZ fusion", None, fusion),
        ("correction-policy equivalence", None, policy_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(limit)) if elapsed > limit => {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!(
                "[PASS] criterion {}: {name} ({detail}; {elapsed:.2?})",
                i + 1
            ),
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name}: {why} ({elapsed:.2?})", i + 1);
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 8 criteria failed");
        ExitCode::FAILURE
    }
}
