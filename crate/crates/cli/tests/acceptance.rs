//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::fs;
use std::process::Command as Process;

use jamnet_core::asym::*;
use jamnet_core::bounds::*;
use jamnet_core::model::*;
use jamnet_core::simulate::*;
use jamnet_core::symmetric::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

#[derive(Debug, Clone, Copy)]
struct SymConfig {
    m: usize,
    k: usize,
    alpha: f64,
    beta: f64,
    power: f64,
}

/// 100 configurations with M <= 10, K < M, gains in [0.2, 3], P in [0.1, 5].
fn symmetric_configs() -> Vec<SymConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_101);
    (0..100)
        .map(|_| {
            let m = rng.random_range(2..=10);
            SymConfig {
                m,
                k: rng.random_range(1..m),
                alpha: rng.random_range(0.2..=3.0),
                beta: rng.random_range(0.2..=3.0),
                power: rng.random_range(0.1..=5.0),
            }
        })
        .collect()
}

fn criterion_1() -> Verdict {
    let mut worst = 0.0f64;
    for c in symmetric_configs() {
        let s = make_symmetric(c.m, c.k, c.alpha, c.beta, c.power, Setting::SymI).unwrap();
        let r = solve_setting1(&s).unwrap();
        let inputs = SymmetricCostInputs::coordinated(c.m as f64, c.k, c.alpha, c.beta, c.power);
        let direct = direct_mmse_cost(&s, &r.profile).unwrap();
        worst = worst.max((cost_setting1(&inputs) - direct).abs());
    }
    verdict(
        worst < 1e-12,
        format!("closed form vs direct MMSE, max |delta| = {worst:e} over 100 configs (tol 1e-12)"),
    )
}

fn criterion_2() -> Verdict {
    let mut printed_fail = 0;
    let mut oracle_fail = 0;
    let mut example = None;
    for c in symmetric_configs() {
        let coordinated = cost_setting1(&SymmetricCostInputs::coordinated(
            c.m as f64, c.k, c.alpha, c.beta, c.power,
        ));
        let s = make_symmetric(c.m, c.k, c.alpha, c.beta, c.power, Setting::SymII).unwrap();
        let r = solve_setting2(&s).unwrap();
        let printed = cost_setting2(c.m, c.k, c.alpha, c.beta, c.power).unwrap();
        let ok_printed = coordinated < printed;
        let ok_oracle = coordinated < r.oracle_cost;
        printed_fail += usize::from(!ok_printed);
        oracle_fail += usize::from(!ok_oracle);
        if example.is_none() && !(ok_printed && ok_oracle) {
            example = Some(format!(
                "{c:?}: randomized {coordinated:.6}, printed {printed:.6}, mirror oracle {:.6}",
                r.oracle_cost
            ));
        }
    }
    verdict(
        printed_fail == 0 && oracle_fail == 0,
        format!(
            "randomized cost below deterministic cost: violated against printed form on {printed_fail}/100, \
             against mirror oracle on {oracle_fail}/100{}",
            example
                .map(|e| format!("; first counterexample {e}"))
                .unwrap_or_default()
        ),
    )
}

fn criterion_3() -> Verdict {
    let mut bad = 0;
    let mut strict = 0;
    for c in symmetric_configs() {
        let (coordinated, independent) = coordination_gap(c.m, c.k, c.alpha, c.beta, c.power);
        let ok = if c.k >= 2 {
            strict += 1;
            coordinated > independent
        } else {
            coordinated >= independent
        };
        bad += usize::from(!ok);
    }
    verdict(
        bad == 0,
        format!("coordinated >= independent adversary cost, {bad} violations ({strict} configs checked strictly)"),
    )
}

fn sensor(alpha: f64, beta: f64) -> SensorParams<f64> {
    SensorParams::new(alpha, beta, 0.0)
}

fn monte_carlo_cases() -> Vec<(&'static str, NetworkScenario, StrategyProfile<f64>)> {
    let mut out = Vec::new();
    let with_decoder = |s: &NetworkScenario, p: StrategyProfile<f64>| with_optimal_decoder(s, p).unwrap();

    let s = make_symmetric(2, 1, 1.0, 1.0, 1.0, Setting::SymI).unwrap();
    let p = solve_setting1(&s).unwrap().profile;
    let mut det = p.clone();
    det.randomized = false;
    out.push(("SymI(2,1) randomized, coordinated noise", s.clone(), p));
    out.push((
        "SymI(2,1) deterministic, coordinated noise",
        s.clone(),
        with_decoder(&s, det),
    ));

    let s = make_symmetric(3, 2, 0.8, 1.5, 2.0, Setting::SymI).unwrap();
    let p = StrategyProfile {
        transmit_coeffs: vec![(2.0f64 / 3.25).sqrt(); 3],
        randomized: true,
        adversary: AdversaryStrategy::IndependentNoise {
            variances: vec![2.0, 2.0],
        },
        decoder_gain: 0.0,
    };
    out.push((
        "SymI(3,2) randomized, independent noise",
        s.clone(),
        with_decoder(&s, p),
    ));

    let s = make_symmetric(5, 3, 0.5, 2.0, 3.0, Setting::SymI).unwrap();
    let mut p = solve_setting1(&s).unwrap().profile;
    p.randomized = false;
    out.push((
        "SymI(5,3) deterministic, coordinated noise",
        s.clone(),
        with_decoder(&s, p),
    ));

    let s = make_symmetric(3, 1, 1.0, 1.0, 1.0, Setting::SymII).unwrap();
    let p = solve_setting2(&s).unwrap().profile;
    out.push(("SymII(3,1) deterministic mirror", s.clone(), with_decoder(&s, p)));

    let s = make_symmetric(4, 2, 0.7, 1.5, 1.2, Setting::SymII).unwrap();
    let mut p = solve_setting2(&s).unwrap().profile;
    p.randomized = true;
    out.push(("SymII(4,2) randomized against mirror", s.clone(), with_decoder(&s, p)));

    let s = make_symmetric_partial(4, 2, 1.0, 1.0, 1.0, Setting::SymIII, 1.0, 0.5).unwrap();
    let p = solve_setting3(&s).unwrap().report().profile.clone();
    out.push((
        "SymIII(4,2) partially coordinated noise",
        s.clone(),
        with_decoder(&s, p),
    ));

    let s = make_asymmetric(
        vec![sensor(1.0, 2.0), sensor(0.5, 1.0), sensor(2.0, 0.3)],
        vec![sensor(0.8, 1.0), sensor(1.4, 0.5)],
        3.0,
        1.2,
        Setting::AsymI,
    )
    .unwrap();
    let p = solve_theorem4(&s).unwrap().profile;
    out.push(("AsymI(3,2) coordinated allocation", s.clone(), p));

    let s = make_asymmetric(
        vec![sensor(1.2, 0.7), sensor(0.4, 2.0)],
        vec![sensor(0.9, 1.3)],
        2.5,
        0.6,
        Setting::AsymII,
    )
    .unwrap();
    let p = solve_theorem5(&s, &SolverConfig::default()).unwrap().profile;
    let mut rand_p = p.clone();
    rand_p.randomized = true;
    out.push(("AsymII(2,1) uncoordinated equilibrium", s.clone(), p));
    out.push((
        "AsymII(2,1) randomized against mirror",
        s.clone(),
        with_decoder(&s, rand_p),
    ));
    out
}

fn criterion_4() -> Verdict {
    const SAMPLES: usize = 1_000_000;
    let mut failures = Vec::new();
    let mut worst_z = 0.0f64;
    let cases = monte_carlo_cases();
    for (i, (name, s, p)) in cases.iter().enumerate() {
        let seed = 1000 + i as u64;
        let exact = direct_mmse_cost(s, p).unwrap();
        let a = run_monte_carlo_chunked(s, p, SAMPLES, seed, 1).unwrap();
        let b = run_monte_carlo_chunked(s, p, SAMPLES, seed, 4).unwrap();
        let z = (a.empirical_mse - exact).abs() / a.standard_error;
        worst_z = worst_z.max(z);
        if z > 3.0 {
            failures.push(format!("{name}: z = {z:.2}"));
        }
        if a.empirical_mse.to_bits() != b.empirical_mse.to_bits()
            || a.standard_error.to_bits() != b.standard_error.to_bits()
        {
            failures.push(format!("{name}: rerun not bit-identical"));
        }
    }
    verdict(
        failures.is_empty() && cases.len() == 10,
        format!(
            "{} scenarios at 1e6 samples, worst |emp - exact| / SE = {worst_z:.2}, reruns bit-identical{}",
            cases.len(),
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failures: {failures:?}")
            }
        ),
    )
}

fn criterion_5() -> Verdict {
    let s = make_symmetric(2, 1, 1.0f64, 1.0, 1.0, Setting::SymI).unwrap();
    let p = solve_setting1(&s).unwrap().profile;
    let saddle = best_response_adversary_search(&s, &p, &GridConfig::default()).unwrap();
    let mut det = p.clone();
    det.randomized = false;
    let exploited = best_response_adversary_search(&s, &det, &GridConfig::default()).unwrap();
    let ok = (saddle.base_cost - 0.6).abs() < 1e-12
        && saddle.best_deviation_cost <= 0.6 + 1e-3
        && exploited.best_deviation_cost > 0.6 + 1e-2;
    verdict(
        ok,
        format!(
            "base {:.12}, best deviation vs randomized {:.6} (<= 0.601), vs deterministic {:.6} (> 0.61)",
            saddle.base_cost, saddle.best_deviation_cost, exploited.best_deviation_cost
        ),
    )
}

fn criterion_6() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_lambda = 0.0f64;
    let mut worst_power = 0.0f64;
    for _ in 0..100 {
        let m = rng.random_range(1..=6);
        let k = rng.random_range(1..=4);
        let mut draw = |n: usize| -> Vec<SensorParams<f64>> {
            (0..n)
                .map(|_| sensor(rng.random_range(0.2..=3.0), rng.random_range(0.2..=3.0)))
                .collect()
        };
        let (tx, adv) = (draw(m), draw(k));
        let pt = rng.random_range(0.1..=5.0);
        let pa = rng.random_range(0.0..=5.0);
        let s = make_asymmetric(tx, adv, pt, pa, Setting::AsymI).unwrap();
        let sol = Theorem4Solution::solve(&s).unwrap();
        worst_lambda = worst_lambda.max((sol.lambda1 * (1.0 + sol.attacker_received_power) - pt).abs());
        let used: f64 = sol
            .coeffs
            .iter()
            .zip(&s.transmitters)
            .map(|(c, q)| c * c * q.observation_energy())
            .sum();
        worst_power = worst_power.max((used - pt).abs());
    }
    let single = |pa: f64| {
        let s = make_asymmetric(vec![sensor(1.0, 1.0)], vec![sensor(1.0, 1.0)], 1.0, pa, Setting::AsymI).unwrap();
        let r = solve_theorem4(&s).unwrap();
        let c2 = r.profile.transmit_coeffs[0].powi(2);
        (c2, r.oracle_cost, r.closed_form_cost.unwrap())
    };
    let (c2_0, cost_0, closed_0) = single(0.0);
    let (c2_1, cost_1, _) = single(1.0);
    let ok = worst_lambda < 1e-12
        && worst_power < 1e-9
        && (c2_0 - 0.5).abs() < 1e-12
        && (c2_1 - 0.5).abs() < 1e-12
        && (cost_0 - 0.75).abs() < 1e-12
        && (cost_1 - 2.5 / 3.0).abs() < 1e-12;
    verdict(
        ok,
        format!(
            "max |l1(1+P_A') - P_T| = {worst_lambda:e}, max power gap = {worst_power:e}; single sensor c^2 = {c2_0}, \
             cost {cost_0} (P_A=0) and {cost_1:.12} (P_A'=1); reported closed form {closed_0:.12} vs oracle {cost_0} \
             (delta {:.6}, reported only)",
            closed_0 - cost_0
        ),
    )
}

fn asym_doc(s: &NetworkScenario) -> String {
    let list = |v: &[SensorParams<f64>]| {
        let items: Vec<String> = v
            .iter()
            .map(|p| format!(r#"{{"alpha": {:?}, "beta": {:?}, "power": 0.0}}"#, p.alpha, p.beta))
            .collect();
        format!("[{}]", items.join(", "))
    };
    format!(
        r#"{{"setting": "AsymII", "transmitters": {}, "adversaries": {}, "sum_power_transmit": {:?}, "sum_power_attack": {:?}}}"#,
        list(&s.transmitters),
        list(&s.adversaries),
        s.sum_power_transmit.unwrap(),
        s.sum_power_attack.unwrap()
    )
}

/// Runs the binary on `s` and checks for exit code 2 with residual diagnostics.
fn failure_is_reported(s: &NetworkScenario) -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = dir.path().join("config.json");
    fs::write(&cfg, asym_doc(s)).map_err(|e| e.to_string())?;
    let out = Process::new(env!("CARGO_BIN_EXE_jamnet"))
        .args(["solve-asym", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.code() != Some(2) {
        return Err(format!("exit code {:?}", out.status.code()));
    }
    let text = fs::read_to_string(dir.path().join("solve-asym.json")).map_err(|e| e.to_string())?;
    let report: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let names = report["residual_names"].as_array().map_or(0, Vec::len);
    if !report["residuals"].is_array() || names != residual_names(s.m(), s.k()).len() {
        return Err("missing residual diagnostics".into());
    }
    Ok(())
}

fn criterion_7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut converged = 0;
    let mut failed = 0;
    let mut failure_problems = Vec::new();
    let (mut worst_kkt, mut worst_ratio, mut worst_printed) = (0.0f64, 0.0f64, 0.0f64);
    let mut probe_failures = 0;
    let probes = ProbeConfig::default();
    while converged < 20 {
        let m = rng.random_range(1..=6);
        let k = rng.random_range(1..=4);
        let mut draw = |n: usize| -> Vec<SensorParams<f64>> {
            (0..n)
                .map(|_| sensor(rng.random_range(0.2..=3.0), rng.random_range(0.2..=3.0)))
                .collect()
        };
        let (tx, adv) = (draw(m), draw(k));
        let pt = rng.random_range(0.1..=5.0);
        let pa = rng.random_range(0.01..=2.0);
        let s = make_asymmetric(tx, adv, pt, pa, Setting::AsymII).unwrap();
        let sol = match Theorem5Solution::solve(&s, &SolverConfig::default()) {
            Ok(sol) => sol,
            Err(e) => {
                assert!(e.is_solver_failure(), "{e:?}");
                failed += 1;
                if let Err(problem) = failure_is_reported(&s) {
                    failure_problems.push(problem);
                }
                continue;
            }
        };
        converged += 1;
        let r = kkt_residuals(&s, &sol).unwrap();
        worst_kkt = r.iter().fold(worst_kkt, |a, x| a.max(x.abs()));
        worst_ratio = worst_ratio.max((sol.lambda4 * sol.lambda1 + sol.lambda2 * sol.lambda3).abs());
        worst_printed = worst_printed.max((1.0 - pt / sol.lambda1 - pa / sol.lambda3).abs());
        let p = sol.profile(&s).unwrap();
        let t = best_response_transmitter_search(&s, &p, &probes).unwrap();
        let a = adversary_local_probes(&s, &p, &probes).unwrap();
        probe_failures += usize::from(!(t.holds(PROBE_TOLERANCE) && a.holds(PROBE_TOLERANCE)));
    }
    let ok = worst_kkt < 1e-8
        && worst_ratio < 1e-8
        && worst_printed < 1e-8
        && probe_failures == 0
        && failure_problems.is_empty();
    verdict(
        ok,
        format!(
            "{converged} converged: max KKT residual {worst_kkt:e}, max |l4 l1 + l2 l3| {worst_ratio:e}, \
             max |1 - P_T/l1 - P_A/l3| {worst_printed:.6} (tol 1e-8), probe suite failures {probe_failures}; \
             {failed} non-convergent, exit-2 problems {failure_problems:?}"
        ),
    )
}

fn criterion_8() -> Verdict {
    let eps0 = epsilon_threshold(4, 1, 1.0f64, 1.0, 1.0, 1.0).unwrap();
    let q = SymmetricCostInputs::partially_coordinated(0.0f64, 1, 1.0, 1.0, 1.0, 1.0).q_adv;
    let residual = (cost_setting1(&SymmetricCostInputs::new(4.0 * eps0, q, 1.0, 1.0, 1.0))
        - cost_setting2(4, 1, 1.0f64, 1.0, 1.0).unwrap())
    .abs();
    // 4 eps0 solves 1.25 m^2 - 2.25 m - 9 = 0.
    let root = (2.25 + (2.25f64 * 2.25 + 4.0 * 1.25 * 9.0).sqrt()) / 2.5;
    let oracle_gap = (eps0 - root / 4.0).abs();

    let mut branch_ok = setting3_branch(eps0, eps0) == Setting3Branch::Tie
        && setting3_branch(eps0 + 1e-9, eps0) == Setting3Branch::Randomized
        && setting3_branch(eps0 - 1e-9, eps0) == Setting3Branch::Deterministic;
    for m in 2..=8usize {
        for k in 1..m {
            for i in 1..=m {
                let eps = i as f64 / m as f64;
                let s = make_symmetric_partial(m, k, 1.0, 1.0, 1.0, Setting::SymIII, eps, 1.0).unwrap();
                let threshold = epsilon_threshold(m, k, 1.0, 1.0, 1.0, 1.0);
                let (Ok(out), Ok(t)) = (solve_setting3(&s), threshold) else {
                    continue;
                };
                branch_ok &= out.branch() == setting3_branch(eps, t);
            }
        }
    }
    let ok = residual < 1e-10 && (eps0 - 0.933).abs() <= 1e-3 && oracle_gap < 1e-10 && branch_ok;
    verdict(
        ok,
        format!(
            "eps0 = {eps0:.12}, residual {residual:e}, quadratic root/4 = {:.12} (gap {oracle_gap:e}), branch switch {}",
            root / 4.0,
            if branch_ok { "exact" } else { "wrong" }
        ),
    )
}

fn criterion_9() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut problems = Vec::new();
    let mut worst_spectrum = 0.0f64;
    let mut worst_limit = 0.0f64;
    for _ in 0..50 {
        let n = rng.random_range(1..=10);
        let betas: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..=3.0)).collect();
        let s2 = 1.0;
        if ceo_distortion(0.0, &betas, s2) != s2 {
            problems.push(format!("D(0) != sigma^2 for {betas:?}"));
        }
        let d: Vec<f64> = (0..=200).map(|i| ceo_distortion(i as f64 * 0.05, &betas, s2)).collect();
        if !d.windows(2).all(|w| w[1] < w[0]) {
            problems.push("not strictly decreasing".into());
        }
        if !d.windows(3).all(|w| w[0] - 2.0 * w[1] + w[2] > 0.0) {
            problems.push("not convex".into());
        }
        worst_limit = worst_limit.max((ceo_distortion(50.0, &betas, s2) - ceo_estimation_distortion(&betas, s2)).abs());
        let closed = ru_spectrum(&betas);
        let numeric = ru_spectrum_numeric(&betas);
        worst_spectrum = closed
            .iter()
            .zip(&numeric)
            .fold(worst_spectrum, |a, (x, y)| a.max((x - y).abs()));
    }
    let ok = problems.is_empty() && worst_limit < 1e-9 && worst_spectrum < 1e-10;
    verdict(
        ok,
        format!(
            "50 beta vectors: D(0) exact, monotone/convex problems {problems:?}, |D(50) - D_est| <= {worst_limit:e}, \
             spectrum gap {worst_spectrum:e}"
        ),
    )
}

fn criterion_10() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for rho in [0.0, 0.3, 0.5, 0.9] {
        let err = |n: usize| (maximal_correlation_discrete(rho, n, 5.0).unwrap() - f64::abs(rho)).abs();
        let (e1, e2) = (err(257), err(514));
        // Allow floating-point noise where both errors vanish.
        ok &= e1 < 1e-2 && e2 <= e1 + 1e-12;
        parts.push(format!("rho {rho}: err {e1:.2e} (n=257), {e2:.2e} (n=514)"));
    }
    verdict(ok, parts.join("; "))
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 10] = [
        ("setting I closed form matches direct MMSE", criterion_1),
        ("coordination ordering against deterministic transmitters", criterion_2),
        (
            "coordinated adversaries do at least as well as independent ones",
            criterion_3,
        ),
        ("Monte Carlo agrees with direct MMSE", criterion_4),
        ("saddle certification and randomization necessity", criterion_5),
        ("coordinated asymmetric allocation identities", criterion_6),
        ("uncoordinated asymmetric solver", criterion_7),
        ("partial-coordination threshold", criterion_8),
        ("CEO distortion-rate bound", criterion_9),
        ("maximal correlation of a Gaussian pair", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        failed += usize::from(!v.pass);
        println!(
            "criterion {:>2} {}: {name}: {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
