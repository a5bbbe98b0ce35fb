use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::asym::{direct_mmse_cost, follower_best_response};
use crate::error::{Error, Result};
use crate::model::{AdversaryStrategy, LinearGaussianTerm, NetworkScenario, Setting, StrategyProfile};
use crate::scalar::Scalar;

/// Grid certificate tolerance.
pub const GRID_TOLERANCE: f64 = 1e-3;
/// Local probe certificate tolerance.
pub const PROBE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchDirection {
    AdversaryMax,
    TransmitterMin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestResponseReport<T = f64> {
    pub base_cost: T,
    pub best_deviation_cost: T,
    pub deviation_params: String,
    pub direction: SearchDirection,
    pub evaluations: usize,
}

impl<T: Scalar> BestResponseReport<T> {
    /// Signed improvement of the searching side: cost gained by the
    /// adversary, or cost removed by the transmitters.
    pub fn improvement(&self) -> T {
        match self.direction {
            SearchDirection::AdversaryMax => self.best_deviation_cost - self.base_cost,
            SearchDirection::TransmitterMin => self.base_cost - self.best_deviation_cost,
        }
    }

    pub fn holds(&self, tolerance: T) -> bool {
        self.improvement() <= tolerance
    }
}

/// Family of adversary deviations swept by the grid search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeviationClass {
    /// `X_k = g U_k + s theta`: what a sensor can build from its own observation.
    SensorRealizable,
    /// `X_k = a S + b W_k + s theta` with `a` and `b` chosen freely.
    Unrestricted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    /// Points per axis.
    pub points: usize,
    pub class: DeviationClass,
    /// Above this many adversaries all of them move along one shared grid
    /// coordinate instead of independently.
    pub max_joint: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            points: 21,
            class: DeviationClass::SensorRealizable,
            max_joint: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub directions: usize,
    pub step: f64,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            directions: 50,
            step: 1e-3,
            seed: 0x6a616d6e6574,
        }
    }
}

/// Adversary budgets the deviations must respect: per-sensor budgets in
/// symmetric settings, the power each adversary currently uses otherwise.
fn adversary_budgets<T: Scalar>(s: &NetworkScenario<T>, p: &StrategyProfile<T>) -> Result<Vec<T>> {
    if s.setting.is_symmetric() {
        Ok(s.adversaries.iter().map(|a| a.power).collect())
    } else {
        Ok(p.adversary.terms(&s.adversaries)?.iter().map(|t| t.power()).collect())
    }
}

/// Noise group of adversary `i`: the coordinating ones share group 0.
fn noise_group<T: Scalar>(s: &NetworkScenario<T>, i: usize) -> usize {
    let shared = match s.setting {
        Setting::AsymII => 0,
        _ => s.coordinated_adversaries(),
    };
    if i < shared {
        0
    } else {
        i + 1
    }
}

fn axis<T: Scalar>(points: usize, half_width: T) -> Vec<T> {
    let n = points.max(2);
    (0..n)
        .map(|i| half_width * (T::lit(-1.0) + T::lit(2.0) * T::count(i) / T::count(n - 1)))
        .collect()
}

/// Candidate outputs for one adversary with budget `budget`.
fn candidates<T: Scalar>(s: &NetworkScenario<T>, i: usize, budget: T, cfg: &GridConfig) -> Vec<LinearGaussianTerm<T>> {
    let sensor = &s.adversaries[i];
    let group = noise_group(s, i);
    let fill = |used: T| (budget - used).max(T::zero()).sqrt();
    match cfg.class {
        DeviationClass::SensorRealizable => {
            let e = sensor.observation_energy();
            axis(cfg.points, (budget / e).sqrt())
                .into_iter()
                .map(|g| LinearGaussianTerm {
                    a: g * sensor.beta,
                    b: g,
                    s: fill(g * g * e),
                    group,
                })
                .collect()
        }
        DeviationClass::Unrestricted => {
            let ax = axis(cfg.points, budget.sqrt());
            let mut out = Vec::new();
            for a in &ax {
                for b in &ax {
                    let used = *a * *a + *b * *b;
                    if used <= budget * (T::one() + T::lit(1e-12)) {
                        out.push(LinearGaussianTerm {
                            a: *a,
                            b: *b,
                            s: fill(used),
                            group,
                        });
                    }
                }
            }
            out
        }
    }
}

fn describe<T: Scalar>(terms: &[LinearGaussianTerm<T>]) -> String {
    terms
        .iter()
        .enumerate()
        .map(|(i, t)| format!("adv{i}: a={} b={} s={} group={}", t.a, t.b, t.s, t.group))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Sweeps linear-Gaussian adversary deviations and returns the one that
/// hurts the receiver most.
pub fn best_response_adversary_search<T: Scalar>(
    s: &NetworkScenario<T>,
    p: &StrategyProfile<T>,
    cfg: &GridConfig,
) -> Result<BestResponseReport<T>> {
    let base = direct_mmse_cost(s, p)?;
    let mut report = BestResponseReport {
        base_cost: base,
        best_deviation_cost: base,
        deviation_params: "profile strategy".into(),
        direction: SearchDirection::AdversaryMax,
        evaluations: 0,
    };
    let k = s.k();
    if k == 0 {
        return Ok(report);
    }
    let budgets = adversary_budgets(s, p)?;
    let per: Vec<Vec<LinearGaussianTerm<T>>> = (0..k).map(|i| candidates(s, i, budgets[i], cfg)).collect();

    let mut trial = p.clone();
    let mut eval = |terms: Vec<LinearGaussianTerm<T>>, report: &mut BestResponseReport<T>| -> Result<()> {
        trial.adversary = AdversaryStrategy::GeneralLinearGaussian { terms };
        let cost = direct_mmse_cost(s, &trial)?;
        report.evaluations += 1;
        if cost > report.best_deviation_cost {
            report.best_deviation_cost = cost;
            if let AdversaryStrategy::GeneralLinearGaussian { terms } = &trial.adversary {
                report.deviation_params = describe(terms);
            }
        }
        Ok(())
    };

    if k <= cfg.max_joint {
        let mut idx = vec![0usize; k];
        loop {
            eval(idx.iter().enumerate().map(|(i, j)| per[i][*j]).collect(), &mut report)?;
            let mut d = 0;
            loop {
                idx[d] += 1;
                if idx[d] < per[d].len() {
                    break;
                }
                idx[d] = 0;
                d += 1;
                if d == k {
                    return Ok(report);
                }
            }
        }
    }
    // All adversaries take the same grid position. The candidate lists may
    // differ in length only for the unrestricted class with unequal budgets,
    // so positions are matched through the shortest list.
    let len = per.iter().map(Vec::len).min().unwrap_or(0);
    for j in 0..len {
        eval(per.iter().map(|c| c[j]).collect(), &mut report)?;
    }
    Ok(report)
}

/// Adversary answer to a transmitter deviation, within the class the profile
/// was built for.
fn adversary_reply<T: Scalar>(
    s: &NetworkScenario<T>,
    p: &StrategyProfile<T>,
    coeffs: &[T],
) -> Result<Option<AdversaryStrategy<T>>> {
    if p.randomized || s.k() == 0 {
        // Against randomized transmitters the cross terms vanish and the
        // best reply does not depend on the coefficients.
        return Ok(Some(p.adversary.clone()));
    }
    let budget: T = if s.setting.is_symmetric() {
        s.adversaries.iter().map(|a| a.power).sum()
    } else {
        s.p_a()?
    };
    let mut signal = T::zero();
    let mut base = T::one();
    for (c, q) in coeffs.iter().zip(&s.transmitters) {
        signal += q.alpha * q.beta * *c;
        base += q.alpha * q.alpha * *c * *c;
    }
    match follower_best_response(&s.adversaries, budget, signal, base) {
        Ok(r) => Ok(Some(AdversaryStrategy::LinearMirror { coeffs: r.coeffs })),
        Err(Error::AdversaryDominates) => Ok(None),
        Err(e) => Err(e),
    }
}

fn cost_with_reply<T: Scalar>(s: &NetworkScenario<T>, p: &StrategyProfile<T>, coeffs: Vec<T>) -> Result<T> {
    match adversary_reply(s, p, &coeffs)? {
        Some(adversary) => {
            let trial = StrategyProfile {
                transmit_coeffs: coeffs,
                randomized: p.randomized,
                adversary,
                decoder_gain: p.decoder_gain,
            };
            direct_mmse_cost(s, &trial)
        }
        None => Ok(T::one()),
    }
}

/// Maps a perturbed coefficient vector back onto the feasible set.
fn project<T: Scalar>(s: &NetworkScenario<T>, mut c: Vec<T>, total: T) -> Vec<T> {
    if s.uses_sum_constraints() {
        let used: T = c
            .iter()
            .zip(&s.transmitters)
            .map(|(x, q)| *x * *x * q.observation_energy())
            .sum();
        if used > T::zero() {
            let scale = (total / used).sqrt();
            c.iter_mut().for_each(|x| *x *= scale);
        }
    } else {
        for (x, q) in c.iter_mut().zip(&s.transmitters) {
            let cap = q.uncoded_gain();
            *x = x.max(-cap).min(cap);
        }
    }
    c
}

fn gaussian_direction<T: Scalar>(rng: &mut ChaCha8Rng, n: usize) -> Vec<T> {
    let d: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    d.into_iter().map(|x| T::lit(x / norm)).collect()
}

/// Random feasible perturbations of the transmit coefficients, each answered
/// by the adversary's best reply; returns the cheapest one.
pub fn best_response_transmitter_search<T: Scalar>(
    s: &NetworkScenario<T>,
    p: &StrategyProfile<T>,
    cfg: &ProbeConfig,
) -> Result<BestResponseReport<T>> {
    let base = cost_with_reply(s, p, p.transmit_coeffs.clone())?;
    let mut report = BestResponseReport {
        base_cost: base,
        best_deviation_cost: base,
        deviation_params: "profile strategy".into(),
        direction: SearchDirection::TransmitterMin,
        evaluations: 0,
    };
    let m = s.m();
    if m == 0 {
        return Ok(report);
    }
    let total: T = p.transmit_powers(s).into_iter().sum();
    let step = T::lit(cfg.step);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for probe in 0..cfg.directions {
        let d = gaussian_direction::<T>(&mut rng, m);
        let moved: Vec<T> = p.transmit_coeffs.iter().zip(&d).map(|(c, x)| *c + step * *x).collect();
        let coeffs = project(s, moved, total);
        let cost = cost_with_reply(s, p, coeffs.clone())?;
        report.evaluations += 1;
        if cost < report.best_deviation_cost {
            report.best_deviation_cost = cost;
            report.deviation_params = format!("probe {probe}: c = {coeffs:?}");
        }
    }
    Ok(report)
}

/// Small feasible moves of the adversary strategy with the transmitters
/// fixed: noise power is shifted along the simplex, linear coefficients
/// along the power sphere.
pub fn adversary_local_probes<T: Scalar>(
    s: &NetworkScenario<T>,
    p: &StrategyProfile<T>,
    cfg: &ProbeConfig,
) -> Result<BestResponseReport<T>> {
    let base = direct_mmse_cost(s, p)?;
    let mut report = BestResponseReport {
        base_cost: base,
        best_deviation_cost: base,
        deviation_params: "profile strategy".into(),
        direction: SearchDirection::AdversaryMax,
        evaluations: 0,
    };
    let k = s.k();
    if k == 0 {
        return Ok(report);
    }
    let step = T::lit(cfg.step);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    for probe in 0..cfg.directions {
        let d = gaussian_direction::<T>(&mut rng, k);
        let adversary = match &p.adversary {
            AdversaryStrategy::IndependentNoise { variances } => {
                let total: T = variances.iter().copied().sum();
                let mean: T = d.iter().copied().sum::<T>() / T::count(k);
                let mut v: Vec<T> = variances
                    .iter()
                    .zip(&d)
                    .map(|(v, x)| (*v + step * total.max(T::one()) * (*x - mean)).max(T::zero()))
                    .collect();
                let used: T = v.iter().copied().sum();
                if used > T::zero() {
                    v.iter_mut().for_each(|x| *x *= total / used);
                }
                AdversaryStrategy::IndependentNoise { variances: v }
            }
            AdversaryStrategy::LinearMirror { coeffs } => {
                let energy = |c: &[T]| -> T {
                    c.iter()
                        .zip(&s.adversaries)
                        .map(|(x, q)| *x * *x * q.observation_energy())
                        .sum()
                };
                let total = energy(coeffs);
                let mut c: Vec<T> = coeffs.iter().zip(&d).map(|(c, x)| *c + step * *x).collect();
                let used = energy(&c);
                if used > T::zero() {
                    let scale = (total / used).sqrt();
                    c.iter_mut().for_each(|x| *x *= scale);
                }
                AdversaryStrategy::LinearMirror { coeffs: c }
            }
            other => {
                return Err(Error::InvalidProfile(format!(
                    "local probes need independent noise or linear coefficients, got {other:?}"
                )))
            }
        };
        let trial = StrategyProfile {
            adversary: adversary.clone(),
            ..p.clone()
        };
        let cost = direct_mmse_cost(s, &trial)?;
        report.evaluations += 1;
        if cost > report.best_deviation_cost {
            report.best_deviation_cost = cost;
            report.deviation_params = format!("probe {probe}: {adversary:?}");
        }
    }
    Ok(report)
}

/// What a verification certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckMode {
    /// Neither side gains by deviating.
    Saddle,
    /// The leader cannot gain given the follower's reply, and the follower's
    /// strategy is its reply.
    Stackelberg,
}

impl CheckMode {
    pub fn for_setting(setting: Setting) -> Self {
        match setting {
            Setting::SymII | Setting::AsymII => CheckMode::Stackelberg,
            _ => CheckMode::Saddle,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaddleCheck<T = f64> {
    pub mode: CheckMode,
    pub adversary: BestResponseReport<T>,
    pub transmitter: BestResponseReport<T>,
    /// Cost of the profile against the follower's recomputed reply
    /// (Stackelberg mode only).
    pub follower_reply_cost: Option<T>,
    pub adversary_ok: bool,
    pub transmitter_ok: bool,
}

impl<T: Scalar> SaddleCheck<T> {
    pub fn holds(&self) -> bool {
        self.adversary_ok && self.transmitter_ok
    }
}

/// Both best-response searches with default settings, in the mode the
/// scenario's setting calls for.
pub fn verify_saddle_point<T: Scalar>(s: &NetworkScenario<T>, p: &StrategyProfile<T>) -> Result<SaddleCheck<T>> {
    verify_with(
        s,
        p,
        CheckMode::for_setting(s.setting),
        &GridConfig::default(),
        &ProbeConfig::default(),
    )
}

pub fn verify_with<T: Scalar>(
    s: &NetworkScenario<T>,
    p: &StrategyProfile<T>,
    mode: CheckMode,
    grid: &GridConfig,
    probes: &ProbeConfig,
) -> Result<SaddleCheck<T>> {
    let transmitter = best_response_transmitter_search(s, p, probes)?;
    let transmitter_ok = transmitter.holds(T::lit(PROBE_TOLERANCE));
    match mode {
        CheckMode::Saddle => {
            let adversary = best_response_adversary_search(s, p, grid)?;
            let adversary_ok = adversary.holds(T::lit(GRID_TOLERANCE));
            Ok(SaddleCheck {
                mode,
                adversary,
                transmitter,
                follower_reply_cost: None,
                adversary_ok,
                transmitter_ok,
            })
        }
        CheckMode::Stackelberg => {
            let base = direct_mmse_cost(s, p)?;
            let reply = cost_with_reply(s, p, p.transmit_coeffs.clone())?;
            let mut adversary = match &p.adversary {
                AdversaryStrategy::LinearMirror { .. } | AdversaryStrategy::IndependentNoise { .. } => {
                    adversary_local_probes(s, p, probes)?
                }
                _ => best_response_adversary_search(s, p, grid)?,
            };
            let tol = T::lit(PROBE_TOLERANCE);
            let consistent = (reply - base).abs() <= tol;
            if reply > adversary.best_deviation_cost {
                adversary.best_deviation_cost = reply;
                adversary.deviation_params = "recomputed follower reply".into();
            }
            let adversary_ok = consistent && adversary.holds(tol);
            Ok(SaddleCheck {
                mode,
                adversary,
                transmitter,
                follower_reply_cost: Some(reply),
                adversary_ok,
                transmitter_ok,
            })
        }
    }
}
