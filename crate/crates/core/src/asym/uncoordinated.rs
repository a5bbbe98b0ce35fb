//! Sum-power allocation without coordination: a Stackelberg game in which
//! the transmitters commit to deterministic linear gains and the adversaries
//! answer with linear gains of their own.
//!
//! Multiplier conventions (all at the solution):
//!
//! * adversary gains `c_k = l2 a_k b_k / (2 (1 + b_k^2 - l1 a_k^2))`, `l1 > 0`,
//! * transmitter gains `c_m = l4 a_m b_m / (2 (1 + b_m^2 + l3 a_m^2))`, `l3 > 0`,
//! * `l2 = -2 l1 E / s` and `l4 = 2 l3 E / s`, where `s = E{SY}` and
//!   `E = E{Y^2} - s^2`, so `l4 l1 = -l2 l3` and `l2` has the opposite sign of `l4`.
//!
//! For fixed transmitter gains the follower problem reduces to one scalar
//! equation in `l1` with a unique root below the first pole
//! `min_k (1 + b_k^2) / a_k^2`. The leader condition is then a scalar
//! equation in `l3`; combining both power budgets it reads
//! `1 = P_T / l3 - P_A / l1`, which is negative as `l3 -> 0` and positive at
//! `l3 = P_T`, so it is bracketed and solved by bisection.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::coordinated::{allocation_coeff, budget_multiplier};
use super::mmse::{direct_mmse_cost, with_optimal_decoder};
use crate::error::{Error, Result};
use crate::model::{
    AdversaryStrategy, EquilibriumReport, KnownDiscrepancy, NetworkScenario, SensorParams, Setting, StrategyProfile,
};
use crate::scalar::Scalar;

const INNER_MAX_ITER: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T> {
    /// Cap on outer bisection steps, summed over all brackets.
    pub max_iter: usize,
    /// Every KKT residual must be below this at the returned point.
    pub tol: T,
    /// Log-spaced points used to bracket roots in `l3`.
    pub scan_points: usize,
    /// Guard on `|1 + b^2 -/+ l a^2|`.
    pub denominator_guard: T,
}

impl<T: Scalar> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            max_iter: 10_000,
            tol: T::kkt_tolerance(),
            scan_points: 64,
            denominator_guard: T::lit(1e-10),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FollowerResponse<T = f64> {
    pub lambda1: T,
    pub lambda2: T,
    pub coeffs: Vec<T>,
}

/// Bisection on a bracket with `f(lo) < 0 < f(hi)`, run to machine precision.
fn bisect<T: Scalar>(mut lo: T, mut hi: T, max_iter: usize, mut f: impl FnMut(T) -> Result<T>) -> Result<(T, usize)> {
    let half = T::lit(0.5);
    let mut iterations = 0;
    while iterations < max_iter {
        let mid = lo + (hi - lo) * half;
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if f(mid)? < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = if f(lo)?.abs() <= f(hi)?.abs() { lo } else { hi };
    Ok((root, iterations))
}

fn adversary_spread<T: Scalar>(adversaries: &[SensorParams<T>], lambda1: T) -> T {
    adversaries
        .iter()
        .map(|p| {
            let ab = p.alpha * p.beta;
            let d = p.observation_energy() - lambda1 * p.alpha * p.alpha;
            p.observation_energy() * ab * ab / (d * d)
        })
        .sum()
}

/// `c_k = l2 a_k b_k / (2 (1 + b_k^2 - l1 a_k^2))`.
pub fn adversary_coeffs_from_multipliers<T: Scalar>(adversaries: &[SensorParams<T>], lambda1: T, lambda2: T) -> Vec<T> {
    adversaries
        .iter()
        .map(|p| allocation_coeff(p, -lambda1, lambda2))
        .collect()
}

/// `c_m = l4 a_m b_m / (2 (1 + b_m^2 + l3 a_m^2))`. Each sensor needs only its
/// own gains and the two broadcast multipliers.
pub fn transmitter_coeffs_from_multipliers<T: Scalar>(
    transmitters: &[SensorParams<T>],
    lambda3: T,
    lambda4: T,
) -> Vec<T> {
    transmitters
        .iter()
        .map(|p| allocation_coeff(p, lambda3, lambda4))
        .collect()
}

fn follower_inner<T: Scalar>(
    adversaries: &[SensorParams<T>],
    p_a: T,
    signal: T,
    base: T,
) -> Result<(FollowerResponse<T>, usize)> {
    if p_a == T::zero() {
        return Ok((
            FollowerResponse {
                lambda1: T::zero(),
                lambda2: T::zero(),
                coeffs: vec![T::zero(); adversaries.len()],
            },
            0,
        ));
    }
    if adversaries.is_empty() {
        return Err(Error::EmptyAdversarySet);
    }
    let r2 = signal * signal;
    // Cheapest full cancellation needs r^2 / spread(0) power.
    if signal == T::zero() || p_a * adversary_spread(adversaries, T::zero()) >= r2 {
        return Err(Error::AdversaryDominates);
    }
    let pole = adversaries
        .iter()
        .map(|p| p.observation_energy() / (p.alpha * p.alpha))
        .fold(T::infinity(), T::min);
    let (lambda1, iterations) = bisect(T::zero(), pole, INNER_MAX_ITER, |l| {
        let lead = p_a + l * base;
        let v = lead * lead * adversary_spread(adversaries, l) - p_a * r2;
        Ok(if v.is_nan() { T::infinity() } else { v })
    })?;
    let lambda2 = -T::lit(2.0) * (p_a + lambda1 * base) / signal;
    let coeffs = adversary_coeffs_from_multipliers(adversaries, lambda1, lambda2);
    Ok((
        FollowerResponse {
            lambda1,
            lambda2,
            coeffs,
        },
        iterations,
    ))
}

/// Adversaries' best linear response under the sum budget `p_a`, given the
/// transmitted signal `signal = sum a_m b_m c_m` and the transmit-side noise
/// `base = 1 + sum a_m^2 c_m^2`.
///
/// Fails with [`Error::AdversaryDominates`] when the budget can cancel the
/// signal outright.
pub fn follower_best_response<T: Scalar>(
    adversaries: &[SensorParams<T>],
    p_a: T,
    signal: T,
    base: T,
) -> Result<FollowerResponse<T>> {
    follower_inner(adversaries, p_a, signal, base).map(|(r, _)| r)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem5Solution<T = f64> {
    pub lambda1: T,
    pub lambda2: T,
    pub lambda3: T,
    pub lambda4: T,
    pub transmit_coeffs: Vec<T>,
    pub adversary_coeffs: Vec<T>,
    pub cost: T,
    pub kkt_residuals: Vec<T>,
}

struct Candidate<T> {
    lambda1: T,
    lambda2: T,
    lambda3: T,
    lambda4: T,
    transmit: Vec<T>,
    adversary: Vec<T>,
}

fn candidate_at<T: Scalar>(s: &NetworkScenario<T>, p_t: T, p_a: T, lambda3: T) -> Result<(Candidate<T>, usize)> {
    let lambda4 = budget_multiplier(&s.transmitters, lambda3, p_t)?;
    let transmit = transmitter_coeffs_from_multipliers(&s.transmitters, lambda3, lambda4);
    let (signal, base) = signal_and_base(&s.transmitters, &transmit);
    let (resp, iterations) = follower_inner(&s.adversaries, p_a, signal, base)?;
    Ok((
        Candidate {
            lambda1: resp.lambda1,
            lambda2: resp.lambda2,
            lambda3,
            lambda4,
            transmit,
            adversary: resp.coeffs,
        },
        iterations,
    ))
}

fn signal_and_base<T: Scalar>(sensors: &[SensorParams<T>], coeffs: &[T]) -> (T, T) {
    let mut signal = T::zero();
    let mut base = T::one();
    for (c, p) in coeffs.iter().zip(sensors) {
        signal += p.alpha * p.beta * *c;
        base += p.alpha * p.alpha * *c * *c;
    }
    (signal, base)
}

/// Leader condition `1 - P_T/l3 + P_A/l1`; `+inf` where the follower can
/// cancel the signal (the limit as that region is approached).
fn leader_condition<T: Scalar>(s: &NetworkScenario<T>, p_t: T, p_a: T, lambda3: T) -> Result<T> {
    match candidate_at(s, p_t, p_a, lambda3) {
        Ok((c, _)) => Ok(T::one() - p_t / lambda3 + p_a / c.lambda1),
        Err(Error::AdversaryDominates) => Ok(T::infinity()),
        Err(e) => Err(e),
    }
}

impl<T: Scalar> Theorem5Solution<T> {
    pub fn solve(s: &NetworkScenario<T>, cfg: &SolverConfig<T>) -> Result<Self> {
        if s.setting != Setting::AsymII {
            return Err(Error::InvalidScenario(format!(
                "uncoordinated allocation needs AsymII, got {}",
                s.setting
            )));
        }
        let p_t = s.p_t()?;
        let p_a = s.p_a()?;
        if s.adversaries.is_empty() {
            return Err(Error::EmptyAdversarySet);
        }

        if p_a == T::zero() {
            // No attack: the transmitter side is the coordinated allocation with no noise.
            let (c, _) = candidate_at(s, p_t, p_a, p_t)?;
            return Self::finish(s, c, cfg);
        }

        // l3 = 0 maximizes the transmitted signal; if that can be cancelled, so can anything.
        candidate_at(s, p_t, p_a, T::zero())?;

        let n = cfg.scan_points.max(2);
        let lo_exp = T::lit(-12.0);
        let grid: Vec<T> = (0..n)
            .map(|i| {
                let t = T::count(i) / T::count(n - 1);
                p_t * T::lit(10.0).powf(lo_exp * (T::one() - t))
            })
            .collect();
        let values = grid
            .iter()
            .map(|l| leader_condition(s, p_t, p_a, *l))
            .collect::<Result<Vec<T>>>()?;

        let mut used = 0usize;
        let mut best: Option<(T, Candidate<T>)> = None;
        let mut last_residuals: Vec<f64> = Vec::new();
        for i in 0..n - 1 {
            let (a, b) = (values[i], values[i + 1]);
            if !(a < T::zero() && b >= T::zero()) && !(a > T::zero() && b <= T::zero()) {
                continue;
            }
            let increasing = a < T::zero();
            let budget = cfg.max_iter.saturating_sub(used);
            if budget == 0 {
                break;
            }
            let (root, iterations) = bisect(grid[i], grid[i + 1], budget, |l| {
                let v = leader_condition(s, p_t, p_a, l)?;
                Ok(if increasing { v } else { -v })
            })?;
            used += iterations;
            let (c, _) = match candidate_at(s, p_t, p_a, root) {
                Ok(c) => c,
                Err(Error::AdversaryDominates) => continue,
                Err(e) => return Err(e),
            };
            let profile = Self::profile_of(&c);
            let cost = direct_mmse_cost(s, &profile)?;
            let keep = match &best {
                Some((b, _)) => cost < *b,
                None => true,
            };
            if keep {
                last_residuals = kkt_residual_vector(s, &c, p_t, p_a)
                    .iter()
                    .map(|r| r.to_f64_lossy())
                    .collect();
                best = Some((cost, c));
            }
        }
        match best {
            Some((_, c)) => Self::finish(s, c, cfg),
            None => {
                let max_residual = last_residuals.iter().fold(f64::NAN, |m, r| m.max(r.abs()));
                Err(Error::NonConvergence {
                    iterations: used,
                    max_residual,
                    residuals: last_residuals,
                })
            }
        }
    }

    fn profile_of(c: &Candidate<T>) -> StrategyProfile<T> {
        StrategyProfile {
            transmit_coeffs: c.transmit.clone(),
            randomized: false,
            adversary: AdversaryStrategy::LinearMirror {
                coeffs: c.adversary.clone(),
            },
            decoder_gain: T::zero(),
        }
    }

    fn finish(s: &NetworkScenario<T>, c: Candidate<T>, cfg: &SolverConfig<T>) -> Result<Self> {
        let p_t = s.p_t()?;
        let p_a = s.p_a()?;
        let residuals = kkt_residual_vector(s, &c, p_t, p_a);
        let as_f64: Vec<f64> = residuals.iter().map(|r| r.to_f64_lossy()).collect();

        let guard = cfg.denominator_guard;
        for (i, p) in s.adversaries.iter().enumerate() {
            let d = p.observation_energy() - c.lambda1 * p.alpha * p.alpha;
            if d.abs() < guard {
                return Err(Error::SingularDenominator {
                    detail: format!("adversary {i}: 1 + beta^2 - lambda1 alpha^2 = {:e}", d.to_f64_lossy()),
                    residuals: as_f64,
                });
            }
        }
        for (i, p) in s.transmitters.iter().enumerate() {
            let d = p.observation_energy() + c.lambda3 * p.alpha * p.alpha;
            if d.abs() < guard {
                return Err(Error::SingularDenominator {
                    detail: format!("transmitter {i}: 1 + beta^2 + lambda3 alpha^2 = {:e}", d.to_f64_lossy()),
                    residuals: as_f64,
                });
            }
        }

        let max_residual = residuals.iter().fold(T::zero(), |m, r| m.max(r.abs()));
        if !(max_residual < cfg.tol) {
            return Err(Error::NonConvergence {
                iterations: cfg.max_iter,
                max_residual: max_residual.to_f64_lossy(),
                residuals: as_f64,
            });
        }
        let profile = Self::profile_of(&c);
        let cost = direct_mmse_cost(s, &profile)?;
        Ok(Self {
            lambda1: c.lambda1,
            lambda2: c.lambda2,
            lambda3: c.lambda3,
            lambda4: c.lambda4,
            transmit_coeffs: c.transmit,
            adversary_coeffs: c.adversary,
            cost,
            kkt_residuals: residuals,
        })
    }

    /// Deterministic transmitters, linear adversaries, MMSE receiver.
    pub fn profile(&self, s: &NetworkScenario<T>) -> Result<StrategyProfile<T>> {
        with_optimal_decoder(
            s,
            StrategyProfile {
                transmit_coeffs: self.transmit_coeffs.clone(),
                randomized: false,
                adversary: AdversaryStrategy::LinearMirror {
                    coeffs: self.adversary_coeffs.clone(),
                },
                decoder_gain: T::zero(),
            },
        )
    }

    /// Closed-form cost with the factor 2 in each denominator, as stated in the reference form.
    pub fn closed_form_cost(&self, s: &NetworkScenario<T>) -> T {
        self.closed_form(s, T::lit(2.0))
    }

    /// `1 / (1 + l3 sum(...) - l1 sum(...))` without the factor 2; equals the direct cost.
    pub fn stationary_cost(&self, s: &NetworkScenario<T>) -> T {
        self.closed_form(s, T::one())
    }

    fn closed_form(&self, s: &NetworkScenario<T>, factor: T) -> T {
        let tx: T = s
            .transmitters
            .iter()
            .map(|p| {
                let ab = p.alpha * p.beta;
                ab * ab / (factor * (p.observation_energy() + self.lambda3 * p.alpha * p.alpha))
            })
            .sum();
        let adv: T = s
            .adversaries
            .iter()
            .map(|p| {
                let ab = p.alpha * p.beta;
                ab * ab / (factor * (p.observation_energy() - self.lambda1 * p.alpha * p.alpha))
            })
            .sum();
        T::one() / (T::one() + self.lambda3 * tx - self.lambda1 * adv)
    }

    /// `l2` minus the reference adversary-multiplier expression, which has
    /// `1 - sum a_m^2 c_m^2` where the algebra gives `1 + ...`.
    pub fn printed_multiplier_residual(&self, s: &NetworkScenario<T>) -> Result<T> {
        let (signal, base) = signal_and_base(&s.transmitters, &self.transmit_coeffs);
        let tx_noise = base - T::one();
        let two = T::lit(2.0);
        let printed = -(two * s.p_a()? + two * self.lambda1 * (T::one() - tx_noise)) / signal;
        Ok(self.lambda2 - printed)
    }

    /// `1 - P_T/l1 - P_A/l3`, the reference multiplier identity.
    pub fn printed_identity_residual(&self, s: &NetworkScenario<T>) -> Result<T> {
        Ok(T::one() - s.p_t()? / self.lambda1 - s.p_a()? / self.lambda3)
    }

    /// `1 - P_T/l3 + P_A/l1`, the identity implied by the stationarity conditions.
    pub fn identity_residual(&self, s: &NetworkScenario<T>) -> Result<T> {
        let p_a = s.p_a()?;
        let adv = if p_a == T::zero() {
            T::zero()
        } else {
            p_a / self.lambda1
        };
        Ok(T::one() - s.p_t()? / self.lambda3 + adv)
    }
}

/// Names of the entries returned by [`kkt_residuals`] for `m` transmitters
/// and `k` adversaries.
pub fn residual_names(m: usize, k: usize) -> Vec<String> {
    let mut names: Vec<String> = (1..=k).map(|i| format!("adversary_stationarity_{i}")).collect();
    names.push("adversary_slack".into());
    names.extend((1..=m).map(|i| format!("transmitter_stationarity_{i}")));
    names.push("transmitter_slack".into());
    names.push("adversary_budget".into());
    names.push("transmit_budget".into());
    names.push("adversary_multiplier".into());
    names.push("multiplier_ratio".into());
    names.push("budget_identity".into());
    names
}

fn kkt_residual_vector<T: Scalar>(s: &NetworkScenario<T>, c: &Candidate<T>, p_t: T, p_a: T) -> Vec<T> {
    let two = T::lit(2.0);
    let (signal, base) = signal_and_base(&s.transmitters, &c.transmit);
    let (adv_signal, adv_base) = signal_and_base(&s.adversaries, &c.adversary);
    let total = signal + adv_signal;
    let energy = base + adv_base - T::one();
    // E / s, with the no-signal case mapped to zero so residuals stay finite.
    let ratio = if total == T::zero() { T::zero() } else { energy / total };

    let mut out = Vec::with_capacity(s.m() + s.k() + 7);
    let mut adv_used = T::zero();
    for (ck, p) in c.adversary.iter().zip(&s.adversaries) {
        out.push(
            two * *ck * p.observation_energy()
                - two * c.lambda1 * *ck * p.alpha * p.alpha
                - c.lambda2 * p.alpha * p.beta,
        );
        adv_used += p.observation_energy() * *ck * *ck;
    }
    out.push(c.lambda2 + two * c.lambda1 * ratio);
    let mut tx_used = T::zero();
    for (cm, p) in c.transmit.iter().zip(&s.transmitters) {
        out.push(
            two * *cm * p.observation_energy() + two * c.lambda3 * *cm * p.alpha * p.alpha
                - c.lambda4 * p.alpha * p.beta,
        );
        tx_used += p.observation_energy() * *cm * *cm;
    }
    out.push(c.lambda4 - two * c.lambda3 * ratio);
    out.push(adv_used - p_a);
    out.push(tx_used - p_t);
    out.push(c.lambda2 * signal + two * p_a + two * c.lambda1 * base);
    out.push(c.lambda4 * c.lambda1 + c.lambda2 * c.lambda3);
    let adv_term = if p_a == T::zero() { T::zero() } else { p_a / c.lambda1 };
    out.push(T::one() - p_t / c.lambda3 + adv_term);
    out
}

/// Evaluated first-order conditions, slack conditions, budgets and
/// multiplier relations at `sol`; see [`residual_names`] for the layout.
pub fn kkt_residuals<T: Scalar>(s: &NetworkScenario<T>, sol: &Theorem5Solution<T>) -> Result<Vec<T>> {
    let c = Candidate {
        lambda1: sol.lambda1,
        lambda2: sol.lambda2,
        lambda3: sol.lambda3,
        lambda4: sol.lambda4,
        transmit: sol.transmit_coeffs.clone(),
        adversary: sol.adversary_coeffs.clone(),
    };
    Ok(kkt_residual_vector(s, &c, s.p_t()?, s.p_a()?))
}

/// Stackelberg equilibrium of the uncoordinated asymmetric game.
pub fn solve_theorem5<T: Scalar>(s: &NetworkScenario<T>, cfg: &SolverConfig<T>) -> Result<EquilibriumReport<T>> {
    let sol = Theorem5Solution::solve(s, cfg)?;
    let profile = sol.profile(s)?;
    let closed = sol.closed_form_cost(s);
    let mut multipliers = BTreeMap::new();
    multipliers.insert("lambda1".to_string(), sol.lambda1);
    multipliers.insert("lambda2".to_string(), sol.lambda2);
    multipliers.insert("lambda3".to_string(), sol.lambda3);
    multipliers.insert("lambda4".to_string(), sol.lambda4);
    let mut report = EquilibriumReport {
        setting: Setting::AsymII,
        cost: sol.cost,
        profile,
        multipliers,
        kkt_residuals: sol.kkt_residuals.clone(),
        oracle_cost: sol.cost,
        closed_form_cost: Some(closed),
        discrepancies: Vec::new(),
        discrepancy_notes: Vec::new(),
    };
    report.note(
        Some(KnownDiscrepancy::KD5UncoordinatedCostFactor),
        format!(
            "closed form {} vs direct {} (delta {}); stationary form without the factor 2 gives {}",
            closed,
            sol.cost,
            closed - sol.cost,
            sol.stationary_cost(s)
        ),
    );
    if s.p_a()? > T::zero() {
        report.note(
            Some(KnownDiscrepancy::KD6AdversaryMultiplierSign),
            format!(
                "lambda2 minus the '1 - sum' multiplier expression: {}",
                sol.printed_multiplier_residual(s)?
            ),
        );
        report.note(
            Some(KnownDiscrepancy::KD7MultiplierIdentity),
            format!(
                "1 - P_T/lambda1 - P_A/lambda3 = {}; 1 - P_T/lambda3 + P_A/lambda1 = {}",
                sol.printed_identity_residual(s)?,
                sol.identity_residual(s)?
            ),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asym::Theorem4Solution;
    use crate::model::make_asymmetric;

    fn sensor(alpha: f64, beta: f64) -> SensorParams<f64> {
        SensorParams::new(alpha, beta, 0.0)
    }

    fn symmetric_instance() -> NetworkScenario<f64> {
        make_asymmetric(
            vec![sensor(1.0, 1.0), sensor(1.0, 1.0)],
            vec![sensor(1.0, 1.0)],
            2.0,
            1.0,
            Setting::AsymII,
        )
        .unwrap()
    }

    #[test]
    fn symmetric_input_reproduces_mirror_profile() {
        let s = symmetric_instance();
        let sol = Theorem5Solution::solve(&s, &SolverConfig::default()).unwrap();
        let c = 0.5f64.sqrt();
        for cm in &sol.transmit_coeffs {
            assert!((cm - c).abs() < 1e-9);
        }
        assert!((sol.adversary_coeffs[0] + c).abs() < 1e-9);
        assert!((sol.cost - 5.0 / 6.0).abs() < 1e-12);
        assert!((sol.lambda1 - 1.0 / 3.0).abs() < 1e-9);
        assert!((sol.lambda3 - 0.5).abs() < 1e-9);
        assert!(sol.lambda2 < 0.0 && sol.lambda4 > 0.0);
    }

    #[test]
    fn residuals_vanish_at_solution() {
        let s = symmetric_instance();
        let sol = Theorem5Solution::solve(&s, &SolverConfig::default()).unwrap();
        let r = kkt_residuals(&s, &sol).unwrap();
        assert_eq!(r.len(), residual_names(2, 1).len());
        assert!(r.iter().all(|x| x.abs() < 1e-8), "{r:?}");
    }

    #[test]
    fn perturbed_coefficient_shows_in_its_residual() {
        let s = symmetric_instance();
        let mut sol = Theorem5Solution::solve(&s, &SolverConfig::default()).unwrap();
        sol.transmit_coeffs[1] += 1e-3;
        let r = kkt_residuals(&s, &sol).unwrap();
        let names = residual_names(2, 1);
        let idx = names.iter().position(|n| n == "transmitter_stationarity_2").unwrap();
        // d/dc of the stationarity residual is 2 (1 + b^2 + l3 a^2) = 5.
        assert!((r[idx] - 5e-3).abs() < 1e-9, "{}", r[idx]);
        let other = names.iter().position(|n| n == "transmitter_stationarity_1").unwrap();
        assert!(r[other].abs() < 1e-12);
    }

    #[test]
    fn zero_multipliers_leave_budget_residual() {
        let s = symmetric_instance();
        let sol = Theorem5Solution {
            lambda1: 0.0,
            lambda2: 0.0,
            lambda3: 0.0,
            lambda4: 0.0,
            transmit_coeffs: vec![0.3, 0.3],
            adversary_coeffs: vec![-0.2],
            cost: 0.0,
            kkt_residuals: vec![],
        };
        let r = kkt_residuals(&s, &sol).unwrap();
        let names = residual_names(2, 1);
        let budget = names.iter().position(|n| n == "transmit_budget").unwrap();
        assert!(r[budget].abs() > 0.1);
        assert!(r[0].abs() > 0.1);
    }

    #[test]
    fn vanishing_attack_matches_coordinated_allocation() {
        let tx = vec![sensor(1.0, 2.0), sensor(0.5, 1.0), sensor(2.0, 0.3)];
        let adv = vec![sensor(1.0, 1.0)];
        let s5 = make_asymmetric(tx.clone(), adv.clone(), 3.0, 1e-10, Setting::AsymII).unwrap();
        let s4 = make_asymmetric(tx, adv, 3.0, 0.0, Setting::AsymI).unwrap();
        let sol5 = Theorem5Solution::solve(&s5, &SolverConfig::default()).unwrap();
        let sol4 = Theorem4Solution::solve(&s4).unwrap();
        assert!((sol5.cost - sol4.cost).abs() < 1e-4, "{} vs {}", sol5.cost, sol4.cost);
        assert!(sol5.adversary_coeffs[0].abs() < 1e-4);
    }

    #[test]
    fn zero_attack_budget_is_exact() {
        let tx = vec![sensor(1.0, 2.0), sensor(0.5, 1.0)];
        let s5 = make_asymmetric(tx.clone(), vec![sensor(1.0, 1.0)], 3.0, 0.0, Setting::AsymII).unwrap();
        let s4 = make_asymmetric(tx, vec![], 3.0, 0.0, Setting::AsymI).unwrap();
        let sol5 = Theorem5Solution::solve(&s5, &SolverConfig::default()).unwrap();
        let sol4 = Theorem4Solution::solve(&s4).unwrap();
        assert!((sol5.cost - sol4.cost).abs() < 1e-14);
        assert_eq!(sol5.adversary_coeffs, vec![0.0]);
    }

    #[test]
    fn overwhelming_attack_is_reported() {
        let s = make_asymmetric(
            vec![sensor(1.0, 1.0)],
            vec![sensor(2.0, 2.0)],
            1.0,
            10.0,
            Setting::AsymII,
        )
        .unwrap();
        assert_eq!(
            Theorem5Solution::solve(&s, &SolverConfig::default()).unwrap_err(),
            Error::AdversaryDominates
        );
    }

    #[test]
    fn near_pole_denominator_is_guarded() {
        let s = make_asymmetric(
            vec![sensor(1.0, 1.0)],
            vec![sensor(1.0, 1e-14)],
            1.0,
            1.0,
            Setting::AsymII,
        )
        .unwrap();
        let err = Theorem5Solution::solve(&s, &SolverConfig::default()).unwrap_err();
        assert!(matches!(err, Error::SingularDenominator { .. }), "{err:?}");
        assert!(err.is_solver_failure());
    }

    #[test]
    fn closed_forms_bracket_direct_cost() {
        let s = make_asymmetric(
            vec![sensor(1.2, 0.7), sensor(0.4, 2.0), sensor(2.5, 1.1)],
            vec![sensor(0.9, 1.3), sensor(1.7, 0.5)],
            2.5,
            0.6,
            Setting::AsymII,
        )
        .unwrap();
        let sol = Theorem5Solution::solve(&s, &SolverConfig::default()).unwrap();
        assert!((sol.stationary_cost(&s) - sol.cost).abs() < 1e-12);
        assert!((sol.closed_form_cost(&s) - sol.cost).abs() > 1e-3);
        assert!(sol.identity_residual(&s).unwrap().abs() < 1e-8);
        assert!(sol.printed_identity_residual(&s).unwrap().abs() > 1e-2);
    }

    #[test]
    fn works_in_single_precision() {
        let s = make_asymmetric(
            vec![SensorParams::new(1.0f32, 1.0, 0.0); 2],
            vec![SensorParams::new(1.0f32, 1.0, 0.0)],
            2.0,
            1.0,
            Setting::AsymII,
        )
        .unwrap();
        let sol = Theorem5Solution::solve(&s, &SolverConfig::default()).unwrap();
        assert!((sol.cost - 5.0 / 6.0).abs() < 1e-4);
    }
}
