//! Closed-form equilibria of the symmetric settings and the coordination
//! threshold that separates them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::asym::{direct_mmse_cost, with_optimal_decoder};
use crate::error::{Error, Result};
use crate::model::{
    AdversaryStrategy, EquilibriumReport, KnownDiscrepancy, NetworkScenario, SensorParams, Setting, StrategyProfile,
};
use crate::scalar::Scalar;

/// Inputs of the randomized-transmitter closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricCostInputs<T = f64> {
    /// Effective number of transmitters; real so that the threshold can be
    /// found over a continuum.
    pub m_eff: T,
    /// Adversary noise power received at the channel output.
    pub q_adv: T,
    pub alpha: T,
    pub beta: T,
    pub power: T,
    /// Uncoded gain `sqrt(P / (1 + beta^2))`.
    pub c: T,
}

impl<T: Scalar> SymmetricCostInputs<T> {
    pub fn new(m_eff: T, q_adv: T, alpha: T, beta: T, power: T) -> Self {
        let c = (power / (T::one() + beta * beta)).sqrt();
        Self {
            m_eff,
            q_adv,
            alpha,
            beta,
            power,
            c,
        }
    }

    /// `K` adversaries sending one shared noise realization at full power: `Q = alpha^2 K^2 P`.
    pub fn coordinated(m: T, k: usize, alpha: T, beta: T, power: T) -> Self {
        let k = T::count(k);
        Self::new(m, alpha * alpha * k * k * power, alpha, beta, power)
    }

    /// `K` adversaries sending independent noise at full power: `Q = alpha^2 K P`.
    pub fn independent(m: T, k: usize, alpha: T, beta: T, power: T) -> Self {
        Self::new(m, alpha * alpha * T::count(k) * power, alpha, beta, power)
    }

    /// `K eta` coordinated and `K (1 - eta)` independent adversaries.
    pub fn partially_coordinated(m: T, k: usize, eta: T, alpha: T, beta: T, power: T) -> Self {
        let k = T::count(k);
        let q = alpha * alpha * (k * k * eta * eta + k * (T::one() - eta)) * power;
        Self::new(m, q, alpha, beta, power)
    }

    fn noise_and_signal(&self) -> (T, T) {
        let ca2 = self.c * self.c * self.alpha * self.alpha;
        let noise = self.m_eff * ca2 + self.q_adv + T::one();
        let signal = self.m_eff * self.m_eff * ca2 * self.beta * self.beta;
        (noise, signal)
    }
}

/// Cost with `M_eff` randomized uncoded transmitters and noise power `Q` from the adversaries.
pub fn cost_setting1<T: Scalar>(inputs: &SymmetricCostInputs<T>) -> T {
    let (noise, signal) = inputs.noise_and_signal();
    noise / (signal + noise)
}

/// Receiver gain applied to `gamma * Y` in setting I.
pub fn decoder_gain_setting1<T: Scalar>(inputs: &SymmetricCostInputs<T>) -> T {
    let (noise, signal) = inputs.noise_and_signal();
    inputs.m_eff * inputs.c * inputs.alpha * inputs.beta / (signal + noise)
}

/// Reference closed form for deterministic transmitters against mirroring
/// adversaries, with `M - K` in both the signal and the noise term.
pub fn cost_setting2<T: Scalar>(m: usize, k: usize, alpha: T, beta: T, power: T) -> Result<T> {
    if k >= m {
        return Err(Error::InvalidScenario("K must be < M".into()));
    }
    Ok(cost_setting2_unchecked(m, k, alpha, beta, power))
}

pub(crate) fn cost_setting2_unchecked<T: Scalar>(m: usize, k: usize, alpha: T, beta: T, power: T) -> T {
    let d = T::count(m) - T::count(k);
    let c2 = power / (T::one() + beta * beta);
    let noise = d * c2 * alpha * alpha + T::one();
    noise / (d * d * alpha * alpha * beta * beta * c2 + noise)
}

/// Direct evaluation of the mirror profile: `M + K` independent observation
/// noises reach the receiver.
pub fn mirror_cost<T: Scalar>(m: usize, k: usize, alpha: T, beta: T, power: T) -> T {
    let (m, k) = (T::count(m), T::count(k));
    let c2 = power / (T::one() + beta * beta);
    let d = m - k;
    let noise = (m + k) * c2 * alpha * alpha + T::one();
    noise / (d * d * alpha * alpha * beta * beta * c2 + noise)
}

/// Threshold fraction `eps0` at which `M eps0` randomized transmitters match
/// the deterministic cost of all `M`.
pub fn epsilon_threshold<T: Scalar>(m: usize, k: usize, eta: T, alpha: T, beta: T, power: T) -> Result<T> {
    if k >= m {
        return Err(Error::InvalidScenario("K must be < M".into()));
    }
    if !(eta >= T::zero() && eta <= T::one()) {
        return Err(Error::InvalidScenario(format!("eta = {eta} outside [0, 1]")));
    }
    let target = cost_setting2_unchecked(m, k, alpha, beta, power);
    let q = SymmetricCostInputs::partially_coordinated(T::zero(), k, eta, alpha, beta, power).q_adv;
    epsilon_threshold_for_target(m, q, alpha, beta, power, target)
}

/// Root `eps` of `cost_setting1(M eps, Q) = target`, by bisection.
pub fn epsilon_threshold_for_target<T: Scalar>(
    m: usize,
    q_adv: T,
    alpha: T,
    beta: T,
    power: T,
    target: T,
) -> Result<T> {
    if m == 0 {
        return Err(Error::InvalidScenario("M must be positive".into()));
    }
    let f = |m_eff: T| cost_setting1(&SymmetricCostInputs::new(m_eff, q_adv, alpha, beta, power)) - target;
    let m_count = T::count(m);
    let tiny = T::lit(1e-12) * m_count;
    if !(f(tiny) > T::zero()) {
        return Err(Error::NoRoot {
            what: "epsilon threshold",
            detail: format!("target {target} is not below the cost with no transmitters"),
        });
    }
    let mut hi = m_count;
    let mut doublings = 0;
    while f(hi) > T::zero() {
        if doublings == 6 {
            return Err(Error::NoRoot {
                what: "epsilon threshold",
                detail: format!("cost stays above {target} up to M_eff = {hi}"),
            });
        }
        hi = hi + hi;
        doublings += 1;
    }
    let mut lo = tiny;
    let half = T::lit(0.5);
    loop {
        let mid = lo + (hi - lo) * half;
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
    Ok(root / m_count)
}

fn shared_params<T: Scalar>(s: &NetworkScenario<T>) -> Result<SensorParams<T>> {
    if !s.setting.is_symmetric() {
        return Err(Error::InvalidScenario(format!(
            "{} is not a symmetric setting",
            s.setting
        )));
    }
    s.symmetric_params()
        .ok_or_else(|| Error::InvalidScenario("scenario has no sensors".into()))
}

fn report<T: Scalar>(
    setting: Setting,
    s: &NetworkScenario<T>,
    profile: StrategyProfile<T>,
    closed_form: T,
) -> Result<EquilibriumReport<T>> {
    let profile = with_optimal_decoder(s, profile)?;
    let oracle = direct_mmse_cost(s, &profile)?;
    let mut r = EquilibriumReport {
        setting,
        cost: closed_form,
        profile,
        multipliers: BTreeMap::new(),
        kkt_residuals: Vec::new(),
        oracle_cost: oracle,
        closed_form_cost: Some(closed_form),
        discrepancies: Vec::new(),
        discrepancy_notes: Vec::new(),
    };
    r.note(
        Some(KnownDiscrepancy::KD1ObservationModel),
        "observations taken as U = beta S + W".into(),
    );
    Ok(r)
}

fn randomized_report<T: Scalar>(
    s: &NetworkScenario<T>,
    setting: Setting,
    active: usize,
    adversary: AdversaryStrategy<T>,
    inputs: SymmetricCostInputs<T>,
) -> Result<EquilibriumReport<T>> {
    let mut coeffs = vec![T::zero(); s.m()];
    for c in coeffs.iter_mut().take(active) {
        *c = inputs.c;
    }
    let profile = StrategyProfile {
        transmit_coeffs: coeffs,
        randomized: true,
        adversary,
        decoder_gain: T::zero(),
    };
    let mut r = report(setting, s, profile, cost_setting1(&inputs))?;
    if s.k() > 0 {
        r.note(
            Some(KnownDiscrepancy::KD2AdversaryChannelGain),
            format!(
                "adversary noise enters as alpha^2-weighted power {} at the receiver",
                inputs.q_adv
            ),
        );
    }
    Ok(r)
}

/// Randomized uncoded transmitters against coordinated Gaussian jamming.
pub fn solve_setting1<T: Scalar>(s: &NetworkScenario<T>) -> Result<EquilibriumReport<T>> {
    let p = shared_params(s)?;
    let inputs = SymmetricCostInputs::coordinated(T::count(s.m()), s.k(), p.alpha, p.beta, p.power);
    let adversary = AdversaryStrategy::CoordinatedNoise { variance: p.power };
    randomized_report(s, Setting::SymI, s.m(), adversary, inputs)
}

/// Deterministic uncoded transmitters; each adversary mirrors them with the opposite sign.
pub fn solve_setting2<T: Scalar>(s: &NetworkScenario<T>) -> Result<EquilibriumReport<T>> {
    let p = shared_params(s)?;
    let printed = cost_setting2(s.m(), s.k(), p.alpha, p.beta, p.power)?;
    let c = p.uncoded_gain();
    let profile = StrategyProfile {
        transmit_coeffs: vec![c; s.m()],
        randomized: false,
        adversary: AdversaryStrategy::LinearMirror {
            coeffs: vec![-c; s.k()],
        },
        decoder_gain: T::zero(),
    };
    let mut r = report(Setting::SymII, s, profile, printed)?;
    if s.k() > 0 {
        let oracle = r.oracle_cost;
        r.note(
            Some(KnownDiscrepancy::KD3MirrorNoiseTerm),
            format!(
                "closed form with (M-K) noise terms {printed} vs direct evaluation {oracle} (delta {})",
                printed - oracle
            ),
        );
    }
    Ok(r)
}

/// Which equilibrium applies in the partially coordinated setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Setting3Branch {
    Randomized,
    Deterministic,
    Tie,
}

/// Branch rule: randomize above the threshold, stay deterministic below,
/// report both within `1e-12`.
pub fn setting3_branch<T: Scalar>(epsilon: T, epsilon0: T) -> Setting3Branch {
    if (epsilon - epsilon0).abs() < T::lit(1e-12) {
        Setting3Branch::Tie
    } else if epsilon > epsilon0 {
        Setting3Branch::Randomized
    } else {
        Setting3Branch::Deterministic
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Setting3Outcome<T = f64> {
    Randomized(EquilibriumReport<T>),
    Deterministic(EquilibriumReport<T>),
    Tie {
        randomized: EquilibriumReport<T>,
        deterministic: EquilibriumReport<T>,
    },
}

impl<T: Scalar> Setting3Outcome<T> {
    pub fn branch(&self) -> Setting3Branch {
        match self {
            Setting3Outcome::Randomized(_) => Setting3Branch::Randomized,
            Setting3Outcome::Deterministic(_) => Setting3Branch::Deterministic,
            Setting3Outcome::Tie { .. } => Setting3Branch::Tie,
        }
    }

    /// The report of the selected branch; the randomized one on a tie.
    pub fn report(&self) -> &EquilibriumReport<T> {
        match self {
            Setting3Outcome::Randomized(r) | Setting3Outcome::Deterministic(r) => r,
            Setting3Outcome::Tie { randomized, .. } => randomized,
        }
    }
}

/// Equilibrium when only `M eps` transmitters and `K eta` adversaries can coordinate.
pub fn solve_setting3<T: Scalar>(s: &NetworkScenario<T>) -> Result<Setting3Outcome<T>> {
    if s.setting != Setting::SymIII {
        return Err(Error::InvalidScenario(format!("expected SymIII, got {}", s.setting)));
    }
    let p = shared_params(s)?;
    let (m, k) = (s.m(), s.k());
    let eps0 = epsilon_threshold(m, k, s.eta, p.alpha, p.beta, p.power)?;
    let m_eff = s.epsilon * T::count(m);

    let randomized = || -> Result<EquilibriumReport<T>> {
        let inputs = SymmetricCostInputs::partially_coordinated(m_eff, k, s.eta, p.alpha, p.beta, p.power);
        let adversary = AdversaryStrategy::PartiallyCoordinatedNoise {
            coordinated: s.coordinated_adversaries(),
            variance: p.power,
        };
        let mut r = randomized_report(s, Setting::SymIII, s.coordinated_transmitters(), adversary, inputs)?;
        if (m_eff - m_eff.round()).abs() > T::lit(1e-9) {
            r.note(
                None,
                format!(
                    "M eps = {m_eff} is not an integer; profile uses {}",
                    s.coordinated_transmitters()
                ),
            );
        }
        Ok(r)
    };
    let deterministic = || -> Result<EquilibriumReport<T>> {
        let mut r = solve_setting2(s)?;
        r.setting = Setting::SymIII;
        Ok(r)
    };

    let mut outcome = match setting3_branch(s.epsilon, eps0) {
        Setting3Branch::Randomized => Setting3Outcome::Randomized(randomized()?),
        Setting3Branch::Deterministic => Setting3Outcome::Deterministic(deterministic()?),
        Setting3Branch::Tie => Setting3Outcome::Tie {
            randomized: randomized()?,
            deterministic: deterministic()?,
        },
    };
    let note = format!("threshold eps0 = {eps0}, eps = {}", s.epsilon);
    match &mut outcome {
        Setting3Outcome::Randomized(r) | Setting3Outcome::Deterministic(r) => {
            r.multipliers.insert("epsilon0".into(), eps0);
            r.note(None, note);
        }
        Setting3Outcome::Tie {
            randomized,
            deterministic,
        } => {
            for r in [randomized, deterministic] {
                r.multipliers.insert("epsilon0".into(), eps0);
                r.note(None, note.clone());
            }
        }
    }
    Ok(outcome)
}

/// Setting-I costs against coordinated and against independent jamming.
pub fn coordination_gap<T: Scalar>(m: usize, k: usize, alpha: T, beta: T, power: T) -> (T, T) {
    let m = T::count(m);
    let coordinated = cost_setting1(&SymmetricCostInputs::coordinated(m, k, alpha, beta, power));
    let independent = cost_setting1(&SymmetricCostInputs::independent(m, k, alpha, beta, power));
    (coordinated, independent)
}
