//! Game instances, strategy profiles and equilibrium reports.
//!
//! Every sensor observes `U = beta * S + W` with unit-variance `S` and `W`,
//! and the receiver sees `Y = sum(alpha * X) + Z` with unit-variance `Z`.
//! Scenarios built with other source or channel-noise variances are rescaled
//! onto this normalization by [`validate_scenario`].

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Per-sensor gains and power budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorParams<T = f64> {
    /// Communication-channel gain.
    pub alpha: T,
    /// Sensing gain.
    pub beta: T,
    /// Per-sensor power budget (energy per symbol).
    pub power: T,
}

impl<T: Scalar> SensorParams<T> {
    pub fn new(alpha: T, beta: T, power: T) -> Self {
        Self { alpha, beta, power }
    }

    /// Second moment of the observation, `E{U^2} = 1 + beta^2`.
    pub fn observation_energy(&self) -> T {
        T::one() + self.beta * self.beta
    }

    /// Largest uncoded gain that meets the power budget with equality.
    pub fn uncoded_gain(&self) -> T {
        (self.power / self.observation_energy()).sqrt()
    }

    fn check(&self, role: &str, index: usize) -> Result<()> {
        let ok = self.alpha > T::zero()
            && self.beta > T::zero()
            && self.power >= T::zero()
            && self.alpha.is_finite()
            && self.beta.is_finite()
            && self.power.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidScenario(format!(
                "{role} {index}: need alpha > 0, beta > 0, power >= 0 (got {:?})",
                self
            )))
        }
    }
}

/// Coordination setting of the game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Setting {
    /// Symmetric, transmitters and receiver share the randomization sequence.
    SymI,
    /// Symmetric, deterministic transmitters (Stackelberg).
    SymII,
    /// Symmetric, only a fraction of each side can coordinate.
    SymIII,
    /// Asymmetric sum-power allocation with coordinating transmitters.
    AsymI,
    /// Asymmetric sum-power allocation without coordination (Stackelberg).
    AsymII,
}

impl Setting {
    pub fn is_symmetric(self) -> bool {
        matches!(self, Setting::SymI | Setting::SymII | Setting::SymIII)
    }

    pub fn name(self) -> &'static str {
        match self {
            Setting::SymI => "SymI",
            Setting::SymII => "SymII",
            Setting::SymIII => "SymIII",
            Setting::AsymI => "AsymI",
            Setting::AsymII => "AsymII",
        }
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Variances that were folded into the gains during validation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rescaling<T = f64> {
    pub source_variance: T,
    pub channel_noise_variance: T,
}

impl<T: Scalar> Rescaling<T> {
    /// Factor that maps a normalized MSE back to the original source units.
    pub fn cost_scale(&self) -> T {
        self.source_variance
    }
}

/// A full game instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkScenario<T = f64> {
    pub transmitters: Vec<SensorParams<T>>,
    pub adversaries: Vec<SensorParams<T>>,
    pub source_variance: T,
    pub channel_noise_variance: T,
    pub sum_power_transmit: Option<T>,
    pub sum_power_attack: Option<T>,
    /// Fraction of transmitters able to coordinate (SymIII).
    pub epsilon: T,
    /// Fraction of adversaries able to coordinate (SymIII).
    pub eta: T,
    pub setting: Setting,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rescaling: Option<Rescaling<T>>,
}

impl<T: Scalar> NetworkScenario<T> {
    pub fn m(&self) -> usize {
        self.transmitters.len()
    }

    pub fn k(&self) -> usize {
        self.adversaries.len()
    }

    /// Number of transmitters sharing the randomization sequence.
    pub fn coordinated_transmitters(&self) -> usize {
        match self.setting {
            Setting::SymIII => round_count(self.epsilon * T::count(self.m())),
            _ => self.m(),
        }
    }

    /// Number of adversaries sharing a noise realization.
    pub fn coordinated_adversaries(&self) -> usize {
        match self.setting {
            Setting::SymIII => round_count(self.eta * T::count(self.k())),
            _ => self.k(),
        }
    }

    /// Shared parameters of a symmetric scenario (first sensor of either side).
    pub fn symmetric_params(&self) -> Option<SensorParams<T>> {
        self.transmitters.first().or_else(|| self.adversaries.first()).copied()
    }

    pub fn p_t(&self) -> Result<T> {
        self.sum_power_transmit
            .ok_or_else(|| Error::InvalidScenario("P_T required".into()))
    }

    pub fn p_a(&self) -> Result<T> {
        self.sum_power_attack
            .ok_or_else(|| Error::InvalidScenario("P_A required".into()))
    }

    /// Asymmetric settings constrain total power per side, not per sensor.
    pub fn uses_sum_constraints(&self) -> bool {
        !self.setting.is_symmetric()
    }
}

fn round_count<T: Scalar>(x: T) -> usize {
    x.round().to_usize().unwrap_or(0)
}

fn is_integral<T: Scalar>(x: T) -> bool {
    (x - x.round()).abs() <= T::lit(1e-9)
}

/// Checks every scenario invariant and normalizes the noise variances to one.
pub fn validate_scenario<T: Scalar>(mut s: NetworkScenario<T>) -> Result<NetworkScenario<T>> {
    let invalid = |msg: String| Err(Error::InvalidScenario(msg));

    for (i, p) in s.transmitters.iter().enumerate() {
        p.check("transmitter", i)?;
    }
    for (i, p) in s.adversaries.iter().enumerate() {
        p.check("adversary", i)?;
    }
    if !(s.source_variance > T::zero() && s.source_variance.is_finite()) {
        return invalid("source variance must be positive".into());
    }
    if !(s.channel_noise_variance > T::zero() && s.channel_noise_variance.is_finite()) {
        return invalid("channel noise variance must be positive".into());
    }
    for (name, v) in [("epsilon", s.epsilon), ("eta", s.eta)] {
        if !(v >= T::zero() && v <= T::one()) {
            return invalid(format!("{name} must lie in [0, 1]"));
        }
    }

    let (m, k) = (s.m(), s.k());
    if s.setting.is_symmetric() {
        if let Some(first) = s.symmetric_params() {
            let identical = s.transmitters.iter().chain(s.adversaries.iter()).all(|p| *p == first);
            if !identical {
                return invalid("symmetric settings require identical sensor parameters".into());
            }
        }
        if matches!(s.setting, Setting::SymII | Setting::SymIII) && k >= m {
            return invalid("K must be < M".into());
        }
        if s.setting == Setting::SymIII {
            if !is_integral(s.epsilon * T::count(m)) {
                return invalid(format!("M*epsilon = {} is not an integer", s.epsilon * T::count(m)));
            }
            if !is_integral(s.eta * T::count(k)) {
                return invalid(format!("K*eta = {} is not an integer", s.eta * T::count(k)));
            }
        }
    } else {
        let p_t = s.p_t()?;
        let p_a = s.p_a()?;
        if !(p_t >= T::zero() && p_t.is_finite()) {
            return invalid("P_T must be nonnegative".into());
        }
        if !(p_a >= T::zero() && p_a.is_finite()) {
            return invalid("P_A must be nonnegative".into());
        }
        if m == 0 {
            return invalid("asymmetric settings need at least one transmitter".into());
        }
        if s.setting == Setting::AsymII && k == 0 {
            return invalid("AsymII needs at least one adversary".into());
        }
    }

    let one = T::one();
    if s.source_variance != one || s.channel_noise_variance != one {
        let source_std = s.source_variance.sqrt();
        let noise_std = s.channel_noise_variance.sqrt();
        for p in s.transmitters.iter_mut().chain(s.adversaries.iter_mut()) {
            p.beta *= source_std;
            p.alpha /= noise_std;
        }
        let previous = s.rescaling.unwrap_or(Rescaling {
            source_variance: one,
            channel_noise_variance: one,
        });
        s.rescaling = Some(Rescaling {
            source_variance: previous.source_variance * s.source_variance,
            channel_noise_variance: previous.channel_noise_variance * s.channel_noise_variance,
        });
        s.source_variance = one;
        s.channel_noise_variance = one;
    }
    Ok(s)
}

/// Builds a validated symmetric scenario with `m + k` identical sensors.
pub fn make_symmetric<T: Scalar>(
    m: usize,
    k: usize,
    alpha: T,
    beta: T,
    power: T,
    setting: Setting,
) -> Result<NetworkScenario<T>> {
    make_symmetric_partial(m, k, alpha, beta, power, setting, T::one(), T::one())
}

/// Symmetric scenario with explicit coordination fractions.
#[allow(clippy::too_many_arguments)]
pub fn make_symmetric_partial<T: Scalar>(
    m: usize,
    k: usize,
    alpha: T,
    beta: T,
    power: T,
    setting: Setting,
    epsilon: T,
    eta: T,
) -> Result<NetworkScenario<T>> {
    if !setting.is_symmetric() {
        return Err(Error::InvalidScenario(format!("{setting} is not a symmetric setting")));
    }
    let sensor = SensorParams::new(alpha, beta, power);
    validate_scenario(NetworkScenario {
        transmitters: vec![sensor; m],
        adversaries: vec![sensor; k],
        source_variance: T::one(),
        channel_noise_variance: T::one(),
        sum_power_transmit: None,
        sum_power_attack: None,
        epsilon,
        eta,
        setting,
        rescaling: None,
    })
}

/// Builds a validated asymmetric scenario. Per-sensor `power` fields are unused.
pub fn make_asymmetric<T: Scalar>(
    transmitters: Vec<SensorParams<T>>,
    adversaries: Vec<SensorParams<T>>,
    sum_power_transmit: T,
    sum_power_attack: T,
    setting: Setting,
) -> Result<NetworkScenario<T>> {
    if setting.is_symmetric() {
        return Err(Error::InvalidScenario(format!(
            "{setting} is not an asymmetric setting"
        )));
    }
    validate_scenario(NetworkScenario {
        transmitters,
        adversaries,
        source_variance: T::one(),
        channel_noise_variance: T::one(),
        sum_power_transmit: Some(sum_power_transmit),
        sum_power_attack: Some(sum_power_attack),
        epsilon: T::one(),
        eta: T::one(),
        setting,
        rescaling: None,
    })
}

/// One adversary output `X_k = a S + b W_k + s theta_g`, where adversaries
/// with equal `group` share the same unit-variance noise realization `theta_g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearGaussianTerm<T = f64> {
    pub a: T,
    pub b: T,
    pub s: T,
    pub group: usize,
}

impl<T: Scalar> LinearGaussianTerm<T> {
    /// `E{X_k^2}`.
    pub fn power(&self) -> T {
        self.a * self.a + self.b * self.b + self.s * self.s
    }
}

/// What the adversarial sensors transmit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum AdversaryStrategy<T = f64> {
    /// Every adversary sends the same Gaussian realization with this variance.
    CoordinatedNoise {
        variance: T,
    },
    /// Each adversary sends its own Gaussian noise.
    IndependentNoise {
        variances: Vec<T>,
    },
    /// The first `coordinated` adversaries share one realization; the rest are independent.
    PartiallyCoordinatedNoise {
        coordinated: usize,
        variance: T,
    },
    /// Uncoded `X_k = c_k U_k`.
    LinearMirror {
        coeffs: Vec<T>,
    },
    GeneralLinearGaussian {
        terms: Vec<LinearGaussianTerm<T>>,
    },
}

impl<T: Scalar> AdversaryStrategy<T> {
    pub fn silent(k: usize) -> Self {
        AdversaryStrategy::IndependentNoise {
            variances: vec![T::zero(); k],
        }
    }

    /// Normalizes any strategy into per-adversary linear-Gaussian terms.
    pub fn terms(&self, adversaries: &[SensorParams<T>]) -> Result<Vec<LinearGaussianTerm<T>>> {
        let k = adversaries.len();
        let check_len = |n: usize| {
            if n == k {
                Ok(())
            } else {
                Err(Error::InvalidProfile(format!(
                    "adversary strategy has {n} entries for {k} adversaries"
                )))
            }
        };
        let noise = |variance: T, group: usize| LinearGaussianTerm {
            a: T::zero(),
            b: T::zero(),
            s: variance.max(T::zero()).sqrt(),
            group,
        };
        let terms = match self {
            AdversaryStrategy::CoordinatedNoise { variance } => (0..k).map(|_| noise(*variance, 0)).collect(),
            AdversaryStrategy::IndependentNoise { variances } => {
                check_len(variances.len())?;
                variances.iter().enumerate().map(|(i, v)| noise(*v, i)).collect()
            }
            AdversaryStrategy::PartiallyCoordinatedNoise { coordinated, variance } => {
                if *coordinated > k {
                    return Err(Error::InvalidProfile(format!(
                        "{coordinated} coordinated adversaries out of {k}"
                    )));
                }
                (0..k)
                    .map(|i| noise(*variance, if i < *coordinated { 0 } else { i + 1 }))
                    .collect()
            }
            AdversaryStrategy::LinearMirror { coeffs } => {
                check_len(coeffs.len())?;
                coeffs
                    .iter()
                    .zip(adversaries)
                    .enumerate()
                    .map(|(i, (c, p))| LinearGaussianTerm {
                        a: *c * p.beta,
                        b: *c,
                        s: T::zero(),
                        group: i,
                    })
                    .collect()
            }
            AdversaryStrategy::GeneralLinearGaussian { terms } => {
                check_len(terms.len())?;
                terms.clone()
            }
        };
        Ok(terms)
    }

    /// Variances that are negative or non-finite.
    fn has_bad_variance(&self) -> bool {
        let bad = |v: &T| !(v.is_finite() && *v >= T::zero());
        match self {
            AdversaryStrategy::CoordinatedNoise { variance }
            | AdversaryStrategy::PartiallyCoordinatedNoise { variance, .. } => bad(variance),
            AdversaryStrategy::IndependentNoise { variances } => variances.iter().any(bad),
            _ => false,
        }
    }
}

/// Transmitter coefficients, adversary strategy and the receiver's scalar gain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile<T = f64> {
    pub transmit_coeffs: Vec<T>,
    /// Every transmitted symbol is multiplied by a shared `gamma` in `{-1, +1}`
    /// with equal probability, known to the receiver but not to the adversary.
    pub randomized: bool,
    pub adversary: AdversaryStrategy<T>,
    /// Receiver estimate is `decoder_gain * Y` (times `gamma` when randomized).
    pub decoder_gain: T,
}

impl<T: Scalar> StrategyProfile<T> {
    /// Transmitted power of each transmitter.
    pub fn transmit_powers(&self, s: &NetworkScenario<T>) -> Vec<T> {
        self.transmit_coeffs
            .iter()
            .zip(&s.transmitters)
            .map(|(c, p)| *c * *c * p.observation_energy())
            .collect()
    }

    /// Same profile with every coefficient's sign flipped.
    pub fn sign_flipped(&self, s: &NetworkScenario<T>) -> Result<Self> {
        let terms = self.adversary.terms(&s.adversaries)?;
        Ok(Self {
            transmit_coeffs: self.transmit_coeffs.iter().map(|c| -*c).collect(),
            randomized: self.randomized,
            adversary: AdversaryStrategy::GeneralLinearGaussian {
                terms: terms
                    .into_iter()
                    .map(|t| LinearGaussianTerm {
                        a: -t.a,
                        b: -t.b,
                        s: -t.s,
                        group: t.group,
                    })
                    .collect(),
            },
            decoder_gain: -self.decoder_gain,
        })
    }
}

/// Checks lengths and power budgets of `p` against `s`.
pub fn validate_profile<T: Scalar>(s: &NetworkScenario<T>, p: &StrategyProfile<T>) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidProfile(msg));
    if p.transmit_coeffs.len() != s.m() {
        return bad(format!(
            "{} transmit coefficients for {} transmitters",
            p.transmit_coeffs.len(),
            s.m()
        ));
    }
    if p.transmit_coeffs.iter().any(|c| !c.is_finite()) || !p.decoder_gain.is_finite() {
        return bad("non-finite coefficient".into());
    }
    if p.adversary.has_bad_variance() {
        return bad("adversary variances must be finite and nonnegative".into());
    }
    let terms = p.adversary.terms(&s.adversaries)?;
    let tol = T::power_tolerance();
    let tx = p.transmit_powers(s);
    let adv: Vec<T> = terms.iter().map(|t| t.power()).collect();

    if s.uses_sum_constraints() {
        let total: T = tx.iter().copied().sum();
        if total > s.p_t()? + tol {
            return bad(format!("transmit power {total} exceeds P_T"));
        }
        let total: T = adv.iter().copied().sum();
        if total > s.p_a()? + tol {
            return bad(format!("adversary power {total} exceeds P_A"));
        }
    } else {
        for (i, (used, sensor)) in tx.iter().zip(&s.transmitters).enumerate() {
            if *used > sensor.power + tol {
                return bad(format!("transmitter {i} uses {used} > {}", sensor.power));
            }
        }
        for (i, (used, sensor)) in adv.iter().zip(&s.adversaries).enumerate() {
            if *used > sensor.power + tol {
                return bad(format!("adversary {i} uses {used} > {}", sensor.power));
            }
        }
    }
    Ok(())
}

/// Places where a reference closed form and direct evaluation of the stated
/// strategies disagree. Reports tag every such comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum KnownDiscrepancy {
    /// Observation model is taken as `U = beta S + W`.
    KD1ObservationModel,
    /// Adversary received power carries `alpha^2`; the closed form omits it.
    KD2AdversaryChannelGain,
    /// Mirror-profile closed form counts `(M - K)` observation-noise terms; direct evaluation gives `(M + K)`.
    KD3MirrorNoiseTerm,
    /// Coordinated asymmetric closed-form cost has a spurious factor 2 in its denominators.
    KD4CoordinatedCostFactor,
    /// Uncoordinated asymmetric closed-form cost has the same spurious factor 2.
    KD5UncoordinatedCostFactor,
    /// Adversary multiplier expression uses `1 - sum(alpha^2 c^2)` where the KKT algebra gives `1 + ...`.
    KD6AdversaryMultiplierSign,
    /// Multiplier identity `1 = P_T/l1 + P_A/l3` conflicts with the stationarity
    /// conditions, which imply `1 = P_T/l3 - P_A/l1`.
    KD7MultiplierIdentity,
}

impl KnownDiscrepancy {
    pub fn tag(self) -> &'static str {
        match self {
            KnownDiscrepancy::KD1ObservationModel => "KD1",
            KnownDiscrepancy::KD2AdversaryChannelGain => "KD2",
            KnownDiscrepancy::KD3MirrorNoiseTerm => "KD3",
            KnownDiscrepancy::KD4CoordinatedCostFactor => "KD4",
            KnownDiscrepancy::KD5UncoordinatedCostFactor => "KD5",
            KnownDiscrepancy::KD6AdversaryMultiplierSign => "KD6",
            KnownDiscrepancy::KD7MultiplierIdentity => "KD7",
        }
    }
}

/// Result of an equilibrium computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport<T = f64> {
    pub setting: Setting,
    /// Reported equilibrium cost. For the asymmetric solvers this is the
    /// direct evaluation; for the symmetric ones it is the closed form.
    pub cost: T,
    pub profile: StrategyProfile<T>,
    pub multipliers: BTreeMap<String, T>,
    pub kkt_residuals: Vec<T>,
    /// Direct MMSE evaluation of `profile`.
    pub oracle_cost: T,
    /// Closed-form cost, when one exists.
    pub closed_form_cost: Option<T>,
    pub discrepancies: Vec<KnownDiscrepancy>,
    pub discrepancy_notes: Vec<String>,
}

impl<T: Scalar> EquilibriumReport<T> {
    pub fn cost_delta(&self) -> T {
        self.cost - self.oracle_cost
    }

    pub fn max_kkt_residual(&self) -> T {
        self.kkt_residuals.iter().fold(T::zero(), |acc, r| acc.max(r.abs()))
    }

    pub(crate) fn note(&mut self, tag: Option<KnownDiscrepancy>, text: String) {
        if let Some(tag) = tag {
            if !self.discrepancies.contains(&tag) {
                self.discrepancies.push(tag);
            }
            self.discrepancy_notes.push(format!("{}: {text}", tag.tag()));
        } else {
            self.discrepancy_notes.push(text);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_small_setting_two() {
        let s = make_symmetric(2, 1, 1.0, 1.0, 1.0, Setting::SymII).unwrap();
        assert_eq!((s.m(), s.k()), (2, 1));
    }

    #[test]
    fn rejects_k_not_below_m() {
        let err = make_symmetric(1, 1, 1.0, 1.0, 1.0, Setting::SymII).unwrap_err();
        assert_eq!(err, Error::InvalidScenario("K must be < M".into()));
    }

    #[test]
    fn asymmetric_needs_transmit_budget() {
        let sensor = SensorParams::new(1.0, 1.0, 0.0);
        let s = NetworkScenario {
            transmitters: vec![sensor],
            adversaries: vec![sensor],
            source_variance: 1.0,
            channel_noise_variance: 1.0,
            sum_power_transmit: None,
            sum_power_attack: Some(1.0),
            epsilon: 1.0,
            eta: 1.0,
            setting: Setting::AsymI,
            rescaling: None,
        };
        assert_eq!(
            validate_scenario(s).unwrap_err(),
            Error::InvalidScenario("P_T required".into())
        );
    }

    #[test]
    fn builds_three_identical_sensors() {
        let s = make_symmetric(2, 1, 1.0, 1.0, 1.0, Setting::SymI).unwrap();
        assert_eq!(s.transmitters.len() + s.adversaries.len(), 3);
        assert!(s
            .transmitters
            .iter()
            .chain(&s.adversaries)
            .all(|p| *p == s.transmitters[0]));
    }

    #[test]
    fn setting_three_integer_fractions() {
        let s = make_symmetric_partial(4, 1, 1.0, 1.0, 1.0, Setting::SymIII, 0.75, 1.0).unwrap();
        assert_eq!(s.coordinated_transmitters(), 3);
        assert_eq!(s.coordinated_adversaries(), 1);
        assert!(make_symmetric_partial(4, 1, 1.0, 1.0, 1.0, Setting::SymIII, 0.3, 1.0).is_err());
    }

    #[test]
    fn rejects_heterogeneous_symmetric() {
        let mut s = make_symmetric(2, 1, 1.0, 1.0, 1.0, Setting::SymI).unwrap();
        s.transmitters[1].alpha = 2.0;
        assert!(validate_scenario(s).is_err());
    }

    #[test]
    fn rescales_variances_into_gains() {
        let mut s = make_symmetric(2, 1, 1.0f64, 1.0, 1.0, Setting::SymI).unwrap();
        s.source_variance = 4.0;
        s.channel_noise_variance = 9.0;
        let s = validate_scenario(s).unwrap();
        assert_eq!(s.source_variance, 1.0);
        assert_eq!(s.transmitters[0].beta, 2.0);
        assert!((s.transmitters[0].alpha - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.rescaling.unwrap().cost_scale(), 4.0);
    }

    #[test]
    fn profile_power_is_checked() {
        let s = make_symmetric(2, 1, 1.0, 1.0, 1.0, Setting::SymI).unwrap();
        let c = 0.5f64.sqrt();
        let mut p = StrategyProfile {
            transmit_coeffs: vec![c, c],
            randomized: true,
            adversary: AdversaryStrategy::CoordinatedNoise { variance: 1.0 },
            decoder_gain: 0.0,
        };
        assert!(validate_profile(&s, &p).is_ok());
        p.transmit_coeffs[0] = 0.8;
        assert!(validate_profile(&s, &p).is_err());
        p.transmit_coeffs[0] = c;
        p.adversary = AdversaryStrategy::CoordinatedNoise { variance: 1.1 };
        assert!(validate_profile(&s, &p).is_err());
        p.adversary = AdversaryStrategy::IndependentNoise { variances: vec![-1.0] };
        assert!(validate_profile(&s, &p).is_err());
    }

    #[test]
    fn mirror_terms_follow_observation() {
        let adv = [SensorParams::new(1.0, 2.0, 1.0)];
        let t = AdversaryStrategy::LinearMirror { coeffs: vec![-0.5] }
            .terms(&adv)
            .unwrap();
        assert_eq!(t[0].a, -1.0);
        assert_eq!(t[0].b, -0.5);
        assert_eq!(t[0].power(), 1.25);
    }
}
