//! Exact second-order statistics of a strategy profile and the resulting
//! linear MMSE cost.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::model::{NetworkScenario, StrategyProfile};
use crate::scalar::Scalar;

/// `E{S Y'}` and `E{Y'^2}` where `Y' = gamma * Y` for randomized profiles and
/// `Y' = Y` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments<T> {
    pub cross: T,
    pub energy: T,
}

impl<T: Scalar> Moments<T> {
    pub fn optimal_gain(&self) -> T {
        self.cross / self.energy
    }

    /// `E{(S - g Y')^2}` for unit source variance.
    pub fn mse_at_gain(&self, gain: T) -> T {
        T::one() - (gain + gain) * self.cross + gain * gain * self.energy
    }

    pub fn mmse(&self) -> T {
        T::one() - self.cross * self.cross / self.energy
    }
}

pub fn moments<T: Scalar>(s: &NetworkScenario<T>, p: &StrategyProfile<T>) -> Result<Moments<T>> {
    // Transmitted part: sum alpha_m c_m (beta_m S + W_m).
    let mut signal = T::zero();
    let mut tx_noise = T::zero();
    for (c, sensor) in p.transmit_coeffs.iter().zip(&s.transmitters) {
        let g = sensor.alpha * *c;
        signal += g * sensor.beta;
        tx_noise += g * g;
    }

    // Adversarial part: sum alpha_k (a_k S + b_k W_k + s_k theta_g).
    let terms = p.adversary.terms(&s.adversaries)?;
    let mut adv_signal = T::zero();
    let mut adv_obs = T::zero();
    let mut groups: BTreeMap<usize, T> = BTreeMap::new();
    for (t, sensor) in terms.iter().zip(&s.adversaries) {
        adv_signal += sensor.alpha * t.a;
        let b = sensor.alpha * t.b;
        adv_obs += b * b;
        *groups.entry(t.group).or_insert_with(T::zero) += sensor.alpha * t.s;
    }
    let adv_noise: T = groups.values().map(|g| *g * *g).sum();

    let base = T::one() + signal * signal + tx_noise + adv_signal * adv_signal + adv_obs + adv_noise;
    let moments = if p.randomized {
        // E{gamma} = 0 cancels every transmitter/adversary cross term.
        Moments {
            cross: signal,
            energy: base,
        }
    } else {
        let two = T::lit(2.0);
        Moments {
            cross: signal + adv_signal,
            energy: base + two * signal * adv_signal,
        }
    };
    Ok(moments)
}

/// Linear MMSE of the source given the channel output under profile `p`.
///
/// All variables are jointly Gaussian given `gamma`, so this is the MMSE.
pub fn direct_mmse_cost<T: Scalar>(s: &NetworkScenario<T>, p: &StrategyProfile<T>) -> Result<T> {
    Ok(moments(s, p)?.mmse())
}

/// MSE of the receiver actually configured in `p` (its `decoder_gain`).
pub fn mse_at_profile_gain<T: Scalar>(s: &NetworkScenario<T>, p: &StrategyProfile<T>) -> Result<T> {
    Ok(moments(s, p)?.mse_at_gain(p.decoder_gain))
}

/// Returns `p` with the receiver gain replaced by the MMSE gain.
pub fn with_optimal_decoder<T: Scalar>(
    s: &NetworkScenario<T>,
    mut p: StrategyProfile<T>,
) -> Result<StrategyProfile<T>> {
    p.decoder_gain = moments(s, &p)?.optimal_gain();
    Ok(p)
}
