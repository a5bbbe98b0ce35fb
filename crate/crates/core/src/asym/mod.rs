//! Asymmetric power-allocation games and the direct cost oracle.

mod coordinated;
mod mmse;
mod uncoordinated;

pub use coordinated::{attacker_best_channel, solve_theorem4, Theorem4Solution};
pub use mmse::{direct_mmse_cost, moments, mse_at_profile_gain, with_optimal_decoder, Moments};
pub use uncoordinated::{
    adversary_coeffs_from_multipliers, follower_best_response, kkt_residuals, residual_names, solve_theorem5,
    transmitter_coeffs_from_multipliers, FollowerResponse, SolverConfig, Theorem5Solution,
};
