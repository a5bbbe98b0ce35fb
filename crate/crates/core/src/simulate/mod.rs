//! Seeded channel simulation and best-response searches around candidate
//! equilibria.

mod montecarlo;
mod search;

pub use montecarlo::{run_monte_carlo, run_monte_carlo_chunked, MonteCarloResult, BLOCK_SIZE, THREADS_ENV};
pub use search::{
    adversary_local_probes, best_response_adversary_search, best_response_transmitter_search, verify_saddle_point,
    verify_with, BestResponseReport, CheckMode, DeviationClass, GridConfig, ProbeConfig, SaddleCheck, SearchDirection,
    GRID_TOLERANCE, PROBE_TOLERANCE,
};
