//! Desk-scale guards and fixed heuristic parameters.
//!
//! Exact searches refuse instances above the configured sizes instead of
//! silently running forever; callers that need heuristics use the
//! heuristic modes. All randomized procedures read every parameter from
//! here so that a seed fully determines their output.

use crate::rat::Rat;

#[derive(Clone, Debug)]
pub struct Config {
    /// Largest n for exact `ex` at d = 2.
    pub max_n_exact_d2: u32,
    /// Largest n for exact `ex` at d >= 3.
    pub max_n_exact_d3: u32,
    /// Largest resolution for exact region search at d = 2.
    pub max_r_exact_d2: u32,
    /// Largest resolution for exact region search at d >= 3.
    pub max_r_exact_d3: u32,
    /// Remove-and-refill passes in the greedy heuristic.
    pub heuristic_passes: u32,
    /// Cell toggles attempted by the annealer.
    pub anneal_steps: u64,
    /// Initial probability of accepting a measure-decreasing move.
    pub anneal_initial_accept: Rat,
    /// Geometric factor applied to the acceptance probability per step.
    pub anneal_decay: Rat,
    /// Sample count for Monte-Carlo volume estimates.
    pub mc_samples: u64,
    /// Abort the deletion construction beyond this many pattern copies.
    pub max_copies: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_n_exact_d2: 7,
            max_n_exact_d3: 4,
            max_r_exact_d2: 5,
            max_r_exact_d3: 3,
            heuristic_passes: 64,
            anneal_steps: 20_000,
            anneal_initial_accept: Rat::new(1, 2),
            anneal_decay: Rat::new(4095, 4096),
            mc_samples: 1_000_000,
            max_copies: 10_000_000,
        }
    }
}
