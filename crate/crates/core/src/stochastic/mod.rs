//! Branching occupancy simulation.
//!
//! At level `n` the `M^n` root paths of the labeled tree carry label words of
//! length `n`. Only the number of paths per label word matters for `Z_n` and
//! for the random measure, so the simulator evolves that aggregate
//! ([`OccupancyMap`]) instead of individual paths: because edge labels are
//! i.i.d., the `M c` child edges below the `c` paths carrying a word `w` split
//! among the words `w l` according to a multinomial `(M c, p)` draw.

mod energy;
mod evolve;
mod occupancy;
mod source;
mod trials;

pub use energy::{energy_estimate, MAX_ENERGY_WORDS};
pub use evolve::{evolve, evolve_to_depth};
pub use occupancy::{measure, z_n, OccupancyMap, RandomMeasure};
pub use source::{simulate_paths, splitmix64, LabelSource, MAX_EXPLICIT_PATHS};
pub use trials::{
    estimate_dim, run_trial_traces, run_trials, trial_occupancies, trial_seed, LevelStats, TrialSummary,
    MAX_OCCUPIED_WORDS, MAX_TRIAL_WORK,
};
