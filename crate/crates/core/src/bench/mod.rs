//! Monte Carlo evaluation: sample shots, decode them, tally failures and
//! decode times.

mod io;
mod report;
mod sample;
mod trials;

pub use io::{read_syndromes, write_predictions};
pub use report::{format_pm, reliability_note, Report, MIN_RELIABLE_FAILURES};
pub use sample::{sample_indexed, sample_shot, shot_rng, Shot};
#[cfg(feature = "parallel")]
pub use trials::collect_outcomes_parallel;
pub use trials::{
    collect_outcomes, collect_outcomes_sequential, failure_rate, run_shot, run_trials, run_trials_sequential,
    ShotOutcome, TrialConfig, TrialStats,
};
