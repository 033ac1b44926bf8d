//! Configuration, seeded perturbations, experiment orchestration and the
//! verification batteries.
//!
//! An experiment run writes, below `outdir`:
//!
//! * `eps_<ε>/trajectory.csv`: diagnostics per sample;
//! * `eps_<ε>/states.csv`: the sampled spectral states (`t,l,m,value`);
//! * `distances.csv`: `t,eps,distance,unmodded_distance`;
//! * `report.json`: the [`StabilityReport`];
//! * `config.echo`: the configuration as `key = value` lines.

mod config;
mod experiment;
pub mod reference;
mod verify;

pub use config::{
    degeneracy_time, Experiment, ExperimentConfig, CONFIG_KEYS, DEFAULT_EPS, RNG_ALGORITHM,
};
pub use experiment::{
    conservation_drift, distance_rows, measure, perturb, read_distances, reference_wave, run_experiment,
    states_path, trajectory_path, ConservationDrift, DegeneracyCheck, DistanceRow, EpsRun, Provenance,
    StabilityReport, DISTANCES_HEADER,
};
pub use verify::{rep1_determinant, verify_suite, Check, VerifyReport, VerifySuite, VERIFY_SEED};
