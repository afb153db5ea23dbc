//! Experiment runner for the correction routines in `schur_horn`: seeded
//! instance families, ε-sweeps with log-log slope fits, a Hausdorff-distance
//! surrogate, independent certificate validation and JSON/CSV I/O.

pub mod error;
pub mod fit;
pub mod hausdorff;
pub mod instances;
pub mod io;
pub mod rng;
pub mod sweep;
pub mod tables;
pub mod validate;

pub use error::{HarnessError, Result};
pub use fit::{fit_loglog, median, LogLogFit};
pub use hausdorff::{hausdorff_upper_bound, random_member, RandomPop};
pub use instances::{gen_instance, gen_instance_named, Family, Instance, PerturbationGenerator, PerturbationStyle};
pub use rng::SplitMix64;
pub use sweep::{default_eps_grid, epsilon_sweep, SweepConfig, SweepRecord, SweepResult, CSV_HEADER};
pub use tables::{exponent_check, scenario_rows, ExponentCheck, ScenarioRow};
pub use validate::{validate_certificate, ValidationReport, ValidationTolerances};
