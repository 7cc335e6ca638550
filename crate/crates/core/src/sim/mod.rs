//! Closed-loop simulation, logging, tracking metrics and Lyapunov checks.

pub mod batch;
pub mod config;
pub mod log;
pub mod metrics;
pub mod nominal;
pub mod runner;
pub mod stability;

pub use batch::{compare, metrics_csv_fields, run_batch, sweep, sweep_csv, Comparison, ComparisonRow, SweepRow, METRICS_HEADER};
pub use config::{apply_overrides, MetricsSettings, NominalSettings, PlantKind, ScenarioConfig, SimSettings, StabilitySettings};
pub use log::{LogRow, SimLog};
pub use metrics::{compute_metrics, fit_exponential_envelope, ExpFit, Metrics};
pub use nominal::{nominal_rates, nominal_system_step, run_nominal, NominalInputs};
pub use runner::run_scenario;
pub use stability::{lyapunov_value, verify_stability, StabilityCriteria, StabilityReport};
