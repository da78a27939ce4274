//! Co-simulation and evaluation of information exchange between wireless
//! sensor networks.
//!
//! Two co-located WSNs monitor one environment: *Network A* (a single
//! temperature node plus sink) and *Network B* (26 relative-humidity nodes
//! plus sink). Each network's sink reports to an enhanced gateway (EG); the
//! gateways exchange per-window averages. Network B's gateway predicts
//! whether the next 5-minute interval will see a large change in relative
//! humidity and pushes an operation plan back into the network: more active
//! nodes (or a shorter sensing interval) when a change is expected, fewer
//! (or a longer interval) otherwise.
//!
//! The crate is organized along the data path:
//!
//! - [`trace`] — measurement traces: CSV ingestion, validation, and seeded
//!   synthesis of correlated temperature/humidity days.
//! - [`delta`] — window averages, Δ values, percentile thresholds, and
//!   Δ labels / symptoms.
//! - [`predictor`] — the three-factor prediction automaton and the OR
//!   combination of per-metric predictions.
//! - [`simulator`] — deterministic day-by-day simulation of both networks
//!   executing plans and consuming energy.
//! - [`gateway`] — the enhanced-gateway state machine and the `EG1` line
//!   protocol used between gateways.
//! - [`evaluation`] — scoring (energy saved, high-Δ recall, QoM accuracy,
//!   performance score), grid calibration of symptom thresholds, and
//!   repeated random sub-sampling validation.
//! - [`fixtures`] — hand-constructed datasets with known event structure,
//!   used to validate the pipeline end to end.
//!
//! Everything is deterministic: identical inputs (including seeds) produce
//! bit-identical traces, simulation logs, and reports.

pub mod delta;
pub mod evaluation;
pub mod fixtures;
pub mod gateway;
pub mod predictor;
pub mod simulator;
pub mod trace;
