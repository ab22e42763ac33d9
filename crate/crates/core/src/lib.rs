//! Lifetime modelling for wireless sensor networks deployed in sea water.
//!
//! - [`propagation`]: underwater RF path loss and Friis received power.
//! - [`radio_energy`]: transceiver frame energy, energy per bit, peak-power
//!   feasibility and energy sweeps over the on-time.
//! - [`lifetime_sim`]: seeded, cycle-based simulation of node mobility,
//!   communication and death, with lifetime metrics.
//! - [`config`]: TOML scenario documents.

pub mod config;
pub mod error;
pub mod lifetime_sim;
pub mod propagation;
pub mod radio_energy;

pub use config::ConfigFile;
pub use error::{Error, Result};
pub use lifetime_sim::{
    run, Channel, CycleReport, LifetimeMetrics, NodeState, Role, RunOutcome, ScenarioConfig, Simulation,
    StopCondition, StopThresholds,
};
pub use propagation::{AcousticBoundary, LinkGeometry, MediumEM, PathLossBreakdown, Reflection};
pub use radio_energy::{
    AmplifierModel, CircuitCharge, CircuitPowers, EnergyParams, EnergyReport, FigurePreset, FrameTiming, LinkBudget,
    SweepAxis, SweepRow,
};
