//! Assembles scenario LPs: a cost-minimizing power-sector core with hourly
//! energy balances, plus exactly one HDV electrification block per
//! scenario, producing a solver-agnostic sparse IR whose constraint tags
//! make duals retrievable as prices.

mod bev;
mod core;
mod fuel;
mod ir;
mod scenario;

use std::fmt;

pub use bev::{add_bev_block, add_ers_block, catenary_wheel_draw};
pub use core::{build_core, CoreModel};
pub use fuel::{add_h2_block, add_ptl_block, draw_factors, H2Mode};
pub use ir::{ConId, ModelIr, Sense, SolutionView, SolveStatus, VarId};
pub use scenario::{apply_sensitivities, build_scenario_model, ModelInfo, ScenarioModel};

/// Errors raised while assembling a scenario model.
#[derive(Debug)]
pub enum ModelError {
    /// A referenced availability or load series is missing.
    MissingSeries(String),
    /// A profile's hourly driving energy exceeds its aggregate battery.
    DriveExceedsBattery {
        profile: String,
        hour: usize,
        drive_mwh: f64,
        capacity_mwh: f64,
    },
    Invalid(String),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::MissingSeries(name) => {
                write!(f, "missing availability series '{}'", name)
            }
            ModelError::DriveExceedsBattery {
                profile,
                hour,
                drive_mwh,
                capacity_mwh,
            } => write!(
                f,
                "profile {}: driving energy {} MWh at hour {} exceeds battery capacity {} MWh",
                profile, drive_mwh, hour, capacity_mwh
            ),
            ModelError::Invalid(msg) => write!(f, "{}", msg),
        }
    }
}

impl std::error::Error for ModelError {}

impl From<grid_core::Error> for ModelError {
    fn from(e: grid_core::Error) -> Self {
        ModelError::Invalid(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, ModelError>;
