//! Shared domain types, units, validation and configuration ingestion for
//! the HDV power-sector toolkit.
//!
//! Units are fixed repository-wide: MW, MWh, EUR, hours, tCO2. Vehicle-level
//! kW/kWh figures are converted to MW/MWh when fleets are aggregated. All
//! types are immutable after validation and safe to share across concurrent
//! scenario runs.

mod catalog;
mod chain;
mod error;
mod fleet;
mod grid;
mod scenario;
mod series;
mod tech;

pub use catalog::{load_catalog, validate_scenario, CheckedScenario, TechnologyCatalog};
pub use chain::{ElectrolyzerTech, FuelChainSpec};
pub use error::{Error, Result};
pub use fleet::{scale_availability, FleetSpec};
pub use grid::{Interconnector, Node};
pub use scenario::{ScenarioConfig, ScenarioKind, SolverOptions, Weekday};
pub use series::{read_series, write_series, TimeSeries};
pub use tech::{GenerationTech, StorageTech, TechClass, TechKind};

/// Hours in the modeled year used to prorate annualized capacity costs to
/// part-year horizons.
pub const HOURS_PER_YEAR: f64 = 8760.0;

/// Working days per year behind the "annual mileage / 240" convention.
pub const WORKING_DAYS_PER_YEAR: f64 = 240.0;
