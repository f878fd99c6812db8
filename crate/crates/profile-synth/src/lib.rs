//! Turns a transport-relation table into stylized daily HDV driving
//! profiles and hourly fleet time series of driving demand, charging
//! availability and catenary connection.
//!
//! The pipeline: fit the annual-mileage regression against distance-class
//! statistics, derive per-relation daily operations, aggregate into
//! integer-hour stylized profiles, distribute them over the day against an
//! empirical traffic curve, and expand everything to an hourly horizon.
//! All functions are pure over immutable inputs.

mod expand;
mod profile;
mod regression;
mod relation;
mod starts;

pub use expand::{
    expand_to_horizon, fuel_demand_series, weekday_scale, write_fleet_series, FleetSeries,
    FuelKind, ProfileSeries,
};
pub use profile::{
    build_stylized_profiles, daily_operations, operating_bin, DailyOperations, HourState,
    StylizedProfile, AVG_SPEED_KMH, BIN_MAX, BIN_MIN, BREAK_H, BREAK_THRESHOLD_H,
};
pub use regression::{
    annual_mileage, fit_regression, german_class_targets, ClassTarget, MileageRegression,
    RegressionFit,
};
pub use relation::{
    generate_synthetic_relations, read_relations, write_relations, GoodsClass, IdleTable,
    TransportRelation,
};
pub use starts::{
    apply_start_times, assign_start_times, read_target_curve, synthesized_curve, StartAssignment,
};

pub type Result<T> = std::result::Result<T, grid_core::Error>;
