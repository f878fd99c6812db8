use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hardware and charging assumptions of a battery-electric HDV fleet.
///
/// Ratings are per vehicle in kW; battery capacity in kWh. Vehicle-level
/// quantities are converted to MW/MWh when profiles are aggregated to fleet
/// series.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FleetSpec {
    /// Usable battery capacity per vehicle (kWh).
    pub battery_kwh: f64,
    /// Depot and loading/unloading-stop charge rating (kW, grid side).
    pub depot_stop_kw_nominal: f64,
    /// Battery-side rating of the depot/stop charger (kW).
    pub depot_stop_kw_effective: f64,
    /// Driver's-break fast-charge rating (kW, grid side).
    pub break_kw_nominal: f64,
    /// Battery-side rating of the break charger (kW).
    pub break_kw_effective: f64,
    /// Power supply from the overhead line while driving (kW); zero for
    /// fleets without catenary pickup.
    #[serde(default)]
    pub catenary_kw: f64,
    /// Grid-to-battery charging efficiency, (0, 1].
    pub charging_efficiency: f64,
    /// Battery-to-grid discharging efficiency, (0, 1].
    pub discharge_efficiency: f64,
    /// Consumption while connected to the overhead line (kWh/km).
    #[serde(default)]
    pub consumption_on_catenary_kwh_km: f64,
    /// Consumption drawn from the battery off the overhead line (kWh/km).
    pub consumption_off_catenary_kwh_km: f64,
    /// Whether the fleet may feed electricity back to the grid.
    #[serde(default)]
    pub v2g_allowed: bool,
    /// Optional per-profile vehicle-count overrides (profile id -> count).
    /// Counts normally come from the stylized profiles themselves.
    #[serde(default)]
    pub vehicle_counts: BTreeMap<String, f64>,
}

impl FleetSpec {
    /// Defaults for a pure battery-electric truck fleet (500 km range).
    pub fn default_bev() -> Self {
        FleetSpec {
            battery_kwh: 655.0,
            depot_stop_kw_nominal: 200.0,
            depot_stop_kw_effective: 166.0,
            break_kw_nominal: 500.0,
            break_kw_effective: 415.0,
            catenary_kw: 0.0,
            charging_efficiency: 0.83,
            discharge_efficiency: 0.83,
            consumption_on_catenary_kwh_km: 0.0,
            consumption_off_catenary_kwh_km: 1.31,
            v2g_allowed: false,
            vehicle_counts: BTreeMap::new(),
        }
    }

    /// Defaults for a hybrid catenary/battery truck fleet (150 km battery
    /// range, depot charging only while stationary).
    pub fn default_ers() -> Self {
        FleetSpec {
            battery_kwh: 181.0,
            depot_stop_kw_nominal: 200.0,
            depot_stop_kw_effective: 166.0,
            break_kw_nominal: 0.0,
            break_kw_effective: 0.0,
            catenary_kw: 400.0,
            charging_efficiency: 0.83,
            discharge_efficiency: 0.83,
            consumption_on_catenary_kwh_km: 1.42,
            consumption_off_catenary_kwh_km: 1.25,
            v2g_allowed: false,
            vehicle_counts: BTreeMap::new(),
        }
    }

    pub fn with_v2g(mut self, allowed: bool) -> Self {
        self.v2g_allowed = allowed;
        self
    }

    pub fn is_ers(&self) -> bool {
        self.catenary_kw > 0.0
    }

    pub fn validate(&self) -> Result<()> {
        if self.battery_kwh <= 0.0 {
            return Err(Error::validation("fleet: battery capacity must be > 0"));
        }
        if self.consumption_off_catenary_kwh_km <= 0.0
            || (self.is_ers() && self.consumption_on_catenary_kwh_km <= 0.0)
        {
            return Err(Error::validation("fleet: consumptions must be > 0"));
        }
        for (label, eta) in [
            ("charging", self.charging_efficiency),
            ("discharge", self.discharge_efficiency),
        ] {
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(Error::validation(format!(
                    "fleet: {} efficiency in (0,1], got {}",
                    label, eta
                )));
            }
        }
        // Effective rating must be the nominal rating net of charging
        // losses, within 1%.
        for (label, nominal, effective) in [
            ("depot/stop", self.depot_stop_kw_nominal, self.depot_stop_kw_effective),
            ("break", self.break_kw_nominal, self.break_kw_effective),
        ] {
            if nominal == 0.0 && effective == 0.0 {
                continue;
            }
            let implied = nominal * self.charging_efficiency;
            if implied <= 0.0 || (effective - implied).abs() / implied > 0.01 {
                return Err(Error::validation(format!(
                    "fleet: {} effective rating {} kW is not nominal {} kW x efficiency {} within 1%",
                    label, effective, nominal, self.charging_efficiency
                )));
            }
        }
        Ok(())
    }
}

/// Scales the fleet's stationary charging ratings: depot/stop ratings by
/// `depot_scale`, break ratings by `away_scale`. Effective ratings scale
/// with the nominal ones, so the result stays clamped to the physical
/// nominal rating times the scalar. The catenary rating is not touched.
pub fn scale_availability(fleet: &FleetSpec, depot_scale: f64, away_scale: f64) -> FleetSpec {
    let mut scaled = fleet.clone();
    scaled.depot_stop_kw_nominal *= depot_scale;
    scaled.depot_stop_kw_effective *= depot_scale;
    scaled.break_kw_nominal *= away_scale;
    scaled.break_kw_effective *= away_scale;
    scaled
}
