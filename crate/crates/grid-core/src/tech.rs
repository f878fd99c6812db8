use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether a generator follows a weather-driven availability profile or can
/// be dispatched freely up to its capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TechKind {
    VariableRenewable,
    Dispatchable,
}

/// Optional classification used by sensitivity caps and report metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TechClass {
    Solar,
    WindOnshore,
    WindOffshore,
    #[serde(other)]
    Other,
}

/// One electricity generation technology.
///
/// Costs are annualized EUR/MW/yr for capacity and EUR/MWh for operation;
/// fuel cost is per MWh thermal and divided by the electric efficiency.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerationTech {
    pub name: String,
    pub kind: TechKind,
    #[serde(default)]
    pub class: Option<TechClass>,
    /// Counts toward the renewable share. Defaults to true for
    /// variable-renewable technologies.
    #[serde(default)]
    pub renewable: Option<bool>,
    /// Annualized investment cost (EUR/MW/yr).
    #[serde(default)]
    pub invest_eur_mw_yr: f64,
    /// Fixed operation and maintenance cost (EUR/MW/yr).
    #[serde(default)]
    pub fom_eur_mw_yr: f64,
    /// Variable O&M cost (EUR/MWh electric).
    #[serde(default)]
    pub var_eur_mwh: f64,
    /// Fuel cost (EUR/MWh thermal).
    #[serde(default)]
    pub fuel_eur_mwh_th: f64,
    /// Electric efficiency, in (0, 1].
    #[serde(default = "one")]
    pub efficiency: f64,
    /// Direct emissions (tCO2/MWh electric).
    #[serde(default)]
    pub emission_t_per_mwh: f64,
    /// Capacity bounds (MW) for the expandable node.
    #[serde(default)]
    pub cap_min_mw: f64,
    /// Upper capacity bound (MW); omit for unbounded.
    #[serde(default)]
    pub cap_max_mw: Option<f64>,
    /// Name of the availability series (variable-renewable kinds).
    #[serde(default)]
    pub availability: Option<String>,
}

fn one() -> f64 {
    1.0
}

impl GenerationTech {
    pub fn is_renewable(&self) -> bool {
        self.renewable
            .unwrap_or(self.kind == TechKind::VariableRenewable)
    }

    /// Marginal cost per MWh electric at a given CO2 price, i.e. variable
    /// O&M plus fuel per MWh-electric plus priced emissions.
    pub fn marginal_cost(&self, co2_eur_per_t: f64) -> f64 {
        self.var_eur_mwh
            + self.fuel_eur_mwh_th / self.efficiency
            + self.emission_t_per_mwh * co2_eur_per_t
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(Error::validation(format!(
                "technology '{}': efficiency in (0,1], got {}",
                self.name, self.efficiency
            )));
        }
        if let Some(up) = self.cap_max_mw {
            if self.cap_min_mw > up {
                return Err(Error::validation(format!(
                    "technology '{}': capacity lower bound {} above upper bound {}",
                    self.name, self.cap_min_mw, up
                )));
            }
        }
        if self.cap_min_mw < 0.0 {
            return Err(Error::validation(format!(
                "technology '{}': capacity bounds must be >= 0",
                self.name
            )));
        }
        if self.emission_t_per_mwh < 0.0 {
            return Err(Error::validation(format!(
                "technology '{}': emission factor >= 0, got {}",
                self.name, self.emission_t_per_mwh
            )));
        }
        if self.kind == TechKind::VariableRenewable && self.availability.is_none() {
            return Err(Error::validation(format!(
                "technology '{}': variable-renewable kinds need an availability series",
                self.name
            )));
        }
        Ok(())
    }
}

/// One electricity storage technology with separate energy, charge-power
/// and discharge-power capacities.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StorageTech {
    pub name: String,
    /// Annualized energy-capacity cost (EUR/MWh/yr).
    #[serde(default)]
    pub energy_eur_mwh_yr: f64,
    /// Annualized charge-power cost (EUR/MW/yr).
    #[serde(default)]
    pub charge_eur_mw_yr: f64,
    /// Annualized discharge-power cost (EUR/MW/yr).
    #[serde(default)]
    pub discharge_eur_mw_yr: f64,
    /// Charge efficiency, grid to store, in (0, 1].
    #[serde(default = "one")]
    pub eta_charge: f64,
    /// Discharge efficiency, store to grid, in (0, 1].
    #[serde(default = "one")]
    pub eta_discharge: f64,
    /// Self-discharge per hour, in [0, 1).
    #[serde(default)]
    pub self_discharge: f64,
    /// Energy capacity bounds (MWh).
    #[serde(default)]
    pub energy_min_mwh: f64,
    #[serde(default)]
    pub energy_max_mwh: Option<f64>,
    /// Power capacity bounds (MW), applied to charge and discharge alike.
    #[serde(default)]
    pub power_min_mw: f64,
    #[serde(default)]
    pub power_max_mw: Option<f64>,
    /// Capacity not optimizable (e.g. pumped hydro): capacities are pinned
    /// at the upper bounds, which must then be finite.
    #[serde(default)]
    pub fixed: bool,
}

impl StorageTech {
    pub fn validate(&self) -> Result<()> {
        for (label, eta) in [("charge", self.eta_charge), ("discharge", self.eta_discharge)] {
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(Error::validation(format!(
                    "storage '{}': {} efficiency in (0,1], got {}",
                    self.name, label, eta
                )));
            }
        }
        if !(0.0..1.0).contains(&self.self_discharge) {
            return Err(Error::validation(format!(
                "storage '{}': self-discharge in [0,1), got {}",
                self.name, self.self_discharge
            )));
        }
        if self.fixed && (self.energy_max_mwh.is_none() || self.power_max_mw.is_none()) {
            return Err(Error::validation(format!(
                "storage '{}': fixed storage needs finite energy and power bounds",
                self.name
            )));
        }
        if let Some(up) = self.energy_max_mwh {
            if self.energy_min_mwh > up {
                return Err(Error::validation(format!(
                    "storage '{}': energy lower bound above upper bound",
                    self.name
                )));
            }
        }
        if let Some(up) = self.power_max_mw {
            if self.power_min_mw > up {
                return Err(Error::validation(format!(
                    "storage '{}': power lower bound above upper bound",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas() -> GenerationTech {
        GenerationTech {
            name: "ccgt".into(),
            kind: TechKind::Dispatchable,
            class: None,
            renewable: None,
            invest_eur_mw_yr: 70_000.0,
            fom_eur_mw_yr: 20_000.0,
            var_eur_mwh: 2.0,
            fuel_eur_mwh_th: 25.0,
            efficiency: 0.55,
            emission_t_per_mwh: 0.33,
            cap_min_mw: 0.0,
            cap_max_mw: Some(17_600.0),
            availability: None,
        }
    }

    #[test]
    fn marginal_cost_includes_fuel_and_co2() {
        let g = gas();
        let mc = g.marginal_cost(100.0);
        assert!((mc - (2.0 + 25.0 / 0.55 + 33.0)).abs() < 1e-12);
    }

    #[test]
    fn efficiency_out_of_range_rejected() {
        let mut g = gas();
        g.efficiency = 1.2;
        let err = g.validate().unwrap_err();
        assert!(err.to_string().contains("efficiency in (0,1]"));
    }

    #[test]
    fn renewable_defaults_follow_kind() {
        let mut g = gas();
        assert!(!g.is_renewable());
        g.kind = TechKind::VariableRenewable;
        g.availability = Some("wind".into());
        assert!(g.is_renewable());
        g.renewable = Some(false);
        assert!(!g.is_renewable());
    }
}
