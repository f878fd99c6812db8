use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One electrolyzer technology offered to the model.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectrolyzerTech {
    pub name: String,
    /// Annualized investment cost (EUR/MW-electric/yr).
    pub invest_eur_mw_yr: f64,
    /// Conversion efficiency, electricity to hydrogen (LHV), in (0, 1].
    pub efficiency: f64,
}

/// Parameters of a hydrogen or power-to-liquid fuel supply chain.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuelChainSpec {
    pub electrolyzers: Vec<ElectrolyzerTech>,
    /// Annualized hydrogen storage cost (EUR/MWh/yr).
    #[serde(default)]
    pub h2_storage_eur_mwh_yr: f64,
    /// Upper bound on hydrogen storage energy (MWh); omit for unbounded.
    #[serde(default)]
    pub h2_storage_max_mwh: Option<f64>,
    /// Transport and liquefaction electricity (kWh-el per kg H2), drawn in
    /// the production hour. Applied in centralized mode only.
    #[serde(default)]
    pub transport_el_kwh_per_kg: f64,
    /// Hydrogen-to-liquid synthesis efficiency, in (0, 1].
    #[serde(default = "one")]
    pub synthesis_efficiency: f64,
    /// Annualized synthesis capacity cost (EUR/MW liquid output/yr).
    #[serde(default)]
    pub synthesis_eur_mw_yr: f64,
    /// Annualized liquid fuel storage cost (EUR/MWh/yr), near zero.
    #[serde(default)]
    pub liquid_storage_eur_mwh_yr: f64,
    /// Hydrogen energy content (kWh/kg).
    pub h2_kwh_per_kg: f64,
    /// Diesel-equivalent energy content (kWh/l).
    pub diesel_kwh_per_l: f64,
    /// Specific hydrogen demand of fuel-cell trucks (kg/100km).
    pub h2_kg_per_100km: f64,
    /// Specific diesel-equivalent demand of combustion trucks (l/100km).
    pub diesel_l_per_100km: f64,
    /// On-site storage buffer at filling stations, in hours of average
    /// hourly demand.
    #[serde(default = "default_buffer")]
    pub onsite_buffer_h: f64,
}

fn one() -> f64 {
    1.0
}

fn default_buffer() -> f64 {
    24.0
}

impl FuelChainSpec {
    /// Default hydrogen chain: PEM (more efficient, more expensive) and
    /// alkaline electrolyzers, liquefied transport electricity.
    pub fn default_h2() -> Self {
        FuelChainSpec {
            electrolyzers: vec![
                ElectrolyzerTech {
                    name: "pem".into(),
                    invest_eur_mw_yr: 95_000.0,
                    efficiency: 0.68,
                },
                ElectrolyzerTech {
                    name: "alk".into(),
                    invest_eur_mw_yr: 70_000.0,
                    efficiency: 0.60,
                },
            ],
            h2_storage_eur_mwh_yr: 30.0,
            h2_storage_max_mwh: None,
            transport_el_kwh_per_kg: 6.6,
            synthesis_efficiency: 1.0,
            synthesis_eur_mw_yr: 0.0,
            liquid_storage_eur_mwh_yr: 0.0,
            h2_kwh_per_kg: 33.33,
            diesel_kwh_per_l: 9.97,
            h2_kg_per_100km: 6.8,
            diesel_l_per_100km: 27.1,
            onsite_buffer_h: 24.0,
        }
    }

    /// Default power-to-liquid chain: synthesis co-located with the
    /// electrolyzers, so no transport electricity.
    pub fn default_ptl() -> Self {
        let mut chain = Self::default_h2();
        chain.transport_el_kwh_per_kg = 0.0;
        chain.synthesis_efficiency = 0.65;
        chain.synthesis_eur_mw_yr = 110_000.0;
        chain.liquid_storage_eur_mwh_yr = 0.01;
        chain
    }

    /// Electricity drawn per liter of e-fuel through the full chain
    /// (kWh-el/l), using the best electrolyzer efficiency and excluding
    /// transport electricity.
    pub fn electricity_per_liter(&self) -> f64 {
        let eta_elec = self
            .electrolyzers
            .iter()
            .map(|e| e.efficiency)
            .fold(0.0, f64::max);
        self.diesel_kwh_per_l / (eta_elec * self.synthesis_efficiency)
    }

    /// Transport/liquefaction electricity per MWh of hydrogen, as a
    /// dimensionless electricity-per-hydrogen ratio.
    pub fn transport_el_per_mwh_h2(&self) -> f64 {
        self.transport_el_kwh_per_kg / self.h2_kwh_per_kg
    }

    pub fn validate(&self) -> Result<()> {
        if self.electrolyzers.is_empty() {
            return Err(Error::validation("fuel chain: at least one electrolyzer"));
        }
        for e in &self.electrolyzers {
            if !(e.efficiency > 0.0 && e.efficiency <= 1.0) {
                return Err(Error::validation(format!(
                    "electrolyzer '{}': efficiency in (0,1], got {}",
                    e.name, e.efficiency
                )));
            }
        }
        if !(self.synthesis_efficiency > 0.0 && self.synthesis_efficiency <= 1.0) {
            return Err(Error::validation(format!(
                "fuel chain: synthesis efficiency in (0,1], got {}",
                self.synthesis_efficiency
            )));
        }
        if self.h2_kg_per_100km <= 0.0 || self.diesel_l_per_100km <= 0.0 {
            return Err(Error::validation("fuel chain: specific demands must be > 0"));
        }
        if self.h2_kwh_per_kg <= 0.0 || self.diesel_kwh_per_l <= 0.0 {
            return Err(Error::validation("fuel chain: energy contents must be > 0"));
        }
        if self.onsite_buffer_h < 0.0 {
            return Err(Error::validation("fuel chain: buffer hours must be >= 0"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn electricity_per_liter_chain_arithmetic() {
        let mut chain = FuelChainSpec::default_ptl();
        chain.electrolyzers = vec![ElectrolyzerTech {
            name: "pem".into(),
            invest_eur_mw_yr: 0.0,
            efficiency: 0.7,
        }];
        chain.synthesis_efficiency = 0.8;
        // 9.97 kWh/l / (0.7 x 0.8) = 17.80 kWh-el/l
        assert!((chain.electricity_per_liter() - 17.803_571_428_571_43).abs() < 1e-9);
    }

    #[test]
    fn defaults_validate() {
        FuelChainSpec::default_h2().validate().unwrap();
        FuelChainSpec::default_ptl().validate().unwrap();
    }

    #[test]
    fn bad_synthesis_efficiency_rejected() {
        let mut chain = FuelChainSpec::default_ptl();
        chain.synthesis_efficiency = 0.0;
        assert!(chain.validate().is_err());
    }
}
