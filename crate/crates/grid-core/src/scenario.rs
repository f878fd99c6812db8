use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ten scenario variants: a reference without electrified trucks plus
/// nine HDV electrification options.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ScenarioKind {
    #[serde(rename = "REF")]
    Ref,
    #[serde(rename = "BEV_FLEX")]
    BevFlex,
    #[serde(rename = "BEV_FLEX_V2G")]
    BevFlexV2g,
    #[serde(rename = "BEV_INFLEX")]
    BevInflex,
    #[serde(rename = "ERS_FLEX")]
    ErsFlex,
    #[serde(rename = "ERS_FLEX_V2G")]
    ErsFlexV2g,
    #[serde(rename = "ERS_INFLEX")]
    ErsInflex,
    #[serde(rename = "FCEV_CENTRAL")]
    FcevCentral,
    #[serde(rename = "FCEV_ONSITE")]
    FcevOnsite,
    #[serde(rename = "ICEV_PTL")]
    IcevPtl,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 10] = [
        ScenarioKind::Ref,
        ScenarioKind::BevFlex,
        ScenarioKind::BevFlexV2g,
        ScenarioKind::BevInflex,
        ScenarioKind::ErsFlex,
        ScenarioKind::ErsFlexV2g,
        ScenarioKind::ErsInflex,
        ScenarioKind::FcevCentral,
        ScenarioKind::FcevOnsite,
        ScenarioKind::IcevPtl,
    ];

    pub fn is_bev(self) -> bool {
        matches!(
            self,
            ScenarioKind::BevFlex | ScenarioKind::BevFlexV2g | ScenarioKind::BevInflex
        )
    }

    pub fn is_ers(self) -> bool {
        matches!(
            self,
            ScenarioKind::ErsFlex | ScenarioKind::ErsFlexV2g | ScenarioKind::ErsInflex
        )
    }

    pub fn is_battery(self) -> bool {
        self.is_bev() || self.is_ers()
    }

    pub fn is_fuel(self) -> bool {
        matches!(
            self,
            ScenarioKind::FcevCentral | ScenarioKind::FcevOnsite | ScenarioKind::IcevPtl
        )
    }

    pub fn is_inflexible(self) -> bool {
        matches!(self, ScenarioKind::BevInflex | ScenarioKind::ErsInflex)
    }

    pub fn v2g(self) -> bool {
        matches!(self, ScenarioKind::BevFlexV2g | ScenarioKind::ErsFlexV2g)
    }

    pub fn label(self) -> &'static str {
        match self {
            ScenarioKind::Ref => "REF",
            ScenarioKind::BevFlex => "BEV_FLEX",
            ScenarioKind::BevFlexV2g => "BEV_FLEX_V2G",
            ScenarioKind::BevInflex => "BEV_INFLEX",
            ScenarioKind::ErsFlex => "ERS_FLEX",
            ScenarioKind::ErsFlexV2g => "ERS_FLEX_V2G",
            ScenarioKind::ErsInflex => "ERS_INFLEX",
            ScenarioKind::FcevCentral => "FCEV_CENTRAL",
            ScenarioKind::FcevOnsite => "FCEV_ONSITE",
            ScenarioKind::IcevPtl => "ICEV_PTL",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| Error::validation(format!("unknown scenario kind '{}'", s)))
    }
}

impl std::fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Day of week anchoring hour 0 of the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weekday {
    Monday,
    Tuesday,
    Wednesday,
    Thursday,
    Friday,
    Saturday,
    Sunday,
}

impl Weekday {
    /// Index with Monday = 0.
    pub fn index(self) -> usize {
        match self {
            Weekday::Monday => 0,
            Weekday::Tuesday => 1,
            Weekday::Wednesday => 2,
            Weekday::Thursday => 3,
            Weekday::Friday => 4,
            Weekday::Saturday => 5,
            Weekday::Sunday => 6,
        }
    }

    pub fn is_weekend(self) -> bool {
        matches!(self, Weekday::Saturday | Weekday::Sunday)
    }

    /// Weekday of the day `days_after` days later.
    pub fn advance(self, days_after: usize) -> Weekday {
        const ALL: [Weekday; 7] = [
            Weekday::Monday,
            Weekday::Tuesday,
            Weekday::Wednesday,
            Weekday::Thursday,
            Weekday::Friday,
            Weekday::Saturday,
            Weekday::Sunday,
        ];
        ALL[(self.index() + days_after) % 7]
    }
}

/// Options handed to the LP solver.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverOptions {
    /// Primal feasibility tolerance.
    pub feasibility_tol: f64,
    /// Reduced-cost optimality tolerance.
    pub optimality_tol: f64,
    /// Hard iteration cap; 0 means choose from the problem size.
    pub max_iterations: usize,
    /// Switch to Bland's rule after this many iterations without
    /// objective improvement.
    pub stall_iterations: usize,
    /// Row/column max-abs equilibration scaling.
    pub scaling: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            feasibility_tol: 1e-7,
            optimality_tol: 1e-9,
            max_iterations: 0,
            stall_iterations: 300,
            scaling: true,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if self.feasibility_tol <= 0.0 || self.optimality_tol <= 0.0 {
            return Err(Error::validation("solver tolerances must be > 0"));
        }
        Ok(())
    }
}

/// Everything that selects and parameterizes one scenario run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    /// Horizon length in hours; must be a multiple of 24.
    pub horizon: usize,
    /// Weekday of hour 0.
    #[serde(default = "default_anchor")]
    pub anchor: Weekday,
    /// Model the focal country in isolation (all NTCs zeroed).
    #[serde(default)]
    pub island: bool,
    /// CO2 price (EUR/tCO2) applied to generator emissions.
    #[serde(default = "default_co2")]
    pub co2_eur_per_t: f64,
    /// Investment caps for onshore/offshore wind (MW).
    #[serde(default)]
    pub wind_cap_onshore_mw: Option<f64>,
    #[serde(default)]
    pub wind_cap_offshore_mw: Option<f64>,
    /// Scaling of depot/stop charge ratings.
    #[serde(default = "default_scale")]
    pub depot_scale: f64,
    /// Scaling of away (break) charge ratings.
    #[serde(default = "default_scale")]
    pub away_scale: f64,
    /// Value of lost load (EUR/MWh) priced on the shedding slack.
    #[serde(default = "default_voll")]
    pub voll_eur_mwh: f64,
    #[serde(default)]
    pub solver: SolverOptions,
}

fn default_anchor() -> Weekday {
    Weekday::Monday
}

fn default_co2() -> f64 {
    100.0
}

fn default_scale() -> f64 {
    1.0
}

fn default_voll() -> f64 {
    3000.0
}

impl ScenarioConfig {
    pub fn new(kind: ScenarioKind, horizon: usize) -> Self {
        ScenarioConfig {
            kind,
            horizon,
            anchor: default_anchor(),
            island: false,
            co2_eur_per_t: default_co2(),
            wind_cap_onshore_mw: None,
            wind_cap_offshore_mw: None,
            depot_scale: default_scale(),
            away_scale: default_scale(),
            voll_eur_mwh: default_voll(),
            solver: SolverOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 || self.horizon % 24 != 0 {
            return Err(Error::validation(format!(
                "horizon must be a positive multiple of 24, got {}",
                self.horizon
            )));
        }
        if self.depot_scale <= 0.0 || self.away_scale <= 0.0 {
            return Err(Error::validation("availability scalars must be > 0"));
        }
        if self.voll_eur_mwh <= 0.0 {
            return Err(Error::validation("value of lost load must be > 0"));
        }
        if self.co2_eur_per_t < 0.0 {
            return Err(Error::validation("CO2 price must be >= 0"));
        }
        self.solver.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_round_trip() {
        for kind in ScenarioKind::ALL {
            assert_eq!(ScenarioKind::parse(kind.label()).unwrap(), kind);
        }
        assert!(ScenarioKind::parse("BEV").is_err());
    }

    #[test]
    fn horizon_must_be_daily() {
        let mut cfg = ScenarioConfig::new(ScenarioKind::Ref, 100);
        assert!(cfg.validate().is_err());
        cfg.horizon = 120;
        cfg.validate().unwrap();
    }

    #[test]
    fn weekday_advance_wraps() {
        assert_eq!(Weekday::Saturday.advance(2), Weekday::Monday);
        assert!(Weekday::Friday.advance(1).is_weekend());
    }
}
