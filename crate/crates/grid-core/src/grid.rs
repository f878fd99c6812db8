use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One country-level node. Exactly one node per scenario is expandable;
/// all others run with a fixed generation portfolio.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Node {
    pub name: String,
    /// Name of the load series (MW).
    pub load: String,
    #[serde(default)]
    pub expandable: bool,
    /// Fixed generation capacities (tech name -> MW) for non-expandable
    /// nodes. Storage lives only at the expandable node.
    #[serde(default)]
    pub fixed_capacity_mw: BTreeMap<String, f64>,
}

impl Node {
    pub fn validate(&self) -> Result<()> {
        for (tech, cap) in &self.fixed_capacity_mw {
            if *cap < 0.0 {
                return Err(Error::validation(format!(
                    "node '{}': fixed capacity for '{}' must be >= 0, got {}",
                    self.name, tech, cap
                )));
            }
        }
        Ok(())
    }
}

/// A directed pair of net transfer capacities between two nodes.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Interconnector {
    pub from: String,
    pub to: String,
    /// NTC from -> to (MW).
    pub ntc_fwd_mw: f64,
    /// NTC to -> from (MW).
    pub ntc_bwd_mw: f64,
    /// Fraction of the flow lost in transit, in [0, 1).
    #[serde(default)]
    pub loss: f64,
}

impl Interconnector {
    pub fn validate(&self) -> Result<()> {
        if self.ntc_fwd_mw < 0.0 || self.ntc_bwd_mw < 0.0 {
            return Err(Error::validation(format!(
                "interconnector {}-{}: NTC must be >= 0",
                self.from, self.to
            )));
        }
        if !(0.0..1.0).contains(&self.loss) {
            return Err(Error::validation(format!(
                "interconnector {}-{}: loss factor in [0,1), got {}",
                self.from, self.to, self.loss
            )));
        }
        Ok(())
    }
}
