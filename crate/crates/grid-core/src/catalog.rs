use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chain::FuelChainSpec;
use crate::error::{Error, Result};
use crate::fleet::{scale_availability, FleetSpec};
use crate::grid::{Interconnector, Node};
use crate::scenario::ScenarioConfig;
use crate::series::{read_series, TimeSeries};
use crate::tech::{GenerationTech, StorageTech};

/// The full technology and grid description loaded from one catalog file.
///
/// Time series referenced by file name are loaded eagerly, relative to the
/// catalog file's directory, and keyed by the reference string.
#[derive(Debug, Clone)]
pub struct TechnologyCatalog {
    pub generation: Vec<GenerationTech>,
    pub storage: Vec<StorageTech>,
    pub nodes: Vec<Node>,
    pub interconnectors: Vec<Interconnector>,
    pub series: BTreeMap<String, TimeSeries>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    #[serde(default)]
    generation: Vec<GenerationTech>,
    #[serde(default)]
    storage: Vec<StorageTech>,
    #[serde(default)]
    node: Vec<Node>,
    #[serde(default)]
    interconnector: Vec<Interconnector>,
}

impl TechnologyCatalog {
    /// Number of generation and storage technologies.
    pub fn size(&self) -> (usize, usize) {
        (self.generation.len(), self.storage.len())
    }

    pub fn generation(&self, name: &str) -> Option<&GenerationTech> {
        self.generation.iter().find(|g| g.name == name)
    }

    pub fn expandable_node(&self) -> Result<&Node> {
        let mut it = self.nodes.iter().filter(|n| n.expandable);
        let node = it
            .next()
            .ok_or_else(|| Error::validation("exactly one node must be expandable, found none"))?;
        if it.next().is_some() {
            return Err(Error::validation(
                "exactly one node must be expandable, found several",
            ));
        }
        Ok(node)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes.is_empty() {
            return Err(Error::validation("catalog needs at least one node"));
        }
        self.expandable_node()?;
        for g in &self.generation {
            g.validate()?;
            if let Some(avail) = &g.availability {
                if !self.series.contains_key(avail) {
                    return Err(Error::validation(format!(
                        "technology '{}': availability series '{}' not loaded",
                        g.name, avail
                    )));
                }
            }
        }
        for s in &self.storage {
            s.validate()?;
        }
        let node_names: Vec<&str> = self.nodes.iter().map(|n| n.name.as_str()).collect();
        for n in &self.nodes {
            n.validate()?;
            if !self.series.contains_key(&n.load) {
                return Err(Error::validation(format!(
                    "node '{}': load series '{}' not loaded",
                    n.name, n.load
                )));
            }
            for tech in n.fixed_capacity_mw.keys() {
                if self.generation(tech).is_none() {
                    return Err(Error::validation(format!(
                        "node '{}': fixed capacity for unknown technology '{}'",
                        n.name, tech
                    )));
                }
            }
        }
        for l in &self.interconnectors {
            l.validate()?;
            for end in [&l.from, &l.to] {
                if !node_names.contains(&end.as_str()) {
                    return Err(Error::validation(format!(
                        "interconnector references unknown node '{}'",
                        end
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Loads and validates a technology catalog from a declarative text file,
/// together with every time series it references.
pub fn load_catalog(path: &Path) -> Result<TechnologyCatalog> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let file: CatalogFile = toml::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        detail: e.to_string(),
    })?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));

    let mut series = BTreeMap::new();
    let mut load_ref = |name: &str| -> Result<()> {
        if !series.contains_key(name) {
            let s = read_series(&dir.join(name))?;
            series.insert(name.to_string(), s);
        }
        Ok(())
    };
    for g in &file.generation {
        if let Some(avail) = &g.availability {
            load_ref(avail)?;
        }
    }
    for n in &file.node {
        load_ref(&n.load)?;
    }

    let catalog = TechnologyCatalog {
        generation: file.generation,
        storage: file.storage,
        nodes: file.node,
        interconnectors: file.interconnector,
        series,
    };
    catalog.validate()?;
    Ok(catalog)
}

/// A scenario configuration validated against its catalog and specs.
///
/// Immutable after construction; island and availability-scaling
/// transformations are already applied, and every series is cut to the
/// horizon.
#[derive(Debug, Clone)]
pub struct CheckedScenario {
    pub cfg: ScenarioConfig,
    pub catalog: TechnologyCatalog,
    pub fleet: Option<FleetSpec>,
    pub chain: Option<FuelChainSpec>,
}

impl CheckedScenario {
    pub fn horizon(&self) -> usize {
        self.cfg.horizon
    }

    pub fn series(&self, name: &str) -> &TimeSeries {
        &self.catalog.series[name]
    }
}

/// Validates one scenario against the catalog and the fleet or fuel-chain
/// spec its kind requires, returning the checked bundle.
pub fn validate_scenario(
    cfg: &ScenarioConfig,
    catalog: &TechnologyCatalog,
    fleet: Option<&FleetSpec>,
    chain: Option<&FuelChainSpec>,
) -> Result<CheckedScenario> {
    cfg.validate()?;
    catalog.validate()?;

    let kind = cfg.kind;
    let fleet = if kind.is_battery() {
        let f = fleet.ok_or_else(|| {
            Error::validation(format!("scenario {}: fleet required", kind))
        })?;
        f.validate()?;
        if kind.is_bev() && f.is_ers() {
            return Err(Error::validation(format!(
                "scenario {}: fleet has a catenary rating but the scenario is not ERS",
                kind
            )));
        }
        if kind.is_ers() && !f.is_ers() {
            return Err(Error::validation(format!(
                "scenario {}: ERS scenario needs a fleet with a catenary rating",
                kind
            )));
        }
        let scaled = scale_availability(f, cfg.depot_scale, cfg.away_scale);
        scaled.validate()?;
        Some(scaled)
    } else {
        None
    };

    let chain = if kind.is_fuel() {
        let c = chain.ok_or_else(|| {
            Error::validation(format!("scenario {}: fuel chain required", kind))
        })?;
        c.validate()?;
        Some(c.clone())
    } else {
        None
    };

    let h = cfg.horizon;
    let mut catalog = catalog.clone();
    let mut series = BTreeMap::new();
    for (name, s) in &catalog.series {
        series.insert(name.clone(), s.truncated(h, name)?);
    }
    for g in &catalog.generation {
        if let Some(avail) = &g.availability {
            series[avail].check_availability(avail)?;
        }
    }
    for n in &catalog.nodes {
        series[&n.load].check_demand(&n.load)?;
    }
    catalog.series = series;

    if cfg.island {
        for link in &mut catalog.interconnectors {
            link.ntc_fwd_mw = 0.0;
            link.ntc_bwd_mw = 0.0;
        }
    }

    Ok(CheckedScenario {
        cfg: cfg.clone(),
        catalog,
        fleet,
        chain,
    })
}
