use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use grid_core::Error;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::Result;

/// Goods classes of the relation table. Each class carries a typical
/// loading/unloading duration per stop; the values are an expert-guess
/// table and can be overridden via [`IdleTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GoodsClass {
    DropSwap,
    ParcelHub,
    BulkTipper,
    ContainerShuttle,
    PalletExpress,
    RetailDistribution,
    ChilledGoods,
    GeneralCargo,
    ConstructionMaterials,
    TankerLiquids,
    Machinery,
    AutomotiveParts,
    ProjectCargo,
    HeavyHaul,
}

impl GoodsClass {
    pub const ALL: [GoodsClass; 14] = [
        GoodsClass::DropSwap,
        GoodsClass::ParcelHub,
        GoodsClass::BulkTipper,
        GoodsClass::ContainerShuttle,
        GoodsClass::PalletExpress,
        GoodsClass::RetailDistribution,
        GoodsClass::ChilledGoods,
        GoodsClass::GeneralCargo,
        GoodsClass::ConstructionMaterials,
        GoodsClass::TankerLiquids,
        GoodsClass::Machinery,
        GoodsClass::AutomotiveParts,
        GoodsClass::ProjectCargo,
        GoodsClass::HeavyHaul,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GoodsClass::DropSwap => "drop-swap",
            GoodsClass::ParcelHub => "parcel-hub",
            GoodsClass::BulkTipper => "bulk-tipper",
            GoodsClass::ContainerShuttle => "container-shuttle",
            GoodsClass::PalletExpress => "pallet-express",
            GoodsClass::RetailDistribution => "retail-distribution",
            GoodsClass::ChilledGoods => "chilled-goods",
            GoodsClass::GeneralCargo => "general-cargo",
            GoodsClass::ConstructionMaterials => "construction-materials",
            GoodsClass::TankerLiquids => "tanker-liquids",
            GoodsClass::Machinery => "machinery",
            GoodsClass::AutomotiveParts => "automotive-parts",
            GoodsClass::ProjectCargo => "project-cargo",
            GoodsClass::HeavyHaul => "heavy-haul",
        }
    }

    pub fn parse(s: &str) -> Option<GoodsClass> {
        GoodsClass::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Default loading/unloading duration per stop (hours).
    pub fn default_idle_h(self) -> f64 {
        match self {
            GoodsClass::DropSwap => 0.012,
            GoodsClass::ParcelHub => 0.025,
            GoodsClass::BulkTipper => 0.05,
            GoodsClass::ContainerShuttle => 0.09,
            GoodsClass::PalletExpress => 0.15,
            GoodsClass::RetailDistribution => 0.25,
            GoodsClass::ChilledGoods => 0.4,
            GoodsClass::GeneralCargo => 0.6,
            GoodsClass::ConstructionMaterials => 0.85,
            GoodsClass::TankerLiquids => 1.15,
            GoodsClass::Machinery => 1.5,
            GoodsClass::AutomotiveParts => 1.95,
            GoodsClass::ProjectCargo => 2.5,
            GoodsClass::HeavyHaul => 3.2,
        }
    }
}

/// Idle duration per stop by goods class (hours).
#[derive(Debug, Clone)]
pub struct IdleTable {
    per_class: BTreeMap<GoodsClass, f64>,
}

impl Default for IdleTable {
    fn default() -> Self {
        let per_class = GoodsClass::ALL
            .into_iter()
            .map(|c| (c, c.default_idle_h()))
            .collect();
        IdleTable { per_class }
    }
}

impl IdleTable {
    /// A table with the same idle duration for every class.
    pub fn uniform(hours_per_stop: f64) -> Self {
        let per_class = GoodsClass::ALL
            .into_iter()
            .map(|c| (c, hours_per_stop))
            .collect();
        IdleTable { per_class }
    }

    pub fn set(&mut self, class: GoodsClass, hours: f64) {
        self.per_class.insert(class, hours);
    }

    pub fn idle_per_stop(&self, class: GoodsClass) -> f64 {
        self.per_class[&class]
    }
}

/// One daily transport relation: a distance, the goods moved on it, a
/// vehicle weight, and the motorway share relevant for overhead lines.
#[derive(Debug, Clone)]
pub struct TransportRelation {
    pub distance_km: f64,
    pub goods_class: GoodsClass,
    /// Number of vehicles serving the relation.
    pub weight: f64,
    /// Fraction of the relation running on (electrifiable) motorways.
    pub motorway_share: f64,
}

impl TransportRelation {
    pub fn validate(&self) -> Result<()> {
        if self.distance_km <= 0.0 {
            return Err(Error::validation(format!(
                "relation distance must be > 0, got {}",
                self.distance_km
            )));
        }
        if !(0.0..=1.0).contains(&self.motorway_share) {
            return Err(Error::validation(format!(
                "motorway share in [0,1], got {}",
                self.motorway_share
            )));
        }
        if self.weight < 0.0 {
            return Err(Error::validation("relation weight must be >= 0"));
        }
        Ok(())
    }
}

/// Reads a relation table: columnar text with a header line and the
/// columns `distance_km,goods_class,weight,motorway_share`.
pub fn read_relations(path: &Path) -> Result<Vec<TransportRelation>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if idx == 0 || line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(Error::ParseLine {
                path: path.to_path_buf(),
                line: idx + 1,
                detail: format!("expected 4 columns, got {}", fields.len()),
            });
        }
        let bad = |field: &str, what: &str| Error::ParseLine {
            path: path.to_path_buf(),
            line: idx + 1,
            detail: format!("field '{}': invalid {}", field, what),
        };
        let relation = TransportRelation {
            distance_km: fields[0].parse().map_err(|_| bad(fields[0], "distance_km"))?,
            goods_class: GoodsClass::parse(fields[1]).ok_or_else(|| bad(fields[1], "goods_class"))?,
            weight: fields[2].parse().map_err(|_| bad(fields[2], "weight"))?,
            motorway_share: fields[3]
                .parse()
                .map_err(|_| bad(fields[3], "motorway_share"))?,
        };
        relation.validate().map_err(|e| Error::ParseLine {
            path: path.to_path_buf(),
            line: idx + 1,
            detail: e.to_string(),
        })?;
        out.push(relation);
    }
    if out.is_empty() {
        return Err(Error::validation("relations non-empty"));
    }
    Ok(out)
}

/// Writes a relation table in the format read by [`read_relations`].
pub fn write_relations(path: &Path, relations: &[TransportRelation]) -> Result<()> {
    let mut out = String::from("distance_km,goods_class,weight,motorway_share\n");
    for r in relations {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.distance_km,
            r.goods_class.name(),
            r.weight,
            r.motorway_share
        ));
    }
    fs::write(path, out).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Draws a synthetic relation set with log-uniform distances. Used for
/// generate-then-refit oracles and for exercising the pipeline at
/// arbitrary scales; deterministic for a fixed seed.
pub fn generate_synthetic_relations(
    seed: u64,
    count: usize,
    min_km: f64,
    max_km: f64,
) -> Vec<TransportRelation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = GoodsClass::ALL;
    (0..count)
        .map(|_| {
            let u: f64 = rng.gen();
            let distance_km = min_km * (max_km / min_km).powf(u);
            let goods_class = classes[rng.gen_range(0..classes.len())];
            let weight = rng.gen_range(10.0..1000.0_f64).round();
            let motorway_share = (distance_km / (distance_km + 40.0)).min(0.9);
            TransportRelation {
                distance_km,
                goods_class,
                weight,
                motorway_share,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_table_round_trip() {
        let dir = std::env::temp_dir().join(format!("synth_rel_{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("relations.csv");
        let rels = generate_synthetic_relations(7, 25, 5.0, 600.0);
        write_relations(&path, &rels).unwrap();
        let back = read_relations(&path).unwrap();
        assert_eq!(back.len(), 25);
        assert_eq!(back[3].goods_class, rels[3].goods_class);
        assert!((back[3].distance_km - rels[3].distance_km).abs() < 1e-9);
    }

    #[test]
    fn empty_relation_file_rejected() {
        let dir = std::env::temp_dir().join(format!("synth_rel_empty_{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("empty.csv");
        fs::write(&path, "distance_km,goods_class,weight,motorway_share\n").unwrap();
        let err = read_relations(&path).unwrap_err();
        assert!(err.to_string().contains("relations non-empty"));
    }

    #[test]
    fn malformed_line_reports_position() {
        let dir = std::env::temp_dir().join(format!("synth_rel_bad_{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.csv");
        fs::write(
            &path,
            "distance_km,goods_class,weight,motorway_share\n10,unknown-goods,5,0.2\n",
        )
        .unwrap();
        let err = read_relations(&path).unwrap_err().to_string();
        assert!(err.contains(":2:"), "{}", err);
    }

    #[test]
    fn generator_is_deterministic() {
        let a = generate_synthetic_relations(42, 10, 5.0, 500.0);
        let b = generate_synthetic_relations(42, 10, 5.0, 500.0);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.distance_km, y.distance_km);
            assert_eq!(x.weight, y.weight);
        }
    }
}
