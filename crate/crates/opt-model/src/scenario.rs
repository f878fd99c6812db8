use grid_core::{CheckedScenario, ScenarioConfig, ScenarioKind};
use profile_synth::{expand_to_horizon, fuel_demand_series, FuelKind, StylizedProfile};

use crate::bev::{add_bev_block, add_ers_block, catenary_wheel_draw};
use crate::core::build_core;
use crate::fuel::{add_h2_block, add_ptl_block, H2Mode};
use crate::ir::ModelIr;
use crate::{ModelError, Result};

/// Post-processing metadata of an assembled scenario model.
#[derive(Debug, Clone)]
pub struct ModelInfo {
    pub kind: ScenarioKind,
    pub horizon: usize,
    pub node_names: Vec<String>,
    pub expandable: String,
    /// Multiply objective values by this to express them per year.
    pub annualization: f64,
    /// Exogenous HDV grid draw per hour (balanced-plan charging and
    /// catenary wheel demand), already on the balance rhs.
    pub hdv_fixed_draw_mw: Vec<f64>,
    pub fleet_vehicles: f64,
    /// Expanded profile ids carried by the model's HDV block.
    pub profile_ids: Vec<String>,
    /// Electricity drawn at the balance per MW of electrolyzer input.
    pub ely_draw_factor: Vec<(String, f64)>,
}

/// A scenario LP plus the metadata reports need.
pub struct ScenarioModel {
    pub ir: ModelIr,
    pub info: ModelInfo,
}

/// Assembles the full scenario LP: the power-sector core plus exactly the
/// HDV block the scenario kind selects. Battery scenarios need stylized
/// profiles with assigned start times; the reference runs the bare core.
pub fn build_scenario_model(
    checked: &CheckedScenario,
    profiles: &[StylizedProfile],
) -> Result<ScenarioModel> {
    let cfg = &checked.cfg;
    let kind = cfg.kind;
    let h_len = cfg.horizon;

    let mut core = build_core(checked)?;
    let mut info = ModelInfo {
        kind,
        horizon: h_len,
        node_names: checked.catalog.nodes.iter().map(|n| n.name.clone()).collect(),
        expandable: checked.catalog.nodes[core.expandable].name.clone(),
        annualization: 1.0 / core.capacity_cost_scale,
        hdv_fixed_draw_mw: vec![0.0; h_len],
        fleet_vehicles: 0.0,
        profile_ids: Vec::new(),
        ely_draw_factor: Vec::new(),
    };

    if kind != ScenarioKind::Ref && profiles.is_empty() {
        return Err(ModelError::Invalid(format!(
            "scenario {} needs stylized profiles",
            kind
        )));
    }
    if kind != ScenarioKind::Ref {
        info.fleet_vehicles = profiles.iter().map(|p| p.vehicles).sum();
    }

    match kind {
        ScenarioKind::Ref => {}
        ScenarioKind::BevFlex | ScenarioKind::BevFlexV2g | ScenarioKind::ErsFlex
        | ScenarioKind::ErsFlexV2g => {
            let fleet = checked.fleet.as_ref().expect("validated battery scenario");
            let series = expand_to_horizon(profiles, fleet, h_len, cfg.anchor)?;
            info.profile_ids = series.profiles.iter().map(|p| p.id.clone()).collect();
            if kind.is_ers() {
                let wheel = catenary_wheel_draw(&series, fleet);
                apply_fixed_draw(&mut core, &wheel);
                info.hdv_fixed_draw_mw = wheel;
                add_ers_block(&mut core, &series, fleet, kind.v2g())?;
            } else {
                add_bev_block(&mut core, &series, fleet, kind.v2g())?;
            }
        }
        ScenarioKind::BevInflex | ScenarioKind::ErsInflex => {
            let fleet = checked.fleet.as_ref().expect("validated battery scenario");
            let series = expand_to_horizon(profiles, fleet, h_len, cfg.anchor)?;
            info.profile_ids = series.profiles.iter().map(|p| p.id.clone()).collect();
            let plan = charge_sched::balanced_charging(&series, fleet)
                .map_err(|e| ModelError::Invalid(e.to_string()))?;
            let mut draw: Vec<f64> =
                (0..h_len).map(|h| plan.total_grid_draw_mw(h)).collect();
            if kind.is_ers() {
                for (d, w) in draw.iter_mut().zip(catenary_wheel_draw(&series, fleet)) {
                    *d += w;
                }
            }
            apply_fixed_draw(&mut core, &draw);
            info.hdv_fixed_draw_mw = draw;
        }
        ScenarioKind::FcevCentral | ScenarioKind::FcevOnsite => {
            let chain = checked.chain.as_ref().expect("validated fuel scenario");
            let kg = fuel_demand_series(profiles, chain, h_len, cfg.anchor, FuelKind::Hydrogen)?;
            let demand_mwh: Vec<f64> = kg
                .values()
                .iter()
                .map(|kg| kg * chain.h2_kwh_per_kg / 1000.0)
                .collect();
            let mode = if kind == ScenarioKind::FcevCentral {
                H2Mode::Central
            } else {
                H2Mode::Onsite
            };
            info.ely_draw_factor = add_h2_block(&mut core, &demand_mwh, chain, mode)?;
        }
        ScenarioKind::IcevPtl => {
            let chain = checked.chain.as_ref().expect("validated fuel scenario");
            let liters = fuel_demand_series(profiles, chain, h_len, cfg.anchor, FuelKind::Diesel)?;
            let demand_mwh: Vec<f64> = liters
                .values()
                .iter()
                .map(|l| l * chain.diesel_kwh_per_l / 1000.0)
                .collect();
            info.ely_draw_factor = add_ptl_block(&mut core, &demand_mwh, chain)?;
        }
    }

    core.ir.validate()?;
    Ok(ScenarioModel { ir: core.ir, info })
}

fn apply_fixed_draw(core: &mut crate::core::CoreModel, draw_mw: &[f64]) {
    for (h, d) in draw_mw.iter().enumerate() {
        let row = core.balance_at_expandable(h);
        core.ir.bump_rhs(row, *d);
    }
}

/// Overlays sweep settings onto a scenario configuration: the island flag
/// zeroes NTCs during validation, wind caps bound the capacity variables,
/// and the availability scalars rescale the fleet's charge ratings.
pub fn apply_sensitivities(
    cfg: &ScenarioConfig,
    island: Option<bool>,
    wind_cap_onshore_mw: Option<f64>,
    wind_cap_offshore_mw: Option<f64>,
    depot_scale: Option<f64>,
    away_scale: Option<f64>,
) -> ScenarioConfig {
    let mut out = cfg.clone();
    if let Some(island) = island {
        out.island = island;
    }
    if wind_cap_onshore_mw.is_some() {
        out.wind_cap_onshore_mw = wind_cap_onshore_mw;
    }
    if wind_cap_offshore_mw.is_some() {
        out.wind_cap_offshore_mw = wind_cap_offshore_mw;
    }
    if let Some(s) = depot_scale {
        out.depot_scale = s;
    }
    if let Some(s) = away_scale {
        out.away_scale = s;
    }
    out
}
