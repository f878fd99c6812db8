//! Structural checks of assembled scenario LPs: bounds, tags, rhs terms
//! and block wiring, independent of any solver.

use std::collections::BTreeMap;

use grid_core::{
    CheckedScenario, FleetSpec, FuelChainSpec, GenerationTech, Interconnector, Node,
    ScenarioConfig, ScenarioKind, StorageTech, TechClass, TechKind, TechnologyCatalog, TimeSeries,
};
use opt_model::{build_core, build_scenario_model, ModelError};
use profile_synth::{HourState, StylizedProfile};

fn gen(name: &str, kind: TechKind, var_cost: f64, cap_max: Option<f64>) -> GenerationTech {
    GenerationTech {
        name: name.into(),
        kind,
        class: None,
        renewable: None,
        invest_eur_mw_yr: 0.0,
        fom_eur_mw_yr: 0.0,
        var_eur_mwh: var_cost,
        fuel_eur_mwh_th: 0.0,
        efficiency: 1.0,
        emission_t_per_mwh: 0.0,
        cap_min_mw: 0.0,
        cap_max_mw: cap_max,
        availability: None,
    }
}

fn single_node_catalog(load: Vec<f64>) -> TechnologyCatalog {
    let h = load.len();
    let mut series = BTreeMap::new();
    series.insert("load".to_string(), TimeSeries::new(load));
    series.insert("sun".to_string(), TimeSeries::new(vec![0.5; h]));
    TechnologyCatalog {
        generation: vec![
            gen("cheap", TechKind::Dispatchable, 20.0, Some(0.5)),
            gen("dear", TechKind::Dispatchable, 50.0, Some(0.5)),
        ],
        storage: vec![],
        nodes: vec![Node {
            name: "DE".into(),
            load: "load".into(),
            expandable: true,
            fixed_capacity_mw: BTreeMap::new(),
        }],
        interconnectors: vec![],
        series,
    }
}

fn checked(kind: ScenarioKind, catalog: TechnologyCatalog, horizon: usize) -> CheckedScenario {
    let mut cfg = ScenarioConfig::new(kind, horizon);
    cfg.horizon = horizon; // allow sub-day toy horizons for direct builds
    CheckedScenario {
        cfg,
        catalog,
        fleet: None,
        chain: None,
    }
}

fn eight_hour_profile(vehicles: f64) -> StylizedProfile {
    StylizedProfile {
        bin_h: 8,
        avg_distance_km: 219.0,
        avg_daily_km: 399.0,
        avg_idle_h: 2.43,
        avg_break_h: 0.75,
        journey_h: 399.0 / 79.0,
        vehicles,
        mileage_share: 1.0,
        catenary_share: 1.0,
        states: vec![
            HourState::Driving,
            HourState::Driving,
            HourState::IdleStop,
            HourState::Driving,
            HourState::Break,
            HourState::Driving,
            HourState::IdleStop,
            HourState::Driving,
        ],
        start_times: vec![(5, 1.0)],
    }
}

#[test]
fn dispatch_toy_structure() {
    let checked = checked(ScenarioKind::Ref, single_node_catalog(vec![0.8]), 1);
    let model = build_scenario_model(&checked, &[]).unwrap();
    let ir = &model.ir;
    // Two dispatch variables bounded by the fixed... endogenous capacity,
    // plus capacity variables and the shedding slack.
    let g1 = ir.var_by_tag("gen:DE:cheap:0000").unwrap();
    assert_eq!(ir.obj[g1.0 as usize], 20.0);
    let cap = ir.var_by_tag("cap:DE:cheap").unwrap();
    assert_eq!(ir.up[cap.0 as usize], 0.5);
    let bal = ir.con_by_tag("bal:DE:0000").unwrap();
    assert_eq!(ir.rhs[bal.0 as usize], 0.8);
    assert!(ir.var_by_tag("shed:DE:0000").is_some());
}

#[test]
fn wind_caps_become_variable_bounds() {
    let mut catalog = single_node_catalog(vec![1.0; 24]);
    catalog.generation.push(GenerationTech {
        class: Some(TechClass::WindOnshore),
        availability: Some("sun".into()),
        ..gen("wind_on", TechKind::VariableRenewable, 0.0, None)
    });
    catalog.generation.push(GenerationTech {
        class: Some(TechClass::WindOffshore),
        availability: Some("sun".into()),
        ..gen("wind_off", TechKind::VariableRenewable, 0.0, Some(200_000.0))
    });
    let mut checked = checked(ScenarioKind::Ref, catalog, 24);
    checked.cfg.wind_cap_onshore_mw = Some(100_000.0);
    checked.cfg.wind_cap_offshore_mw = Some(30_000.0);
    let model = build_scenario_model(&checked, &[]).unwrap();
    let on = model.ir.var_by_tag("cap:DE:wind_on").unwrap();
    let off = model.ir.var_by_tag("cap:DE:wind_off").unwrap();
    assert_eq!(model.ir.up[on.0 as usize], 100_000.0);
    assert_eq!(model.ir.up[off.0 as usize], 30_000.0);
}

#[test]
fn island_fixes_flows_to_zero() {
    let mut catalog = single_node_catalog(vec![1.0; 24]);
    catalog.series.insert("load_nb".into(), TimeSeries::new(vec![0.5; 24]));
    catalog.nodes.push(Node {
        name: "NB".into(),
        load: "load_nb".into(),
        expandable: false,
        fixed_capacity_mw: [("cheap".to_string(), 2.0)].into_iter().collect(),
    });
    // Zero NTCs stand in for the island transformation applied upstream.
    catalog.interconnectors.push(Interconnector {
        from: "DE".into(),
        to: "NB".into(),
        ntc_fwd_mw: 0.0,
        ntc_bwd_mw: 0.0,
        loss: 0.0,
    });
    let checked = checked(ScenarioKind::Ref, catalog, 24);
    let model = build_scenario_model(&checked, &[]).unwrap();
    for (tag, up) in model.ir.var_tags.iter().zip(&model.ir.up) {
        if tag.starts_with("flow:") {
            assert_eq!(*up, 0.0, "{}", tag);
        }
    }
    // Fixed-capacity node generation is a plain variable bound.
    let g = model.ir.var_by_tag("gen:NB:cheap:0003").unwrap();
    assert_eq!(model.ir.up[g.0 as usize], 2.0);
    assert!(model.ir.con_by_tag("genmax:NB:cheap:0003").is_none());
}

#[test]
fn storage_rows_and_fixed_storage_bounds() {
    let mut catalog = single_node_catalog(vec![1.0; 24]);
    catalog.storage.push(StorageTech {
        name: "battery".into(),
        energy_eur_mwh_yr: 20_000.0,
        charge_eur_mw_yr: 15_000.0,
        discharge_eur_mw_yr: 15_000.0,
        eta_charge: 0.95,
        eta_discharge: 0.95,
        self_discharge: 0.0,
        energy_min_mwh: 0.0,
        energy_max_mwh: None,
        power_min_mw: 0.0,
        power_max_mw: None,
        fixed: false,
    });
    catalog.storage.push(StorageTech {
        name: "phs".into(),
        energy_eur_mwh_yr: 0.0,
        charge_eur_mw_yr: 0.0,
        discharge_eur_mw_yr: 0.0,
        eta_charge: 0.85,
        eta_discharge: 0.9,
        self_discharge: 0.0,
        energy_min_mwh: 0.0,
        energy_max_mwh: Some(100.0),
        power_min_mw: 0.0,
        power_max_mw: Some(10.0),
        fixed: true,
    });
    let checked = checked(ScenarioKind::Ref, catalog, 24);
    let core = build_core(&checked).unwrap();
    // Optimizable storage gets capacity variables and limit rows.
    assert!(core.ir.var_by_tag("stoe:DE:battery").is_some());
    assert!(core.ir.con_by_tag("semax:DE:battery:0000").is_some());
    // Fixed storage has no capacity variables; its bounds carry the caps.
    assert!(core.ir.var_by_tag("stoe:DE:phs").is_none());
    let lvl = core.ir.var_by_tag("slvl:DE:phs:0005").unwrap();
    assert_eq!(core.ir.up[lvl.0 as usize], 100.0);
    let sin = core.ir.var_by_tag("sin:DE:phs:0005").unwrap();
    assert_eq!(core.ir.up[sin.0 as usize], 10.0);
    // Cyclic dynamics: hour 0 references the last hour's level.
    let dyn0 = core.ir.con_by_tag("sdyn:DE:phs:0000").unwrap();
    let lvl_last = core.ir.var_by_tag("slvl:DE:phs:0023").unwrap();
    assert!(core
        .ir
        .triplets
        .iter()
        .any(|(c, v, _)| *c == dyn0.0 && *v == lvl_last.0));
}

#[test]
fn bev_block_without_v2g_has_no_feed_in_vars() {
    let catalog = single_node_catalog(vec![1.0; 48]);
    let mut c = checked(ScenarioKind::BevFlex, catalog, 48);
    c.fleet = Some(FleetSpec::default_bev());
    let profiles = vec![eight_hour_profile(10.0)];
    let model = build_scenario_model(&c, &profiles).unwrap();
    assert!(model.ir.var_tags.iter().any(|t| t.starts_with("g2b:")));
    assert!(model.ir.var_tags.iter().any(|t| t.starts_with("soc:")));
    assert!(!model.ir.var_tags.iter().any(|t| t.starts_with("v2g:")));
    assert_eq!(model.info.profile_ids, vec!["h08_s05".to_string()]);
    assert_eq!(model.info.fleet_vehicles, 10.0);
}

#[test]
fn v2g_variables_bounded_by_connection() {
    let catalog = single_node_catalog(vec![1.0; 48]);
    let mut c = checked(ScenarioKind::BevFlexV2g, catalog, 48);
    c.fleet = Some(FleetSpec::default_bev());
    let profiles = vec![eight_hour_profile(10.0)];
    let model = build_scenario_model(&c, &profiles).unwrap();
    let ir = &model.ir;
    for (j, tag) in ir.var_tags.iter().enumerate() {
        if let Some(rest) = tag.strip_prefix("v2g:") {
            let g2b = ir.var_by_tag(&format!("g2b:{}", rest)).unwrap();
            assert_eq!(ir.up[j], ir.up[g2b.0 as usize], "{}", tag);
        }
    }
}

#[test]
fn drive_exceeding_battery_is_rejected() {
    let catalog = single_node_catalog(vec![1.0; 48]);
    let mut c = checked(ScenarioKind::BevFlex, catalog, 48);
    let mut fleet = FleetSpec::default_bev();
    fleet.battery_kwh = 50.0; // far below one driving hour of the profile
    fleet.consumption_off_catenary_kwh_km = 1.31;
    c.fleet = Some(fleet);
    let profiles = vec![eight_hour_profile(1.0)];
    match build_scenario_model(&c, &profiles) {
        Err(ModelError::DriveExceedsBattery { profile, .. }) => {
            assert_eq!(profile, "h08_s05");
        }
        other => panic!("expected DriveExceedsBattery, got {:?}", other.is_ok()),
    }
}

#[test]
fn ers_headroom_is_catenary_rating_minus_wheel_draw() {
    let catalog = single_node_catalog(vec![1.0; 48]);
    let mut c = checked(ScenarioKind::ErsFlex, catalog, 48);
    c.fleet = Some(FleetSpec::default_ers());
    // Fully electrified route at 79 km/h plus change. One vehicle drives
    // 399/5 = 79.8 km per driving hour: wheel draw 113.3 kW, headroom
    // 400 - 113.3 = 286.7 kW per vehicle.
    let profiles = vec![eight_hour_profile(1.0)];
    let model = build_scenario_model(&c, &profiles).unwrap();
    let ir = &model.ir;
    let scale = profile_synth::weekday_scale(48, grid_core::Weekday::Monday);
    let mut checked_any = false;
    for (j, tag) in ir.var_tags.iter().enumerate() {
        if tag.starts_with("c2b:") {
            let h: usize = tag.rsplit(':').next().unwrap().parse().unwrap();
            let day_offset = (h % 24) as i64 - 5;
            if !(0..8).contains(&day_offset) {
                continue;
            }
            let km = 399.0 / 5.0 * scale;
            let wheel_mw = km * 1.42 / 1000.0;
            let conn_mw = scale * 400.0 / 1000.0;
            assert!((ir.up[j] - (conn_mw - wheel_mw)).abs() < 1e-12, "{}", tag);
            checked_any = true;
        }
    }
    assert!(checked_any);
    // Wheel demand is exogenous on the balance rhs: two weekdays of
    // 399 km fully under the overhead line at 1.42 kWh/km.
    let wheel_total: f64 = model.info.hdv_fixed_draw_mw.iter().sum();
    let expected = 399.0 * 2.0 * scale * 1.42 / 1000.0;
    assert!((wheel_total - expected).abs() < 1e-9);
}

#[test]
fn inflexible_scenarios_have_no_charging_variables() {
    let catalog = single_node_catalog(vec![1.0; 48]);
    let mut c = checked(ScenarioKind::BevInflex, catalog, 48);
    c.fleet = Some(FleetSpec::default_bev());
    let profiles = vec![eight_hour_profile(2.0)];
    let model = build_scenario_model(&c, &profiles).unwrap();
    assert!(!model.ir.var_tags.iter().any(|t| t.starts_with("g2b:")));
    assert!(!model.ir.var_tags.iter().any(|t| t.starts_with("soc:")));
    // The balanced plan's draw sits on the balance rhs.
    let drawn: f64 = model.info.hdv_fixed_draw_mw.iter().sum();
    let scale = profile_synth::weekday_scale(48, grid_core::Weekday::Monday);
    let expected = 2.0 * 399.0 * 1.31 / 1000.0 / 0.83 * scale * 2.0; // 2 weekdays
    assert!((drawn - expected).abs() < 1e-9, "drawn {}", drawn);
    let bal = model.ir.con_by_tag("bal:DE:0012").unwrap();
    assert!(model.ir.rhs[bal.0 as usize] >= 1.0);
}

#[test]
fn onsite_buffer_caps_hydrogen_level() {
    let catalog = single_node_catalog(vec![1.0; 48]);
    let mut c = checked(ScenarioKind::FcevOnsite, catalog, 48);
    let mut chain = FuelChainSpec::default_h2();
    chain.onsite_buffer_h = 24.0;
    c.chain = Some(chain.clone());
    let profiles = vec![eight_hour_profile(5.0)];
    let model = build_scenario_model(&c, &profiles).unwrap();
    let ir = &model.ir;
    // Average hourly demand in MWh of hydrogen.
    let scale = profile_synth::weekday_scale(48, grid_core::Weekday::Monday);
    let total_km = 5.0 * 399.0 * scale * 2.0;
    let avg = total_km * 6.8 / 100.0 * 33.33 / 1000.0 / 48.0;
    let lvl = ir.var_by_tag("h2lvl:0000").unwrap();
    assert!((ir.up[lvl.0 as usize] - 24.0 * avg).abs() < 1e-9);
    assert!(ir.var_by_tag("h2cap").is_none());
    // On-site electrolyzers draw no transport electricity.
    for (_, factor) in &model.info.ely_draw_factor {
        assert_eq!(*factor, 1.0);
    }
}

#[test]
fn central_mode_adds_transport_electricity() {
    let catalog = single_node_catalog(vec![1.0; 48]);
    let mut c = checked(ScenarioKind::FcevCentral, catalog, 48);
    c.chain = Some(FuelChainSpec::default_h2());
    let profiles = vec![eight_hour_profile(5.0)];
    let model = build_scenario_model(&c, &profiles).unwrap();
    assert!(model.ir.var_by_tag("h2cap").is_some());
    let chain = c.chain.as_ref().unwrap();
    for (tech, factor) in &model.info.ely_draw_factor {
        let eta = chain
            .electrolyzers
            .iter()
            .find(|e| &e.name == tech)
            .unwrap()
            .efficiency;
        let expected = 1.0 + chain.transport_el_per_mwh_h2() * eta;
        assert!((factor - expected).abs() < 1e-12);
    }
}

#[test]
fn ptl_block_has_synthesis_and_liquid_storage() {
    let catalog = single_node_catalog(vec![1.0; 48]);
    let mut c = checked(ScenarioKind::IcevPtl, catalog, 48);
    c.chain = Some(FuelChainSpec::default_ptl());
    let profiles = vec![eight_hour_profile(5.0)];
    let model = build_scenario_model(&c, &profiles).unwrap();
    assert!(model.ir.var_by_tag("syncap").is_some());
    assert!(model.ir.var_by_tag("liqcap").is_some());
    assert!(model.ir.con_by_tag("liqdyn:0000").is_some());
    assert!(model.ir.con_by_tag("synmax:0047").is_some());
}

#[test]
fn objective_scaling_keeps_structure() {
    let catalog = single_node_catalog(vec![0.8]);
    let c = checked(ScenarioKind::Ref, catalog, 1);
    let model = build_scenario_model(&c, &[]).unwrap();
    let mut scaled = model.ir.clone();
    scaled.scale_objective(2.0);
    for (a, b) in model.ir.obj.iter().zip(&scaled.obj) {
        assert_eq!(*b, 2.0 * *a);
    }
    assert_eq!(model.ir.rhs, scaled.rhs);
}
