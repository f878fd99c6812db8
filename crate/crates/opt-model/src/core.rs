use grid_core::{CheckedScenario, TechKind, HOURS_PER_YEAR};

use crate::ir::{ConId, ModelIr, Sense};
use crate::{ModelError, Result};

/// The power-sector core of a scenario LP, with the handles the HDV blocks
/// need to couple into the hourly energy balances.
pub struct CoreModel {
    pub ir: ModelIr,
    /// Balance constraints, `balance[node][hour]`.
    pub balance: Vec<Vec<ConId>>,
    /// Index of the expandable node in the catalog's node list.
    pub expandable: usize,
    /// Factor applied to annualized capacity costs (horizon / year).
    pub capacity_cost_scale: f64,
}

impl CoreModel {
    pub fn balance_at_expandable(&self, hour: usize) -> ConId {
        self.balance[self.expandable][hour]
    }
}

/// Builds the capacity-expansion core: hourly energy balances per node,
/// generation limited by (endogenous or fixed) capacity times
/// availability, storage dynamics with cyclic levels, interconnector
/// flows, a value-of-lost-load shedding slack, and the cost objective.
///
/// Annualized capacity costs are scaled by `horizon / 8760` so that
/// capacity and operation trade off consistently at any horizon; reports
/// extrapolate objective values back to full years.
pub fn build_core(checked: &CheckedScenario) -> Result<CoreModel> {
    let cfg = &checked.cfg;
    let cat = &checked.catalog;
    let h_len = cfg.horizon;
    let scale = h_len as f64 / HOURS_PER_YEAR;

    let expandable = cat
        .nodes
        .iter()
        .position(|n| n.expandable)
        .ok_or_else(|| ModelError::Invalid("no expandable node".into()))?;

    let mut ir = ModelIr::new();

    // Hourly energy balances (supply positive, rhs = load).
    let mut balance = Vec::with_capacity(cat.nodes.len());
    for node in &cat.nodes {
        let load = checked.series(&node.load);
        let mut rows = Vec::with_capacity(h_len);
        for h in 0..h_len {
            rows.push(ir.add_con(
                format!("bal:{}:{:04}", node.name, h),
                Sense::Eq,
                load.get(h),
            ));
        }
        balance.push(rows);
    }

    // Generation and endogenous capacity.
    for (ni, node) in cat.nodes.iter().enumerate() {
        for tech in &cat.generation {
            let fixed_cap = if node.expandable {
                None
            } else {
                match node.fixed_capacity_mw.get(&tech.name) {
                    Some(cap) => Some(*cap),
                    None => continue,
                }
            };
            let avail = match (&tech.availability, tech.kind) {
                (Some(name), _) => Some(checked.series(name)),
                (None, TechKind::VariableRenewable) => {
                    return Err(ModelError::MissingSeries(tech.name.clone()))
                }
                (None, TechKind::Dispatchable) => None,
            };
            let cap_var = if node.expandable {
                let mut up = tech.cap_max_mw.unwrap_or(f64::INFINITY);
                // Sensitivity caps on wind expansion.
                match tech.class {
                    Some(grid_core::TechClass::WindOnshore) => {
                        if let Some(cap) = cfg.wind_cap_onshore_mw {
                            up = up.min(cap);
                        }
                    }
                    Some(grid_core::TechClass::WindOffshore) => {
                        if let Some(cap) = cfg.wind_cap_offshore_mw {
                            up = up.min(cap);
                        }
                    }
                    _ => {}
                }
                let lo = tech.cap_min_mw.min(up);
                Some(ir.add_var(
                    format!("cap:{}:{}", node.name, tech.name),
                    lo,
                    up,
                    (tech.invest_eur_mw_yr + tech.fom_eur_mw_yr) * scale,
                ))
            } else {
                None
            };

            let marginal = tech.marginal_cost(cfg.co2_eur_per_t);
            for h in 0..h_len {
                let a = avail.map_or(1.0, |s| s.get(h));
                let tag = format!("gen:{}:{}:{:04}", node.name, tech.name, h);
                let g = match (cap_var, fixed_cap) {
                    (Some(cap), None) if a > 0.0 => {
                        // Endogenous capacity: dispatch limited by the
                        // capacity variable times availability.
                        let g = ir.add_var(tag, 0.0, f64::INFINITY, marginal);
                        let row = ir.add_con(
                            format!("genmax:{}:{}:{:04}", node.name, tech.name, h),
                            Sense::Le,
                            0.0,
                        );
                        ir.coef(row, g, 1.0);
                        ir.coef(row, cap, -a);
                        g
                    }
                    // Zero availability pins the dispatch; fixed capacity
                    // turns the limit into a plain variable bound.
                    (Some(_), None) => ir.add_var(tag, 0.0, 0.0, marginal),
                    (None, Some(cap)) => ir.add_var(tag, 0.0, cap * a, marginal),
                    _ => unreachable!(),
                };
                ir.coef(balance[ni][h], g, 1.0);
            }
        }
    }

    // Storage lives at the expandable node.
    {
        let node = &cat.nodes[expandable];
        for sto in &cat.storage {
            let (cap_e, cap_c, cap_d, lvl_up, pow_up) = if sto.fixed {
                let e = sto.energy_max_mwh.unwrap();
                let p = sto.power_max_mw.unwrap();
                (None, None, None, e, p)
            } else {
                let e = ir.add_var(
                    format!("stoe:{}:{}", node.name, sto.name),
                    sto.energy_min_mwh,
                    sto.energy_max_mwh.unwrap_or(f64::INFINITY),
                    sto.energy_eur_mwh_yr * scale,
                );
                let c = ir.add_var(
                    format!("stoc:{}:{}", node.name, sto.name),
                    sto.power_min_mw,
                    sto.power_max_mw.unwrap_or(f64::INFINITY),
                    sto.charge_eur_mw_yr * scale,
                );
                let d = ir.add_var(
                    format!("stod:{}:{}", node.name, sto.name),
                    sto.power_min_mw,
                    sto.power_max_mw.unwrap_or(f64::INFINITY),
                    sto.discharge_eur_mw_yr * scale,
                );
                (Some(e), Some(c), Some(d), f64::INFINITY, f64::INFINITY)
            };

            let mut lvl_vars = Vec::with_capacity(h_len);
            let mut in_vars = Vec::with_capacity(h_len);
            let mut out_vars = Vec::with_capacity(h_len);
            for h in 0..h_len {
                let sin = ir.add_var(
                    format!("sin:{}:{}:{:04}", node.name, sto.name, h),
                    0.0,
                    pow_up,
                    0.0,
                );
                let sout = ir.add_var(
                    format!("sout:{}:{}:{:04}", node.name, sto.name, h),
                    0.0,
                    pow_up,
                    0.0,
                );
                let lvl = ir.add_var(
                    format!("slvl:{}:{}:{:04}", node.name, sto.name, h),
                    0.0,
                    lvl_up,
                    0.0,
                );
                ir.coef(balance[expandable][h], sin, -1.0);
                ir.coef(balance[expandable][h], sout, 1.0);
                in_vars.push(sin);
                out_vars.push(sout);
                lvl_vars.push(lvl);
            }
            for h in 0..h_len {
                // Cyclic level dynamics: level wraps from the last hour.
                let prev = if h == 0 { h_len - 1 } else { h - 1 };
                let dyn_row = ir.add_con(
                    format!("sdyn:{}:{}:{:04}", node.name, sto.name, h),
                    Sense::Eq,
                    0.0,
                );
                ir.coef(dyn_row, lvl_vars[h], 1.0);
                ir.coef(dyn_row, lvl_vars[prev], -(1.0 - sto.self_discharge));
                ir.coef(dyn_row, in_vars[h], -sto.eta_charge);
                ir.coef(dyn_row, out_vars[h], 1.0 / sto.eta_discharge);

                if let (Some(e), Some(c), Some(d)) = (cap_e, cap_c, cap_d) {
                    let row = ir.add_con(
                        format!("semax:{}:{}:{:04}", node.name, sto.name, h),
                        Sense::Le,
                        0.0,
                    );
                    ir.coef(row, lvl_vars[h], 1.0);
                    ir.coef(row, e, -1.0);
                    let row = ir.add_con(
                        format!("scmax:{}:{}:{:04}", node.name, sto.name, h),
                        Sense::Le,
                        0.0,
                    );
                    ir.coef(row, in_vars[h], 1.0);
                    ir.coef(row, c, -1.0);
                    let row = ir.add_con(
                        format!("sdmax:{}:{}:{:04}", node.name, sto.name, h),
                        Sense::Le,
                        0.0,
                    );
                    ir.coef(row, out_vars[h], 1.0);
                    ir.coef(row, d, -1.0);
                }
            }
        }
    }

    // Interconnector flows, one variable per direction and hour.
    for link in &cat.interconnectors {
        let from = cat.nodes.iter().position(|n| n.name == link.from).unwrap();
        let to = cat.nodes.iter().position(|n| n.name == link.to).unwrap();
        for (src, dst, ntc) in [
            (from, to, link.ntc_fwd_mw),
            (to, from, link.ntc_bwd_mw),
        ] {
            for h in 0..h_len {
                let f = ir.add_var(
                    format!(
                        "flow:{}>{}:{:04}",
                        cat.nodes[src].name, cat.nodes[dst].name, h
                    ),
                    0.0,
                    ntc,
                    0.0,
                );
                ir.coef(balance[src][h], f, -1.0);
                ir.coef(balance[dst][h], f, 1.0 - link.loss);
            }
        }
    }

    // Load shedding slack keeps every scenario feasible and the duals
    // meaningful.
    for (ni, node) in cat.nodes.iter().enumerate() {
        for h in 0..h_len {
            let s = ir.add_var(
                format!("shed:{}:{:04}", node.name, h),
                0.0,
                f64::INFINITY,
                cfg.voll_eur_mwh,
            );
            ir.coef(balance[ni][h], s, 1.0);
        }
    }

    Ok(CoreModel {
        ir,
        balance,
        expandable,
        capacity_cost_scale: scale,
    })
}
