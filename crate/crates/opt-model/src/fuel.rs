use grid_core::FuelChainSpec;

use crate::core::CoreModel;
use crate::ir::Sense;
use crate::{ModelError, Result};

/// Hydrogen provision mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum H2Mode {
    /// Centralized electrolysis with liquefied transport: transport
    /// electricity is drawn in the production hour and storage capacity is
    /// a costed variable.
    Central,
    /// On-site electrolysis at filling stations: no transport electricity,
    /// but storage is limited to a fixed buffer of average hourly demand.
    Onsite,
}

/// Adds electrolyzers, hydrogen storage and the hourly hydrogen demand
/// balance. `demand_mwh` is the fuel demand in MWh of hydrogen per hour.
/// Returns the per-technology electricity-draw factor (balance draw per MW
/// of electrolyzer input) for post-processing.
pub fn add_h2_block(
    core: &mut CoreModel,
    demand_mwh: &[f64],
    chain: &FuelChainSpec,
    mode: H2Mode,
) -> Result<Vec<(String, f64)>> {
    add_h2_supply(core, demand_mwh, chain, mode)?;
    Ok(draw_factors(chain, mode))
}

/// Electricity drawn at the balance per MW of electrolyzer input,
/// including transport/liquefaction electricity in centralized mode.
pub fn draw_factors(chain: &FuelChainSpec, mode: H2Mode) -> Vec<(String, f64)> {
    chain
        .electrolyzers
        .iter()
        .map(|e| {
            let transport = match mode {
                H2Mode::Central => chain.transport_el_per_mwh_h2() * e.efficiency,
                H2Mode::Onsite => 0.0,
            };
            (e.name.clone(), 1.0 + transport)
        })
        .collect()
}

/// Shared electrolyzer + hydrogen storage machinery. `demand_mwh` lands on
/// the rhs of the hourly hydrogen balance; the returned rows let the PtL
/// block chain a synthesis stage into the hydrogen balance.
fn add_h2_supply(
    core: &mut CoreModel,
    demand_mwh: &[f64],
    chain: &FuelChainSpec,
    mode: H2Mode,
) -> Result<Vec<crate::ir::ConId>> {
    let h_len = demand_mwh.len();
    if h_len == 0 {
        return Err(ModelError::Invalid("empty fuel demand series".into()));
    }
    let scale = core.capacity_cost_scale;
    let factors = draw_factors(chain, mode);

    // Electrolyzers: capacity in MW of electricity input.
    let mut ely_by_tech = Vec::new();
    for (e, (_, factor)) in chain.electrolyzers.iter().zip(&factors) {
        let cap = core.ir.add_var(
            format!("elycap:{}", e.name),
            0.0,
            f64::INFINITY,
            e.invest_eur_mw_yr * scale,
        );
        let mut ops = Vec::with_capacity(h_len);
        for h in 0..h_len {
            let x = core
                .ir
                .add_var(format!("ely:{}:{:04}", e.name, h), 0.0, f64::INFINITY, 0.0);
            let row = core
                .ir
                .add_con(format!("elymax:{}:{:04}", e.name, h), Sense::Le, 0.0);
            core.ir.coef(row, x, 1.0);
            core.ir.coef(row, cap, -1.0);
            core.ir
                .coef(core.balance_at_expandable(h), x, -factor);
            ops.push(x);
        }
        ely_by_tech.push((e.efficiency, ops));
    }

    // Hydrogen storage level with cyclic dynamics.
    let (lvl_up, cap_var) = match mode {
        H2Mode::Central => {
            let bound = chain.h2_storage_max_mwh.unwrap_or(f64::INFINITY);
            let cap = core.ir.add_var(
                "h2cap",
                0.0,
                bound,
                chain.h2_storage_eur_mwh_yr * scale,
            );
            (f64::INFINITY, Some(cap))
        }
        H2Mode::Onsite => {
            let avg = demand_mwh.iter().sum::<f64>() / h_len as f64;
            (chain.onsite_buffer_h * avg, None)
        }
    };
    let mut lvl = Vec::with_capacity(h_len);
    for h in 0..h_len {
        let l = core
            .ir
            .add_var(format!("h2lvl:{:04}", h), 0.0, lvl_up, 0.0);
        if let Some(cap) = cap_var {
            let row = core.ir.add_con(format!("h2max:{:04}", h), Sense::Le, 0.0);
            core.ir.coef(row, l, 1.0);
            core.ir.coef(row, cap, -1.0);
        }
        lvl.push(l);
    }
    let mut dyn_rows = Vec::with_capacity(h_len);
    for h in 0..h_len {
        let prev = if h == 0 { h_len - 1 } else { h - 1 };
        let row = core
            .ir
            .add_con(format!("h2dyn:{:04}", h), Sense::Eq, -demand_mwh[h]);
        core.ir.coef(row, lvl[h], 1.0);
        core.ir.coef(row, lvl[prev], -1.0);
        for (eta, ops) in &ely_by_tech {
            core.ir.coef(row, ops[h], -eta);
        }
        dyn_rows.push(row);
    }
    Ok(dyn_rows)
}

/// Adds the power-to-liquid block: the centralized hydrogen machinery, a
/// synthesis stage converting hydrogen to liquid fuel with its own
/// capacity variable (MW of liquid output), and near-zero-cost liquid
/// storage meeting the diesel-equivalent demand.
pub fn add_ptl_block(
    core: &mut CoreModel,
    liquid_demand_mwh: &[f64],
    chain: &FuelChainSpec,
) -> Result<Vec<(String, f64)>> {
    let h_len = liquid_demand_mwh.len();
    let scale = core.capacity_cost_scale;
    let eta_syn = chain.synthesis_efficiency;

    // Hydrogen demand of the synthesis enters the hydrogen balance via
    // the syn variables, so the direct demand is zero.
    let zero = vec![0.0; h_len];
    let h2_rows = add_h2_supply(core, &zero, chain, H2Mode::Central)?;

    let syn_cap = core.ir.add_var(
        "syncap",
        0.0,
        f64::INFINITY,
        chain.synthesis_eur_mw_yr * scale,
    );
    let liq_cap = core.ir.add_var(
        "liqcap",
        0.0,
        f64::INFINITY,
        chain.liquid_storage_eur_mwh_yr * scale,
    );

    let mut syn = Vec::with_capacity(h_len);
    let mut liq = Vec::with_capacity(h_len);
    for h in 0..h_len {
        // Hydrogen into synthesis (MWh of H2 per hour).
        let s = core
            .ir
            .add_var(format!("syn:{:04}", h), 0.0, f64::INFINITY, 0.0);
        let row = core.ir.add_con(format!("synmax:{:04}", h), Sense::Le, 0.0);
        core.ir.coef(row, s, eta_syn);
        core.ir.coef(row, syn_cap, -1.0);
        syn.push(s);

        let l = core
            .ir
            .add_var(format!("liqlvl:{:04}", h), 0.0, f64::INFINITY, 0.0);
        let row = core.ir.add_con(format!("liqmax:{:04}", h), Sense::Le, 0.0);
        core.ir.coef(row, l, 1.0);
        core.ir.coef(row, liq_cap, -1.0);
        liq.push(l);
    }

    for h in 0..h_len {
        // Synthesis intake drains the hydrogen store.
        core.ir.coef(h2_rows[h], syn[h], 1.0);

        let prev = if h == 0 { h_len - 1 } else { h - 1 };
        let row = core.ir.add_con(
            format!("liqdyn:{:04}", h),
            Sense::Eq,
            -liquid_demand_mwh[h],
        );
        core.ir.coef(row, liq[h], 1.0);
        core.ir.coef(row, liq[prev], -1.0);
        core.ir.coef(row, syn[h], -eta_syn);
    }
    Ok(draw_factors(chain, H2Mode::Central))
}
