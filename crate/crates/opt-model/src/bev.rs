use grid_core::FleetSpec;
use profile_synth::FleetSeries;

use crate::core::CoreModel;
use crate::ir::Sense;
use crate::{ModelError, Result};

/// Adds the battery-electric fleet block: per profile and hour a
/// grid-to-battery charging variable bounded by the connection capacity,
/// an optional vehicle-to-grid variable, and cyclic state-of-charge
/// dynamics feeding the driving demand.
pub fn add_bev_block(core: &mut CoreModel, series: &FleetSeries, fleet: &FleetSpec, v2g: bool) -> Result<()> {
    add_battery_block(core, series, fleet, v2g, false)
}

/// Adds the catenary-hybrid fleet block. While driving under the overhead
/// line, wheel demand is exogenous grid draw (already on the balance rhs);
/// this block adds the optional catenary-to-battery charging up to the
/// headroom left by the wheel draw, plus the stationary BEV machinery with
/// the small ERS battery.
pub fn add_ers_block(core: &mut CoreModel, series: &FleetSeries, fleet: &FleetSpec, v2g: bool) -> Result<()> {
    add_battery_block(core, series, fleet, v2g, true)
}

fn add_battery_block(
    core: &mut CoreModel,
    series: &FleetSeries,
    fleet: &FleetSpec,
    v2g: bool,
    catenary: bool,
) -> Result<()> {
    let h_len = series.horizon;
    let eta_ch = fleet.charging_efficiency;
    let eta_dis = fleet.discharge_efficiency;

    for p in &series.profiles {
        let cap_mwh = series.battery_capacity_mwh(p, fleet);
        let mut g2b = Vec::with_capacity(h_len);
        let mut feed = Vec::with_capacity(h_len);
        let mut c2b = Vec::with_capacity(h_len);
        let mut soc = Vec::with_capacity(h_len);
        for h in 0..h_len {
            if p.drive_battery_mwh[h] > cap_mwh {
                return Err(ModelError::DriveExceedsBattery {
                    profile: p.id.clone(),
                    hour: h,
                    drive_mwh: p.drive_battery_mwh[h],
                    capacity_mwh: cap_mwh,
                });
            }
            let conn = p.stationary_conn_mw(h);
            let g = core
                .ir
                .add_var(format!("g2b:{}:{:04}", p.id, h), 0.0, conn, 0.0);
            core.ir.coef(core.balance_at_expandable(h), g, -1.0);
            g2b.push(g);

            if v2g {
                let v = core
                    .ir
                    .add_var(format!("v2g:{}:{:04}", p.id, h), 0.0, conn, 0.0);
                core.ir.coef(core.balance_at_expandable(h), v, 1.0);
                feed.push(Some(v));
            } else {
                feed.push(None);
            }

            if catenary {
                let wheel_mw = p.catenary_km[h] * fleet.consumption_on_catenary_kwh_km / 1000.0;
                let headroom = (p.conn_catenary_mw[h] - wheel_mw).max(0.0);
                if headroom > 0.0 {
                    let c = core
                        .ir
                        .add_var(format!("c2b:{}:{:04}", p.id, h), 0.0, headroom, 0.0);
                    core.ir.coef(core.balance_at_expandable(h), c, -1.0);
                    c2b.push(Some(c));
                } else {
                    c2b.push(None);
                }
            } else {
                c2b.push(None);
            }

            soc.push(
                core.ir
                    .add_var(format!("soc:{}:{:04}", p.id, h), 0.0, cap_mwh, 0.0),
            );
        }

        for h in 0..h_len {
            let prev = if h == 0 { h_len - 1 } else { h - 1 };
            let row = core.ir.add_con(
                format!("socdyn:{}:{:04}", p.id, h),
                Sense::Eq,
                -p.drive_battery_mwh[h],
            );
            core.ir.coef(row, soc[h], 1.0);
            core.ir.coef(row, soc[prev], -1.0);
            core.ir.coef(row, g2b[h], -eta_ch);
            if let Some(v) = feed[h] {
                core.ir.coef(row, v, 1.0 / eta_dis);
            }
            if let Some(c) = c2b[h] {
                core.ir.coef(row, c, -eta_ch);
            }
        }
    }
    Ok(())
}

/// Exogenous catenary wheel demand of an ERS fleet (MW per hour at the
/// expandable node): driving energy drawn straight from the overhead line.
pub fn catenary_wheel_draw(series: &FleetSeries, fleet: &FleetSpec) -> Vec<f64> {
    let mut draw = vec![0.0; series.horizon];
    for p in &series.profiles {
        for (h, km) in p.catenary_km.iter().enumerate() {
            draw[h] += km * fleet.consumption_on_catenary_kwh_km / 1000.0;
        }
    }
    draw
}
