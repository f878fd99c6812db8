//! Generates the exogenous "balanced" charging series for inflexible
//! scenarios: vehicles start charging as soon as an opportunity arises and
//! spread the energy needed to be full at the next departure evenly over
//! the connection window.

use std::fmt;
use std::fs;
use std::path::Path;

use grid_core::FleetSpec;
use profile_synth::{FleetSeries, ProfileSeries};

/// A maximal run of hours without driving, ending at the next departure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionWindow {
    pub start: usize,
    /// Exclusive end hour (the departure).
    pub end: usize,
    /// Mean effective (battery-side) rating over the window, MW.
    pub rating_mw: f64,
}

impl ConnectionWindow {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

/// Balanced charging of one profile aggregate.
#[derive(Debug, Clone)]
pub struct ProfilePlan {
    pub id: String,
    /// Grid-side draw (MW).
    pub grid_draw_mw: Vec<f64>,
    /// Battery-side inflow (MWh per hour).
    pub battery_inflow_mwh: Vec<f64>,
    /// State of charge at the end of each hour (MWh).
    pub soc_mwh: Vec<f64>,
    pub capacity_mwh: f64,
    /// Departures where the battery was not full despite charging.
    pub under_charged_departures: usize,
}

/// The balanced charging plan of a whole fleet.
#[derive(Debug, Clone)]
pub struct BalancedChargePlan {
    pub horizon: usize,
    pub profiles: Vec<ProfilePlan>,
}

impl BalancedChargePlan {
    pub fn total_grid_draw_mw(&self, h: usize) -> f64 {
        self.profiles.iter().map(|p| p.grid_draw_mw[h]).sum()
    }

    pub fn under_charged_departures(&self) -> usize {
        self.profiles.iter().map(|p| p.under_charged_departures).sum()
    }
}

/// A profile whose driving cannot be covered by the given battery and
/// charging opportunities.
#[derive(Debug)]
pub struct InfeasibleProfile {
    pub profile: String,
    pub hour: usize,
    pub deficit_mwh: f64,
}

impl fmt::Display for InfeasibleProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "profile {} infeasible at hour {}: battery short by {:.6} MWh",
            self.profile, self.hour, self.deficit_mwh
        )
    }
}

impl std::error::Error for InfeasibleProfile {}

const SOC_TOL: f64 = 1e-9;

/// Spreads `required_mwh` evenly over `caps` (battery-side MWh per hour),
/// capping saturated hours and re-spreading the remainder.
fn waterfill(caps: &[f64], required_mwh: f64) -> Vec<f64> {
    let n = caps.len();
    let mut inflow = vec![0.0; n];
    if n == 0 || required_mwh <= 0.0 {
        return inflow;
    }
    let mut open: Vec<usize> = (0..n).filter(|i| caps[*i] > 0.0).collect();
    let mut remaining = required_mwh.min(open.iter().map(|i| caps[*i]).sum());
    while remaining > SOC_TOL && !open.is_empty() {
        let level = remaining / open.len() as f64;
        let mut saturated = Vec::new();
        let mut progressed = false;
        for &i in &open {
            if caps[i] - inflow[i] <= level {
                remaining -= caps[i] - inflow[i];
                inflow[i] = caps[i];
                saturated.push(i);
                progressed = true;
            }
        }
        if !progressed {
            for &i in &open {
                inflow[i] += level;
            }
            break;
        }
        open.retain(|i| !saturated.contains(i));
    }
    inflow
}

fn plan_profile(
    series: &ProfileSeries,
    fleet: &FleetSpec,
    capacity_mwh: f64,
) -> Result<ProfilePlan, InfeasibleProfile> {
    let h = series.drive_battery_mwh.len();
    let eta = fleet.charging_efficiency;
    // Battery-side hourly caps outside driving hours.
    let caps: Vec<f64> = (0..h)
        .map(|t| {
            if series.drive_battery_mwh[t] > 0.0 {
                0.0
            } else {
                series.stationary_conn_mw(t) * eta
            }
        })
        .collect();

    // Window boundaries: maximal runs of non-driving hours; each window
    // targets a full battery at its end. The run that meets the horizon
    // boundary targets full at the end of the horizon, which also
    // enforces the cyclic week (no free initial energy).
    let mut inflow = vec![0.0; h];
    let mut soc = vec![0.0; h];
    let mut under_charged = 0;

    let mut soc_start = capacity_mwh;
    for _pass in 0..20 {
        let mut level = soc_start;
        let mut t = 0;
        under_charged = 0;
        while t < h {
            if series.drive_battery_mwh[t] > 0.0 {
                level -= series.drive_battery_mwh[t];
                if level < -SOC_TOL {
                    return Err(InfeasibleProfile {
                        profile: series.id.clone(),
                        hour: t,
                        deficit_mwh: -level,
                    });
                }
                inflow[t] = 0.0;
                soc[t] = level;
                t += 1;
            } else {
                let start = t;
                let mut end = t;
                while end < h && series.drive_battery_mwh[end] <= 0.0 {
                    end += 1;
                }
                let required = (capacity_mwh - level).max(0.0);
                let fill = waterfill(&caps[start..end], required);
                for (k, f) in fill.iter().enumerate() {
                    level += f;
                    inflow[start + k] = *f;
                    soc[start + k] = level;
                }
                if end < h && level < capacity_mwh - SOC_TOL {
                    under_charged += 1;
                }
                t = end;
            }
        }
        if (level - soc_start).abs() <= SOC_TOL {
            break;
        }
        soc_start = level;
    }

    let grid_draw_mw = inflow.iter().map(|f| f / eta).collect();
    Ok(ProfilePlan {
        id: series.id.clone(),
        grid_draw_mw,
        battery_inflow_mwh: inflow,
        soc_mwh: soc,
        capacity_mwh,
        under_charged_departures: under_charged,
    })
}

/// Computes the balanced charging plan of every profile: constant battery
/// inflow per connection window at `min(rating, required / window length)`,
/// full-rating charging when the requirement exceeds the window.
pub fn balanced_charging(
    series: &FleetSeries,
    fleet: &FleetSpec,
) -> Result<BalancedChargePlan, InfeasibleProfile> {
    let mut profiles = Vec::with_capacity(series.profiles.len());
    for p in &series.profiles {
        let capacity = series.battery_capacity_mwh(p, fleet);
        profiles.push(plan_profile(p, fleet, capacity)?);
    }
    Ok(BalancedChargePlan {
        horizon: series.horizon,
        profiles,
    })
}

/// One energy-balance discrepancy found by [`verify_energy_balance`].
#[derive(Debug, Clone)]
pub struct BalanceViolation {
    pub profile: String,
    pub detail: String,
}

/// Verification report of a balanced plan against its driving series.
#[derive(Debug, Clone, Default)]
pub struct BalanceReport {
    pub violations: Vec<BalanceViolation>,
    pub max_rel_mismatch: f64,
}

impl BalanceReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that over the cyclic horizon every profile's battery inflow
/// matches its driving energy within 1e-6 relative, and that the state of
/// charge stays within the battery.
pub fn verify_energy_balance(plan: &BalancedChargePlan, series: &FleetSeries) -> BalanceReport {
    let mut report = BalanceReport::default();
    for (p, s) in plan.profiles.iter().zip(&series.profiles) {
        let inflow: f64 = p.battery_inflow_mwh.iter().sum();
        let drive: f64 = s.drive_battery_mwh.iter().sum();
        let scale = drive.abs().max(1.0);
        let rel = (inflow - drive).abs() / scale;
        report.max_rel_mismatch = report.max_rel_mismatch.max(rel);
        if rel > 1e-6 {
            report.violations.push(BalanceViolation {
                profile: p.id.clone(),
                detail: format!(
                    "cyclic energy mismatch: inflow {} MWh vs driving {} MWh",
                    inflow, drive
                ),
            });
        }
        for (h, soc) in p.soc_mwh.iter().enumerate() {
            if *soc < -SOC_TOL || *soc > p.capacity_mwh + SOC_TOL {
                report.violations.push(BalanceViolation {
                    profile: p.id.clone(),
                    detail: format!("state of charge {} MWh out of bounds at hour {}", soc, h),
                });
                break;
            }
        }
    }
    report
}

/// Writes the plan as columnar text: `hour,profile_id,grid_draw_MW,soc_MWh`.
pub fn write_plan(path: &Path, plan: &BalancedChargePlan) -> grid_core::Result<()> {
    let mut out = String::from("hour,profile_id,grid_draw_MW,soc_MWh\n");
    for p in &plan.profiles {
        for h in 0..plan.horizon {
            out.push_str(&format!(
                "{},{},{},{}\n",
                h, p.id, p.grid_draw_mw[h], p.soc_mwh[h]
            ));
        }
    }
    fs::write(path, out).map_err(|source| grid_core::Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use grid_core::Weekday;
    use profile_synth::{expand_to_horizon, HourState, StylizedProfile};

    fn series_with(
        drive: Vec<f64>,
        conn: Vec<f64>,
        vehicles: f64,
    ) -> (FleetSeries, FleetSpec) {
        let h = drive.len();
        let fleet = FleetSpec::default_bev();
        let profile = ProfileSeries {
            id: "h08_s05".into(),
            bin_h: 8,
            start: 5,
            vehicles,
            drive_battery_mwh: drive,
            drive_km: vec![0.0; h],
            catenary_km: vec![0.0; h],
            conn_depot_mw: conn,
            conn_stop_mw: vec![0.0; h],
            conn_break_mw: vec![0.0; h],
            conn_catenary_mw: vec![0.0; h],
        };
        (
            FleetSeries {
                horizon: h,
                anchor: Weekday::Monday,
                weekday_scale: 1.0,
                profiles: vec![profile],
            },
            fleet,
        )
    }

    // One truck, 400 kWh short after a trip, 8-hour window at 200 kW
    // nominal: 50 kW constant battery inflow, 60.24 kW grid draw.
    #[test]
    fn balanced_window_spreads_energy_evenly() {
        let mut drive = vec![0.0; 24];
        drive[2] = 0.4; // one driving hour drawing 400 kWh
        let mut conn = vec![0.0; 24];
        for h in 3..11 {
            conn[h] = 0.2;
        }
        // Window 11..24 has no connection; the only charging window with
        // capacity is hours 3..11.
        let (series, fleet) = series_with(drive, conn, 1.0);
        let plan = balanced_charging(&series, &fleet).unwrap();
        let p = &plan.profiles[0];
        for h in 3..11 {
            assert!((p.battery_inflow_mwh[h] - 0.05).abs() < 1e-12, "hour {}", h);
            assert!((p.grid_draw_mw[h] - 0.05 / 0.83).abs() < 1e-12);
            assert!((p.grid_draw_mw[h] - 0.060_24).abs() < 1e-4);
        }
        assert_eq!(p.under_charged_departures, 0);
    }

    // 1,660 kWh requirement over a 10-hour window at 166 kW effective:
    // full-rating charging throughout, exactly full at departure.
    #[test]
    fn requirement_at_window_capacity_charges_at_full_rating() {
        let mut drive = vec![0.0; 24];
        drive[0] = 1.66;
        let mut conn = vec![0.0; 24];
        for h in 1..11 {
            conn[h] = 0.2;
        }
        let (series, mut fleet) = series_with(drive, conn, 3.0);
        fleet.battery_kwh = 700.0; // 2.1 MWh aggregate
        let plan = balanced_charging(&series, &fleet).unwrap();
        let p = &plan.profiles[0];
        for h in 1..11 {
            assert!((p.battery_inflow_mwh[h] - 0.166).abs() < 1e-12);
        }
        // Full again at the cyclic departure (hour 0 of the next pass).
        assert!((p.soc_mwh[10] - p.capacity_mwh).abs() < 1e-9);
    }

    #[test]
    fn zero_requirement_draws_nothing() {
        let (series, fleet) = series_with(vec![0.0; 24], vec![0.2; 24], 1.0);
        let plan = balanced_charging(&series, &fleet).unwrap();
        assert!(plan.profiles[0].grid_draw_mw.iter().all(|d| *d == 0.0));
        let report = verify_energy_balance(&plan, &series);
        assert!(report.is_clean());
    }

    #[test]
    fn infeasible_driving_names_profile_and_hour() {
        let mut drive = vec![0.0; 24];
        drive[5] = 1.0; // exceeds the 0.655 MWh battery
        let (series, fleet) = series_with(drive, vec![0.2; 24], 1.0);
        let err = balanced_charging(&series, &fleet).unwrap_err();
        assert_eq!(err.profile, "h08_s05");
        assert_eq!(err.hour, 5);
    }

    #[test]
    fn verifier_flags_hand_built_energy_gap() {
        let mut drive = vec![0.0; 24];
        drive[2] = 0.4;
        let mut conn = vec![0.0; 24];
        for h in 3..11 {
            conn[h] = 0.2;
        }
        let (series, fleet) = series_with(drive, conn, 1.0);
        let mut plan = balanced_charging(&series, &fleet).unwrap();
        // Remove 1 kWh from the plan.
        plan.profiles[0].battery_inflow_mwh[4] -= 0.001;
        let report = verify_energy_balance(&plan, &series);
        assert_eq!(report.violations.len(), 1);
        assert!(report.max_rel_mismatch > 1e-6);
    }

    fn eight_hour_profile() -> StylizedProfile {
        StylizedProfile {
            bin_h: 8,
            avg_distance_km: 219.0,
            avg_daily_km: 399.0,
            avg_idle_h: 2.43,
            avg_break_h: 0.75,
            journey_h: 399.0 / 79.0,
            vehicles: 1.0,
            mileage_share: 1.0,
            catenary_share: 0.0,
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

    // Weekly inflow of the stylized 8-hour profile: five weekdays of
    // 522.69 kWh per operating vehicle.
    #[test]
    fn weekly_inflow_matches_five_dayly_draws() {
        let fleet = FleetSpec::default_bev();
        let series =
            expand_to_horizon(&[eight_hour_profile()], &fleet, 168, Weekday::Monday).unwrap();
        let plan = balanced_charging(&series, &fleet).unwrap();
        let inflow: f64 = plan.profiles[0].battery_inflow_mwh.iter().sum();
        let expected = 5.0 * 399.0 * 1.31 / 1000.0 * series.weekday_scale;
        assert!((inflow - expected).abs() < 1e-9, "inflow {}", inflow);
        let report = verify_energy_balance(&plan, &series);
        assert!(report.is_clean(), "{:?}", report.violations);
        let p = &plan.profiles[0];
        for soc in &p.soc_mwh {
            assert!(*soc >= -1e-9 && *soc <= p.capacity_mwh + 1e-9);
        }
        // Overnight windows are long enough to refill: the battery is full
        // at the start of every operating day (hour 4, before the 5:00
        // departure).
        for day in 0..5 {
            assert!((p.soc_mwh[day * 24 + 4] - p.capacity_mwh).abs() < 1e-9);
        }
        // Mid-day stops are too short to fully refill two driving hours at
        // 200 kW; those departures are legitimately under-charged.
        assert!(p.under_charged_departures > 0);
    }

    // Raising a rating never increases the number of under-charged
    // departures.
    #[test]
    fn rating_increase_never_hurts() {
        let mut drive = vec![0.0; 48];
        drive[6] = 0.1;
        drive[7] = 0.1;
        drive[30] = 0.1;
        let mut base_conn = vec![0.0; 48];
        for h in [8usize, 9, 10, 31, 32, 33, 40, 41] {
            base_conn[h] = 0.05;
        }
        let mut prev_undercharged = usize::MAX;
        for scale in [1.0, 2.0, 4.0, 8.0, 16.0] {
            let conn: Vec<f64> = base_conn.iter().map(|c| c * scale).collect();
            let (series, mut fleet) = series_with(drive.clone(), conn, 2.0);
            fleet.battery_kwh = 800.0;
            let plan = balanced_charging(&series, &fleet).unwrap();
            let u = plan.under_charged_departures();
            assert!(u <= prev_undercharged, "scale {}: {} departures", scale, u);
            prev_undercharged = u;
        }
        assert_eq!(prev_undercharged, 0);
    }

    #[test]
    fn plan_export_round_trips_shape() {
        let (series, fleet) = series_with(vec![0.0; 24], vec![0.2; 24], 1.0);
        let plan = balanced_charging(&series, &fleet).unwrap();
        let dir = std::env::temp_dir().join(format!("charge_sched_{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("plan.csv");
        write_plan(&path, &plan).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("hour,profile_id,grid_draw_MW,soc_MWh\n"));
        assert_eq!(text.lines().count(), 1 + 24);
    }
}
