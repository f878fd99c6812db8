use std::fs;
use std::path::Path;

use grid_core::{Error, FleetSpec, TimeSeries, Weekday, HOURS_PER_YEAR, WORKING_DAYS_PER_YEAR};

use crate::profile::{HourState, StylizedProfile};
use crate::Result;

/// Fraction of the fleet operating on a weekday so that the horizon,
/// extrapolated to a full year, carries 240 working days of mileage.
pub fn weekday_scale(horizon: usize, anchor: Weekday) -> f64 {
    let days = horizon / 24;
    let weekdays = (0..days).filter(|d| !anchor.advance(*d).is_weekend()).count();
    if weekdays == 0 {
        0.0
    } else {
        WORKING_DAYS_PER_YEAR * horizon as f64 / (HOURS_PER_YEAR * weekdays as f64)
    }
}

/// Hourly series of one expanded (profile, start-time) aggregate.
#[derive(Debug, Clone)]
pub struct ProfileSeries {
    /// `h{bin:02}_s{start:02}`.
    pub id: String,
    pub bin_h: u8,
    pub start: u8,
    /// Vehicles in the aggregate (operating + parked share).
    pub vehicles: f64,
    /// Traction energy drawn from the battery (MWh per hour).
    pub drive_battery_mwh: Vec<f64>,
    /// Total distance driven (km per hour).
    pub drive_km: Vec<f64>,
    /// Distance driven under the overhead line (km per hour).
    pub catenary_km: Vec<f64>,
    /// Connection capacity by type (MW, nominal grid side).
    pub conn_depot_mw: Vec<f64>,
    pub conn_stop_mw: Vec<f64>,
    pub conn_break_mw: Vec<f64>,
    pub conn_catenary_mw: Vec<f64>,
}

impl ProfileSeries {
    /// Total stationary connection capacity in one hour (MW).
    pub fn stationary_conn_mw(&self, h: usize) -> f64 {
        self.conn_depot_mw[h] + self.conn_stop_mw[h] + self.conn_break_mw[h]
    }
}

/// The hourly fleet series of every expanded profile over one horizon.
#[derive(Debug, Clone)]
pub struct FleetSeries {
    pub horizon: usize,
    pub anchor: Weekday,
    pub weekday_scale: f64,
    pub profiles: Vec<ProfileSeries>,
}

impl FleetSeries {
    /// Battery capacity of one profile aggregate (MWh).
    pub fn battery_capacity_mwh(&self, profile: &ProfileSeries, fleet: &FleetSpec) -> f64 {
        profile.vehicles * fleet.battery_kwh / 1000.0
    }

    pub fn total_drive_km(&self) -> f64 {
        self.profiles
            .iter()
            .map(|p| p.drive_km.iter().sum::<f64>())
            .sum()
    }

    /// Total traction energy drawn from batteries (MWh over the horizon).
    pub fn total_drive_battery_mwh(&self) -> f64 {
        self.profiles
            .iter()
            .map(|p| p.drive_battery_mwh.iter().sum::<f64>())
            .sum()
    }
}

/// Expands stylized profiles with assigned start times into hourly fleet
/// series over a horizon anchored at `anchor`.
///
/// Weekdays carry the scaled daily patterns; Saturdays and Sundays are
/// truck-free with the whole fleet connected at the depot. For catenary
/// fleets the motorway share of every driving hour runs under the
/// overhead line and stationary charging exists only at the depot.
pub fn expand_to_horizon(
    profiles: &[StylizedProfile],
    fleet: &FleetSpec,
    horizon: usize,
    anchor: Weekday,
) -> Result<FleetSeries> {
    if horizon == 0 || horizon % 24 != 0 {
        return Err(Error::validation(format!(
            "horizon must be a positive multiple of 24, got {}",
            horizon
        )));
    }
    let scale = weekday_scale(horizon, anchor);
    let ers = fleet.is_ers();
    let mut out = Vec::new();

    for p in profiles {
        if p.start_times.is_empty() {
            return Err(Error::validation(format!(
                "profile {} has no start times assigned",
                p.id()
            )));
        }
        let count_override = fleet.vehicle_counts.get(&p.id()).copied();
        let bin_vehicles = count_override.unwrap_or(p.vehicles);
        let n_drive = p.driving_hours().max(1) as f64;
        let km_per_drive_hour = p.avg_daily_km / n_drive;
        let sigma = if ers { p.catenary_share } else { 0.0 };

        for (start, weight) in &p.start_times {
            if *weight <= 0.0 {
                continue;
            }
            let vehicles = bin_vehicles * weight;
            let mut series = ProfileSeries {
                id: format!("h{:02}_s{:02}", p.bin_h, start),
                bin_h: p.bin_h,
                start: *start,
                vehicles,
                drive_battery_mwh: vec![0.0; horizon],
                drive_km: vec![0.0; horizon],
                catenary_km: vec![0.0; horizon],
                conn_depot_mw: vec![0.0; horizon],
                conn_stop_mw: vec![0.0; horizon],
                conn_break_mw: vec![0.0; horizon],
                conn_catenary_mw: vec![0.0; horizon],
            };
            let depot_mw = vehicles * fleet.depot_stop_kw_nominal / 1000.0;
            let operating = vehicles * scale;
            let parked = vehicles - operating;

            for h in 0..horizon {
                let day = h / 24;
                let hod = (h % 24) as i64;
                if anchor.advance(day).is_weekend() {
                    series.conn_depot_mw[h] = depot_mw;
                    continue;
                }
                // Parked share of the fleet sits connected at the depot.
                series.conn_depot_mw[h] += parked * fleet.depot_stop_kw_nominal / 1000.0;
                let offset = hod - *start as i64;
                if offset < 0 || offset >= p.bin_h as i64 {
                    series.conn_depot_mw[h] += operating * fleet.depot_stop_kw_nominal / 1000.0;
                    continue;
                }
                match p.states[offset as usize] {
                    HourState::Driving => {
                        let km = km_per_drive_hour * operating;
                        let cat_km = km * sigma;
                        series.drive_km[h] = km;
                        series.catenary_km[h] = cat_km;
                        series.drive_battery_mwh[h] = ((km - cat_km)
                            * fleet.consumption_off_catenary_kwh_km)
                            / 1000.0;
                        if ers {
                            series.conn_catenary_mw[h] =
                                operating * sigma * fleet.catenary_kw / 1000.0;
                        }
                    }
                    HourState::IdleStop => {
                        if ers {
                            // Catenary trucks charge while stationary only
                            // at the depot.
                        } else {
                            series.conn_stop_mw[h] +=
                                operating * fleet.depot_stop_kw_nominal / 1000.0;
                        }
                    }
                    HourState::Break => {
                        if !ers {
                            series.conn_break_mw[h] += operating * fleet.break_kw_nominal / 1000.0;
                        }
                    }
                }
            }
            out.push(series);
        }
    }
    Ok(FleetSeries {
        horizon,
        anchor,
        weekday_scale: scale,
        profiles: out,
    })
}

/// Fuel carried by an aggregate fuel-demand series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FuelKind {
    /// Hydrogen demand in kg per hour.
    Hydrogen,
    /// Diesel-equivalent demand in liters per hour.
    Diesel,
}

/// Aggregate hourly fuel demand of the fleet: driven kilometers times the
/// specific demand per 100 km.
pub fn fuel_demand_series(
    profiles: &[StylizedProfile],
    chain: &grid_core::FuelChainSpec,
    horizon: usize,
    anchor: Weekday,
    kind: FuelKind,
) -> Result<TimeSeries> {
    // Hardware-independent expansion: only the driven kilometers matter.
    let dummy = FleetSpec::default_bev();
    let series = expand_to_horizon(profiles, &dummy, horizon, anchor)?;
    let specific_per_km = match kind {
        FuelKind::Hydrogen => chain.h2_kg_per_100km / 100.0,
        FuelKind::Diesel => chain.diesel_l_per_100km / 100.0,
    };
    let mut values = vec![0.0; horizon];
    for p in &series.profiles {
        for (h, km) in p.drive_km.iter().enumerate() {
            values[h] += km * specific_per_km;
        }
    }
    Ok(TimeSeries::new(values))
}

/// Writes one file per profile with the columns
/// `hour,drive_kWh,depot_kW,stop_kW,break_kW,catenary_km`.
pub fn write_fleet_series(dir: &Path, series: &FleetSeries) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    for p in &series.profiles {
        let mut out = String::from("hour,drive_kWh,depot_kW,stop_kW,break_kW,catenary_km\n");
        for h in 0..series.horizon {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                h,
                p.drive_battery_mwh[h] * 1000.0,
                p.conn_depot_mw[h] * 1000.0,
                p.conn_stop_mw[h] * 1000.0,
                p.conn_break_mw[h] * 1000.0,
                p.catenary_km[h],
            ));
        }
        let path = dir.join(format!("{}.csv", p.id));
        fs::write(&path, out).map_err(|source| Error::Io { path, source })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::StylizedProfile;

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
            catenary_share: 0.6,
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
    fn weekend_horizon_has_no_driving_and_full_depot_connection() {
        let fleet = FleetSpec::default_bev();
        let series =
            expand_to_horizon(&[eight_hour_profile()], &fleet, 48, Weekday::Saturday).unwrap();
        let p = &series.profiles[0];
        for h in 0..48 {
            assert_eq!(p.drive_battery_mwh[h], 0.0);
            assert_eq!(p.drive_km[h], 0.0);
            // 1 vehicle at 200 kW nominal.
            assert!((p.conn_depot_mw[h] - 0.2).abs() < 1e-12);
        }
    }

    #[test]
    fn daily_battery_draw_spreads_over_driving_hours() {
        let fleet = FleetSpec::default_bev();
        let horizon = 168;
        let series =
            expand_to_horizon(&[eight_hour_profile()], &fleet, horizon, Weekday::Monday).unwrap();
        let scale = weekday_scale(horizon, Weekday::Monday);
        assert!((scale - 240.0 * 168.0 / (8760.0 * 5.0)).abs() < 1e-12);
        let p = &series.profiles[0];
        // One operating vehicle draws 399 km x 1.31 kWh/km = 522.69 kWh per
        // day, scaled by the working-day calendar factor.
        let monday: f64 = p.drive_battery_mwh[..24].iter().sum();
        assert!(((monday * 1000.0) - 522.69 * scale).abs() < 1e-9, "monday = {}", monday);
        // Only driving-state hours carry energy.
        for h in 0..24 {
            let hod = h as i64 - 5;
            let driving =
                (0..8).contains(&hod) && p.drive_km[h] > 0.0;
            assert_eq!(p.drive_battery_mwh[h] > 0.0, driving);
        }
        // Weekly inflow is five weekdays.
        let week: f64 = p.drive_battery_mwh.iter().sum();
        assert!((week - 5.0 * monday).abs() < 1e-12);
    }

    #[test]
    fn fully_catenary_route_needs_no_battery_while_driving() {
        let mut profile = eight_hour_profile();
        profile.catenary_share = 1.0;
        let fleet = FleetSpec::default_ers();
        let series = expand_to_horizon(&[profile], &fleet, 24, Weekday::Monday).unwrap();
        let p = &series.profiles[0];
        for h in 0..24 {
            assert_eq!(p.drive_battery_mwh[h], 0.0);
            if p.drive_km[h] > 0.0 {
                assert_eq!(p.catenary_km[h], p.drive_km[h]);
                assert!(p.conn_catenary_mw[h] > 0.0);
                // No stationary charging away from the depot for ERS.
                assert_eq!(p.conn_stop_mw[h], 0.0);
                assert_eq!(p.conn_break_mw[h], 0.0);
            }
        }
    }

    #[test]
    fn connection_capacity_bounded_by_fleet_rating() {
        let fleet = FleetSpec::default_bev();
        let series =
            expand_to_horizon(&[eight_hour_profile()], &fleet, 168, Weekday::Monday).unwrap();
        let p = &series.profiles[0];
        let max_rating_mw = p.vehicles * fleet.break_kw_nominal / 1000.0;
        for h in 0..168 {
            assert!(p.stationary_conn_mw(h) <= max_rating_mw + 1e-12);
        }
    }

    #[test]
    fn horizon_must_be_daily() {
        let fleet = FleetSpec::default_bev();
        assert!(expand_to_horizon(&[eight_hour_profile()], &fleet, 100, Weekday::Monday).is_err());
    }

    #[test]
    fn fuel_demand_zero_when_not_driving() {
        let chain = grid_core::FuelChainSpec::default_h2();
        let demand = fuel_demand_series(
            &[eight_hour_profile()],
            &chain,
            48,
            Weekday::Saturday,
            FuelKind::Hydrogen,
        )
        .unwrap();
        assert_eq!(demand.sum(), 0.0);
    }

    #[test]
    fn fuel_demand_tracks_mileage() {
        let chain = grid_core::FuelChainSpec::default_h2();
        let profiles = [eight_hour_profile()];
        let demand =
            fuel_demand_series(&profiles, &chain, 168, Weekday::Monday, FuelKind::Hydrogen)
                .unwrap();
        let scale = weekday_scale(168, Weekday::Monday);
        let expected = 399.0 * scale * 5.0 * 6.8 / 100.0;
        assert!((demand.sum() - expected).abs() < 1e-9);
    }
}
