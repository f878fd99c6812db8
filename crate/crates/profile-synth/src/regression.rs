use grid_core::Error;

use crate::relation::TransportRelation;
use crate::Result;

/// Annual-mileage regression `M = a * R^b + c` over relation distance R.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MileageRegression {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl MileageRegression {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        MileageRegression { a, b, c }
    }
}

/// Annual mileage (km/yr) of a vehicle typically operating over distance
/// `r_km`.
pub fn annual_mileage(reg: &MileageRegression, r_km: f64) -> f64 {
    reg.a * r_km.powf(reg.b) + reg.c
}

/// One distance class with an annual-mileage target: relations with
/// `R <= upper_km` (and above the previous class bound) belong to it.
/// `upper_km = None` marks the open-ended last class.
#[derive(Debug, Clone, Copy)]
pub struct ClassTarget {
    pub upper_km: Option<f64>,
    pub mean_km_yr: f64,
}

impl ClassTarget {
    pub fn new(upper_km: Option<f64>, mean_km_yr: f64) -> Self {
        ClassTarget { upper_km, mean_km_yr }
    }
}

/// The distance classes of the German federal mileage statistics:
/// below 50 km, 51-150 km, above 150 km.
pub fn german_class_targets() -> Vec<ClassTarget> {
    vec![
        ClassTarget::new(Some(50.0), 45_684.0),
        ClassTarget::new(Some(150.0), 78_190.0),
        ClassTarget::new(None, 117_121.0),
    ]
}

/// Per-class weighted means of `R^b` and the relation weight mass.
fn class_moments(
    relations: &[TransportRelation],
    targets: &[ClassTarget],
    b: f64,
) -> Vec<(f64, f64)> {
    let mut acc = vec![(0.0, 0.0); targets.len()];
    for r in relations {
        let k = class_index(targets, r.distance_km);
        acc[k].0 += r.weight * r.distance_km.powf(b);
        acc[k].1 += r.weight;
    }
    acc
}

pub(crate) fn class_index(targets: &[ClassTarget], r_km: f64) -> usize {
    for (k, t) in targets.iter().enumerate() {
        match t.upper_km {
            Some(up) if r_km <= up => return k,
            None => return k,
            _ => {}
        }
    }
    targets.len() - 1
}

/// Squared relative deviation of the modeled class means from the targets,
/// for the best (a, c) at this b. Returns (error, a, c).
fn best_linear_fit(
    moments: &[(f64, f64)],
    targets: &[ClassTarget],
    enable_c: bool,
) -> (f64, f64, f64) {
    // Residuals (a*g_k + c - T_k)/T_k over nonempty classes; linear least
    // squares in (a, c).
    let mut su2 = 0.0;
    let mut suv = 0.0;
    let mut sv2 = 0.0;
    let mut su = 0.0;
    let mut sv = 0.0;
    let mut classes = 0;
    for (k, t) in targets.iter().enumerate() {
        let (gw, w) = moments[k];
        if w <= 0.0 {
            continue;
        }
        classes += 1;
        let g = gw / w;
        let u = g / t.mean_km_yr;
        let v = 1.0 / t.mean_km_yr;
        su2 += u * u;
        suv += u * v;
        sv2 += v * v;
        su += u;
        sv += v;
    }
    let a_only = || {
        let a = if su2 > 0.0 { su / su2 } else { 0.0 };
        (a.max(0.0), 0.0)
    };
    let (a, c) = if !enable_c || classes < 2 {
        if enable_c && classes == 1 {
            // Degenerate single-class fit: carried by the constant term.
            let t = targets
                .iter()
                .enumerate()
                .find(|(k, _)| moments[*k].1 > 0.0)
                .map(|(_, t)| t.mean_km_yr)
                .unwrap_or(0.0);
            (0.0, t)
        } else {
            a_only()
        }
    } else {
        let det = su2 * sv2 - suv * suv;
        if det.abs() < 1e-30 {
            a_only()
        } else {
            let a = (su * sv2 - sv * suv) / det;
            let c = (sv * su2 - su * suv) / det;
            if c < 0.0 || a < 0.0 {
                a_only()
            } else {
                (a, c)
            }
        }
    };
    let mut err = 0.0;
    for (k, t) in targets.iter().enumerate() {
        let (gw, w) = moments[k];
        if w <= 0.0 {
            continue;
        }
        let g = gw / w;
        let res = (a * g + c - t.mean_km_yr) / t.mean_km_yr;
        err += res * res;
    }
    (err, a, c)
}

/// Result of [`fit_regression`] with per-class diagnostics.
#[derive(Debug, Clone)]
pub struct RegressionFit {
    pub regression: MileageRegression,
    /// Largest relative deviation of a nonempty class mean from its target.
    pub max_class_rel_err: f64,
}

/// Fits `M = a * R^b + c` so that the weighted class means of M over the
/// relation set reproduce the class targets: golden-section search over b
/// with the optimal (a, c) solved in closed form at each step. `c` is
/// clamped at zero unless `enable_c` is set.
pub fn fit_regression(
    relations: &[TransportRelation],
    targets: &[ClassTarget],
    enable_c: bool,
) -> Result<RegressionFit> {
    if relations.is_empty() {
        return Err(Error::validation("relations non-empty"));
    }
    if targets.is_empty() || targets.iter().any(|t| t.mean_km_yr <= 0.0) {
        return Err(Error::validation(
            "regression needs distance classes with positive targets",
        ));
    }

    let eval = |b: f64| {
        let moments = class_moments(relations, targets, b);
        best_linear_fit(&moments, targets, enable_c)
    };

    // Golden-section search over b in [0, 1.5]; deterministic and robust
    // for the single-dip objectives this data produces.
    let (mut lo, mut hi) = (0.0_f64, 1.5_f64);
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = eval(x1).0;
    let mut f2 = eval(x2).0;
    let max_iter = 200;
    let mut iter = 0;
    while hi - lo > 1e-11 {
        iter += 1;
        if iter > max_iter {
            return Err(Error::validation(
                "regression fit did not converge within the iteration bound",
            ));
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = eval(x1).0;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = eval(x2).0;
        }
    }
    let b = 0.5 * (lo + hi);
    let (_, a, c) = eval(b);
    if !a.is_finite() || !c.is_finite() {
        return Err(Error::validation("regression fit produced non-finite values"));
    }
    let regression = MileageRegression::new(a, b, c);

    let moments = class_moments(relations, targets, b);
    let mut max_rel = 0.0_f64;
    for (k, t) in targets.iter().enumerate() {
        let (gw, w) = moments[k];
        if w <= 0.0 {
            continue;
        }
        let mean = a * gw / w + c;
        max_rel = max_rel.max(((mean - t.mean_km_yr) / t.mean_km_yr).abs());
    }
    Ok(RegressionFit {
        regression,
        max_class_rel_err: max_rel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::{generate_synthetic_relations, GoodsClass};

    #[test]
    fn annual_mileage_formula() {
        let reg = MileageRegression::new(21_180.0, 0.2979, 0.0);
        // Direct formula evaluation at R = 100 km.
        let expected = 21_180.0 * 100.0_f64.powf(0.2979);
        let m = annual_mileage(&reg, 100.0);
        assert_eq!(m, expected);
        assert!((m - 83_500.0).abs() / 83_500.0 < 0.005, "m = {}", m);
    }

    #[test]
    fn mileage_vanishes_at_zero_distance_without_constant() {
        let reg = MileageRegression::new(21_180.0, 0.2979, 0.0);
        assert!(annual_mileage(&reg, 1e-30) < 1e-3);
        assert!(annual_mileage(&reg, 1e-6) < annual_mileage(&reg, 1e-3));
    }

    #[test]
    fn ten_hour_profile_daily_mileage_near_table_value() {
        let reg = MileageRegression::new(21_180.0, 0.2979, 0.0);
        let daily = annual_mileage(&reg, 448.0) / grid_core::WORKING_DAYS_PER_YEAR;
        assert!((daily - 544.0).abs() < 1.0, "daily = {}", daily);
        // Within 5% of the 527 km/day aggregate of the 10-hour profile.
        assert!((daily - 527.0).abs() / 527.0 < 0.05);
    }

    #[test]
    fn single_class_constant_relations_fit_exactly() {
        let relations: Vec<_> = (0..5)
            .map(|_| TransportRelation {
                distance_km: 80.0,
                goods_class: GoodsClass::GeneralCargo,
                weight: 10.0,
                motorway_share: 0.5,
            })
            .collect();
        let targets = vec![ClassTarget::new(None, 90_000.0)];
        let fit = fit_regression(&relations, &targets, true).unwrap();
        assert!(fit.max_class_rel_err < 1e-9);
        // Degenerate fit is carried by the constant term.
        assert_eq!(fit.regression.a, 0.0);
        assert!((fit.regression.c - 90_000.0).abs() < 1e-6);
    }

    #[test]
    fn generate_then_refit_reproduces_class_means() {
        let truth = MileageRegression::new(18_000.0, 0.35, 0.0);
        let relations = generate_synthetic_relations(11, 400, 3.0, 700.0);
        // Class means implied by the known regression over the drawn set.
        let classes = german_class_targets();
        let mut sums = vec![(0.0, 0.0); classes.len()];
        for r in &relations {
            let k = class_index(&classes, r.distance_km);
            sums[k].0 += r.weight * annual_mileage(&truth, r.distance_km);
            sums[k].1 += r.weight;
        }
        let targets: Vec<ClassTarget> = classes
            .iter()
            .zip(&sums)
            .map(|(t, (mw, w))| ClassTarget::new(t.upper_km, mw / w))
            .collect();

        let fit = fit_regression(&relations, &targets, false).unwrap();
        assert!(
            fit.max_class_rel_err < 0.01,
            "max class err {}",
            fit.max_class_rel_err
        );
        // The power law itself should be recovered closely.
        assert!((fit.regression.b - truth.b).abs() < 0.02, "b = {}", fit.regression.b);
    }

    #[test]
    fn zero_target_rejected() {
        let relations = generate_synthetic_relations(1, 10, 5.0, 100.0);
        let targets = vec![ClassTarget::new(None, 0.0)];
        assert!(fit_regression(&relations, &targets, false).is_err());
    }
}
