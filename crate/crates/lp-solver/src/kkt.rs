use opt_model::{ModelIr, Sense, SolutionView};

/// Residuals of a solution against the KKT conditions of the model, all in
/// original (unscaled) units.
#[derive(Debug, Clone)]
pub struct KktReport {
    /// Largest constraint or bound violation.
    pub max_primal_residual: f64,
    /// Largest stationarity / dual-feasibility violation, including the
    /// sign convention on row duals (<= rows carry non-positive duals for
    /// minimization, >= rows non-negative).
    pub max_dual_residual: f64,
    /// Largest complementary-slackness product.
    pub max_complementarity: f64,
    /// Relative duality gap |c'x - dual objective| / (1 + |c'x|).
    pub duality_gap: f64,
    /// Max-abs over rhs, objective, finite bounds and coefficients.
    pub data_norm: f64,
}

impl KktReport {
    /// The acceptance threshold used across the test suites.
    pub fn within(&self, tol: f64) -> bool {
        let scale = tol * (1.0 + self.data_norm);
        self.max_primal_residual <= scale
            && self.max_dual_residual <= scale
            && self.max_complementarity <= scale
            && self.duality_gap <= tol.max(1e-6)
    }
}

/// Evaluates primal feasibility, dual feasibility, complementary slackness
/// and the duality gap of a solution.
pub fn check_kkt(ir: &ModelIr, sol: &SolutionView) -> KktReport {
    let m = ir.num_cons();
    let n = ir.num_vars();
    let x = &sol.values;
    let y = &sol.duals;

    let mut data_norm = 0.0_f64;
    for v in ir.rhs.iter().chain(ir.obj.iter()) {
        data_norm = data_norm.max(v.abs());
    }
    for v in ir.lo.iter().chain(ir.up.iter()) {
        if v.is_finite() {
            data_norm = data_norm.max(v.abs());
        }
    }
    for (_, _, v) in &ir.triplets {
        data_norm = data_norm.max(v.abs());
    }

    // Row activities.
    let mut activity = vec![0.0; m];
    for (c, v, a) in &ir.triplets {
        activity[*c as usize] += a * x[*v as usize];
    }

    let mut primal = 0.0_f64;
    for i in 0..m {
        let r = ir.rhs[i];
        let act = activity[i];
        let viol = match ir.sense[i] {
            Sense::Eq => (act - r).abs(),
            Sense::Le => (act - r).max(0.0),
            Sense::Ge => (r - act).max(0.0),
        };
        primal = primal.max(viol);
    }
    for j in 0..n {
        primal = primal.max(ir.lo[j] - x[j]).max(x[j] - ir.up[j]);
    }

    // Stationarity: d = c - A'y, then the usual sign conditions.
    let mut d = ir.obj.clone();
    for (c, v, a) in &ir.triplets {
        d[*v as usize] -= a * y[*c as usize];
    }
    let mut dual = 0.0_f64;
    let mut comp = 0.0_f64;
    for i in 0..m {
        match ir.sense[i] {
            Sense::Le => dual = dual.max(y[i]),
            Sense::Ge => dual = dual.max(-y[i]),
            Sense::Eq => {}
        }
        let slack = match ir.sense[i] {
            Sense::Eq => 0.0,
            Sense::Le => ir.rhs[i] - activity[i],
            Sense::Ge => activity[i] - ir.rhs[i],
        };
        comp = comp.max((y[i] * slack).abs());
    }
    for j in 0..n {
        let lo = ir.lo[j];
        let up = ir.up[j];
        if lo == up {
            continue; // fixed variables carry any reduced cost
        }
        let dist_lo = x[j] - lo; // may be infinite
        let dist_up = up - x[j];
        if d[j] > 0.0 {
            // Should rest at the lower bound.
            if lo.is_finite() {
                comp = comp.max(d[j] * dist_lo.max(0.0));
            } else {
                dual = dual.max(d[j]);
            }
        } else if d[j] < 0.0 {
            if up.is_finite() {
                comp = comp.max(-d[j] * dist_up.max(0.0));
            } else {
                dual = dual.max(-d[j]);
            }
        }
    }

    // Dual objective: y'b plus the bound terms of the reduced costs.
    let mut dual_obj = 0.0;
    for i in 0..m {
        dual_obj += y[i] * ir.rhs[i];
    }
    for j in 0..n {
        if ir.lo[j] == ir.up[j] {
            dual_obj += d[j] * x[j];
        } else if d[j] > 0.0 && ir.lo[j].is_finite() {
            dual_obj += d[j] * ir.lo[j];
        } else if d[j] < 0.0 && ir.up[j].is_finite() {
            dual_obj += d[j] * ir.up[j];
        }
    }
    let primal_obj: f64 = ir.obj.iter().zip(x).map(|(c, v)| c * v).sum();
    let duality_gap = (primal_obj - dual_obj).abs() / (1.0 + primal_obj.abs());

    KktReport {
        max_primal_residual: primal,
        max_dual_residual: dual,
        max_complementarity: comp,
        duality_gap,
        data_norm,
    }
}
