use grid_core::SolverOptions;
use opt_model::{ModelIr, SolutionView, SolveStatus};

use crate::instance::Instance;
use crate::SolveError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VStat {
    Basic,
    AtLower,
    AtUpper,
    /// Free variable held at zero while nonbasic.
    FreeZero,
}

/// Final basis partition of a solve: one basic variable per constraint,
/// the remaining variables nonbasic at a bound (or at zero when free).
/// Indices beyond the structural count denote the row logicals.
#[derive(Debug, Clone)]
pub struct Basis {
    pub basic: Vec<u32>,
    pub nonbasic_at_lower: Vec<u32>,
    pub nonbasic_at_upper: Vec<u32>,
    pub nonbasic_free: Vec<u32>,
}

impl Basis {
    /// Basis size must equal the constraint count and the sets must
    /// partition all variables.
    pub fn check_partition(&self, m: usize, n: usize) -> bool {
        if self.basic.len() != m {
            return false;
        }
        let total = self.basic.len()
            + self.nonbasic_at_lower.len()
            + self.nonbasic_at_upper.len()
            + self.nonbasic_free.len();
        if total != n {
            return false;
        }
        let mut seen = vec![false; n];
        for set in [
            &self.basic,
            &self.nonbasic_at_lower,
            &self.nonbasic_at_upper,
            &self.nonbasic_free,
        ] {
            for j in set.iter() {
                if seen[*j as usize] {
                    return false;
                }
                seen[*j as usize] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

enum Phase {
    One,
    Two,
}

enum Ratio {
    BoundFlip(f64),
    Pivot { row: usize, step: f64, to_upper: bool },
    Unbounded,
}

struct Simplex<'a> {
    inst: &'a Instance,
    opts: &'a SolverOptions,
    m: usize,
    n: usize,
    basis: Vec<u32>,
    vstat: Vec<VStat>,
    /// Row-major dense basis inverse.
    binv: Vec<f64>,
    xb: Vec<f64>,
    y: Vec<f64>,
    iterations: usize,
    bland: bool,
    stall: usize,
    best_obj: f64,
}

const PIVOT_TOL: f64 = 1e-9;
const REFRESH_EVERY: usize = 128;

impl<'a> Simplex<'a> {
    fn new(inst: &'a Instance, opts: &'a SolverOptions) -> Self {
        let m = inst.m;
        let n = inst.n;
        let mut vstat = Vec::with_capacity(n);
        for j in 0..inst.n_struct {
            let stat = if inst.lo[j].is_finite() {
                VStat::AtLower
            } else if inst.up[j].is_finite() {
                VStat::AtUpper
            } else {
                VStat::FreeZero
            };
            vstat.push(stat);
        }
        let mut basis = Vec::with_capacity(m);
        for i in 0..m {
            vstat.push(VStat::Basic);
            basis.push((inst.n_struct + i) as u32);
        }
        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            binv[i * m + i] = 1.0;
        }
        let mut s = Simplex {
            inst,
            opts,
            m,
            n,
            basis,
            vstat,
            binv,
            xb: vec![0.0; m],
            y: vec![0.0; m],
            iterations: 0,
            bland: false,
            stall: 0,
            best_obj: f64::INFINITY,
        };
        s.recompute_xb();
        s
    }

    #[inline]
    fn nonbasic_value(&self, j: usize) -> f64 {
        match self.vstat[j] {
            VStat::AtLower => self.inst.lo[j],
            VStat::AtUpper => self.inst.up[j],
            VStat::FreeZero => 0.0,
            VStat::Basic => unreachable!(),
        }
    }

    /// xb = Binv (rhs - N x_N).
    fn recompute_xb(&mut self) {
        let m = self.m;
        let mut v = self.inst.rhs.clone();
        for j in 0..self.n {
            if self.vstat[j] == VStat::Basic {
                continue;
            }
            let x = self.nonbasic_value(j);
            if x != 0.0 {
                for (i, a) in self.inst.column(j) {
                    v[i as usize] -= a * x;
                }
            }
        }
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            let mut acc = 0.0;
            for (r, b) in row.iter().zip(&v) {
                acc += r * b;
            }
            self.xb[i] = acc;
        }
    }

    /// Phase-appropriate cost of a basic variable by row.
    fn basic_cost(&self, phase: &Phase, row: usize) -> f64 {
        let j = self.basis[row] as usize;
        match phase {
            Phase::One => {
                let tol = self.opts.feasibility_tol;
                let x = self.xb[row];
                if x < self.inst.lo[j] - tol {
                    -1.0
                } else if x > self.inst.up[j] + tol {
                    1.0
                } else {
                    0.0
                }
            }
            Phase::Two => self.inst.obj[j],
        }
    }

    fn nonbasic_cost(&self, phase: &Phase, j: usize) -> f64 {
        match phase {
            Phase::One => 0.0,
            Phase::Two => self.inst.obj[j],
        }
    }

    /// y = c_B' Binv for the phase costs.
    fn recompute_y(&mut self, phase: &Phase) {
        let m = self.m;
        self.y.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..m {
            let c = self.basic_cost(phase, i);
            if c != 0.0 {
                let row = &self.binv[i * m..(i + 1) * m];
                for (yk, b) in self.y.iter_mut().zip(row) {
                    *yk += c * b;
                }
            }
        }
    }

    fn total_infeasibility(&self) -> f64 {
        let tol = self.opts.feasibility_tol;
        let mut total = 0.0;
        for i in 0..self.m {
            let j = self.basis[i] as usize;
            let x = self.xb[i];
            if x < self.inst.lo[j] - tol {
                total += self.inst.lo[j] - x;
            } else if x > self.inst.up[j] + tol {
                total += x - self.inst.up[j];
            }
        }
        total
    }

    fn phase2_objective(&self) -> f64 {
        let mut obj = 0.0;
        for i in 0..self.m {
            obj += self.inst.obj[self.basis[i] as usize] * self.xb[i];
        }
        for j in 0..self.n {
            if self.vstat[j] != VStat::Basic {
                obj += self.inst.obj[j] * self.nonbasic_value(j);
            }
        }
        obj
    }

    /// Reduced cost of a nonbasic column under the current y.
    #[inline]
    fn reduced_cost(&self, phase: &Phase, j: usize) -> f64 {
        let mut d = self.nonbasic_cost(phase, j);
        for (i, a) in self.inst.column(j) {
            d -= self.y[i as usize] * a;
        }
        d
    }

    /// Entering candidate: (column, reduced cost, direction).
    fn price(&self, phase: &Phase) -> Option<(usize, f64, f64)> {
        let dtol = self.opts.optimality_tol;
        let mut best: Option<(usize, f64, f64)> = None;
        for j in 0..self.n {
            match self.vstat[j] {
                VStat::Basic => continue,
                VStat::AtLower => {
                    if self.inst.lo[j] == self.inst.up[j] {
                        continue; // fixed
                    }
                }
                _ => {}
            }
            let d = self.reduced_cost(phase, j);
            let (eligible, dir) = match self.vstat[j] {
                VStat::AtLower => (d < -dtol, 1.0),
                VStat::AtUpper => (d > dtol, -1.0),
                VStat::FreeZero => (d.abs() > dtol, if d < 0.0 { 1.0 } else { -1.0 }),
                VStat::Basic => unreachable!(),
            };
            if !eligible {
                continue;
            }
            if self.bland {
                return Some((j, d, dir));
            }
            match best {
                Some((_, bd, _)) if d.abs() <= bd.abs() => {}
                _ => best = Some((j, d, dir)),
            }
        }
        best
    }

    /// w = Binv A_q.
    fn ftran(&self, q: usize, w: &mut [f64]) {
        let m = self.m;
        let col: Vec<(u32, f64)> = self.inst.column(q).collect();
        for (i, wi) in w.iter_mut().enumerate() {
            let row = &self.binv[i * m..(i + 1) * m];
            let mut acc = 0.0;
            for (k, a) in &col {
                acc += row[*k as usize] * a;
            }
            *wi = acc;
        }
    }

    /// Bounded-variable ratio test. In phase 1, basics beyond a violated
    /// bound block at that bound (where they turn feasible).
    fn ratio_test(&self, q: usize, dir: f64, w: &[f64]) -> Ratio {
        let ftol = self.opts.feasibility_tol;
        let inst = self.inst;
        let bound_gap = inst.up[q] - inst.lo[q]; // may be infinite
        let mut t_min = f64::INFINITY;
        let mut row: Option<usize> = None;
        let mut to_upper = false;

        // Pass 1: tightest step.
        for (i, &wi) in w.iter().enumerate() {
            if wi.abs() <= PIVOT_TOL {
                continue;
            }
            let j = self.basis[i] as usize;
            let x = self.xb[i];
            let rate = -dir * wi;
            let target = if rate > 0.0 {
                if x < inst.lo[j] - ftol {
                    inst.lo[j]
                } else {
                    inst.up[j]
                }
            } else if x > inst.up[j] + ftol {
                inst.up[j]
            } else {
                inst.lo[j]
            };
            if !target.is_finite() {
                continue;
            }
            let t = ((target - x) / rate).max(0.0);
            if t < t_min {
                t_min = t;
            }
        }

        if bound_gap <= t_min {
            return if bound_gap.is_finite() {
                Ratio::BoundFlip(bound_gap)
            } else {
                Ratio::Unbounded
            };
        }
        if !t_min.is_finite() {
            return Ratio::Unbounded;
        }

        // Pass 2: among blocking rows, prefer the largest pivot for
        // stability; under Bland's rule, the lowest variable index.
        let window = t_min + 1e-9 * (1.0 + t_min.abs());
        let mut best_metric = -1.0;
        let mut best_var = u32::MAX;
        for (i, &wi) in w.iter().enumerate() {
            if wi.abs() <= PIVOT_TOL {
                continue;
            }
            let j = self.basis[i] as usize;
            let x = self.xb[i];
            let rate = -dir * wi;
            let target = if rate > 0.0 {
                if x < inst.lo[j] - ftol {
                    inst.lo[j]
                } else {
                    inst.up[j]
                }
            } else if x > inst.up[j] + ftol {
                inst.up[j]
            } else {
                inst.lo[j]
            };
            if !target.is_finite() {
                continue;
            }
            let t = ((target - x) / rate).max(0.0);
            if t <= window {
                let pick = if self.bland {
                    (self.basis[i]) < best_var
                } else {
                    wi.abs() > best_metric
                };
                if pick {
                    best_metric = wi.abs();
                    best_var = self.basis[i];
                    row = Some(i);
                    to_upper = target == inst.up[j];
                }
            }
        }
        match row {
            Some(r) => Ratio::Pivot {
                row: r,
                step: t_min.max(0.0),
                to_upper,
            },
            None => Ratio::Unbounded,
        }
    }

    fn apply_step(&mut self, dir: f64, step: f64, w: &[f64]) {
        if step == 0.0 {
            return;
        }
        for (i, &wi) in w.iter().enumerate() {
            if wi != 0.0 {
                self.xb[i] -= dir * step * wi;
            }
        }
    }

    /// Replaces the basis at `row` with column q and updates Binv, xb, y.
    fn pivot(&mut self, q: usize, dir: f64, step: f64, row: usize, to_upper: bool, w: &[f64], d_q: f64) {
        let m = self.m;
        let leaving = self.basis[row] as usize;

        // Dual update uses the outgoing inverse row.
        let gamma = d_q / w[row];
        let rs = row * m;
        for k in 0..m {
            self.y[k] += gamma * self.binv[rs + k];
        }

        self.apply_step(dir, step, w);
        let entering_value = self.nonbasic_value(q) + dir * step;

        // Elementary row transformation of the inverse.
        let pivot = w[row];
        let inv_pivot = 1.0 / pivot;
        for k in 0..m {
            self.binv[rs + k] *= inv_pivot;
        }
        for i in 0..m {
            if i == row {
                continue;
            }
            let f = w[i];
            if f == 0.0 {
                continue;
            }
            let is = i * m;
            for k in 0..m {
                self.binv[is + k] -= f * self.binv[rs + k];
            }
        }

        self.vstat[leaving] = if to_upper { VStat::AtUpper } else { VStat::AtLower };
        self.vstat[q] = VStat::Basic;
        self.basis[row] = q as u32;
        self.xb[row] = entering_value;
    }

    fn track_progress(&mut self, current: f64) {
        if current < self.best_obj - 1e-10 * (1.0 + self.best_obj.abs()) {
            self.best_obj = current;
            self.stall = 0;
            self.bland = false;
        } else {
            self.stall += 1;
            if self.stall >= self.opts.stall_iterations {
                self.bland = true;
            }
        }
    }

    fn max_iterations(&self) -> usize {
        if self.opts.max_iterations > 0 {
            self.opts.max_iterations
        } else {
            20 * (self.m + self.n) + 2000
        }
    }

    fn run(&mut self) -> Result<(), SolveError> {
        let max_iter = self.max_iterations();
        let mut w = vec![0.0; self.m];

        // Phase 1: drive the total bound violation of the basis to zero.
        let ftol = self.opts.feasibility_tol;
        let rhs_norm = self.inst.rhs.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
        let feas_target = ftol * (1.0 + rhs_norm);
        self.best_obj = f64::INFINITY;
        self.stall = 0;
        self.bland = false;

        let mut phase1_iters = 0usize;
        if self.total_infeasibility() > feas_target {
            self.recompute_y(&Phase::One);
            loop {
                let infeas = self.total_infeasibility();
                if infeas <= feas_target {
                    break;
                }
                self.track_progress(infeas);
                if self.iterations >= max_iter {
                    return Err(SolveError::IterationLimit {
                        iterations: self.iterations,
                    });
                }
                if phase1_iters % REFRESH_EVERY == REFRESH_EVERY - 1 {
                    self.recompute_xb();
                    self.recompute_y(&Phase::One);
                }
                // The phase-1 costs flip as basics cross bounds, so the
                // incremental dual vector is refreshed often and verified
                // against the exact one at entry selection time.
                self.recompute_y(&Phase::One);
                let Some((q, d_q, dir)) = self.price(&Phase::One) else {
                    let worst = self.worst_infeasible_row();
                    return Err(SolveError::Infeasible {
                        residual: infeas,
                        worst_row: worst,
                    });
                };
                self.ftran(q, &mut w);
                match self.ratio_test(q, dir, &w) {
                    Ratio::BoundFlip(step) => {
                        self.apply_step(dir, step, &w);
                        self.vstat[q] = match self.vstat[q] {
                            VStat::AtLower => VStat::AtUpper,
                            VStat::AtUpper => VStat::AtLower,
                            other => other,
                        };
                    }
                    Ratio::Pivot { row, step, to_upper } => {
                        self.pivot(q, dir, step, row, to_upper, &w, d_q);
                    }
                    Ratio::Unbounded => {
                        return Err(SolveError::Numerical(
                            "phase 1 found an unbounded improving direction".into(),
                        ));
                    }
                }
                self.iterations += 1;
                phase1_iters += 1;
            }
        }

        // Phase 2: optimize the true objective from the feasible basis.
        self.best_obj = f64::INFINITY;
        self.stall = 0;
        self.bland = false;
        self.recompute_xb();
        self.recompute_y(&Phase::Two);
        let mut phase2_iters = 0usize;
        loop {
            if self.iterations >= max_iter {
                return Err(SolveError::IterationLimit {
                    iterations: self.iterations,
                });
            }
            if phase2_iters % REFRESH_EVERY == REFRESH_EVERY - 1 {
                self.recompute_xb();
                self.recompute_y(&Phase::Two);
            }
            self.track_progress(self.phase2_objective());
            let Some((q, d_q, dir)) = self.price(&Phase::Two) else {
                // Optimal; leave with exact duals.
                self.recompute_xb();
                self.recompute_y(&Phase::Two);
                // Feasibility can drift with long pivot sequences; one
                // clean-up phase-1 pass restores it if needed.
                if self.total_infeasibility() > feas_target {
                    return Err(SolveError::Numerical(
                        "feasibility lost during phase 2".into(),
                    ));
                }
                return Ok(());
            };
            self.ftran(q, &mut w);
            match self.ratio_test(q, dir, &w) {
                Ratio::BoundFlip(step) => {
                    self.apply_step(dir, step, &w);
                    self.vstat[q] = match self.vstat[q] {
                        VStat::AtLower => VStat::AtUpper,
                        VStat::AtUpper => VStat::AtLower,
                        other => other,
                    };
                }
                Ratio::Pivot { row, step, to_upper } => {
                    self.pivot(q, dir, step, row, to_upper, &w, d_q);
                }
                Ratio::Unbounded => {
                    return Err(SolveError::Unbounded {
                        ray: self.tag_of(q),
                    });
                }
            }
            self.iterations += 1;
            phase2_iters += 1;
        }
    }

    fn worst_infeasible_row(&self) -> String {
        let mut worst = (0.0, String::new());
        for i in 0..self.m {
            let j = self.basis[i] as usize;
            let x = self.xb[i];
            let v = (self.inst.lo[j] - x).max(x - self.inst.up[j]);
            if v > worst.0 {
                worst = (v, format!("row {}", i));
            }
        }
        worst.1
    }

    fn tag_of(&self, j: usize) -> String {
        if j < self.inst.n_struct {
            format!("var {}", j)
        } else {
            format!("logical {}", j - self.inst.n_struct)
        }
    }

    fn basis_snapshot(&self) -> Basis {
        let mut basis = Basis {
            basic: self.basis.clone(),
            nonbasic_at_lower: Vec::new(),
            nonbasic_at_upper: Vec::new(),
            nonbasic_free: Vec::new(),
        };
        for (j, stat) in self.vstat.iter().enumerate() {
            match stat {
                VStat::Basic => {}
                VStat::AtLower => basis.nonbasic_at_lower.push(j as u32),
                VStat::AtUpper => basis.nonbasic_at_upper.push(j as u32),
                VStat::FreeZero => basis.nonbasic_free.push(j as u32),
            }
        }
        basis
    }
}

/// Solves a model with the built-in revised simplex and returns the
/// solution with duals by constraint tag, plus the final basis.
pub fn solve_with_basis(
    ir: &ModelIr,
    opts: &SolverOptions,
) -> Result<(SolutionView, Basis), SolveError> {
    ir.validate()
        .map_err(|e| SolveError::Numerical(e.to_string()))?;
    opts.validate()
        .map_err(|e| SolveError::Numerical(e.to_string()))?;
    let inst = Instance::build(ir, opts.scaling);
    let mut simplex = Simplex::new(&inst, opts);

    if inst.m == 0 {
        // Pure bound problem: each variable sits at its cheaper bound.
        let mut values = vec![0.0; inst.n_struct];
        for j in 0..inst.n_struct {
            let x = if ir.obj[j] > 0.0 {
                ir.lo[j]
            } else if ir.obj[j] < 0.0 {
                ir.up[j]
            } else if ir.lo[j].is_finite() {
                ir.lo[j]
            } else if ir.up[j].is_finite() {
                ir.up[j].min(0.0).max(ir.lo[j])
            } else {
                0.0
            };
            if !x.is_finite() {
                return Err(SolveError::Unbounded {
                    ray: ir.var_tags[j].clone(),
                });
            }
            values[j] = x;
        }
        let objective = values
            .iter()
            .zip(&ir.obj)
            .map(|(x, c)| x * c)
            .sum::<f64>();
        let sol = SolutionView::new(
            SolveStatus::Optimal,
            objective,
            ir.var_tags.clone(),
            values,
            ir.obj.clone(),
            Vec::new(),
            Vec::new(),
        );
        let basis = Basis {
            basic: Vec::new(),
            nonbasic_at_lower: (0..inst.n_struct as u32).collect(),
            nonbasic_at_upper: Vec::new(),
            nonbasic_free: Vec::new(),
        };
        return Ok((sol, basis));
    }

    simplex.run()?;

    // Extract, unscale and report in the original units.
    let mut x_scaled = vec![0.0; inst.n];
    for j in 0..inst.n {
        if simplex.vstat[j] != VStat::Basic {
            x_scaled[j] = simplex.nonbasic_value(j);
        }
    }
    for (i, &j) in simplex.basis.iter().enumerate() {
        x_scaled[j as usize] = simplex.xb[i];
    }
    let values: Vec<f64> = (0..inst.n_struct)
        .map(|j| x_scaled[j] * inst.col_scale[j])
        .collect();
    let duals: Vec<f64> = (0..inst.m)
        .map(|i| simplex.y[i] * inst.row_scale[i])
        .collect();
    let reduced: Vec<f64> = (0..inst.n_struct)
        .map(|j| {
            let mut d = ir.obj[j];
            for (i, a) in inst.column(j) {
                // unscale the stored coefficient back to original units
                let a_orig =
                    a / (inst.row_scale[i as usize] * inst.col_scale[j]);
                d -= duals[i as usize] * a_orig;
            }
            d
        })
        .collect();
    let objective: f64 = values.iter().zip(&ir.obj).map(|(x, c)| x * c).sum();

    let basis = simplex.basis_snapshot();
    let sol = SolutionView::new(
        SolveStatus::Optimal,
        objective,
        ir.var_tags.clone(),
        values,
        reduced,
        ir.con_tags.clone(),
        duals,
    );
    Ok((sol, basis))
}
