//! Brute-force vertex enumeration for small, fully bounded LPs.
//!
//! Verification oracle only: it shares no code with the simplex. Every
//! vertex is an intersection of n active conditions chosen from the
//! constraint rows and the variable bounds; enumerating all of them and
//! taking the best feasible one yields the exact optimum for instances
//! with a handful of variables.

use opt_model::{ModelIr, Sense};

const FEAS_TOL: f64 = 1e-7;

/// Minimizes the model by enumerating candidate vertices. Returns the best
/// feasible vertex (objective, point), or `None` when no vertex is
/// feasible. All variable bounds must be finite.
pub fn solve_by_vertex_enumeration(ir: &ModelIr) -> Option<(f64, Vec<f64>)> {
    let n = ir.num_vars();
    let m = ir.num_cons();
    assert!(
        ir.lo.iter().chain(ir.up.iter()).all(|b| b.is_finite()),
        "enumeration oracle needs finite bounds"
    );
    assert!(n <= 16, "enumeration oracle is for small instances");

    // Dense rows.
    let mut rows = vec![vec![0.0; n]; m];
    for (c, v, a) in &ir.triplets {
        rows[*c as usize][*v as usize] += *a;
    }

    let eq_rows: Vec<usize> = (0..m).filter(|i| ir.sense[*i] == Sense::Eq).collect();
    let ineq_rows: Vec<usize> = (0..m).filter(|i| ir.sense[*i] != Sense::Eq).collect();
    if eq_rows.len() > n {
        return None;
    }

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut consider = |x: &[f64]| {
        // Bounds.
        for j in 0..n {
            if x[j] < ir.lo[j] - FEAS_TOL || x[j] > ir.up[j] + FEAS_TOL {
                return;
            }
        }
        for i in 0..m {
            let act: f64 = rows[i].iter().zip(x).map(|(a, v)| a * v).sum();
            let ok = match ir.sense[i] {
                Sense::Le => act <= ir.rhs[i] + FEAS_TOL,
                Sense::Ge => act >= ir.rhs[i] - FEAS_TOL,
                Sense::Eq => (act - ir.rhs[i]).abs() <= FEAS_TOL,
            };
            if !ok {
                return;
            }
        }
        let obj: f64 = ir.obj.iter().zip(x).map(|(c, v)| c * v).sum();
        match &best {
            Some((b, _)) if obj >= *b => {}
            _ => best = Some((obj, x.to_vec())),
        }
    };

    // Choose k extra active inequality rows, k + eq rows basic columns,
    // and a bound pattern for the remaining columns.
    let max_extra = n.saturating_sub(eq_rows.len()).min(ineq_rows.len());
    for extra in 0..=max_extra {
        for ineq_pick in combinations(ineq_rows.len(), extra) {
            let active: Vec<usize> = eq_rows
                .iter()
                .copied()
                .chain(ineq_pick.iter().map(|p| ineq_rows[*p]))
                .collect();
            let k = active.len();
            for basic_pick in combinations(n, k) {
                let nonbasic: Vec<usize> =
                    (0..n).filter(|j| !basic_pick.contains(j)).collect();
                let patterns = 1usize << nonbasic.len();
                for pat in 0..patterns {
                    let mut x = vec![0.0; n];
                    for (bit, j) in nonbasic.iter().enumerate() {
                        x[*j] = if pat >> bit & 1 == 1 {
                            ir.up[*j]
                        } else {
                            ir.lo[*j]
                        };
                    }
                    if k == 0 {
                        consider(&x);
                        continue;
                    }
                    // Solve A[active, basic] x_B = rhs - A[active, nonbasic] x_N.
                    let mut a = vec![0.0; k * k];
                    let mut b = vec![0.0; k];
                    for (r, i) in active.iter().enumerate() {
                        let mut rhs = ir.rhs[*i];
                        for j in &nonbasic {
                            rhs -= rows[*i][*j] * x[*j];
                        }
                        b[r] = rhs;
                        for (cix, j) in basic_pick.iter().enumerate() {
                            a[r * k + cix] = rows[*i][*j];
                        }
                    }
                    if let Some(sol) = solve_dense(&mut a, &mut b, k) {
                        for (cix, j) in basic_pick.iter().enumerate() {
                            x[*j] = sol[cix];
                        }
                        consider(&x);
                    }
                }
            }
        }
    }
    best
}

/// All k-subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // Advance.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve_dense(a: &mut [f64], b: &mut [f64], k: usize) -> Option<Vec<f64>> {
    for col in 0..k {
        let mut piv = col;
        let mut best = a[col * k + col].abs();
        for r in col + 1..k {
            let v = a[r * k + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best < 1e-11 {
            return None;
        }
        if piv != col {
            for c in 0..k {
                a.swap(col * k + c, piv * k + c);
            }
            b.swap(col, piv);
        }
        let d = a[col * k + col];
        for r in col + 1..k {
            let f = a[r * k + col] / d;
            if f != 0.0 {
                for c in col..k {
                    a[r * k + c] -= f * a[col * k + c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; k];
    for col in (0..k).rev() {
        let mut acc = b[col];
        for c in col + 1..k {
            acc -= a[col * k + c] * x[c];
        }
        x[col] = acc / a[col * k + col];
    }
    Some(x)
}

/// A tiny deterministic PRNG (SplitMix64) for generating test instances
/// without external dependencies.
#[derive(Debug, Clone)]
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Draws a random bounded LP that is feasible by construction: an interior
/// point is sampled first and every row's rhs is offset from its activity.
pub fn random_bounded_lp(seed: u64, max_vars: usize, max_cons: usize) -> ModelIr {
    let mut rng = SplitMix64(seed);
    let n = 2 + rng.below(max_vars.saturating_sub(1));
    let m = 1 + rng.below(max_cons);
    let mut ir = ModelIr::new();
    let mut x0 = Vec::with_capacity(n);
    for j in 0..n {
        let lo = rng.range(-5.0, 2.0);
        let up = lo + rng.range(0.5, 8.0);
        let obj = rng.range(-10.0, 10.0);
        ir.add_var(format!("x{}", j), lo, up, obj);
        x0.push(rng.range(lo, up));
    }
    for i in 0..m {
        let mut coefs = Vec::new();
        let mut activity = 0.0;
        for (j, x) in x0.iter().enumerate() {
            if rng.next_f64() < 0.7 {
                let a = rng.range(-4.0, 4.0);
                if a.abs() > 1e-3 {
                    coefs.push((j, a));
                    activity += a * x;
                }
            }
        }
        if coefs.is_empty() {
            let a = rng.range(1.0, 3.0);
            coefs.push((0, a));
            activity += a * x0[0];
        }
        let roll = rng.next_f64();
        let (sense, rhs) = if roll < 0.15 {
            (Sense::Eq, activity)
        } else if roll < 0.6 {
            (Sense::Le, activity + rng.range(0.05, 2.0))
        } else {
            (Sense::Ge, activity - rng.range(0.05, 2.0))
        };
        let con = ir.add_con(format!("c{}", i), sense, rhs);
        for (j, a) in coefs {
            ir.coef(con, opt_model::VarId(j as u32), a);
        }
    }
    ir
}
