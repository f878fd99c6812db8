use opt_model::{ModelIr, Sense};

/// The scaled computational form of a [`ModelIr`]: every row carries a
/// logical variable whose bounds encode the sense, so `A x + s = b` with
/// `l <= (x, s) <= u`. Structural columns are stored in CSC; logical
/// column `i` is the unit vector `e_i`.
pub struct Instance {
    pub m: usize,
    pub n_struct: usize,
    /// Total columns: structural then logical.
    pub n: usize,
    pub col_ptr: Vec<usize>,
    pub row_idx: Vec<u32>,
    pub vals: Vec<f64>,
    pub obj: Vec<f64>,
    pub lo: Vec<f64>,
    pub up: Vec<f64>,
    pub rhs: Vec<f64>,
    pub row_scale: Vec<f64>,
    pub col_scale: Vec<f64>,
}

impl Instance {
    pub fn build(ir: &ModelIr, scaling: bool) -> Instance {
        let m = ir.num_cons();
        let n_struct = ir.num_vars();
        let n = n_struct + m;

        // Merge duplicate (con, var) triplets and order column-major.
        let mut entries: Vec<(u32, u32, f64)> = ir
            .triplets
            .iter()
            .map(|(c, v, x)| (*v, *c, *x))
            .collect();
        entries.sort_unstable_by_key(|(v, c, _)| (*v, *c));
        let mut merged: Vec<(u32, u32, f64)> = Vec::with_capacity(entries.len());
        for (v, c, x) in entries {
            match merged.last_mut() {
                Some((lv, lc, lx)) if *lv == v && *lc == c => *lx += x,
                _ => merged.push((v, c, x)),
            }
        }
        merged.retain(|(_, _, x)| *x != 0.0);

        // Equilibration: rows then columns by max-abs.
        let mut row_scale = vec![1.0_f64; m];
        let mut col_scale = vec![1.0_f64; n_struct];
        if scaling {
            let mut row_max = vec![0.0_f64; m];
            for (_, c, x) in &merged {
                let a = x.abs();
                if a > row_max[*c as usize] {
                    row_max[*c as usize] = a;
                }
            }
            for (r, mx) in row_scale.iter_mut().zip(&row_max) {
                if *mx > 0.0 {
                    *r = 1.0 / mx;
                }
            }
            let mut col_max = vec![0.0_f64; n_struct];
            for (v, c, x) in &merged {
                let a = (x * row_scale[*c as usize]).abs();
                if a > col_max[*v as usize] {
                    col_max[*v as usize] = a;
                }
            }
            for (s, mx) in col_scale.iter_mut().zip(&col_max) {
                if *mx > 0.0 {
                    *s = 1.0 / mx;
                }
            }
        }

        let mut col_ptr = vec![0usize; n_struct + 1];
        for (v, _, _) in &merged {
            col_ptr[*v as usize + 1] += 1;
        }
        for j in 0..n_struct {
            col_ptr[j + 1] += col_ptr[j];
        }
        let mut row_idx = Vec::with_capacity(merged.len());
        let mut vals = Vec::with_capacity(merged.len());
        for (v, c, x) in &merged {
            row_idx.push(*c);
            vals.push(x * row_scale[*c as usize] * col_scale[*v as usize]);
        }

        // Variable data: structural columns are substituted x' = x / c_j;
        // logical bounds encode the row sense and are scale-invariant
        // (zero or infinite).
        let mut obj = Vec::with_capacity(n);
        let mut lo = Vec::with_capacity(n);
        let mut up = Vec::with_capacity(n);
        for j in 0..n_struct {
            obj.push(ir.obj[j] * col_scale[j]);
            lo.push(ir.lo[j] / col_scale[j]);
            up.push(ir.up[j] / col_scale[j]);
        }
        for i in 0..m {
            obj.push(0.0);
            match ir.sense[i] {
                Sense::Le => {
                    lo.push(0.0);
                    up.push(f64::INFINITY);
                }
                Sense::Eq => {
                    lo.push(0.0);
                    up.push(0.0);
                }
                Sense::Ge => {
                    lo.push(f64::NEG_INFINITY);
                    up.push(0.0);
                }
            }
        }
        let rhs = (0..m).map(|i| ir.rhs[i] * row_scale[i]).collect();

        Instance {
            m,
            n_struct,
            n,
            col_ptr,
            row_idx,
            vals,
            obj,
            lo,
            up,
            rhs,
            row_scale,
            col_scale,
        }
    }

    /// Iterates the nonzeros of column `j` (structural or logical).
    #[inline]
    pub fn column(&self, j: usize) -> ColumnIter<'_> {
        if j < self.n_struct {
            ColumnIter::Structural {
                rows: &self.row_idx[self.col_ptr[j]..self.col_ptr[j + 1]],
                vals: &self.vals[self.col_ptr[j]..self.col_ptr[j + 1]],
                pos: 0,
            }
        } else {
            ColumnIter::Logical {
                row: (j - self.n_struct) as u32,
                done: false,
            }
        }
    }
}

pub enum ColumnIter<'a> {
    Structural {
        rows: &'a [u32],
        vals: &'a [f64],
        pos: usize,
    },
    Logical {
        row: u32,
        done: bool,
    },
}

impl<'a> Iterator for ColumnIter<'a> {
    type Item = (u32, f64);

    #[inline]
    fn next(&mut self) -> Option<(u32, f64)> {
        match self {
            ColumnIter::Structural { rows, vals, pos } => {
                if *pos < rows.len() {
                    let item = (rows[*pos], vals[*pos]);
                    *pos += 1;
                    Some(item)
                } else {
                    None
                }
            }
            ColumnIter::Logical { row, done } => {
                if *done {
                    None
                } else {
                    *done = true;
                    Some((*row, 1.0))
                }
            }
        }
    }
}
