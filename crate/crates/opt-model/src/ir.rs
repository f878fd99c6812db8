use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use crate::{ModelError, Result};

/// Constraint sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }

    pub fn parse(s: &str) -> Option<Sense> {
        match s {
            "<=" => Some(Sense::Le),
            "=" => Some(Sense::Eq),
            ">=" => Some(Sense::Ge),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VarId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConId(pub u32);

/// A solver-agnostic sparse LP: variables with bounds and objective
/// coefficients, constraints with sense and right-hand side, and the
/// coefficient triplets connecting them. Every record carries a tag used
/// to retrieve primal values and duals after the solve.
#[derive(Debug, Clone, Default)]
pub struct ModelIr {
    pub var_tags: Vec<String>,
    pub lo: Vec<f64>,
    pub up: Vec<f64>,
    pub obj: Vec<f64>,
    pub con_tags: Vec<String>,
    pub sense: Vec<Sense>,
    pub rhs: Vec<f64>,
    /// (constraint, variable, value) triplets; duplicates are summed.
    pub triplets: Vec<(u32, u32, f64)>,
}

impl ModelIr {
    pub fn new() -> Self {
        ModelIr::default()
    }

    pub fn num_vars(&self) -> usize {
        self.var_tags.len()
    }

    pub fn num_cons(&self) -> usize {
        self.con_tags.len()
    }

    pub fn add_var(&mut self, tag: impl Into<String>, lo: f64, up: f64, obj: f64) -> VarId {
        let id = VarId(self.var_tags.len() as u32);
        self.var_tags.push(tag.into());
        self.lo.push(lo);
        self.up.push(up);
        self.obj.push(obj);
        id
    }

    pub fn add_con(&mut self, tag: impl Into<String>, sense: Sense, rhs: f64) -> ConId {
        let id = ConId(self.con_tags.len() as u32);
        self.con_tags.push(tag.into());
        self.sense.push(sense);
        self.rhs.push(rhs);
        id
    }

    pub fn coef(&mut self, con: ConId, var: VarId, value: f64) {
        if value != 0.0 {
            self.triplets.push((con.0, var.0, value));
        }
    }

    pub fn set_rhs(&mut self, con: ConId, rhs: f64) {
        self.rhs[con.0 as usize] = rhs;
    }

    /// Adds `delta` to the constraint's right-hand side.
    pub fn bump_rhs(&mut self, con: ConId, delta: f64) {
        self.rhs[con.0 as usize] += delta;
    }

    pub fn var_by_tag(&self, tag: &str) -> Option<VarId> {
        self.var_tags
            .iter()
            .position(|t| t == tag)
            .map(|i| VarId(i as u32))
    }

    pub fn con_by_tag(&self, tag: &str) -> Option<ConId> {
        self.con_tags
            .iter()
            .position(|t| t == tag)
            .map(|i| ConId(i as u32))
    }

    /// Scales every objective coefficient by a positive constant.
    pub fn scale_objective(&mut self, factor: f64) {
        for c in &mut self.obj {
            *c *= factor;
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (j, tag) in self.var_tags.iter().enumerate() {
            let (lo, up, obj) = (self.lo[j], self.up[j], self.obj[j]);
            if lo.is_nan() || up.is_nan() || lo > up {
                return Err(ModelError::Invalid(format!(
                    "variable '{}': bad bounds [{}, {}]",
                    tag, lo, up
                )));
            }
            if !obj.is_finite() {
                return Err(ModelError::Invalid(format!(
                    "variable '{}': objective coefficient must be finite",
                    tag
                )));
            }
        }
        for (i, tag) in self.con_tags.iter().enumerate() {
            if !self.rhs[i].is_finite() {
                return Err(ModelError::Invalid(format!(
                    "constraint '{}': rhs must be finite",
                    tag
                )));
            }
        }
        let (m, n) = (self.num_cons() as u32, self.num_vars() as u32);
        for (con, var, v) in &self.triplets {
            if *con >= m || *var >= n {
                return Err(ModelError::Invalid(format!(
                    "triplet ({}, {}, {}) out of range ({} cons, {} vars)",
                    con, var, v, m, n
                )));
            }
            if !v.is_finite() {
                return Err(ModelError::Invalid(format!(
                    "triplet ({}, {}): value must be finite",
                    con, var
                )));
            }
        }
        Ok(())
    }

    /// Writes the documented text export: variables with bounds and
    /// objective, constraints with sense and rhs, then the coefficient
    /// triplets by index.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("format model-ir v1\nminimize\n");
        out.push_str(&format!("vars {}\n", self.num_vars()));
        for j in 0..self.num_vars() {
            out.push_str(&format!(
                "{} {} {} {}\n",
                self.var_tags[j], self.lo[j], self.up[j], self.obj[j]
            ));
        }
        out.push_str(&format!("cons {}\n", self.num_cons()));
        for i in 0..self.num_cons() {
            out.push_str(&format!(
                "{} {} {}\n",
                self.con_tags[i],
                self.sense[i].symbol(),
                self.rhs[i]
            ));
        }
        out.push_str(&format!("coefs {}\n", self.triplets.len()));
        for (con, var, v) in &self.triplets {
            out.push_str(&format!("{} {} {}\n", con, var, v));
        }
        out.push_str("end\n");
        out
    }

    pub fn write_text(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text())
            .map_err(|e| ModelError::Invalid(format!("{}: {}", path.display(), e)))
    }

    /// Parses the text export back into an IR.
    pub fn from_text(text: &str) -> Result<ModelIr> {
        let bad = |line: usize, what: &str| {
            ModelError::Invalid(format!("model text line {}: {}", line + 1, what))
        };
        let lines: Vec<&str> = text.lines().collect();
        let mut ir = ModelIr::new();
        let mut i = 0;
        let expect = |i: &mut usize, prefix: &str| -> Result<String> {
            let line = lines.get(*i).ok_or_else(|| bad(*i, "unexpected end"))?;
            if !line.starts_with(prefix) {
                return Err(bad(*i, &format!("expected '{}'", prefix)));
            }
            let rest = line[prefix.len()..].trim().to_string();
            *i += 1;
            Ok(rest)
        };
        expect(&mut i, "format model-ir v1")?;
        expect(&mut i, "minimize")?;
        let nv: usize = expect(&mut i, "vars ")?
            .parse()
            .map_err(|_| bad(i, "bad vars count"))?;
        for _ in 0..nv {
            let line = lines.get(i).ok_or_else(|| bad(i, "unexpected end"))?;
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 {
                return Err(bad(i, "expected 'tag lo up obj'"));
            }
            let parse = |s: &str| s.parse::<f64>().map_err(|_| bad(i, "bad number"));
            ir.add_var(f[0], parse(f[1])?, parse(f[2])?, parse(f[3])?);
            i += 1;
        }
        let nc: usize = expect(&mut i, "cons ")?
            .parse()
            .map_err(|_| bad(i, "bad cons count"))?;
        for _ in 0..nc {
            let line = lines.get(i).ok_or_else(|| bad(i, "unexpected end"))?;
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(bad(i, "expected 'tag sense rhs'"));
            }
            let sense = Sense::parse(f[1]).ok_or_else(|| bad(i, "bad sense"))?;
            let rhs = f[2].parse::<f64>().map_err(|_| bad(i, "bad rhs"))?;
            ir.add_con(f[0], sense, rhs);
            i += 1;
        }
        let nz: usize = expect(&mut i, "coefs ")?
            .parse()
            .map_err(|_| bad(i, "bad coef count"))?;
        for _ in 0..nz {
            let line = lines.get(i).ok_or_else(|| bad(i, "unexpected end"))?;
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(bad(i, "expected 'con var value'"));
            }
            let con: u32 = f[0].parse().map_err(|_| bad(i, "bad index"))?;
            let var: u32 = f[1].parse().map_err(|_| bad(i, "bad index"))?;
            let v: f64 = f[2].parse().map_err(|_| bad(i, "bad value"))?;
            ir.triplets.push((con, var, v));
            i += 1;
        }
        expect(&mut i, "end")?;
        ir.validate()?;
        Ok(ir)
    }
}

/// Solve outcome of a [`ModelIr`] instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
        })
    }
}

/// A solved scenario: primal values and reduced costs by variable tag,
/// duals by constraint tag.
#[derive(Debug, Clone)]
pub struct SolutionView {
    pub status: SolveStatus,
    pub objective: f64,
    pub var_tags: Vec<String>,
    pub values: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub con_tags: Vec<String>,
    pub duals: Vec<f64>,
    var_index: BTreeMap<String, usize>,
    con_index: BTreeMap<String, usize>,
}

impl SolutionView {
    pub fn new(
        status: SolveStatus,
        objective: f64,
        var_tags: Vec<String>,
        values: Vec<f64>,
        reduced_costs: Vec<f64>,
        con_tags: Vec<String>,
        duals: Vec<f64>,
    ) -> Self {
        let var_index = var_tags
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        let con_index = con_tags
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        SolutionView {
            status,
            objective,
            var_tags,
            values,
            reduced_costs,
            con_tags,
            duals,
            var_index,
            con_index,
        }
    }

    pub fn value(&self, tag: &str) -> Option<f64> {
        self.var_index.get(tag).map(|i| self.values[*i])
    }

    pub fn dual(&self, tag: &str) -> Option<f64> {
        self.con_index.get(tag).map(|i| self.duals[*i])
    }

    /// Sum of the values of all variables whose tag starts with `prefix`.
    pub fn sum_with_prefix(&self, prefix: &str) -> f64 {
        self.var_tags
            .iter()
            .zip(&self.values)
            .filter(|(t, _)| t.starts_with(prefix))
            .map(|(_, v)| v)
            .sum()
    }

    /// Hourly series of the variables `prefix:{hour:04}`.
    pub fn value_series(&self, prefix: &str, horizon: usize) -> Vec<f64> {
        (0..horizon)
            .map(|h| self.value(&format!("{}:{:04}", prefix, h)).unwrap_or(0.0))
            .collect()
    }

    /// Hourly series of duals of the constraints `prefix:{hour:04}`.
    pub fn dual_series(&self, prefix: &str, horizon: usize) -> Vec<f64> {
        (0..horizon)
            .map(|h| self.dual(&format!("{}:{:04}", prefix, h)).unwrap_or(0.0))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_export_round_trips() {
        let mut ir = ModelIr::new();
        let x = ir.add_var("x", 0.0, 3.0, -1.0);
        let y = ir.add_var("y", 0.0, f64::INFINITY, 2.5);
        let c = ir.add_con("cap", Sense::Le, 4.0);
        ir.coef(c, x, 1.0);
        ir.coef(c, y, 2.0);
        let b = ir.add_con("bal:0000", Sense::Eq, 1.0);
        ir.coef(b, y, 1.0);

        let text = ir.to_text();
        let back = ModelIr::from_text(&text).unwrap();
        assert_eq!(back.var_tags, ir.var_tags);
        assert_eq!(back.lo, ir.lo);
        assert_eq!(back.up, ir.up);
        assert_eq!(back.rhs, ir.rhs);
        assert_eq!(back.triplets, ir.triplets);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn validation_catches_bad_triplets() {
        let mut ir = ModelIr::new();
        let x = ir.add_var("x", 0.0, 1.0, 0.0);
        ir.triplets.push((5, x.0, 1.0));
        assert!(ir.validate().is_err());
    }

    #[test]
    fn validation_catches_inverted_bounds() {
        let mut ir = ModelIr::new();
        ir.add_var("x", 2.0, 1.0, 0.0);
        assert!(ir.validate().is_err());
    }

    #[test]
    fn solution_view_lookup() {
        let sol = SolutionView::new(
            SolveStatus::Optimal,
            12.0,
            vec!["gen:DE:gas:0000".into(), "gen:DE:gas:0001".into()],
            vec![1.0, 2.0],
            vec![0.0, 0.0],
            vec!["bal:DE:0000".into(), "bal:DE:0001".into()],
            vec![50.0, 30.0],
        );
        assert_eq!(sol.value("gen:DE:gas:0001"), Some(2.0));
        assert_eq!(sol.dual("bal:DE:0000"), Some(50.0));
        assert_eq!(sol.value_series("gen:DE:gas", 2), vec![1.0, 2.0]);
        assert_eq!(sol.sum_with_prefix("gen:DE:gas"), 3.0);
    }
}
