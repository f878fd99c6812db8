use std::path::Path;
use std::process::Command;

use opt_model::{ModelIr, SolutionView, SolveStatus};

use crate::SolveError;

/// Renders a solution in the documented text format: status, objective,
/// variable values and reduced costs by tag, duals by tag.
pub fn solution_to_text(sol: &SolutionView) -> String {
    let mut out = String::new();
    out.push_str("format solution v1\n");
    out.push_str(&format!("status {}\n", sol.status));
    out.push_str(&format!("objective {}\n", sol.objective));
    out.push_str(&format!("vars {}\n", sol.var_tags.len()));
    for (i, tag) in sol.var_tags.iter().enumerate() {
        out.push_str(&format!(
            "{} {} {}\n",
            tag, sol.values[i], sol.reduced_costs[i]
        ));
    }
    out.push_str(&format!("duals {}\n", sol.con_tags.len()));
    for (i, tag) in sol.con_tags.iter().enumerate() {
        out.push_str(&format!("{} {}\n", tag, sol.duals[i]));
    }
    out.push_str("end\n");
    out
}

/// Parses the text format written by [`solution_to_text`].
pub fn solution_from_text(text: &str) -> Result<SolutionView, SolveError> {
    let bad = |what: &str| SolveError::Numerical(format!("solution text: {}", what));
    let lines: Vec<&str> = text.lines().collect();
    let mut pos = 0usize;
    fn expect<'a>(
        lines: &[&'a str],
        pos: &mut usize,
        prefix: &str,
    ) -> Result<&'a str, SolveError> {
        let line = lines
            .get(*pos)
            .ok_or_else(|| SolveError::Numerical("solution text: unexpected end".into()))?;
        *pos += 1;
        line.strip_prefix(prefix).map(str::trim).ok_or_else(|| {
            SolveError::Numerical(format!("solution text: expected '{}'", prefix))
        })
    }
    expect(&lines, &mut pos, "format solution v1")?;
    let status = match expect(&lines, &mut pos, "status ")? {
        "optimal" => SolveStatus::Optimal,
        "infeasible" => SolveStatus::Infeasible,
        "unbounded" => SolveStatus::Unbounded,
        other => return Err(bad(&format!("unknown status '{}'", other))),
    };
    let objective: f64 = expect(&lines, &mut pos, "objective ")?
        .parse()
        .map_err(|_| bad("objective"))?;
    let nv: usize = expect(&lines, &mut pos, "vars ")?
        .parse()
        .map_err(|_| bad("vars count"))?;
    let mut var_tags = Vec::with_capacity(nv);
    let mut values = Vec::with_capacity(nv);
    let mut reduced = Vec::with_capacity(nv);
    for _ in 0..nv {
        let line = lines.get(pos).ok_or_else(|| bad("unexpected end"))?;
        pos += 1;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(bad("expected 'tag value reduced_cost'"));
        }
        var_tags.push(f[0].to_string());
        values.push(f[1].parse().map_err(|_| bad("value"))?);
        reduced.push(f[2].parse().map_err(|_| bad("reduced cost"))?);
    }
    let nd: usize = expect(&lines, &mut pos, "duals ")?
        .parse()
        .map_err(|_| bad("duals count"))?;
    let mut con_tags = Vec::with_capacity(nd);
    let mut duals = Vec::with_capacity(nd);
    for _ in 0..nd {
        let line = lines.get(pos).ok_or_else(|| bad("unexpected end"))?;
        pos += 1;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 2 {
            return Err(bad("expected 'tag dual'"));
        }
        con_tags.push(f[0].to_string());
        duals.push(f[1].parse().map_err(|_| bad("dual"))?);
    }
    Ok(SolutionView::new(
        status, objective, var_tags, values, reduced, con_tags, duals,
    ))
}

/// An external solver plugged in over the text boundary: the model is
/// exported to `<work>/model.txt`, the command is invoked with the model
/// and solution paths as its two arguments, and the solution is read back
/// from `<work>/solution.txt`.
pub struct CommandSolver {
    pub command: String,
    pub work_dir: std::path::PathBuf,
}

impl CommandSolver {
    pub fn solve(&self, ir: &ModelIr) -> Result<SolutionView, SolveError> {
        std::fs::create_dir_all(&self.work_dir)
            .map_err(|e| SolveError::Numerical(format!("work dir: {}", e)))?;
        let model_path = self.work_dir.join("model.txt");
        let solution_path = self.work_dir.join("solution.txt");
        ir.write_text(&model_path)
            .map_err(|e| SolveError::Numerical(e.to_string()))?;
        let status = Command::new(&self.command)
            .arg(&model_path)
            .arg(&solution_path)
            .status()
            .map_err(|e| SolveError::Numerical(format!("spawn '{}': {}", self.command, e)))?;
        if !status.success() {
            return Err(SolveError::Numerical(format!(
                "external solver exited with {}",
                status
            )));
        }
        read_solution(&solution_path)
    }
}

pub fn read_solution(path: &Path) -> Result<SolutionView, SolveError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SolveError::Numerical(format!("{}: {}", path.display(), e)))?;
    solution_from_text(&text)
}

pub fn write_solution(path: &Path, sol: &SolutionView) -> Result<(), SolveError> {
    std::fs::write(path, solution_to_text(sol))
        .map_err(|e| SolveError::Numerical(format!("{}: {}", path.display(), e)))
}
