use std::fs;
use std::path::Path;

use grid_core::Error;

use crate::profile::{HourState, StylizedProfile};
use crate::Result;

/// Joint start-time weights per profile; weights of one profile sum to the
/// profile's mileage share, so the whole table sums to 1.
#[derive(Debug, Clone)]
pub struct StartAssignment {
    /// One entry per profile, aligned with the input slice: (start hour,
    /// joint weight).
    pub per_profile: Vec<Vec<(u8, f64)>>,
}

impl StartAssignment {
    pub fn pair_count(&self) -> usize {
        self.per_profile.iter().map(Vec::len).sum()
    }
}

/// Number of start times offered per operating-time bin: two for most
/// durations, three for the strongly represented 8-hour bin and four for
/// the 9-hour bin.
fn candidate_count(bin_h: u8) -> usize {
    match bin_h {
        8 => 3,
        9 => 4,
        _ => 2,
    }
}

/// Normalized hourly driving-mileage curve (24 entries summing to 1) of a
/// profile started at `start`.
fn mileage_curve(profile: &StylizedProfile, start: u8) -> [f64; 24] {
    let mut curve = [0.0; 24];
    let n_drive = profile.driving_hours().max(1) as f64;
    for (offset, state) in profile.states.iter().enumerate() {
        if *state == HourState::Driving {
            curve[(start as usize + offset) % 24] = 1.0 / n_drive;
        }
    }
    curve
}

/// Projects `v` onto the probability simplex (non-negative, sums to 1).
fn project_simplex(v: &mut [f64]) {
    let n = v.len();
    let mut sorted: Vec<f64> = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (i, s) in sorted.iter().enumerate() {
        cumsum += s;
        let t = (cumsum - 1.0) / (i + 1) as f64;
        if i + 1 == n || sorted[i + 1] <= t {
            theta = t;
            break;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
}

/// Distributes each profile over candidate start times so that the
/// synthesized hourly mileage curve tracks the empirical target curve.
///
/// Candidates are the hours whose driving curve best overlaps the target
/// (the window is kept inside the day, so weekend days stay truck-free),
/// and the weights solve a non-negative least-squares problem with the
/// per-profile sums fixed at the mileage shares.
pub fn assign_start_times(
    profiles: &[StylizedProfile],
    target_curve: &[f64],
) -> Result<StartAssignment> {
    if target_curve.len() != 24 {
        return Err(Error::validation(format!(
            "target curve must have 24 hourly values, got {}",
            target_curve.len()
        )));
    }
    let total: f64 = target_curve.iter().sum();
    if total <= 0.0 || target_curve.iter().any(|v| *v < 0.0) {
        return Err(Error::validation(
            "target curve must be non-negative with positive mass",
        ));
    }
    if profiles.is_empty() {
        return Err(Error::validation("profiles non-empty"));
    }
    let target: Vec<f64> = target_curve.iter().map(|v| v / total).collect();

    // Candidate starts per profile: top-k overlap score, ties to the
    // earlier hour.
    let mut candidates: Vec<Vec<u8>> = Vec::with_capacity(profiles.len());
    let mut curves: Vec<Vec<[f64; 24]>> = Vec::with_capacity(profiles.len());
    for p in profiles {
        let latest = 24 - p.bin_h as usize;
        let mut scored: Vec<(f64, u8)> = (0..=latest)
            .map(|s| {
                let curve = mileage_curve(p, s as u8);
                let score: f64 = curve.iter().zip(&target).map(|(a, b)| a * b).sum();
                (score, s as u8)
            })
            .collect();
        scored.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap().then(x.1.cmp(&y.1)));
        let k = candidate_count(p.bin_h).min(scored.len());
        let mut starts: Vec<u8> = scored[..k].iter().map(|(_, s)| *s).collect();
        starts.sort_unstable();
        curves.push(starts.iter().map(|s| mileage_curve(p, *s)).collect());
        candidates.push(starts);
    }

    // Least squares over per-profile simplex blocks, solved by projected
    // gradient descent. theta[p][i] is the within-profile split; the joint
    // weight is share_p * theta.
    let shares: Vec<f64> = profiles.iter().map(|p| p.mileage_share).collect();
    let mut theta: Vec<Vec<f64>> = candidates
        .iter()
        .map(|c| vec![1.0 / c.len() as f64; c.len()])
        .collect();

    // Lipschitz bound via the Frobenius norm of the stacked curve matrix.
    let mut frob = 0.0;
    for (p, cs) in curves.iter().enumerate() {
        for c in cs {
            frob += shares[p] * shares[p] * c.iter().map(|v| v * v).sum::<f64>();
        }
    }
    let step = 1.0 / frob.max(1e-12);

    let mut synth = [0.0f64; 24];
    for _ in 0..4000 {
        synth.fill(0.0);
        for (p, cs) in curves.iter().enumerate() {
            for (i, c) in cs.iter().enumerate() {
                let w = shares[p] * theta[p][i];
                for h in 0..24 {
                    synth[h] += w * c[h];
                }
            }
        }
        let mut residual = [0.0f64; 24];
        for h in 0..24 {
            residual[h] = synth[h] - target[h];
        }
        let mut max_move = 0.0f64;
        for (p, cs) in curves.iter().enumerate() {
            let block = &mut theta[p];
            let before = block.clone();
            for (i, c) in cs.iter().enumerate() {
                let grad: f64 = shares[p] * c.iter().zip(&residual).map(|(a, b)| a * b).sum::<f64>();
                block[i] -= step * grad;
            }
            project_simplex(block);
            for (b, a) in before.iter().zip(block.iter()) {
                max_move = max_move.max((a - b).abs());
            }
        }
        if max_move < 1e-13 {
            break;
        }
    }

    let per_profile = candidates
        .iter()
        .zip(&theta)
        .zip(&shares)
        .map(|((starts, th), share)| {
            starts
                .iter()
                .zip(th)
                .map(|(s, t)| (*s, share * t))
                .collect()
        })
        .collect();
    Ok(StartAssignment { per_profile })
}

/// Writes the assignment into the profiles' start-time fields, normalized
/// to sum 1 within each profile.
pub fn apply_start_times(profiles: &mut [StylizedProfile], assignment: &StartAssignment) {
    for (p, weights) in profiles.iter_mut().zip(&assignment.per_profile) {
        let sum: f64 = weights.iter().map(|(_, w)| w).sum();
        p.start_times = weights
            .iter()
            .map(|(s, w)| (*s, if sum > 0.0 { w / sum } else { 1.0 / weights.len() as f64 }))
            .collect();
    }
}

/// Synthesized hourly mileage curve of an assignment (sums to 1).
pub fn synthesized_curve(
    profiles: &[StylizedProfile],
    assignment: &StartAssignment,
) -> [f64; 24] {
    let mut synth = [0.0f64; 24];
    for (p, weights) in profiles.iter().zip(&assignment.per_profile) {
        for (s, w) in weights {
            let curve = mileage_curve(p, *s);
            for h in 0..24 {
                synth[h] += w * curve[h];
            }
        }
    }
    synth
}

/// Reads a 24-value start-time target curve (one header line, one value
/// per line).
pub fn read_target_curve(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            detail: e.to_string(),
        })?;
    if values.len() != 24 {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            detail: format!("target curve needs 24 values, got {}", values.len()),
        });
    }
    Ok(values)
}
