//! Exact mixing times of a single kernel and the sup over the interpolated family.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::markov::{solve_stationary, stationary, tv_slices, ChainPair, StochasticMatrix, DEFAULT_RESIDUAL_TOL};
use crate::{Error, Result, MONOTONE_SLACK, PASS_SLACK};

pub const DEFAULT_ITERATION_CAP: u64 = 1_000_000;
pub const DEFAULT_GRID_POINTS: usize = 101;
pub const DEFAULT_REFINE_DEPTH: u32 = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingResult {
    pub tmix: u64,
    pub eps: f64,
    /// Starting state attaining the worst gap at `tmix`.
    pub worst_state: usize,
    /// Worst-start TV distance at `tmix`.
    pub final_gap: f64,
    /// Worst-start TV distance at `tmix - 1` (at `T = 0` this is `1 - min pi`).
    pub gap_before: f64,
}

/// `t_mix(P, eps)` with the default iteration cap.
pub fn mixing_time(p: &StochasticMatrix, eps: f64) -> Result<MixingResult> {
    mixing_time_with_cap(p, eps, DEFAULT_ITERATION_CAP)
}

/// Smallest `T >= 1` with `max_i ||e_i P^T - pi||_TV <= eps`.
///
/// The maximum over all starting distributions is attained at a point mass,
/// since `nu -> ||nu P^T - pi||_TV` is convex on the simplex. Every power is
/// inspected in turn, and the worst gap must be nonincreasing in `T`.
pub fn mixing_time_with_cap(p: &StochasticMatrix, eps: f64, cap: u64) -> Result<MixingResult> {
    if !(eps > 0.0) {
        return Err(Error::NonPositiveEps(eps));
    }
    let pi = stationary(p)?;
    mixing_time_inner(p, pi.mass(), eps, cap)
}

pub(crate) fn mixing_time_inner(p: &StochasticMatrix, pi: &[f64], eps: f64, cap: u64) -> Result<MixingResult> {
    let step = p.as_matrix();
    let mut power = step.clone();
    let mut scratch = DMatrix::<f64>::zeros(p.n(), p.n());
    let mut previous = 1.0 - pi.iter().copied().fold(f64::INFINITY, f64::min);
    for t in 1..=cap {
        let (worst_state, gap) = worst_row_gap(&power, pi);
        if gap > previous + MONOTONE_SLACK {
            return Err(Error::Numerical(format!(
                "worst-start gap increased from {previous:e} to {gap:e} at T = {t}"
            )));
        }
        if gap <= eps + PASS_SLACK {
            return Ok(MixingResult { tmix: t, eps, worst_state, final_gap: gap, gap_before: previous });
        }
        previous = gap;
        power.mul_to(step, &mut scratch);
        std::mem::swap(&mut power, &mut scratch);
    }
    Err(Error::IterationCap(cap as usize))
}

/// Row of `m` farthest from `target` in TV, and that distance.
pub(crate) fn worst_row_gap(m: &DMatrix<f64>, target: &[f64]) -> (usize, f64) {
    let n = m.ncols();
    let mut row = vec![0.0; n];
    let mut best = (0, f64::NEG_INFINITY);
    for i in 0..m.nrows() {
        for (j, r) in row.iter_mut().enumerate() {
            *r = m[(i, j)];
        }
        let gap = tv_slices(&row, target);
        if gap > best.1 {
            best = (i, gap);
        }
    }
    best
}

/// Worst-start distance `max_i ||e_i P^steps - pi||_TV`, by direct powering.
pub fn worst_start_gap(p: &StochasticMatrix, steps: u64) -> Result<(usize, f64)> {
    let pi = stationary(p)?;
    let mut power = DMatrix::<f64>::identity(p.n(), p.n());
    for _ in 0..steps {
        power = &power * p.as_matrix();
    }
    Ok(worst_row_gap(&power, pi.mass()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupMixingResult {
    pub sup_tmix: u64,
    /// Sampled `s` attaining `sup_tmix`; ties go to the kernel with the
    /// largest worst-start gap one step earlier, then to the smaller `s`.
    pub argmax_s: f64,
    pub eps: f64,
    /// Spacing of the uniform grid.
    pub grid_resolution: f64,
    /// Width to which intervals around jumps were bisected.
    pub refine_resolution: f64,
    /// Every evaluated `(s, t_mix(P_s, eps))`, sorted by `s`.
    pub per_s_samples: Vec<(f64, u64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupMixingOptions {
    pub grid_points: usize,
    pub refine_depth: u32,
    pub iteration_cap: u64,
}

impl Default for SupMixingOptions {
    fn default() -> Self {
        Self {
            grid_points: DEFAULT_GRID_POINTS,
            refine_depth: DEFAULT_REFINE_DEPTH,
            iteration_cap: DEFAULT_ITERATION_CAP,
        }
    }
}

/// Grid estimate of `sup_{s in [0,1]} t_mix(P_s, eps)`.
///
/// Evaluates a uniform grid and bisects every interval whose endpoints
/// disagree down to `10^-refine_depth`. The result is the largest value
/// observed, a lower estimate of the true supremum.
pub fn sup_mixing_time(pair: &ChainPair, eps: f64, options: SupMixingOptions) -> Result<SupMixingResult> {
    if options.grid_points < 2 {
        return Err(Error::OutOfRange {
            name: "grid_points",
            value: options.grid_points as f64,
            range: ">= 2",
        });
    }
    if !(eps > 0.0) {
        return Err(Error::NonPositiveEps(eps));
    }
    let eval = |s: f64| -> Result<Sample> {
        let p = pair.at(s)?;
        let pi = solve_stationary(&p, DEFAULT_RESIDUAL_TOL)?;
        mixing_time_inner(&p, pi.mass(), eps, options.iteration_cap)
            .map(|r| Sample { s, tmix: r.tmix, gap_before: r.gap_before })
            .map_err(|e| match e {
                Error::NotErgodic(msg) => Error::NotErgodic(format!("at s = {s}: {msg}")),
                other => other,
            })
    };

    let last = options.grid_points - 1;
    let grid: Vec<Sample> = (0..=last)
        .map(|i| eval(if i == last { 1.0 } else { i as f64 / last as f64 }))
        .collect::<Result<_>>()?;

    let refine_resolution = 10f64.powi(-(options.refine_depth as i32));
    let mut samples = grid.clone();
    for w in grid.windows(2) {
        if w[0].tmix != w[1].tmix {
            refine(&eval, w[0], w[1], refine_resolution, &mut samples)?;
        }
    }
    samples.sort_by(|a, b| a.s.total_cmp(&b.s));
    samples.dedup_by(|a, b| a.s == b.s);

    let best = samples
        .iter()
        .max_by(|a, b| {
            a.tmix
                .cmp(&b.tmix)
                .then(if (a.gap_before - b.gap_before).abs() <= MONOTONE_SLACK {
                    std::cmp::Ordering::Equal
                } else {
                    a.gap_before.total_cmp(&b.gap_before)
                })
                .then(b.s.total_cmp(&a.s))
        })
        .unwrap();
    let (sup_tmix, argmax_s) = (best.tmix, best.s);
    let endpoint_max = grid[0].tmix.max(grid[last].tmix);
    if sup_tmix < endpoint_max {
        return Err(Error::Numerical("sup mixing time below an endpoint value".into()));
    }
    Ok(SupMixingResult {
        sup_tmix,
        argmax_s,
        eps,
        grid_resolution: 1.0 / last as f64,
        refine_resolution,
        per_s_samples: samples.iter().map(|x| (x.s, x.tmix)).collect(),
    })
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    s: f64,
    tmix: u64,
    gap_before: f64,
}

fn refine<F>(eval: &F, lo: Sample, hi: Sample, resolution: f64, out: &mut Vec<Sample>) -> Result<()>
where
    F: Fn(f64) -> Result<Sample>,
{
    if hi.s - lo.s <= resolution {
        return Ok(());
    }
    let mid = eval(0.5 * (lo.s + hi.s))?;
    out.push(mid);
    if mid.tmix != lo.tmix {
        refine(eval, lo, mid, resolution, out)?;
    }
    if mid.tmix != hi.tmix {
        refine(eval, mid, hi, resolution, out)?;
    }
    Ok(())
}
