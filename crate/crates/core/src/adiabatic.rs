//! Adiabatic and stable adiabatic times of `P_t = (1 - t) P0 + t P1`.
//!
//! The adiabatic schedule of length `T` applies `P_{k/T}` at step `k`. Two
//! trajectories matter here:
//!
//! - the full product `P_0 P_{1/T} ... P_1` (`T + 1` factors), whose worst row
//!   against `pi_1` defines the adiabatic distance;
//! - the corridor `mu_k = pi_0 P_{1/T} ... P_{k/T}` for `1 <= k <= T`, compared
//!   step by step with the instantaneous targets `pi_{k/T}`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::markov::{left_mul, solve_stationary, tv_slices, ChainPair, Distribution, StochasticMatrix, DEFAULT_RESIDUAL_TOL};
use crate::mixing::{mixing_time, sup_mixing_time, worst_row_gap, SupMixingOptions, SupMixingResult};
use crate::spectral::cor1_delta;
use crate::{ceil_bound, Error, Result, BOUND_SLACK, PASS_SLACK};

pub const DEFAULT_STABLE_CAP: u64 = 10_000;
pub const DEFAULT_CORRIDOR_CAP: u64 = 100_000;
pub const DEFAULT_ADIABATIC_HORIZON_CAP: u64 = 20_000;
pub const DEFAULT_THEOREM3_HORIZON_CAP: u64 = 2_000_000;
pub const DEFAULT_FAST_WINDOW: u64 = 50;

/// Upper bound on cached stationary distributions during a scan.
const CACHE_LIMIT: usize = 250_000;

// ---------------------------------------------------------------------------
// Corridor

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorridorStep {
    pub k: u64,
    pub mu: Distribution,
    pub target_pi: Distribution,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Corridor {
    #[serde(rename = "T")]
    pub total_steps: u64,
    pub steps: Vec<CorridorStep>,
}

impl Corridor {
    /// Largest gap and the step attaining it (first one on ties).
    pub fn max_gap(&self) -> (u64, f64) {
        self.steps.iter().fold((0, f64::NEG_INFINITY), |best, s| if s.gap > best.1 { (s.k, s.gap) } else { best })
    }
}

/// Stationary distributions keyed by the reduced fraction `k/T`.
///
/// The same fraction maps to the same `f64` time, so cached values are exact.
#[derive(Debug, Default)]
pub struct StationaryCache {
    entries: HashMap<(u64, u64), Distribution>,
}

impl StationaryCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn get_or_solve(&mut self, kernel: &StochasticMatrix, k: u64, total: u64) -> Result<Distribution> {
        let g = gcd(k, total);
        let key = (k / g, total / g);
        if let Some(pi) = self.entries.get(&key) {
            return Ok(pi.clone());
        }
        let pi = solve_stationary(kernel, DEFAULT_RESIDUAL_TOL)?;
        if self.entries.len() < CACHE_LIMIT {
            self.entries.insert(key, pi.clone());
        }
        Ok(pi)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

fn check_steps(total: u64) -> Result<()> {
    if total == 0 {
        Err(Error::OutOfRange { name: "T", value: 0.0, range: ">= 1" })
    } else {
        Ok(())
    }
}

/// Walk the corridor of length `total`, calling `visit(k, mu_k, pi_{k/T}, gap_k)`.
fn walk_corridor<F>(pair: &ChainPair, total: u64, mut cache: Option<&mut StationaryCache>, mut visit: F) -> Result<()>
where
    F: FnMut(u64, &[f64], &Distribution, f64),
{
    check_steps(total)?;
    let pi0 = solve_stationary(pair.p0(), DEFAULT_RESIDUAL_TOL)?;
    let mut mu = pi0.into_vec();
    for k in 1..=total {
        let kernel = pair.at_step(k, total);
        mu = Distribution::from_raw(left_mul(&mu, kernel.as_matrix())).into_vec();
        let target = match cache.as_deref_mut() {
            Some(c) => c.get_or_solve(&kernel, k, total)?,
            None => solve_stationary(&kernel, DEFAULT_RESIDUAL_TOL)?,
        };
        let gap = tv_slices(&mu, target.mass());
        visit(k, &mu, &target, gap);
    }
    Ok(())
}

/// Full corridor `(mu_k, pi_{k/T}, gap_k)` for `k = 1..=T`.
pub fn corridor(pair: &ChainPair, total_steps: u64) -> Result<Corridor> {
    let mut steps = Vec::with_capacity(total_steps.min(1 << 20) as usize);
    walk_corridor(pair, total_steps, None, |k, mu, target, gap| {
        steps.push(CorridorStep {
            k,
            mu: Distribution::from_raw(mu.to_vec()),
            target_pi: target.clone(),
            gap,
        });
    })?;
    Ok(Corridor { total_steps, steps })
}

/// Corridor gaps only, indexed by `k - 1`.
pub fn corridor_gaps(pair: &ChainPair, total_steps: u64) -> Result<Vec<f64>> {
    let mut gaps = Vec::with_capacity(total_steps.min(1 << 20) as usize);
    walk_corridor(pair, total_steps, None, |_, _, _, gap| gaps.push(gap))?;
    Ok(gaps)
}

/// Largest corridor gap `(k, gap)` without storing the trajectory.
pub fn corridor_max_gap(pair: &ChainPair, total_steps: u64) -> Result<(u64, f64)> {
    let mut best = (0, f64::NEG_INFINITY);
    walk_corridor(pair, total_steps, None, |k, _, _, gap| {
        if gap > best.1 {
            best = (k, gap);
        }
    })?;
    Ok(best)
}

// ---------------------------------------------------------------------------
// Adiabatic time

/// The `T + 1` factor product `P_0 P_{1/T} ... P_{T/T}`.
pub fn adiabatic_product(pair: &ChainPair, total_steps: u64) -> Result<StochasticMatrix> {
    Ok(StochasticMatrix::from_matrix_unchecked(product_matrix(pair, total_steps)?))
}

fn product_matrix(pair: &ChainPair, total: u64) -> Result<DMatrix<f64>> {
    check_steps(total)?;
    let n = pair.n();
    let mut acc = pair.p0().as_matrix().clone();
    let mut scratch = DMatrix::<f64>::zeros(n, n);
    for k in 1..=total {
        let kernel = pair.at_step(k, total);
        acc.mul_to(kernel.as_matrix(), &mut scratch);
        std::mem::swap(&mut acc, &mut scratch);
    }
    Ok(acc)
}

/// `max_nu ||nu P_0 P_{1/T} ... P_1 - pi_1||_TV`, attained at a point mass.
pub fn adiabatic_distance(pair: &ChainPair, total_steps: u64) -> Result<f64> {
    let pi1 = solve_stationary(pair.p1(), DEFAULT_RESIDUAL_TOL)?;
    let product = product_matrix(pair, total_steps)?;
    Ok(worst_row_gap(&product, pi1.mass()).1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AdiabaticMode {
    /// Scan every `T` up to the certified horizon.
    Exact,
    /// Stop at the first run of `window` consecutive passing `T`.
    Fast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdiabaticResult {
    pub t_ad: u64,
    pub eps: f64,
    /// `ceil(2 t_mix(P1, eps/2)^2 / eps)`: the condition holds for every `T` at or beyond it.
    pub certified_horizon: u64,
    pub mode: AdiabaticMode,
    /// True for fast-mode results, which carry no certificate.
    pub heuristic: bool,
    #[serde(rename = "per_T_gaps")]
    pub per_t_gaps: Vec<(u64, f64)>,
}

/// `ceil(2 t_mix(P1, eps/2)^2 / eps)`.
pub fn adiabatic_horizon(pair: &ChainPair, eps: f64) -> Result<u64> {
    if !(eps > 0.0) {
        return Err(Error::NonPositiveEps(eps));
    }
    let m = mixing_time(pair.p1(), eps / 2.0)?.tmix as f64;
    Ok(ceil_bound(2.0 * m * m / eps))
}

/// Adiabatic time.
///
/// Exact mode evaluates the adiabatic distance for every `T` in `[1, H]`, `H`
/// the certified horizon, and returns the least `T*` such that the condition
/// holds throughout `[T*, H]`. If it fails at `H` itself the result is `H + 1`,
/// which callers comparing against `H` see as a bound violation.
pub fn adiabatic_time(
    pair: &ChainPair,
    eps: f64,
    mode: AdiabaticMode,
    window: u64,
    horizon_cap: u64,
) -> Result<AdiabaticResult> {
    let horizon = adiabatic_horizon(pair, eps)?;
    let passes = |gap: f64| gap <= eps + PASS_SLACK;
    match mode {
        AdiabaticMode::Exact => {
            if horizon > horizon_cap {
                return Err(Error::HorizonExceedsCap { horizon, cap: horizon_cap });
            }
            let per_t_gaps: Vec<(u64, f64)> =
                (1..=horizon).map(|t| adiabatic_distance(pair, t).map(|g| (t, g))).collect::<Result<_>>()?;
            let failing_tail = per_t_gaps.iter().rev().take_while(|(_, g)| passes(*g)).count() as u64;
            Ok(AdiabaticResult {
                t_ad: horizon + 1 - failing_tail,
                eps,
                certified_horizon: horizon,
                mode,
                heuristic: false,
                per_t_gaps,
            })
        }
        AdiabaticMode::Fast => {
            let window = window.max(1);
            let mut per_t_gaps = Vec::new();
            let mut run_start = None;
            let mut t = 1;
            loop {
                if t > horizon_cap {
                    return Err(Error::CapExceeded { cap: horizon_cap, trace: per_t_gaps });
                }
                let gap = adiabatic_distance(pair, t)?;
                per_t_gaps.push((t, gap));
                if passes(gap) {
                    let start = *run_start.get_or_insert(t);
                    if t + 1 - start >= window {
                        return Ok(AdiabaticResult {
                            t_ad: start,
                            eps,
                            certified_horizon: horizon,
                            mode,
                            heuristic: true,
                            per_t_gaps,
                        });
                    }
                } else {
                    run_start = None;
                }
                t += 1;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Stable adiabatic time

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StableAdiabaticResult {
    pub t_sad: u64,
    pub eps: f64,
    /// Step of the largest corridor gap at `t_sad`.
    pub worst_k: u64,
    pub worst_gap: f64,
    /// Largest corridor gap for every scanned `T`.
    pub scan: Vec<(u64, f64)>,
}

/// Least `T` whose corridor keeps every gap strictly below `eps`.
///
/// Scans `T = 1, 2, ...` linearly; no monotonicity in `T` is assumed.
pub fn stable_adiabatic_time(pair: &ChainPair, eps: f64, cap: u64) -> Result<StableAdiabaticResult> {
    if !(eps > 0.0) {
        return Err(Error::NonPositiveEps(eps));
    }
    let mut cache = StationaryCache::new();
    let mut scan = Vec::new();
    for total in 1..=cap {
        let mut worst = (0, f64::NEG_INFINITY);
        walk_corridor(pair, total, Some(&mut cache), |k, _, _, gap| {
            if gap > worst.1 {
                worst = (k, gap);
            }
        })?;
        scan.push((total, worst.1));
        if worst.1 < eps + PASS_SLACK {
            return Ok(StableAdiabaticResult { t_sad: total, eps, worst_k: worst.0, worst_gap: worst.1, scan });
        }
    }
    Err(Error::CapExceeded { cap, trace: scan })
}

// ---------------------------------------------------------------------------
// Corridor inequalities

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prop3Row {
    pub k: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// Checks `gap_k <= ||pi_{k/T} - pi_0||_TV + (k+1)^2 / (2T)` for every `k`.
pub fn prop3_check(pair: &ChainPair, total_steps: u64) -> Result<Vec<Prop3Row>> {
    let pi0 = solve_stationary(pair.p0(), DEFAULT_RESIDUAL_TOL)?;
    let mut rows = Vec::with_capacity(total_steps.min(1 << 20) as usize);
    let t = total_steps as f64;
    walk_corridor(pair, total_steps, None, |k, _, target, gap| {
        let drift = tv_slices(target.mass(), pi0.mass());
        let rhs = drift + ((k + 1) as f64).powi(2) / (2.0 * t);
        rows.push(Prop3Row { k, lhs: gap, rhs, pass: gap <= rhs + BOUND_SLACK });
    })?;
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem2Options {
    pub sup: SupMixingOptions,
    pub corridor_cap: u64,
}

impl Default for Theorem2Options {
    fn default() -> Self {
        Self { sup: SupMixingOptions::default(), corridor_cap: DEFAULT_CORRIDOR_CAP }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem2Report {
    pub eps: f64,
    pub delta: f64,
    /// Grid estimate of `sup_s t_mix(P_s, eps / 2)`.
    pub sup_tmix: u64,
    pub grid_resolution: f64,
    pub refine_resolution: f64,
    #[serde(rename = "T")]
    pub total_steps: u64,
    /// Steps `k` with `delta <= k / T <= 1`.
    pub checked_steps: u64,
    pub worst_k: u64,
    pub max_gap: f64,
    pub violations: Vec<(u64, f64)>,
    pub pass: bool,
}

/// Corridor guarantee away from the start: with
/// `T = ceil(2 t_mix(eps/2)^2 / (eps delta))`, every step with
/// `delta <= k/T <= 1` has gap at most `eps`.
pub fn theorem2_check(pair: &ChainPair, eps: f64, delta: f64, options: Theorem2Options) -> Result<Theorem2Report> {
    if !(eps > 0.0) {
        return Err(Error::NonPositiveEps(eps));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::OutOfRange { name: "delta", value: delta, range: "(0, 1]" });
    }
    let sup = sup_mixing_time(pair, eps / 2.0, options.sup)?;
    theorem2_check_with_sup(pair, eps, delta, &sup, options.corridor_cap)
}

/// [`theorem2_check`] with a precomputed sup mixing time at `eps / 2`.
pub fn theorem2_check_with_sup(
    pair: &ChainPair,
    eps: f64,
    delta: f64,
    sup: &SupMixingResult,
    corridor_cap: u64,
) -> Result<Theorem2Report> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::OutOfRange { name: "delta", value: delta, range: "(0, 1]" });
    }
    let total = theorem2_steps(eps, delta, sup.sup_tmix);
    if total > corridor_cap {
        return Err(Error::CapExceeded { cap: corridor_cap, trace: Vec::new() });
    }
    let mut checked_steps = 0;
    let mut worst = (0, 0.0);
    let mut violations = Vec::new();
    walk_corridor(pair, total, None, |k, _, _, gap| {
        if (k as f64) / (total as f64) < delta {
            return;
        }
        checked_steps += 1;
        if gap > worst.1 || worst.0 == 0 {
            worst = (k, gap);
        }
        if gap > eps + BOUND_SLACK {
            violations.push((k, gap));
        }
    })?;
    Ok(Theorem2Report {
        eps,
        delta,
        sup_tmix: sup.sup_tmix,
        grid_resolution: sup.grid_resolution,
        refine_resolution: sup.refine_resolution,
        total_steps: total,
        checked_steps,
        worst_k: worst.0,
        max_gap: worst.1,
        pass: violations.is_empty(),
        violations,
    })
}

/// `ceil(2 m^2 / (eps delta))`.
pub fn theorem2_steps(eps: f64, delta: f64, sup_tmix_half_eps: u64) -> u64 {
    let m = sup_tmix_half_eps as f64;
    ceil_bound(2.0 * m * m / (eps * delta))
}

/// `ceil(4 m^4 / eps^3 + 4 m^2 / eps^2 + 1 / eps)`, `m` the sup mixing time at `eps / 2`.
pub fn theorem3_horizon(eps: f64, sup_tmix_half_eps: u64) -> Result<u64> {
    if !(eps > 0.0) {
        return Err(Error::NonPositiveEps(eps));
    }
    if sup_tmix_half_eps < 1 {
        return Err(Error::OutOfRange { name: "sup_tmix_half_eps", value: 0.0, range: ">= 1" });
    }
    let m = sup_tmix_half_eps as f64;
    let m2 = m * m;
    Ok(ceil_bound(4.0 * m2 * m2 / eps.powi(3) + 4.0 * m2 / eps.powi(2) + 1.0 / eps))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem3Options {
    pub sup: SupMixingOptions,
    pub horizon_cap: u64,
}

impl Default for Theorem3Options {
    fn default() -> Self {
        Self { sup: SupMixingOptions::default(), horizon_cap: DEFAULT_THEOREM3_HORIZON_CAP }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem3Report {
    pub eps: f64,
    pub sup_tmix: u64,
    pub grid_resolution: f64,
    pub refine_resolution: f64,
    /// Explicit horizon `T`.
    pub horizon: u64,
    /// `sqrt(eps / T) - 1 / T`, the split point between the two proof cases.
    pub split_delta: f64,
    /// Continuity radius at `eps`, absent when `eps >= 1 / sqrt(n)`.
    pub continuity_delta: Option<f64>,
    /// Whether `eps < 1/sqrt(n)` and `split_delta <= continuity_delta` hold.
    pub precondition_met: bool,
    pub worst_k: u64,
    pub max_gap: f64,
    /// `max_gap <= eps` (with slack).
    pub gaps_within_eps: bool,
}

/// Runs the corridor at the explicit horizon and checks every gap against `eps`.
pub fn theorem3_check(pair: &ChainPair, eps: f64, options: Theorem3Options) -> Result<Theorem3Report> {
    if !(eps > 0.0) {
        return Err(Error::NonPositiveEps(eps));
    }
    let sup = sup_mixing_time(pair, eps / 2.0, options.sup)?;
    theorem3_check_with_sup(pair, eps, &sup, options.horizon_cap)
}

/// [`theorem3_check`] with a precomputed sup mixing time at `eps / 2`.
pub fn theorem3_check_with_sup(
    pair: &ChainPair,
    eps: f64,
    sup: &SupMixingResult,
    horizon_cap: u64,
) -> Result<Theorem3Report> {
    let horizon = theorem3_horizon(eps, sup.sup_tmix)?;
    if horizon > horizon_cap {
        return Err(Error::HorizonExceedsCap { horizon, cap: horizon_cap });
    }
    let t = horizon as f64;
    let split_delta = (eps / t).sqrt() - 1.0 / t;
    let continuity_delta = cor1_delta(pair.n(), eps, sup.sup_tmix).ok();
    let precondition_met = continuity_delta.is_some_and(|d| split_delta <= d);
    let (worst_k, max_gap) = corridor_max_gap(pair, horizon)?;
    Ok(Theorem3Report {
        eps,
        sup_tmix: sup.sup_tmix,
        grid_resolution: sup.grid_resolution,
        refine_resolution: sup.refine_resolution,
        horizon,
        split_delta,
        continuity_delta,
        precondition_met,
        worst_k,
        max_gap,
        gaps_within_eps: max_gap <= eps + BOUND_SLACK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> StochasticMatrix {
        StochasticMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn lazy() -> StochasticMatrix {
        m(&[&[0.75, 0.25], &[0.25, 0.75]])
    }

    fn chain_a() -> StochasticMatrix {
        m(&[&[0.8, 0.2], &[0.4, 0.6]])
    }

    fn flat() -> StochasticMatrix {
        m(&[&[0.5, 0.5], &[0.5, 0.5]])
    }

    fn pair(p0: StochasticMatrix, p1: StochasticMatrix) -> ChainPair {
        ChainPair::new(p0, p1).unwrap()
    }

    #[test]
    fn constant_corridor_is_flat() {
        let c = corridor(&pair(chain_a(), chain_a()), 10).unwrap();
        assert_eq!(c.steps.len(), 10);
        assert!(c.steps.iter().all(|s| s.gap < 1e-15));
    }

    #[test]
    fn two_step_corridor_by_hand() {
        let c = corridor(&pair(lazy(), chain_a()), 2).unwrap();
        // mu_1 = (0.5, 0.5) P_{1/2}, P_{1/2} = [[0.775, 0.225], [0.325, 0.675]]
        assert!((c.steps[0].mu.mass()[0] - 0.55).abs() < 1e-15);
        assert!((c.steps[0].gap - (0.590_909_090_909_090_9 - 0.55)).abs() < 1e-12);
        assert!((c.steps[1].mu.mass()[0] - 0.62).abs() < 1e-15);
        assert!((c.steps[1].gap - (2.0 / 3.0 - 0.62)).abs() < 1e-12);
    }

    #[test]
    fn single_step_corridor() {
        let p = pair(lazy(), chain_a());
        let c = corridor(&p, 1).unwrap();
        assert_eq!(c.steps.len(), 1);
        assert!((c.steps[0].mu.mass()[0] - 0.6).abs() < 1e-15);
        assert!((c.steps[0].target_pi.mass()[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!(corridor(&p, 0).is_err());
    }

    #[test]
    fn adiabatic_distance_examples() {
        let d = adiabatic_distance(&pair(lazy(), lazy()), 3).unwrap();
        assert!((d - 0.5f64.powi(5)).abs() < 1e-15);
        assert!(adiabatic_distance(&pair(flat(), flat()), 7).unwrap() < 1e-15);
        // P0 P1 = [[0.7, 0.3], [0.5, 0.5]] against (2/3, 1/3)
        let d = adiabatic_distance(&pair(lazy(), chain_a()), 1).unwrap();
        assert!((d - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn adiabatic_time_examples() {
        let r = adiabatic_time(&pair(lazy(), lazy()), 0.05, AdiabaticMode::Exact, 0, 10_000).unwrap();
        assert_eq!(r.t_ad, 3);
        assert_eq!(r.certified_horizon, 1000);
        assert_eq!(r.per_t_gaps.len(), 1000);
        assert!(!r.heuristic);
        let r = adiabatic_time(&pair(flat(), flat()), 0.1, AdiabaticMode::Exact, 0, 10_000).unwrap();
        assert_eq!(r.t_ad, 1);
        let err = adiabatic_time(&pair(lazy(), lazy()), 0.05, AdiabaticMode::Exact, 0, 999).unwrap_err();
        assert_eq!(err, Error::HorizonExceedsCap { horizon: 1000, cap: 999 });
    }

    #[test]
    fn fast_mode_is_flagged() {
        let r = adiabatic_time(&pair(lazy(), chain_a()), 0.1, AdiabaticMode::Fast, 20, 10_000).unwrap();
        let exact = adiabatic_time(&pair(lazy(), chain_a()), 0.1, AdiabaticMode::Exact, 0, 10_000).unwrap();
        assert!(r.heuristic);
        assert_eq!(r.t_ad, exact.t_ad);
    }

    #[test]
    fn stable_examples() {
        assert_eq!(stable_adiabatic_time(&pair(chain_a(), chain_a()), 0.1, 100).unwrap().t_sad, 1);
        let r = stable_adiabatic_time(&pair(lazy(), chain_a()), 0.05, 100).unwrap();
        assert_eq!(r.t_sad, 2);
        assert_eq!(r.scan.len(), 2);
        assert!((r.scan[0].1 - 1.0 / 15.0).abs() < 1e-12);
        assert_eq!(r.worst_k, 2);
        match stable_adiabatic_time(&pair(lazy(), chain_a()), 1e-4, 3) {
            Err(Error::CapExceeded { cap: 3, trace }) => assert_eq!(trace.len(), 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn drift_bound_rows() {
        let rows = prop3_check(&pair(lazy(), chain_a()), 2).unwrap();
        assert_eq!(rows.len(), 2);
        assert!((rows[1].lhs - 0.046_666_666_666_666_7).abs() < 1e-12);
        assert!((rows[1].rhs - (1.0 / 6.0 + 9.0 / 4.0)).abs() < 1e-12);
        assert!(rows.iter().all(|r| r.pass));
        assert!(prop3_check(&pair(lazy(), lazy()), 7).unwrap().iter().all(|r| r.lhs < 1e-15 && r.pass));
    }

    #[test]
    fn away_from_start_examples() {
        let r = theorem2_check(&pair(lazy(), lazy()), 0.2, 0.5, Theorem2Options::default()).unwrap();
        assert_eq!(r.sup_tmix, 3);
        assert_eq!(r.total_steps, 180);
        assert_eq!(r.checked_steps, 91);
        assert!(r.pass && r.max_gap < 1e-15);
        let r = theorem2_check(&pair(lazy(), chain_a()), 0.2, 0.5, Theorem2Options::default()).unwrap();
        assert!(r.pass && r.violations.is_empty());
        let err = theorem2_check(&pair(lazy(), chain_a()), 0.2, 0.0, Theorem2Options::default()).unwrap_err();
        assert!(matches!(err, Error::OutOfRange { name: "delta", .. }));
    }

    #[test]
    fn explicit_horizon_arithmetic() {
        assert_eq!(theorem3_horizon(0.1, 4).unwrap(), 1_030_410);
        assert_eq!(theorem3_horizon(1.0, 1).unwrap(), 9);
        assert_eq!(theorem3_horizon(0.2, 3).unwrap(), 41_405);
        assert!(matches!(theorem3_horizon(0.0, 3), Err(Error::NonPositiveEps(_))));
    }
}
