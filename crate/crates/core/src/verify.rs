//! One-shot verification of every bound against a chain pair.
//!
//! Each entry normalizes its bound to `empirical <= theoretical + slack`. For
//! the mixing-time lower bound the empirical side is the bound value and the
//! theoretical side is the exact mixing time; everywhere else the empirical
//! side is a measured gap or time and the theoretical side its upper bound.

use std::fmt;

use serde::Serialize;

use crate::adiabatic::{
    adiabatic_time, prop3_check, theorem2_check_with_sup, theorem2_steps, theorem3_check_with_sup,
    theorem3_horizon, AdiabaticMode, DEFAULT_ADIABATIC_HORIZON_CAP, DEFAULT_CORRIDOR_CAP,
    DEFAULT_THEOREM3_HORIZON_CAP,
};
use crate::markov::{solve_stationary, tv_slices, ChainPair, StochasticMatrix, DEFAULT_RESIDUAL_TOL};
use crate::mixing::{mixing_time_inner, sup_mixing_time, SupMixingOptions, SupMixingResult, DEFAULT_ITERATION_CAP};
use crate::spectral::{cor1_delta, SpectralSummary};
use crate::{Error, Result, BOUND_SLACK, PASS_SLACK};

pub const PROP3_STEPS: [u64; 3] = [10, 50, 200];
pub const THM2_DELTAS: [f64; 2] = [0.5, 0.25];
/// Interior interpolation points `s = j / 12`, `j = 1..=11`, checked besides `P0` and `P1`.
pub const PROP2_INTERIOR_KERNELS: u32 = 11;
pub const CONTINUITY_GRID_POINTS: usize = 200;

pub const CSV_HEADER: &str = "chain,eps,bound_id,empirical,theoretical,pass,detail";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundId {
    #[serde(rename = "PROP1")]
    Prop1,
    #[serde(rename = "PROP2")]
    Prop2,
    #[serde(rename = "PROP3")]
    Prop3,
    #[serde(rename = "PROP4")]
    Prop4,
    #[serde(rename = "COR1")]
    Cor1,
    #[serde(rename = "THM2")]
    Thm2,
    #[serde(rename = "THM3")]
    Thm3,
}

impl BoundId {
    pub const ALL: [BoundId; 7] =
        [BoundId::Prop1, BoundId::Prop2, BoundId::Prop3, BoundId::Prop4, BoundId::Cor1, BoundId::Thm2, BoundId::Thm3];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::Prop1 => "PROP1",
            BoundId::Prop2 => "PROP2",
            BoundId::Prop3 => "PROP3",
            BoundId::Prop4 => "PROP4",
            BoundId::Cor1 => "COR1",
            BoundId::Thm2 => "THM2",
            BoundId::Thm3 => "THM3",
        }
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    /// Not evaluated: a cap was hit or the formula is undefined at this eps.
    Skipped,
    /// Evaluated, but the bound's own precondition does not hold.
    PreconditionUnmet,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    pub bound_id: BoundId,
    pub eps: f64,
    pub empirical: Option<f64>,
    pub theoretical: Option<f64>,
    pub status: Status,
    pub pass: bool,
    pub detail: String,
}

impl BoundEntry {
    fn compared(bound_id: BoundId, eps: f64, empirical: f64, theoretical: f64, slack: f64, detail: String) -> Self {
        let pass = empirical <= theoretical + slack;
        Self {
            bound_id,
            eps,
            empirical: Some(empirical),
            theoretical: Some(theoretical),
            status: if pass { Status::Pass } else { Status::Fail },
            pass,
            detail,
        }
    }

    fn skipped(bound_id: BoundId, eps: f64, detail: String) -> Self {
        Self { bound_id, eps, empirical: None, theoretical: None, status: Status::Skipped, pass: false, detail }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyCaps {
    /// Longest corridor run for the away-from-start corridor check.
    pub corridor_cap: u64,
    /// Largest explicit horizon for which the main corridor check is run.
    pub horizon_cap: u64,
    /// Largest certified horizon scanned by the exact adiabatic time.
    pub adiabatic_cap: u64,
}

impl Default for VerifyCaps {
    fn default() -> Self {
        Self {
            corridor_cap: DEFAULT_CORRIDOR_CAP,
            horizon_cap: DEFAULT_THEOREM3_HORIZON_CAP,
            adiabatic_cap: DEFAULT_ADIABATIC_HORIZON_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VerifyOptions {
    pub caps: VerifyCaps,
    pub sup: SupMixingOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub chain_name: String,
    pub eps: Vec<f64>,
    pub n: usize,
    /// Spacing of the uniform grid behind every sup mixing time.
    pub grid_resolution: f64,
    pub refine_resolution: f64,
    pub caps: VerifyCaps,
    pub caps_hit: Vec<String>,
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn has_failures(&self) -> bool {
        self.entries.iter().any(|e| e.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// One row per entry under [`CSV_HEADER`].
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(CSV_HEADER.split(',')).expect("in-memory write");
        let num = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for e in &self.entries {
            let detail = match e.status {
                Status::Pass | Status::Fail => e.detail.clone(),
                Status::Skipped => format!("SKIPPED: {}", e.detail),
                Status::PreconditionUnmet => format!("PRECONDITION_UNMET: {}", e.detail),
            };
            writer
                .write_record([
                    self.chain_name.clone(),
                    e.eps.to_string(),
                    e.bound_id.to_string(),
                    num(e.empirical),
                    num(e.theoretical),
                    e.pass.to_string(),
                    detail,
                ])
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }
}

/// Run every bound check for each `eps` in order.
pub fn verify_all(chain_name: &str, pair: &ChainPair, eps_list: &[f64], options: VerifyOptions) -> Result<BoundReport> {
    if eps_list.is_empty() {
        return Err(Error::OutOfRange { name: "eps_list", value: 0.0, range: "nonempty" });
    }
    if let Some(&bad) = eps_list.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(Error::NonPositiveEps(bad));
    }
    let mut caps_hit = Vec::new();
    let mut entries = Vec::new();
    for &eps in eps_list {
        let sup = sup_mixing_time(pair, eps / 2.0, options.sup)?;
        entries.push(check_prop1(pair, eps, options.caps, &mut caps_hit)?);
        entries.push(check_prop2(pair, eps)?);
        for t in PROP3_STEPS {
            entries.push(check_prop3(pair, eps, t)?);
        }
        entries.push(check_prop4(pair, eps)?);
        entries.push(check_cor1(pair, eps, &sup)?);
        for delta in THM2_DELTAS {
            entries.push(check_thm2(pair, eps, delta, &sup, options.caps, &mut caps_hit)?);
        }
        entries.push(check_thm3(pair, eps, &sup, options.caps, &mut caps_hit)?);
    }
    let last = options.sup.grid_points.max(2) - 1;
    Ok(BoundReport {
        chain_name: chain_name.to_string(),
        eps: eps_list.to_vec(),
        n: pair.n(),
        grid_resolution: 1.0 / last as f64,
        refine_resolution: 10f64.powi(-(options.sup.refine_depth as i32)),
        caps: options.caps,
        caps_hit,
        entries,
    })
}

fn check_prop1(pair: &ChainPair, eps: f64, caps: VerifyCaps, caps_hit: &mut Vec<String>) -> Result<BoundEntry> {
    match adiabatic_time(pair, eps, AdiabaticMode::Exact, 0, caps.adiabatic_cap) {
        Ok(r) => Ok(BoundEntry::compared(
            BoundId::Prop1,
            eps,
            r.t_ad as f64,
            r.certified_horizon as f64,
            0.0,
            format!("t_ad = {} <= ceil(2 t_mix(P1, eps/2)^2 / eps) = {}", r.t_ad, r.certified_horizon),
        )),
        Err(Error::HorizonExceedsCap { horizon, cap }) => {
            caps_hit.push(format!("PROP1 eps={eps}: certified horizon {horizon} > adiabatic cap {cap}"));
            Ok(BoundEntry::skipped(BoundId::Prop1, eps, format!("certified horizon {horizon} exceeds cap {cap}")))
        }
        Err(e) => Err(e),
    }
}

fn check_prop2(pair: &ChainPair, eps: f64) -> Result<BoundEntry> {
    let mut kernels: Vec<(f64, StochasticMatrix)> = vec![(0.0, pair.p0().clone()), (1.0, pair.p1().clone())];
    let parts = PROP2_INTERIOR_KERNELS + 1;
    for j in 1..parts {
        let s = j as f64 / parts as f64;
        kernels.push((s, pair.at(s)?));
    }
    // worst kernel = largest (bound - t_mix)
    let mut worst: Option<(f64, f64, u64)> = None;
    for (s, p) in &kernels {
        let bound = SpectralSummary::of(p)?.mixing_lower_bound(eps)?;
        let pi = solve_stationary(p, DEFAULT_RESIDUAL_TOL)?;
        let tmix = match mixing_time_inner(p, pi.mass(), eps, DEFAULT_ITERATION_CAP) {
            Ok(r) => r.tmix,
            Err(Error::IterationCap(cap)) => {
                return Ok(BoundEntry::skipped(BoundId::Prop2, eps, format!("mixing time at s = {s} exceeds cap {cap}")))
            }
            Err(e) => return Err(e),
        };
        if worst.is_none_or(|(_, b, t)| bound - tmix as f64 > b - t as f64) {
            worst = Some((*s, bound, tmix));
        }
    }
    let (s, bound, tmix) = worst.expect("at least two kernels");
    let count = kernels.len();
    let mut entry = BoundEntry::compared(
        BoundId::Prop2,
        eps,
        bound,
        tmix as f64,
        1e-9,
        format!("worst of {count} kernels at s = {s}: (1 - 2 sqrt(n) eps) / sigma = {bound} <= t_mix = {tmix}"),
    );
    if bound <= 0.0 {
        entry.detail = format!("vacuous: lower bound {bound} <= 0 on all {count} kernels");
    }
    Ok(entry)
}

fn check_prop3(pair: &ChainPair, eps: f64, total: u64) -> Result<BoundEntry> {
    let rows = prop3_check(pair, total)?;
    let worst = rows.iter().max_by(|a, b| (a.lhs - a.rhs).total_cmp(&(b.lhs - b.rhs))).expect("T >= 1");
    let failures = rows.iter().filter(|r| !r.pass).count();
    Ok(BoundEntry::compared(
        BoundId::Prop3,
        eps,
        worst.lhs,
        worst.rhs,
        BOUND_SLACK,
        format!("T = {total}: tightest k = {}, {failures} of {} steps fail", worst.k, rows.len()),
    ))
}

/// Largest `||pi_s - pi_0||_TV` over a uniform grid of `[0, delta]`.
fn max_stationary_drift(pair: &ChainPair, delta: f64) -> Result<f64> {
    let pi0 = solve_stationary(pair.p0(), DEFAULT_RESIDUAL_TOL)?;
    let last = (CONTINUITY_GRID_POINTS - 1) as f64;
    let mut worst: f64 = 0.0;
    for i in 0..CONTINUITY_GRID_POINTS {
        let s = delta * i as f64 / last;
        let pi = solve_stationary(&pair.at(s)?, DEFAULT_RESIDUAL_TOL)?;
        worst = worst.max(tv_slices(pi.mass(), pi0.mass()));
    }
    Ok(worst)
}

fn check_prop4(pair: &ChainPair, eps: f64) -> Result<BoundEntry> {
    let delta = SpectralSummary::of(pair.p0())?.continuity_delta(eps)?;
    let drift = max_stationary_drift(pair, delta)?;
    Ok(BoundEntry::compared(
        BoundId::Prop4,
        eps,
        drift,
        eps,
        PASS_SLACK,
        format!("max ||pi_s - pi_0||_TV over {CONTINUITY_GRID_POINTS} points of [0, {delta}]"),
    ))
}

fn check_cor1(pair: &ChainPair, eps: f64, sup: &SupMixingResult) -> Result<BoundEntry> {
    match cor1_delta(pair.n(), eps, sup.sup_tmix) {
        Ok(delta) => {
            let drift = max_stationary_drift(pair, delta)?;
            Ok(BoundEntry::compared(
                BoundId::Cor1,
                eps,
                drift,
                eps / 2.0,
                PASS_SLACK,
                format!(
                    "max ||pi_s - pi_0||_TV over {CONTINUITY_GRID_POINTS} points of [0, {delta}], t_mix(eps/2) = {}",
                    sup.sup_tmix
                ),
            ))
        }
        Err(Error::EpsTooLarge { eps, limit }) => {
            Ok(BoundEntry::skipped(BoundId::Cor1, eps, format!("EpsTooLarge: eps = {eps} >= 1/sqrt(n) = {limit}")))
        }
        Err(e) => Err(e),
    }
}

fn check_thm2(
    pair: &ChainPair,
    eps: f64,
    delta: f64,
    sup: &SupMixingResult,
    caps: VerifyCaps,
    caps_hit: &mut Vec<String>,
) -> Result<BoundEntry> {
    match theorem2_check_with_sup(pair, eps, delta, sup, caps.corridor_cap) {
        Ok(r) => {
            let mut entry = BoundEntry::compared(
                BoundId::Thm2,
                eps,
                r.max_gap,
                eps,
                BOUND_SLACK,
                format!(
                    "delta = {delta}, T = {}, t_mix(eps/2) = {}, {} steps checked, {} violations",
                    r.total_steps,
                    r.sup_tmix,
                    r.checked_steps,
                    r.violations.len()
                ),
            );
            if !r.pass {
                entry.detail.push_str(&format!(
                    "; sup mixing time is a grid estimate (spacing {}, refined to {})",
                    r.grid_resolution, r.refine_resolution
                ));
            }
            Ok(entry)
        }
        Err(Error::CapExceeded { cap, .. }) => {
            let steps = theorem2_steps(eps, delta, sup.sup_tmix);
            caps_hit.push(format!("THM2 eps={eps} delta={delta}: T = {steps} > corridor cap {cap}"));
            Ok(BoundEntry::skipped(BoundId::Thm2, eps, format!("delta = {delta}: T = {steps} exceeds corridor cap {cap}")))
        }
        Err(e) => Err(e),
    }
}

fn check_thm3(
    pair: &ChainPair,
    eps: f64,
    sup: &SupMixingResult,
    caps: VerifyCaps,
    caps_hit: &mut Vec<String>,
) -> Result<BoundEntry> {
    match theorem3_check_with_sup(pair, eps, sup, caps.horizon_cap) {
        Ok(r) => {
            let mut entry = BoundEntry::compared(
                BoundId::Thm3,
                eps,
                r.max_gap,
                eps,
                BOUND_SLACK,
                format!(
                    "T = {}, t_mix(eps/2) = {}, worst k = {}, split delta = {}, continuity delta = {}",
                    r.horizon,
                    r.sup_tmix,
                    r.worst_k,
                    r.split_delta,
                    r.continuity_delta.map_or("none (eps >= 1/sqrt(n))".to_string(), |d| d.to_string())
                ),
            );
            if !r.precondition_met {
                entry.status = Status::PreconditionUnmet;
                entry.pass = false;
            }
            Ok(entry)
        }
        Err(Error::HorizonExceedsCap { horizon, cap }) => {
            caps_hit.push(format!("THM3 eps={eps}: horizon {horizon} > horizon cap {cap}"));
            Ok(BoundEntry::skipped(BoundId::Thm3, eps, format!("horizon {horizon} exceeds cap {cap}")))
        }
        Err(e) => Err(e),
    }
}

/// Explicit horizon of the main corridor check at `eps`, for reporting without running it.
pub fn main_horizon(pair: &ChainPair, eps: f64, sup: SupMixingOptions) -> Result<u64> {
    let sup = sup_mixing_time(pair, eps / 2.0, sup)?;
    theorem3_horizon(eps, sup.sup_tmix)
}
