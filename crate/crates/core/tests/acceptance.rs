//! Acceptance suite. Prints one line per criterion and exits nonzero if any fails.
//!
//! Run with `cargo test -p markov-adiabatic --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use markov_adiabatic::adiabatic::{
    adiabatic_time, corridor_gaps, corridor_max_gap, prop3_check, stable_adiabatic_time, theorem2_check,
    theorem3_horizon, AdiabaticMode, Theorem2Options, DEFAULT_ADIABATIC_HORIZON_CAP, DEFAULT_CORRIDOR_CAP,
    DEFAULT_STABLE_CAP,
};
use markov_adiabatic::generate::{
    asymmetric_two_state, generate, lazy_two_state, suite_chains, suite_pairs, GeneratorParams,
};
use markov_adiabatic::markov::{
    interpolate, l1_distance, l2_distance, stationary, stationary_residual, tv_distance, ChainPair, Distribution,
    StochasticMatrix,
};
use markov_adiabatic::mixing::{mixing_time, sup_mixing_time, SupMixingOptions};
use markov_adiabatic::spectral::{cor1_delta, singular_values, SpectralSummary};
use markov_adiabatic::verify::{verify_all, VerifyOptions};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: markov_adiabatic::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn two_state_mixing() -> Outcome {
    let cases = [
        ("lazy", lazy_two_state(), common::two_state(0.25, 0.25), [2, 3, 4]),
        ("A", asymmetric_two_state(), common::two_state(0.2, 0.4), [2, 3, 3]),
    ];
    for (name, p, raw, expected) in cases {
        let pi = common::two_state_pi(&raw);
        for (eps, want) in [0.2, 0.1, 0.05].into_iter().zip(expected) {
            let got = lib(mixing_time(&p, eps))?.tmix;
            let oracle = common::brute_mixing_time(&raw, &pi, eps);
            ensure(got == want && oracle == want, || {
                format!("{name} eps {eps}: tool {got}, oracle {oracle}, expected {want}")
            })?;
        }
    }
    Ok("lazy -> {2,3,4}, A -> {2,3,3}".into())
}

fn spectral_lower_bound() -> Outcome {
    let chains = suite_chains();
    let mut checked = 0;
    let mut tightest = f64::INFINITY;
    for (name, p) in &chains {
        let summary = lib(SpectralSummary::of(p))?;
        for eps in [0.2, 0.1, 0.05] {
            let bound = lib(summary.mixing_lower_bound(eps))?;
            let tmix = lib(mixing_time(p, eps))?.tmix as f64;
            ensure(bound <= tmix + 1e-9, || format!("{name} eps {eps}: bound {bound} > t_mix {tmix}"))?;
            tightest = tightest.min(tmix - bound);
            checked += 1;
        }
    }
    Ok(format!("{} chains, {checked} checks, min slack {tightest:.4}", chains.len()))
}

fn corridor_drift_bound() -> Outcome {
    let mut rows = 0;
    let mut min_slack = f64::INFINITY;
    for (name, pair) in suite_pairs() {
        for t in [10, 50, 200] {
            for row in lib(prop3_check(&pair, t))? {
                ensure(row.lhs <= row.rhs + 1e-10, || {
                    format!("{name} T {t} k {}: gap {} > {}", row.k, row.lhs, row.rhs)
                })?;
                min_slack = min_slack.min(row.rhs - row.lhs);
                rows += 1;
            }
        }
    }
    Ok(format!("10 pairs, {rows} steps, min slack {min_slack:.3e}"))
}

fn max_drift(pair: &ChainPair, delta: f64) -> Result<f64, String> {
    let pi0 = lib(stationary(pair.p0()))?;
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let s = delta * i as f64 / 199.0;
        let pi = lib(stationary(&lib(interpolate(pair, s))?))?;
        worst = worst.max(lib(tv_distance(&pi, &pi0))?);
    }
    Ok(worst)
}

fn continuity_radii() -> Outcome {
    let mut prop4 = 0;
    let mut cor1 = 0;
    for (name, pair) in suite_pairs() {
        for eps in [0.2, 0.1] {
            let delta = lib(SpectralSummary::of(pair.p0()))?.continuity_delta(eps).map_err(|e| e.to_string())?;
            let drift = max_drift(&pair, delta)?;
            ensure(drift <= eps + 1e-12, || format!("{name} eps {eps}: drift {drift} on [0, {delta}]"))?;
            prop4 += 1;
            if eps < 1.0 / (pair.n() as f64).sqrt() {
                let m = lib(sup_mixing_time(&pair, eps / 2.0, SupMixingOptions::default()))?.sup_tmix;
                let delta = lib(cor1_delta(pair.n(), eps, m))?;
                let drift = max_drift(&pair, delta)?;
                ensure(drift <= eps / 2.0 + 1e-12, || format!("{name} eps {eps}: half-eps drift {drift}"))?;
                cor1 += 1;
            }
        }
    }
    Ok(format!("{prop4} full-radius grids, {cor1} half-eps grids"))
}

fn adiabatic_upper_bound() -> Outcome {
    let mut details = Vec::new();
    for (name, pair) in suite_pairs().into_iter().filter(|(_, p)| p.n() == 2) {
        for eps in [0.2, 0.1] {
            let r = lib(adiabatic_time(&pair, eps, AdiabaticMode::Exact, 0, DEFAULT_ADIABATIC_HORIZON_CAP))?;
            let tmix = lib(mixing_time(pair.p1(), eps / 2.0))?.tmix as f64;
            let bound = (2.0 * tmix * tmix / eps - 1e-9).ceil() as u64;
            ensure(r.t_ad <= bound, || format!("{name} eps {eps}: t_ad {} > {bound}", r.t_ad))?;
            details.push(format!("{}/{}", r.t_ad, bound));
        }
    }
    let flat = lib(ChainPair::new(lazy_two_state(), lazy_two_state()))?;
    let r = lib(adiabatic_time(&flat, 0.05, AdiabaticMode::Exact, 0, DEFAULT_ADIABATIC_HORIZON_CAP))?;
    ensure(r.t_ad == 3, || format!("lazy,lazy eps 0.05: t_ad {}", r.t_ad))?;
    Ok(format!("t_ad/bound {}; lazy,lazy -> 3", details.join(" ")))
}

fn corridor_guarantee() -> Outcome {
    let mut runs = 0;
    let mut steps = 0;
    for (name, pair) in suite_pairs() {
        for eps in [0.2, 0.1] {
            for delta in [0.5, 0.25] {
                let opts = Theorem2Options { corridor_cap: DEFAULT_CORRIDOR_CAP, ..Default::default() };
                let r = lib(theorem2_check(&pair, eps, delta, opts))?;
                ensure(r.pass && r.violations.is_empty(), || {
                    format!("{name} eps {eps} delta {delta}: {} violations, max gap {}", r.violations.len(), r.max_gap)
                })?;
                runs += 1;
                steps += r.checked_steps;
            }
        }
    }
    Ok(format!("{runs} runs, {steps} steps checked, 0 violations"))
}

fn explicit_horizon() -> Outcome {
    let mut details = Vec::new();
    for (name, p0, p1) in [
        ("lazy -> A", lazy_two_state(), asymmetric_two_state()),
        ("A -> lazy", asymmetric_two_state(), lazy_two_state()),
    ] {
        let pair = lib(ChainPair::new(p0, p1))?;
        let m = lib(sup_mixing_time(&pair, 0.05, SupMixingOptions::default()))?.sup_tmix;
        let t = lib(theorem3_horizon(0.1, m))?;
        let (k, gap) = lib(corridor_max_gap(&pair, t))?;
        ensure(gap <= 0.1, || format!("{name}: gap {gap} at k {k} of T {t}"))?;
        details.push(format!("{name}: m {m}, T {t}, max gap {gap:.3e}"));
    }
    Ok(details.join("; "))
}

fn stable_regression() -> Outcome {
    let pair = lib(ChainPair::new(lazy_two_state(), asymmetric_two_state()))?;
    let r = lib(stable_adiabatic_time(&pair, 0.05, DEFAULT_STABLE_CAP))?;
    let oracle = common::two_state_stable_time(&common::two_state(0.25, 0.25), &common::two_state(0.2, 0.4), 0.05);
    ensure(r.t_sad == 2 && oracle == 2, || format!("lazy -> A: tool {}, oracle {oracle}", r.t_sad))?;
    for p in [lazy_two_state(), asymmetric_two_state()] {
        let same = lib(ChainPair::new(p.clone(), p))?;
        let r = lib(stable_adiabatic_time(&same, 0.05, DEFAULT_STABLE_CAP))?;
        ensure(r.t_sad == 1, || format!("constant family: t_sad {}", r.t_sad))?;
    }
    let gaps = lib(corridor_gaps(&pair, 1))?;
    ensure(gaps[0] >= 0.05, || format!("T = 1 gap {} should reach eps", gaps[0]))?;
    Ok("lazy -> A: 2, constant family: 1".into())
}

fn random_distribution(rng: &mut StdRng, n: usize) -> Distribution {
    let w: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 1e-3).collect();
    Distribution::from_weights(&w).expect("positive weights")
}

fn random_chain(rng: &mut StdRng, n: usize) -> StochasticMatrix {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let w: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 0.05).collect();
            let s: f64 = w.iter().sum();
            w.iter().map(|x| x / s).collect()
        })
        .collect();
    StochasticMatrix::from_rows(&rows).expect("random rows are stochastic")
}

fn numerical_identities() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20_240_601);
    for _ in 0..1000 {
        let n = rng.gen_range(2..=8);
        let (a, b) = (random_distribution(&mut rng, n), random_distribution(&mut rng, n));
        let tv = lib(tv_distance(&a, &b))?;
        let half_l1 = 0.5 * l1_distance(a.mass(), b.mass());
        ensure((tv - half_l1).abs() <= 1e-15, || format!("tv {tv} vs half l1 {half_l1}"))?;
        let oracle = common::tv(a.mass(), b.mass());
        ensure((tv - oracle).abs() <= 1e-15, || format!("tv {tv} vs oracle {oracle}"))?;
        let l2 = l2_distance(a.mass(), b.mass());
        ensure(0.5 * l2 <= tv + 1e-15 && tv <= (n as f64).sqrt() / 2.0 * l2 + 1e-15, || {
            format!("sandwich broken: tv {tv}, l2 {l2}, n {n}")
        })?;
    }
    let mut worst_residual: f64 = 0.0;
    for (name, p) in suite_chains() {
        let pi = lib(stationary(&p))?;
        let residual = stationary_residual(&p, &pi);
        ensure(residual <= 1e-12, || format!("{name}: residual {residual}"))?;
        worst_residual = worst_residual.max(residual);
    }
    let mut worst_sv: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.gen_range(2..=8);
        let p = random_chain(&mut rng, n);
        let a = DMatrix::<f64>::identity(n, n) - p.as_matrix();
        let ours = singular_values(&a);
        let mut eigen: Vec<f64> = SymmetricEigen::new(&a * a.transpose()).eigenvalues.iter().copied().collect();
        eigen.sort_by(|x, y| y.total_cmp(x));
        for (i, (x, l)) in ours.iter().zip(&eigen).enumerate() {
            ensure((x * x - l).abs() <= 1e-10, || format!("n {n}: sv^2 {} vs eigenvalue {l}", x * x))?;
            // the null direction's eigenvalue is rounding noise; its square root is not comparable
            if i + 1 < n {
                let y = l.sqrt();
                ensure((x - y).abs() <= 1e-10, || format!("n {n}: sv {x} vs sqrt eigenvalue {y}"))?;
                worst_sv = worst_sv.max((x - y).abs());
            }
        }
        ensure(ours[n - 1] <= 1e-12, || format!("n {n}: null singular value {}", ours[n - 1]))?;
    }
    Ok(format!("1000 pairs exact, max residual {worst_residual:.1e}, max sv diff {worst_sv:.1e}"))
}

fn determinism() -> Outcome {
    let pair = lib(ChainPair::new(lazy_two_state(), asymmetric_two_state()))?;
    let run = || -> Result<(String, String), String> {
        let report = lib(verify_all("lazy -> A", &pair, &[0.2, 0.1], VerifyOptions::default()))?;
        Ok((report.to_json(), report.to_csv()))
    };
    let (first, second) = (run()?, run()?);
    ensure(first == second, || "verify reports differ between runs".into())?;
    for (n, seed) in [(3, 42), (8, 7), (5, u64::MAX)] {
        let params = GeneratorParams::RandomDense { n, seed };
        let (a, b) = (lib(generate(params.clone()))?, lib(generate(params))?);
        ensure(a.to_rows() == b.to_rows(), || format!("random_dense({n}, {seed}) not reproducible"))?;
    }
    let other = lib(generate(GeneratorParams::RandomDense { n: 3, seed: 43 }))?;
    let base = lib(generate(GeneratorParams::RandomDense { n: 3, seed: 42 }))?;
    ensure(other != base, || "distinct seeds gave identical chains".into())?;
    Ok(format!("verify json {} bytes identical; seeded generators reproduce", first.0.len()))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "two-state closed-form mixing", limit: Some(Duration::from_secs(1)), run: two_state_mixing },
        Criterion { id: 2, name: "spectral mixing lower bound", limit: Some(Duration::from_secs(10)), run: spectral_lower_bound },
        Criterion { id: 3, name: "corridor drift bound", limit: Some(Duration::from_secs(30)), run: corridor_drift_bound },
        Criterion { id: 4, name: "stationary continuity radii", limit: Some(Duration::from_secs(10)), run: continuity_radii },
        Criterion { id: 5, name: "adiabatic time upper bound", limit: Some(Duration::from_secs(60)), run: adiabatic_upper_bound },
        Criterion { id: 6, name: "corridor guarantee away from start", limit: Some(Duration::from_secs(60)), run: corridor_guarantee },
        Criterion { id: 7, name: "corridor at explicit horizon", limit: Some(Duration::from_secs(300)), run: explicit_horizon },
        Criterion { id: 8, name: "stable adiabatic regression", limit: None, run: stable_regression },
        Criterion { id: 9, name: "numerical identities", limit: None, run: numerical_identities },
        Criterion { id: 10, name: "determinism", limit: None, run: determinism },
    ];
    let mut failed = 0;
    for c in criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (o, _) => o,
        };
        let limit = c.limit.map(|l| format!(" / {l:?}")).unwrap_or_default();
        match outcome {
            Ok(detail) => println!("PASS  {:>2} {} [{elapsed:.2?}{limit}] {detail}", c.id, c.name),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {:>2} {} [{elapsed:.2?}{limit}] {detail}", c.id, c.name);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
