//! Chain generators and the fixed suite of chains used by the checks.
//!
//! # `random_dense`
//!
//! Reproducible across implementations. The generator is ChaCha8 seeded via
//! `rand_core::SeedableRng::seed_from_u64(seed)` (PCG32 expansion of the
//! 64-bit seed into the 32-byte ChaCha key). Entries are filled row-major;
//! each consumes one `next_u64()` output `x`, mapped to
//! `u = ((x >> 11) + 0.5) * 2^-53` in `(0, 1)`, with weight `-ln(u)`. Each row
//! is divided by its sum. All entries are positive, so the chain is
//! irreducible and aperiodic.

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::markov::{validate_stochastic, ChainPair, StochasticMatrix, DEFAULT_ROW_TOLERANCE};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GeneratorParams {
    /// `[[1 - p, p], [q, 1 - q]]`.
    TwoState { p: f64, q: f64 },
    /// Hold with `alpha`, otherwise step to each cycle neighbour with `(1 - alpha) / 2`.
    LazyCycle { n: usize, alpha: f64 },
    /// Hold with `alpha`, otherwise jump uniformly to one of the other states.
    CompleteGraph { n: usize, alpha: f64 },
    /// Up with `p`, down with `q`, hold otherwise; blocked moves at the ends are held.
    BirthDeath { n: usize, p: f64, q: f64 },
    RandomDense { n: usize, seed: u64 },
}

fn open_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::BadParams(format!("{name} = {v} must lie in (0, 1)")))
    }
}

fn at_least_two(n: usize) -> Result<()> {
    if n >= 2 {
        Ok(())
    } else {
        Err(Error::BadParams(format!("n = {n} must be at least 2")))
    }
}

pub fn generate(params: GeneratorParams) -> Result<StochasticMatrix> {
    let rows = match params {
        GeneratorParams::TwoState { p, q } => {
            open_unit("p", p)?;
            open_unit("q", q)?;
            vec![vec![1.0 - p, p], vec![q, 1.0 - q]]
        }
        GeneratorParams::LazyCycle { n, alpha } => {
            at_least_two(n)?;
            open_unit("alpha", alpha)?;
            let mut rows = vec![vec![0.0; n]; n];
            for (i, row) in rows.iter_mut().enumerate() {
                row[i] += alpha;
                row[(i + 1) % n] += (1.0 - alpha) / 2.0;
                row[(i + n - 1) % n] += (1.0 - alpha) / 2.0;
            }
            rows
        }
        GeneratorParams::CompleteGraph { n, alpha } => {
            at_least_two(n)?;
            open_unit("alpha", alpha)?;
            let off = (1.0 - alpha) / (n - 1) as f64;
            (0..n).map(|i| (0..n).map(|j| if i == j { alpha } else { off }).collect()).collect()
        }
        GeneratorParams::BirthDeath { n, p, q } => {
            at_least_two(n)?;
            open_unit("p", p)?;
            open_unit("q", q)?;
            if p + q > 1.0 {
                return Err(Error::BadParams(format!("p + q = {} exceeds 1", p + q)));
            }
            let mut rows = vec![vec![0.0; n]; n];
            for (i, row) in rows.iter_mut().enumerate() {
                let up = if i + 1 < n { p } else { 0.0 };
                let down = if i > 0 { q } else { 0.0 };
                if i + 1 < n {
                    row[i + 1] = up;
                }
                if i > 0 {
                    row[i - 1] = down;
                }
                row[i] = 1.0 - up - down;
            }
            rows
        }
        GeneratorParams::RandomDense { n, seed } => {
            at_least_two(n)?;
            random_dense_rows(n, seed)
        }
    };
    validate_stochastic(&rows, DEFAULT_ROW_TOLERANCE)
}

fn random_dense_rows(n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (1u64 << 53) as f64;
    (0..n)
        .map(|_| {
            let weights: Vec<f64> =
                (0..n).map(|_| -((((rng.next_u64() >> 11) as f64) + 0.5) * scale).ln()).collect();
            let total: f64 = weights.iter().sum();
            weights.iter().map(|w| w / total).collect()
        })
        .collect()
}

impl fmt::Display for GeneratorParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GeneratorParams::TwoState { p, q } => write!(f, "two_state:{p},{q}"),
            GeneratorParams::LazyCycle { n, alpha } => write!(f, "lazy_cycle:{n},{alpha}"),
            GeneratorParams::CompleteGraph { n, alpha } => write!(f, "complete_graph:{n},{alpha}"),
            GeneratorParams::BirthDeath { n, p, q } => write!(f, "birth_death:{n},{p},{q}"),
            GeneratorParams::RandomDense { n, seed } => write!(f, "random_dense:{n},{seed}"),
        }
    }
}

/// Parses `family:arg,arg,...`, e.g. `two_state:0.2,0.4` or `random_dense:5,42`.
impl FromStr for GeneratorParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, args) = s.split_once(':').unwrap_or((s, ""));
        let args: Vec<&str> = if args.is_empty() { Vec::new() } else { args.split(',').map(str::trim).collect() };
        let bad = |what: &str| Error::BadParams(format!("{s}: {what}"));
        let real = |i: usize| -> Result<f64> {
            args.get(i).ok_or_else(|| bad("missing argument"))?.parse().map_err(|_| bad("expected a real"))
        };
        let int = |i: usize| -> Result<u64> {
            args.get(i).ok_or_else(|| bad("missing argument"))?.parse().map_err(|_| bad("expected an integer"))
        };
        let expect = |count: usize| if args.len() == count { Ok(()) } else { Err(bad("wrong argument count")) };
        match family {
            "two_state" => {
                expect(2)?;
                Ok(GeneratorParams::TwoState { p: real(0)?, q: real(1)? })
            }
            "lazy_cycle" => {
                expect(2)?;
                Ok(GeneratorParams::LazyCycle { n: int(0)? as usize, alpha: real(1)? })
            }
            "complete_graph" => {
                expect(2)?;
                Ok(GeneratorParams::CompleteGraph { n: int(0)? as usize, alpha: real(1)? })
            }
            "birth_death" => {
                expect(3)?;
                Ok(GeneratorParams::BirthDeath { n: int(0)? as usize, p: real(1)?, q: real(2)? })
            }
            "random_dense" => {
                expect(2)?;
                Ok(GeneratorParams::RandomDense { n: int(0)? as usize, seed: int(1)? })
            }
            _ => Err(bad("unknown family")),
        }
    }
}

pub fn lazy_two_state() -> StochasticMatrix {
    generate(GeneratorParams::TwoState { p: 0.25, q: 0.25 }).expect("valid parameters")
}

/// `[[0.8, 0.2], [0.4, 0.6]]`.
pub fn asymmetric_two_state() -> StochasticMatrix {
    generate(GeneratorParams::TwoState { p: 0.2, q: 0.4 }).expect("valid parameters")
}

/// Generator parameters of the single-kernel suite.
pub fn suite_chain_params() -> Vec<GeneratorParams> {
    use GeneratorParams::*;
    let mut out = vec![
        TwoState { p: 0.25, q: 0.25 },
        TwoState { p: 0.2, q: 0.4 },
        TwoState { p: 0.5, q: 0.5 },
        TwoState { p: 0.1, q: 0.3 },
        TwoState { p: 0.4, q: 0.2 },
        LazyCycle { n: 3, alpha: 0.5 },
        LazyCycle { n: 5, alpha: 0.5 },
        CompleteGraph { n: 3, alpha: 0.25 },
        CompleteGraph { n: 5, alpha: 0.25 },
        BirthDeath { n: 4, p: 0.3, q: 0.2 },
    ];
    out.extend((0..10u64).map(|i| RandomDense { n: 3 + (i as usize % 6), seed: 1000 + i }));
    out
}

/// Named suite kernels.
pub fn suite_chains() -> Vec<(String, StochasticMatrix)> {
    suite_chain_params()
        .into_iter()
        .map(|p| (p.to_string(), generate(p).expect("suite parameters are valid")))
        .collect()
}

/// Generator parameters of the ten suite pairs `(P0, P1)`.
pub fn suite_pair_params() -> Vec<(GeneratorParams, GeneratorParams)> {
    use GeneratorParams::*;
    vec![
        (TwoState { p: 0.25, q: 0.25 }, TwoState { p: 0.2, q: 0.4 }),
        (TwoState { p: 0.2, q: 0.4 }, TwoState { p: 0.25, q: 0.25 }),
        (TwoState { p: 0.25, q: 0.25 }, TwoState { p: 0.25, q: 0.25 }),
        (TwoState { p: 0.1, q: 0.3 }, TwoState { p: 0.4, q: 0.2 }),
        (LazyCycle { n: 3, alpha: 0.5 }, CompleteGraph { n: 3, alpha: 0.25 }),
        (CompleteGraph { n: 5, alpha: 0.5 }, LazyCycle { n: 5, alpha: 0.5 }),
        (BirthDeath { n: 4, p: 0.3, q: 0.2 }, BirthDeath { n: 4, p: 0.2, q: 0.3 }),
        (RandomDense { n: 3, seed: 1 }, RandomDense { n: 3, seed: 2 }),
        (RandomDense { n: 5, seed: 3 }, RandomDense { n: 5, seed: 4 }),
        (RandomDense { n: 8, seed: 5 }, CompleteGraph { n: 8, alpha: 0.5 }),
    ]
}

/// Named suite pairs, `"P0 -> P1"`.
pub fn suite_pairs() -> Vec<(String, ChainPair)> {
    suite_pair_params()
        .into_iter()
        .map(|(a, b)| {
            let pair = ChainPair::new(generate(a).unwrap(), generate(b).unwrap()).expect("suite pairs are ergodic");
            (format!("{a} -> {b}"), pair)
        })
        .collect()
}
