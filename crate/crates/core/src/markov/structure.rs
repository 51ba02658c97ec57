use std::collections::VecDeque;

use serde::Serialize;

use super::StochasticMatrix;

/// Irreducibility and period of the transition graph `{(i, j) : P(i, j) > 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub irreducible: bool,
    /// Only defined for irreducible chains.
    pub period: Option<u64>,
    pub aperiodic: bool,
}

impl StructureReport {
    pub fn is_ergodic(&self) -> bool {
        self.irreducible && self.aperiodic
    }
}

pub fn structure(p: &StochasticMatrix) -> StructureReport {
    let n = p.n();
    let adjacency: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).filter(|&j| p.get(i, j) > 0.0).collect()).collect();

    let levels = bfs_levels(&adjacency, |v| adjacency[v].iter().copied());
    let forward_ok = levels.iter().all(Option::is_some);
    let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, outs) in adjacency.iter().enumerate() {
        for &v in outs {
            reverse[v].push(u);
        }
    }
    let backward_ok = bfs_levels(&reverse, |v| reverse[v].iter().copied()).iter().all(Option::is_some);

    if !(forward_ok && backward_ok) {
        return StructureReport { irreducible: false, period: None, aperiodic: false };
    }

    // Period = gcd over edges (u, v) of level(u) + 1 - level(v).
    let mut g: u64 = 0;
    for (u, outs) in adjacency.iter().enumerate() {
        let lu = levels[u].unwrap() as i64;
        for &v in outs {
            let lv = levels[v].unwrap() as i64;
            g = gcd(g, (lu + 1 - lv).unsigned_abs());
        }
    }
    StructureReport { irreducible: true, period: Some(g), aperiodic: g == 1 }
}

fn bfs_levels<I, F>(graph: &[Vec<usize>], neighbors: F) -> Vec<Option<usize>>
where
    F: Fn(usize) -> I,
    I: Iterator<Item = usize>,
{
    let mut level = vec![None; graph.len()];
    let mut queue = VecDeque::new();
    level[0] = Some(0);
    queue.push_back(0);
    while let Some(u) = queue.pop_front() {
        let next = level[u].unwrap() + 1;
        for v in neighbors(u) {
            if level[v].is_none() {
                level[v] = Some(next);
                queue.push_back(v);
            }
        }
    }
    level
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
