//! Independent oracles for the integration tests.
//!
//! Plain `Vec<Vec<f64>>` arithmetic and closed forms only; nothing here goes
//! through the library's solver, powering or corridor code.

#![allow(dead_code)]

pub type Mat = Vec<Vec<f64>>;

pub fn two_state(p: f64, q: f64) -> Mat {
    vec![vec![1.0 - p, p], vec![q, 1.0 - q]]
}

/// `(q / (p + q), p / (p + q))`.
pub fn two_state_pi(m: &Mat) -> Vec<f64> {
    let (p, q) = (m[0][1], m[1][0]);
    vec![q / (p + q), p / (p + q)]
}

pub fn vec_mat(v: &[f64], m: &Mat) -> Vec<f64> {
    let n = m.len();
    (0..n).map(|j| (0..n).map(|i| v[i] * m[i][j]).sum()).collect()
}

pub fn mat_mat(a: &Mat, b: &Mat) -> Mat {
    a.iter().map(|row| vec_mat(row, b)).collect()
}

pub fn tv(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

pub fn blend(a: &Mat, b: &Mat, t: f64) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (1.0 - t) * x + t * y).collect())
        .collect()
}

/// Stationary distribution by brute-force power iteration of `P` itself.
pub fn brute_stationary(m: &Mat) -> Vec<f64> {
    let n = m.len();
    let mut v = vec![1.0 / n as f64; n];
    for _ in 0..200_000 {
        let next = vec_mat(&v, m);
        let diff: f64 = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum();
        v = next;
        if diff < 1e-16 {
            break;
        }
    }
    v
}

/// Mixing time by brute-force powering, checking every point-mass start.
pub fn brute_mixing_time(m: &Mat, pi: &[f64], eps: f64) -> u64 {
    let mut power = m.clone();
    for t in 1..100_000u64 {
        let worst = power.iter().map(|row| tv(row, pi)).fold(0.0, f64::max);
        if worst <= eps + 1e-12 {
            return t;
        }
        power = mat_mat(&power, m);
    }
    panic!("oracle did not mix");
}

/// Two-state corridor gaps, `k = 1..=T`, with closed-form targets.
pub fn two_state_corridor(p0: &Mat, p1: &Mat, total: u64) -> Vec<f64> {
    let mut mu = two_state_pi(p0);
    (1..=total)
        .map(|k| {
            let t = k as f64 / total as f64;
            let kernel = blend(p0, p1, t);
            mu = vec_mat(&mu, &kernel);
            tv(&mu, &two_state_pi(&kernel))
        })
        .collect()
}

/// Least `T` whose two-state corridor keeps every gap below `eps`.
pub fn two_state_stable_time(p0: &Mat, p1: &Mat, eps: f64) -> u64 {
    (1..100_000)
        .find(|&t| two_state_corridor(p0, p1, t).iter().all(|&g| g < eps))
        .expect("oracle scan cap")
}
