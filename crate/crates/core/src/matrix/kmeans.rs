use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::DenseMatrix;
use crate::error::{Error, Result};

/// Lloyd's algorithm settings. The defaults are the ones every metric uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Stop once no centroid moves further than this (Euclidean).
    pub tolerance: f64,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self {
            restarts: 10,
            max_iterations: 300,
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct KMeansResult {
    pub assignments: Vec<usize>,
    pub centroids: DenseMatrix,
    /// Within-cluster sum of squared distances of the returned clustering.
    pub sse: f64,
    /// SSE after every assignment step of the winning restart.
    pub sse_trace: Vec<f64>,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Within-cluster sum of squares of `assignments`, using cluster means as centers.
pub fn within_cluster_sse(points: &DenseMatrix, assignments: &[usize]) -> f64 {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in assignments.iter().enumerate() {
        groups.entry(c).or_default().push(i);
    }
    let dim = points.cols();
    groups
        .values()
        .map(|members| {
            let mut mean = vec![0.0; dim];
            for &i in members {
                for (m, v) in mean.iter_mut().zip(points.row(i)) {
                    *m += v;
                }
            }
            mean.iter_mut().for_each(|m| *m /= members.len() as f64);
            members
                .iter()
                .map(|&i| squared_distance(points.row(i), &mean))
                .sum::<f64>()
        })
        .sum()
}

fn plus_plus_init(points: &DenseMatrix, k: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
    let n = points.rows();
    let mut chosen = vec![rng.gen_range(0..n)];
    let mut nearest: Vec<f64> = (0..n)
        .map(|i| squared_distance(points.row(i), points.row(chosen[0])))
        .collect();
    while chosen.len() < k {
        let total: f64 = nearest.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.gen_range(0.0..total);
            let mut pick = n - 1;
            for (i, &w) in nearest.iter().enumerate() {
                if target < w {
                    pick = i;
                    break;
                }
                target -= w;
            }
            pick
        } else {
            // Every point coincides with a chosen center.
            rng.gen_range(0..n)
        };
        chosen.push(next);
        for (i, d) in nearest.iter_mut().enumerate() {
            *d = d.min(squared_distance(points.row(i), points.row(next)));
        }
    }
    points.select_rows(&chosen)
}

fn assign(points: &DenseMatrix, centroids: &DenseMatrix, out: &mut [usize]) -> f64 {
    let mut sse = 0.0;
    for (i, slot) in out.iter_mut().enumerate() {
        let mut best = (0, f64::INFINITY);
        for c in 0..centroids.rows() {
            let d = squared_distance(points.row(i), centroids.row(c));
            if d < best.1 {
                best = (c, d);
            }
        }
        *slot = best.0;
        sse += best.1;
    }
    sse
}

fn lloyd(
    points: &DenseMatrix,
    mut centroids: DenseMatrix,
    config: &KMeansConfig,
) -> KMeansResult {
    let (n, dim, k) = (points.rows(), points.cols(), centroids.rows());
    let mut assignments = vec![0; n];
    let mut sse_trace = Vec::new();
    for _ in 0..config.max_iterations {
        sse_trace.push(assign(points, &centroids, &mut assignments));

        let mut sums = DenseMatrix::zeros(k, dim);
        let mut counts = vec![0usize; k];
        for (i, &c) in assignments.iter().enumerate() {
            counts[c] += 1;
            for (s, v) in sums.row_mut(c).iter_mut().zip(points.row(i)) {
                *s += v;
            }
        }
        let mut moved = 0.0_f64;
        for c in 0..k {
            // An empty cluster keeps its previous center.
            if counts[c] == 0 {
                continue;
            }
            let inv = 1.0 / counts[c] as f64;
            let new: Vec<f64> = sums.row(c).iter().map(|s| s * inv).collect();
            moved = moved.max(squared_distance(&new, centroids.row(c)).sqrt());
            centroids.row_mut(c).copy_from_slice(&new);
        }
        if moved < config.tolerance {
            break;
        }
    }
    let sse = assign(points, &centroids, &mut assignments);
    sse_trace.push(sse);
    KMeansResult {
        assignments,
        centroids,
        sse,
        sse_trace,
    }
}

/// Seeded k-means: k-means++ initialization, Lloyd iterations, best of
/// `config.restarts` runs by within-cluster SSE (earliest restart on ties).
pub fn kmeans(
    points: &DenseMatrix,
    k: usize,
    seed: u64,
    config: &KMeansConfig,
) -> Result<KMeansResult> {
    let n = points.rows();
    if k == 0 {
        return Err(Error::input("k-means needs k >= 1"));
    }
    if k > n {
        return Err(Error::input(format!("k = {k} exceeds the {n} points")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<KMeansResult> = None;
    for _ in 0..config.restarts.max(1) {
        let init = plus_plus_init(points, k, &mut rng);
        let run = lloyd(points, init, config);
        if best.as_ref().is_none_or(|b| run.sse < b.sse) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Fraction of points whose cluster's majority label equals their own.
pub fn purity(assignments: &[usize], labels: &[usize]) -> Result<f64> {
    if assignments.len() != labels.len() {
        return Err(Error::input(format!(
            "{} assignments but {} labels",
            assignments.len(),
            labels.len()
        )));
    }
    if assignments.is_empty() {
        return Err(Error::input("purity of an empty clustering"));
    }
    let mut table: BTreeMap<usize, BTreeMap<usize, usize>> = BTreeMap::new();
    for (&c, &l) in assignments.iter().zip(labels) {
        *table.entry(c).or_default().entry(l).or_default() += 1;
    }
    let majority: usize = table
        .values()
        .map(|counts| counts.values().copied().max().unwrap_or(0))
        .sum();
    Ok(majority as f64 / assignments.len() as f64)
}
