//! Lloyd's k-means with deterministic k-means++ seeding, SSE scree curve,
//! relative-drop elbow selection, and sparse-outlier cluster pruning.
//!
//! Determinism contract: for a fixed (points, k, seed) the result is
//! bit-reproducible. Restarts draw from substreams derived from
//! (seed, restart index), so the parallel and sequential paths produce
//! identical results.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rng::XorShift64Star;

pub const MAX_ITERATIONS: usize = 300;
pub const DEFAULT_RESTARTS: usize = 10;
pub const DEFAULT_ELBOW_THRESHOLD: f64 = 0.5;

pub type Point = Vec<f64>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub centroids: Vec<Point>,
    pub assignments: Vec<usize>,
    pub sse: f64,
    pub sizes: Vec<usize>,
}

impl Clustering {
    pub fn k(&self) -> usize {
        self.centroids.len()
    }

    /// Index of the cluster with the most points (lowest index on ties).
    pub fn largest_cluster(&self) -> usize {
        let mut best = 0;
        for (i, &s) in self.sizes.iter().enumerate() {
            if s > self.sizes[best] {
                best = i;
            }
        }
        best
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest_centroid(p: &[f64], centroids: &[Point]) -> (usize, f64) {
    let mut best = 0;
    let mut best_d = sq_dist(p, &centroids[0]);
    for (i, c) in centroids.iter().enumerate().skip(1) {
        let d = sq_dist(p, c);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    (best, best_d)
}

fn count_distinct(points: &[Point]) -> usize {
    let mut keys: Vec<Vec<u64>> = points
        .iter()
        .map(|p| p.iter().map(|v| v.to_bits()).collect())
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys.len()
}

/// k-means++ seeding: first centroid uniform, subsequent centroids chosen
/// with probability proportional to squared distance to the nearest chosen
/// centroid.
fn seed_centroids(points: &[Point], k: usize, rng: &mut XorShift64Star) -> Vec<Point> {
    let mut centroids = Vec::with_capacity(k);
    centroids.push(points[rng.below(points.len())].clone());
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.next_f64() * total;
            let mut chosen = points.len() - 1;
            for (i, &w) in d2.iter().enumerate() {
                target -= w;
                if target <= 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            // all remaining mass at chosen centroids; caller guarantees
            // enough distinct points, so this only happens transiently
            rng.below(points.len())
        };
        centroids.push(points[next].clone());
        for (i, p) in points.iter().enumerate() {
            let d = sq_dist(p, centroids.last().unwrap());
            if d < d2[i] {
                d2[i] = d;
            }
        }
    }
    centroids
}

fn compute_sse(points: &[Point], centroids: &[Point], assignments: &[usize]) -> f64 {
    points
        .iter()
        .zip(assignments)
        .map(|(p, &a)| sq_dist(p, &centroids[a]))
        .sum()
}

/// One seeded Lloyd run, returning the clustering plus its per-iteration
/// SSE trace (used by tests to assert monotone descent).
pub fn kmeans_with_trace(points: &[Point], k: usize, seed: u64) -> Result<(Clustering, Vec<f64>), Error> {
    if points.is_empty() || k == 0 {
        return Err(Error::InvalidInput("kmeans needs k >= 1 and at least one point".into()));
    }
    let dim = points[0].len();
    if dim == 0 || points.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidInput("points must share a positive dimension".into()));
    }
    if count_distinct(points) < k {
        return Err(Error::InvalidInput("insufficient distinct points".into()));
    }

    let n = points.len();
    let mut rng = XorShift64Star::new(seed);
    let mut centroids = seed_centroids(points, k, &mut rng);
    let mut assignments = vec![0usize; n];
    let mut trace = Vec::new();

    for _ in 0..MAX_ITERATIONS {
        // assignment step; ties go to the lowest centroid index
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let (a, _) = nearest_centroid(p, &centroids);
            if assignments[i] != a {
                assignments[i] = a;
                changed = true;
            }
        }
        trace.push(compute_sse(points, &centroids, &assignments));

        // centroid step
        let mut sums = vec![vec![0.0; dim]; k];
        let mut sizes = vec![0usize; k];
        for (p, &a) in points.iter().zip(&assignments) {
            sizes[a] += 1;
            for (s, v) in sums[a].iter_mut().zip(p) {
                *s += v;
            }
        }
        let mut repaired = false;
        for c in 0..k {
            if sizes[c] == 0 {
                // empty-cluster repair: move the point farthest from its
                // centroid into the empty cluster
                let mut far = None;
                let mut far_d = -1.0;
                for (i, p) in points.iter().enumerate() {
                    if sizes[assignments[i]] > 1 {
                        let d = sq_dist(p, &centroids[assignments[i]]);
                        if d > far_d {
                            far_d = d;
                            far = Some(i);
                        }
                    }
                }
                if let Some(i) = far {
                    let old = assignments[i];
                    sizes[old] -= 1;
                    for (s, v) in sums[old].iter_mut().zip(&points[i]) {
                        *s -= v;
                    }
                    assignments[i] = c;
                    sizes[c] = 1;
                    sums[c] = points[i].clone();
                    repaired = true;
                }
            }
        }
        for c in 0..k {
            if sizes[c] > 0 {
                for s in sums[c].iter_mut() {
                    *s /= sizes[c] as f64;
                }
                centroids[c] = std::mem::take(&mut sums[c]);
            }
        }
        if !changed && !repaired && trace.len() > 1 {
            break;
        }
    }

    // final assignment pass so the invariant "each point at its nearest
    // centroid" holds exactly for the returned state
    let mut sizes = vec![0usize; k];
    for (i, p) in points.iter().enumerate() {
        let (a, _) = nearest_centroid(p, &centroids);
        assignments[i] = a;
        sizes[a] += 1;
    }
    let sse = compute_sse(points, &centroids, &assignments);
    Ok((Clustering { centroids, assignments, sse, sizes }, trace))
}

/// One seeded Lloyd run (k-means++ initialization, max 300 iterations).
pub fn kmeans(points: &[Point], k: usize, seed: u64) -> Result<Clustering, Error> {
    kmeans_with_trace(points, k, seed).map(|(c, _)| c)
}

fn restart_run(points: &[Point], k: usize, seed: u64, restart: u64) -> Result<Clustering, Error> {
    let mut stream = XorShift64Star::substream(seed, restart);
    kmeans(points, k, stream.next_u64())
}

/// Best of `restarts` seeded runs, sequential. Ties on SSE resolve to the
/// lowest restart index.
pub fn kmeans_best_seq(points: &[Point], k: usize, seed: u64, restarts: usize) -> Result<Clustering, Error> {
    let restarts = restarts.max(1);
    let mut best: Option<Clustering> = None;
    for r in 0..restarts {
        let c = restart_run(points, k, seed, r as u64)?;
        if best.as_ref().is_none_or(|b| c.sse < b.sse) {
            best = Some(c);
        }
    }
    Ok(best.unwrap())
}

/// Best of `restarts` seeded runs, restarts evaluated in parallel. The
/// result is identical to `kmeans_best_seq` for the same arguments.
#[cfg(feature = "parallel")]
pub fn kmeans_best_par(points: &[Point], k: usize, seed: u64, restarts: usize) -> Result<Clustering, Error> {
    use rayon::prelude::*;
    let restarts = restarts.max(1);
    let runs: Result<Vec<(usize, Clustering)>, Error> = (0..restarts)
        .into_par_iter()
        .map(|r| restart_run(points, k, seed, r as u64).map(|c| (r, c)))
        .collect();
    let mut runs = runs?;
    runs.sort_by(|a, b| a.1.sse.partial_cmp(&b.1.sse).unwrap().then(a.0.cmp(&b.0)));
    Ok(runs.into_iter().next().unwrap().1)
}

/// Best of `restarts` seeded runs, using the parallel path when the
/// `parallel` feature is enabled.
pub fn kmeans_best(points: &[Point], k: usize, seed: u64, restarts: usize) -> Result<Clustering, Error> {
    #[cfg(feature = "parallel")]
    {
        kmeans_best_par(points, k, seed, restarts)
    }
    #[cfg(not(feature = "parallel"))]
    {
        kmeans_best_seq(points, k, seed, restarts)
    }
}

fn curve_seed(seed: u64, k: usize) -> u64 {
    XorShift64Star::substream(seed, k as u64).next_u64()
}

/// Best SSE per k = 1..=k_max, each over `restarts` runs, with monotone
/// repair (sse[k] <- min(sse[k], sse[k-1])).
pub fn sse_curve(points: &[Point], k_max: usize, seed: u64, restarts: usize) -> Result<Vec<f64>, Error> {
    if k_max == 0 {
        return Err(Error::InvalidInput("k_max must be >= 1".into()));
    }
    let mut curve = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let best = kmeans_best(points, k, curve_seed(seed, k), restarts)?;
        let mut sse = best.sse;
        if let Some(&prev) = curve.last() {
            if sse > prev {
                sse = prev;
            }
        }
        curve.push(sse);
    }
    Ok(curve)
}

/// Elbow rule: drop(k) = (sse[k-1] - sse[k]) / sse[k-1] for k >= 2 (defined
/// as 0 when the denominator is 0); return the largest k whose drop meets
/// the threshold, or 1 when none does.
pub fn select_k_elbow(curve: &[f64], rel_drop_threshold: f64) -> Result<usize, Error> {
    if curve.is_empty() {
        return Err(Error::InvalidInput("empty SSE curve".into()));
    }
    let mut chosen = 1;
    for k in 2..=curve.len() {
        let prev = curve[k - 2];
        let drop = if prev == 0.0 { 0.0 } else { (prev - curve[k - 1]) / prev };
        if drop >= rel_drop_threshold {
            chosen = k;
        }
    }
    Ok(chosen)
}

#[derive(Debug, Clone)]
pub struct PruneOutcome {
    /// Clustering over the retained points only (assignments reindexed,
    /// kept centroids unchanged, SSE recomputed over the survivors).
    pub clustering: Clustering,
    /// Indices into the original point set that survived.
    pub kept_points: Vec<usize>,
    /// Indices into the original point set that were discarded.
    pub removed_points: Vec<usize>,
    /// Centroids of the discarded clusters.
    pub removed_centroids: Vec<Point>,
}

/// Discard sparse clusters far from dense ones. A cluster is discarded iff
/// its size is <= max(1, floor(min_frac * N)) AND its centroid lies farther
/// than `min_dist` from the nearest dense ("retained-candidate") centroid.
/// When no cluster is dense, nothing is discarded.
pub fn prune_outlier_clusters(
    c: &Clustering,
    points: &[Point],
    min_frac: f64,
    min_dist: f64,
) -> PruneOutcome {
    let n: usize = c.sizes.iter().sum();
    let size_cut = std::cmp::max(1, (min_frac * n as f64).floor() as usize);
    let dense: Vec<usize> = (0..c.k()).filter(|&i| c.sizes[i] > size_cut).collect();

    let mut keep = vec![true; c.k()];
    if !dense.is_empty() {
        for (i, kept) in keep.iter_mut().enumerate() {
            if c.sizes[i] <= size_cut {
                let nearest = dense
                    .iter()
                    .map(|&j| sq_dist(&c.centroids[i], &c.centroids[j]).sqrt())
                    .fold(f64::INFINITY, f64::min);
                if nearest > min_dist {
                    *kept = false;
                }
            }
        }
    }

    let mut new_index = vec![usize::MAX; c.k()];
    let mut centroids = Vec::new();
    let mut removed_centroids = Vec::new();
    for i in 0..c.k() {
        if keep[i] {
            new_index[i] = centroids.len();
            centroids.push(c.centroids[i].clone());
        } else {
            removed_centroids.push(c.centroids[i].clone());
        }
    }

    let mut kept_points = Vec::new();
    let mut removed_points = Vec::new();
    let mut assignments = Vec::new();
    let mut sizes = vec![0usize; centroids.len()];
    let mut sse = 0.0;
    for (i, &a) in c.assignments.iter().enumerate() {
        if keep[a] {
            kept_points.push(i);
            let na = new_index[a];
            assignments.push(na);
            sizes[na] += 1;
            sse += sq_dist(&points[i], &centroids[na]);
        } else {
            removed_points.push(i);
        }
    }

    PruneOutcome {
        clustering: Clustering { centroids, assignments, sse, sizes },
        kept_points,
        removed_points,
        removed_centroids,
    }
}
