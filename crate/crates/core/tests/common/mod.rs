// Shared helpers for the integration suites: an exhaustive-partition SSE
// oracle built independently of the clustering code, plus seeded generators.
#![allow(dead_code)]

use restwatch::rng::XorShift64Star;

/// SSE of an explicit assignment: per-block mean as centroid, summed squared
/// distances. Empty blocks contribute nothing.
pub fn sse_of_assignment(points: &[Vec<f64>], assign: &[usize], k: usize) -> f64 {
    let d = points[0].len();
    let mut sums = vec![vec![0.0; d]; k];
    let mut counts = vec![0usize; k];
    for (p, &a) in points.iter().zip(assign) {
        counts[a] += 1;
        for (s, v) in sums[a].iter_mut().zip(p) {
            *s += v;
        }
    }
    let mut sse = 0.0;
    for (p, &a) in points.iter().zip(assign) {
        for (s, v) in sums[a].iter().zip(p) {
            let c = s / counts[a] as f64;
            sse += (v - c) * (v - c);
        }
    }
    sse
}

/// Global minimum SSE over all partitions into at most k blocks, by
/// brute-force enumeration of every assignment. Only viable for tiny n.
pub fn exhaustive_min_sse(points: &[Vec<f64>], k: usize) -> f64 {
    let n = points.len();
    let total = (k as u64).pow(n as u32);
    let mut best = f64::INFINITY;
    let mut assign = vec![0usize; n];
    for code in 0..total {
        let mut c = code;
        for a in assign.iter_mut() {
            *a = (c % k as u64) as usize;
            c /= k as u64;
        }
        let sse = sse_of_assignment(points, &assign, k);
        if sse < best {
            best = sse;
        }
    }
    best
}

/// n 2-d points per blob, Gaussian around the given centers.
pub fn blobs(rng: &mut XorShift64Star, centers: &[(f64, f64)], per_blob: usize, sd: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(centers.len() * per_blob);
    for &(cx, cy) in centers {
        for _ in 0..per_blob {
            out.push(vec![rng.normal(cx, sd), rng.normal(cy, sd)]);
        }
    }
    out
}
