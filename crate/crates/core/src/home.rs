//! Home-location inference from night-hour location fixes.
//!
//! Night fixes are clustered on raw (lat, lon) degrees; the cluster with the
//! most points is the home cluster and its centroid becomes the home
//! coordinates. The acceptance radius adapts to the observed GPS spread with
//! a floor for sparse clusters.

use std::collections::BTreeSet;

use chrono::Duration;
use serde::{Deserialize, Serialize};

use crate::clustering::{kmeans_best, select_k_elbow, sse_curve};
use crate::config::Config;
use crate::error::Error;
use crate::time::{NightWindow, Timestamp};
use crate::types::LocationSample;

pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// Great-circle distance in meters between (lat, lon) degree pairs.
pub fn haversine_m(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (lat1, lon1) = (a.0.to_radians(), a.1.to_radians());
    let (lat2, lon2) = (b.0.to_radians(), b.1.to_radians());
    let dlat = lat2 - lat1;
    let dlon = lon2 - lon1;
    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * h.sqrt().asin()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomeModel {
    pub lat: f64,
    pub lon: f64,
    pub radius_m: f64,
    pub night_window: NightWindow,
    pub support: usize,
}

/// Local calendar date identifying the night a sample belongs to. For a
/// wrapping window the pre-midnight hours anchor on their own date and the
/// post-midnight hours on the previous date.
fn night_key(t: &Timestamp, w: &NightWindow) -> chrono::NaiveDate {
    let date = t.local_date();
    if w.start_hour > w.end_hour && t.local_hour() < w.end_hour {
        date - Duration::days(1)
    } else {
        date
    }
}

#[derive(Debug, Clone)]
pub struct HomeTraining {
    pub model: HomeModel,
    pub chosen_k: usize,
    pub night_sample_count: usize,
}

/// Infer the home location from night-window fixes: scree curve, elbow,
/// k-means, then the cluster with the most points (ties broken by smaller
/// mean member distance).
pub fn locate_home(
    samples: &[LocationSample],
    w: &NightWindow,
    cfg: &Config,
) -> Result<HomeTraining, Error> {
    let filter = w.filter_window();
    let mut night: Vec<&LocationSample> =
        samples.iter().filter(|s| filter.contains_hour(s.t.local_hour())).collect();
    // canonical order so the result is invariant under input shuffling
    night.sort_by_key(|s| {
        (s.t.epoch_seconds, s.t.utc_offset_minutes, s.lat.to_bits(), s.lon.to_bits())
    });

    if night.len() < cfg.min_night_samples {
        return Err(Error::InsufficientData(format!(
            "home: {} night samples, need {}",
            night.len(),
            cfg.min_night_samples
        )));
    }
    let nights: BTreeSet<_> = night.iter().map(|s| night_key(&s.t, &filter)).collect();
    if nights.len() < cfg.min_nights {
        return Err(Error::InsufficientData(format!(
            "home: {} distinct nights, need {}",
            nights.len(),
            cfg.min_nights
        )));
    }

    let points: Vec<Vec<f64>> = night.iter().map(|s| vec![s.lat, s.lon]).collect();
    let mut distinct: Vec<(u64, u64)> =
        points.iter().map(|p| (p[0].to_bits(), p[1].to_bits())).collect();
    distinct.sort_unstable();
    distinct.dedup();
    let k_max = (cfg.k_max_cap.min(points.len() / 3).min(distinct.len())).max(1);

    let curve = sse_curve(&points, k_max, cfg.seed, cfg.restarts)?;
    let k = select_k_elbow(&curve, cfg.elbow_threshold)?;
    let clustering = kmeans_best(&points, k, cfg.seed, cfg.restarts)?;

    // largest cluster; ties -> tighter (smaller mean member distance)
    let mean_dist = |ci: usize| -> f64 {
        let c = (clustering.centroids[ci][0], clustering.centroids[ci][1]);
        let mut total = 0.0;
        for (p, &a) in points.iter().zip(&clustering.assignments) {
            if a == ci {
                total += haversine_m((p[0], p[1]), c);
            }
        }
        total / clustering.sizes[ci] as f64
    };
    let mut best = 0;
    for i in 1..clustering.k() {
        if clustering.sizes[i] > clustering.sizes[best]
            || (clustering.sizes[i] == clustering.sizes[best] && mean_dist(i) < mean_dist(best))
        {
            best = i;
        }
    }

    let centroid = (clustering.centroids[best][0], clustering.centroids[best][1]);
    let mut dists: Vec<f64> = points
        .iter()
        .zip(&clustering.assignments)
        .filter(|(_, &a)| a == best)
        .map(|(p, _)| haversine_m((p[0], p[1]), centroid))
        .collect();
    dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let idx = ((0.95 * dists.len() as f64).ceil() as usize).clamp(1, dists.len()) - 1;
    let radius_m = cfg.home_radius_floor_m.max(dists[idx]);

    Ok(HomeTraining {
        model: HomeModel {
            lat: centroid.0,
            lon: centroid.1,
            radius_m,
            night_window: *w,
            support: clustering.sizes[best],
        },
        chosen_k: k,
        night_sample_count: points.len(),
    })
}

/// Closed-boundary membership: distance to the home centroid <= radius.
pub fn is_at_home(s: &LocationSample, h: &HomeModel) -> bool {
    haversine_m((s.lat, s.lon), (h.lat, h.lon)) <= h.radius_m
}
