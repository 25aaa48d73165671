//! Behavioral anomaly detection from smartphone sensor logs.
//!
//! The pipeline learns a patient's normal patterns from two to three weeks
//! of location, motion, and communication logs, then flags days that
//! deviate:
//!
//! - [`home`]: night-hour location fixes are clustered and the largest
//!   cluster's centroid becomes the home location.
//! - [`sleep`]: the longest at-home nightly rest interval gives a
//!   (start hour, duration) point per day; clusters of those points define
//!   normal sleep, and new days outside every cluster are outliers.
//! - [`comm`]: 95% confidence intervals over day-to-day deltas of outgoing
//!   calls, missed calls, and outgoing SMS, with asymmetric alarm rules.
//! - [`synth`]: a deterministic trace generator with planted ground truth.
//!
//! With the default `parallel` feature, k-means restarts and per-night
//! extraction run on rayon; results are identical to the sequential path.

pub mod clustering;
pub mod comm;
pub mod config;
pub mod error;
pub mod home;
pub mod ingest;
pub mod model;
pub mod pipeline;
pub mod rng;
pub mod sleep;
pub mod synth;
pub mod time;
pub mod types;

pub use config::Config;
pub use error::Error;
pub use model::{load_model, save_model, PatientModel};
