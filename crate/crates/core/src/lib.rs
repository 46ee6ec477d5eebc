//! Two-player cooperative cooking gridworld with a full partner-adaptation
//! stack on top: scripted partner populations, a trajectory VAE that learns a
//! latent strategy space, K-means strategy clusters, a cluster-conditioned
//! cooperator trained by policy gradient, and online partner inference via
//! fixed-share expert tracking.
//!
//! The crate is organized to mirror the pipeline:
//!
//! - [`env`] — the deterministic kitchen simulation (layouts, stepping,
//!   observations, macro-action labeling)
//! - [`trajectory`] — on-disk rollout logs and replay verification
//! - [`partner`] — behavior-preference scripted partners and dataset collection
//! - [`nn`] — a small reverse-mode autodiff core used by the learners
//! - [`strategy`] — the trajectory VAE, K-means, silhouette, cluster selection
//! - [`coop`] — the cluster-conditioned cooperator and its trainer
//! - [`adapt`] — fixed-share / Hedge belief tracking over strategy clusters
//! - [`eval`] — experiment harnesses, reports, statistics, plots
//! - [`service`] — the live game session server and wire protocol

pub mod adapt;
pub mod coop;
pub mod env;
pub mod error;
pub mod eval;
pub mod nn;
pub mod partner;
pub mod rng;
pub mod service;
pub mod strategy;
pub mod trajectory;

pub use error::{Error, Result};
