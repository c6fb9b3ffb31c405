//! Nonlinear spectral gaps of random regular graphs mapped into the
//! shortest-path metric of another graph.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: simple graphs, the configuration model, edge switching,
//!   edge-list I/O;
//! - [`metric`]: BFS distances, distance matrices, diameter, balls;
//! - [`spectral`]: normalized Laplacian spectra, discrepancy and the
//!   Euclidean expander inequality;
//! - [`gap`]: `gamma(G, d_H, f)`, the function classes `F(delta)`, near
//!   pairs and adversarial search for the supremum;
//! - [`embedding`]: Bourgain embeddings and measured distortion;
//! - [`lab`]: seeded Monte Carlo experiments and CSV output;
//! - [`cli`]: the `nlgap` command-line tool.

pub mod cli;
pub mod embedding;
pub mod error;
pub mod euclid;
pub mod gap;
pub mod graph;
pub mod lab;
pub mod metric;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
