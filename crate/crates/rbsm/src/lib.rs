//! Discrete rigid-body-spring lattice models in the plane.
//!
//! The crate covers the full pipeline for studying the macroscopic elastic
//! behaviour of such models:
//!
//! * [`geometry`] generates four tessellation families (Voronoi, randomized
//!   Voronoi, random and centered random), extracts the contact elements
//!   between rigid bodies and measures the contact-angle statistics.
//! * [`theory`] holds the closed-form machinery: rotation tensors, the
//!   per-contact fourth order tensors, their orientation expectations (with
//!   a Monte Carlo oracle), and predictors for Poisson's ratio and the
//!   elastic modulus.
//! * [`solver`] assembles and solves the 2D discrete system (two
//!   translations and one rotation per body) under prescribed boundary
//!   displacements.
//! * [`homogenize`] recovers macroscopic stress, strain and elastic
//!   constants from a solved structure and orchestrates stiffness-ratio
//!   sweeps against the analytic predictors.
//!
//! ```
//! use rbsm::geometry::{generate, DomainBox, TessellationKind};
//! use rbsm::homogenize::{simulate, RunOptions};
//! use rbsm::theory::{predict_general, MaterialParams, Mode};
//!
//! // generate a small structure, solve it, compare with the predictor
//! let domain = DomainBox::sized(15.0, 15.0)?;
//! let tess = generate(TessellationKind::RandomizedVoronoi, domain, 1.0, 42, 5000)?;
//! let params = MaterialParams::new(1.0, 1.0)?;
//! let sim = simulate(&tess, &params, Mode::PlaneStress, &RunOptions::default())?;
//!
//! let stats = rbsm::geometry::chi_statistics(&tess.contacts, 80)?;
//! let pred = predict_general(params.alpha, stats.i1, stats.i2, Mode::PlaneStress)?;
//! assert!((sim.constants.nu - pred.nu).abs() < 0.05);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod geometry;
pub mod homogenize;
pub(crate) mod rng;
pub mod solver;
pub mod tensor;
pub mod theory;
pub mod vec2;

pub use vec2::Vec2;
