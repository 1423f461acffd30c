//! Discrete spectra of leaky quantum graphs `−Δ − γδ(· − Γ)` in the plane,
//! computed through their point-interaction approximation.
//!
//! The pipeline is: describe Γ with a [`GraphSpec`], spread points over it
//! with [`discretize`], wrap the result in a [`LambdaSystem`], and hand that
//! to [`find_eigenvalues`]. Independent reference solutions live in
//! [`oracles`]; parameter scans and avoided-crossing metrics in [`sweeps`].
//!
//! ```
//! use lgq::{discretize, find_eigenvalues, GraphSpec, LambdaSystem, Resolution, SolverOptions};
//!
//! let ring = GraphSpec::Ring { radius: 10.0, cut_angle: 0.0 };
//! let graph = discretize(&ring, 0.5, Resolution::Count(100))?;
//! let spectrum = find_eigenvalues(&LambdaSystem::new(graph)?, &SolverOptions::default())?;
//! assert_eq!(spectrum.levels[0].multiplicity, 1);
//! assert!(spectrum.levels.iter().skip(1).all(|l| l.multiplicity == 2));
//! # Ok::<(), lgq::Error>(())
//! ```

// `!(x > 0.0)` also rejects NaN, which is the point.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod budget;
mod error;
pub mod experiment;
pub mod geometry;
pub mod linalg;
pub mod oracles;
pub mod specfun;
pub mod spectral;
pub mod sweeps;

pub use error::{Error, Result};
pub use geometry::{discretize, DiscretizedGraph, GraphSpec, Involution, Point, Resolution};
pub use spectral::{find_eigenvalues, LambdaSystem, Level, Parity, SolverOptions, Spectrum};
