//! Geodesic Monte Carlo on embedded manifolds.
//!
//! This crate implements a Hamiltonian Monte Carlo sampler for probability
//! distributions whose support is a manifold embedded in Euclidean space.
//! Instead of integrating Hamilton's equations in a coordinate chart, the
//! integrator alternates exact solutions of the two split Hamiltonians: a
//! linear momentum kick from the log-density gradient (followed by a tangent
//! projection) and the closed-form geodesic flow of the manifold. Supported
//! manifolds are Euclidean space, affine subspaces, unit hyperspheres, Stiefel
//! manifolds and the orthogonal group, the probability simplex with boundary
//! reflection, and products of any of these.
//!
//! The crate ships the target densities used by the accompanying experiment
//! CLI (Bingham-von Mises-Fisher, Dirichlet on the sphere and the simplex, a
//! partially-observed win/loss model, and a low-rank probit network model),
//! a parallel-tempering driver for multimodal targets, effective-sample-size
//! diagnostics, and file I/O for configs, datasets and trace output.
//!
//! ```
//! use geomc::manifolds::{Manifold, Point};
//! use geomc::rng::RngStream;
//! use geomc::sampler::{run_chain, HmcConfig, Kernel, StepSizes};
//! use geomc::targets::Bvmf;
//! use nalgebra::{DMatrix, DVector};
//!
//! let sphere = Manifold::sphere(3).unwrap();
//! let target = Bvmf::new(
//!     DVector::zeros(3),
//!     DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, 0.0, 1.0])),
//! )
//! .unwrap();
//! let kernel = Kernel::GeodesicHmc(HmcConfig::new(StepSizes::Uniform(0.1), 10).unwrap());
//! let start = Point(DVector::from_vec(vec![1.0, 0.0, 0.0]));
//! let mut rng = RngStream::new(7);
//! let trace = run_chain(&kernel, &sphere, &target, &start, 100, &mut rng).unwrap();
//! assert_eq!(trace.len(), 100);
//! ```

pub mod diagnostics;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod io;
pub mod linalg;
pub mod manifolds;
pub mod probit;
pub mod rng;
pub mod sampler;
pub mod targets;
pub mod tempering;

pub use error::{Error, Result};
