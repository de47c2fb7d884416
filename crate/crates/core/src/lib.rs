//! Corrector test for multiscale discretizations of the one-dimensional
//! random elliptic equation `-(a(x/ε, ω) u')' = f` on (0, 1).
//!
//! The deterministic solvers ([`elliptic`], [`schemes`]) are generic over
//! the [`Real`] scalar; sampling, kernels and statistics work in `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod config;
pub mod elliptic;
pub mod error;
pub mod harness;
pub mod io;
pub mod kernels;
pub mod poly;
pub mod quadrature;
pub mod random_media;
pub mod scalar;
pub mod schemes;
pub mod stats;

pub use elliptic::SourceTerm;
pub use error::{Error, Result};
pub use random_media::{CorrelationFacts, MediumModel, MediumSampler, MediumSpec};
pub use scalar::Real;
pub use schemes::{Basis, SchemeConfig, SchemeKind};

pub type MediumSample = random_media::MediumSample<f64>;
pub type MediumSampleF32 = random_media::MediumSample<f32>;
pub type DiscreteSolution = schemes::DiscreteSolution<f64>;
pub type DiscreteSolutionF32 = schemes::DiscreteSolution<f32>;
pub type StiffnessVector = schemes::StiffnessVector<f64>;
pub type StiffnessVectorF32 = schemes::StiffnessVector<f32>;
pub type ContinuumSolution = elliptic::ContinuumSolution<f64>;
pub type ContinuumSolutionF32 = elliptic::ContinuumSolution<f32>;
