//! Two-species phytoplankton competition where the toxic species releases an
//! allelopathic toxin and its presence induces fear in the competitor.
//!
//! Modules follow the analysis pipeline: [`model`] holds the kinetics,
//! [`equilibria`] the steady states, [`ode`] trajectories and phase-plane
//! tools, [`bifurcation`] parameter scans and transversality checks, and
//! [`pde`] the reaction-diffusion system with a spatially varying fear level.
//! [`verify`] runs the acceptance checks and [`io`] drives the command line.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bifurcation;
pub mod equilibria;
pub mod error;
pub mod io;
pub mod model;
pub mod ode;
pub mod pde;
pub mod verify;

pub use error::{Error, Result};
