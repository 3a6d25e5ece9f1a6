//! Independent reference computations for tests.
//!
//! Nothing here depends on `c2g-core`: poses are plain `(x, y, θ)` tuples, obstacles have
//! their own representation and every formula is written from scratch. Slow by design of
//! the task; never use these in production paths.

pub mod collision;
pub mod lattice;
pub mod rs_brute;

pub use collision::{footprint_hits_sampled, Shape};
pub use lattice::{lattice_c2g, LatticeCosts, LatticeError};
pub use rs_brute::rs_brute;

/// `(x, y, θ)`.
pub type Pose = (f64, f64, f64);

pub(crate) fn wrap_pi(a: f64) -> f64 {
    let t = std::f64::consts::TAU;
    let mut r = a.rem_euclid(t);
    if r >= std::f64::consts::PI {
        r -= t;
    }
    r
}
