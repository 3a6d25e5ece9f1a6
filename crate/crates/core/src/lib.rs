//! Learned cost-to-go planning for a Reeds-Shepp car.
//!
//! The pipeline: grow cost-to-go trees over a workspace ([`planners`]), turn them into
//! training triples with curvature-aware resampling ([`dataset`]), fit a small rectifier
//! network to the costs ([`model`]), and drive the car greedily down the learned cost
//! ([`c2g_planner`]). All math is generic over [`Scalar`]; the aliases below fix the
//! precision used by the command-line tools.

pub mod bench;
pub mod c2g_planner;
pub mod dataset;
pub mod error;
pub mod geometry;
pub mod kinematics;
pub mod model;
pub mod planners;
pub mod reeds_shepp;
pub mod rng;
pub mod scalar;
pub mod svg;
pub mod trajectory;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Configuration = geometry::Configuration<f64>;
pub type Workspace = geometry::Workspace<f64>;
pub type Footprint = geometry::Footprint<f64>;
pub type RsPath = reeds_shepp::RsPath<f64>;
pub type Tree = planners::Tree<f64>;
pub type Trajectory = trajectory::Trajectory<f64>;
pub type PlannerParams = planners::PlannerParams<f64>;
pub type C2gModel = model::C2gModel<f32>;
