//! A deterministic 2D simulator of a consequence-predicting ethical governor.
//!
//! A governed robot shares a small arena with one or more humans and two goal
//! sites, either of which may be dangerous. Once per governor period the
//! robot's ethical layer infers where each human is heading, proposes a set of
//! candidate target positions, forward-simulates each one, scores the
//! predicted outcomes by distance to danger and, when one candidate is
//! decisively better, overrides the robot's goal.
//!
//! Module map:
//!
//! - [`scenario`], [`presets`]: declarative scenario description and the
//!   built-in experiments.
//! - [`kinematics`]: the fixed-tick world engine.
//! - [`human_model`]: goal inference from gaze and straight-line path model.
//! - [`generation`], [`prediction`], [`evaluation`]: the three stages of one
//!   governor cycle.
//! - [`governor`]: cycle orchestration and override lifecycle.
//! - [`runner`], [`trace`], [`plot`]: run loop, persistence, sweeps and SVG
//!   output.

pub mod error;
pub mod evaluation;
pub mod generation;
pub mod geom;
pub mod governor;
pub mod human_model;
pub mod kinematics;
pub mod parallel;
pub mod plot;
pub mod prediction;
pub mod presets;
pub mod runner;
pub mod scenario;
pub mod trace;

pub use error::{Error, Result};
pub use geom::{Pose, Vec2};
pub use parallel::Execution;
pub use scenario::{GoalId, Scenario};
