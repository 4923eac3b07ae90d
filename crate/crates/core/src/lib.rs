//! Simulation and hysteresis-classification toolkit for the one-dimensional
//! Landau-Lifshitz equation and three damped second-order exemplars.

pub mod error;
pub mod experiment;
pub mod grid;
pub mod hysteresis;
pub mod lllin;
pub mod llpde;
pub mod odebench;
pub mod signal;
mod stepper;
pub mod vec3;

pub use error::{Error, Result};
pub use experiment::{Experiment, SystemKind};
pub use grid::{MagnetizationField, SpatialGrid, NORM_TOLERANCE};
pub use hysteresis::{IOCurve, LoopMetrics, SweepPolicy, SweepResult, Verdict};
pub use signal::{evaluate_input, HarmonicInput, InputShape, Schedule, Trajectory};
pub use vec3::{cross, Vec3};
