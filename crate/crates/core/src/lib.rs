//! Simulation of transverse two-photon states from spontaneous parametric
//! down-conversion, their aberration under per-arm phases, detection by
//! scanning slits, entanglement witnessing and ghost imaging.

pub mod aberration;
pub mod analytics;
pub mod detection;
pub mod error;
pub mod ghost;
pub mod grid;
mod parallel;
pub mod scenario;
pub mod spdc;
pub mod transform;
pub mod units;

pub use aberration::{Arm, ArmAssignment, PhaseDomain, PhaseProfile};
pub use error::{Error, Result};
pub use grid::{Basis, BiphotonGrid, Grid1D, JointDensity, JointMoments};
pub use spdc::{CrystalPumpConfig, PhaseMatching, PumpProfile};
pub use units::{AxisUnit, FourierLens};
