//! Orthographic structure from motion for three points seen by three cameras.
//!
//! All scenes live in a fixed gauge: the first point sits at the origin and the
//! first camera is the x-axis (plane) or the xy-plane (space). In that gauge the
//! structure-from-motion map sends four (plane) or eight (space) unknowns to the
//! same number of image readings. This crate evaluates that map, inverts it in
//! closed form, enumerates the reflection ambiguities, and decides whether a set
//! of readings can be realized by any point-camera configuration at all.
//!
//! ```
//! use orthosfm::{forward, reconstruct2d, scene::Scene2D};
//!
//! let scene = Scene2D::new(1.0, 0.0, 0.0, 1.0, std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_4);
//! let data = forward::project_2d(&scene);
//! let set = reconstruct2d::invert_2d(&data, orthosfm::tol::RESIDUAL).unwrap();
//! assert_eq!(set.len(), 2);
//! assert!(set.iter().any(|c| c.scene.distance(&scene) < 1e-9));
//! ```

pub mod candidates;
pub mod cli;
pub mod error;
pub mod feasibility;
pub mod forward;
pub mod io;
pub mod oracle;
pub mod plot;
pub mod reconstruct2d;
pub mod reconstruct3d;
pub mod scene;
pub mod tol;

pub use candidates::{Candidate, CandidateSet};
pub use error::{Error, Result};
pub use scene::{EulerFrame, ImageData2D, ImageData3D, Scene2D, Scene3D};
