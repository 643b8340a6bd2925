//! Vectorization of floor-plan wall masks into rectangular wall segments and
//! reconstruction of a simple 3D building model with door and window
//! openings.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`extraction::preprocess`] cleans the wall mask (opening, blur,
//!    closing).
//! 2. [`extraction::detect_angles`] finds the dominant wall orientations
//!    from a Hough histogram of Canny edges.
//! 3. [`extraction::extract_walls`] rotates the residual mask into each
//!    orientation frame, splits horizontal and vertical runs, and fits boxes
//!    with [`boxfit::shrink_fit`].
//! 4. [`reconstruct`] matches openings to walls and emits OBJ and JSON.

pub mod boxfit;
pub mod config;
pub mod error;
pub mod extraction;
pub mod planio;
pub mod raster;
pub mod reconstruct;
pub mod wall;

pub use config::PipelineConfig;
pub use error::{Error, Result};
pub use wall::{Orientation, WallBox};
