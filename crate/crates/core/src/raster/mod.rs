//! Self-contained raster primitives used by the wall-extraction pipeline.

mod blur;
mod canny;
mod contour;
mod hough;
mod mask;
mod minrect;
mod morph;
mod rotate;

pub use blur::{blur_threshold, gaussian_kernel_1d};
pub use canny::canny;
pub use contour::{components, label, trace_outer, Component, Contour};
pub use hough::{hough_accumulate, hough_peaks, HoughAccumulator, HoughPeak};
pub use mask::{BinaryMask, GrayImage, PixelRect};
pub use minrect::{convex_hull, min_area_rect, RotatedRect};
pub use morph::{close, dilate, erode, morph, open, Kernel, MorphOp};
pub use rotate::{rotate, rotate_point, sin_cos_deg, AffineMap};
