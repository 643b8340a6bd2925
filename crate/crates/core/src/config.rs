use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{invalid, Result};

/// Every tunable of the pipeline. Lengths are pixels unless suffixed `_m`.
///
/// Deserializes from JSON with exactly these field names; absent fields
/// take their defaults and unknown fields are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub open_kernel_px: usize,
    pub close_kernel_px: usize,
    pub blur_sigma: f64,
    pub blur_threshold: f64,
    pub canny_low: f64,
    pub canny_high: f64,
    pub hough_theta_res_deg: f64,
    pub hough_rho_res_px: f64,
    /// Minimum Hough votes as a fraction of the larger image dimension.
    pub hough_min_votes_frac: f64,
    /// Angle classes lighter than this fraction of the strongest are dropped.
    pub angle_peak_min_frac: f64,
    pub angle_merge_tol_deg: f64,
    pub hv_kernel_len_px: usize,
    pub hv_kernel_thickness_px: usize,
    pub tilt_tol_deg: f64,
    pub shrink_iou_target: f64,
    pub min_box_side_px: usize,
    pub min_chunk_area_px: usize,
    pub max_angle_iterations: usize,
    pub pixel_scale_m_per_px: f64,
    pub wall_height_m: f64,
    pub door_height_m: f64,
    pub window_sill_m: f64,
    pub window_height_m: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            open_kernel_px: 3,
            close_kernel_px: 5,
            blur_sigma: 1.0,
            blur_threshold: 0.5,
            canny_low: 50.0,
            canny_high: 150.0,
            hough_theta_res_deg: 1.0,
            hough_rho_res_px: 1.0,
            hough_min_votes_frac: 0.05,
            angle_peak_min_frac: 0.1,
            angle_merge_tol_deg: 2.0,
            hv_kernel_len_px: 11,
            hv_kernel_thickness_px: 1,
            tilt_tol_deg: 3.0,
            shrink_iou_target: 0.9,
            min_box_side_px: 3,
            min_chunk_area_px: 25,
            max_angle_iterations: 4,
            pixel_scale_m_per_px: 0.02,
            wall_height_m: 2.5,
            door_height_m: 2.0,
            window_sill_m: 0.9,
            window_height_m: 1.2,
        }
    }
}

impl PipelineConfig {
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let cfg: Self = serde_json::from_slice(bytes)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let lengths = [
            ("open_kernel_px", self.open_kernel_px),
            ("close_kernel_px", self.close_kernel_px),
            ("hv_kernel_len_px", self.hv_kernel_len_px),
            ("hv_kernel_thickness_px", self.hv_kernel_thickness_px),
            ("min_box_side_px", self.min_box_side_px),
            ("min_chunk_area_px", self.min_chunk_area_px),
            ("max_angle_iterations", self.max_angle_iterations),
        ];
        for (name, v) in lengths {
            if v == 0 {
                return Err(invalid(format!("{name} must be > 0")));
            }
        }
        for (name, v) in [
            ("open_kernel_px", self.open_kernel_px),
            ("close_kernel_px", self.close_kernel_px),
            ("hv_kernel_len_px", self.hv_kernel_len_px),
            ("hv_kernel_thickness_px", self.hv_kernel_thickness_px),
        ] {
            if v % 2 == 0 {
                return Err(invalid(format!("{name} must be odd, got {v}")));
            }
        }
        let positive = [
            ("hough_theta_res_deg", self.hough_theta_res_deg),
            ("hough_rho_res_px", self.hough_rho_res_px),
            ("angle_merge_tol_deg", self.angle_merge_tol_deg),
            ("tilt_tol_deg", self.tilt_tol_deg),
            ("pixel_scale_m_per_px", self.pixel_scale_m_per_px),
            ("wall_height_m", self.wall_height_m),
            ("door_height_m", self.door_height_m),
            ("window_height_m", self.window_height_m),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be > 0, got {v}")));
            }
        }
        if !(self.blur_sigma >= 0.0) {
            return Err(invalid("blur_sigma must be >= 0"));
        }
        if !(self.window_sill_m >= 0.0) {
            return Err(invalid("window_sill_m must be >= 0"));
        }
        if !(self.canny_low >= 0.0 && self.canny_low <= self.canny_high) {
            return Err(invalid("canny thresholds must satisfy 0 <= low <= high"));
        }
        for (name, v) in [
            ("hough_min_votes_frac", self.hough_min_votes_frac),
            ("angle_peak_min_frac", self.angle_peak_min_frac),
            ("shrink_iou_target", self.shrink_iou_target),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(invalid(format!("{name} must lie in (0, 1], got {v}")));
            }
        }
        if !(self.blur_threshold > 0.0 && self.blur_threshold < 1.0) {
            return Err(invalid("blur_threshold must lie in (0, 1)"));
        }
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&json);
        hex::encode(&digest[..8])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_json_takes_defaults() {
        let cfg = PipelineConfig::from_json(br#"{"tilt_tol_deg": 5.0}"#).unwrap();
        assert_eq!(cfg.tilt_tol_deg, 5.0);
        assert_eq!(cfg.hv_kernel_len_px, 11);
    }

    #[test]
    fn unknown_field_is_an_error() {
        assert!(PipelineConfig::from_json(br#"{"tilt_tol": 5.0}"#).is_err());
    }

    #[test]
    fn invalid_values_rejected() {
        assert!(PipelineConfig::from_json(br#"{"open_kernel_px": 4}"#).is_err());
        assert!(PipelineConfig::from_json(br#"{"shrink_iou_target": 1.5}"#).is_err());
        assert!(PipelineConfig::from_json(br#"{"canny_low": 200}"#).is_err());
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = PipelineConfig::default();
        assert_eq!(a.hash(), PipelineConfig::default().hash());
        assert_eq!(a.hash().len(), 16);
        let b = PipelineConfig {
            tilt_tol_deg: 4.0,
            ..a.clone()
        };
        assert_ne!(a.hash(), b.hash());
    }
}
