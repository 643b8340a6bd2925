//! Ingestion, metrics, visualization and the synthetic plan generator.

mod load;
mod metrics;
mod svg;
mod synth;

use serde::{Deserialize, Serialize};

pub use crate::wall::rasterize_walls;
pub use load::{encode_pgm, load_gray, load_mask, load_symbols, MaskFormat, FOREGROUND_THRESHOLD};
pub use metrics::{
    crop_to_extent, iou_counts, mean_iou, mean_iou_gray_crop, Cropped, MetricsReport, CROP_PAD_PX,
};
pub use svg::emit_svg;
pub use synth::{synth_plan, SynthPlan, SynthSpec};

use crate::wall::WallBox;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpeningKind {
    Door,
    Window,
}

impl OpeningKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OpeningKind::Door => "door",
            OpeningKind::Window => "window",
        }
    }
}

/// A detected door or window: axis-aligned bbox in image pixels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpeningSymbol {
    pub kind: OpeningKind,
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
}

fn default_confidence() -> f64 {
    1.0
}

impl OpeningSymbol {
    pub fn new(kind: OpeningKind, x: f64, y: f64, w: f64, h: f64) -> Self {
        Self {
            kind,
            x,
            y,
            w,
            h,
            confidence: 1.0,
        }
    }

    pub fn center(&self) -> (f64, f64) {
        (self.x + self.w / 2.0, self.y + self.h / 2.0)
    }

    pub fn validate(&self) -> Result<(), String> {
        if ![self.x, self.y, self.w, self.h, self.confidence]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err("non-finite coordinate".into());
        }
        if self.w <= 0.0 || self.h <= 0.0 {
            return Err(format!("bbox must have w > 0 and h > 0, got {}x{}", self.w, self.h));
        }
        if !(0.0..=1.0).contains(&self.confidence) {
            return Err(format!("confidence {} outside [0, 1]", self.confidence));
        }
        Ok(())
    }
}

/// The vectorized plan: walls and the symbols that came with the mask.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PlanVectorization {
    pub source_width: usize,
    pub source_height: usize,
    pub walls: Vec<WallBox>,
    pub symbols: Vec<OpeningSymbol>,
    pub diagnostics: Vec<String>,
}

impl PlanVectorization {
    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("plan serializes");
        out.push(b'\n');
        out
    }

    pub fn from_json(bytes: &[u8]) -> crate::Result<Self> {
        let plan: Self = serde_json::from_slice(bytes)?;
        let mut ids = std::collections::HashSet::new();
        for w in &plan.walls {
            if !w.is_valid() {
                return Err(crate::error::invalid(format!("wall {} is malformed", w.id)));
            }
            if !ids.insert(w.id) {
                return Err(crate::error::invalid(format!("duplicate wall id {}", w.id)));
            }
        }
        for (index, s) in plan.symbols.iter().enumerate() {
            s.validate()
                .map_err(|message| crate::Error::Symbol { index, message })?;
        }
        Ok(plan)
    }
}
