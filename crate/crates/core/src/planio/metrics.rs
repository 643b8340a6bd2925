use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::raster::{BinaryMask, GrayImage, PixelRect};

/// Evaluation output; absent metrics are omitted from the JSON.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mask_iou: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vectorized_iou: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_count: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub diagnostics: Vec<String>,
}

/// `(|a ∩ b|, |a ∪ b|)`.
pub fn iou_counts(a: &BinaryMask, b: &BinaryMask) -> Result<(u64, u64)> {
    if a.dims() != b.dims() {
        return Err(invalid(format!(
            "mask dimensions differ: {:?} vs {:?}",
            a.dims(),
            b.dims()
        )));
    }
    let (mut inter, mut union) = (0u64, 0u64);
    for (&p, &q) in a.data().iter().zip(b.data()) {
        inter += (p && q) as u64;
        union += (p || q) as u64;
    }
    Ok((inter, union))
}

/// Intersection over union of two equally sized masks. Two empty masks
/// agree perfectly and score 1.
pub fn mean_iou(pred: &BinaryMask, gt: &BinaryMask) -> Result<f64> {
    let (inter, union) = iou_counts(pred, gt)?;
    Ok(if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    })
}

pub const CROP_PAD_PX: usize = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct Cropped<T> {
    pub image: T,
    pub gt: BinaryMask,
    pub rect: PixelRect,
    pub diagnostic: Option<String>,
}

/// Things `crop_to_extent` can crop.
pub trait Croppable: Sized {
    fn dims(&self) -> (usize, usize);
    fn crop_rect(&self, r: PixelRect) -> Self;
}

impl Croppable for BinaryMask {
    fn dims(&self) -> (usize, usize) {
        BinaryMask::dims(self)
    }
    fn crop_rect(&self, r: PixelRect) -> Self {
        self.crop(r)
    }
}

impl Croppable for GrayImage {
    fn dims(&self) -> (usize, usize) {
        GrayImage::dims(self)
    }
    fn crop_rect(&self, r: PixelRect) -> Self {
        self.crop(r)
    }
}

/// Crops both inputs to the ground-truth foreground bbox grown by
/// [`CROP_PAD_PX`] and clamped to the canvas.
pub fn crop_to_extent<T: Croppable + Clone>(image: &T, gt: &BinaryMask) -> Result<Cropped<T>> {
    if image.dims() != gt.dims() {
        return Err(invalid(format!(
            "image {:?} and ground truth {:?} differ in size",
            image.dims(),
            gt.dims()
        )));
    }
    let (w, h) = gt.dims();
    let Some(bb) = gt.bbox() else {
        return Ok(Cropped {
            image: image.clone(),
            gt: gt.clone(),
            rect: PixelRect { x: 0, y: 0, w, h },
            diagnostic: Some("ground truth is empty; nothing cropped".into()),
        });
    };
    let x0 = bb.x.saturating_sub(CROP_PAD_PX);
    let y0 = bb.y.saturating_sub(CROP_PAD_PX);
    let x1 = (bb.right() + CROP_PAD_PX).min(w);
    let y1 = (bb.bottom() + CROP_PAD_PX).min(h);
    let rect = PixelRect {
        x: x0,
        y: y0,
        w: x1 - x0,
        h: y1 - y0,
    };
    Ok(Cropped {
        image: image.crop_rect(rect),
        gt: gt.crop(rect),
        rect,
        diagnostic: None,
    })
}

/// Thresholds a grayscale prediction after cropping it to the truth extent.
pub fn mean_iou_gray_crop(pred: &GrayImage, gt: &BinaryMask, threshold: u8) -> Result<f64> {
    let c = crop_to_extent(pred, gt)?;
    mean_iou(&c.image.threshold(threshold), &c.gt)
}
