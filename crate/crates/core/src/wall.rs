use serde::{Deserialize, Serialize};

use crate::raster::{rotate_point, sin_cos_deg, BinaryMask};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Horizontal,
    Vertical,
}

impl Orientation {
    /// Horizontal iff `w >= h`.
    pub fn of(w: f64, h: f64) -> Self {
        if w >= h {
            Orientation::Horizontal
        } else {
            Orientation::Vertical
        }
    }
}

/// A vectorized wall: the axis-aligned box `(x, y, w, h)` in a frame rotated
/// by `frame_angle_deg`.
///
/// Frame coordinates `u` relate to image pixel coordinates `p` (x right,
/// y down) by `u = R(-θ) p` with `R(θ) = [cos -sin; sin cos]`, so a frame
/// angle of zero is the image frame itself.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WallBox {
    pub id: u32,
    pub frame_angle_deg: f64,
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
    pub orientation: Orientation,
}

impl WallBox {
    pub fn new(id: u32, frame_angle_deg: f64, x: f64, y: f64, w: f64, h: f64) -> Self {
        Self {
            id,
            frame_angle_deg,
            x,
            y,
            w,
            h,
            orientation: Orientation::of(w, h),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.w > 0.0
            && self.h > 0.0
            && (0.0..90.0).contains(&self.frame_angle_deg)
            && self.orientation == Orientation::of(self.w, self.h)
    }

    pub fn length(&self) -> f64 {
        self.w.max(self.h)
    }

    pub fn thickness(&self) -> f64 {
        self.w.min(self.h)
    }

    /// Image point → frame point.
    pub fn to_frame(&self, p: (f64, f64)) -> (f64, f64) {
        rotate_point(p, -self.frame_angle_deg)
    }

    /// Frame point → image point.
    pub fn to_image(&self, u: (f64, f64)) -> (f64, f64) {
        rotate_point(u, self.frame_angle_deg)
    }

    /// Half-open containment in frame coordinates.
    pub fn contains_frame(&self, u: (f64, f64)) -> bool {
        u.0 >= self.x && u.0 < self.x + self.w && u.1 >= self.y && u.1 < self.y + self.h
    }

    /// Whether the center of image pixel `(px, py)` lies inside the box.
    pub fn covers_pixel(&self, px: usize, py: usize) -> bool {
        self.covers_pixel_signed(px as i64, py as i64)
    }

    /// [`covers_pixel`](Self::covers_pixel) for pixels that may lie off the
    /// canvas.
    pub fn covers_pixel_signed(&self, px: i64, py: i64) -> bool {
        self.contains_frame(self.to_frame((px as f64 + 0.5, py as f64 + 0.5)))
    }

    /// Footprint corners in image coordinates, ordered start, end along the
    /// long axis, then back across the thickness.
    pub fn corners(&self) -> [(f64, f64); 4] {
        let (x0, y0, x1, y1) = (self.x, self.y, self.x + self.w, self.y + self.h);
        let frame = match self.orientation {
            Orientation::Horizontal => [(x0, y0), (x1, y0), (x1, y1), (x0, y1)],
            Orientation::Vertical => [(x0, y0), (x0, y1), (x1, y1), (x1, y0)],
        };
        frame.map(|u| self.to_image(u))
    }

    /// Unit vector of the long axis in image coordinates.
    pub fn axis(&self) -> (f64, f64) {
        let (s, c) = sin_cos_deg(self.frame_angle_deg);
        match self.orientation {
            Orientation::Horizontal => (c, s),
            Orientation::Vertical => (-s, c),
        }
    }

    /// Position of an image point along the long axis, measured from the
    /// wall start.
    pub fn along(&self, p: (f64, f64)) -> f64 {
        let u = self.to_frame(p);
        match self.orientation {
            Orientation::Horizontal => u.0 - self.x,
            Orientation::Vertical => u.1 - self.y,
        }
    }

    /// Inclusive-exclusive integer pixel bounds of the footprint, clipped to
    /// a `width × height` canvas: `(x0, y0, x1, y1)`.
    pub fn pixel_bounds(&self, width: usize, height: usize) -> (usize, usize, usize, usize) {
        let c = self.corners();
        let xs = c.iter().map(|p| p.0);
        let ys = c.iter().map(|p| p.1);
        let xmin = xs.clone().fold(f64::MAX, f64::min).floor().max(0.0);
        let xmax = xs.fold(f64::MIN, f64::max).ceil().max(0.0);
        let ymin = ys.clone().fold(f64::MAX, f64::min).floor().max(0.0);
        let ymax = ys.fold(f64::MIN, f64::max).ceil().max(0.0);
        (
            (xmin as usize).min(width),
            (ymin as usize).min(height),
            (xmax as usize).min(width),
            (ymax as usize).min(height),
        )
    }
}

/// Union of the walls rasterized by pixel-center inclusion, clipped to a
/// `width × height` canvas.
pub fn rasterize_walls(walls: &[WallBox], width: usize, height: usize) -> BinaryMask {
    let mut out = BinaryMask::new(width, height);
    for b in walls {
        let (x0, y0, x1, y1) = b.pixel_bounds(width, height);
        for y in y0..y1 {
            for x in x0..x1 {
                if b.covers_pixel(x, y) {
                    out.set(x, y, true);
                }
            }
        }
    }
    out
}
