use super::mask::BinaryMask;

/// Rotation about the origin by `angle_deg`, in pixel coordinates (x right,
/// y down), as the matrix `[cos -sin; sin cos]`.
pub fn rotate_point(p: (f64, f64), angle_deg: f64) -> (f64, f64) {
    let (s, c) = sin_cos_deg(angle_deg);
    (c * p.0 - s * p.1, s * p.0 + c * p.1)
}

/// `sin`/`cos` with exact values at multiples of 90°.
pub fn sin_cos_deg(angle_deg: f64) -> (f64, f64) {
    let q = angle_deg / 90.0;
    if q == q.round() {
        match (q as i64).rem_euclid(4) {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        }
    } else {
        angle_deg.to_radians().sin_cos()
    }
}

/// Forward (input → output) and inverse (output → input) affine maps of a
/// mask rotation, each stored as a row-major 2×3 matrix acting on continuous
/// pixel coordinates (pixel `(x, y)` spans `[x, x+1) × [y, y+1)`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap {
    pub forward: [[f64; 3]; 2],
    pub inverse: [[f64; 3]; 2],
}

impl AffineMap {
    pub fn identity() -> Self {
        let m = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        Self {
            forward: m,
            inverse: m,
        }
    }

    fn apply(m: &[[f64; 3]; 2], p: (f64, f64)) -> (f64, f64) {
        (
            m[0][0] * p.0 + m[0][1] * p.1 + m[0][2],
            m[1][0] * p.0 + m[1][1] * p.1 + m[1][2],
        )
    }

    /// Input coordinates → rotated canvas coordinates.
    pub fn to_output(&self, p: (f64, f64)) -> (f64, f64) {
        Self::apply(&self.forward, p)
    }

    /// Rotated canvas coordinates → input coordinates.
    pub fn to_input(&self, q: (f64, f64)) -> (f64, f64) {
        Self::apply(&self.inverse, q)
    }

    /// `forward ∘ inverse` as a 2×3 matrix.
    pub fn compose_check(&self) -> [[f64; 3]; 2] {
        let f = &self.forward;
        let i = &self.inverse;
        let mut out = [[0.0; 3]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = f[r][0] * i[0][c] + f[r][1] * i[1][c];
            }
            out[r][2] = f[r][0] * i[0][2] + f[r][1] * i[1][2] + f[r][2];
        }
        out
    }
}

/// Rotates a mask by `angle_deg` about the origin onto a canvas just large
/// enough to hold the whole rotated extent, sampling nearest-neighbor.
///
/// The canvas is shifted by a whole number of pixels, so output pixel
/// boundaries fall on the integer lattice of the rotated coordinate frame.
pub fn rotate(mask: &BinaryMask, angle_deg: f64) -> (BinaryMask, AffineMap) {
    let (w, h) = mask.dims();
    let (s, c) = sin_cos_deg(angle_deg);
    let (wf, hf) = (w as f64, h as f64);
    let corners = [(0.0, 0.0), (wf, 0.0), (0.0, hf), (wf, hf)].map(|p| rotate_point(p, angle_deg));
    let lo = |f: fn(&(f64, f64)) -> f64| corners.iter().map(f).fold(f64::INFINITY, f64::min);
    let hi = |f: fn(&(f64, f64)) -> f64| corners.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
    let tx = -(lo(|p| p.0) + 1e-9).floor();
    let ty = -(lo(|p| p.1) + 1e-9).floor();
    let out_w = (hi(|p| p.0) + tx - 1e-9).ceil().max(0.0) as usize;
    let out_h = (hi(|p| p.1) + ty - 1e-9).ceil().max(0.0) as usize;

    // q = R p + t;  p = Rᵀ (q - t)
    let rt = rotate_point((tx, ty), -angle_deg);
    let map = AffineMap {
        forward: [[c, -s, tx], [s, c, ty]],
        inverse: [[c, s, -rt.0], [-s, c, -rt.1]],
    };

    let out = BinaryMask::from_fn(out_w, out_h, |x, y| {
        let (px, py) = map.to_input((x as f64 + 0.5, y as f64 + 0.5));
        let (fx, fy) = (px.floor(), py.floor());
        fx >= 0.0 && fy >= 0.0 && fx < wf && fy < hf && mask.get(fx as usize, fy as usize)
    });
    (out, map)
}
