//! Binary morphology with rectangular structuring elements.
//!
//! Pixels outside the image are background. Rectangular kernels are
//! separable, so every operation runs as a horizontal pass followed by a
//! vertical pass with running window counts.

use super::mask::{BinaryMask, PixelRect};
use crate::error::{invalid, Result};

/// Rectangular structuring element anchored at its center.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Kernel {
    width: usize,
    height: usize,
}

impl Kernel {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 || width % 2 == 0 || height % 2 == 0 {
            return Err(invalid(format!(
                "kernel dimensions must be odd and positive, got {width}x{height}"
            )));
        }
        Ok(Self { width, height })
    }

    pub fn square(side: usize) -> Result<Self> {
        Self::new(side, side)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    fn rx(&self) -> usize {
        self.width / 2
    }

    fn ry(&self) -> usize {
        self.height / 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MorphOp {
    Erode,
    Dilate,
    Open,
    Close,
}

pub fn morph(mask: &BinaryMask, op: MorphOp, kernel: Kernel) -> BinaryMask {
    match op {
        MorphOp::Erode => erode(mask, kernel),
        MorphOp::Dilate => dilate(mask, kernel),
        MorphOp::Open => open(mask, kernel),
        MorphOp::Close => close(mask, kernel),
    }
}

pub fn erode(mask: &BinaryMask, kernel: Kernel) -> BinaryMask {
    let rows = pass_rows(mask, kernel.rx(), Pass::All);
    pass_cols(&rows, kernel.ry(), Pass::All)
}

pub fn dilate(mask: &BinaryMask, kernel: Kernel) -> BinaryMask {
    let rows = pass_rows(mask, kernel.rx(), Pass::Any);
    pass_cols(&rows, kernel.ry(), Pass::Any)
}

pub fn open(mask: &BinaryMask, kernel: Kernel) -> BinaryMask {
    dilate(&erode(mask, kernel), kernel)
}

/// Closing evaluated on the unbounded background plane: the dilation may
/// spill past the canvas before the erosion pulls it back, so foreground
/// touching the border is preserved and `mask ⊆ close(mask)` holds.
pub fn close(mask: &BinaryMask, kernel: Kernel) -> BinaryMask {
    let (px, py) = (kernel.rx(), kernel.ry());
    let (w, h) = mask.dims();
    let padded = BinaryMask::from_fn(w + 2 * px, h + 2 * py, |x, y| {
        x >= px && y >= py && x < w + px && y < h + py && mask.get(x - px, y - py)
    });
    let closed = erode(&dilate(&padded, kernel), kernel);
    closed.crop(PixelRect::new(px, py, w, h))
}

#[derive(Clone, Copy)]
enum Pass {
    /// Erosion: every pixel of the window must be foreground.
    All,
    /// Dilation: any pixel of the window.
    Any,
}

fn window_hit(count: usize, window: usize, pass: Pass) -> bool {
    match pass {
        Pass::All => count == window,
        Pass::Any => count > 0,
    }
}

fn pass_rows(mask: &BinaryMask, r: usize, pass: Pass) -> BinaryMask {
    let (w, h) = mask.dims();
    if r == 0 {
        return mask.clone();
    }
    let window = 2 * r + 1;
    let mut out = Vec::with_capacity(w * h);
    let mut prefix = vec![0usize; w + 1];
    for y in 0..h {
        for x in 0..w {
            prefix[x + 1] = prefix[x] + mask.get(x, y) as usize;
        }
        for x in 0..w {
            let lo = x.saturating_sub(r);
            let hi = (x + r + 1).min(w);
            out.push(window_hit(prefix[hi] - prefix[lo], window, pass));
        }
    }
    BinaryMask::from_vec(w, h, out)
}

fn pass_cols(mask: &BinaryMask, r: usize, pass: Pass) -> BinaryMask {
    let (w, h) = mask.dims();
    if r == 0 {
        return mask.clone();
    }
    let window = 2 * r + 1;
    let mut out = vec![false; w * h];
    let mut prefix = vec![0usize; h + 1];
    for x in 0..w {
        for y in 0..h {
            prefix[y + 1] = prefix[y] + mask.get(x, y) as usize;
        }
        for y in 0..h {
            let lo = y.saturating_sub(r);
            let hi = (y + r + 1).min(h);
            out[y * w + x] = window_hit(prefix[hi] - prefix[lo], window, pass);
        }
    }
    BinaryMask::from_vec(w, h, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Direct neighborhood scan, background outside the canvas.
    fn brute(mask: &BinaryMask, k: Kernel, erode: bool) -> BinaryMask {
        let (rx, ry) = (k.rx() as i64, k.ry() as i64);
        BinaryMask::from_fn(mask.width(), mask.height(), |x, y| {
            let mut all = true;
            let mut any = false;
            for dy in -ry..=ry {
                for dx in -rx..=rx {
                    let v = mask.get_signed(x as i64 + dx, y as i64 + dy);
                    all &= v;
                    any |= v;
                }
            }
            if erode {
                all
            } else {
                any
            }
        })
    }

    fn arb_mask() -> impl Strategy<Value = BinaryMask> {
        (1usize..24, 1usize..24).prop_flat_map(|(w, h)| {
            proptest::collection::vec(proptest::bool::weighted(0.6), w * h)
                .prop_map(move |d| BinaryMask::from_vec(w, h, d))
        })
    }

    fn arb_kernel() -> impl Strategy<Value = Kernel> {
        (0usize..4, 0usize..4).prop_map(|(a, b)| Kernel::new(2 * a + 1, 2 * b + 1).unwrap())
    }

    #[test]
    fn even_kernel_rejected() {
        assert!(Kernel::new(2, 3).is_err());
        assert!(Kernel::new(3, 0).is_err());
        assert!(Kernel::square(5).is_ok());
    }

    #[test]
    fn open_removes_isolated_pixel() {
        let mut m = BinaryMask::new(5, 5);
        m.set(2, 2, true);
        assert!(open(&m, Kernel::square(3).unwrap()).is_empty());
    }

    #[test]
    fn close_fills_interior_hole() {
        let mut m = BinaryMask::filled(5, 5);
        m.set(2, 2, false);
        assert_eq!(close(&m, Kernel::square(3).unwrap()), BinaryMask::filled(5, 5));
    }

    #[test]
    fn unit_kernel_is_identity() {
        let m = BinaryMask::from_ascii(&["#.#", ".##", "#.."]);
        let k = Kernel::square(1).unwrap();
        for op in [MorphOp::Erode, MorphOp::Dilate, MorphOp::Open, MorphOp::Close] {
            assert_eq!(morph(&m, op, k), m);
        }
    }

    #[test]
    fn border_pixels_do_not_grow() {
        let m = BinaryMask::from_ascii(&["###..", "###..", "###.."]);
        let k = Kernel::square(3).unwrap();
        assert_eq!(open(&m, k), m);
        assert_eq!(close(&m, k), m);
    }

    proptest! {
        #[test]
        fn separable_passes_match_brute_force(m in arb_mask(), k in arb_kernel()) {
            prop_assert_eq!(erode(&m, k), brute(&m, k, true));
            prop_assert_eq!(dilate(&m, k), brute(&m, k, false));
        }

        #[test]
        fn duality_away_from_border(m in arb_mask(), k in arb_kernel()) {
            let d = dilate(&m, k);
            let e = erode(&m.complement(), k).complement();
            for y in k.ry()..m.height().saturating_sub(k.ry()) {
                for x in k.rx()..m.width().saturating_sub(k.rx()) {
                    prop_assert_eq!(d.get(x, y), e.get(x, y));
                }
            }
        }

        #[test]
        fn open_close_idempotent(m in arb_mask(), k in arb_kernel()) {
            let o = open(&m, k);
            prop_assert_eq!(open(&o, k), o);
            let c = close(&m, k);
            prop_assert_eq!(close(&c, k), c);
        }

        #[test]
        fn open_shrinks_close_grows(m in arb_mask(), k in arb_kernel()) {
            prop_assert!(open(&m, k).is_subset_of(&m));
            prop_assert!(m.is_subset_of(&close(&m, k)));
        }
    }
}
