//! 8-connected component labeling and outer-border following.
//!
//! The border follower is the outer-border case of Suzuki & Abe's algorithm:
//! start at the first pixel of a component in raster order (its west
//! neighbor is background), then repeatedly search the 8-neighborhood
//! counter-clockwise from the previous border pixel.

use super::mask::{BinaryMask, PixelRect};

/// Closed external boundary; the last point connects back to the first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contour {
    pub points: Vec<(i64, i64)>,
}

#[derive(Clone, Debug)]
pub struct Component {
    /// Pixels of this component only, cropped to `bbox`.
    pub mask: BinaryMask,
    pub contour: Contour,
    pub bbox: PixelRect,
    pub area: usize,
}

// Counter-clockwise on screen (y down): E, NE, N, NW, W, SW, S, SE.
const DIRS: [(i64, i64); 8] = [
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

fn dir_index(from: (i64, i64), to: (i64, i64)) -> usize {
    let d = (to.0 - from.0, to.1 - from.1);
    DIRS.iter().position(|&x| x == d).expect("not an 8-neighbor")
}

/// Labels 8-connected components; returns a label image (0 = background)
/// and the component count. Labels follow raster order of first pixels.
pub fn label(mask: &BinaryMask) -> (Vec<u32>, usize) {
    let (w, h) = mask.dims();
    let mut labels = vec![0u32; w * h];
    let mut next = 0u32;
    let mut stack = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if !mask.get(x, y) || labels[y * w + x] != 0 {
                continue;
            }
            next += 1;
            labels[y * w + x] = next;
            stack.push((x, y));
            while let Some((cx, cy)) = stack.pop() {
                for ny in cy.saturating_sub(1)..=(cy + 1).min(h - 1) {
                    for nx in cx.saturating_sub(1)..=(cx + 1).min(w - 1) {
                        let i = ny * w + nx;
                        if mask.get(nx, ny) && labels[i] == 0 {
                            labels[i] = next;
                            stack.push((nx, ny));
                        }
                    }
                }
            }
        }
    }
    (labels, next as usize)
}

/// Traces the outer border of the component containing `start`, which must
/// be its first pixel in raster order. Coordinates are those of `mask`.
pub fn trace_outer(mask: &BinaryMask, start: (usize, usize)) -> Contour {
    let fg = |p: (i64, i64)| mask.get_signed(p.0, p.1);
    let s = (start.0 as i64, start.1 as i64);

    // clockwise search from the west neighbor for the first foreground pixel
    let west = dir_index(s, (s.0 - 1, s.1));
    let mut first = None;
    for k in 0..8 {
        let d = DIRS[(west + 8 - k) % 8];
        let p = (s.0 + d.0, s.1 + d.1);
        if fg(p) {
            first = Some(p);
            break;
        }
    }
    let Some(p1) = first else {
        return Contour { points: vec![s] };
    };

    let mut points = Vec::new();
    let (mut prev, mut cur) = (p1, s);
    loop {
        // counter-clockwise from the element after `prev`
        let base = dir_index(cur, prev);
        let mut next = prev;
        for k in 1..=8 {
            let d = DIRS[(base + k) % 8];
            let p = (cur.0 + d.0, cur.1 + d.1);
            if fg(p) {
                next = p;
                break;
            }
        }
        points.push(cur);
        if next == s && cur == p1 {
            break;
        }
        prev = cur;
        cur = next;
    }
    Contour { points }
}

/// One entry per 8-connected component, in raster order of first pixels.
pub fn components(mask: &BinaryMask) -> Vec<Component> {
    let (w, _) = mask.dims();
    let (labels, n) = label(mask);
    if n == 0 {
        return Vec::new();
    }
    let mut first = vec![None; n];
    let mut bounds = vec![(usize::MAX, usize::MAX, 0usize, 0usize); n];
    let mut areas = vec![0usize; n];
    for (i, &l) in labels.iter().enumerate() {
        if l == 0 {
            continue;
        }
        let k = l as usize - 1;
        let (x, y) = (i % w, i / w);
        first[k].get_or_insert((x, y));
        let b = &mut bounds[k];
        b.0 = b.0.min(x);
        b.1 = b.1.min(y);
        b.2 = b.2.max(x);
        b.3 = b.3.max(y);
        areas[k] += 1;
    }
    (0..n)
        .map(|k| {
            let (x0, y0, x1, y1) = bounds[k];
            let bbox = PixelRect::new(x0, y0, x1 - x0 + 1, y1 - y0 + 1);
            let lab = k as u32 + 1;
            let cmask = BinaryMask::from_fn(bbox.w, bbox.h, |x, y| {
                labels[(y + y0) * w + x + x0] == lab
            });
            let (sx, sy) = first[k].unwrap();
            let local = trace_outer(&cmask, (sx - x0, sy - y0));
            let contour = Contour {
                points: local
                    .points
                    .into_iter()
                    .map(|(x, y)| (x + x0 as i64, y + y0 as i64))
                    .collect(),
            };
            Component {
                mask: cmask,
                contour,
                bbox,
                area: areas[k],
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Pixels 4-adjacent to background reachable from outside the canvas.
    fn outer_border_pixels(mask: &BinaryMask) -> usize {
        let (w, h) = (mask.width() as i64 + 2, mask.height() as i64 + 2);
        let mut outside = vec![false; (w * h) as usize];
        let fg = |x: i64, y: i64| mask.get_signed(x - 1, y - 1);
        let mut stack = vec![(0i64, 0i64)];
        outside[0] = true;
        while let Some((x, y)) = stack.pop() {
            for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w || ny >= h {
                    continue;
                }
                let i = (ny * w + nx) as usize;
                if !outside[i] && !fg(nx, ny) {
                    outside[i] = true;
                    stack.push((nx, ny));
                }
            }
        }
        let mut n = 0;
        for y in 0..h {
            for x in 0..w {
                if fg(x, y)
                    && [(1, 0), (-1, 0), (0, 1), (0, -1)]
                        .iter()
                        .any(|(dx, dy)| outside[((y + dy) * w + x + dx) as usize])
                {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn empty_mask_has_no_components() {
        assert!(components(&BinaryMask::new(8, 8)).is_empty());
    }

    #[test]
    fn two_rectangles() {
        let mut m = BinaryMask::new(30, 20);
        m.fill_rect(PixelRect::new(2, 3, 5, 4), true);
        m.fill_rect(PixelRect::new(15, 10, 8, 6), true);
        let comps = components(&m);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].bbox, PixelRect::new(2, 3, 5, 4));
        assert_eq!(comps[1].bbox, PixelRect::new(15, 10, 8, 6));
        assert_eq!(comps[1].area, 48);
    }

    #[test]
    fn diagonal_touch_is_connected() {
        let m = BinaryMask::from_ascii(&["#..", ".#.", "..#"]);
        assert_eq!(components(&m).len(), 1);
    }

    #[test]
    fn holed_rectangle_contour_traces_outer_perimeter() {
        let mut m = BinaryMask::new(20, 16);
        m.fill_rect(PixelRect::new(3, 2, 12, 10), true);
        m.fill_rect(PixelRect::new(6, 5, 4, 3), false);
        let comps = components(&m);
        assert_eq!(comps.len(), 1);
        let c = &comps[0].contour;
        assert_eq!(c.points.len(), outer_border_pixels(&m));
        assert_eq!(c.points.len(), 2 * (12 + 10) - 4);
        for p in &c.points {
            let on_outer = p.0 == 3 || p.0 == 14 || p.1 == 2 || p.1 == 11;
            assert!(on_outer, "{p:?} is not on the outer border");
        }
    }

    #[test]
    fn single_pixel_and_line() {
        let m = BinaryMask::from_ascii(&["....", ".#..", "...."]);
        assert_eq!(components(&m)[0].contour.points, vec![(1, 1)]);
        let line = BinaryMask::from_ascii(&["####"]);
        // a one-pixel-wide run is walked out and back
        assert_eq!(components(&line)[0].contour.points.len(), 6);
    }

    proptest! {
        #[test]
        fn contour_is_closed_8_path_on_component(
            bits in proptest::collection::vec(proptest::bool::weighted(0.55), 12 * 10),
        ) {
            let m = BinaryMask::from_vec(12, 10, bits);
            let comps = components(&m);
            let total: usize = comps.iter().map(|c| c.area).sum();
            prop_assert_eq!(total, m.count());
            for c in comps {
                let pts = &c.contour.points;
                prop_assert!(!pts.is_empty());
                for (i, p) in pts.iter().enumerate() {
                    let q = pts[(i + 1) % pts.len()];
                    prop_assert!(m.get(p.0 as usize, p.1 as usize));
                    if pts.len() > 1 {
                        prop_assert!((p.0 - q.0).abs() <= 1 && (p.1 - q.1).abs() <= 1 && *p != q);
                    }
                }
            }
        }
    }
}
