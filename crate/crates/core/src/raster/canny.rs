//! Canny edge detection: Gaussian smoothing, Sobel gradients, non-maximum
//! suppression along the quantized gradient direction and double-threshold
//! hysteresis with 8-connected growth.

use super::blur::{convolve_separable, gaussian_kernel_1d};
use super::mask::{BinaryMask, GrayImage};

const SMOOTHING_SIGMA: f64 = 1.0;

pub fn canny(image: &GrayImage, low: f64, high: f64) -> BinaryMask {
    let (w, h) = image.dims();
    if w == 0 || h == 0 {
        return BinaryMask::new(w, h);
    }
    let plane: Vec<f64> = image.data().iter().map(|&v| v as f64).collect();
    let smooth = convolve_separable(&plane, w, h, &gaussian_kernel_1d(SMOOTHING_SIGMA), true);

    let at = |x: i64, y: i64| -> f64 {
        let x = x.clamp(0, w as i64 - 1) as usize;
        let y = y.clamp(0, h as i64 - 1) as usize;
        smooth[y * w + x]
    };

    let mut mag = vec![0.0f64; w * h];
    // 0: horizontal gradient, 1: 45°, 2: vertical, 3: 135°
    let mut dir = vec![0u8; w * h];
    for y in 0..h as i64 {
        for x in 0..w as i64 {
            let gx = (at(x + 1, y - 1) + 2.0 * at(x + 1, y) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2.0 * at(x - 1, y) + at(x - 1, y + 1));
            let gy = (at(x - 1, y + 1) + 2.0 * at(x, y + 1) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2.0 * at(x, y - 1) + at(x + 1, y - 1));
            let i = y as usize * w + x as usize;
            mag[i] = gx.hypot(gy);
            let mut angle = gy.atan2(gx).to_degrees();
            if angle < 0.0 {
                angle += 180.0;
            }
            dir[i] = if !(22.5..157.5).contains(&angle) {
                0
            } else if angle < 67.5 {
                1
            } else if angle < 112.5 {
                2
            } else {
                3
            };
        }
    }

    let mag_at = |x: i64, y: i64| -> f64 {
        if x < 0 || y < 0 || x >= w as i64 || y >= h as i64 {
            0.0
        } else {
            mag[y as usize * w + x as usize]
        }
    };

    // Ties along the gradient keep the pixel on the negative side so a
    // symmetric ridge yields a single-pixel line.
    let mut thin = vec![0.0f64; w * h];
    for y in 0..h as i64 {
        for x in 0..w as i64 {
            let i = y as usize * w + x as usize;
            let m = mag[i];
            if m <= 0.0 {
                continue;
            }
            let (dx, dy) = match dir[i] {
                0 => (1, 0),
                1 => (1, 1),
                2 => (0, 1),
                _ => (-1, 1),
            };
            let before = mag_at(x - dx, y - dy);
            let after = mag_at(x + dx, y + dy);
            if m > before && m >= after {
                thin[i] = m;
            }
        }
    }

    let mut edges = BinaryMask::new(w, h);
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if thin[y * w + x] >= high && !edges.get(x, y) {
                edges.set(x, y, true);
                stack.push((x, y));
                while let Some((cx, cy)) = stack.pop() {
                    for ny in cy.saturating_sub(1)..=(cy + 1).min(h - 1) {
                        for nx in cx.saturating_sub(1)..=(cx + 1).min(w - 1) {
                            if !edges.get(nx, ny) && thin[ny * w + nx] >= low {
                                edges.set(nx, ny, true);
                                stack.push((nx, ny));
                            }
                        }
                    }
                }
            }
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_image_has_no_edges() {
        let img = GrayImage::from_fn(32, 32, |_, _| 200);
        assert!(canny(&img, 50.0, 150.0).is_empty());
    }

    #[test]
    fn vertical_step_gives_single_column() {
        let img = GrayImage::from_fn(64, 48, |x, _| if x < 32 { 0 } else { 255 });
        let edges = canny(&img, 50.0, 150.0);
        let cols: std::collections::BTreeSet<usize> = edges.foreground().map(|(x, _)| x).collect();
        assert_eq!(cols.len(), 1, "edge columns {cols:?}");
        let col = *cols.iter().next().unwrap();
        assert!(col == 31 || col == 32);
        // the line is unbroken
        assert_eq!(edges.count(), 48);
    }

    #[test]
    fn rectangle_ring_hugs_perimeter() {
        let (x0, y0, x1, y1) = (22i64, 22i64, 41i64, 41i64);
        let img = GrayImage::from_fn(64, 64, |x, y| {
            let (x, y) = (x as i64, y as i64);
            if (x0..=x1).contains(&x) && (y0..=y1).contains(&y) {
                255
            } else {
                0
            }
        });
        let edges = canny(&img, 50.0, 150.0);
        assert!(!edges.is_empty());
        // every edge pixel lies within 1 px of the pixel-boundary perimeter
        let dist = |x: i64, y: i64| -> f64 {
            let (fx, fy) = (x as f64 + 0.5, y as f64 + 0.5);
            let (l, t, r, b) = (x0 as f64, y0 as f64, x1 as f64 + 1.0, y1 as f64 + 1.0);
            let dx = if fx < l { l - fx } else if fx > r { fx - r } else { 0.0 };
            let dy = if fy < t { t - fy } else if fy > b { fy - b } else { 0.0 };
            if dx > 0.0 || dy > 0.0 {
                dx.hypot(dy)
            } else {
                (fx - l).min(r - fx).min(fy - t).min(b - fy)
            }
        };
        for (x, y) in edges.foreground() {
            assert!(dist(x as i64, y as i64) <= 1.0, "edge pixel ({x},{y}) too far");
        }
        // and every perimeter position has an edge pixel within 1 px
        for t in x0..=x1 {
            for &(px, py) in &[(t, y0), (t, y1), (x0, t), (x1, t)] {
                let hit = (-1..=1).any(|dy| {
                    (-1..=1).any(|dx| edges.get_signed(px + dx, py + dy))
                });
                assert!(hit, "perimeter gap near ({px},{py})");
            }
        }
    }
}
