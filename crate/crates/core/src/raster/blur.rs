use super::mask::BinaryMask;
use crate::error::{invalid, Result};

/// Normalized 1-D Gaussian truncated at `ceil(3σ)`.
pub fn gaussian_kernel_1d(sigma: f64) -> Vec<f64> {
    if sigma <= 0.0 {
        return vec![1.0];
    }
    let radius = (3.0 * sigma).ceil() as i64;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= sum);
    k
}

/// Separable convolution of a float plane. Out-of-bounds samples read zero,
/// or the nearest edge pixel when `replicate` is set.
pub(crate) fn convolve_separable(
    data: &[f64],
    width: usize,
    height: usize,
    kernel: &[f64],
    replicate: bool,
) -> Vec<f64> {
    let r = (kernel.len() / 2) as i64;
    let sample = |line: &[f64], i: i64| -> f64 {
        let n = line.len() as i64;
        if i < 0 || i >= n {
            if replicate {
                line[i.clamp(0, n - 1) as usize]
            } else {
                0.0
            }
        } else {
            line[i as usize]
        }
    };

    let mut tmp = vec![0.0; width * height];
    for y in 0..height {
        let row = &data[y * width..(y + 1) * width];
        for x in 0..width {
            tmp[y * width + x] = kernel
                .iter()
                .enumerate()
                .map(|(j, kv)| kv * sample(row, x as i64 + j as i64 - r))
                .sum();
        }
    }

    let mut out = vec![0.0; width * height];
    let mut col = vec![0.0; height];
    for x in 0..width {
        for y in 0..height {
            col[y] = tmp[y * width + x];
        }
        for y in 0..height {
            out[y * width + x] = kernel
                .iter()
                .enumerate()
                .map(|(j, kv)| kv * sample(&col, y as i64 + j as i64 - r))
                .sum();
        }
    }
    out
}

/// Gaussian smoothing of a binary mask followed by re-binarization: the mask
/// is lifted to 0/255, blurred with background outside the canvas and kept
/// where the result is at least `threshold * 255`.
pub fn blur_threshold(mask: &BinaryMask, sigma: f64, threshold: f64) -> Result<BinaryMask> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(invalid(format!("blur sigma must be >= 0, got {sigma}")));
    }
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(invalid(format!(
            "blur threshold must lie in (0, 1), got {threshold}"
        )));
    }
    if sigma == 0.0 {
        return Ok(mask.clone());
    }
    let (w, h) = mask.dims();
    let plane: Vec<f64> = mask
        .data()
        .iter()
        .map(|&b| if b { 255.0 } else { 0.0 })
        .collect();
    let blurred = convolve_separable(&plane, w, h, &gaussian_kernel_1d(sigma), false);
    let cut = threshold * 255.0;
    Ok(BinaryMask::from_vec(
        w,
        h,
        blurred.into_iter().map(|v| v >= cut - 1e-9).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct 2-D convolution with the outer-product kernel.
    fn oracle(mask: &BinaryMask, sigma: f64) -> Vec<f64> {
        let r = (3.0 * sigma).ceil() as i64;
        let mut k2 = Vec::new();
        let mut total = 0.0;
        for dy in -r..=r {
            for dx in -r..=r {
                let v = (-((dx * dx + dy * dy) as f64) / (2.0 * sigma * sigma)).exp();
                k2.push((dx, dy, v));
                total += v;
            }
        }
        let (w, h) = mask.dims();
        let mut out = vec![0.0; w * h];
        for y in 0..h {
            for x in 0..w {
                out[y * w + x] = k2
                    .iter()
                    .map(|&(dx, dy, v)| {
                        if mask.get_signed(x as i64 + dx, y as i64 + dy) {
                            255.0 * v / total
                        } else {
                            0.0
                        }
                    })
                    .sum();
            }
        }
        out
    }

    #[test]
    fn kernel_sums_to_one() {
        let k = gaussian_kernel_1d(1.0);
        assert_eq!(k.len(), 7);
        assert!((k.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_sigma_is_identity() {
        let m = BinaryMask::from_ascii(&["#.#", ".#.", "##."]);
        assert_eq!(blur_threshold(&m, 0.0, 0.5).unwrap(), m);
    }

    #[test]
    fn single_pixel_vanishes() {
        let mut m = BinaryMask::new(9, 9);
        m.set(4, 4, true);
        let peak = oracle(&m, 1.0)[4 * 9 + 4];
        assert!(peak < 0.5 * 255.0, "oracle peak {peak}");
        assert!(blur_threshold(&m, 1.0, 0.5).unwrap().is_empty());
    }

    #[test]
    fn solid_block_keeps_interior_and_matches_oracle() {
        let m = BinaryMask::filled(20, 20);
        let out = blur_threshold(&m, 1.0, 0.5).unwrap();
        let expected = oracle(&m, 1.0);
        for y in 0..20 {
            for x in 0..20 {
                assert_eq!(out.get(x, y), expected[y * 20 + x] >= 127.5, "({x},{y})");
            }
        }
        for y in 1..19 {
            for x in 1..19 {
                assert!(out.get(x, y));
            }
        }
        // the corner falls below half intensity
        assert!(!out.get(0, 0));
    }

    #[test]
    fn bad_parameters_rejected() {
        let m = BinaryMask::new(3, 3);
        assert!(blur_threshold(&m, -1.0, 0.5).is_err());
        assert!(blur_threshold(&m, 1.0, 1.0).is_err());
        assert!(blur_threshold(&m, 1.0, 0.0).is_err());
    }
}
