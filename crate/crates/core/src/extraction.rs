//! Wall extraction: clean the mask, find the dominant orientations, then
//! peel walls off one orientation frame at a time.

use crate::boxfit::{resolve_overlaps, shrink_fit, FitBox, Region};
use crate::config::PipelineConfig;
use crate::raster::{
    blur_threshold, canny, close, components, hough_accumulate, min_area_rect, open, rotate,
    BinaryMask, Contour, Kernel,
};
use crate::wall::{rasterize_walls, WallBox};

/// A family of line orientations `{θ, θ+90, θ+180, θ+270}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleClass {
    pub angle_deg: f64,
    pub weight: f64,
}

/// Circular distance between two angles modulo 90°.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(90.0);
    d.min(90.0 - d)
}

fn normalize_90(a: f64) -> f64 {
    let a = a.rem_euclid(90.0);
    if a >= 90.0 - 1e-9 {
        0.0
    } else {
        a
    }
}

fn kernel(w: usize, h: usize) -> Kernel {
    Kernel::new(w, h).expect("config validated kernel sizes")
}

/// Opening, Gaussian blur with re-thresholding, then closing.
pub fn preprocess(mask: &BinaryMask, cfg: &PipelineConfig) -> BinaryMask {
    let opened = open(mask, kernel(cfg.open_kernel_px, cfg.open_kernel_px));
    let blurred =
        blur_threshold(&opened, cfg.blur_sigma, cfg.blur_threshold).expect("config validated blur");
    close(&blurred, kernel(cfg.close_kernel_px, cfg.close_kernel_px))
}

/// ρ half-width of the window a Hough peak must dominate, in pixels.
const PEAK_RHO_RADIUS_PX: f64 = 3.0;

/// Orientation histogram of the mask's Hough lines folded modulo 90°,
/// clustered into angle classes and sorted strongest first.
///
/// Only accumulator local maxima count as lines, so a long edge is not also
/// reported at every nearby angle; a peak's window spans
/// `angle_merge_tol_deg` in θ. Each line adds its squared vote count, which
/// lets long straight walls outweigh the short runs of staircase edges and
/// corners.
pub fn detect_angles(mask: &BinaryMask, cfg: &PipelineConfig) -> Vec<AngleClass> {
    if mask.is_empty() {
        return Vec::new();
    }
    let edges = canny(&mask.to_gray(), cfg.canny_low, cfg.canny_high);
    let (w, h) = mask.dims();
    let min_votes = ((cfg.hough_min_votes_frac * w.max(h) as f64).ceil() as u32).max(1);
    let acc = hough_accumulate(&edges, cfg.hough_theta_res_deg, cfg.hough_rho_res_px)
        .expect("config validated hough resolution");
    let theta_radius = (cfg.angle_merge_tol_deg / cfg.hough_theta_res_deg).floor() as usize;
    let rho_radius = (PEAK_RHO_RADIUS_PX / cfg.hough_rho_res_px).ceil() as usize;
    let peaks = acc.local_maxima(min_votes, theta_radius, rho_radius);

    let res = cfg.hough_theta_res_deg;
    let n_bins = ((90.0 / res).round() as usize).max(1);
    let mut hist = vec![0.0f64; n_bins];
    for p in &peaks {
        let bin = ((p.theta_deg.rem_euclid(90.0) / res).round() as usize) % n_bins;
        hist[bin] += (p.votes as f64).powi(2);
    }

    let mut order: Vec<usize> = (0..n_bins).filter(|&b| hist[b] > 0.0).collect();
    order.sort_by(|&a, &b| hist[b].total_cmp(&hist[a]).then(a.cmp(&b)));

    // (seed angle, weight, weighted offset sum)
    let mut clusters: Vec<(f64, f64, f64)> = Vec::new();
    for b in order {
        let angle = b as f64 * res;
        let weight = hist[b];
        match clusters
            .iter_mut()
            .find(|c| angle_distance(c.0, angle) <= cfg.angle_merge_tol_deg)
        {
            Some(c) => {
                let mut delta = (angle - c.0).rem_euclid(90.0);
                if delta > 45.0 {
                    delta -= 90.0;
                }
                c.1 += weight;
                c.2 += weight * delta;
            }
            None => clusters.push((angle, weight, 0.0)),
        }
    }

    let strongest = clusters.iter().map(|c| c.1).fold(0.0, f64::max);
    let mut classes: Vec<AngleClass> = clusters
        .into_iter()
        .filter(|c| c.1 >= cfg.angle_peak_min_frac * strongest)
        .map(|(seed, weight, offset)| {
            let mut angle = normalize_90(seed + offset / weight);
            // axis-aligned frames stay exact under nearest-neighbor rotation
            if angle_distance(angle, 0.0) < res / 2.0 {
                angle = 0.0;
            }
            AngleClass {
                angle_deg: angle,
                weight,
            }
        })
        .collect();
    classes.sort_by(|a, b| {
        b.weight
            .total_cmp(&a.weight)
            .then(a.angle_deg.total_cmp(&b.angle_deg))
    });

    if classes.is_empty() {
        classes.push(AngleClass {
            angle_deg: 0.0,
            weight: f64::EPSILON,
        });
    }
    classes
}

/// Splits a mask into runs at least `hv_kernel_len_px` long horizontally and
/// vertically. Junction pixels may land in both outputs.
pub fn decompose_hv(mask: &BinaryMask, cfg: &PipelineConfig) -> (BinaryMask, BinaryMask) {
    let (len, thick) = (cfg.hv_kernel_len_px, cfg.hv_kernel_thickness_px);
    (open(mask, kernel(len, thick)), open(mask, kernel(thick, len)))
}

/// True when the component's minimum-area rectangle is within `tol_deg` of
/// the frame axes.
pub fn validate_tilt(contour: &Contour, tol_deg: f64) -> bool {
    let pts: Vec<(f64, f64)> = contour
        .points
        .iter()
        .map(|&(x, y)| (x as f64, y as f64))
        .collect();
    match min_area_rect(&pts) {
        Ok(r) => r.angle_deg <= tol_deg || r.angle_deg >= 90.0 - tol_deg,
        Err(_) => false,
    }
}

/// What one orientation pass of [`extract_walls_detailed`] did.
#[derive(Clone, Debug)]
pub struct IterationReport {
    pub angle_deg: f64,
    pub accepted: usize,
    pub remaining_before: usize,
    pub remaining_after: usize,
}

#[derive(Clone, Debug)]
pub struct Extraction {
    pub walls: Vec<WallBox>,
    pub preprocessed: BinaryMask,
    pub residual: BinaryMask,
    pub iterations: Vec<IterationReport>,
}

pub fn extract_walls(mask: &BinaryMask, cfg: &PipelineConfig) -> Vec<WallBox> {
    extract_walls_detailed(mask, cfg).walls
}

/// Full extraction loop. Each pass takes the strongest angle class not yet
/// processed, rotates the residual components oriented along that class so
/// the class is axis-aligned, fits boxes
/// to the horizontal and vertical components that pass the tilt check,
/// resolves overlaps among them, and subtracts the fitted boxes from the
/// residual. Boxes from different frames are then deduplicated by
/// containment of their rasterizations.
pub fn extract_walls_detailed(mask: &BinaryMask, cfg: &PipelineConfig) -> Extraction {
    let pre = preprocess(mask, cfg);
    let (w, h) = pre.dims();
    let mut remaining = pre.clone();
    let mut processed: Vec<f64> = Vec::new();
    let mut walls: Vec<WallBox> = Vec::new();
    let mut iterations = Vec::new();

    for _ in 0..cfg.max_angle_iterations {
        let before = remaining.count();
        if before < cfg.min_chunk_area_px {
            break;
        }
        let classes = detect_angles(&remaining, cfg);
        let Some(class) = classes.into_iter().find(|c| {
            processed
                .iter()
                .all(|&p| angle_distance(p, c.angle_deg) > cfg.angle_merge_tol_deg)
        }) else {
            break;
        };
        let angle = class.angle_deg;
        processed.push(angle);

        let active = components_at_angle(&remaining, angle, cfg);
        let (mut rotated, map) = rotate(&active, -angle);
        if angle != 0.0 {
            // smooth the staircase left by nearest-neighbor resampling
            rotated = blur_threshold(&rotated, cfg.blur_sigma, cfg.blur_threshold)
                .expect("config validated blur");
        }
        let (h_mask, v_mask) = decompose_hv(&rotated, cfg);
        let mut fits: Vec<FitBox> = Vec::new();
        for directional in [&h_mask, &v_mask] {
            for comp in components(directional) {
                if comp.area < cfg.min_chunk_area_px || !validate_tilt(&comp.contour, cfg.tilt_tol_deg)
                {
                    continue;
                }
                let region = Region::new(comp.mask, (comp.bbox.x as i64, comp.bbox.y as i64));
                fits.extend(shrink_fit(&region, cfg));
            }
        }
        let fits = resolve_overlaps(&fits, &[Region::new(rotated, (0, 0))], cfg);

        // the rotated canvas is the frame shifted by the map's translation
        let d = (-map.forward[0][2], -map.forward[1][2]);
        let accepted: Vec<WallBox> = fits
            .iter()
            .map(|f| WallBox::new(0, angle, f.x + d.0, f.y + d.1, f.w, f.h))
            .collect();
        let covered = rasterize_walls(&accepted, w, h);
        remaining = remaining.subtract(&covered);
        iterations.push(IterationReport {
            angle_deg: angle,
            accepted: accepted.len(),
            remaining_before: before,
            remaining_after: remaining.count(),
        });
        walls.extend(accepted);
    }

    let walls = dedup_across_frames(walls, &pre);
    Extraction {
        walls,
        preprocessed: pre,
        residual: remaining,
        iterations,
    }
}

/// The connected components of `mask` whose minimum-area rectangle lies
/// within `tilt_tol_deg` of `angle`. A detached wing is then left for its
/// own pass instead of shedding short axis-aligned fragments into the
/// axis-aligned one.
fn components_at_angle(mask: &BinaryMask, angle: f64, cfg: &PipelineConfig) -> BinaryMask {
    let (w, h) = mask.dims();
    let mut out = BinaryMask::new(w, h);
    for comp in components(mask) {
        if comp.area < cfg.min_chunk_area_px {
            continue;
        }
        let pts: Vec<(f64, f64)> = comp
            .contour
            .points
            .iter()
            .map(|&(x, y)| (x as f64, y as f64))
            .collect();
        let Ok(rect) = min_area_rect(&pts) else {
            continue;
        };
        if angle_distance(rect.angle_deg, angle) <= cfg.tilt_tol_deg {
            for (x, y) in comp.mask.foreground() {
                out.set(comp.bbox.x + x, comp.bbox.y + y, true);
            }
        }
    }
    out
}

/// Drops boxes whose rasterization is empty of wall pixels or lies inside
/// the rasterization of a box from another frame, then numbers the
/// survivors.
fn dedup_across_frames(walls: Vec<WallBox>, pre: &BinaryMask) -> Vec<WallBox> {
    let (w, h) = pre.dims();
    let pixels: Vec<Vec<(usize, usize)>> = walls
        .iter()
        .map(|b| {
            let (x0, y0, x1, y1) = b.pixel_bounds(w, h);
            let mut px = Vec::new();
            for y in y0..y1 {
                for x in x0..x1 {
                    if b.covers_pixel(x, y) {
                        px.push((x, y));
                    }
                }
            }
            px
        })
        .collect();

    let mut keep: Vec<bool> = pixels
        .iter()
        .map(|px| px.iter().any(|&(x, y)| pre.get(x, y)))
        .collect();
    for i in 0..walls.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..walls.len() {
            if i == j || !keep[j] || walls[i].frame_angle_deg == walls[j].frame_angle_deg {
                continue;
            }
            let inside = pixels[i].iter().all(|&(x, y)| walls[j].covers_pixel(x, y));
            if !inside {
                continue;
            }
            let mutual = pixels[j].iter().all(|&(x, y)| walls[i].covers_pixel(x, y));
            if !mutual || i > j {
                keep[i] = false;
                break;
            }
        }
    }
    walls
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .enumerate()
        .map(|(id, (mut b, _))| {
            b.id = id as u32;
            b
        })
        .collect()
}
