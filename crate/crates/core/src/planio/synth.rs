use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::planio::{OpeningKind, OpeningSymbol};
use crate::raster::{rotate_point, sin_cos_deg, BinaryMask};
use crate::wall::{rasterize_walls, Orientation, WallBox};

/// Parameters of a synthetic plan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSpec {
    pub seed: u64,
    pub canvas: (usize, usize),
    /// Axis-aligned walls before openings split them: four perimeter walls
    /// plus partitions.
    pub n_rect_walls: usize,
    /// Inclusive thickness range.
    pub wall_thickness_px: (usize, usize),
    /// Rotation of a separate four-walled wing, if any.
    pub inclined_wing: Option<f64>,
    pub noise_speckle_density: f64,
    pub hole_density: f64,
    pub n_doors: usize,
    pub n_windows: usize,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            seed: 0,
            canvas: (320, 256),
            n_rect_walls: 7,
            wall_thickness_px: (6, 8),
            inclined_wing: None,
            noise_speckle_density: 0.005,
            hole_density: 0.005,
            n_doors: 2,
            n_windows: 2,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.canvas.0 < 64 || self.canvas.1 < 64 {
            return Err(invalid(format!("canvas {:?} smaller than 64x64", self.canvas)));
        }
        for (name, d) in [
            ("noise_speckle_density", self.noise_speckle_density),
            ("hole_density", self.hole_density),
        ] {
            if !(0.0..1.0).contains(&d) {
                return Err(invalid(format!("{name} must lie in [0, 1), got {d}")));
            }
        }
        let (lo, hi) = self.wall_thickness_px;
        if lo < 3 || lo > hi {
            return Err(invalid(format!("bad wall thickness range {lo}..={hi}")));
        }
        if self.n_rect_walls < 4 {
            return Err(invalid("n_rect_walls must be at least 4 (the perimeter)"));
        }
        if let Some(a) = self.inclined_wing {
            if !a.is_finite() {
                return Err(invalid("inclined_wing must be finite"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SynthPlan {
    /// Degraded mask handed to the pipeline.
    pub mask: BinaryMask,
    /// Exact rasterization of `truth_walls`.
    pub clean: BinaryMask,
    pub truth_walls: Vec<WallBox>,
    pub truth_symbols: Vec<OpeningSymbol>,
}

impl SynthPlan {
    /// Truth walls that belong to the inclined wing.
    pub fn wing_walls(&self) -> Vec<WallBox> {
        self.truth_walls
            .iter()
            .filter(|w| w.frame_angle_deg != 0.0)
            .copied()
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
struct Rect {
    x: i64,
    y: i64,
    w: i64,
    h: i64,
}

impl Rect {
    fn intersects(&self, o: &Rect) -> bool {
        self.x < o.x + o.w && o.x < self.x + self.w && self.y < o.y + o.h && o.y < self.y + self.h
    }

    fn to_wall(self) -> WallBox {
        WallBox::new(0, 0.0, self.x as f64, self.y as f64, self.w as f64, self.h as f64)
    }
}

const MIN_ROOM_PX: i64 = 28;
const GAP_PX: (i64, i64) = (20, 40);
/// Clearance between an opening and any other wall along the host axis.
const GAP_CLEARANCE_PX: i64 = 14;
const WING_GAP_PX: i64 = 16;
/// Least offset between parallel partitions meeting a wall from opposite sides.
const STAGGER_PX: i64 = 12;
const SPLIT_ATTEMPTS: usize = 50;
const OPENING_ATTEMPTS: usize = 200;

/// Generates a rectilinear plan with exact ground truth, then degrades it.
pub fn synth_plan(spec: &SynthSpec) -> Result<SynthPlan> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (cw, ch) = (spec.canvas.0 as i64, spec.canvas.1 as i64);
    let (tlo, thi) = (spec.wall_thickness_px.0 as i64, spec.wall_thickness_px.1 as i64);
    let mut thick = |rng: &mut ChaCha8Rng| rng.gen_range(tlo..=thi);

    let margin = rng.gen_range(8..=16).min(cw / 8).min(ch / 8);
    let building_w = match spec.inclined_wing {
        Some(_) => (cw - 2 * margin) * 58 / 100,
        None => cw - 2 * margin,
    };
    let (bx, by, bw, bh) = (margin, margin, building_w, ch - 2 * margin);

    let (tt, tb, tl, tr) = (thick(&mut rng), thick(&mut rng), thick(&mut rng), thick(&mut rng));
    let interior = Rect {
        x: bx + tl,
        y: by + tt,
        w: bw - tl - tr,
        h: bh - tt - tb,
    };
    if interior.w < MIN_ROOM_PX || interior.h < MIN_ROOM_PX {
        return Err(Error::Infeasible("canvas too small for the perimeter".into()));
    }
    let mut rects = vec![
        Rect { x: bx, y: by, w: bw, h: tt },
        Rect { x: bx, y: by + bh - tb, w: bw, h: tb },
        Rect { x: bx, y: by + tt, w: tl, h: interior.h },
        Rect { x: bx + bw - tr, y: by + tt, w: tr, h: interior.h },
    ];
    let perimeter = rects.len();

    let mut rooms = vec![interior];
    for _ in perimeter..spec.n_rect_walls {
        let t = thick(&mut rng);
        let need = 2 * MIN_ROOM_PX + t;
        let Some(ri) = (0..rooms.len())
            .filter(|&i| rooms[i].w.max(rooms[i].h) >= need)
            .max_by_key(|&i| (rooms[i].w * rooms[i].h, std::cmp::Reverse(i)))
        else {
            return Err(Error::Infeasible(format!(
                "{} walls do not fit on a {}x{} canvas",
                spec.n_rect_walls, cw, ch
            )));
        };
        let r = rooms.swap_remove(ri);
        let vertical = r.w >= r.h;
        let (lo, hi) = if vertical {
            (r.x + MIN_ROOM_PX, r.x + r.w - MIN_ROOM_PX - t)
        } else {
            (r.y + MIN_ROOM_PX, r.y + r.h - MIN_ROOM_PX - t)
        };
        let place = |p: i64| {
            if vertical {
                Rect { x: p, y: r.y, w: t, h: r.h }
            } else {
                Rect { x: r.x, y: p, w: r.w, h: t }
            }
        };
        // no near-collinear partitions meeting a wall from opposite sides
        let staggered = |c: &Rect| {
            let reach = thi + 1;
            let probe = if vertical {
                Rect { x: c.x - STAGGER_PX, y: c.y - reach, w: c.w + 2 * STAGGER_PX, h: c.h + 2 * reach }
            } else {
                Rect { x: c.x - reach, y: c.y - STAGGER_PX, w: c.w + 2 * reach, h: c.h + 2 * STAGGER_PX }
            };
            rects[perimeter..]
                .iter()
                .any(|o| (o.w < o.h) == vertical && o.intersects(&probe))
        };
        let Some(c) = (0..SPLIT_ATTEMPTS)
            .map(|_| place(rng.gen_range(lo..=hi)))
            .find(|c| !staggered(c))
        else {
            return Err(Error::Infeasible(format!(
                "no aligned position for partition {}",
                rects.len() + 1
            )));
        };
        rects.push(c);
        if vertical {
            rooms.push(Rect { w: c.x - r.x, ..r });
            rooms.push(Rect { x: c.x + t, w: r.x + r.w - c.x - t, ..r });
        } else {
            rooms.push(Rect { h: c.y - r.y, ..r });
            rooms.push(Rect { y: c.y + t, h: r.y + r.h - c.y - t, ..r });
        }
    }

    // openings split their host wall in two
    let mut is_perimeter: Vec<bool> = (0..rects.len()).map(|i| i < perimeter).collect();
    let mut symbols = Vec::new();
    let kinds = std::iter::repeat(OpeningKind::Window)
        .take(spec.n_windows)
        .chain(std::iter::repeat(OpeningKind::Door).take(spec.n_doors));
    for kind in kinds {
        let mut placed = false;
        for _ in 0..OPENING_ATTEMPTS {
            let hosts: Vec<usize> = (0..rects.len())
                .filter(|&i| kind == OpeningKind::Door || is_perimeter[i])
                .collect();
            let host = hosts[rng.gen_range(0..hosts.len())];
            let r = rects[host];
            let horizontal = r.w >= r.h;
            let (start, len, t) = if horizontal { (r.x, r.w, r.h) } else { (r.y, r.h, r.w) };
            let g = rng.gen_range(GAP_PX.0..=GAP_PX.1);
            if len < g + 2 * GAP_CLEARANCE_PX {
                continue;
            }
            let pos = rng.gen_range(start + GAP_CLEARANCE_PX..=start + len - GAP_CLEARANCE_PX - g);
            let (gap, probe) = if horizontal {
                (
                    Rect { x: pos, y: r.y, w: g, h: t },
                    Rect { x: pos - GAP_CLEARANCE_PX, y: r.y - 1, w: g + 2 * GAP_CLEARANCE_PX, h: t + 2 },
                )
            } else {
                (
                    Rect { x: r.x, y: pos, w: t, h: g },
                    Rect { x: r.x - 1, y: pos - GAP_CLEARANCE_PX, w: t + 2, h: g + 2 * GAP_CLEARANCE_PX },
                )
            };
            if rects
                .iter()
                .enumerate()
                .any(|(i, o)| i != host && o.intersects(&probe))
            {
                continue;
            }
            let (a, b) = if horizontal {
                (
                    Rect { w: pos - r.x, ..r },
                    Rect { x: pos + g, w: r.x + r.w - pos - g, ..r },
                )
            } else {
                (
                    Rect { h: pos - r.y, ..r },
                    Rect { y: pos + g, h: r.y + r.h - pos - g, ..r },
                )
            };
            rects[host] = a;
            rects.insert(host + 1, b);
            is_perimeter.insert(host + 1, is_perimeter[host]);
            // detector boxes reach slightly into the jambs and past the faces
            symbols.push(OpeningSymbol::new(
                kind,
                (gap.x - 2) as f64,
                (gap.y - 2) as f64,
                (gap.w + 4) as f64,
                (gap.h + 4) as f64,
            ));
            placed = true;
            break;
        }
        if !placed {
            return Err(Error::Infeasible(format!("no room left for another {}", kind.as_str())));
        }
    }

    let mut walls: Vec<WallBox> = rects.iter().map(|r| r.to_wall()).collect();

    if let Some(angle) = spec.inclined_wing {
        let region = (bx + bw + WING_GAP_PX, by, cw - margin - (bx + bw + WING_GAP_PX), bh);
        walls.extend(wing(region, angle.rem_euclid(90.0), &mut thick, &mut rng)?);
    }
    for (i, w) in walls.iter_mut().enumerate() {
        w.id = i as u32;
    }

    let (w, h) = spec.canvas;
    let clean = rasterize_walls(&walls, w, h);
    let mut mask = clean.clone();
    for y in 0..h {
        for x in 0..w {
            let p = if clean.get(x, y) {
                spec.hole_density
            } else {
                spec.noise_speckle_density
            };
            if p > 0.0 && rng.gen_bool(p) {
                mask.set(x, y, !clean.get(x, y));
            }
        }
    }
    Ok(SynthPlan {
        mask,
        clean,
        truth_walls: walls,
        truth_symbols: symbols,
    })
}

/// Four walls of a rectangular room rotated by `angle` and centred in
/// `region = (x, y, w, h)`.
fn wing(
    region: (i64, i64, i64, i64),
    angle: f64,
    thick: &mut impl FnMut(&mut ChaCha8Rng) -> i64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<WallBox>> {
    let (rx, ry, rw, rh) = (region.0 as f64, region.1 as f64, region.2 as f64, region.3 as f64);
    let (s, c) = sin_cos_deg(angle);
    let (s, c) = (s.abs(), c.abs());
    let (mut a, mut b) = (rw, rh * 0.7);
    while a * c + b * s > rw - 4.0 || a * s + b * c > rh - 4.0 {
        a *= 0.97;
        b *= 0.97;
    }
    let t = [thick(rng), thick(rng), thick(rng), thick(rng)].map(|v| v as f64);
    let (a, b) = (a.floor(), b.floor());
    if a.min(b) < 2.0 * t.iter().cloned().fold(0.0, f64::max) + MIN_ROOM_PX as f64 {
        return Err(Error::Infeasible("no room for the inclined wing".into()));
    }
    let centre = rotate_point((rx + rw / 2.0, ry + rh / 2.0), -angle);
    let (fx, fy) = ((centre.0 - a / 2.0).round(), (centre.1 - b / 2.0).round());
    let boxes = [
        (fx, fy, a, t[0]),
        (fx, fy + b - t[1], a, t[1]),
        (fx, fy + t[0], t[2], b - t[0] - t[1]),
        (fx + a - t[3], fy + t[0], t[3], b - t[0] - t[1]),
    ];
    Ok(boxes
        .iter()
        .map(|&(x, y, w, h)| WallBox {
            orientation: Orientation::of(w, h),
            ..WallBox::new(0, angle, x, y, w, h)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet(seed: u64, walls: usize) -> SynthSpec {
        SynthSpec {
            seed,
            n_rect_walls: walls,
            noise_speckle_density: 0.0,
            hole_density: 0.0,
            ..Default::default()
        }
    }

    #[test]
    fn noise_free_mask_is_truth_rasterization() {
        let p = synth_plan(&SynthSpec { n_doors: 0, n_windows: 0, ..quiet(1, 4) }).unwrap();
        assert_eq!(p.truth_walls.len(), 4);
        let (w, h) = p.mask.dims();
        assert_eq!(p.mask, rasterize_walls(&p.truth_walls, w, h));
        assert_eq!(p.mask, p.clean);
    }

    #[test]
    fn openings_split_walls_and_stay_in_bounds() {
        let p = synth_plan(&quiet(3, 7)).unwrap();
        assert_eq!(p.truth_walls.len(), 7 + 4);
        assert_eq!(p.truth_symbols.len(), 4);
        for s in &p.truth_symbols {
            assert!(s.x >= 0.0 && s.y >= 0.0);
            let gap_pixels = (s.x as usize + 2..(s.x + s.w) as usize - 2)
                .flat_map(|x| (s.y as usize + 2..(s.y + s.h) as usize - 2).map(move |y| (x, y)))
                .filter(|&(x, y)| p.clean.get(x, y))
                .count();
            assert_eq!(gap_pixels, 0, "opening interior must be empty");
        }
    }

    #[test]
    fn deterministic() {
        let spec = SynthSpec { seed: 9, ..Default::default() };
        let a = synth_plan(&spec).unwrap();
        let b = synth_plan(&spec).unwrap();
        assert_eq!(a.mask, b.mask);
        assert_eq!(a.truth_walls, b.truth_walls);
        assert_eq!(a.truth_symbols, b.truth_symbols);
        let c = synth_plan(&SynthSpec { seed: 10, ..spec }).unwrap();
        assert_ne!(a.mask, c.mask);
    }

    #[test]
    fn noise_density_bound() {
        let spec = SynthSpec {
            noise_speckle_density: 0.01,
            hole_density: 0.01,
            ..quiet(5, 6)
        };
        let p = synth_plan(&spec).unwrap();
        let diff = p
            .mask
            .data()
            .iter()
            .zip(p.clean.data())
            .filter(|(a, b)| a != b)
            .count();
        assert!((diff as f64) <= 0.015 * p.mask.data().len() as f64, "{diff}");
        assert!(diff > 0);
    }

    #[test]
    fn inclined_wing_present() {
        let p = synth_plan(&SynthSpec {
            inclined_wing: Some(30.0),
            ..quiet(2, 6)
        })
        .unwrap();
        let wing = p.wing_walls();
        assert_eq!(wing.len(), 4);
        assert!(wing.iter().all(|w| w.frame_angle_deg == 30.0 && w.is_valid()));
        let (w, h) = p.clean.dims();
        let wing_mask = rasterize_walls(&wing, w, h);
        let expected: f64 = wing.iter().map(|b| b.w * b.h).sum();
        let got = wing_mask.count() as f64;
        assert!((got - expected).abs() / expected < 0.1, "{got} vs {expected}");
        let axis = rasterize_walls(&p.truth_walls[..p.truth_walls.len() - 4], w, h);
        assert!(axis.and(&wing_mask).is_empty());
    }

    #[test]
    fn infeasible_and_invalid() {
        let crowded = SynthSpec {
            canvas: (64, 64),
            n_rect_walls: 40,
            ..quiet(0, 40)
        };
        assert!(matches!(synth_plan(&crowded), Err(Error::Infeasible(_))));
        assert!(synth_plan(&SynthSpec { canvas: (32, 200), ..Default::default() }).is_err());
        assert!(synth_plan(&SynthSpec { hole_density: 1.0, ..Default::default() }).is_err());
    }
}
