//! Rectangle fitting for wall components.
//!
//! [`shrink_fit`] starts from a component's bounding box and greedily trims
//! one pixel from whichever side most improves the box/wall IoU, then
//! recursively fits the larger leftover chunks. [`resolve_overlaps`] makes
//! the resulting boxes interior-disjoint by trimming whichever box loses
//! fewer wall pixels.

use std::cmp::Ordering;

use crate::config::PipelineConfig;
use crate::error::{invalid, Result};
use crate::raster::{components, BinaryMask};

/// A set of wall pixels: `mask` cropped out of some frame at `offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub mask: BinaryMask,
    pub offset: (i64, i64),
}

impl Region {
    pub fn new(mask: BinaryMask, offset: (i64, i64)) -> Self {
        Self { mask, offset }
    }

    pub fn area(&self) -> usize {
        self.mask.count()
    }
}

/// Axis-aligned box in a component frame with the IoU it reached against
/// the (sub-)region it was fitted to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitBox {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
    pub achieved_iou: f64,
}

impl FitBox {
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> Self {
        Self {
            x,
            y,
            w,
            h,
            achieved_iou: 0.0,
        }
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.h
    }

    /// Intersection rectangle `(x0, y0, x1, y1)`, empty when x1 <= x0 or
    /// y1 <= y0.
    pub fn intersection(&self, other: &FitBox) -> (f64, f64, f64, f64) {
        (
            self.x.max(other.x),
            self.y.max(other.y),
            self.right().min(other.right()),
            self.bottom().min(other.bottom()),
        )
    }

    pub fn intersection_area(&self, other: &FitBox) -> f64 {
        let (x0, y0, x1, y1) = self.intersection(other);
        (x1 - x0).max(0.0) * (y1 - y0).max(0.0)
    }

    pub fn contains(&self, other: &FitBox) -> bool {
        const EPS: f64 = 1e-9;
        other.x >= self.x - EPS
            && other.y >= self.y - EPS
            && other.right() <= self.right() + EPS
            && other.bottom() <= self.bottom() + EPS
    }

    /// Integer pixel range `[x0, x1) × [y0, y1)` whose centers fall inside.
    pub fn pixel_range(&self) -> (i64, i64, i64, i64) {
        (
            center_index(self.x),
            center_index(self.y),
            center_index(self.right()),
            center_index(self.bottom()),
        )
    }
}

/// Smallest pixel index whose center is at or after `v`.
fn center_index(v: f64) -> i64 {
    (v - 0.5).ceil() as i64
}

/// Summed-area table over a mask placed at an offset in its frame.
struct Integral {
    offset: (i64, i64),
    width: usize,
    height: usize,
    sums: Vec<u32>,
}

impl Integral {
    fn new(mask: &BinaryMask, offset: (i64, i64)) -> Self {
        let (w, h) = mask.dims();
        let mut sums = vec![0u32; (w + 1) * (h + 1)];
        for y in 0..h {
            let mut row = 0u32;
            for x in 0..w {
                row += mask.get(x, y) as u32;
                sums[(y + 1) * (w + 1) + x + 1] = sums[y * (w + 1) + x + 1] + row;
            }
        }
        Self {
            offset,
            width: w,
            height: h,
            sums,
        }
    }

    /// Foreground count in the frame-coordinate pixel range
    /// `[x0, x1) × [y0, y1)`.
    fn count(&self, x0: i64, y0: i64, x1: i64, y1: i64) -> u64 {
        let clip = |v: i64, off: i64, n: usize| (v - off).clamp(0, n as i64) as usize;
        let (ax, bx) = (clip(x0, self.offset.0, self.width), clip(x1, self.offset.0, self.width));
        let (ay, by) = (clip(y0, self.offset.1, self.height), clip(y1, self.offset.1, self.height));
        if ax >= bx || ay >= by {
            return 0;
        }
        let s = |x: usize, y: usize| self.sums[y * (self.width + 1) + x] as i64;
        (s(bx, by) - s(ax, by) - s(bx, ay) + s(ax, ay)) as u64
    }
}

/// Exact IoU as an (intersection, union) pair of pixel counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IouFraction {
    pub inter: u64,
    pub union: u64,
}

impl IouFraction {
    pub fn value(&self) -> f64 {
        if self.union == 0 {
            1.0
        } else {
            self.inter as f64 / self.union as f64
        }
    }
}

impl PartialOrd for IouFraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IouFraction {
    fn cmp(&self, other: &Self) -> Ordering {
        let a = self.inter as u128 * other.union as u128;
        let b = other.inter as u128 * self.union as u128;
        a.cmp(&b)
    }
}

/// IoU between a box (rasterized by pixel-center inclusion) and a region's
/// foreground.
pub fn region_box_iou(region: &Region, fit: &FitBox) -> Result<f64> {
    Ok(region_box_iou_exact(region, fit)?.value())
}

pub fn region_box_iou_exact(region: &Region, fit: &FitBox) -> Result<IouFraction> {
    if !(fit.w > 0.0 && fit.h > 0.0) {
        return Err(invalid(format!(
            "box must have positive area, got {}x{}",
            fit.w, fit.h
        )));
    }
    let integral = Integral::new(&region.mask, region.offset);
    let total = region.area() as u64;
    let (x0, y0, x1, y1) = fit.pixel_range();
    let box_px = ((x1 - x0).max(0) * (y1 - y0).max(0)) as u64;
    let inter = integral.count(x0, y0, x1, y1);
    Ok(IouFraction {
        inter,
        union: box_px + total - inter,
    })
}

/// Integer box `[x0, x1) × [y0, y1)` in local crop coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct IBox {
    x0: i64,
    y0: i64,
    x1: i64,
    y1: i64,
}

impl IBox {
    fn w(&self) -> i64 {
        self.x1 - self.x0
    }
    fn h(&self) -> i64 {
        self.y1 - self.y0
    }
}

/// Record of one greedy shrink run on a single (sub-)region.
#[derive(Clone, Debug)]
pub struct ShrinkTrace {
    /// Initial box followed by every adopted box, in frame coordinates.
    pub boxes: Vec<FitBox>,
    /// IoU after each entry of `boxes`.
    pub ious: Vec<IouFraction>,
    pub initial_w: usize,
    pub initial_h: usize,
}

impl ShrinkTrace {
    pub fn iterations(&self) -> usize {
        self.ious.len() - 1
    }

    pub fn result(&self) -> FitBox {
        *self.boxes.last().expect("trace holds the initial box")
    }
}

/// The greedy single-box loop: start from the bounding box, try trimming one
/// pixel from the top, left, bottom and right, adopt the best candidate only
/// if it strictly improves IoU, and stop at the IoU target, when nothing
/// improves, or when no candidate keeps both sides at `min_box_side_px`.
///
/// Returns `None` when the region's bounding box is already thinner than
/// `min_box_side_px`.
pub fn shrink_box(region: &Region, cfg: &PipelineConfig) -> Option<ShrinkTrace> {
    let bb = region.mask.bbox()?;
    let min_side = cfg.min_box_side_px as i64;
    if (bb.w as i64) < min_side || (bb.h as i64) < min_side {
        return None;
    }
    let integral = Integral::new(&region.mask, (0, 0));
    let total = region.area() as u64;
    let eval = |b: &IBox| {
        let inter = integral.count(b.x0, b.y0, b.x1, b.y1);
        IouFraction {
            inter,
            union: (b.w() * b.h()) as u64 + total - inter,
        }
    };
    let to_fit = |b: &IBox, iou: IouFraction| FitBox {
        x: (b.x0 + region.offset.0) as f64,
        y: (b.y0 + region.offset.1) as f64,
        w: b.w() as f64,
        h: b.h() as f64,
        achieved_iou: iou.value(),
    };

    let mut cur = IBox {
        x0: bb.x as i64,
        y0: bb.y as i64,
        x1: bb.right() as i64,
        y1: bb.bottom() as i64,
    };
    let mut iou = eval(&cur);
    let mut trace = ShrinkTrace {
        boxes: vec![to_fit(&cur, iou)],
        ious: vec![iou],
        initial_w: bb.w,
        initial_h: bb.h,
    };
    let target = cfg.shrink_iou_target;

    while iou.value() < target {
        let candidates = [
            IBox { y0: cur.y0 + 1, ..cur },
            IBox { x0: cur.x0 + 1, ..cur },
            IBox { y1: cur.y1 - 1, ..cur },
            IBox { x1: cur.x1 - 1, ..cur },
        ];
        let mut best: Option<(IBox, IouFraction)> = None;
        for c in candidates {
            if c.w() < min_side || c.h() < min_side {
                continue;
            }
            let v = eval(&c);
            if best.map_or(true, |(_, bv)| v > bv) {
                best = Some((c, v));
            }
        }
        match best {
            Some((c, v)) if v > iou => {
                cur = c;
                iou = v;
                trace.boxes.push(to_fit(&cur, iou));
                trace.ious.push(iou);
            }
            _ => break,
        }
    }
    Some(trace)
}

/// Fits a region with one or more boxes: the greedy shrink result, then the
/// same procedure on every 8-connected leftover chunk of at least
/// `min_chunk_area_px` pixels. Smaller leftovers are dropped.
pub fn shrink_fit(region: &Region, cfg: &PipelineConfig) -> Vec<FitBox> {
    let mut out = Vec::new();
    let mut stack = vec![region.clone()];
    while let Some(r) = stack.pop() {
        let Some(trace) = shrink_box(&r, cfg) else {
            continue;
        };
        let fit = trace.result();
        out.push(fit);

        let (bx0, by0, bx1, by1) = fit.pixel_range();
        let (ox, oy) = r.offset;
        let residual = BinaryMask::from_fn(r.mask.width(), r.mask.height(), |x, y| {
            let (fx, fy) = (x as i64 + ox, y as i64 + oy);
            r.mask.get(x, y) && !(fx >= bx0 && fx < bx1 && fy >= by0 && fy < by1)
        });
        let chunks: Vec<Region> = components(&residual)
            .into_iter()
            .filter(|c| c.area >= cfg.min_chunk_area_px)
            .map(|c| Region::new(c.mask, (ox + c.bbox.x as i64, oy + c.bbox.y as i64)))
            .collect();
        stack.extend(chunks.into_iter().rev());
    }
    out
}

/// Side of a box moved inward by a trim.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Top,
    Left,
    Bottom,
    Right,
}

/// What resolving one overlapping pair did.
#[derive(Clone, Debug, PartialEq)]
pub enum ResolveAction {
    /// `dropped` lay inside `keeper`.
    Contained { dropped: usize, keeper: usize },
    /// `index` was trimmed on `side`, or removed outright when the trim
    /// would have left a side under `min_box_side_px`.
    Trimmed {
        index: usize,
        side: Side,
        removed: bool,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResolveEvent {
    pub pair: (usize, usize),
    /// Both boxes as they were just before this step.
    pub before: (FitBox, FitBox),
    pub action: ResolveAction,
    /// Wall pixels lost by the candidate trim of `pair.0` and of `pair.1`.
    pub candidate_losses: (u64, u64),
    /// Wall pixels inside the removed strip (or the removed box).
    pub loss: u64,
}

/// Wall pixels of all regions merged into one lookup.
pub struct WallPixels {
    parts: Vec<Integral>,
}

impl WallPixels {
    pub fn new(regions: &[Region]) -> Self {
        Self {
            parts: regions
                .iter()
                .map(|r| Integral::new(&r.mask, r.offset))
                .collect(),
        }
    }

    /// Wall pixels whose centers fall in the rectangle `[x0, x1) × [y0, y1)`.
    /// Regions are assumed pairwise disjoint.
    pub fn count_in(&self, x0: f64, y0: f64, x1: f64, y1: f64) -> u64 {
        if x1 <= x0 || y1 <= y0 {
            return 0;
        }
        let (a, b, c, d) = (
            center_index(x0),
            center_index(y0),
            center_index(x1),
            center_index(y1),
        );
        self.parts.iter().map(|p| p.count(a, b, c, d)).sum()
    }
}

struct TrimPlan {
    side: Side,
    after: FitBox,
    removed: bool,
    loss: u64,
}

/// The smallest-area one-sided trim of `a` that clears the intersection
/// `(x0, y0, x1, y1)`.
fn plan_trim(a: &FitBox, inter: (f64, f64, f64, f64), wall: &WallPixels, min_side: f64) -> TrimPlan {
    let (ix0, iy0, ix1, iy1) = inter;
    let options = [
        (Side::Top, FitBox { y: iy1, h: a.bottom() - iy1, ..*a }, (a.x, a.y, a.right(), iy1)),
        (Side::Left, FitBox { x: ix1, w: a.right() - ix1, ..*a }, (a.x, a.y, ix1, a.bottom())),
        (Side::Bottom, FitBox { h: iy0 - a.y, ..*a }, (a.x, iy0, a.right(), a.bottom())),
        (Side::Right, FitBox { w: ix0 - a.x, ..*a }, (ix0, a.y, a.right(), a.bottom())),
    ];
    let (side, after, strip) = options
        .into_iter()
        .min_by(|p, q| {
            let ap = (p.2 .2 - p.2 .0) * (p.2 .3 - p.2 .1);
            let aq = (q.2 .2 - q.2 .0) * (q.2 .3 - q.2 .1);
            ap.total_cmp(&aq)
        })
        .expect("four options");
    if after.w < min_side || after.h < min_side {
        TrimPlan {
            side,
            after,
            removed: true,
            loss: wall.count_in(a.x, a.y, a.right(), a.bottom()),
        }
    } else {
        TrimPlan {
            side,
            after,
            removed: false,
            loss: wall.count_in(strip.0, strip.1, strip.2, strip.3),
        }
    }
}

/// Makes boxes pairwise interior-disjoint. See [`resolve_overlaps_traced`].
pub fn resolve_overlaps(boxes: &[FitBox], regions: &[Region], cfg: &PipelineConfig) -> Vec<FitBox> {
    resolve_overlaps_traced(boxes, regions, cfg).0
}

/// Pairs are taken in descending order of intersection area (ties by index).
/// A box inside another is dropped. Otherwise each box gets its
/// smallest one-sided trim that clears the intersection, and the trim
/// losing fewer wall pixels is applied; ties trim the smaller box, then
/// the one with the larger index. Surviving boxes keep their input order.
pub fn resolve_overlaps_traced(
    boxes: &[FitBox],
    regions: &[Region],
    cfg: &PipelineConfig,
) -> (Vec<FitBox>, Vec<ResolveEvent>) {
    let wall = WallPixels::new(regions);
    let min_side = cfg.min_box_side_px as f64;
    let mut live: Vec<Option<FitBox>> = boxes.iter().copied().map(Some).collect();
    let mut events = Vec::new();

    loop {
        let mut worst: Option<(f64, usize, usize)> = None;
        for i in 0..live.len() {
            let Some(a) = live[i] else { continue };
            for j in i + 1..live.len() {
                let Some(b) = live[j] else { continue };
                let area = a.intersection_area(&b);
                if area > 0.0 && worst.map_or(true, |(w, _, _)| area > w) {
                    worst = Some((area, i, j));
                }
            }
        }
        let Some((_, i, j)) = worst else { break };
        let (a, b) = (live[i].unwrap(), live[j].unwrap());

        if b.contains(&a) || a.contains(&b) {
            let (dropped, keeper) = if b.contains(&a) && a.contains(&b) {
                (j, i)
            } else if b.contains(&a) {
                (i, j)
            } else {
                (j, i)
            };
            let d = live[dropped].unwrap();
            events.push(ResolveEvent {
                pair: (i, j),
                before: (a, b),
                action: ResolveAction::Contained { dropped, keeper },
                candidate_losses: (0, 0),
                loss: wall.count_in(d.x, d.y, d.right(), d.bottom()),
            });
            live[dropped] = None;
            continue;
        }

        let inter = a.intersection(&b);
        let pa = plan_trim(&a, inter, &wall, min_side);
        let pb = plan_trim(&b, inter, &wall, min_side);
        let trim_a = match pa.loss.cmp(&pb.loss) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => match a.area().total_cmp(&b.area()) {
                Ordering::Less => true,
                Ordering::Greater => false,
                // j > i
                Ordering::Equal => false,
            },
        };
        let (index, plan) = if trim_a { (i, &pa) } else { (j, &pb) };
        events.push(ResolveEvent {
            pair: (i, j),
            before: (a, b),
            action: ResolveAction::Trimmed {
                index,
                side: plan.side,
                removed: plan.removed,
            },
            candidate_losses: (pa.loss, pb.loss),
            loss: plan.loss,
        });
        live[index] = if plan.removed {
            None
        } else {
            let mut after = plan.after;
            after.achieved_iou = live[index].unwrap().achieved_iou;
            Some(after)
        };
    }
    (live.into_iter().flatten().collect(), events)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::PixelRect;
    use proptest::prelude::*;

    fn cfg() -> PipelineConfig {
        PipelineConfig::default()
    }

    fn solid(w: usize, h: usize) -> Region {
        Region::new(BinaryMask::filled(w, h), (0, 0))
    }

    /// Pixel-by-pixel IoU straight from the definition.
    fn brute_iou(region: &Region, b: &FitBox) -> (u64, u64) {
        let (mut i, mut u) = (0, 0);
        let (ox, oy) = region.offset;
        let span = 80i64;
        for y in -span..span {
            for x in -span..span {
                let (cx, cy) = (x as f64 + 0.5, y as f64 + 0.5);
                let in_box = cx >= b.x && cx < b.right() && cy >= b.y && cy < b.bottom();
                let in_wall = region.mask.get_signed(x - ox, y - oy);
                i += (in_box && in_wall) as u64;
                u += (in_box || in_wall) as u64;
            }
        }
        (i, u)
    }

    #[test]
    fn iou_examples() {
        let r = solid(10, 10);
        assert_eq!(region_box_iou(&r, &FitBox::new(0.0, 0.0, 10.0, 10.0)).unwrap(), 1.0);
        assert_eq!(region_box_iou(&r, &FitBox::new(20.0, 0.0, 5.0, 5.0)).unwrap(), 0.0);
        assert_eq!(region_box_iou(&r, &FitBox::new(0.0, 0.0, 5.0, 10.0)).unwrap(), 0.5);
        assert!(region_box_iou(&r, &FitBox::new(0.0, 0.0, 0.0, 10.0)).is_err());
    }

    #[test]
    fn solid_bar_is_recovered_without_shrinking() {
        let r = Region::new(BinaryMask::filled(40, 6), (7, 3));
        let trace = shrink_box(&r, &cfg()).unwrap();
        assert_eq!(trace.iterations(), 0);
        let boxes = shrink_fit(&r, &cfg());
        assert_eq!(boxes.len(), 1);
        let b = boxes[0];
        assert_eq!((b.x, b.y, b.w, b.h), (7.0, 3.0, 40.0, 6.0));
        assert_eq!(b.achieved_iou, 1.0);
    }

    #[test]
    fn l_shape_becomes_two_boxes() {
        let mut m = BinaryMask::new(30, 30);
        m.fill_rect(PixelRect::new(0, 0, 30, 6), true);
        m.fill_rect(PixelRect::new(0, 0, 6, 30), true);
        let r = Region::new(m.clone(), (0, 0));
        let boxes = shrink_fit(&r, &cfg());
        assert_eq!(boxes.len(), 2, "{boxes:?}");
        let covered = BinaryMask::from_fn(30, 30, |x, y| {
            let (cx, cy) = (x as f64 + 0.5, y as f64 + 0.5);
            boxes
                .iter()
                .any(|b| cx >= b.x && cx < b.right() && cy >= b.y && cy < b.bottom())
        });
        let frac = covered.and(&m).count() as f64 / m.count() as f64;
        assert!(frac >= 0.95, "coverage {frac}");
        for b in &boxes {
            assert!(b.x >= 0.0 && b.y >= 0.0 && b.right() <= 30.0 && b.bottom() <= 30.0);
        }
    }

    #[test]
    fn protruding_pixel_is_trimmed_and_dropped() {
        let mut m = BinaryMask::new(40, 7);
        m.fill_rect(PixelRect::new(0, 1, 40, 6), true);
        m.set(17, 0, true);
        let r = Region::new(m, (0, 0));
        let trace = shrink_box(&r, &cfg()).unwrap();
        assert_eq!(trace.ious[0], IouFraction { inter: 241, union: 280 });
        assert_eq!(trace.ious[1], IouFraction { inter: 240, union: 241 });
        let boxes = shrink_fit(&r, &cfg());
        assert_eq!(boxes.len(), 1);
        let b = boxes[0];
        assert_eq!((b.x, b.y, b.w, b.h), (0.0, 1.0, 40.0, 6.0));
    }

    #[test]
    fn thin_region_yields_no_box() {
        let r = solid(30, 2);
        assert!(shrink_fit(&r, &cfg()).is_empty());
    }

    #[test]
    fn contained_box_is_dropped() {
        let big = FitBox::new(0.0, 0.0, 20.0, 6.0);
        let small = FitBox::new(5.0, 1.0, 3.0, 3.0);
        let regions = [solid(20, 6)];
        let out = resolve_overlaps(&[small, big], &regions, &cfg());
        assert_eq!(out, vec![big]);
    }

    #[test]
    fn partial_overlap_trims_facing_side() {
        let a = FitBox::new(0.0, 0.0, 20.0, 6.0);
        let b = FitBox::new(16.0, 0.0, 20.0, 6.0);
        let regions = [solid(36, 6)];
        let (out, events) = resolve_overlaps_traced(&[a, b], &regions, &cfg());
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].intersection_area(&out[1]), 0.0);
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].loss, 24);
        assert_eq!(events[0].candidate_losses, (24, 24));
        // equal loss and equal area: the later box is trimmed
        assert_eq!(out[0], a);
        assert_eq!(out[1], FitBox::new(20.0, 0.0, 16.0, 6.0));
    }

    #[test]
    fn disjoint_boxes_unchanged() {
        let a = FitBox::new(0.0, 0.0, 5.0, 5.0);
        let b = FitBox::new(5.0, 0.0, 5.0, 5.0);
        let c = FitBox::new(20.0, 20.0, 4.0, 4.0);
        let out = resolve_overlaps(&[a, b, c], &[solid(30, 30)], &cfg());
        assert_eq!(out, vec![a, b, c]);
    }

    #[test]
    fn lower_loss_side_wins() {
        // b overlaps a where a has no wall pixels underneath
        let mut m = BinaryMask::new(40, 20);
        m.fill_rect(PixelRect::new(0, 0, 30, 6), true);
        m.fill_rect(PixelRect::new(24, 6, 6, 14), true);
        let a = FitBox::new(0.0, 0.0, 30.0, 8.0);
        let b = FitBox::new(24.0, 0.0, 6.0, 20.0);
        let regions = [Region::new(m, (0, 0))];
        let (out, events) = resolve_overlaps_traced(&[a, b], &regions, &cfg());
        assert_eq!(out[0].intersection_area(&out[1]), 0.0);
        let e = &events[0];
        assert_eq!(e.loss, e.candidate_losses.0.min(e.candidate_losses.1));
    }

    proptest! {
        #[test]
        fn iou_matches_brute_force(
            w in 1usize..20, h in 1usize..20,
            bits in proptest::collection::vec(any::<bool>(), 400),
            ox in -5i64..5, oy in -5i64..5,
            bx in -8.0f64..25.0, by in -8.0f64..25.0, bw in 0.5f64..25.0, bh in 0.5f64..25.0,
        ) {
            let mut mask = BinaryMask::from_fn(w, h, |x, y| bits[y * 20 + x]);
            mask.set(0, 0, true);
            let r = Region::new(mask, (ox, oy));
            let b = FitBox::new(bx, by, bw, bh);
            let got = region_box_iou_exact(&r, &b).unwrap();
            prop_assert_eq!((got.inter, got.union), brute_iou(&r, &b));
        }

        #[test]
        fn exact_rectangles_recovered(w in 3usize..40, h in 3usize..40) {
            let boxes = shrink_fit(&solid(w, h), &cfg());
            prop_assert_eq!(boxes.len(), 1);
            prop_assert_eq!((boxes[0].w, boxes[0].h), (w as f64, h as f64));
        }

        #[test]
        fn greedy_is_monotone_and_bounded(
            w in 3usize..24, h in 3usize..24,
            bits in proptest::collection::vec(proptest::bool::weighted(0.7), 24 * 24),
        ) {
            let mask = BinaryMask::from_fn(w, h, |x, y| bits[y * 24 + x]);
            let r = Region::new(mask, (0, 0));
            if let Some(t) = shrink_box(&r, &cfg()) {
                for pair in t.ious.windows(2) {
                    prop_assert!(pair[1] > pair[0]);
                }
                prop_assert!(t.iterations() <= t.initial_w + t.initial_h);
            }
        }

        #[test]
        fn fitted_boxes_stay_inside_region_bbox(
            bits in proptest::collection::vec(proptest::bool::weighted(0.75), 20 * 20),
        ) {
            let mask = BinaryMask::from_vec(20, 20, bits);
            if let Some(bb) = mask.bbox() {
                for b in shrink_fit(&Region::new(mask.clone(), (0, 0)), &cfg()) {
                    prop_assert!(b.x >= bb.x as f64 && b.y >= bb.y as f64);
                    prop_assert!(b.right() <= bb.right() as f64 && b.bottom() <= bb.bottom() as f64);
                    prop_assert!(b.w >= 3.0 && b.h >= 3.0);
                }
            }
        }
    }
}
