//! Metric 3D reconstruction: openings are matched to their host walls, walls
//! become extruded prisms with rectangular through-holes, and the scene is
//! exported as OBJ and as a small semantic JSON document.

mod mesh;
mod semantic;

use serde::{Deserialize, Serialize};

use crate::config::PipelineConfig;
use crate::error::{Error, Result};
pub use crate::planio::{OpeningKind, OpeningSymbol};
use crate::planio::PlanVectorization;
use crate::wall::WallBox;

pub use mesh::{export_obj, wall_mesh, Mesh};
pub use semantic::{export_semantic_json, import_semantic_json};

/// Smallest opening width, in meters.
pub const MIN_OPENING_M: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Opening3D {
    pub wall_id: u32,
    pub kind: OpeningKind,
    pub along_offset_m: f64,
    pub width_m: f64,
    pub sill_m: f64,
    pub height_m: f64,
}

impl Opening3D {
    pub fn end_m(&self) -> f64 {
        self.along_offset_m + self.width_m
    }

    pub fn top_m(&self) -> f64 {
        self.sill_m + self.height_m
    }
}

/// One extruded wall: footprint corners in meters (start, end, then back
/// across the thickness) and its openings sorted along the axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Wall3D {
    pub id: u32,
    pub footprint: [(f64, f64); 4],
    pub height_m: f64,
    pub openings: Vec<Opening3D>,
}

impl Wall3D {
    pub fn length_m(&self) -> f64 {
        dist(self.footprint[0], self.footprint[1])
    }

    pub fn thickness_m(&self) -> f64 {
        dist(self.footprint[0], self.footprint[3])
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (b.0 - a.0).hypot(b.1 - a.1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scene3D {
    pub scale_m_per_px: f64,
    pub walls: Vec<Wall3D>,
}

impl Scene3D {
    pub const UNIT: &'static str = "m";
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Matching {
    /// `(symbol index, wall id)` in symbol order.
    pub matched: Vec<(usize, u32)>,
    pub unmatched: Vec<usize>,
}

/// Number of pixels whose centers lie in both the symbol bbox and the wall.
pub fn overlap_pixels(symbol: &OpeningSymbol, wall: &WallBox) -> usize {
    let x0 = (symbol.x - 0.5).ceil() as i64;
    let y0 = (symbol.y - 0.5).ceil() as i64;
    let x1 = (symbol.x + symbol.w - 0.5).ceil() as i64;
    let y1 = (symbol.y + symbol.h - 0.5).ceil() as i64;
    let mut n = 0;
    for y in y0..y1 {
        for x in x0..x1 {
            let c = (x as f64 + 0.5, y as f64 + 0.5);
            n += wall.contains_frame(wall.to_frame(c)) as usize;
        }
    }
    n
}

/// Assigns each symbol to the wall it overlaps most, ties to the smaller
/// id. Symbols touching no wall are reported as unmatched.
pub fn match_openings(walls: &[WallBox], symbols: &[OpeningSymbol]) -> Matching {
    let mut out = Matching::default();
    for (i, s) in symbols.iter().enumerate() {
        let best = walls
            .iter()
            .map(|w| (overlap_pixels(s, w), w.id))
            .filter(|&(n, _)| n > 0)
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        match best {
            Some((_, id)) => out.matched.push((i, id)),
            None => out.unmatched.push(i),
        }
    }
    out
}

/// Adapts a symbol to its host wall: the bbox is projected onto the wall
/// axis, clamped to the wall, and given the configured heights.
pub fn fit_opening(symbol: &OpeningSymbol, wall: &WallBox, cfg: &PipelineConfig) -> Result<Opening3D> {
    let scale = cfg.pixel_scale_m_per_px;
    let length_m = wall.length() * scale;
    if length_m < MIN_OPENING_M {
        return Err(Error::OpeningRejected(format!(
            "wall {} is {length_m:.3} m long, shorter than the {MIN_OPENING_M} m minimum opening",
            wall.id
        )));
    }
    let (ax, ay) = wall.axis();
    let extent_px = (symbol.w * ax).abs() + (symbol.h * ay).abs();
    let width_m = (extent_px * scale).clamp(MIN_OPENING_M, length_m);
    let centre_m = wall.along(symbol.center()) * scale;
    let along_offset_m = (centre_m - width_m / 2.0).clamp(0.0, length_m - width_m);

    let (sill_m, height_m) = match symbol.kind {
        OpeningKind::Door => (0.0, cfg.door_height_m),
        OpeningKind::Window => (cfg.window_sill_m, cfg.window_height_m),
    };
    if sill_m >= cfg.wall_height_m {
        return Err(Error::OpeningRejected(format!(
            "{} sill {sill_m} m is not below the wall height {} m",
            symbol.kind.as_str(),
            cfg.wall_height_m
        )));
    }
    Ok(Opening3D {
        wall_id: wall.id,
        kind: symbol.kind,
        along_offset_m,
        width_m,
        sill_m,
        height_m: height_m.min(cfg.wall_height_m - sill_m),
    })
}

/// Merges openings whose spans along the wall overlap or touch into their
/// bounding rectangle. A merge containing a door stays a door.
fn merge_openings(mut openings: Vec<Opening3D>) -> Vec<Opening3D> {
    openings.sort_by(|a, b| {
        a.along_offset_m
            .total_cmp(&b.along_offset_m)
            .then(a.end_m().total_cmp(&b.end_m()))
    });
    let mut out: Vec<Opening3D> = Vec::new();
    for o in openings {
        match out.last_mut() {
            Some(last) if o.along_offset_m <= last.end_m() => {
                let end = last.end_m().max(o.end_m());
                let sill = last.sill_m.min(o.sill_m);
                let top = last.top_m().max(o.top_m());
                last.width_m = end - last.along_offset_m;
                last.sill_m = sill;
                last.height_m = top - sill;
                if o.kind == OpeningKind::Door {
                    last.kind = OpeningKind::Door;
                }
            }
            _ => out.push(o),
        }
    }
    out
}

/// Turns walls into metric prisms and attaches the openings, merged per
/// wall. Walls are ordered by id.
pub fn build_scene(walls: &[WallBox], openings: &[Opening3D], cfg: &PipelineConfig) -> Scene3D {
    let scale = cfg.pixel_scale_m_per_px;
    let mut sorted: Vec<&WallBox> = walls.iter().collect();
    sorted.sort_by_key(|w| w.id);
    let walls = sorted
        .into_iter()
        .map(|w| Wall3D {
            id: w.id,
            footprint: w.corners().map(|(x, y)| (x * scale, y * scale)),
            height_m: cfg.wall_height_m,
            openings: merge_openings(
                openings.iter().filter(|o| o.wall_id == w.id).copied().collect(),
            ),
        })
        .collect();
    Scene3D {
        scale_m_per_px: scale,
        walls,
    }
}

/// Everything the reconstruction of a plan produced.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub scene: Scene3D,
    pub matching: Matching,
    pub diagnostics: Vec<String>,
}

/// Match, fit and extrude a vectorized plan.
pub fn reconstruct(plan: &PlanVectorization, cfg: &PipelineConfig) -> Reconstruction {
    let matching = match_openings(&plan.walls, &plan.symbols);
    let mut diagnostics = Vec::new();
    for &i in &matching.unmatched {
        diagnostics.push(format!(
            "symbol {i} ({}) overlaps no wall; left out of the model",
            plan.symbols[i].kind.as_str()
        ));
    }
    let mut openings = Vec::new();
    for &(i, id) in &matching.matched {
        let wall = plan.walls.iter().find(|w| w.id == id).expect("matched id exists");
        match fit_opening(&plan.symbols[i], wall, cfg) {
            Ok(o) => openings.push(o),
            Err(e) => diagnostics.push(format!("symbol {i}: {e}")),
        }
    }
    Reconstruction {
        scene: build_scene(&plan.walls, &openings, cfg),
        matching,
        diagnostics,
    }
}
