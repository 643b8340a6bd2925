use serde::{Deserialize, Serialize};

use super::{OpeningKind, Opening3D, Scene3D, Wall3D};
use crate::error::{invalid, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    unit: String,
    scale: f64,
    walls: Vec<DocWall>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocWall {
    id: u32,
    footprint: [[f64; 2]; 4],
    height: f64,
    openings: Vec<DocOpening>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocOpening {
    kind: OpeningKind,
    along_offset: f64,
    width: f64,
    sill: f64,
    height: f64,
}

fn r6(v: f64) -> f64 {
    let r = (v * 1e6).round() / 1e6;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Compact JSON with keys `unit`, `scale`, `walls`; lengths in meters
/// rounded to six decimals.
pub fn export_semantic_json(scene: &Scene3D) -> Vec<u8> {
    let mut walls: Vec<&Wall3D> = scene.walls.iter().collect();
    walls.sort_by_key(|w| w.id);
    let doc = Doc {
        unit: Scene3D::UNIT.into(),
        scale: scene.scale_m_per_px,
        walls: walls
            .into_iter()
            .map(|w| DocWall {
                id: w.id,
                footprint: w.footprint.map(|(x, y)| [r6(x), r6(y)]),
                height: r6(w.height_m),
                openings: w
                    .openings
                    .iter()
                    .map(|o| DocOpening {
                        kind: o.kind,
                        along_offset: r6(o.along_offset_m),
                        width: r6(o.width_m),
                        sill: r6(o.sill_m),
                        height: r6(o.height_m),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_vec(&doc).expect("scene serializes")
}

pub fn import_semantic_json(bytes: &[u8]) -> Result<Scene3D> {
    let doc: Doc = serde_json::from_slice(bytes)?;
    if doc.unit != Scene3D::UNIT {
        return Err(invalid(format!("unit must be \"m\", got {:?}", doc.unit)));
    }
    if !(doc.scale.is_finite() && doc.scale > 0.0) {
        return Err(invalid(format!("scale must be positive, got {}", doc.scale)));
    }
    Ok(Scene3D {
        scale_m_per_px: doc.scale,
        walls: doc
            .walls
            .into_iter()
            .map(|w| Wall3D {
                id: w.id,
                footprint: w.footprint.map(|[x, y]| (x, y)),
                height_m: w.height,
                openings: w
                    .openings
                    .into_iter()
                    .map(|o| Opening3D {
                        wall_id: w.id,
                        kind: o.kind,
                        along_offset_m: o.along_offset,
                        width_m: o.width,
                        sill_m: o.sill,
                        height_m: o.height,
                    })
                    .collect(),
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::PipelineConfig;
    use crate::reconstruct::{build_scene, fit_opening, OpeningSymbol};
    use crate::wall::WallBox;

    #[test]
    fn empty_scene() {
        let s = build_scene(&[], &[], &PipelineConfig::default());
        assert_eq!(export_semantic_json(&s), br#"{"unit":"m","scale":0.02,"walls":[]}"#);
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let cfg = PipelineConfig::default();
        let walls = [
            WallBox::new(3, 0.0, 0.0, 0.0, 200.0, 10.0),
            WallBox::new(1, 27.5, 40.3, 60.1, 77.7, 8.3),
        ];
        let sym = OpeningSymbol::new(OpeningKind::Window, 60.0, -2.0, 33.3, 14.0);
        let o = fit_opening(&sym, &walls[0], &cfg).unwrap();
        let a = export_semantic_json(&build_scene(&walls, &[o], &cfg));
        let back = import_semantic_json(&a).unwrap();
        assert_eq!(export_semantic_json(&back), a);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with(r#"{"unit":"m","scale":0.02,"walls":[{"id":1,"#), "{text}");
        assert!(text.contains(r#""kind":"window""#));
    }

    #[test]
    fn rejects_other_units() {
        let e = import_semantic_json(br#"{"unit":"ft","scale":0.02,"walls":[]}"#);
        assert!(e.is_err());
        assert!(import_semantic_json(b"{").is_err());
    }
}
