use std::fmt::Write;

use crate::planio::{OpeningKind, PlanVectorization};

const WALL_FILL: &str = "#00A000";
const DOOR_FILL: &str = "#0000FF";
const WINDOW_FILL: &str = "#FF0000";

/// Trims trailing zeros so output stays short and stable.
fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// SVG 1.1 rendering: walls in green, doors blue, windows red.
///
/// A wall is drawn as its frame rectangle with a `rotate(θ 0 0)` transform,
/// which maps frame coordinates back into the image.
pub fn emit_svg(plan: &PlanVectorization) -> Vec<u8> {
    let mut s = String::new();
    let (w, h) = (plan.source_width, plan.source_height);
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    let mut walls: Vec<_> = plan.walls.iter().collect();
    walls.sort_by_key(|b| b.id);
    for b in walls {
        write!(
            s,
            r#"<rect id="wall-{}" x="{}" y="{}" width="{}" height="{}" fill="{WALL_FILL}""#,
            b.id,
            num(b.x),
            num(b.y),
            num(b.w),
            num(b.h)
        )
        .unwrap();
        if b.frame_angle_deg != 0.0 {
            write!(s, r#" transform="rotate({} 0 0)""#, num(b.frame_angle_deg)).unwrap();
        }
        s.push_str("/>\n");
    }
    for sym in &plan.symbols {
        let fill = match sym.kind {
            OpeningKind::Door => DOOR_FILL,
            OpeningKind::Window => WINDOW_FILL,
        };
        writeln!(
            s,
            r#"<rect class="{}" x="{}" y="{}" width="{}" height="{}" fill="{fill}" fill-opacity="0.6"/>"#,
            sym.kind.as_str(),
            num(sym.x),
            num(sym.y),
            num(sym.w),
            num(sym.h)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planio::OpeningSymbol;
    use crate::wall::WallBox;

    fn rects(svg: &str) -> Vec<&str> {
        svg.lines().filter(|l| l.starts_with("<rect")).collect()
    }

    fn attr<'a>(el: &'a str, name: &str) -> Option<&'a str> {
        let key = format!(" {name}=\"");
        let start = el.find(&key)? + key.len();
        Some(&el[start..start + el[start..].find('"')?])
    }

    #[test]
    fn empty_plan_is_bare_root() {
        let svg = String::from_utf8(emit_svg(&PlanVectorization {
            source_width: 64,
            source_height: 32,
            ..Default::default()
        }))
        .unwrap();
        assert!(rects(&svg).is_empty());
        assert_eq!(svg.matches("<svg").count(), 1);
        assert!(svg.contains(r#"viewBox="0 0 64 32""#));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn colors_and_order() {
        let plan = PlanVectorization {
            source_width: 100,
            source_height: 100,
            walls: vec![WallBox::new(0, 0.0, 10.0, 10.0, 50.0, 6.0)],
            symbols: vec![
                OpeningSymbol::new(OpeningKind::Door, 20.0, 8.0, 12.0, 10.0),
                OpeningSymbol::new(OpeningKind::Window, 40.0, 8.0, 8.0, 10.0),
            ],
            diagnostics: vec![],
        };
        let svg = String::from_utf8(emit_svg(&plan)).unwrap();
        let fills: Vec<_> = rects(&svg).iter().map(|r| attr(r, "fill").unwrap()).collect();
        assert_eq!(fills, ["#00A000", "#0000FF", "#FF0000"]);
        assert!(attr(rects(&svg)[0], "transform").is_none());
        assert_eq!(emit_svg(&plan), emit_svg(&plan));
    }

    #[test]
    fn rotated_wall_transform() {
        let plan = PlanVectorization {
            source_width: 100,
            source_height: 100,
            walls: vec![WallBox::new(3, 30.0, 40.0, -10.0, 50.0, 6.0)],
            ..Default::default()
        };
        let svg = String::from_utf8(emit_svg(&plan)).unwrap();
        let r = rects(&svg)[0];
        assert_eq!(attr(r, "transform"), Some("rotate(30 0 0)"));
        assert_eq!(attr(r, "y"), Some("-10"));
    }
}
