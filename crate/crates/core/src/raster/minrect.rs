use crate::error::{invalid, Result};

/// Rectangle of arbitrary orientation. `size.0` runs along `angle_deg`,
/// `size.1` across it; the angle is normalized to `[0, 90)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotatedRect {
    pub center: (f64, f64),
    pub size: (f64, f64),
    pub angle_deg: f64,
}

impl RotatedRect {
    pub fn area(&self) -> f64 {
        self.size.0 * self.size.1
    }
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Convex hull by monotone chain, counter-clockwise in a y-up sense,
/// collinear points dropped.
pub fn convex_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Minimum-area enclosing rectangle by rotating calipers over the hull
/// edges.
pub fn min_area_rect(points: &[(f64, f64)]) -> Result<RotatedRect> {
    if points.is_empty() {
        return Err(invalid("min_area_rect needs at least one point"));
    }
    let hull = convex_hull(points);
    if hull.len() == 1 {
        return Ok(RotatedRect {
            center: hull[0],
            size: (0.0, 0.0),
            angle_deg: 0.0,
        });
    }

    let mut best: Option<(f64, RotatedRect)> = None;
    let n = hull.len();
    let edges = if n == 2 { 1 } else { n };
    for i in 0..edges {
        let a = hull[i];
        let b = hull[(i + 1) % n];
        let len = (b.0 - a.0).hypot(b.1 - a.1);
        if len == 0.0 {
            continue;
        }
        let u = ((b.0 - a.0) / len, (b.1 - a.1) / len);
        let v = (-u.1, u.0);
        let (mut umin, mut umax, mut vmin, mut vmax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in &hull {
            let pu = p.0 * u.0 + p.1 * u.1;
            let pv = p.0 * v.0 + p.1 * v.1;
            umin = umin.min(pu);
            umax = umax.max(pu);
            vmin = vmin.min(pv);
            vmax = vmax.max(pv);
        }
        let area = (umax - umin) * (vmax - vmin);
        if best.as_ref().is_some_and(|(a, _)| *a <= area) {
            continue;
        }
        let cu = (umin + umax) / 2.0;
        let cv = (vmin + vmax) / 2.0;
        let center = (cu * u.0 + cv * v.0, cu * u.1 + cv * v.1);
        let mut angle = u.1.atan2(u.0).to_degrees().rem_euclid(180.0);
        let mut size = (umax - umin, vmax - vmin);
        if angle >= 90.0 {
            angle -= 90.0;
            size = (size.1, size.0);
        }
        if angle >= 90.0 - 1e-9 || angle < 1e-9 {
            if angle >= 45.0 {
                size = (size.1, size.0);
            }
            angle = 0.0;
        }
        best = Some((
            area,
            RotatedRect {
                center,
                size,
                angle_deg: angle,
            },
        ));
    }
    Ok(best.expect("hull with distinct points has an edge").1)
}
