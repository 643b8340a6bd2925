use std::collections::HashMap;
use std::fmt::Write;

use super::{Opening3D, Scene3D, Wall3D};

/// Indexed triangle mesh with 0-based indices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
}

impl Mesh {
    /// How many triangles use each undirected edge.
    pub fn edge_incidence(&self) -> HashMap<(usize, usize), usize> {
        let mut m = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *m.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        m
    }

    /// Every edge in exactly two triangles and no triangle repeated.
    pub fn is_closed_manifold(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        for t in &self.triangles {
            let mut k = *t;
            k.sort_unstable();
            if !seen.insert(k) {
                return false;
            }
        }
        self.edge_incidence().values().all(|&n| n == 2)
    }

    /// Signed volume; positive when faces point outward.
    pub fn volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|i| self.vertices[i]);
                dot(a, cross(b, c)) / 6.0
            })
            .sum()
    }
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

type P2 = (f64, f64);

fn cross2(o: P2, a: P2, b: P2) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn signed_area(poly: &[P2]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum::<f64>()
        / 2.0
}

/// Boundary loops of the wall face `[0, len] × [0, height]` minus the
/// openings, in (along, up) coordinates, each with the solid on its left.
/// Outer loops run counter-clockwise, holes clockwise.
fn face_loops(len: f64, height: f64, openings: &[Opening3D]) -> Vec<Vec<P2>> {
    let rects: Vec<(f64, f64, f64, f64)> = openings
        .iter()
        .map(|o| {
            (
                o.along_offset_m.clamp(0.0, len),
                o.end_m().clamp(0.0, len),
                o.sill_m.clamp(0.0, height),
                o.top_m().clamp(0.0, height),
            )
        })
        .collect();
    let mut xs = vec![0.0, len];
    let mut zs = vec![0.0, height];
    for r in &rects {
        xs.extend([r.0, r.1]);
        zs.extend([r.2, r.3]);
    }
    for v in [&mut xs, &mut zs] {
        v.sort_by(f64::total_cmp);
        v.dedup();
    }
    let (nx, nz) = (xs.len() - 1, zs.len() - 1);
    let filled = |i: i64, j: i64| -> bool {
        if i < 0 || j < 0 || i >= nx as i64 || j >= nz as i64 {
            return false;
        }
        let c = (
            (xs[i as usize] + xs[i as usize + 1]) / 2.0,
            (zs[j as usize] + zs[j as usize + 1]) / 2.0,
        );
        !rects
            .iter()
            .any(|r| c.0 > r.0 && c.0 < r.1 && c.1 > r.2 && c.1 < r.3)
    };

    // directed boundary edges between grid nodes, solid on the left
    let mut edges: Vec<((usize, usize), (usize, usize))> = Vec::new();
    for j in 0..nz {
        for i in 0..nx {
            let (ii, jj) = (i as i64, j as i64);
            if !filled(ii, jj) {
                continue;
            }
            if !filled(ii, jj - 1) {
                edges.push(((i, j), (i + 1, j)));
            }
            if !filled(ii + 1, jj) {
                edges.push(((i + 1, j), (i + 1, j + 1)));
            }
            if !filled(ii, jj + 1) {
                edges.push(((i + 1, j + 1), (i, j + 1)));
            }
            if !filled(ii - 1, jj) {
                edges.push(((i, j + 1), (i, j)));
            }
        }
    }
    let mut out_of: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (k, e) in edges.iter().enumerate() {
        out_of.entry(e.0).or_default().push(k);
    }
    let mut used = vec![false; edges.len()];
    let mut loops = Vec::new();
    for start in 0..edges.len() {
        if used[start] {
            continue;
        }
        let mut nodes = Vec::new();
        let mut k = start;
        loop {
            used[k] = true;
            nodes.push(edges[k].0);
            let at = edges[k].1;
            if at == edges[start].0 {
                break;
            }
            k = *out_of[&at]
                .iter()
                .find(|&&e| !used[e])
                .expect("boundary edges form closed loops");
        }
        // drop nodes in the middle of straight runs
        let n = nodes.len();
        let pts: Vec<P2> = (0..n)
            .filter(|&i| {
                let (p, c, q) = (nodes[(i + n - 1) % n], nodes[i], nodes[(i + 1) % n]);
                let d1 = (c.0 as i64 - p.0 as i64, c.1 as i64 - p.1 as i64);
                let d2 = (q.0 as i64 - c.0 as i64, q.1 as i64 - c.1 as i64);
                d1.0 * d2.1 - d1.1 * d2.0 != 0
            })
            .map(|i| (xs[nodes[i].0], zs[nodes[i].1]))
            .collect();
        loops.push(pts);
    }
    loops
}

fn point_in_polygon(p: P2, poly: &[P2]) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a.1 > p.1) != (b.1 > p.1) {
            let x = a.0 + (p.1 - a.1) * (b.0 - a.0) / (b.1 - a.1);
            if p.0 < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Proper crossing of segments `ab` and `cd` (shared endpoints excluded).
fn segments_cross(a: P2, b: P2, c: P2, d: P2) -> bool {
    if a == c || a == d || b == c || b == d {
        return false;
    }
    let d1 = cross2(c, d, a);
    let d2 = cross2(c, d, b);
    let d3 = cross2(a, b, c);
    let d4 = cross2(a, b, d);
    let on = |o: P2, p: P2, q: P2, v: f64| {
        v == 0.0 && q.0 >= o.0.min(p.0) && q.0 <= o.0.max(p.0) && q.1 >= o.1.min(p.1) && q.1 <= o.1.max(p.1)
    };
    ((d1 > 0.0) != (d2 > 0.0) && d1 != 0.0 && d2 != 0.0 && (d3 > 0.0) != (d4 > 0.0) && d3 != 0.0 && d4 != 0.0)
        || on(c, d, a, d1)
        || on(c, d, b, d2)
        || on(a, b, c, d3)
        || on(a, b, d, d4)
}

/// Triangulates an outer loop with holes. Loops hold indices into `pts`.
fn triangulate(pts: &[P2], outer: &[usize], holes: &[Vec<usize>]) -> Vec<[usize; 3]> {
    let mut poly: Vec<usize> = outer.to_vec();
    let mut holes: Vec<&Vec<usize>> = holes.iter().collect();
    // rightmost holes first keeps every bridge visible
    holes.sort_by(|a, b| {
        let mx = |h: &Vec<usize>| h.iter().map(|&i| pts[i].0).fold(f64::MIN, f64::max);
        mx(b).total_cmp(&mx(a))
    });
    for (hi, hole) in holes.iter().enumerate() {
        let m_pos = (0..hole.len())
            .max_by(|&a, &b| {
                pts[hole[a]]
                    .0
                    .total_cmp(&pts[hole[b]].0)
                    .then(pts[hole[b]].1.total_cmp(&pts[hole[a]].1))
            })
            .unwrap();
        let m = pts[hole[m_pos]];
        let mut all_edges: Vec<(P2, P2)> = Vec::new();
        for k in 0..poly.len() {
            all_edges.push((pts[poly[k]], pts[poly[(k + 1) % poly.len()]]));
        }
        for h in &holes[hi..] {
            for k in 0..h.len() {
                all_edges.push((pts[h[k]], pts[h[(k + 1) % h.len()]]));
            }
        }
        let mut candidates: Vec<usize> = (0..poly.len()).collect();
        candidates.sort_by(|&a, &b| {
            let da = (pts[poly[a]].0 - m.0).hypot(pts[poly[a]].1 - m.1);
            let db = (pts[poly[b]].0 - m.0).hypot(pts[poly[b]].1 - m.1);
            da.total_cmp(&db).then(a.cmp(&b))
        });
        let p_pos = candidates
            .into_iter()
            .find(|&c| {
                let p = pts[poly[c]];
                // the bridge must leave P into the solid
                let n = poly.len();
                let (prev, next) = (pts[poly[(c + n - 1) % n]], pts[poly[(c + 1) % n]]);
                let inside_cone = if cross2(prev, p, next) >= 0.0 {
                    cross2(prev, p, m) > 0.0 && cross2(p, next, m) > 0.0
                } else {
                    !(cross2(prev, p, m) <= 0.0 && cross2(p, next, m) <= 0.0)
                };
                inside_cone && !all_edges.iter().any(|&(a, b)| segments_cross(p, m, a, b))
            })
            .expect("a hole always sees some outer vertex");
        let mut spliced = Vec::with_capacity(poly.len() + hole.len() + 2);
        spliced.extend_from_slice(&poly[..=p_pos]);
        for k in 0..=hole.len() {
            spliced.push(hole[(m_pos + k) % hole.len()]);
        }
        spliced.push(poly[p_pos]);
        spliced.extend_from_slice(&poly[p_pos + 1..]);
        poly = spliced;
    }

    let mut tris = Vec::new();
    let mut guard = 0;
    while poly.len() > 3 {
        let n = poly.len();
        let ear = (0..n).find(|&i| {
            let (a, b, c) = (poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]);
            let (pa, pb, pc) = (pts[a], pts[b], pts[c]);
            if cross2(pa, pb, pc) <= 0.0 {
                return false;
            }
            !poly.iter().any(|&v| {
                let pv = pts[v];
                if pv == pa || pv == pb || pv == pc {
                    return false;
                }
                cross2(pa, pb, pv) >= 0.0 && cross2(pb, pc, pv) >= 0.0 && cross2(pc, pa, pv) >= 0.0
            })
        });
        let Some(i) = ear else {
            // only collinear slivers remain; they carry no area
            guard += 1;
            assert!(guard < 4, "ear clipping stalled");
            poly.retain({
                let n = poly.len();
                let snapshot = poly.clone();
                let mut k = 0;
                move |_| {
                    let keep = cross2(
                        pts[snapshot[(k + n - 1) % n]],
                        pts[snapshot[k]],
                        pts[snapshot[(k + 1) % n]],
                    ) != 0.0;
                    k += 1;
                    keep
                }
            });
            continue;
        };
        tris.push([poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]]);
        poly.remove(i);
    }
    if poly.len() == 3 && cross2(pts[poly[0]], pts[poly[1]], pts[poly[2]]) > 0.0 {
        tris.push([poly[0], poly[1], poly[2]]);
    }
    tris
}

/// Closed mesh of one wall.
///
/// Vertex order: every loop vertex of the front face (outer loops first, in
/// the order their lowest-left edge is met, each starting there and running
/// counter-clockwise; holes clockwise), then the same sequence on the back
/// face. Coordinates are `(x, height, y)` in meters, with the plan's x and y
/// on the ground and height pointing up.
pub fn wall_mesh(wall: &Wall3D) -> Mesh {
    let [c0, c1, _, c3] = wall.footprint;
    let len = wall.length_m();
    let thick = wall.thickness_m();
    let axis = ((c1.0 - c0.0) / len, (c1.1 - c0.1) / len);
    let across = (c3.0 - c0.0, c3.1 - c0.1);

    let loops = face_loops(len, wall.height_m, &wall.openings);
    let mut pts: Vec<P2> = Vec::new();
    let mut ranges = Vec::new();
    for l in &loops {
        ranges.push(pts.len()..pts.len() + l.len());
        pts.extend_from_slice(l);
    }
    let n = pts.len();
    let to3 = |p: P2, back: bool| -> [f64; 3] {
        let t = if back { 1.0 } else { 0.0 };
        [
            c0.0 + axis.0 * p.0 + across.0 * t,
            p.1,
            c0.1 + axis.1 * p.0 + across.1 * t,
        ]
    };
    let mut mesh = Mesh::default();
    mesh.vertices.extend(pts.iter().map(|&p| to3(p, false)));
    mesh.vertices.extend(pts.iter().map(|&p| to3(p, true)));

    let push = |mesh: &mut Mesh, t: [usize; 3], outward: [f64; 3]| {
        let [a, b, c] = t.map(|i| mesh.vertices[i]);
        let nrm = cross(sub(b, a), sub(c, a));
        if dot(nrm, outward) >= 0.0 {
            mesh.triangles.push(t);
        } else {
            mesh.triangles.push([t[0], t[2], t[1]]);
        }
    };

    let across3 = [across.0 / thick, 0.0, across.1 / thick];
    let front_out = [-across3[0], 0.0, -across3[2]];
    let outer: Vec<usize> = (0..loops.len()).filter(|&i| signed_area(&loops[i]) > 0.0).collect();
    for &o in &outer {
        let holes: Vec<Vec<usize>> = (0..loops.len())
            .filter(|&h| signed_area(&loops[h]) < 0.0 && point_in_polygon(loops[h][0], &loops[o]))
            .map(|h| ranges[h].clone().collect())
            .collect();
        let outer_idx: Vec<usize> = ranges[o].clone().collect();
        for t in triangulate(&pts, &outer_idx, &holes) {
            push(&mut mesh, t, front_out);
            push(&mut mesh, t.map(|i| i + n), across3);
        }
    }
    for r in &ranges {
        let idx: Vec<usize> = r.clone().collect();
        for k in 0..idx.len() {
            let (u, v) = (idx[k], idx[(k + 1) % idx.len()]);
            let (du, dz) = (pts[v].0 - pts[u].0, pts[v].1 - pts[u].1);
            // solid lies left of the edge, so outward is to its right
            let out = [axis.0 * dz, -du, axis.1 * dz];
            push(&mut mesh, [u, v, v + n], out);
            push(&mut mesh, [u, v + n, u + n], out);
        }
    }
    mesh
}

fn fmt6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// ASCII OBJ of the scene, walls in id order, 1-based indices.
pub fn export_obj(scene: &Scene3D, config_hash: &str) -> Vec<u8> {
    let mut s = String::new();
    writeln!(s, "# {} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")).unwrap();
    writeln!(s, "# config {config_hash}").unwrap();
    let mut walls: Vec<&Wall3D> = scene.walls.iter().collect();
    walls.sort_by_key(|w| w.id);
    let mut base = 1;
    for w in walls {
        let mesh = wall_mesh(w);
        writeln!(s, "o wall_{}", w.id).unwrap();
        for v in &mesh.vertices {
            writeln!(s, "v {} {} {}", fmt6(v[0]), fmt6(v[1]), fmt6(v[2])).unwrap();
        }
        for t in &mesh.triangles {
            writeln!(s, "f {} {} {}", t[0] + base, t[1] + base, t[2] + base).unwrap();
        }
        base += mesh.vertices.len();
    }
    s.into_bytes()
}
