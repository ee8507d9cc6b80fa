//! Projection of a knot in `H^2 x S^1` to the upper half-plane and its double points.
//!
//! All tests work in the Euclidean chart. The hyperbolic metric is conformal to the
//! Euclidean one, so angles and orientations agree.

use std::fmt::Write as _;

use crate::error::{NonGeneric, Result};
use crate::geom::{self, Box2, SegmentContact, P2};
use crate::model::{shortest_projected_step, HKnot};
use crate::Tolerances;

/// Closed polyline in the upper half-plane with the lift data needed to label
/// double points: the source index and unwrapped `theta` of every vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarCurve {
    vertices: Vec<P2>,
    source: Vec<usize>,
    theta: Vec<f64>,
    winding: i64,
}

impl PlanarCurve {
    pub fn vertices(&self) -> &[P2] {
        &self.vertices
    }

    /// Index of the knot point each vertex came from.
    pub fn source(&self) -> &[usize] {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Endpoints of segment `i` (the last segment closes the curve).
    pub fn segment(&self, i: usize) -> (P2, P2) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn direction(&self, i: usize) -> P2 {
        let (a, b) = self.segment(i);
        geom::sub2(b, a)
    }

    /// Unwrapped `theta` of the lift at arc position `s = i + u`.
    pub fn theta_at(&self, s: f64) -> f64 {
        let n = self.vertices.len();
        let i = (s.floor() as usize).min(n - 1);
        let u = s - i as f64;
        let a = self.theta[i];
        let b = if i + 1 < n {
            self.theta[i + 1]
        } else {
            self.theta[0] + self.winding as f64 * std::f64::consts::TAU
        };
        a + u * (b - a)
    }
}

/// Transversal self-intersection before the preimages are labelled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub seg_a: usize,
    pub seg_b: usize,
    pub u_a: f64,
    pub u_b: f64,
    pub point: P2,
}

/// Labelled double point. `plus_first` says whether the preimage on `seg_a` is
/// `d+`, i.e. whether `(tangent at d+, tangent at d-)` is positively oriented
/// with `d+` on `seg_a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoublePoint {
    pub seg_a: usize,
    pub seg_b: usize,
    pub u_a: f64,
    pub u_b: f64,
    pub point: P2,
    pub plus_first: bool,
    pub theta_plus: f64,
    pub theta_minus: f64,
    /// Arc positions `segment + u` of the two preimages.
    pub s_plus: f64,
    pub s_minus: f64,
    pub sin_angle: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectedDiagram {
    pub curve: PlanarCurve,
    pub doubles: Vec<DoublePoint>,
}

/// Drops `theta`, keeping the back-references.
pub fn project(k: &HKnot, min_step: f64) -> Result<PlanarCurve> {
    let (length, index) = shortest_projected_step(k);
    if !(length >= min_step) {
        return Err(NonGeneric::ZeroLengthSegment { index, length }.into());
    }
    Ok(PlanarCurve {
        vertices: k.projected(),
        source: (0..k.len()).collect(),
        theta: k.points().iter().map(|p| p.theta).collect(),
        winding: k.winding(),
    })
}

fn nonadjacent(n: usize, i: usize, j: usize) -> bool {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    j > i + 1 && !(i == 0 && j == n - 1)
}

/// Classifies one candidate pair; `Ok(None)` when the segments are disjoint.
fn classify(p: &PlanarCurve, i: usize, j: usize, tol: &Tolerances) -> Result<Option<Crossing>> {
    let (a0, a1) = p.segment(i);
    let (b0, b1) = p.segment(j);
    match geom::segment_contact(a0, a1, b0, b1) {
        SegmentContact::Disjoint => Ok(None),
        SegmentContact::Degenerate => {
            let da = p.direction(i);
            let db = p.direction(j);
            if geom::cross2(da, db) == 0.0 {
                Err(NonGeneric::Tangency {
                    seg_a: i,
                    seg_b: j,
                    sin_angle: 0.0,
                }
                .into())
            } else {
                Err(NonGeneric::VertexHit {
                    seg_a: i,
                    seg_b: j,
                    u: 0.0,
                }
                .into())
            }
        }
        SegmentContact::Proper { ua, ub } => {
            for u in [ua, ub] {
                if u < tol.u_tol || u > 1.0 - tol.u_tol {
                    return Err(NonGeneric::VertexHit {
                        seg_a: i,
                        seg_b: j,
                        u,
                    }
                    .into());
                }
            }
            let da = p.direction(i);
            let db = p.direction(j);
            let sin_angle = geom::cross2(da, db).abs() / (geom::norm2(da) * geom::norm2(db));
            if sin_angle < tol.angle_tol.sin() {
                return Err(NonGeneric::Tangency {
                    seg_a: i,
                    seg_b: j,
                    sin_angle,
                }
                .into());
            }
            Ok(Some(Crossing {
                seg_a: i,
                seg_b: j,
                u_a: ua,
                u_b: ub,
                point: [a0[0] + ua * da[0], a0[1] + ua * da[1]],
            }))
        }
    }
}

fn check_separation(crossings: &[Crossing], sep_tol: f64) -> Result<()> {
    for (k, a) in crossings.iter().enumerate() {
        for b in &crossings[k + 1..] {
            let d = geom::norm2(geom::sub2(a.point, b.point));
            if d < sep_tol {
                return Err(NonGeneric::TriplePoint {
                    first: (a.seg_a, a.seg_b),
                    second: (b.seg_a, b.seg_b),
                    distance: d,
                }
                .into());
            }
        }
    }
    Ok(())
}

/// Every transversal self-crossing of the closed polyline, found with a
/// sweep over segment boxes sorted by their left edge, sorted by `(seg_a, u_a)`.
pub fn crossings(p: &PlanarCurve, tol: &Tolerances) -> Result<Vec<Crossing>> {
    let n = p.len();
    let boxes: Vec<Box2> = (0..n)
        .map(|i| {
            let (a, b) = p.segment(i);
            Box2::of_segment(a, b)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| boxes[a].lo[0].total_cmp(&boxes[b].lo[0]).then(a.cmp(&b)));
    let mut found = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if boxes[j].lo[0] > boxes[i].hi[0] {
                break;
            }
            if !nonadjacent(n, i, j) || !boxes[i].overlaps(&boxes[j]) {
                continue;
            }
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            if let Some(c) = classify(p, a, b, tol)? {
                found.push(c);
            }
        }
    }
    found.sort_by(|x, y| x.seg_a.cmp(&y.seg_a).then(x.u_a.total_cmp(&y.u_a)));
    check_separation(&found, tol.sep_tol)?;
    Ok(found)
}

/// Exhaustive all-pairs scan; the reference the sweep in [`crossings`] must match.
pub fn crossings_exhaustive(p: &PlanarCurve, tol: &Tolerances) -> Result<Vec<Crossing>> {
    let n = p.len();
    let mut found = Vec::new();
    for i in 0..n {
        for j in i + 2..n {
            if !nonadjacent(n, i, j) {
                continue;
            }
            if let Some(c) = classify(p, i, j, tol)? {
                found.push(c);
            }
        }
    }
    found.sort_by(|x, y| x.seg_a.cmp(&y.seg_a).then(x.u_a.total_cmp(&y.u_a)));
    check_separation(&found, tol.sep_tol)?;
    Ok(found)
}

/// Assigns `d+`/`d-`: `d+` is the preimage whose projected tangent, followed by
/// the other one, has positive cross product.
pub fn label_preimages(c: &Crossing, p: &PlanarCurve, angle_tol: f64) -> Result<DoublePoint> {
    let da = p.direction(c.seg_a);
    let db = p.direction(c.seg_b);
    let cross = geom::cross2(da, db);
    let sin_angle = cross.abs() / (geom::norm2(da) * geom::norm2(db));
    if !(sin_angle >= angle_tol.sin()) {
        return Err(NonGeneric::Tangency {
            seg_a: c.seg_a,
            seg_b: c.seg_b,
            sin_angle,
        }
        .into());
    }
    let s_a = c.seg_a as f64 + c.u_a;
    let s_b = c.seg_b as f64 + c.u_b;
    let plus_first = cross > 0.0;
    let (s_plus, s_minus) = if plus_first { (s_a, s_b) } else { (s_b, s_a) };
    Ok(DoublePoint {
        seg_a: c.seg_a,
        seg_b: c.seg_b,
        u_a: c.u_a,
        u_b: c.u_b,
        point: c.point,
        plus_first,
        theta_plus: p.theta_at(s_plus),
        theta_minus: p.theta_at(s_minus),
        s_plus,
        s_minus,
        sin_angle,
    })
}

/// Finds and labels all double points of `p`.
pub fn find_double_points(p: PlanarCurve, tol: &Tolerances) -> Result<ProjectedDiagram> {
    let raw = crossings(&p, tol)?;
    let doubles = raw
        .iter()
        .map(|c| label_preimages(c, &p, tol.angle_tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProjectedDiagram { curve: p, doubles })
}

/// `project` followed by `find_double_points`.
pub fn diagram(k: &HKnot, tol: &Tolerances) -> Result<ProjectedDiagram> {
    find_double_points(project(k, tol.min_step)?, tol)
}

impl ProjectedDiagram {
    /// Half the smallest distance from a vertex to a segment not incident to it, also
    /// capped by half the shortest segment. Moving every point by less than this
    /// cannot make a vertex cross a segment, so the set of crossing segment pairs is
    /// unchanged.
    pub fn stability_margin(&self) -> f64 {
        let v = self.curve.vertices();
        let n = v.len();
        let mut best = f64::INFINITY;
        for j in 0..n {
            let (a, b) = self.curve.segment(j);
            best = best.min(geom::norm2(geom::sub2(b, a)));
            let bx = Box2::of_segment(a, b);
            for (i, &p) in v.iter().enumerate() {
                if i == j || i == (j + 1) % n {
                    continue;
                }
                // box rejection
                let gx = (bx.lo[0] - p[0]).max(p[0] - bx.hi[0]).max(0.0);
                let gy = (bx.lo[1] - p[1]).max(p[1] - bx.hi[1]).max(0.0);
                if gx.hypot(gy) >= best {
                    continue;
                }
                best = best.min(geom::point_segment_distance2(p, a, b));
            }
        }
        0.5 * best
    }

    /// Golden-file dump: one `d k seg_a u_a seg_b u_b x y plus_first` line per double point.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (k, d) in self.doubles.iter().enumerate() {
            let _ = writeln!(
                out,
                "d {k} {} {} {} {} {} {} {}",
                d.seg_a,
                d.u_a,
                d.seg_b,
                d.u_b,
                d.point[0],
                d.point[1],
                u8::from(d.plus_first)
            );
        }
        out
    }
}
