//! Planar and spatial primitives shared by the projection, oracle and front code.
//!
//! Orientation signs come from adaptive-precision predicates and are exact for the
//! given floating-point coordinates. Intersection parameters and distances are
//! ordinary floating point.

use std::collections::HashMap;

use robust::{Coord, Coord3D};

pub type P2 = [f64; 2];
pub type P3 = [f64; 3];

/// Twice the signed area of `(a, b, c)`; positive when counterclockwise. The sign is exact.
#[inline]
pub fn orient2d(a: P2, b: P2, c: P2) -> f64 {
    robust::orient2d(
        Coord { x: a[0], y: a[1] },
        Coord { x: b[0], y: b[1] },
        Coord { x: c[0], y: c[1] },
    )
}

/// Value with the exact sign of `det(b - a, c - a, d - a)`.
#[inline]
pub fn orient3d(a: P3, b: P3, c: P3, d: P3) -> f64 {
    let c3 = |p: P3| Coord3D {
        x: p[0],
        y: p[1],
        z: p[2],
    };
    // robust's convention is the opposite sign.
    -robust::orient3d(c3(a), c3(b), c3(c), c3(d))
}

#[inline]
pub fn sub2(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn cross2(a: P2, b: P2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn dot2(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn norm2(a: P2) -> f64 {
    a[0].hypot(a[1])
}

#[inline]
pub fn sub3(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn add3(a: P3, b: P3) -> P3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn scale3(a: P3, s: f64) -> P3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn dot3(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross3(a: P3, b: P3) -> P3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm3(a: P3) -> f64 {
    dot3(a, a).sqrt()
}

/// How two closed segments meet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SegmentContact {
    Disjoint,
    /// Interiors cross at a single point; `ua`, `ub` are the parameters along each segment.
    Proper {
        ua: f64,
        ub: f64,
    },
    /// Touching at an endpoint or overlapping collinearly.
    Degenerate,
}

/// Classifies the contact of segments `a0a1` and `b0b1` using exact orientation signs.
pub fn segment_contact(a0: P2, a1: P2, b0: P2, b1: P2) -> SegmentContact {
    let o1 = orient2d(a0, a1, b0);
    let o2 = orient2d(a0, a1, b1);
    if (o1 > 0.0 && o2 > 0.0) || (o1 < 0.0 && o2 < 0.0) {
        return SegmentContact::Disjoint;
    }
    let o3 = orient2d(b0, b1, a0);
    let o4 = orient2d(b0, b1, a1);
    if (o3 > 0.0 && o4 > 0.0) || (o3 < 0.0 && o4 < 0.0) {
        return SegmentContact::Disjoint;
    }
    if o1 == 0.0 && o2 == 0.0 {
        // collinear: overlap test along the dominant axis
        let axis = if (a1[0] - a0[0]).abs() >= (a1[1] - a0[1]).abs() {
            0
        } else {
            1
        };
        let (alo, ahi) = min_max(a0[axis], a1[axis]);
        let (blo, bhi) = min_max(b0[axis], b1[axis]);
        return if ahi < blo || bhi < alo {
            SegmentContact::Disjoint
        } else {
            SegmentContact::Degenerate
        };
    }
    if o1 == 0.0 || o2 == 0.0 || o3 == 0.0 || o4 == 0.0 {
        return SegmentContact::Degenerate;
    }
    let ua = o3 / (o3 - o4);
    let ub = o1 / (o1 - o2);
    SegmentContact::Proper { ua, ub }
}

#[inline]
fn min_max(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Axis-aligned box of a planar segment, for cheap rejection.
#[derive(Clone, Copy, Debug)]
pub struct Box2 {
    pub lo: P2,
    pub hi: P2,
}

impl Box2 {
    pub fn of_segment(a: P2, b: P2) -> Self {
        Self {
            lo: [a[0].min(b[0]), a[1].min(b[1])],
            hi: [a[0].max(b[0]), a[1].max(b[1])],
        }
    }

    #[inline]
    pub fn overlaps(&self, other: &Box2) -> bool {
        self.lo[0] <= other.hi[0]
            && other.lo[0] <= self.hi[0]
            && self.lo[1] <= other.hi[1]
            && other.lo[1] <= self.hi[1]
    }
}

/// Axis-aligned box of a spatial segment.
#[derive(Clone, Copy, Debug)]
pub struct Box3 {
    pub lo: P3,
    pub hi: P3,
}

impl Box3 {
    pub fn of_segment(a: P3, b: P3) -> Self {
        Self {
            lo: [a[0].min(b[0]), a[1].min(b[1]), a[2].min(b[2])],
            hi: [a[0].max(b[0]), a[1].max(b[1]), a[2].max(b[2])],
        }
    }

    /// Lower bound on the distance between any two points of the boxes.
    pub fn distance(&self, other: &Box3) -> f64 {
        let mut acc = 0.0;
        for k in 0..3 {
            let gap = (other.lo[k] - self.hi[k])
                .max(self.lo[k] - other.hi[k])
                .max(0.0);
            acc += gap * gap;
        }
        acc.sqrt()
    }
}

/// Distance from `p` to the segment `ab` in the plane.
pub fn point_segment_distance2(p: P2, a: P2, b: P2) -> f64 {
    let ab = sub2(b, a);
    let len2 = dot2(ab, ab);
    let t = if len2 > 0.0 {
        (dot2(sub2(p, a), ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    norm2(sub2(p, [a[0] + t * ab[0], a[1] + t * ab[1]]))
}

/// Distance between segments `p0p1` and `q0q1` in space.
pub fn segment_distance3(p0: P3, p1: P3, q0: P3, q1: P3) -> f64 {
    let d1 = sub3(p1, p0);
    let d2 = sub3(q1, q0);
    let r = sub3(p0, q0);
    let a = dot3(d1, d1);
    let e = dot3(d2, d2);
    let f = dot3(d2, r);
    let (s, t);
    if a <= f64::EPSILON && e <= f64::EPSILON {
        return norm3(r);
    }
    if a <= f64::EPSILON {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = dot3(d1, r);
        if e <= f64::EPSILON {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = dot3(d1, d2);
            let denom = a * e - b * b;
            let mut s0 = if denom > 0.0 {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    let cp = add3(p0, scale3(d1, s));
    let cq = add3(q0, scale3(d2, t));
    norm3(sub3(cp, cq))
}

impl Box2 {
    fn padded_overlap(&self, other: &Box2, pad: f64) -> bool {
        self.lo[0] - pad <= other.hi[0]
            && other.lo[0] - pad <= self.hi[0]
            && self.lo[1] - pad <= other.hi[1]
            && other.lo[1] - pad <= self.hi[1]
    }
}

impl Box3 {
    pub fn flat(&self) -> Box2 {
        Box2 {
            lo: [self.lo[0], self.lo[1]],
            hi: [self.hi[0], self.hi[1]],
        }
    }
}

/// All pairs `(i, j)` with `a[i]` and `b[j]` within `pad` of each other in both
/// coordinates, sorted. Uses a uniform grid sized to the boxes of `b`.
pub fn box_pairs(a: &[Box2], b: &[Box2], pad: f64) -> Vec<(usize, usize)> {
    const MAX_CELLS: i64 = 4096;
    let mut out = Vec::new();
    if a.is_empty() || b.is_empty() {
        return out;
    }
    let pad = pad.max(0.0);
    let extent = b
        .iter()
        .map(|x| (x.hi[0] - x.lo[0]).max(x.hi[1] - x.lo[1]))
        .sum::<f64>()
        / b.len() as f64;
    let cell = extent.max(pad).max(f64::MIN_POSITIVE);
    let origin = b.iter().fold([f64::INFINITY; 2], |o, x| {
        [o[0].min(x.lo[0]), o[1].min(x.lo[1])]
    });
    let index = |v: f64, k: usize| ((v - origin[k]) / cell).floor() as i64;
    let span = |x: &Box2, grow: f64| {
        (
            [index(x.lo[0] - grow, 0), index(x.lo[1] - grow, 1)],
            [index(x.hi[0] + grow, 0), index(x.hi[1] + grow, 1)],
        )
    };
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let mut large = Vec::new();
    for (j, x) in b.iter().enumerate() {
        let (lo, hi) = span(x, pad);
        if (hi[0] - lo[0] + 1).saturating_mul(hi[1] - lo[1] + 1) > MAX_CELLS {
            large.push(j);
            continue;
        }
        for cx in lo[0]..=hi[0] {
            for cy in lo[1]..=hi[1] {
                grid.entry((cx, cy)).or_default().push(j);
            }
        }
    }
    let mut stamp = vec![usize::MAX; b.len()];
    let mut found = Vec::new();
    for (i, x) in a.iter().enumerate() {
        found.clear();
        let (lo, hi) = span(x, 0.0);
        let mut visit = |j: usize, found: &mut Vec<usize>| {
            if stamp[j] != i && x.padded_overlap(&b[j], pad) {
                stamp[j] = i;
                found.push(j);
            }
        };
        if (hi[0] - lo[0] + 1).saturating_mul(hi[1] - lo[1] + 1) > MAX_CELLS {
            for j in 0..b.len() {
                visit(j, &mut found);
            }
        } else {
            for cx in lo[0]..=hi[0] {
                for cy in lo[1]..=hi[1] {
                    if let Some(js) = grid.get(&(cx, cy)) {
                        for &j in js {
                            visit(j, &mut found);
                        }
                    }
                }
            }
            for &j in &large {
                visit(j, &mut found);
            }
        }
        found.sort_unstable();
        out.extend(found.iter().map(|&j| (i, j)));
    }
    out
}

fn segment_boxes(points: &[P3]) -> Vec<Box3> {
    let n = points.len();
    (0..n)
        .map(|i| Box3::of_segment(points[i], points[(i + 1) % n]))
        .collect()
}

fn longest_box(boxes: &[Box3]) -> f64 {
    boxes
        .iter()
        .map(|b| (0..3).map(|k| b.hi[k] - b.lo[k]).fold(0.0, f64::max))
        .fold(0.0, f64::max)
}

/// Smallest distance between two segments of a closed polyline that do not share a
/// vertex, together with the pair realizing it.
pub fn min_nonadjacent_distance(points: &[P3]) -> (f64, (usize, usize)) {
    let n = points.len();
    let boxes = segment_boxes(points);
    let flat: Vec<Box2> = boxes.iter().map(Box3::flat).collect();
    let mut pad = (2.0 * longest_box(&boxes)).max(f64::MIN_POSITIVE);
    loop {
        let mut best = f64::INFINITY;
        let mut pair = (0, 0);
        for (i, j) in box_pairs(&flat, &flat, pad) {
            if j < i + 2 || (i == 0 && j == n - 1) || boxes[i].distance(&boxes[j]) >= best {
                continue;
            }
            let d = segment_distance3(
                points[i],
                points[(i + 1) % n],
                points[j],
                points[(j + 1) % n],
            );
            if d < best {
                best = d;
                pair = (i, j);
            }
        }
        // anything outside the padded boxes is farther than `pad`
        if best <= pad || !pad.is_finite() {
            return (best, pair);
        }
        pad *= 4.0;
    }
}

/// Smallest distance between a segment of closed polyline `a` and one of `b`.
pub fn min_cross_distance(a: &[P3], b: &[P3]) -> f64 {
    let (na, nb) = (a.len(), b.len());
    let (ba, bb) = (segment_boxes(a), segment_boxes(b));
    let (fa, fb): (Vec<Box2>, Vec<Box2>) = (
        ba.iter().map(Box3::flat).collect(),
        bb.iter().map(Box3::flat).collect(),
    );
    let mut pad = longest_box(&ba)
        .max(longest_box(&bb))
        .max(f64::MIN_POSITIVE);
    loop {
        let mut best = f64::INFINITY;
        for (i, j) in box_pairs(&fa, &fb, pad) {
            if ba[i].distance(&bb[j]) >= best {
                continue;
            }
            best = best.min(segment_distance3(
                a[i],
                a[(i + 1) % na],
                b[j],
                b[(j + 1) % nb],
            ));
        }
        if best <= pad || !pad.is_finite() {
            return best;
        }
        pad *= 4.0;
    }
}

/// Signed exterior angle at `cur` in `(-pi, pi]`, positive for a left turn.
#[inline]
pub fn exterior_angle(prev: P2, cur: P2, next: P2) -> f64 {
    let e0 = sub2(cur, prev);
    let e1 = sub2(next, cur);
    cross2(e0, e1).atan2(dot2(e0, e1))
}
