//! Independent computations of `beta`, `tb` and `mu`.
//!
//! Nothing here goes through double-point weights: self-linking numbers are linking
//! numbers of a knot with a pushoff, counted as signed crossings in a projection
//! along a random direction; Maslov indices are turning numbers of a planar
//! projection.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, NonGeneric, Result};
use crate::geom::{self, Box2, SegmentContact, P2, P3};
use crate::model::{is_legendrian, to_hcoords, CylCurve, HKnot, HPoint};
use crate::{round_checked, Tolerances};

/// Integer extracted from a float sum, with its rounding residual.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extracted {
    pub value: i64,
    pub residual: f64,
}

/// Largest |exterior angle| of a closed polyline.
pub fn max_exterior_angle(points: &[P2]) -> f64 {
    let n = points.len();
    (0..n)
        .map(|i| {
            geom::exterior_angle(points[(i + n - 1) % n], points[i], points[(i + 1) % n]).abs()
        })
        .fold(0.0, f64::max)
}

/// Degree of the Gauss map of a closed polyline: the sum of signed exterior
/// angles divided by `2 pi`. An exterior angle within `angle_tol` of `pi` is a
/// reversal and the polyline is not an immersion.
pub fn turning_number(points: &[P2], angle_tol: f64, residual_bound: f64) -> Result<Extracted> {
    let n = points.len();
    if n < 3 {
        return Err(Error::InvalidInput(
            "a closed polyline needs at least 3 vertices".into(),
        ));
    }
    let mut total = 0.0;
    for i in 0..n {
        let prev = points[(i + n - 1) % n];
        let cur = points[i];
        let next = points[(i + 1) % n];
        let length = geom::norm2(geom::sub2(next, cur));
        if length == 0.0 {
            return Err(NonGeneric::ZeroLengthSegment { index: i, length }.into());
        }
        let angle = geom::exterior_angle(prev, cur, next);
        if angle.abs() > PI - angle_tol {
            return Err(NonGeneric::Reversal { vertex: i, angle }.into());
        }
        total += angle;
    }
    let (value, residual) = round_checked(total / TAU, residual_bound, "turning number")?;
    Ok(Extracted { value, residual })
}

/// Closed polyline in `R^3`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyline3 {
    vertices: Vec<P3>,
}

impl Polyline3 {
    pub fn new(vertices: Vec<P3>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidInput(
                "a closed polyline needs at least 3 vertices".into(),
            ));
        }
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            if !a.iter().all(|c| c.is_finite()) {
                return Err(Error::InvalidInput(format!("non-finite vertex {i}")));
            }
            if geom::norm3(geom::sub3(b, a)) == 0.0 {
                return Err(Error::InvalidInput(format!("segment {i} has zero length")));
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[P3] {
        &self.vertices
    }

    /// Minimal distance between non-adjacent segments.
    pub fn embedding_margin(&self) -> f64 {
        geom::min_nonadjacent_distance(&self.vertices).0
    }

    fn shortest_segment(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| geom::norm3(geom::sub3(self.vertices[(i + 1) % n], self.vertices[i])))
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest of the embedding margin and the shortest segment.
    pub fn feature_size(&self) -> f64 {
        self.embedding_margin().min(self.shortest_segment())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkingOptions {
    /// Seed of the projection-direction stream.
    pub seed: u64,
    /// Number of accepted directions that must agree.
    pub directions: usize,
    /// Directions drawn before giving up.
    pub max_tries: usize,
    /// Components closer than this are refused.
    pub min_sep: f64,
}

impl Default for LinkingOptions {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            directions: 3,
            max_tries: 64,
            min_sep: 1e-12,
        }
    }
}

/// Orthonormal right-handed frame `(e1, e2, d)` with `d` uniform on the sphere.
fn random_frame(rng: &mut ChaCha8Rng) -> [P3; 3] {
    let z: f64 = rng.random_range(-1.0..1.0);
    let a: f64 = rng.random_range(0.0..TAU);
    let s = (1.0 - z * z).sqrt();
    let d = [s * a.cos(), s * a.sin(), z];
    let helper = if d[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let e1 = geom::cross3(helper, d);
    let e1 = geom::scale3(e1, 1.0 / geom::norm3(e1));
    let e2 = geom::cross3(d, e1);
    [e1, e2, d]
}

fn to_frame(points: &[P3], frame: &[P3; 3]) -> Vec<P3> {
    points
        .iter()
        .map(|&p| {
            [
                geom::dot3(p, frame[0]),
                geom::dot3(p, frame[1]),
                geom::dot3(p, frame[2]),
            ]
        })
        .collect()
}

/// Signed crossing count in the `(x, y)` projection of already rotated curves.
/// Returns `None` when the direction is degenerate.
fn crossing_count(a: &[P3], b: &[P3]) -> Option<i64> {
    const U_GUARD: f64 = 1e-12;
    let na = a.len();
    let nb = b.len();
    let flat = |p: P3| -> P2 { [p[0], p[1]] };
    let boxes = |v: &[P3]| -> Vec<Box2> {
        (0..v.len())
            .map(|i| Box2::of_segment(flat(v[i]), flat(v[(i + 1) % v.len()])))
            .collect()
    };
    let mut a_over = 0i64;
    let mut b_over = 0i64;
    for (i, j) in geom::box_pairs(&boxes(a), &boxes(b), 0.0) {
        let (p0, p1) = (a[i], a[(i + 1) % na]);
        let (q0, q1) = (b[j], b[(j + 1) % nb]);
        match geom::segment_contact(flat(p0), flat(p1), flat(q0), flat(q1)) {
            SegmentContact::Disjoint => {}
            SegmentContact::Degenerate => return None,
            SegmentContact::Proper { ua, ub } => {
                if ua.min(ub) < U_GUARD || ua.max(ub) > 1.0 - U_GUARD {
                    return None;
                }
                // sign of cross2(a, b) and of (z_a - z_b) * cross2(a, b)
                let c = geom::orient2d(flat(p0), flat(p1), flat(q1)).signum();
                let d = geom::orient3d(p0, p1, q0, q1);
                if d == 0.0 {
                    return None;
                }
                if d.signum() == c {
                    a_over += c as i64;
                } else {
                    b_over -= c as i64;
                }
            }
        }
    }
    (a_over == b_over).then_some(a_over)
}

/// Linking number of two disjoint closed polylines, `+1` for a right-handed
/// crossing. Projections along random directions from a seeded stream are tried
/// until `opts.directions` non-degenerate ones are found; they must agree.
pub fn linking_number(a: &Polyline3, b: &Polyline3, opts: &LinkingOptions) -> Result<i64> {
    let sep = geom::min_cross_distance(a.vertices(), b.vertices());
    if !(sep >= opts.min_sep) {
        return Err(Error::Oracle(format!(
            "components are {sep:e} apart, below the separation bound {:e}",
            opts.min_sep
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut accepted: Vec<i64> = Vec::with_capacity(opts.directions);
    for _ in 0..opts.max_tries {
        let frame = random_frame(&mut rng);
        if let Some(lk) = crossing_count(
            &to_frame(a.vertices(), &frame),
            &to_frame(b.vertices(), &frame),
        ) {
            accepted.push(lk);
            if accepted.len() == opts.directions {
                break;
            }
        }
    }
    if accepted.len() < opts.directions {
        return Err(Error::Oracle(format!(
            "only {} admissible projection directions in {} tries (seed {})",
            accepted.len(),
            opts.max_tries,
            opts.seed
        )));
    }
    if accepted.iter().any(|&v| v != accepted[0]) {
        return Err(Error::Oracle(format!(
            "projection directions disagree: {accepted:?} (seed {})",
            opts.seed
        )));
    }
    Ok(accepted[0])
}

/// Signed solid angle of the triangle `(a, b, c)` seen from the origin.
fn solid_angle(a: P3, b: P3, c: P3) -> f64 {
    let (la, lb, lc) = (geom::norm3(a), geom::norm3(b), geom::norm3(c));
    let num = geom::dot3(a, geom::cross3(b, c));
    let den = la * lb * lc + geom::dot3(a, b) * lc + geom::dot3(a, c) * lb + geom::dot3(b, c) * la;
    2.0 * num.atan2(den)
}

/// Gauss linking integral evaluated in closed form per segment pair. Debug path
/// only: the value is a float and should sit within 1e-3 of the integer linking number.
pub fn gauss_linking_integral(a: &Polyline3, b: &Polyline3) -> f64 {
    let (va, vb) = (a.vertices(), b.vertices());
    let (na, nb) = (va.len(), vb.len());
    let mut total = 0.0;
    for i in 0..na {
        let (p0, p1) = (va[i], va[(i + 1) % na]);
        for j in 0..nb {
            let (q0, q1) = (vb[j], vb[(j + 1) % nb]);
            // the pair sweeps the parallelogram p - q; its solid angle is -4 pi times
            // the contribution to the Gauss integral
            let c0 = geom::sub3(p0, q0);
            let c1 = geom::sub3(p1, q0);
            let c2 = geom::sub3(p1, q1);
            let c3 = geom::sub3(p0, q1);
            total -= solid_angle(c0, c1, c2) + solid_angle(c0, c2, c3);
        }
    }
    total / (4.0 * PI)
}

/// Oracle value with the parameters that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleValue {
    pub value: i64,
    pub eps: f64,
    pub seed: u64,
}

fn pushoff_linking(
    base: &Polyline3,
    pushoff: impl Fn(f64) -> Result<Polyline3>,
    eps: f64,
    opts: &LinkingOptions,
) -> Result<OracleValue> {
    let full = linking_number(base, &pushoff(eps)?, opts)?;
    let half = linking_number(base, &pushoff(0.5 * eps)?, opts)?;
    if full != half {
        return Err(Error::Oracle(format!(
            "pushoff linking number unstable under eps halving: {full} at {eps:e}, {half} at {:e}",
            0.5 * eps
        )));
    }
    Ok(OracleValue {
        value: full,
        eps,
        seed: opts.seed,
    })
}

/// Steps of the refined polyline turn by at most this much about the z-axis.
const MAX_PIECE_TURN: f64 = 0.05;
/// Pieces per knot segment before the refinement gives up.
const MAX_PIECES: usize = 1 << 16;

/// Rectangular points of the curve that is linear in `(x, y, theta)` between
/// samples. Each segment is split until every straight piece stays close to it:
/// along a chord from `A` to `B` in the `(u, v)` plane, `y = u^2 + v^2` sags below
/// the linear interpolation by `s (1 - s) |A - B|^2`, so requiring
/// `|A - B|^2 <= l / 4`, with `l` the projected length of the piece, keeps the
/// chord's `(x, y)` shadow within a quarter turn of the straight piece and within
/// `l / 16` of it.
pub fn faithful_cartesian(k: &HKnot) -> Result<Vec<P3>> {
    let n = k.len();
    let pts = k.points();
    let mut out = Vec::with_capacity(2 * n);
    let at = |a: HPoint, b: HPoint, ta: f64, tb: f64, s: f64| -> (P3, P2) {
        let x = a.x + s * (b.x - a.x);
        let y = a.y + s * (b.y - a.y);
        let th = ta + s * (tb - ta);
        let r = y.sqrt();
        ([r * th.cos(), r * th.sin(), x], [x, y])
    };
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        let (ta, tb) = (k.theta_unwrapped(i), k.theta_unwrapped(i + 1));
        let mut m = ((tb - ta).abs() / MAX_PIECE_TURN).ceil().max(1.0) as usize;
        let pieces = loop {
            let pieces: Vec<(P3, P2)> = (0..=m)
                .map(|j| at(a, b, ta, tb, j as f64 / m as f64))
                .collect();
            let close = pieces.windows(2).all(|w| {
                let du = [w[1].0[0] - w[0].0[0], w[1].0[1] - w[0].0[1]];
                geom::dot2(du, du) <= 0.25 * geom::norm2(geom::sub2(w[1].1, w[0].1))
            });
            if close {
                break pieces;
            }
            if m >= MAX_PIECES {
                return Err(Error::Oracle(format!(
                    "segment {i} turns too fast about the z-axis for its projected length"
                )));
            }
            m *= 2;
        };
        out.extend(pieces[..m].iter().map(|p| p.0));
    }
    Ok(out)
}

fn rotate_z(points: &[P3], angle: f64) -> Vec<P3> {
    let (s, c) = angle.sin_cos();
    points
        .iter()
        .map(|p| [c * p[0] - s * p[1], s * p[0] + c * p[1], p[2]])
        .collect()
}

fn fiber_eps(line: &Polyline3) -> f64 {
    let r_max = line
        .vertices()
        .iter()
        .map(|p| p[0].hypot(p[1]))
        .fold(0.0, f64::max);
    1e-3 * line.feature_size() / r_max
}

/// Default fiber pushoff angle: `1e-3` of the feature size of the refined curve,
/// divided by the largest radius.
pub fn default_fiber_eps(k: &HKnot) -> Result<f64> {
    Ok(fiber_eps(&Polyline3::new(faithful_cartesian(k)?)?))
}

/// Self-linking number: linking number of `k` with its pushoff along the fibers,
/// `theta -> theta + eps`, checked for stability at `eps / 2`.
pub fn beta_oracle(k: &HKnot, eps: Option<f64>, opts: &LinkingOptions) -> Result<OracleValue> {
    let points = faithful_cartesian(k)?;
    let base = Polyline3::new(points.clone())?;
    let eps = match eps {
        Some(e) => e,
        None => fiber_eps(&base),
    };
    pushoff_linking(&base, |e| Polyline3::new(rotate_z(&points, e)), eps, opts)
}

/// Unit vectors in the contact planes, orthogonal to the curve's tangent.
/// The plane at `(u, v, z)` is the kernel of `dz + u dv - v du`, with normal
/// `(-v, u, 1)`; the field is `normal x tangent`.
pub fn contact_framing(points: &[P3]) -> Vec<P3> {
    let n = points.len();
    (0..n)
        .map(|i| {
            let p = points[i];
            let normal = [-p[1], p[0], 1.0];
            let normal = geom::scale3(normal, 1.0 / geom::norm3(normal));
            let tangent = geom::sub3(points[(i + 1) % n], points[(i + n - 1) % n]);
            let along = geom::dot3(tangent, normal);
            let in_plane = geom::sub3(tangent, geom::scale3(normal, along));
            let f = geom::cross3(normal, in_plane);
            geom::scale3(f, 1.0 / geom::norm3(f))
        })
        .collect()
}

fn require_legendrian(c: &CylCurve, tol: &Tolerances) -> Result<()> {
    let check = is_legendrian(c, tol.legendrian_tol);
    if !check.legendrian {
        return Err(Error::NotLegendrian {
            residual: check.max_residual,
            index: check.worst_step,
        });
    }
    Ok(())
}

/// Thurston-Bennequin number as the linking number of a Legendrian curve with its
/// pushoff along the contact framing.
pub fn tb_oracle(
    c: &CylCurve,
    eps: Option<f64>,
    tol: &Tolerances,
    opts: &LinkingOptions,
) -> Result<OracleValue> {
    require_legendrian(c, tol)?;
    let points = faithful_cartesian(&to_hcoords(c)?)?;
    let base = Polyline3::new(points.clone())?;
    let eps = match eps {
        Some(e) => e,
        None => 1e-3 * base.feature_size(),
    };
    let framing = contact_framing(&points);
    let n = framing.len();
    if let Some(i) = (0..n).find(|&i| geom::dot3(framing[i], framing[(i + 1) % n]) < 0.5) {
        return Err(Error::Oracle(format!(
            "contact framing turns by more than 60 degrees at vertex {i}; the curve is sampled too coarsely"
        )));
    }
    let pushed = |e: f64| {
        Polyline3::new(
            points
                .iter()
                .zip(&framing)
                .map(|(&p, &f)| geom::add3(p, geom::scale3(f, e)))
                .collect(),
        )
    };
    pushoff_linking(&base, pushed, eps, opts)
}

/// Maslov index as the turning number of the `(u, v) = (r cos phi, r sin phi)` projection.
pub fn mu_oracle(c: &CylCurve, tol: &Tolerances) -> Result<Extracted> {
    require_legendrian(c, tol)?;
    let flat: Vec<P2> = c.cartesian().iter().map(|p| [p[0], p[1]]).collect();
    turning_number(&flat, tol.angle_tol, tol.residual)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle3(center: P3, e1: P3, e2: P3, radius: f64, n: usize) -> Polyline3 {
        Polyline3::new(
            (0..n)
                .map(|i| {
                    let a = TAU * (i as f64 + 0.37) / n as f64;
                    geom::add3(
                        center,
                        geom::add3(
                            geom::scale3(e1, radius * a.cos()),
                            geom::scale3(e2, radius * a.sin()),
                        ),
                    )
                })
                .collect(),
        )
        .unwrap()
    }

    fn polygon(n: usize, ccw: bool) -> Vec<P2> {
        (0..n)
            .map(|i| {
                let a = TAU * i as f64 / n as f64;
                if ccw {
                    [a.cos(), a.sin()]
                } else {
                    [a.cos(), -a.sin()]
                }
            })
            .collect()
    }

    #[test]
    fn triangles_turn_once() {
        let tri = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        assert_eq!(turning_number(&tri, 1e-3, 1e-6).unwrap().value, 1);
        let rev: Vec<P2> = tri.iter().rev().copied().collect();
        assert_eq!(turning_number(&rev, 1e-3, 1e-6).unwrap().value, -1);
    }

    #[test]
    fn lemniscate_turns_zero_times() {
        let pts: Vec<P2> = (0..301)
            .map(|i| {
                let a = TAU * (i as f64 + 0.5) / 301.0;
                [a.cos(), a.sin() * a.cos()]
            })
            .collect();
        // reference: accumulate the heading change directly
        let n = pts.len();
        let heading = |i: usize| {
            let d = geom::sub2(pts[(i + 1) % n], pts[i]);
            d[1].atan2(d[0])
        };
        let mut acc = 0.0;
        for i in 0..n {
            acc += crate::model::wrap_angle(heading((i + 1) % n) - heading(i));
        }
        assert!((acc / TAU).abs() < 1e-9);
        assert_eq!(turning_number(&pts, 1e-3, 1e-6).unwrap().value, 0);
    }

    #[test]
    fn reversal_is_reported() {
        let pts = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1e-9], [-1.0, 0.5]];
        assert!(matches!(
            turning_number(&pts, 1e-3, 1e-6),
            Err(Error::NonGeneric(NonGeneric::Reversal { vertex: 1, .. }))
        ));
    }

    #[test]
    fn polygons_in_both_orientations() {
        assert_eq!(
            turning_number(&polygon(50, true), 1e-3, 1e-6)
                .unwrap()
                .value,
            1
        );
        assert_eq!(
            turning_number(&polygon(50, false), 1e-3, 1e-6)
                .unwrap()
                .value,
            -1
        );
    }

    #[test]
    fn distant_circles_do_not_link() {
        let a = circle3([0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 1.0, 40);
        let b = circle3([5.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 1.0, 40);
        assert_eq!(
            linking_number(&a, &b, &LinkingOptions::default()).unwrap(),
            0
        );
        assert!(gauss_linking_integral(&a, &b).abs() < 1e-3);
    }

    #[test]
    fn hopf_link_is_right_handed_with_matching_gauss_integral() {
        // unit circle in the uv-plane, and a unit circle in the uz-plane through (1, 0, 0)
        let a = circle3([0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 1.0, 64);
        let b = circle3([1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0], 1.0, 64);
        let lk = linking_number(&a, &b, &LinkingOptions::default()).unwrap();
        let gauss = gauss_linking_integral(&a, &b);
        assert!((gauss - lk as f64).abs() < 1e-3, "gauss {gauss}, lk {lk}");
        assert_eq!(lk.abs(), 1);
        // b meets the disk bounded by a only at the origin, moving in -z, against
        // the disk's orientation
        assert_eq!(lk, -1);
        let b_rev = Polyline3::new(b.vertices().iter().rev().copied().collect()).unwrap();
        assert_eq!(
            linking_number(&a, &b_rev, &LinkingOptions::default()).unwrap(),
            1
        );
    }

    #[test]
    fn linking_is_symmetric_and_seed_independent() {
        let a = circle3([0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 1.0, 64);
        let b = circle3([1.0, 0.0, 0.2], [0.6, 0.8, 0.0], [0.0, 0.0, 1.0], 0.9, 57);
        let mut values = Vec::new();
        for seed in 0..5 {
            let opts = LinkingOptions {
                seed,
                ..LinkingOptions::default()
            };
            values.push(linking_number(&a, &b, &opts).unwrap());
            values.push(linking_number(&b, &a, &opts).unwrap());
        }
        assert!(values.iter().all(|&v| v == values[0]));
    }

    #[test]
    fn close_components_are_refused() {
        let a = circle3([0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 1.0, 16);
        let b = circle3([2.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 1.0, 16);
        let opts = LinkingOptions {
            min_sep: 0.1,
            ..LinkingOptions::default()
        };
        assert!(matches!(
            linking_number(&a, &b, &opts),
            Err(Error::Oracle(_))
        ));
    }

    #[test]
    fn framing_lies_in_the_contact_plane() {
        let pts: Vec<P3> = (0..50)
            .map(|i| {
                let a = TAU * i as f64 / 50.0;
                [2.0 * a.cos(), 2.0 * a.sin(), 0.3 * a.sin()]
            })
            .collect();
        for (p, f) in pts.iter().zip(contact_framing(&pts)) {
            let normal = [-p[1], p[0], 1.0];
            assert!(geom::dot3(normal, f).abs() < 1e-12);
            assert!((geom::norm3(f) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn refinement_stays_on_the_curve() {
        // coarse torus knot: each step turns pi/8 about the z-axis
        let k = crate::model::to_hcoords(&crate::fixtures::torus_curve(16)).unwrap();
        let pts = faithful_cartesian(&k).unwrap();
        assert!(pts.len() >= 16 * 8);
        let shadow: Vec<P2> = k.projected();
        for p in &pts {
            let q = [p[2], p[0] * p[0] + p[1] * p[1]];
            let d = (0..16)
                .map(|i| geom::point_segment_distance2(q, shadow[i], shadow[(i + 1) % 16]))
                .fold(f64::INFINITY, f64::min);
            assert!(d < 1e-12, "{d}");
        }
        assert_eq!(
            beta_oracle(&k, None, &LinkingOptions::default())
                .unwrap()
                .value,
            -1
        );
    }

    #[test]
    fn steep_segments_are_split_further() {
        // a step that barely moves in (x, y) but turns by 0.7
        let pts: Vec<HPoint> = [
            (0.0, 0.0, 2.0, 0.0),
            (0.25, 1e-3, 2.0, 0.7),
            (0.5, 0.5, 2.5, 1.0),
            (0.75, 0.2, 3.0, 0.5),
        ]
        .iter()
        .map(|&(t, x, y, theta)| HPoint { t, x, y, theta })
        .collect();
        let k = HKnot::new(pts).unwrap();
        let refined = faithful_cartesian(&k).unwrap();
        let first = refined.iter().take_while(|p| p[2] < 1e-3 - 1e-15).count();
        assert!(
            first > 0.7f64.div_euclid(MAX_PIECE_TURN) as usize,
            "{first}"
        );
        for w in refined[..=first].windows(2) {
            let du = [w[1][0] - w[0][0], w[1][1] - w[0][1]];
            let dy = (w[1][0].powi(2) + w[1][1].powi(2)) - (w[0][0].powi(2) + w[0][1].powi(2));
            let l = (w[1][2] - w[0][2]).hypot(dy);
            assert!(geom::dot2(du, du) <= 0.25 * l + 1e-15);
        }
    }
}
