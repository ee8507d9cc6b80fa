//! Closed sampled curves in cylindrical coordinates and in `H^2 x S^1`.
//!
//! A [`CylCurve`] stores samples `(t, z, r, phi)` of a knot in `R^3` minus the
//! z-axis; an [`HKnot`] stores the same knot as `(t, x, y, theta)` with
//! `x = z`, `y = r^2`, `theta = phi`. Angles are stored unwrapped, and the last
//! sample connects back to the first with the angle advanced by `2 pi k`.

pub(crate) mod generate;

pub use generate::{
    embedding_margin, generate_generic, generate_legendrian, isotopy_margin, perturb, FourierSpec,
    GenerationOptions, Perturbed,
};

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use crate::error::{Error, Result};
use crate::geom::{self, P2, P3};

/// Bounds every pair of adjacent samples must respect.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplingLimits {
    /// Largest allowed |delta phi| (|delta theta|) between adjacent samples.
    pub max_dphi: f64,
    /// Largest allowed |delta z| and |delta r| between adjacent samples.
    pub max_step: f64,
    /// Every radius must exceed this value.
    pub r_min: f64,
}

impl Default for SamplingLimits {
    fn default() -> Self {
        Self {
            max_dphi: FRAC_PI_4,
            max_step: 1.0,
            r_min: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CylSample {
    pub t: f64,
    pub z: f64,
    pub r: f64,
    pub phi: f64,
}

/// Closed sampled curve in cylindrical coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct CylCurve {
    samples: Vec<CylSample>,
    winding: i64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HPoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

/// Closed sampled knot in `H^2 x S^1`.
#[derive(Clone, Debug, PartialEq)]
pub struct HKnot {
    points: Vec<HPoint>,
    winding: i64,
}

/// Winding integer read off the wrap step, plus the wrap step itself.
fn wrap_winding(first: f64, last: f64, max_dphi: f64, n: usize) -> Result<(i64, f64)> {
    let k = ((last - first) / TAU).round();
    let wrap = first + k * TAU - last;
    if !(wrap.abs() < max_dphi) {
        return Err(Error::SamplingDensity {
            index: n - 1,
            reason: format!("wrap step changes the angle by {wrap} (mod 2pi)"),
        });
    }
    Ok((k as i64, wrap))
}

fn check_parameters(ts: impl Iterator<Item = f64>) -> Result<()> {
    let mut prev = None;
    for (i, t) in ts.enumerate() {
        if !(0.0..1.0).contains(&t) {
            return Err(Error::InvalidInput(format!(
                "parameter t = {t} at sample {i} outside [0, 1)"
            )));
        }
        if let Some(p) = prev {
            if t <= p {
                return Err(Error::InvalidInput(format!(
                    "parameter not increasing at sample {i}"
                )));
            }
        }
        prev = Some(t);
    }
    Ok(())
}

impl CylCurve {
    pub fn new(samples: Vec<CylSample>) -> Result<Self> {
        Self::with_limits(samples, &SamplingLimits::default())
    }

    pub fn with_limits(samples: Vec<CylSample>, limits: &SamplingLimits) -> Result<Self> {
        let n = samples.len();
        if n < 4 {
            return Err(Error::InvalidInput(format!(
                "a closed curve needs at least 4 samples, got {n}"
            )));
        }
        for (i, s) in samples.iter().enumerate() {
            if !(s.t.is_finite() && s.z.is_finite() && s.r.is_finite() && s.phi.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "non-finite coordinate at sample {i}"
                )));
            }
            if !(s.r > limits.r_min && s.r > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "radius {} at sample {i} does not exceed r_min = {}",
                    s.r, limits.r_min
                )));
            }
        }
        check_parameters(samples.iter().map(|s| s.t))?;
        let (winding, _) = wrap_winding(samples[0].phi, samples[n - 1].phi, limits.max_dphi, n)?;
        let shift = winding as f64 * TAU;
        for i in 0..n {
            let a = samples[i];
            let (b, dphi) = if i + 1 < n {
                (samples[i + 1], samples[i + 1].phi - a.phi)
            } else {
                (samples[0], samples[0].phi + shift - a.phi)
            };
            if !(dphi.abs() < limits.max_dphi) {
                return Err(Error::SamplingDensity {
                    index: i,
                    reason: format!("|delta phi| = {} exceeds {}", dphi.abs(), limits.max_dphi),
                });
            }
            let dz = (b.z - a.z).abs();
            let dr = (b.r - a.r).abs();
            if dz > limits.max_step || dr > limits.max_step {
                return Err(Error::SamplingDensity {
                    index: i,
                    reason: format!(
                        "step |dz| = {dz}, |dr| = {dr} exceeds bound {}",
                        limits.max_step
                    ),
                });
            }
        }
        Ok(Self { samples, winding })
    }

    pub fn samples(&self) -> &[CylSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Number of times the curve winds around the z-axis.
    pub fn winding(&self) -> i64 {
        self.winding
    }

    /// `phi` at sample `i`, continued past the last sample (`i == len()` is the
    /// first sample after one full turn).
    pub fn phi_unwrapped(&self, i: usize) -> f64 {
        let n = self.samples.len();
        self.samples[i % n].phi + (i / n) as f64 * self.winding as f64 * TAU
    }

    /// Points in rectangular coordinates `(u, v, z) = (r cos phi, r sin phi, z)`.
    pub fn cartesian(&self) -> Vec<P3> {
        self.samples
            .iter()
            .map(|s| [s.r * s.phi.cos(), s.r * s.phi.sin(), s.z])
            .collect()
    }

    /// Same curve traversed backwards, keeping sample 0 in place.
    pub fn reversed(&self) -> CylCurve {
        let n = self.samples.len();
        let shift = self.winding as f64 * TAU;
        let mut out = Vec::with_capacity(n);
        out.push(self.samples[0]);
        for j in 1..n {
            let s = self.samples[n - j];
            out.push(CylSample {
                t: j as f64 / n as f64,
                z: s.z,
                r: s.r,
                phi: s.phi - shift,
            });
        }
        CylCurve {
            samples: reparametrize_cyl(out),
            winding: -self.winding,
        }
    }
}

fn reparametrize_cyl(mut samples: Vec<CylSample>) -> Vec<CylSample> {
    let n = samples.len() as f64;
    for (i, s) in samples.iter_mut().enumerate() {
        s.t = i as f64 / n;
    }
    samples
}

impl HKnot {
    pub fn new(points: Vec<HPoint>) -> Result<Self> {
        Self::with_max_dtheta(points, FRAC_PI_4)
    }

    pub fn with_max_dtheta(points: Vec<HPoint>, max_dtheta: f64) -> Result<Self> {
        let n = points.len();
        if n < 4 {
            return Err(Error::InvalidInput(format!(
                "a closed knot needs at least 4 points, got {n}"
            )));
        }
        for (i, p) in points.iter().enumerate() {
            if !(p.t.is_finite() && p.x.is_finite() && p.y.is_finite() && p.theta.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "non-finite coordinate at point {i}"
                )));
            }
            if !(p.y > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "y = {} at point {i} is not positive",
                    p.y
                )));
            }
        }
        check_parameters(points.iter().map(|p| p.t))?;
        let (winding, _) = wrap_winding(points[0].theta, points[n - 1].theta, max_dtheta, n)?;
        for i in 0..n - 1 {
            let d = points[i + 1].theta - points[i].theta;
            if !(d.abs() < max_dtheta) {
                return Err(Error::SamplingDensity {
                    index: i,
                    reason: format!("|delta theta| = {} exceeds {max_dtheta}", d.abs()),
                });
            }
        }
        Ok(Self { points, winding })
    }

    pub fn points(&self) -> &[HPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Fiber winding recorded at construction from the wrap step.
    pub fn winding(&self) -> i64 {
        self.winding
    }

    /// Unwrapped `theta` at arc position `s` in `[0, len()]`; position `i + u` lies a
    /// fraction `u` along segment `i`, and `len()` is the start point after one lap.
    pub fn theta_at(&self, s: f64) -> f64 {
        let n = self.points.len();
        let i = (s.floor() as usize).min(n - 1);
        let u = s - i as f64;
        let a = self.theta_unwrapped(i);
        let b = self.theta_unwrapped(i + 1);
        a + u * (b - a)
    }

    /// `theta` at vertex `i`, continued past the last vertex.
    pub fn theta_unwrapped(&self, i: usize) -> f64 {
        let n = self.points.len();
        self.points[i % n].theta + (i / n) as f64 * self.winding as f64 * TAU
    }

    /// Projection `(x, y)` of every point.
    pub fn projected(&self) -> Vec<P2> {
        self.points.iter().map(|p| [p.x, p.y]).collect()
    }

    /// Points in rectangular coordinates of `R^3`.
    pub fn cartesian(&self) -> Vec<P3> {
        self.points
            .iter()
            .map(|p| {
                let r = p.y.sqrt();
                [r * p.theta.cos(), r * p.theta.sin(), p.x]
            })
            .collect()
    }

    /// Same knot traversed backwards, keeping point 0 in place.
    pub fn reversed(&self) -> HKnot {
        let n = self.points.len();
        let shift = self.winding as f64 * TAU;
        let mut out = Vec::with_capacity(n);
        out.push(self.points[0]);
        for j in 1..n {
            let p = self.points[n - j];
            out.push(HPoint {
                t: j as f64 / n as f64,
                theta: p.theta - shift,
                ..p
            });
        }
        out[0].t = 0.0;
        HKnot {
            points: out,
            winding: -self.winding,
        }
    }

    /// Copy with every `theta` advanced by `angle` (rotation about the z-axis).
    pub fn rotated(&self, angle: f64) -> HKnot {
        HKnot {
            points: self
                .points
                .iter()
                .map(|p| HPoint {
                    theta: p.theta + angle,
                    ..*p
                })
                .collect(),
            winding: self.winding,
        }
    }
}

/// `(x, y, theta) = (z, r^2, phi)` sample by sample.
pub fn to_hcoords(c: &CylCurve) -> Result<HKnot> {
    let points = c
        .samples
        .iter()
        .map(|s| HPoint {
            t: s.t,
            x: s.z,
            y: s.r * s.r,
            theta: s.phi,
        })
        .collect();
    HKnot::new(points)
}

/// `(z, r, phi) = (x, sqrt y, theta)` sample by sample.
pub fn from_hcoords(k: &HKnot) -> Result<CylCurve> {
    from_hcoords_with(k, &SamplingLimits::default())
}

pub fn from_hcoords_with(k: &HKnot, limits: &SamplingLimits) -> Result<CylCurve> {
    let samples = k
        .points
        .iter()
        .map(|p| CylSample {
            t: p.t,
            z: p.x,
            r: p.y.sqrt(),
            phi: p.theta,
        })
        .collect();
    CylCurve::with_limits(samples, limits)
}

/// Outcome of the discrete Legendrian test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LegendrianCheck {
    pub legendrian: bool,
    pub max_residual: f64,
    pub worst_step: usize,
}

/// Discrete contact condition `dz + r^2 dphi = 0`: for every step the quantity
/// `|dz + rbar^2 dphi| / |chord|`, with `rbar` the midpoint radius and the chord
/// measured in `R^3`, must not exceed `tol`.
pub fn is_legendrian(c: &CylCurve, tol: f64) -> LegendrianCheck {
    let n = c.len();
    let cart = c.cartesian();
    let mut worst = 0.0f64;
    let mut worst_step = 0;
    for i in 0..n {
        let a = c.samples[i];
        let b = c.samples[(i + 1) % n];
        let dphi = c.phi_unwrapped(i + 1) - c.phi_unwrapped(i);
        let rbar = 0.5 * (a.r + b.r);
        let chord = geom::norm3(geom::sub3(cart[(i + 1) % n], cart[i]));
        let residual = (b.z - a.z + rbar * rbar * dphi).abs() / chord.max(f64::MIN_POSITIVE);
        if residual > worst || residual.is_nan() {
            worst = if residual.is_nan() {
                f64::INFINITY
            } else {
                residual
            };
            worst_step = i;
        }
    }
    LegendrianCheck {
        legendrian: worst <= tol,
        max_residual: worst,
        worst_step,
    }
}

/// True iff every projected segment has length at least `min_step`.
pub fn is_generic(k: &HKnot, min_step: f64) -> bool {
    shortest_projected_step(k).0 >= min_step
}

/// Shortest projected segment `(length, index)`.
pub fn shortest_projected_step(k: &HKnot) -> (f64, usize) {
    let p = k.projected();
    let n = p.len();
    (0..n)
        .map(|i| (geom::norm2(geom::sub2(p[(i + 1) % n], p[i])), i))
        .fold(
            (f64::INFINITY, 0),
            |acc, v| if v.0 < acc.0 { v } else { acc },
        )
}

/// Fails with the offending pair when two non-adjacent segments of the closed
/// polyline come closer than `tol`; otherwise returns the minimal distance.
pub fn check_embedded(points: &[P3], tol: f64) -> Result<f64> {
    let (d, (i, j)) = geom::min_nonadjacent_distance(points);
    if d < tol {
        return Err(Error::InvalidInput(format!(
            "segments {i} and {j} are {d:e} apart, below the embedding bound {tol:e}"
        )));
    }
    Ok(d)
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut w = a.rem_euclid(TAU);
    if w > PI {
        w -= TAU;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n: usize) -> CylCurve {
        let samples = (0..n)
            .map(|i| {
                let t = i as f64 / n as f64;
                let a = TAU * t;
                CylSample {
                    t,
                    z: a.cos(),
                    r: 2.0 + a.sin(),
                    phi: 0.0,
                }
            })
            .collect();
        CylCurve::new(samples).unwrap()
    }

    fn torus(n: usize) -> CylCurve {
        let samples = (0..n)
            .map(|i| {
                let t = i as f64 / n as f64;
                let a = TAU * t;
                CylSample {
                    t,
                    z: 0.5 * a.sin(),
                    r: 2.0 + 0.5 * a.cos(),
                    phi: a,
                }
            })
            .collect();
        CylCurve::new(samples).unwrap()
    }

    #[test]
    fn circle_maps_pointwise() {
        let c = circle(64);
        let k = to_hcoords(&c).unwrap();
        for (s, p) in c.samples().iter().zip(k.points()) {
            let a = TAU * s.t;
            assert!((p.x - a.cos()).abs() < 1e-15);
            assert!((p.y - (2.0 + a.sin()).powi(2)).abs() < 1e-14);
            assert_eq!(p.theta, 0.0);
        }
        assert_eq!(k.winding(), 0);
    }

    #[test]
    fn torus_range_and_wrap() {
        let k = to_hcoords(&torus(256)).unwrap();
        let (lo, hi) = k
            .points()
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p.y), hi.max(p.y))
            });
        assert!((lo - 1.5f64.powi(2)).abs() < 1e-12);
        assert!((hi - 2.5f64.powi(2)).abs() < 1e-12);
        assert_eq!(k.winding(), 1);
    }

    #[test]
    fn round_trips_are_identity() {
        for c in [circle(100), torus(100)] {
            let back = from_hcoords(&to_hcoords(&c).unwrap()).unwrap();
            for (a, b) in c.samples().iter().zip(back.samples()) {
                assert!((a.z - b.z).abs() < 1e-12);
                assert!((a.r - b.r).abs() < 1e-12);
                assert!((a.phi - b.phi).abs() < 1e-12);
            }
            let k = to_hcoords(&c).unwrap();
            let again = to_hcoords(&from_hcoords(&k).unwrap()).unwrap();
            for (a, b) in k.points().iter().zip(again.points()) {
                assert!((a.x - b.x).abs() < 1e-12);
                assert!((a.y - b.y).abs() < 1e-12);
                assert!((a.theta - b.theta).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sampling_density_reports_offending_step() {
        let mut samples: Vec<CylSample> = circle(32).samples().to_vec();
        samples[10].phi = 1.0;
        match CylCurve::new(samples) {
            Err(Error::SamplingDensity { index, .. }) => assert_eq!(index, 9),
            other => panic!("{other:?}"),
        }
        let mut samples: Vec<CylSample> = circle(32).samples().to_vec();
        samples[5].z = 10.0;
        assert!(matches!(
            CylCurve::new(samples),
            Err(Error::SamplingDensity { index: 4, .. })
        ));
    }

    #[test]
    fn from_hcoords_rejects_nonpositive_y() {
        let mut pts = to_hcoords(&circle(16)).unwrap().points().to_vec();
        pts[3].y = 0.0;
        assert!(HKnot::new(pts).is_err());
    }

    #[test]
    fn legendrian_predicate_rejects_non_contact_curves() {
        let c = circle(128);
        let check = is_legendrian(&c, 1e-8);
        assert!(!check.legendrian);
        let check = is_legendrian(&torus(128), 1e-8);
        assert!(!check.legendrian);
        // z' = 0.5 cos t while -r^2 phi' = -(2 + 0.5 cos t)^2: residual is O(1)
        assert!(check.max_residual > 1.0);
    }

    #[test]
    fn genericity_predicate() {
        let k = to_hcoords(&circle(64)).unwrap();
        assert!(is_generic(&k, 1e-9));
        // fiber excursion: x, y frozen while theta moves
        let mut pts = k.points().to_vec();
        for p in pts.iter_mut().skip(10).take(4) {
            p.x = pts_fixed().0;
            p.y = pts_fixed().1;
        }
        for (j, p) in pts.iter_mut().skip(10).take(4).enumerate() {
            p.theta = 0.1 * j as f64;
        }
        let k = HKnot::new(pts).unwrap();
        assert!(!is_generic(&k, 1e-9));
    }

    fn pts_fixed() -> (f64, f64) {
        (0.3, 5.0)
    }

    #[test]
    fn reversal_negates_winding_and_keeps_points() {
        let k = to_hcoords(&torus(64)).unwrap();
        let r = k.reversed();
        assert_eq!(r.winding(), -1);
        assert_eq!(r.points()[1].x, k.points()[63].x);
        assert!((r.theta_unwrapped(1) - (k.theta_unwrapped(63) - TAU)).abs() < 1e-15);
        assert_eq!(r.reversed().points().len(), 64);
        let c = torus(64).reversed();
        assert_eq!(c.winding(), -1);
    }

    #[test]
    fn theta_interpolates_across_wrap() {
        let k = to_hcoords(&torus(12)).unwrap();
        let expected = 0.5 * (k.theta_unwrapped(11) + k.points()[0].theta + TAU);
        assert!((k.theta_at(11.5) - expected).abs() < 1e-15);
        assert!((k.theta_at(12.0) - TAU).abs() < 1e-15);
    }

    #[test]
    fn embedded_check_rejects_collision() {
        // a square whose opposite sides are pushed through each other
        let pts = vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [1.0, 1.0, 0.0],
            [0.5, -0.5, 0.0],
            [0.0, 1.0, 0.0],
        ];
        assert!(check_embedded(&pts, 1e-6).is_err());
        let square = vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [1.0, 1.0, 0.0],
            [0.0, 1.0, 0.0],
        ];
        assert!((check_embedded(&square, 1e-6).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn wrap_angle_range() {
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(-0.5) + 0.5).abs() < 1e-15);
        assert!((wrap_angle(TAU + 0.25) - 0.25).abs() < 1e-12);
    }
}
