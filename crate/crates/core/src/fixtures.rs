//! Hand-built curves with known invariants, shared by tests, the CLI and the suites.

use std::f64::consts::TAU;

use crate::model::generate::close_legendrian;
use crate::model::{CylCurve, CylSample, HKnot, HPoint, SamplingLimits};

/// Right-handed trefoil front with cusps at `(+-50, +-15)`.
pub const TREFOIL_FRONT: &str = include_str!("../tests/fixtures/trefoil.front");
/// Two-cusp front of the standard Legendrian unknot.
pub const UNKNOT_FRONT: &str = include_str!("../tests/fixtures/unknot.front");

fn params(n: usize, offset: f64) -> Vec<f64> {
    (0..n).map(|i| (i as f64 + offset) / n as f64).collect()
}

fn cyl(n: usize, f: impl Fn(f64) -> (f64, f64, f64)) -> CylCurve {
    let samples = params(n, 0.0)
        .into_iter()
        .map(|t| {
            let (z, r, phi) = f(TAU * t);
            CylSample { t, z, r, phi }
        })
        .collect();
    CylCurve::new(samples).expect("fixture is valid")
}

/// `(z, r, phi) = (cos t, 2 + sin t, 0)`: `h = 0`, `r = 1`, `w = 0`, `beta = 0`.
pub fn constant_phi_circle(n: usize) -> CylCurve {
    cyl(n, |s| (s.cos(), 2.0 + s.sin(), 0.0))
}

/// `(z, r, phi) = (0.5 sin t, 2 + 0.5 cos t, t)`: `h = 1`, `r = -1`, `w = 0`, `beta = -1`.
pub fn torus_curve(n: usize) -> CylCurve {
    cyl(n, |s| (0.5 * s.sin(), 2.0 + 0.5 * s.cos(), s))
}

fn hknot(n: usize, offset: f64, f: impl Fn(f64) -> (f64, f64, f64)) -> HKnot {
    let points = params(n, offset)
        .into_iter()
        .map(|u| {
            let (x, y, theta) = f(TAU * u);
            HPoint {
                t: u - offset / n as f64,
                x,
                y,
                theta,
            }
        })
        .collect();
    HKnot::new(points).expect("fixture is valid")
}

/// Lemniscate `(cos s, 3 + sin s cos s)` lifted by `theta = sin s`; one double
/// point with `(h+, h-) = (1, 0)`. Samples avoid the double point.
pub fn figure_eight_lift(n: usize) -> HKnot {
    hknot(n, 0.3, |s| (s.cos(), 3.0 + s.sin() * s.cos(), s.sin()))
}

/// Circle of radius 1 about `(0, 3)` whose top is pushed down by
/// `c ((1 + sin s) / 2)^8`, lifted by `theta = sin s`. The projection is embedded for
/// `c < 2`; for `c > 2` the top strand dips below the bottom one and makes two double
/// points. The strands sit at `theta > 0` and `theta < 0`, so the lift never collides.
pub fn rii_dent(c: f64, n: usize) -> HKnot {
    hknot(n, 0.125, |s| {
        let bump = (0.5 * (1.0 + s.sin())).powi(8);
        (s.cos(), 3.0 + s.sin() - c * bump, s.sin())
    })
}

/// Legendrian unknot whose projection is close to the clockwise circle of radius
/// `sqrt 3` about `(0, 2)`: `h = 1`, `r = -1`, `w = 0`, so `tb = -1` and `mu = 0`.
pub fn legendrian_unknot(n: usize) -> CylCurve {
    let ts = params(n, 0.0);
    let k = 3f64.sqrt();
    let r: Vec<f64> = ts
        .iter()
        .map(|t| (2.0 + k * (TAU * t).cos()).sqrt())
        .collect();
    // theta' = -x'/y for x = sqrt3 sin s, y = 2 + sqrt3 cos s, in closed form
    let phi: Vec<f64> = ts
        .iter()
        .map(|t| {
            let s = TAU * t;
            -s + 4.0 * ((2.0 - k) * (0.5 * s).sin()).atan2((0.5 * s).cos())
        })
        .collect();
    close_legendrian(&ts, &r, &phi, 1, 0.0, &SamplingLimits::default()).expect("fixture is valid")
}
