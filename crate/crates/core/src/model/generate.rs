//! Seeded random knot families and small isotopies.
//!
//! Every attempt draws from its own ChaCha stream `(seed, attempt)`, so a failed
//! attempt never shifts the draws of the next one and results are reproducible
//! bit for bit.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    check_embedded, is_generic, is_legendrian, to_hcoords, CylCurve, CylSample, HKnot, HPoint,
    SamplingLimits,
};
use crate::error::{Error, Result};
use crate::geom::{self, P2, P3};
use crate::oracles::max_exterior_angle;
use crate::projection::diagram;
use crate::Tolerances;

fn default_samples() -> usize {
    512
}

fn default_r_min() -> f64 {
    0.25
}

/// Parameters of a random trigonometric knot family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierSpec {
    pub degree: usize,
    pub bound: f64,
    pub h_target: i64,
    #[serde(default = "default_r_min")]
    pub r_min: f64,
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

impl FourierSpec {
    pub fn new(degree: usize, bound: f64, h_target: i64, seed: u64) -> Self {
        Self {
            degree,
            bound,
            h_target,
            r_min: default_r_min(),
            seed,
            samples: default_samples(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree < 1 {
            return Err(Error::InvalidInput("degree must be at least 1".into()));
        }
        if !(self.r_min > 0.0 && self.r_min.is_finite()) {
            return Err(Error::InvalidInput("r_min must be positive".into()));
        }
        if !(self.bound > 0.0 && self.bound.is_finite()) {
            return Err(Error::InvalidInput("bound must be positive".into()));
        }
        if self.samples < 16 {
            return Err(Error::InvalidInput(
                "at least 16 samples are required".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenerationOptions {
    pub max_attempts: usize,
    /// Minimal distance between non-adjacent segments in `R^3`.
    pub embed_tol: f64,
    /// Largest exterior angle allowed in the sampled curve and its projections.
    pub max_turn: f64,
    pub max_step: f64,
    pub tolerances: Tolerances,
}

impl Default for GenerationOptions {
    fn default() -> Self {
        Self {
            max_attempts: 64,
            embed_tol: 1e-3,
            max_turn: PI / 4.0,
            max_step: 1.0,
            tolerances: Tolerances::default(),
        }
    }
}

fn attempt_rng(seed: u64, attempt: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt as u64);
    rng
}

/// Truncated Fourier series `sum_k a_k cos(k tau) + b_k sin(k tau)`.
#[derive(Clone, Debug)]
struct Series {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl Series {
    fn random(rng: &mut ChaCha8Rng, degree: usize, amplitude: f64, decay: bool) -> Self {
        let mut cos = Vec::with_capacity(degree);
        let mut sin = Vec::with_capacity(degree);
        for k in 1..=degree {
            let s = if decay {
                amplitude / k as f64
            } else {
                amplitude
            };
            cos.push(rng.random_range(-s..=s));
            sin.push(rng.random_range(-s..=s));
        }
        Self { cos, sin }
    }

    fn eval(&self, tau: f64) -> f64 {
        self.cos
            .iter()
            .zip(&self.sin)
            .enumerate()
            .map(|(i, (a, b))| {
                let k = (i + 1) as f64;
                a * (k * tau).cos() + b * (k * tau).sin()
            })
            .sum()
    }

    fn abs_sum(&self) -> f64 {
        self.cos.iter().chain(&self.sin).map(|c| c.abs()).sum()
    }
}

/// Periodic correction profiles; their derivatives have zero mean.
const PROFILES: [(u32, bool); 4] = [(1, false), (1, true), (2, false), (2, true)];

fn profile(which: (u32, bool), tau: f64) -> f64 {
    let k = which.0 as f64;
    if which.1 {
        (k * tau).cos()
    } else {
        (k * tau).sin()
    }
}

/// Builds the discrete Legendrian curve with radii `r` and base angles `phi_base`
/// (whose wrap advances by `2 pi h`), correcting the angle by `delta * G` so that
/// `sum rbar^2 dphi = 0` and z closes up. `z` is integrated with midpoint radii so
/// that every step satisfies `dz + rbar^2 dphi = 0` to rounding.
pub(crate) fn close_legendrian(
    ts: &[f64],
    r: &[f64],
    phi_base: &[f64],
    h: i64,
    z0: f64,
    limits: &SamplingLimits,
) -> Result<CylCurve> {
    let n = r.len();
    let shift = h as f64 * TAU;
    let rbar2 = |i: usize| {
        let m = 0.5 * (r[i] + r[(i + 1) % n]);
        m * m
    };
    let step = |v: &[f64], i: usize, wrap: f64| {
        if i + 1 < n {
            v[i + 1] - v[i]
        } else {
            v[0] + wrap - v[n - 1]
        }
    };
    let base_flux: f64 = (0..n).map(|i| rbar2(i) * step(phi_base, i, shift)).sum();
    let mut best: Option<(Vec<f64>, f64)> = None;
    for which in PROFILES {
        let g: Vec<f64> = ts.iter().map(|t| profile(which, TAU * t)).collect();
        let flux: f64 = (0..n).map(|i| rbar2(i) * step(&g, i, 0.0)).sum();
        if best.as_ref().is_none_or(|(_, f)| flux.abs() > f.abs()) {
            best = Some((g, flux));
        }
    }
    let (g, g_flux) = best.expect("profiles are non-empty");
    if g_flux.abs() < 1e-9 {
        return Err(Error::InvalidInput(
            "radius profile admits no closing correction".into(),
        ));
    }
    let delta = -base_flux / g_flux;
    let phi: Vec<f64> = phi_base
        .iter()
        .zip(&g)
        .map(|(p, g)| p + delta * g)
        .collect();
    let mut z = Vec::with_capacity(n);
    z.push(z0);
    for i in 0..n - 1 {
        let next = z[i] - rbar2(i) * (phi[i + 1] - phi[i]);
        z.push(next);
    }
    let samples = (0..n)
        .map(|i| CylSample {
            t: ts[i],
            z: z[i],
            r: r[i],
            phi: phi[i],
        })
        .collect();
    CylCurve::with_limits(samples, limits)
}

/// Sum of `rbar^2 dphi` over all steps including the wrap; zero for a closed
/// Legendrian curve.
pub fn contact_flux(c: &CylCurve) -> f64 {
    let s = c.samples();
    let n = s.len();
    (0..n)
        .map(|i| {
            let m = 0.5 * (s[i].r + s[(i + 1) % n].r);
            m * m * (c.phi_unwrapped(i + 1) - c.phi_unwrapped(i))
        })
        .sum()
}

fn parameters(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / n as f64).collect()
}

/// Common acceptance tests for a generated knot; returns a reason on failure.
/// Largest angle between consecutive segments of a closed polyline in `R^3`.
fn max_spatial_turn(points: &[P3]) -> f64 {
    let n = points.len();
    (0..n)
        .map(|i| {
            let a = geom::sub3(points[i], points[(i + n - 1) % n]);
            let b = geom::sub3(points[(i + 1) % n], points[i]);
            geom::norm3(geom::cross3(a, b)).atan2(geom::dot3(a, b))
        })
        .fold(0.0, f64::max)
}

fn screen(k: &HKnot, opts: &GenerationOptions) -> std::result::Result<(), String> {
    if !is_generic(k, opts.tolerances.min_step) {
        return Err("projection has a vanishing step".into());
    }
    check_embedded(&k.cartesian(), opts.embed_tol).map_err(|e| e.to_string())?;
    let projected = k.projected();
    let turn = max_exterior_angle(&projected);
    if turn > opts.max_turn {
        return Err(format!("projected exterior angle {turn} is too sharp"));
    }
    let turn = max_spatial_turn(&k.cartesian());
    if turn > opts.max_turn {
        return Err(format!("spatial exterior angle {turn} is too sharp"));
    }
    diagram(k, &opts.tolerances).map_err(|e| e.to_string())?;
    Ok(())
}

/// Random closed Legendrian curve for `ker(dz + r^2 dphi)`.
pub fn generate_legendrian(spec: &FourierSpec, opts: &GenerationOptions) -> Result<CylCurve> {
    spec.validate()?;
    let n = spec.samples;
    let ts = parameters(n);
    let limits = SamplingLimits {
        r_min: spec.r_min,
        max_step: opts.max_step,
        ..SamplingLimits::default()
    };
    let mut last_reason = String::new();
    for attempt in 0..opts.max_attempts {
        let mut rng = attempt_rng(spec.seed, attempt);
        let r_series = Series::random(&mut rng, spec.degree, spec.bound, false);
        let r0 = spec.r_min + 1.0 + rng.random_range(0.0..spec.bound);
        let phi_series = Series::random(&mut rng, spec.degree, PI * spec.bound, true);
        let z0 = rng.random_range(-spec.bound..=spec.bound);

        let r: Vec<f64> = ts.iter().map(|t| r0 + r_series.eval(TAU * t)).collect();
        if r.iter().any(|&v| v <= spec.r_min) {
            last_reason = "radius dropped below r_min".into();
            continue;
        }
        let phi: Vec<f64> = ts
            .iter()
            .map(|t| TAU * spec.h_target as f64 * t + phi_series.eval(TAU * t))
            .collect();
        let curve = match close_legendrian(&ts, &r, &phi, spec.h_target, z0, &limits) {
            Ok(c) => c,
            Err(e) => {
                last_reason = e.to_string();
                continue;
            }
        };
        if contact_flux(&curve).abs() > 1e-10 {
            last_reason = "contact flux did not close".into();
            continue;
        }
        if !is_legendrian(&curve, opts.tolerances.legendrian_tol).legendrian {
            last_reason = "discrete Legendrian residual too large".into();
            continue;
        }
        let cart = curve.cartesian();
        let contact_proj: Vec<P2> = cart.iter().map(|p| [p[0], p[1]]).collect();
        if max_exterior_angle(&contact_proj) > opts.max_turn {
            last_reason = "(u, v) projection turns too sharply".into();
            continue;
        }
        let k = to_hcoords(&curve)?;
        if let Err(reason) = screen(&k, opts) {
            last_reason = reason;
            continue;
        }
        return Ok(curve);
    }
    Err(Error::Generation {
        seed: spec.seed,
        attempts: opts.max_attempts,
        reason: last_reason,
    })
}

/// Random generic (not necessarily Legendrian) knot in `H^2 x S^1`.
pub fn generate_generic(spec: &FourierSpec, opts: &GenerationOptions) -> Result<HKnot> {
    spec.validate()?;
    let n = spec.samples;
    let ts = parameters(n);
    let mut last_reason = String::new();
    for attempt in 0..opts.max_attempts {
        let mut rng = attempt_rng(spec.seed, attempt);
        let xs = Series::random(&mut rng, spec.degree, spec.bound, false);
        let ys = Series::random(&mut rng, spec.degree, spec.bound, false);
        let thetas = Series::random(&mut rng, spec.degree, PI * spec.bound, true);
        let y0 = spec.r_min * spec.r_min + 0.5 + ys.abs_sum();
        let points: Vec<HPoint> = ts
            .iter()
            .map(|&t| {
                let tau = TAU * t;
                HPoint {
                    t,
                    x: xs.eval(tau),
                    y: y0 + ys.eval(tau),
                    theta: TAU * spec.h_target as f64 * t + thetas.eval(tau),
                }
            })
            .collect();
        let k = match HKnot::new(points) {
            Ok(k) => k,
            Err(e) => {
                last_reason = e.to_string();
                continue;
            }
        };
        if let Err(reason) = screen(&k, opts) {
            last_reason = reason;
            continue;
        }
        return Ok(k);
    }
    Err(Error::Generation {
        seed: spec.seed,
        attempts: opts.max_attempts,
        reason: last_reason,
    })
}

/// Result of [`perturb`]: the new knot and the amplitude actually used.
#[derive(Clone, Debug)]
pub struct Perturbed {
    pub knot: HKnot,
    pub eps: f64,
}

/// Smallest distance between non-adjacent segments of the knot in `R^3`.
pub fn embedding_margin(k: &HKnot) -> f64 {
    geom::min_nonadjacent_distance(&k.cartesian()).0
}

/// Amplitude below which a perturbation of `(x, y, theta)` provably keeps both the
/// projected diagram's combinatorics and the embedding in `R^3`.
pub fn isotopy_margin(k: &HKnot, planar_margin: f64) -> f64 {
    let (mut y_min, mut y_max) = (f64::INFINITY, 0.0f64);
    for p in k.points() {
        y_min = y_min.min(p.y);
        y_max = y_max.max(p.y);
    }
    // |d(u, v, z)| <= |dx| + |dy| / (2 sqrt y) + sqrt(y) |dtheta|
    let spatial_gain = 1.0 + 0.5 / y_min.sqrt() + y_max.sqrt();
    let spatial = 0.5 * embedding_margin(k) / spatial_gain;
    let planar = planar_margin / std::f64::consts::SQRT_2;
    spatial.min(planar).min(0.5 * y_min)
}

/// Smooth seeded perturbation of every coordinate by at most `eps`, preserving
/// closure and the fiber winding. The amplitude is halved until the result is
/// generic, embedded and has a valid diagram.
pub fn perturb(k: &HKnot, eps: f64, seed: u64, tol: &Tolerances) -> Result<Perturbed> {
    if eps == 0.0 {
        return Ok(Perturbed {
            knot: k.clone(),
            eps,
        });
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "perturbation amplitude {eps} is not positive"
        )));
    }
    let margin = embedding_margin(k);
    let mut amp = eps;
    let mut last_reason = String::new();
    const ATTEMPTS: usize = 24;
    for attempt in 0..ATTEMPTS {
        let mut rng = attempt_rng(seed, attempt);
        let mut fields = Vec::with_capacity(3);
        for _ in 0..3 {
            let s = Series::random(&mut rng, 3, 1.0, false);
            let norm = s.abs_sum().max(f64::MIN_POSITIVE);
            fields.push((s, amp / norm));
        }
        let points: Vec<HPoint> = k
            .points()
            .iter()
            .map(|p| {
                let tau = TAU * p.t;
                HPoint {
                    t: p.t,
                    x: p.x + fields[0].1 * fields[0].0.eval(tau),
                    y: p.y + fields[1].1 * fields[1].0.eval(tau),
                    theta: p.theta + fields[2].1 * fields[2].0.eval(tau),
                }
            })
            .collect();
        let outcome = HKnot::new(points).and_then(|q| {
            if q.winding() != k.winding() {
                return Err(Error::InvalidInput("winding changed".into()));
            }
            if !is_generic(&q, tol.min_step) {
                return Err(Error::InvalidInput("projection lost genericity".into()));
            }
            check_embedded(&q.cartesian(), 0.5 * margin)?;
            diagram(&q, tol)?;
            Ok(q)
        });
        match outcome {
            Ok(q) => return Ok(Perturbed { knot: q, eps: amp }),
            Err(e) => {
                last_reason = e.to_string();
                amp *= 0.5;
            }
        }
    }
    Err(Error::Generation {
        seed,
        attempts: ATTEMPTS,
        reason: format!("no admissible perturbation below {eps}: {last_reason}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::is_legendrian;

    #[test]
    fn legendrian_generation_is_closed_and_contact() {
        for (h, seed) in [(0, 1u64), (1, 2), (-1, 3)] {
            let spec = FourierSpec::new(2, 0.5, h, seed);
            let c = generate_legendrian(&spec, &GenerationOptions::default()).unwrap();
            assert_eq!(c.winding(), h);
            assert!(contact_flux(&c).abs() < 1e-10, "flux {}", contact_flux(&c));
            let check = is_legendrian(&c, 1e-8);
            assert!(check.legendrian, "residual {}", check.max_residual);
            assert!(check.max_residual < 1e-8);
            let k = to_hcoords(&c).unwrap();
            assert!(is_generic(&k, 1e-9));
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = FourierSpec::new(3, 0.5, 1, 42);
        let opts = GenerationOptions::default();
        let a = generate_legendrian(&spec, &opts).unwrap();
        let b = generate_legendrian(&spec, &opts).unwrap();
        assert_eq!(a, b);
        let a = generate_generic(&FourierSpec::new(3, 1.0, 2, 9), &opts).unwrap();
        let b = generate_generic(&FourierSpec::new(3, 1.0, 2, 9), &opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn generic_generation_imposes_winding() {
        for h in -3..=3 {
            let k = generate_generic(
                &FourierSpec::new(3, 1.0, h, (100 + h) as u64),
                &GenerationOptions::default(),
            )
            .unwrap();
            assert_eq!(k.winding(), h);
        }
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let mut spec = FourierSpec::new(0, 0.5, 0, 1);
        assert!(generate_legendrian(&spec, &GenerationOptions::default()).is_err());
        spec.degree = 2;
        spec.r_min = 0.0;
        assert!(generate_generic(&spec, &GenerationOptions::default()).is_err());
    }

    #[test]
    fn exhausted_attempts_report_the_seed() {
        let opts = GenerationOptions {
            embed_tol: 1e3,
            max_attempts: 3,
            ..GenerationOptions::default()
        };
        match generate_generic(&FourierSpec::new(2, 1.0, 0, 77), &opts) {
            Err(Error::Generation { seed, attempts, .. }) => {
                assert_eq!(seed, 77);
                assert_eq!(attempts, 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_perturbation_is_identity() {
        let k = generate_generic(
            &FourierSpec::new(2, 1.0, 1, 5),
            &GenerationOptions::default(),
        )
        .unwrap();
        let p = perturb(&k, 0.0, 3, &Tolerances::default()).unwrap();
        assert_eq!(p.knot, k);
    }

    #[test]
    fn perturbation_is_bounded_and_generic() {
        let k = generate_generic(
            &FourierSpec::new(2, 1.0, 1, 5),
            &GenerationOptions::default(),
        )
        .unwrap();
        let p = perturb(&k, 1e-4, 11, &Tolerances::default()).unwrap();
        assert!(p.eps <= 1e-4);
        for (a, b) in k.points().iter().zip(p.knot.points()) {
            assert!((a.x - b.x).abs() <= p.eps * (1.0 + 1e-12));
            assert!((a.y - b.y).abs() <= p.eps * (1.0 + 1e-12));
            assert!((a.theta - b.theta).abs() <= p.eps * (1.0 + 1e-12));
        }
        assert!(is_generic(&p.knot, 1e-9));
        assert_eq!(p.knot.winding(), k.winding());
    }
}
