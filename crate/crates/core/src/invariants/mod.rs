//! `h`, `r`, double-point weights, `w`, `beta`, and for Legendrian curves `tb` and `mu`.

mod chernov;
mod report;

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

pub use chernov::{chernov_i, m_map, ChernovElement, ChernovPair};
pub use report::{full_report, Flags, InvariantReport, OracleReport, ReportOptions};

use crate::error::{Error, Result};
use crate::model::{is_legendrian, to_hcoords, CylCurve, HKnot};
use crate::oracles::{turning_number, Extracted};
use crate::projection::{diagram, DoublePoint, PlanarCurve, ProjectedDiagram};
use crate::{round_checked, Tolerances};

/// Fiber winding of the knot.
pub fn homology_h(k: &HKnot, residual_bound: f64) -> Result<Extracted> {
    let total = k.theta_unwrapped(k.len()) - k.theta_unwrapped(0);
    let (value, residual) = round_checked(total / TAU, residual_bound, "homology h")?;
    Ok(Extracted { value, residual })
}

/// Turning number of the projection.
pub fn rotation_r(curve: &PlanarCurve, tol: &Tolerances) -> Result<Extracted> {
    turning_number(curve.vertices(), tol.angle_tol, tol.residual)
}

/// Homologies of the two loops obtained by cutting the knot at the preimages of a
/// double point and closing each piece with an arc of the fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcHomology {
    pub h_plus: i64,
    pub h_minus: i64,
}

impl ArcHomology {
    pub fn weight(&self) -> i64 {
        self.h_plus - self.h_minus
    }
}

/// `theta` gained along the knot from arc position `from` to `to`, going forwards.
fn theta_along(curve: &PlanarCurve, h: i64, from: f64, to: f64) -> f64 {
    let gain = curve.theta_at(to) - curve.theta_at(from);
    if to >= from {
        gain
    } else {
        gain + h as f64 * TAU
    }
}

/// Both fiber arcs run in the positive `theta` direction, so together they cover
/// the fiber once and `h_plus + h_minus = h + 1`. A violation is reported as an
/// identity failure.
pub fn arc_homologies(
    d: &DoublePoint,
    curve: &PlanarCurve,
    h: i64,
    residual_bound: f64,
) -> Result<(ArcHomology, f64)> {
    let fiber_plus = (d.theta_minus - d.theta_plus).rem_euclid(TAU);
    let fiber_minus = (d.theta_plus - d.theta_minus).rem_euclid(TAU);
    let plus = theta_along(curve, h, d.s_minus, d.s_plus) + fiber_plus;
    let minus = theta_along(curve, h, d.s_plus, d.s_minus) + fiber_minus;
    let (h_plus, res_plus) = round_checked(plus / TAU, residual_bound, "h(K_d+)")?;
    let (h_minus, res_minus) = round_checked(minus / TAU, residual_bound, "h(K_d-)")?;
    if h_plus + h_minus != h + 1 {
        return Err(Error::Identity(format!(
            "fiber split at double point on segments ({}, {}): {h_plus} + {h_minus} != {h} + 1",
            d.seg_a, d.seg_b
        )));
    }
    Ok((ArcHomology { h_plus, h_minus }, res_plus.max(res_minus)))
}

/// Weight and arc homologies of one double point, keyed by its position in the diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleWeight {
    pub id: usize,
    pub w: i64,
    pub h_plus: i64,
    pub h_minus: i64,
}

/// Everything computed from one generic knot and its diagram.
#[derive(Clone, Debug, PartialEq)]
pub struct KnotInvariants {
    pub h: i64,
    pub r: i64,
    pub w: i64,
    pub beta: i64,
    pub weights: Vec<DoubleWeight>,
    pub chernov: ChernovElement,
    pub chernov_m: i64,
    pub max_residual: f64,
}

impl KnotInvariants {
    pub fn compute(k: &HKnot, tol: &Tolerances) -> Result<Self> {
        Ok(Self::compute_with_diagram(k, tol)?.0)
    }

    pub fn compute_with_diagram(k: &HKnot, tol: &Tolerances) -> Result<(Self, ProjectedDiagram)> {
        let diag = diagram(k, tol)?;
        let inv = Self::from_diagram(k, &diag, tol)?;
        Ok((inv, diag))
    }

    /// Fails if the algebraic identity `m(I) + 2w + 2rh = 0` does not hold.
    pub fn from_diagram(k: &HKnot, diag: &ProjectedDiagram, tol: &Tolerances) -> Result<Self> {
        let h = homology_h(k, tol.residual)?;
        let r = rotation_r(&diag.curve, tol)?;
        let mut max_residual = h.residual.max(r.residual);
        let mut weights = Vec::with_capacity(diag.doubles.len());
        for (id, d) in diag.doubles.iter().enumerate() {
            let (arc, residual) = arc_homologies(d, &diag.curve, h.value, tol.residual)?;
            max_residual = max_residual.max(residual);
            weights.push(DoubleWeight {
                id,
                w: arc.weight(),
                h_plus: arc.h_plus,
                h_minus: arc.h_minus,
            });
        }
        let w: i64 = weights.iter().map(|d| d.w).sum();
        let beta = w + r.value * h.value;
        let chernov = chernov_i(r.value, h.value, &weights);
        let chernov_m = m_map(&chernov);
        if chernov_m + 2 * w + 2 * r.value * h.value != 0 {
            return Err(Error::Identity(format!(
                "m(I) = {chernov_m} but w = {w}, r = {}, h = {}",
                r.value, h.value
            )));
        }
        Ok(Self {
            h: h.value,
            r: r.value,
            w,
            beta,
            weights,
            chernov,
            chernov_m,
            max_residual,
        })
    }
}

pub fn winding_w(k: &HKnot, tol: &Tolerances) -> Result<i64> {
    Ok(KnotInvariants::compute(k, tol)?.w)
}

pub fn beta_formula(k: &HKnot, tol: &Tolerances) -> Result<i64> {
    Ok(KnotInvariants::compute(k, tol)?.beta)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendrianInvariants {
    pub tb: i64,
    pub mu: i64,
}

/// `tb = beta` and `mu = r + h` for a curve passing the Legendrian predicate.
pub fn tb_mu(c: &CylCurve, tol: &Tolerances) -> Result<(LegendrianInvariants, KnotInvariants)> {
    let check = is_legendrian(c, tol.legendrian_tol);
    if !check.legendrian {
        return Err(Error::NotLegendrian {
            residual: check.max_residual,
            index: check.worst_step,
        });
    }
    let inv = KnotInvariants::compute(&to_hcoords(c)?, tol)?;
    Ok((
        LegendrianInvariants {
            tb: inv.beta,
            mu: inv.r + inv.h,
        },
        inv,
    ))
}
