//! Classical invariants of Legendrian knots in `(R^3 \ z-axis, ker(dz + r^2 dphi))`
//! and of generic knots in `H^2 x S^1`.
//!
//! Knots are closed sampled polylines. The pipeline is
//!
//! * [`model`]: cylindrical `(z, r, phi)` curves, their `(x, y, theta)` counterparts,
//!   Legendrian/genericity predicates and seeded generators;
//! * [`projection`]: the projected diagram in the upper half-plane with labelled
//!   double points;
//! * [`invariants`]: homology `h`, rotation `r`, double-point weights, winding `w`,
//!   self-linking `beta = w + r h`, `tb`, `mu` and the Chernov element;
//! * [`oracles`]: linking numbers and turning numbers that never go through the
//!   `w + r h` route and are used to cross-check it;
//! * [`front`]: front and Lagrangian diagrams in the standard contact structure.
//!
//! All integer invariants are extracted by rounding with a residual check; a residual
//! above [`Tolerances::residual`] is an error, never a silent round.

// `!(x < bound)` is written on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fixtures;
pub mod front;
pub mod geom;
pub mod invariants;
pub mod io;
pub mod model;
pub mod oracles;
pub mod projection;
pub mod suite;

use serde::{Deserialize, Serialize};

pub use error::{Error, NonGeneric, ParseError, Result};
pub use invariants::{full_report, InvariantReport, KnotInvariants, ReportOptions};
pub use model::{CylCurve, CylSample, FourierSpec, HKnot, HPoint};
pub use projection::{DoublePoint, PlanarCurve, ProjectedDiagram};

/// Numerical tolerances shared by the whole pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Minimum crossing angle (radians) of a transversal double point; also the
    /// slack below `pi` allowed for an exterior angle before it counts as a reversal.
    pub angle_tol: f64,
    /// Minimum distance between two double points.
    pub sep_tol: f64,
    /// Minimum distance of an intersection parameter from a segment endpoint.
    pub u_tol: f64,
    /// Bound on the rounding residual of every integer extraction.
    pub residual: f64,
    /// Minimum length of a projected segment.
    pub min_step: f64,
    /// Bound on the discrete Legendrian residual.
    pub legendrian_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            angle_tol: 1e-3,
            sep_tol: 1e-6,
            u_tol: 1e-9,
            residual: 1e-6,
            min_step: 1e-9,
            legendrian_tol: 1e-8,
        }
    }
}

/// Rounds `value` to the nearest integer, failing when the distance to it is not
/// below `bound`. Returns the integer and the residual.
pub fn round_checked(value: f64, bound: f64, quantity: &'static str) -> Result<(i64, f64)> {
    if !value.is_finite() {
        return Err(Error::Residual {
            quantity,
            value,
            residual: f64::INFINITY,
        });
    }
    let rounded = value.round();
    let residual = (value - rounded).abs();
    if residual >= bound {
        return Err(Error::Residual {
            quantity,
            value,
            residual,
        });
    }
    Ok((rounded as i64, residual))
}
