use serde::{Deserialize, Serialize};

use super::{ChernovElement, DoubleWeight, KnotInvariants};
use crate::error::{Error, Result};
use crate::model::{from_hcoords_with, is_legendrian, CylCurve, HKnot, SamplingLimits};
use crate::oracles::{beta_oracle, mu_oracle, tb_oracle, LinkingOptions, OracleValue};
use crate::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportOptions {
    pub tolerances: Tolerances,
    pub oracles: bool,
    /// Compute `tb` and `mu`; the curve must pass the Legendrian predicate.
    pub legendrian: bool,
    pub linking: LinkingOptions,
    /// Pushoff size; `None` picks it from the curve's feature size.
    pub eps: Option<f64>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            oracles: true,
            legendrian: false,
            linking: LinkingOptions::default(),
            eps: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_oracle: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tb_oracle: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_oracle: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tb_eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Outcome of every identity the report could check. `None` means not applicable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub fiber_split: bool,
    pub m_identity: bool,
    pub residuals: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_oracle: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_beta_oracle: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tb_oracle: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tb_beta_oracle: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_oracle: Option<bool>,
}

impl Flags {
    pub fn all_pass(&self) -> bool {
        let optional = [
            self.beta_oracle,
            self.m_beta_oracle,
            self.tb_oracle,
            self.tb_beta_oracle,
            self.mu_oracle,
        ];
        self.fiber_split
            && self.m_identity
            && self.residuals
            && optional.iter().all(|f| f.unwrap_or(true))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub h: i64,
    pub r: i64,
    pub w: i64,
    pub beta: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tb: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<i64>,
    pub chernov_m: i64,
    pub chernov: ChernovElement,
    pub double_points: usize,
    pub weights: Vec<DoubleWeight>,
    pub oracles: OracleReport,
    pub flags: Flags,
    pub max_residual: f64,
    pub tolerances: Tolerances,
}

impl InvariantReport {
    /// Pretty JSON with keys in sorted order at every level.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
        out.push('\n');
        out
    }
}

/// Runs the formula pipeline and, per `opts`, the oracles. The fiber-split and
/// `m(I)` identities are hard errors; oracle disagreements are recorded in the flags.
pub fn full_report(
    k: &HKnot,
    source: Option<&CylCurve>,
    opts: &ReportOptions,
) -> Result<InvariantReport> {
    let tol = &opts.tolerances;
    let converted;
    let curve = if opts.legendrian {
        let c = match source {
            Some(c) => c,
            None => {
                let limits = SamplingLimits {
                    max_step: f64::INFINITY,
                    ..SamplingLimits::default()
                };
                converted = from_hcoords_with(k, &limits)?;
                &converted
            }
        };
        let check = is_legendrian(c, tol.legendrian_tol);
        if !check.legendrian {
            return Err(Error::NotLegendrian {
                residual: check.max_residual,
                index: check.worst_step,
            });
        }
        Some(c)
    } else {
        None
    };

    let inv = KnotInvariants::compute(k, tol)?;
    let mut max_residual = inv.max_residual;
    let mut oracles = OracleReport::default();
    let mut flags = Flags {
        fiber_split: true,
        m_identity: true,
        residuals: true,
        ..Flags::default()
    };
    let (tb, mu) = match curve {
        Some(_) => (Some(inv.beta), Some(inv.r + inv.h)),
        None => (None, None),
    };

    if opts.oracles {
        let beta: OracleValue = beta_oracle(k, opts.eps, &opts.linking)?;
        oracles.beta_oracle = Some(beta.value);
        oracles.beta_eps = Some(beta.eps);
        oracles.seed = Some(beta.seed);
        flags.beta_oracle = Some(beta.value == inv.beta);
        flags.m_beta_oracle = Some(inv.chernov_m + 2 * beta.value == 0);
        if let Some(c) = curve {
            let tbo = tb_oracle(c, opts.eps, tol, &opts.linking)?;
            let muo = mu_oracle(c, tol)?;
            max_residual = max_residual.max(muo.residual);
            oracles.tb_oracle = Some(tbo.value);
            oracles.tb_eps = Some(tbo.eps);
            oracles.mu_oracle = Some(muo.value);
            flags.tb_oracle = Some(tbo.value == inv.w + inv.r * inv.h);
            flags.tb_beta_oracle = Some(tbo.value == beta.value);
            flags.mu_oracle = Some(muo.value == inv.r + inv.h);
        }
    }
    flags.residuals = max_residual < tol.residual;

    Ok(InvariantReport {
        h: inv.h,
        r: inv.r,
        w: inv.w,
        beta: inv.beta,
        tb,
        mu,
        chernov_m: inv.chernov_m,
        chernov: inv.chernov,
        double_points: inv.weights.len(),
        weights: inv.weights,
        oracles,
        flags,
        max_residual,
        tolerances: *tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::to_hcoords;

    #[test]
    fn json_keys_are_sorted() {
        let k = to_hcoords(&fixtures::constant_phi_circle(128)).unwrap();
        let report = full_report(&k, None, &ReportOptions::default()).unwrap();
        let text = report.to_json();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let keys: Vec<&String> = value.as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(text.find("\"beta\"").unwrap() < text.find("\"chernov\"").unwrap());
        assert!(report.flags.all_pass());
        assert_eq!(report.oracles.beta_oracle, Some(0));
    }

    #[test]
    fn legendrian_report_fills_tb_and_mu() {
        let c = fixtures::legendrian_unknot(512);
        let k = to_hcoords(&c).unwrap();
        let opts = ReportOptions {
            legendrian: true,
            ..ReportOptions::default()
        };
        let report = full_report(&k, Some(&c), &opts).unwrap();
        assert_eq!((report.tb, report.mu), (Some(-1), Some(0)));
        assert_eq!(report.oracles.tb_oracle, Some(-1));
        assert_eq!(report.oracles.mu_oracle, Some(0));
        assert!(report.flags.all_pass(), "{:?}", report.flags);
    }

    #[test]
    fn legendrian_request_on_a_non_legendrian_curve_fails() {
        let k = to_hcoords(&fixtures::torus_curve(128)).unwrap();
        let opts = ReportOptions {
            legendrian: true,
            ..ReportOptions::default()
        };
        assert!(matches!(
            full_report(&k, None, &opts),
            Err(Error::NotLegendrian { .. })
        ));
    }
}
