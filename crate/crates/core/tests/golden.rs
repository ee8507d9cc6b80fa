//! Reports over the fixture knots, compared byte-for-byte with `tests/golden`.
//! Set `LEGCALC_BLESS=1` to rewrite the files.

use std::fs;
use std::path::PathBuf;

use legcalc_core::model::to_hcoords;
use legcalc_core::projection::diagram;
use legcalc_core::{fixtures, full_report, ReportOptions, Tolerances};

fn check(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("LEGCALC_BLESS").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{name} drifted from its golden file");
}

fn canonical(json: &str) -> String {
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    let mut out = serde_json::to_string_pretty(&v).unwrap();
    out.push('\n');
    out
}

#[test]
fn circle_report() {
    let c = fixtures::constant_phi_circle(64);
    let report = full_report(
        &to_hcoords(&c).unwrap(),
        Some(&c),
        &ReportOptions::default(),
    )
    .unwrap();
    assert_eq!((report.h, report.w, report.beta), (0, 0, 0));
    check("circle.json", &canonical(&report.to_json()));
}

#[test]
fn figure_eight_report() {
    let k = fixtures::figure_eight_lift(301);
    let report = full_report(&k, None, &ReportOptions::default()).unwrap();
    assert_eq!(
        (report.w, report.beta, report.oracles.beta_oracle),
        (1, 1, Some(1))
    );
    check("figure_eight.json", &canonical(&report.to_json()));
    check(
        "figure_eight.doubles",
        &diagram(&k, &Tolerances::default()).unwrap().dump(),
    );
}

#[test]
fn legendrian_unknot_report() {
    let c = fixtures::legendrian_unknot(256);
    let opts = ReportOptions {
        legendrian: true,
        ..ReportOptions::default()
    };
    let report = full_report(&to_hcoords(&c).unwrap(), Some(&c), &opts).unwrap();
    assert_eq!((report.tb, report.mu), (Some(-1), Some(0)));
    assert!(report.flags.all_pass());
    check("legendrian_unknot.json", &canonical(&report.to_json()));
}
