//! `cylcurve v1` and `hknot v1` text files.
//!
//! A header `cylcurve v1 n=<N>` (or `hknot v1 n=<N>`) followed by `N` lines of four
//! decimals: `t z r phi` or `t x y theta`. Blank lines and `#` comments are skipped.

use std::fmt::Write as _;

use crate::error::{ParseError, Result};
use crate::model::{CylCurve, CylSample, HKnot, HPoint};

#[derive(Clone, Debug, PartialEq)]
pub enum CurveFile {
    Cyl(CylCurve),
    H(HKnot),
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Cyl,
    H,
}

fn parse_rows(text: &str) -> std::result::Result<(Kind, Vec<[f64; 4]>), ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
    let (header_line, header) = lines.next().ok_or_else(|| {
        ParseError::new(
            1,
            1,
            "empty input, expected a `cylcurve v1` or `hknot v1` header",
        )
    })?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let kind = match words.first().copied() {
        Some("cylcurve") => Kind::Cyl,
        Some("hknot") => Kind::H,
        _ => {
            return Err(ParseError::new(
                header_line,
                1,
                "expected a `cylcurve v1` or `hknot v1` header",
            ))
        }
    };
    if words.get(1) != Some(&"v1") {
        return Err(ParseError::new(
            header_line,
            1,
            "unsupported version, expected `v1`",
        ));
    }
    let count = match words.get(2).and_then(|w| w.strip_prefix("n=")) {
        Some(n) if words.len() == 3 => n.parse::<usize>().map_err(|_| {
            ParseError::new(
                header_line,
                header.find("n=").unwrap_or(0) + 1,
                "bad sample count",
            )
        })?,
        _ => {
            return Err(ParseError::new(
                header_line,
                1,
                "header must end with `n=<count>`",
            ))
        }
    };
    let mut rows = Vec::with_capacity(count);
    let mut last_line = header_line;
    for (line, content) in lines {
        last_line = line;
        let mut row = [0.0; 4];
        let mut fields = 0;
        let mut offset = 0;
        for tok in content.split_whitespace() {
            let column = content[offset..].find(tok).map_or(1, |p| offset + p + 1);
            offset = column - 1 + tok.len();
            if fields == 4 {
                return Err(ParseError::new(line, column, "more than four fields"));
            }
            row[fields] = match tok.parse::<f64>() {
                Ok(v) if v.is_finite() => v,
                _ => {
                    return Err(ParseError::new(
                        line,
                        column,
                        format!("expected a number, found {tok:?}"),
                    ))
                }
            };
            fields += 1;
        }
        if fields < 4 {
            return Err(ParseError::new(
                line,
                content.len() + 1,
                format!("expected four fields, found {fields}"),
            ));
        }
        rows.push(row);
    }
    if rows.len() != count {
        return Err(ParseError::new(
            last_line,
            1,
            format!(
                "header announces {count} samples but {} were given",
                rows.len()
            ),
        ));
    }
    Ok((kind, rows))
}

pub fn parse_curve(text: &str) -> Result<CurveFile> {
    let (kind, rows) = parse_rows(text)?;
    Ok(match kind {
        Kind::Cyl => CurveFile::Cyl(CylCurve::new(
            rows.iter()
                .map(|r| CylSample {
                    t: r[0],
                    z: r[1],
                    r: r[2],
                    phi: r[3],
                })
                .collect(),
        )?),
        Kind::H => CurveFile::H(HKnot::new(
            rows.iter()
                .map(|r| HPoint {
                    t: r[0],
                    x: r[1],
                    y: r[2],
                    theta: r[3],
                })
                .collect(),
        )?),
    })
}

pub fn write_cylcurve(c: &CylCurve) -> String {
    let mut out = format!("cylcurve v1 n={}\n", c.len());
    for s in c.samples() {
        let _ = writeln!(out, "{} {} {} {}", s.t, s.z, s.r, s.phi);
    }
    out
}

pub fn write_hknot(k: &HKnot) -> String {
    let mut out = format!("hknot v1 n={}\n", k.len());
    for p in k.points() {
        let _ = writeln!(out, "{} {} {} {}", p.t, p.x, p.y, p.theta);
    }
    out
}

impl CurveFile {
    pub fn to_text(&self) -> String {
        match self {
            CurveFile::Cyl(c) => write_cylcurve(c),
            CurveFile::H(k) => write_hknot(k),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fixtures;

    #[test]
    fn round_trips_are_exact() {
        let c = fixtures::torus_curve(64);
        let text = write_cylcurve(&c);
        assert_eq!(parse_curve(&text).unwrap(), CurveFile::Cyl(c));
        let k = fixtures::figure_eight_lift(65);
        let text = write_hknot(&k);
        assert_eq!(parse_curve(&text).unwrap(), CurveFile::H(k));
    }

    fn parse_err(text: &str) -> ParseError {
        match parse_curve(text) {
            Err(Error::Parse(e)) => e,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_locations() {
        assert_eq!(parse_err("").line, 1);
        assert_eq!(parse_err("curve v1 n=1\n").line, 1);
        let e = parse_err("# c\nhknot v1 n=4\n0 1 2 3\n0.25 1 x 3\n");
        assert_eq!((e.line, e.column), (4, 8));
        let e = parse_err("hknot v1 n=4\n0 1 2 3\n0.25 1 2\n");
        assert_eq!(e.line, 3);
        let e = parse_err("hknot v1 n=3\n0 1 2 3\n0.25 1 2 3\n");
        assert!(e.message.contains("announces 3"));
    }

    #[test]
    fn validation_runs_after_parsing() {
        let text = "hknot v1 n=4\n0 0 1 0\n0.25 1 -1 0\n0.5 1 2 0\n0.75 0 2 0\n";
        assert!(matches!(parse_curve(text), Err(Error::InvalidInput(_))));
    }
}
