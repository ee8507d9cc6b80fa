//! Front and Lagrangian diagrams of Legendrian knots in `ker(dz - y dx)`.
//!
//! A front is a closed PL curve in the `xz`-plane whose `x` direction reverses only at
//! marked cusps. At a crossing the strand of smaller slope `dz/dx` is on top, so
//! crossings are derived from the geometry and never written down.
//!
//! Text format:
//!
//! ```text
//! front v1
//! # comments and blank lines are ignored
//! cusp up 1 0
//! 0.5 0.6
//! ...
//! ```
//!
//! Every line after the header is a vertex `x z` or a cusp `cusp down|up x z`. The
//! vertex list is cyclic.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::geom::{self, Box2, SegmentContact, P2};
use crate::oracles::turning_number;
use crate::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CuspDirection {
    Down,
    Up,
}

impl CuspDirection {
    fn flipped(self) -> Self {
        match self {
            CuspDirection::Down => CuspDirection::Up,
            CuspDirection::Up => CuspDirection::Down,
        }
    }

    fn keyword(self) -> &'static str {
        match self {
            CuspDirection::Down => "down",
            CuspDirection::Up => "up",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrontVertex {
    pub x: f64,
    pub z: f64,
    pub cusp: Option<CuspDirection>,
    /// Source line, 0 for vertices not read from text.
    pub line: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontOptions {
    /// Crossing strands must differ in slope by at least this much.
    pub slope_tol: f64,
    /// Steeper segments count as vertical.
    pub max_slope: f64,
}

impl Default for FrontOptions {
    fn default() -> Self {
        Self {
            slope_tol: 1e-6,
            max_slope: 1e6,
        }
    }
}

/// Crossing of segments `seg_a < seg_b`; `over` is the segment on top.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontCrossing {
    pub seg_a: usize,
    pub seg_b: usize,
    pub point: P2,
    pub over: usize,
    pub sign: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrontDiagram {
    vertices: Vec<FrontVertex>,
    crossings: Vec<FrontCrossing>,
}

/// Over strand and sign of a crossing of two oriented strands by the slope rule:
/// `(a_is_over, sign)`, or `None` when the slopes are too close.
pub fn slope_rule(a: P2, b: P2, slope_tol: f64) -> Option<(bool, i64)> {
    let sa = a[1] / a[0];
    let sb = b[1] / b[0];
    if !((sa - sb).abs() >= slope_tol) {
        return None;
    }
    let a_over = sa < sb;
    let (over, under) = if a_over { (a, b) } else { (b, a) };
    let sign = if geom::cross2(over, under) > 0.0 {
        1
    } else {
        -1
    };
    Some((a_over, sign))
}

fn parse_number(token: &str, line: usize, column: usize) -> std::result::Result<f64, ParseError> {
    match token.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ParseError::new(
            line,
            column,
            format!("expected a number, found {token:?}"),
        )),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &text[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (text[..byte].chars().count() + 1, tok))
        .collect()
}

pub fn parse_front(text: &str) -> std::result::Result<FrontDiagram, ParseError> {
    parse_front_with(text, &FrontOptions::default())
}

pub fn parse_front_with(
    text: &str,
    opts: &FrontOptions,
) -> std::result::Result<FrontDiagram, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
    match lines.next() {
        Some((_, l)) if l.split_whitespace().collect::<Vec<_>>() == ["front", "v1"] => {}
        Some((n, _)) => return Err(ParseError::new(n, 1, "expected header `front v1`")),
        None => {
            return Err(ParseError::new(
                1,
                1,
                "empty input, expected header `front v1`",
            ))
        }
    }
    let mut vertices = Vec::new();
    for (line, content) in lines {
        let toks = tokens(content);
        let vertex = match toks.as_slice() {
            [(cx, x), (cz, z)] => FrontVertex {
                x: parse_number(x, line, *cx)?,
                z: parse_number(z, line, *cz)?,
                cusp: None,
                line,
            },
            [(_, "cusp"), (cd, dir), (cx, x), (cz, z)] => {
                let cusp = match *dir {
                    "down" => CuspDirection::Down,
                    "up" => CuspDirection::Up,
                    other => {
                        return Err(ParseError::new(
                            line,
                            *cd,
                            format!("cusp direction must be `down` or `up`, found {other:?}"),
                        ))
                    }
                };
                FrontVertex {
                    x: parse_number(x, line, *cx)?,
                    z: parse_number(z, line, *cz)?,
                    cusp: Some(cusp),
                    line,
                }
            }
            [(c, first), ..] => {
                return Err(ParseError::new(
                    line,
                    *c,
                    format!(
                        "expected `x z` or `cusp down|up x z`, found {first:?} and {} tokens",
                        toks.len()
                    ),
                ))
            }
            [] => continue,
        };
        vertices.push(vertex);
    }
    let end = text.lines().count().max(1);
    FrontDiagram::new(vertices, opts).map_err(|e| match e {
        FrontError::At(line, msg) => ParseError::new(line.max(1), 1, msg),
        FrontError::Global(msg) => ParseError::new(end, 1, msg),
    })
}

enum FrontError {
    At(usize, String),
    Global(String),
}

/// `z` of the segment `p -> c` at horizontal distance `dx` from `c`.
fn z_near(c: &FrontVertex, p: &FrontVertex, dx: f64) -> f64 {
    c.z + (p.z - c.z) * (dx / (p.x - c.x).abs())
}

/// Direction in which a cusp at `c` is traversed, entering from `prev` and leaving to `next`.
fn cusp_direction(
    prev: &FrontVertex,
    c: &FrontVertex,
    next: &FrontVertex,
) -> Option<CuspDirection> {
    let dx = 0.5 * (prev.x - c.x).abs().min((next.x - c.x).abs());
    let z_in = z_near(c, prev, dx);
    let z_out = z_near(c, next, dx);
    if z_out < z_in {
        Some(CuspDirection::Down)
    } else if z_out > z_in {
        Some(CuspDirection::Up)
    } else {
        None
    }
}

impl FrontDiagram {
    fn new(
        vertices: Vec<FrontVertex>,
        opts: &FrontOptions,
    ) -> std::result::Result<Self, FrontError> {
        let n = vertices.len();
        let cusps = vertices.iter().filter(|v| v.cusp.is_some()).count();
        if cusps == 0 {
            return Err(FrontError::Global(
                "component does not close: a closed front needs cusps where x turns back".into(),
            ));
        }
        if n < 3 {
            return Err(FrontError::Global(format!(
                "component does not close: only {n} vertices"
            )));
        }
        if cusps % 2 == 1 {
            return Err(FrontError::Global(format!("odd number of cusps ({cusps})")));
        }
        let dir = |i: usize| {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            [b.x - a.x, b.z - a.z]
        };
        for (i, v) in vertices.iter().enumerate() {
            let d = dir(i);
            if d[0] == 0.0 || (d[1] / d[0]).abs() > opts.max_slope {
                return Err(FrontError::At(v.line, format!("segment {i} is vertical")));
            }
        }
        for i in 0..n {
            let v = &vertices[i];
            let turns = dir((i + n - 1) % n)[0].signum() != dir(i)[0].signum();
            match (v.cusp, turns) {
                (None, true) => {
                    return Err(FrontError::At(
                        v.line,
                        format!("x direction reverses at vertex {i} without a cusp marker"),
                    ))
                }
                (Some(_), false) => {
                    return Err(FrontError::At(
                        v.line,
                        format!("cusp marker at vertex {i} but the x direction does not reverse"),
                    ))
                }
                (Some(declared), true) => {
                    let prev = &vertices[(i + n - 1) % n];
                    let next = &vertices[(i + 1) % n];
                    match cusp_direction(prev, v, next) {
                        Some(actual) if actual == declared => {}
                        Some(actual) => {
                            return Err(FrontError::At(
                                v.line,
                                format!(
                                    "cusp {i} is marked {} but is traversed {}",
                                    declared.keyword(),
                                    actual.keyword()
                                ),
                            ))
                        }
                        None => {
                            return Err(FrontError::At(
                                v.line,
                                format!("branches at cusp {i} coincide"),
                            ))
                        }
                    }
                }
                (None, false) => {}
            }
        }
        let crossings = find_crossings(&vertices, opts)?;
        Ok(Self {
            vertices,
            crossings,
        })
    }

    pub fn vertices(&self) -> &[FrontVertex] {
        &self.vertices
    }

    pub fn crossings(&self) -> &[FrontCrossing] {
        &self.crossings
    }

    pub fn cusp_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.cusp.is_some()).count()
    }

    pub fn evaluate(&self) -> FrontEvaluation {
        let count = |d| self.vertices.iter().filter(|v| v.cusp == Some(d)).count() as i64;
        FrontEvaluation {
            writhe: self.crossings.iter().map(|c| c.sign).sum(),
            crossings: self.crossings.len(),
            down: count(CuspDirection::Down),
            up: count(CuspDirection::Up),
        }
    }

    /// Same front traversed backwards; cusp directions flip.
    pub fn reversed(&self) -> FrontDiagram {
        let vertices: Vec<FrontVertex> = self
            .vertices
            .iter()
            .rev()
            .map(|v| FrontVertex {
                cusp: v.cusp.map(CuspDirection::flipped),
                ..*v
            })
            .collect();
        FrontDiagram::new(vertices, &FrontOptions::default())
            .unwrap_or_else(|_| unreachable!("reversal keeps a valid front valid"))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("front v1\n");
        for v in &self.vertices {
            match v.cusp {
                Some(d) => writeln!(out, "cusp {} {} {}", d.keyword(), v.x, v.z),
                None => writeln!(out, "{} {}", v.x, v.z),
            }
            .expect("writing to a string");
        }
        out
    }
}

fn find_crossings(
    vertices: &[FrontVertex],
    opts: &FrontOptions,
) -> std::result::Result<Vec<FrontCrossing>, FrontError> {
    let n = vertices.len();
    let seg = |i: usize| -> (P2, P2) {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        ([a.x, a.z], [b.x, b.z])
    };
    let boxes: Vec<Box2> = (0..n)
        .map(|i| {
            let (a, b) = seg(i);
            Box2::of_segment(a, b)
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if !boxes[i].overlaps(&boxes[j]) {
                continue;
            }
            let (a0, a1) = seg(i);
            let (b0, b1) = seg(j);
            match geom::segment_contact(a0, a1, b0, b1) {
                SegmentContact::Disjoint => {}
                SegmentContact::Degenerate => {
                    return Err(FrontError::At(
                        vertices[j].line,
                        format!("segments {i} and {j} meet at a vertex or overlap"),
                    ))
                }
                SegmentContact::Proper { ua, .. } => {
                    let da = geom::sub2(a1, a0);
                    let db = geom::sub2(b1, b0);
                    let Some((a_over, sign)) = slope_rule(da, db, opts.slope_tol) else {
                        return Err(FrontError::At(
                            vertices[j].line,
                            format!("segments {i} and {j} cross with equal slopes"),
                        ));
                    };
                    out.push(FrontCrossing {
                        seg_a: i,
                        seg_b: j,
                        point: [a0[0] + ua * da[0], a0[1] + ua * da[1]],
                        over: if a_over { i } else { j },
                        sign,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Diagram counts from which `tb` and `mu` follow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontEvaluation {
    pub writhe: i64,
    pub crossings: usize,
    pub down: i64,
    pub up: i64,
}

impl FrontEvaluation {
    pub fn cusps(&self) -> i64 {
        self.down + self.up
    }

    /// Writhe minus half the cusps.
    pub fn tb(&self) -> i64 {
        self.writhe - self.cusps() / 2
    }

    /// Half the downward cusps minus half the upward ones.
    pub fn mu(&self) -> i64 {
        (self.down - self.up) / 2
    }

    /// Counts of the mirror diagram: every crossing changes sign, cusps stay.
    pub fn mirror(&self) -> FrontEvaluation {
        FrontEvaluation {
            writhe: -self.writhe,
            ..*self
        }
    }
}

pub fn front_crossing_signs(f: &FrontDiagram) -> Vec<(FrontCrossing, i64)> {
    f.crossings().iter().map(|c| (*c, c.sign)).collect()
}

pub fn front_tb(f: &FrontDiagram) -> i64 {
    f.evaluate().tb()
}

pub fn front_mu(f: &FrontDiagram) -> i64 {
    f.evaluate().mu()
}

/// Closed immersed curve in the `xy`-plane with heights; at a crossing the
/// strand with larger `z` is on top.
#[derive(Clone, Debug, PartialEq)]
pub struct LagrangianDiagram {
    points: Vec<P2>,
    signs: Vec<i64>,
}

impl LagrangianDiagram {
    pub fn from_heights(points: Vec<P2>, heights: &[f64], tol: &Tolerances) -> Result<Self> {
        let n = points.len();
        if n < 3 || heights.len() != n {
            return Err(Error::InvalidInput(format!(
                "{n} points and {} heights; need at least 3 of each",
                heights.len()
            )));
        }
        let seg = |i: usize| (points[i], points[(i + 1) % n]);
        for i in 0..n {
            let (a, b) = seg(i);
            if a == b {
                return Err(Error::InvalidInput(format!("segment {i} has zero length")));
            }
        }
        let mut signs = Vec::new();
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a0, a1) = seg(i);
                let (b0, b1) = seg(j);
                match geom::segment_contact(a0, a1, b0, b1) {
                    SegmentContact::Disjoint => {}
                    SegmentContact::Degenerate => {
                        return Err(Error::InvalidInput(format!(
                            "segments {i} and {j} meet at a vertex"
                        )))
                    }
                    SegmentContact::Proper { ua, ub } => {
                        let da = geom::sub2(a1, a0);
                        let db = geom::sub2(b1, b0);
                        let sin = geom::cross2(da, db).abs() / (geom::norm2(da) * geom::norm2(db));
                        if sin < tol.angle_tol.sin() {
                            return Err(Error::InvalidInput(format!(
                                "segments {i} and {j} are tangent"
                            )));
                        }
                        let za = heights[i] + ua * (heights[(i + 1) % n] - heights[i]);
                        let zb = heights[j] + ub * (heights[(j + 1) % n] - heights[j]);
                        if za == zb {
                            return Err(Error::InvalidInput(format!(
                                "segments {i} and {j} cross at equal height"
                            )));
                        }
                        let (over, under) = if za > zb { (da, db) } else { (db, da) };
                        signs.push(if geom::cross2(over, under) > 0.0 {
                            1
                        } else {
                            -1
                        });
                    }
                }
            }
        }
        Ok(Self { points, signs })
    }

    pub fn points(&self) -> &[P2] {
        &self.points
    }

    pub fn crossing_signs(&self) -> &[i64] {
        &self.signs
    }
}

/// Writhe of the Lagrangian projection.
pub fn lagrangian_tb(l: &LagrangianDiagram) -> i64 {
    l.signs.iter().sum()
}

/// Turning number of the Lagrangian projection.
pub fn lagrangian_mu(l: &LagrangianDiagram, tol: &Tolerances) -> Result<i64> {
    Ok(turning_number(&l.points, tol.angle_tol, tol.residual)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::f64::consts::TAU;

    const EYE: &str = "front v1\ncusp up 1 0\n0.5 0.6\n0 0.8\n-0.5 0.6\ncusp down -1 0\n-0.6 -0.5\n-0.3 -0.9\n0.3 -0.9\n0.6 -0.6\n";

    const STABILIZED: &str = "front v1\ncusp up 1 0\n0.5 0.6\n0 0.8\n-0.5 0.6\ncusp down -1 0\n\
        -0.6 -0.5\n-0.3 -0.9\ncusp down 0.1 -0.95\ncusp down -0.1 -1.05\n0.3 -1.1\n0.6 -0.6\n";

    #[test]
    fn slope_rule_signs() {
        assert_eq!(slope_rule([1.0, -1.0], [1.0, 1.0], 1e-6), Some((true, 1)));
        assert_eq!(
            slope_rule([1.0, -1.0], [-1.0, -1.0], 1e-6),
            Some((true, -1))
        );
        assert_eq!(slope_rule([1.0, 1.0], [2.0, 2.0], 1e-6), None);
    }

    #[test]
    fn eye_is_the_standard_unknot() {
        let f = parse_front(EYE).unwrap();
        assert_eq!(f.cusp_count(), 2);
        assert!(f.crossings().is_empty());
        assert_eq!((front_tb(&f), front_mu(&f)), (-1, 0));
    }

    #[test]
    fn stabilization_lowers_tb_and_shifts_mu() {
        let f = parse_front(STABILIZED).unwrap();
        let e = f.evaluate();
        assert_eq!((e.down, e.up, e.crossings), (3, 1, 0));
        assert_eq!((e.tb(), e.mu()), (-2, 1));
        let r = f.reversed().evaluate();
        assert_eq!((r.tb(), r.mu()), (-2, -1));
    }

    #[test]
    fn trefoil_front() {
        let f = parse_front(fixtures::TREFOIL_FRONT).unwrap();
        let e = f.evaluate();
        assert_eq!(e.crossings, 3);
        assert!(f.crossings().iter().all(|c| c.sign == 1));
        assert_eq!((e.writhe, e.cusps(), e.tb(), e.mu()), (3, 4, 1, 0));
        assert_eq!(e.mirror().tb(), -3 - 2);
        let r = f.reversed().evaluate();
        assert_eq!((r.tb(), r.mu()), (1, 0));
    }

    #[test]
    fn text_round_trip() {
        let f = parse_front(STABILIZED).unwrap();
        let g = parse_front(&f.to_text()).unwrap();
        assert_eq!(f.evaluate(), g.evaluate());
    }

    #[test]
    fn vertical_segment_is_located() {
        let text = "front v1\ncusp up 1 0\n0.5 0.6\n0.5 0.8\n-0.5 0.6\ncusp down -1 0\n0 -0.9\n";
        let err = parse_front(text).unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("vertical"));
    }

    #[test]
    fn structural_errors() {
        let odd = "front v1\ncusp up 1 0\n0 0.8\ncusp down -1 0\n0 -0.8\ncusp up 0.5 -0.5\n";
        assert!(parse_front(odd).unwrap_err().message.contains("odd"));
        let open = "front v1\n0 0\n1 1\n2 0\n";
        assert!(parse_front(open).unwrap_err().message.contains("close"));
        let missing = "front v1\ncusp up 1 0\n0 0.8\n-1 0\n0 -0.8\ncusp down 0.5 -0.5\n";
        let err = parse_front(missing).unwrap_err();
        assert_eq!(err.line, 4);
        let mismatch = EYE.replace("cusp up 1 0", "cusp down 1 0");
        assert!(parse_front(&mismatch)
            .unwrap_err()
            .message
            .contains("marked down"));
        let header = parse_front("front v2\n").unwrap_err();
        assert_eq!((header.line, header.column), (1, 1));
        let bad = parse_front("front v1\n1 zz\n").unwrap_err();
        assert_eq!((bad.line, bad.column), (2, 3));
        let bad = parse_front("front v1\ncusp sideways 1 0\n").unwrap_err();
        assert_eq!((bad.line, bad.column), (2, 6));
    }

    fn lagrangian_figure_eight(n: usize) -> (Vec<P2>, Vec<f64>) {
        // x = cos t, z = sin^3 t, y = dz/dx
        (0..n)
            .map(|i| {
                let t = TAU * (i as f64 + 0.3) / n as f64;
                ([t.cos(), -3.0 * t.sin() * t.cos()], t.sin().powi(3))
            })
            .unzip()
    }

    #[test]
    fn lagrangian_unknot_matches_the_front() {
        let (pts, z) = lagrangian_figure_eight(301);
        let tol = Tolerances::default();
        let l = LagrangianDiagram::from_heights(pts, &z, &tol).unwrap();
        assert_eq!(l.crossing_signs(), &[-1]);
        let front = parse_front(EYE).unwrap().evaluate();
        assert_eq!(
            (lagrangian_tb(&l), lagrangian_mu(&l, &tol).unwrap()),
            (front.tb(), front.mu())
        );
    }

    #[test]
    fn lagrangian_round_curve_and_kink() {
        let tol = Tolerances::default();
        let circle: Vec<P2> = (0..64)
            .map(|i| {
                let t = TAU * i as f64 / 64.0;
                [t.cos(), t.sin()]
            })
            .collect();
        let l = LagrangianDiagram::from_heights(circle, &[0.0; 64], &tol).unwrap();
        assert_eq!(
            (lagrangian_tb(&l), lagrangian_mu(&l, &tol).unwrap()),
            (0, 1)
        );
        // limacon rho = 0.5 + cos t: one self-crossing at the origin between
        // t = 2pi/3 (tangent (sqrt3/4, -3/4)) and t = 4pi/3 (tangent (-sqrt3/4, -3/4))
        let n = 301;
        let ts: Vec<f64> = (0..n).map(|i| TAU * (i as f64 + 0.5) / n as f64).collect();
        let pts: Vec<P2> = ts
            .iter()
            .map(|t| {
                let rho = 0.5 + t.cos();
                [rho * t.cos(), rho * t.sin()]
            })
            .collect();
        // z = sin t puts t = 2pi/3 on top: cross(over, under) = -3 sqrt3 / 8 < 0
        let up: Vec<f64> = ts.iter().map(|t| t.sin()).collect();
        let down: Vec<f64> = ts.iter().map(|t| -t.sin()).collect();
        let neg = LagrangianDiagram::from_heights(pts.clone(), &up, &tol).unwrap();
        let pos = LagrangianDiagram::from_heights(pts, &down, &tol).unwrap();
        assert_eq!((lagrangian_tb(&neg), lagrangian_tb(&pos)), (-1, 1));
        assert_eq!(lagrangian_mu(&pos, &tol).unwrap(), 2);
    }
}
