use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::DoubleWeight;

/// Unordered pair of integers, stored as `(min, max)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChernovPair {
    a: i64,
    b: i64,
}

impl ChernovPair {
    pub fn new(a: i64, b: i64) -> Self {
        Self {
            a: a.min(b),
            b: a.max(b),
        }
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }
}

impl fmt::Display for ChernovPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.a, self.b)
    }
}

/// Finite integer combination of pairs; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChernovElement {
    terms: BTreeMap<ChernovPair, i64>,
}

impl ChernovElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((i64, i64), i64)>) -> Self {
        let mut e = Self::zero();
        for ((a, b), c) in terms {
            e.add_term(ChernovPair::new(a, b), c);
        }
        e
    }

    pub fn add_term(&mut self, pair: ChernovPair, coeff: i64) {
        let slot = self.terms.entry(pair).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.terms.remove(&pair);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, pair: ChernovPair) -> i64 {
        self.terms.get(&pair).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (ChernovPair, i64)> + '_ {
        self.terms.iter().map(|(p, c)| (*p, *c))
    }

    pub fn scaled(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(p, c)| (*p, c * k)).collect(),
        }
    }
}

impl Add for ChernovElement {
    type Output = ChernovElement;

    fn add(mut self, rhs: ChernovElement) -> ChernovElement {
        for (p, c) in rhs.terms {
            self.add_term(p, c);
        }
        self
    }
}

impl Neg for ChernovElement {
    type Output = ChernovElement;

    fn neg(self) -> ChernovElement {
        self.scaled(-1)
    }
}

impl Sub for ChernovElement {
    type Output = ChernovElement;

    fn sub(self, rhs: ChernovElement) -> ChernovElement {
        self + (-rhs)
    }
}

impl fmt::Display for ChernovElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            let sign = if *c < 0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            if i > 0 {
                f.write_str(" ")?;
            }
            match c.abs() {
                1 => write!(f, "{sign}{p}")?,
                k => write!(f, "{sign}{k}{p}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct Term {
    pair: [i64; 2],
    coeff: i64,
}

impl Serialize for ChernovElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(p, c)| Term {
            pair: [p.a, p.b],
            coeff: *c,
        }))
    }
}

impl<'de> Deserialize<'de> for ChernovElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<Term>::deserialize(d)?;
        Ok(Self::from_terms(
            terms.into_iter().map(|t| ((t.pair[0], t.pair[1]), t.coeff)),
        ))
    }
}

/// `r([h+1,-1] - [h-1,1]) + sum_d 2([h+, h- - 1] - [h+ - 1, h-])`.
pub fn chernov_i(r: i64, h: i64, weights: &[DoubleWeight]) -> ChernovElement {
    let mut e = ChernovElement::zero();
    e.add_term(ChernovPair::new(h + 1, -1), r);
    e.add_term(ChernovPair::new(h - 1, 1), -r);
    for d in weights {
        e.add_term(ChernovPair::new(d.h_plus, d.h_minus - 1), 2);
        e.add_term(ChernovPair::new(d.h_plus - 1, d.h_minus), -2);
    }
    e
}

/// Linear map sending `[a,b]` to `ab`.
pub fn m_map(e: &ChernovElement) -> i64 {
    e.terms().map(|(p, c)| c * p.a * p.b).sum()
}
