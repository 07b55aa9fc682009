//! Finite rational combinations of canonical keys.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::diagram::{canonicalize, Diagram, DiagramError, Key};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `p/q` (or `p` for integers).
pub fn format_q(x: &Q) -> String {
    x.to_string()
}

pub fn parse_q(s: &str) -> Option<Q> {
    s.trim().parse().ok()
}

/// Sparse combination; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LinComb {
    terms: BTreeMap<Key, Q>,
}

impl LinComb {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(key: Key, coeff: Q) -> Self {
        let mut c = Self::new();
        c.add_term(key, coeff);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &Key) -> Q {
        self.terms.get(key).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Key, &Q)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &Key> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, key: Key, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Add `coeff * d`, applying the antisymmetry sign of `d`.
    pub fn add_diagram(&mut self, d: &Diagram, coeff: &Q) -> Result<(), DiagramError> {
        let sk = canonicalize(d)?;
        if sk.sign != 0 {
            self.add_term(sk.key, coeff * q(sk.sign as i64));
        }
        Ok(())
    }

    /// Like [`Self::add_diagram`] but boring diagrams contribute nothing.
    pub fn add_homotopy(&mut self, d: &Diagram, coeff: &Q) -> Result<(), DiagramError> {
        if d.is_boring() {
            return Ok(());
        }
        self.add_diagram(d, coeff)
    }

    pub fn add_scaled(&mut self, other: &LinComb, factor: &Q) {
        if factor.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * factor);
        }
    }

    pub fn scaled(&self, factor: &Q) -> LinComb {
        let mut out = LinComb::new();
        out.add_scaled(self, factor);
        out
    }

    pub fn to_terms(&self) -> Vec<TermDoc> {
        self.terms
            .iter()
            .map(|(k, c)| TermDoc {
                key: k.to_hex(),
                coeff: format_q(c),
            })
            .collect()
    }

    pub fn from_terms(terms: &[TermDoc]) -> Result<LinComb, String> {
        let mut out = LinComb::new();
        for t in terms {
            let key = Key::from_hex(&t.key).map_err(|e| e.to_string())?;
            let c = parse_q(&t.coeff).ok_or_else(|| format!("bad coefficient {:?}", t.coeff))?;
            out.add_term(key, c);
        }
        Ok(out)
    }
}

impl FromIterator<(Key, Q)> for LinComb {
    fn from_iter<I: IntoIterator<Item = (Key, Q)>>(iter: I) -> Self {
        let mut out = LinComb::new();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

impl Add<&LinComb> for &LinComb {
    type Output = LinComb;
    fn add(self, rhs: &LinComb) -> LinComb {
        let mut out = self.clone();
        out.add_scaled(rhs, &Q::one());
        out
    }
}

impl Sub<&LinComb> for &LinComb {
    type Output = LinComb;
    fn sub(self, rhs: &LinComb) -> LinComb {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Q::one());
        out
    }
}

impl Neg for &LinComb {
    type Output = LinComb;
    fn neg(self) -> LinComb {
        self.scaled(&-Q::one())
    }
}

/// One exported term: hex key and `p/q` coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub key: String,
    pub coeff: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_terms() {
        let k = canonicalize(&Diagram::segment(2, 1, 2)).unwrap().key;
        let mut c = LinComb::single(k.clone(), q(2));
        c.add_term(k.clone(), q(-2));
        assert!(c.is_zero());
        c.add_term(k, Q::zero());
        assert!(c.is_zero());
    }

    #[test]
    fn signs_applied() {
        let mut c = LinComb::new();
        c.add_diagram(&Diagram::tripod(3, 1, 2, 3), &q(1)).unwrap();
        c.add_diagram(&Diagram::tripod(3, 1, 3, 2), &q(1)).unwrap();
        assert!(c.is_zero());
        c.add_diagram(&Diagram::tripod(2, 1, 1, 2), &q(5)).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn homotopy_drops_boring() {
        let mut c = LinComb::new();
        c.add_homotopy(&Diagram::tripod(3, 2, 2, 3), &q(1)).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn terms_round_trip() {
        let mut c = LinComb::new();
        c.add_diagram(&Diagram::segment(3, 1, 2), &q_frac(-3, 4)).unwrap();
        c.add_diagram(&Diagram::tripod(3, 1, 2, 3), &q(7)).unwrap();
        let t = c.to_terms();
        assert!(t.iter().any(|t| t.coeff == "-3/4"));
        assert_eq!(LinComb::from_terms(&t).unwrap(), c);
    }
}
