//! Products and coproducts.
//!
//! On forests the product is disjoint union and the coproduct splits the set
//! of components. On chord diagrams the product is connect sum, computed on
//! based (long) diagrams where it is plain concatenation, and the coproduct
//! splits the set of chords.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chord::{enum_chord, ChordDiagram, LongChordDiagram};
use crate::diagram::{canonicalize, Diagram, DiagramError, Key};
use crate::lincomb::{format_q, LinComb, Q};
use crate::qlinalg::Echelon;
use crate::relators::four_t_relators;

/// One exported term `coeff * left ⊗ right`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorTerm {
    pub left: String,
    pub right: String,
    pub coeff: String,
}

/// Finite sums of `left ⊗ right` over canonical keys.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tensor {
    terms: BTreeMap<(Key, Key), Q>,
}

impl Tensor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, left: Key, right: Key, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        let e = self.terms.entry((left, right)).or_insert_with(Q::zero);
        *e += coeff;
        if e.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Key, Key), &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, left: &Key, right: &Key) -> Q {
        self.terms
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn to_terms(&self) -> Vec<TensorTerm> {
        self.terms
            .iter()
            .map(|((l, r), c)| TensorTerm {
                left: l.to_hex(),
                right: r.to_hex(),
                coeff: format_q(c),
            })
            .collect()
    }

    /// `(a ⊗ b)(c ⊗ d) = ac ⊗ bd` for a product on keys.
    pub fn mul(&self, other: &Tensor, product: &impl Fn(&Key, &Key) -> LinComb) -> Tensor {
        let mut out = Tensor::new();
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &other.terms {
                let xy = x * y;
                let left = product(a, c);
                let right = product(b, d);
                for (l, lc) in left.iter() {
                    for (r, rc) in right.iter() {
                        out.add(l.clone(), r.clone(), &xy * lc * rc);
                    }
                }
            }
        }
        out
    }
}

/// Sums of `a ⊗ b ⊗ c`, for coassociativity.
pub type Triple = BTreeMap<(Key, Key, Key), Q>;

fn add_triple(t: &mut Triple, k: (Key, Key, Key), c: Q) {
    let e = t.entry(k).or_insert_with(Q::zero);
    *e += c;
}

/// `(Δ ⊗ id)Δ` and `(id ⊗ Δ)Δ` for a coproduct on keys.
pub fn coassociativity_sides(key: &Key, delta: &impl Fn(&Key) -> Tensor) -> (Triple, Triple) {
    let first = delta(key);
    let mut left = Triple::new();
    let mut right = Triple::new();
    for ((a, b), c) in first.iter() {
        for ((a1, a2), c1) in delta(a).iter() {
            add_triple(&mut left, (a1.clone(), a2.clone(), b.clone()), c * c1);
        }
        for ((b1, b2), c2) in delta(b).iter() {
            add_triple(&mut right, (a.clone(), b1.clone(), b2.clone()), c * c2);
        }
    }
    left.retain(|_, c| !c.is_zero());
    right.retain(|_, c| !c.is_zero());
    (left, right)
}

/// Counit law: the part of `Δ(x)` with a degree-zero factor is exactly
/// `x ⊗ 1 + 1 ⊗ x` (just `1 ⊗ 1` when `x` is the unit).
pub fn counit_holds(key: &Key, delta: &Tensor, degree: &impl Fn(&Key) -> usize) -> bool {
    let mut left_unit = LinComb::new();
    let mut right_unit = LinComb::new();
    for ((a, b), c) in delta.iter() {
        if degree(a) == 0 {
            left_unit.add_term(b.clone(), c.clone());
        }
        if degree(b) == 0 {
            right_unit.add_term(a.clone(), c.clone());
        }
    }
    let expect = LinComb::single(key.clone(), Q::one());
    left_unit == expect && right_unit == expect
}

// ---- forests ----

pub fn forest_unit(k: u8) -> Key {
    canonicalize(&Diagram::empty(k)).expect("empty diagram").key
}

pub fn forest_product(d1: &Diagram, d2: &Diagram) -> Result<LinComb, DiagramError> {
    let mut out = LinComb::new();
    out.add_diagram(&d1.disjoint_union(d2)?, &Q::one())?;
    Ok(out)
}

pub fn forest_product_keys(a: &Key, b: &Key) -> LinComb {
    let da = Diagram::from_key(a).expect("forest key");
    let db = Diagram::from_key(b).expect("forest key");
    forest_product(&da, &db).expect("same k")
}

/// Sum over subsets `S` of components of `S ⊗ complement`.
pub fn forest_coproduct(d: &Diagram) -> Tensor {
    let n = d.components().len();
    assert!(n < 32, "too many components to split");
    let mut out = Tensor::new();
    for mask in 0u32..(1 << n) {
        let (left, right): (Vec<usize>, Vec<usize>) = (0..n).partition(|&c| mask >> c & 1 == 1);
        let l = canonicalize(&d.restrict_to_components(&left)).expect("canonical");
        let r = canonicalize(&d.restrict_to_components(&right)).expect("canonical");
        out.add(l.key, r.key, Q::from_integer((l.sign * r.sign).into()));
    }
    out
}

pub fn forest_coproduct_key(k: &Key) -> Tensor {
    forest_coproduct(&Diagram::from_key(k).expect("forest key"))
}

pub fn forest_degree(k: &Key) -> usize {
    Diagram::from_key(k).expect("forest key").degree()
}

/// `Δ(d) = d ⊗ 1 + 1 ⊗ d`, checked from the coproduct itself.
pub fn is_primitive(d: &Diagram) -> bool {
    let sk = canonicalize(d).expect("canonical");
    if sk.sign == 0 || d.is_empty() {
        return false;
    }
    let unit = forest_unit(d.k());
    let mut expect = Tensor::new();
    let s = Q::from_integer(sk.sign.into());
    expect.add(sk.key.clone(), unit.clone(), s.clone());
    expect.add(unit, sk.key, s);
    forest_coproduct(d) == expect
}

pub fn forest_compatible(d1: &Diagram, d2: &Diagram) -> bool {
    let lhs = {
        let p = forest_product(d1, d2).expect("same k");
        let mut t = Tensor::new();
        for (key, c) in p.iter() {
            for ((a, b), x) in forest_coproduct_key(key).iter() {
                t.add(a.clone(), b.clone(), c * x);
            }
        }
        t
    };
    let rhs = forest_coproduct(d1).mul(&forest_coproduct(d2), &forest_product_keys);
    lhs == rhs
}

// ---- chord diagrams ----

pub fn long_unit() -> Key {
    LongChordDiagram::empty().key()
}

pub fn long_product_keys(a: &Key, b: &Key) -> LinComb {
    let x = LongChordDiagram::from_key(a).expect("long key");
    let y = LongChordDiagram::from_key(b).expect("long key");
    LinComb::single(x.concat(&y).key(), Q::one())
}

/// Sum over chord subsets `J` of `D_J ⊗ D_{complement}`.
pub fn long_coproduct(d: &LongChordDiagram) -> Tensor {
    let n = d.degree();
    assert!(n < 32, "too many chords to split");
    let mut out = Tensor::new();
    for mask in 0u32..(1 << n) {
        let l = d.restrict(|c| mask >> c & 1 == 1);
        let r = d.restrict(|c| mask >> c & 1 == 0);
        out.add(l.key(), r.key(), Q::one());
    }
    out
}

pub fn long_coproduct_key(k: &Key) -> Tensor {
    long_coproduct(&LongChordDiagram::from_key(k).expect("long key"))
}

pub fn long_degree(k: &Key) -> usize {
    LongChordDiagram::from_key(k).expect("long key").degree()
}

pub fn long_compatible(a: &LongChordDiagram, b: &LongChordDiagram) -> bool {
    let lhs = long_coproduct(&a.concat(b));
    let rhs = long_coproduct(a).mul(&long_coproduct(b), &long_product_keys);
    lhs == rhs
}

/// Connect sum of circle diagrams, opening `a` before point `cut_a` and `b`
/// before point `cut_b`.
pub fn connect_sum(a: &ChordDiagram, cut_a: usize, b: &ChordDiagram, cut_b: usize) -> ChordDiagram {
    a.cut_at(cut_a).concat(&b.cut_at(cut_b)).close()
}

/// Connect sum at the first point of each operand.
pub fn chord_product(a: &ChordDiagram, b: &ChordDiagram) -> ChordDiagram {
    connect_sum(a, 0, b, 0)
}

/// Span of the 4T relators (without 1T), one echelon per degree.
#[derive(Debug, Default)]
pub struct FourTSpans {
    spans: BTreeMap<usize, Echelon>,
}

impl FourTSpans {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, d: usize) -> &Echelon {
        self.spans.entry(d).or_insert_with(|| {
            let basis: Vec<Key> = enum_chord(d).iter().map(|c| c.key()).collect();
            Echelon::build(basis, &four_t_relators(d)).expect("4T relators live on the chord basis")
        })
    }
}

/// Whether every choice of cut points gives the same connect sum modulo 4T.
pub fn connect_sum_well_defined(a: &ChordDiagram, b: &ChordDiagram, spans: &mut FourTSpans) -> bool {
    let reference = chord_product(a, b).key();
    let ech = spans.get(a.degree() + b.degree());
    for ca in 0..(2 * a.degree()).max(1) {
        for cb in 0..(2 * b.degree()).max(1) {
            let other = connect_sum(a, ca, b, cb).key();
            let mut diff = LinComb::single(other, Q::one());
            diff.add_term(reference.clone(), -Q::one());
            if !ech.is_member(&diff).expect("keys are in the basis") {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chord::enum_long_chord;
    use crate::enumerate::enum_forests;

    #[test]
    fn forest_basics() {
        let s12 = Diagram::segment(3, 1, 2);
        let s13 = Diagram::segment(3, 1, 3);
        let p = forest_product(&s12, &s13).unwrap();
        assert_eq!(p.len(), 1);
        let two = Diagram::from_key(p.keys().next().unwrap()).unwrap();
        assert_eq!(two.components().len(), 2);
        assert_eq!(forest_coproduct(&Diagram::empty(3)).len(), 1);
        assert_eq!(forest_coproduct(&s12).len(), 2);
        assert_eq!(forest_coproduct(&two).len(), 4);
        assert!(is_primitive(&Diagram::tripod(3, 1, 2, 3)));
        assert!(is_primitive(&s12));
        assert!(!is_primitive(&two));
    }

    #[test]
    fn chord_unit() {
        for c in enum_chord(3) {
            assert_eq!(chord_product(&c, &ChordDiagram::empty()), c);
            assert_eq!(chord_product(&ChordDiagram::empty(), &c), c);
        }
    }

    #[test]
    fn compatibility_small() {
        for a in enum_long_chord(2) {
            for b in enum_long_chord(1) {
                assert!(long_compatible(&a, &b));
            }
        }
        let f = enum_forests(3, 1);
        for a in &f {
            for b in &f {
                assert!(forest_compatible(&Diagram::from_key(a).unwrap(), &Diagram::from_key(b).unwrap()));
            }
        }
    }

    #[test]
    fn coassociative_and_counital() {
        for d in enum_long_chord(3) {
            let k = d.key();
            let (l, r) = coassociativity_sides(&k, &long_coproduct_key);
            assert_eq!(l, r);
            assert!(counit_holds(&k, &long_coproduct(&d), &long_degree));
        }
        for k in enum_forests(4, 3) {
            let (l, r) = coassociativity_sides(&k, &forest_coproduct_key);
            assert_eq!(l, r);
            assert!(counit_holds(&k, &forest_coproduct_key(&k), &forest_degree));
        }
    }

    #[test]
    fn connect_sum_degree_two_one() {
        let mut spans = FourTSpans::new();
        for a in enum_chord(2) {
            for b in enum_chord(1) {
                assert!(connect_sum_well_defined(&a, &b, &mut spans));
            }
        }
    }
}
