//! Finite bases: homotopy forests, bounded homotopy diagrams, chord diagrams.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bounded::BoundedDiagram;
use crate::chord::enum_chord;
use crate::diagram::canon::next_permutation;
use crate::diagram::{canonicalize, Color, Diagram, DiagramBuilder, Key};

/// An enumerable family at a fixed degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SpaceId {
    KnotChord { d: usize },
    BoundedHomotopy { k: u8, d: usize },
    UniTriHomotopy { k: u8, d: usize },
}

impl SpaceId {
    pub fn basis(&self) -> Vec<Key> {
        match *self {
            SpaceId::KnotChord { d } => enum_chord(d).iter().map(|c| c.key()).collect(),
            SpaceId::BoundedHomotopy { k, d } => enum_bounded(k, d),
            SpaceId::UniTriHomotopy { k, d } => enum_forests(k, d),
        }
    }
}

/// A rooted binary tree with colored leaves; node `[a, b]` is a bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    Leaf(u8),
    Node(Box<Shape>, Box<Shape>),
}

/// All rooted binary trees with leaf set `colors`, by splitting the set into
/// an unordered pair of blocks (the block holding the least color first).
pub fn rooted_shapes(colors: &[u8]) -> Vec<Shape> {
    match colors {
        [] => Vec::new(),
        [c] => vec![Shape::Leaf(*c)],
        _ => {
            let n = colors.len();
            let mut out = Vec::new();
            // bit 0 (least color) always goes left
            for mask in (1u32..(1 << n) - 1).filter(|m| m & 1 == 1) {
                let (left, right): (Vec<u8>, Vec<u8>) = {
                    let mut l = Vec::new();
                    let mut r = Vec::new();
                    for (i, &c) in colors.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            l.push(c);
                        } else {
                            r.push(c);
                        }
                    }
                    (l, r)
                };
                for a in rooted_shapes(&left) {
                    for b in rooted_shapes(&right) {
                        out.push(Shape::Node(Box::new(a.clone()), Box::new(b)));
                    }
                }
            }
            out
        }
    }
}

/// The unrooted tree obtained by hanging `shape` from a leg colored `root`.
/// Bracket vertices are oriented (parent, left, right).
pub fn tree_from_shape(k: u8, root: u8, shape: &Shape) -> Diagram {
    fn grow(b: &mut DiagramBuilder, parent: usize, s: &Shape) {
        match s {
            Shape::Leaf(c) => {
                let l = b.leaf(*c);
                b.connect(parent, l);
            }
            Shape::Node(x, y) => {
                let t = b.trivalent();
                b.connect(parent, t);
                grow(b, t, x);
                grow(b, t, y);
            }
        }
    }
    let mut b = DiagramBuilder::new(k);
    let r = b.leaf(root);
    grow(&mut b, r, shape);
    b.build().expect("shape trees are well formed")
}

/// Connected homotopy trees on the color set `colors` (at least two colors):
/// rooted at the largest color, so there are `(2n - 5)!!` of them.
pub fn trees_on(k: u8, colors: &[u8]) -> Vec<Diagram> {
    let (&root, rest) = colors.split_last().expect("nonempty color set");
    rooted_shapes(rest)
        .iter()
        .map(|s| tree_from_shape(k, root, s))
        .collect()
}

/// Every connected non-boring tree over colors `1..=k`, one per class.
pub fn component_types(k: u8) -> Vec<Diagram> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << k) {
        if mask.count_ones() < 2 {
            continue;
        }
        let colors: Vec<u8> = (1..=k).filter(|c| mask >> (c - 1) & 1 == 1).collect();
        out.extend(trees_on(k, &colors));
    }
    out.sort_by_key(|t| canonicalize(t).expect("trees canonicalize").key);
    out
}

/// Non-boring forests of degree `d` over colors `1..=k`, as sorted canonical
/// keys. Every component is a tree with distinct leg colors; IHX is not
/// imposed here.
pub fn enum_forests(k: u8, d: usize) -> Vec<Key> {
    let types = component_types(k);
    let mut out = BTreeSet::new();
    let mut stack = Vec::new();
    forests_rec(&types, 0, d, &mut stack, &mut |parts| {
        let mut forest = Diagram::empty(k);
        for t in parts {
            forest = forest.disjoint_union(t).expect("same k");
        }
        let sk = canonicalize(&forest).expect("forests canonicalize");
        debug_assert_eq!(sk.sign.abs(), 1);
        out.insert(sk.key);
    });
    out.into_iter().collect()
}

fn forests_rec<'a>(
    types: &'a [Diagram],
    from: usize,
    remaining: usize,
    stack: &mut Vec<&'a Diagram>,
    visit: &mut impl FnMut(&[&'a Diagram]),
) {
    if remaining == 0 {
        visit(stack);
        return;
    }
    for i in from..types.len() {
        let deg = types[i].degree();
        if deg <= remaining {
            stack.push(&types[i]);
            forests_rec(types, i, remaining - deg, stack, visit);
            stack.pop();
        }
    }
}

/// Every ordering of the legs of `d` on their segments.
pub fn attachments(d: &Diagram) -> Vec<BoundedDiagram> {
    let k = d.k();
    let groups: Vec<Vec<usize>> = (1..=k).map(|c| d.legs_of_color(Color::new(c))).collect();
    let mut out = Vec::new();
    let mut current: Vec<Vec<usize>> = Vec::with_capacity(groups.len());
    attach_rec(d, &groups, &mut current, &mut out);
    out
}

fn attach_rec(
    d: &Diagram,
    groups: &[Vec<usize>],
    current: &mut Vec<Vec<usize>>,
    out: &mut Vec<BoundedDiagram>,
) {
    let i = current.len();
    if i == groups.len() {
        out.push(BoundedDiagram::attach(d, current).expect("legs placed once"));
        return;
    }
    let mut perm: Vec<usize> = (0..groups[i].len()).collect();
    loop {
        current.push(perm.iter().map(|&p| groups[i][p]).collect());
        attach_rec(d, groups, current, out);
        current.pop();
        if !next_permutation(&mut perm) {
            break;
        }
    }
}

/// Non-boring bounded diagrams of degree `d` on `k` segments, as sorted keys.
pub fn enum_bounded(k: u8, d: usize) -> Vec<Key> {
    let mut out = BTreeSet::new();
    for key in enum_forests(k, d) {
        let forest = Diagram::from_key(&key).expect("forest keys decode");
        for b in attachments(&forest) {
            let sk = b.canonicalize().expect("bounded diagrams canonicalize");
            debug_assert!(sk.sign != 0);
            out.insert(sk.key);
        }
    }
    out.into_iter().collect()
}
