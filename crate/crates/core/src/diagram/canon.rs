//! Canonical keys with antisymmetry signs.
//!
//! Every connected component is labeled by individualization-refinement
//! (initial cells by leg color and valence). The lexicographically least
//! certificate over all leaves of the search tree is the component's key.
//! Modulo antisymmetry a trivalent vertex carries only a sign, so the key is
//! the canonical form of the underlying colored multigraph while the sign
//! records how the input orientation compares with the reference orientation
//! of the canonical representative (slot order `0, 1, 2` at each vertex).
//!
//! The sign is collected over every isomorphism onto the canonical form, so
//! an orientation-reversing automorphism shows up as both signs, giving 0.

use std::fmt;

use super::{Color, Diagram, DiagramBuilder, DiagramError, Vertex, MAX_COMPONENT_VERTICES};

const TAG_DIAGRAM: u8 = b'D';

/// Canonical byte string of an isomorphism class. Rendered as lowercase hex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key(Vec<u8>);

impl Key {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        Key(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self, DiagramError> {
        hex::decode(s)
            .map(Key)
            .map_err(|e| DiagramError::BadKey(e.to_string()))
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Key({})", self.to_hex())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedKey {
    pub key: Key,
    /// `+1`, `-1`, or `0` for a diagram killed by antisymmetry.
    pub sign: i8,
}

impl SignedKey {
    pub fn is_null(&self) -> bool {
        self.sign == 0
    }
}

/// Canonical key and antisymmetry sign of `d`.
pub fn canonicalize(d: &Diagram) -> Result<SignedKey, DiagramError> {
    let mut parts = Vec::new();
    let mut sign = 1i8;
    for comp in d.components() {
        let (cert, s) = canonical_component(d, &comp)?;
        sign *= s;
        parts.push(cert);
    }
    parts.sort();
    let mut bytes = vec![TAG_DIAGRAM, d.k(), parts.len() as u8];
    if parts.len() > u8::MAX as usize {
        return Err(DiagramError::TooLarge(parts.len()));
    }
    for p in parts {
        bytes.extend(p);
    }
    Ok(SignedKey {
        key: Key(bytes),
        sign,
    })
}

/// Local view of one component: vertex `i` of the component is `verts[i]`.
struct Component<'a> {
    d: &'a Diagram,
    verts: &'a [usize],
    local: Vec<usize>,
    label: Vec<u8>,
    nbrs: Vec<Vec<usize>>,
}

impl<'a> Component<'a> {
    fn new(d: &'a Diagram, verts: &'a [usize]) -> Self {
        let mut local = vec![usize::MAX; d.num_vertices()];
        for (i, &v) in verts.iter().enumerate() {
            local[v] = i;
        }
        let label = verts
            .iter()
            .map(|&v| d.vertex(v).color().map_or(0, Color::get))
            .collect();
        let nbrs = verts
            .iter()
            .map(|&v| {
                d.vertex(v)
                    .halves()
                    .iter()
                    .map(|&h| local[d.across(h)])
                    .collect()
            })
            .collect();
        Component {
            d,
            verts,
            local,
            label,
            nbrs,
        }
    }

    fn n(&self) -> usize {
        self.verts.len()
    }

    fn initial_colors(&self) -> Vec<u32> {
        let sig: Vec<(usize, u8)> = (0..self.n())
            .map(|i| (self.nbrs[i].len(), self.label[i]))
            .collect();
        rank_by(&sig)
    }

    /// Refine to the coarsest equitable partition below `colors`.
    fn refine(&self, colors: &mut Vec<u32>) {
        let mut cells = count_cells(colors);
        loop {
            let sig: Vec<(u32, Vec<u32>)> = (0..self.n())
                .map(|i| {
                    let mut around: Vec<u32> = self.nbrs[i].iter().map(|&j| colors[j]).collect();
                    around.sort_unstable();
                    (colors[i], around)
                })
                .collect();
            let next = rank_by(&sig);
            let next_cells = count_cells(&next);
            *colors = next;
            if next_cells == cells {
                break;
            }
            cells = next_cells;
        }
    }

    fn certificate(&self, colors: &[u32]) -> Vec<u8> {
        let n = self.n();
        let mut inv = vec![0usize; n];
        for (i, &c) in colors.iter().enumerate() {
            inv[c as usize] = i;
        }
        let mut edges = Vec::new();
        for i in 0..n {
            let v = self.verts[i];
            for &h in self.d.vertex(v).halves() {
                let p = self.d.partner(h);
                if h < p {
                    let j = self.local[self.d.owner(p)];
                    let (a, b) = (colors[i] as u8, colors[j] as u8);
                    edges.push((a.min(b), a.max(b)));
                }
            }
        }
        edges.sort_unstable();
        let mut out = Vec::with_capacity(2 + n + 2 * edges.len());
        out.push(n as u8);
        out.extend(inv.iter().map(|&i| self.label[i]));
        out.push(edges.len() as u8);
        for (a, b) in edges {
            out.push(a);
            out.push(b);
        }
        out
    }

    fn search(&self, mut colors: Vec<u32>, best: &mut Option<(Vec<u8>, Vec<Vec<u32>>)>) {
        self.refine(&mut colors);
        let n = self.n();
        if count_cells(&colors) == n {
            let cert = self.certificate(&colors);
            match best {
                Some((b, labelings)) if *b == cert => labelings.push(colors),
                Some((b, _)) if *b < cert => {}
                _ => *best = Some((cert, vec![colors])),
            }
            return;
        }
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let target = sizes.iter().position(|&s| s > 1).expect("non-discrete") as u32;
        for v in 0..n {
            if colors[v] != target {
                continue;
            }
            let split: Vec<u32> = colors
                .iter()
                .enumerate()
                .map(|(w, &c)| if c > target || (c == target && w != v) { c + 1 } else { c })
                .collect();
            self.search(split, best);
        }
    }
}

fn rank_by<T: Ord + Clone>(sig: &[T]) -> Vec<u32> {
    let mut uniq: Vec<T> = sig.to_vec();
    uniq.sort();
    uniq.dedup();
    sig.iter()
        .map(|s| uniq.binary_search(s).expect("present") as u32)
        .collect()
}

fn count_cells(colors: &[u32]) -> usize {
    colors.iter().map(|&c| c as usize + 1).max().unwrap_or(0)
}

/// Slot layout of the canonical representative built from a certificate:
/// `slots[i]` lists the neighbor label behind each half-edge of vertex `i`.
fn canonical_slots(n: usize, edges: &[(u8, u8)]) -> Vec<Vec<usize>> {
    let mut slots = vec![Vec::new(); n];
    for &(a, b) in edges {
        slots[a as usize].push(b as usize);
        slots[b as usize].push(a as usize);
    }
    slots
}

fn canonical_component(d: &Diagram, verts: &[usize]) -> Result<(Vec<u8>, i8), DiagramError> {
    if verts.len() > MAX_COMPONENT_VERTICES {
        return Err(DiagramError::TooLarge(verts.len()));
    }
    let comp = Component::new(d, verts);
    let mut best = None;
    comp.search(comp.initial_colors(), &mut best);
    let (cert, labelings) = best.expect("at least one leaf");
    let n = comp.n();
    let m = cert[n + 1] as usize;
    let edges: Vec<(u8, u8)> = (0..m)
        .map(|e| (cert[n + 2 + 2 * e], cert[n + 3 + 2 * e]))
        .collect();
    let slots = canonical_slots(n, &edges);

    let mut seen_pos = false;
    let mut seen_neg = false;
    for lab in &labelings {
        let lab: Vec<usize> = lab.iter().map(|&c| c as usize).collect();
        collect_signs(&comp, &lab, &slots, &mut seen_pos, &mut seen_neg);
        if seen_pos && seen_neg {
            return Ok((cert, 0));
        }
    }
    Ok((cert, if seen_neg { -1 } else { 1 }))
}

/// Bundle of input edges joining one pair of vertices (or loops at one
/// vertex) that may map to the canonical edges of that bundle in any order.
struct Bundle {
    /// Input half-edge pairs `(at lower-labeled end, at other end)`.
    edges: Vec<(usize, usize)>,
    /// Canonical slot pairs, in the same orientation.
    targets: Vec<(usize, usize)>,
    is_loop: bool,
}

fn collect_signs(
    comp: &Component<'_>,
    lab: &[usize],
    slots: &[Vec<usize>],
    seen_pos: &mut bool,
    seen_neg: &mut bool,
) {
    let d = comp.d;
    let n = comp.n();
    let mut bundles: std::collections::BTreeMap<(usize, usize), Bundle> = Default::default();
    for i in 0..n {
        let v = comp.verts[i];
        for &h in d.vertex(v).halves() {
            let p = d.partner(h);
            if h > p {
                continue;
            }
            let j = comp.local[d.owner(p)];
            let (li, lj) = (lab[i], lab[j]);
            let (key, pair) = if li <= lj { ((li, lj), (h, p)) } else { ((lj, li), (p, h)) };
            bundles
                .entry(key)
                .or_insert_with(|| Bundle {
                    edges: Vec::new(),
                    targets: Vec::new(),
                    is_loop: li == lj,
                })
                .edges
                .push(pair);
        }
    }
    for (&(a, b), bundle) in bundles.iter_mut() {
        let at_a: Vec<usize> = (0..slots[a].len()).filter(|&s| slots[a][s] == b).collect();
        if a == b {
            bundle.targets = at_a.chunks(2).map(|c| (c[0], c[1])).collect();
        } else {
            let at_b: Vec<usize> = (0..slots[b].len()).filter(|&s| slots[b][s] == a).collect();
            bundle.targets = at_a.into_iter().zip(at_b).collect();
        }
    }
    let bundles: Vec<Bundle> = bundles.into_values().collect();
    let mut slot_of = vec![usize::MAX; d.num_halves()];
    assign(comp, &bundles, 0, &mut slot_of, seen_pos, seen_neg);
}

fn assign(
    comp: &Component<'_>,
    bundles: &[Bundle],
    idx: usize,
    slot_of: &mut Vec<usize>,
    seen_pos: &mut bool,
    seen_neg: &mut bool,
) {
    if *seen_pos && *seen_neg {
        return;
    }
    if idx == bundles.len() {
        if orientation_sign(comp, slot_of) > 0 {
            *seen_pos = true;
        } else {
            *seen_neg = true;
        }
        return;
    }
    let bundle = &bundles[idx];
    let m = bundle.edges.len();
    let mut perm: Vec<usize> = (0..m).collect();
    let flips = if bundle.is_loop { 1usize << m } else { 1 };
    loop {
        for mask in 0..flips {
            for (e, &(h1, h2)) in bundle.edges.iter().enumerate() {
                let (s1, s2) = bundle.targets[perm[e]];
                if mask >> e & 1 == 1 {
                    slot_of[h1] = s2;
                    slot_of[h2] = s1;
                } else {
                    slot_of[h1] = s1;
                    slot_of[h2] = s2;
                }
            }
            assign(comp, bundles, idx + 1, slot_of, seen_pos, seen_neg);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
}

fn orientation_sign(comp: &Component<'_>, slot_of: &[usize]) -> i8 {
    let mut sign = 1i8;
    for &v in comp.verts {
        if let Vertex::Tri { halves } = comp.d.vertex(v) {
            let s = halves.map(|h| slot_of[h]);
            if !is_cyclic_rotation(s) {
                sign = -sign;
            }
        }
    }
    sign
}

/// True when `s` is a cyclic rotation of `(0, 1, 2)`.
fn is_cyclic_rotation(s: [usize; 3]) -> bool {
    matches!(s, [0, 1, 2] | [1, 2, 0] | [2, 0, 1])
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

impl Diagram {
    /// The canonical representative named by `key`; it canonicalizes back to
    /// `key` with sign `+1` unless the class is killed by antisymmetry.
    pub fn from_key(key: &Key) -> Result<Diagram, DiagramError> {
        let b = key.as_bytes();
        let bad = |what: &str| DiagramError::BadKey(what.to_string());
        if b.len() < 3 || b[0] != TAG_DIAGRAM {
            return Err(bad("not a diagram key"));
        }
        let k = b[1];
        let ncomp = b[2] as usize;
        let mut pos = 3;
        let mut bld = DiagramBuilder::new(k);
        for _ in 0..ncomp {
            let n = *b.get(pos).ok_or_else(|| bad("truncated"))? as usize;
            pos += 1;
            let labels = b.get(pos..pos + n).ok_or_else(|| bad("truncated"))?;
            pos += n;
            let base: Vec<usize> = labels
                .iter()
                .map(|&l| if l == 0 { bld.trivalent() } else { bld.leaf(l) })
                .collect();
            let m = *b.get(pos).ok_or_else(|| bad("truncated"))? as usize;
            pos += 1;
            let raw = b.get(pos..pos + 2 * m).ok_or_else(|| bad("truncated"))?;
            pos += 2 * m;
            for e in raw.chunks(2) {
                let (x, y) = (e[0] as usize, e[1] as usize);
                if x >= n || y >= n {
                    return Err(bad("edge endpoint out of range"));
                }
                bld.connect(base[x], base[y]);
            }
        }
        if pos != b.len() {
            return Err(bad("trailing bytes"));
        }
        bld.build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::DiagramBuilder;

    #[test]
    fn segment_key() {
        let s = canonicalize(&Diagram::segment(2, 1, 2)).unwrap();
        assert_eq!(s.sign, 1);
        let t = canonicalize(&Diagram::segment(2, 2, 1)).unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn tripod_orientations() {
        let a = canonicalize(&Diagram::tripod(3, 1, 2, 3)).unwrap();
        let b = canonicalize(&Diagram::tripod(3, 1, 3, 2)).unwrap();
        assert_eq!(a.key, b.key);
        assert_eq!(a.sign, 1);
        assert_eq!(b.sign, -1);
        let c = canonicalize(&Diagram::tripod(3, 2, 3, 1)).unwrap();
        assert_eq!(c.sign, 1);
    }

    #[test]
    fn caterpillar_under_all_relabelings() {
        let d = Diagram::caterpillar(4, 1, 2, 3, 4);
        let reference = canonicalize(&d).unwrap();
        let mut perm: Vec<usize> = (0..d.num_vertices()).collect();
        let mut count = 0;
        loop {
            assert_eq!(canonicalize(&d.renumbered(&perm)).unwrap(), reference);
            count += 1;
            if !next_permutation(&mut perm) {
                break;
            }
        }
        assert_eq!(count, 720);
    }

    #[test]
    fn repeated_colors_are_as_null() {
        // legs 1,1,2: swapping the two 1-legs reverses the vertex
        let t = canonicalize(&Diagram::tripod(2, 1, 1, 2)).unwrap();
        assert_eq!(t.sign, 0);
    }

    #[test]
    fn self_loop_is_as_null() {
        let mut b = DiagramBuilder::new(1);
        let t = b.trivalent();
        let l = b.leaf(1);
        b.connect(t, l);
        b.connect(t, t);
        let d = b.build().unwrap();
        assert_eq!(canonicalize(&d).unwrap().sign, 0);
    }

    #[test]
    fn bubble_is_not_as_null() {
        // swapping the parallel edges reverses both vertices
        let mut b = DiagramBuilder::new(2);
        let s = b.trivalent();
        let t = b.trivalent();
        let l1 = b.leaf(1);
        let l2 = b.leaf(2);
        b.connect(s, l1);
        b.connect(s, t);
        b.connect(s, t);
        b.connect(t, l2);
        let d = b.build().unwrap();
        let sk = canonicalize(&d).unwrap();
        assert_ne!(sk.sign, 0);
        let back = Diagram::from_key(&sk.key).unwrap();
        assert_eq!(canonicalize(&back).unwrap(), SignedKey { key: sk.key.clone(), sign: 1 });
        let flipped = d.reoriented(0, [1, 0, 2]);
        assert_eq!(canonicalize(&flipped).unwrap().sign, -sk.sign);
    }

    #[test]
    fn from_key_round_trip() {
        let d = Diagram::caterpillar(4, 1, 2, 3, 4)
            .disjoint_union(&Diagram::segment(4, 1, 2))
            .unwrap();
        let sk = canonicalize(&d).unwrap();
        let rep = Diagram::from_key(&sk.key).unwrap();
        assert_eq!(canonicalize(&rep).unwrap(), SignedKey { key: sk.key, sign: 1 });
    }

    #[test]
    fn hex_round_trip() {
        let sk = canonicalize(&Diagram::segment(2, 1, 2)).unwrap();
        let hex = sk.key.to_hex();
        assert_eq!(hex, hex.to_lowercase());
        assert_eq!(Key::from_hex(&hex).unwrap(), sk.key);
    }

    #[test]
    fn empty_diagram() {
        let sk = canonicalize(&Diagram::empty(3)).unwrap();
        assert_eq!(sk.sign, 1);
        assert!(Diagram::from_key(&sk.key).unwrap().is_empty());
    }
}
