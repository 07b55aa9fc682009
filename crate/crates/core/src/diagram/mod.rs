//! Unitrivalent diagrams with colored legs.
//!
//! A [`Diagram`] is stored as a half-edge structure. Every vertex owns one
//! (univalent) or three (trivalent) half-edges, and the order of the three
//! half-edges of a trivalent vertex is its cyclic orientation. Edges are the
//! orbits of the fixed-point-free involution `partner`.
//!
//! Multi-edges and self-loops are representable so that homology and
//! boredom predicates can see them; the enumerators never produce them.

pub(crate) mod canon;
mod doc;

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

pub use canon::{canonicalize, Key, SignedKey};
pub use doc::{DiagramDoc, EdgeDoc, ParseError, VertexDoc, VertexKind};

/// Largest number of vertices in a single connected component that the
/// canonical encoding supports.
pub const MAX_COMPONENT_VERTICES: usize = 160;

/// A link-component color, `1..=k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Color(u8);

impl Color {
    pub fn new(value: u8) -> Self {
        assert!(value >= 1, "colors start at 1");
        Color(value)
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Vertex {
    Uni { color: Color, half: usize },
    /// Half-edges in cyclic order.
    Tri { halves: [usize; 3] },
}

impl Vertex {
    pub fn halves(&self) -> &[usize] {
        match self {
            Vertex::Uni { half, .. } => std::slice::from_ref(half),
            Vertex::Tri { halves } => halves,
        }
    }

    pub fn color(&self) -> Option<Color> {
        match self {
            Vertex::Uni { color, .. } => Some(*color),
            Vertex::Tri { .. } => None,
        }
    }

    pub fn is_univalent(&self) -> bool {
        matches!(self, Vertex::Uni { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("vertex {vertex}: {reason}")]
    Valence { vertex: usize, reason: String },
    #[error("half-edge {half} is not paired with another half-edge")]
    DanglingHalf { half: usize },
    #[error("vertex {vertex}: color {color} out of range 1..={k}")]
    ColorRange { vertex: usize, color: u8, k: u8 },
    #[error("component containing vertex {vertex} has no univalent vertex")]
    NoLeg { vertex: usize },
    #[error("color count mismatch: {0} vs {1}")]
    KMismatch(u8, u8),
    #[error("vertex {0} is not a leg")]
    NotALeg(usize),
    #[error("vertex {0} does not exist")]
    NoSuchVertex(usize),
    #[error("component {0} does not exist")]
    NoSuchComponent(usize),
    #[error("legs {0} and {1} have different colors")]
    ColorMismatch(usize, usize),
    #[error("cannot graft a leg onto itself")]
    SameLeg,
    #[error("colors of a segment count must differ")]
    SameColors,
    #[error("component with {0} vertices exceeds the canonical encoding limit")]
    TooLarge(usize),
    #[error("malformed canonical key: {0}")]
    BadKey(String),
}

/// A unitrivalent diagram over an ambient color count `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    k: u8,
    vertices: Vec<Vertex>,
    owner: Vec<usize>,
    partner: Vec<usize>,
}

impl Diagram {
    /// The diagram with no vertices.
    pub fn empty(k: u8) -> Self {
        Diagram {
            k,
            vertices: Vec::new(),
            owner: Vec::new(),
            partner: Vec::new(),
        }
    }

    pub fn segment(k: u8, a: u8, b: u8) -> Self {
        let mut bld = DiagramBuilder::new(k);
        let x = bld.leaf(a);
        let y = bld.leaf(b);
        bld.connect(x, y);
        bld.build().expect("segment is well formed")
    }

    /// One trivalent vertex with legs `a, b, c` in that cyclic order.
    pub fn tripod(k: u8, a: u8, b: u8, c: u8) -> Self {
        let mut bld = DiagramBuilder::new(k);
        let t = bld.trivalent();
        for color in [a, b, c] {
            let l = bld.leaf(color);
            bld.connect(t, l);
        }
        bld.build().expect("tripod is well formed")
    }

    /// The caterpillar tree `[[a, b], c]` rooted at a leg colored `root`.
    pub fn caterpillar(k: u8, a: u8, b: u8, c: u8, root: u8) -> Self {
        let mut bld = DiagramBuilder::new(k);
        let r = bld.leaf(root);
        let top = bld.trivalent();
        bld.connect(top, r);
        let inner = bld.trivalent();
        bld.connect(top, inner);
        let lc = bld.leaf(c);
        bld.connect(top, lc);
        let la = bld.leaf(a);
        let lb = bld.leaf(b);
        bld.connect(inner, la);
        bld.connect(inner, lb);
        bld.build().expect("caterpillar is well formed")
    }

    pub(crate) fn from_parts(
        k: u8,
        vertices: Vec<Vertex>,
        partner: Vec<usize>,
    ) -> Result<Self, DiagramError> {
        let mut owner = vec![usize::MAX; partner.len()];
        for (v, vert) in vertices.iter().enumerate() {
            for &h in vert.halves() {
                if h >= owner.len() || owner[h] != usize::MAX {
                    return Err(DiagramError::Valence {
                        vertex: v,
                        reason: format!("half-edge {h} is invalid or shared"),
                    });
                }
                owner[h] = v;
            }
            if let Vertex::Uni { color, .. } = vert {
                if color.get() > k {
                    return Err(DiagramError::ColorRange {
                        vertex: v,
                        color: color.get(),
                        k,
                    });
                }
            }
        }
        for (h, &p) in partner.iter().enumerate() {
            if owner[h] == usize::MAX {
                return Err(DiagramError::DanglingHalf { half: h });
            }
            if p >= partner.len() || p == h || partner[p] != h {
                return Err(DiagramError::DanglingHalf { half: h });
            }
        }
        let d = Diagram {
            k,
            vertices,
            owner,
            partner,
        };
        for comp in d.components() {
            if !comp.iter().any(|&v| d.vertices[v].is_univalent()) {
                return Err(DiagramError::NoLeg { vertex: comp[0] });
            }
        }
        Ok(d)
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_halves(&self) -> usize {
        self.partner.len()
    }

    pub fn partner(&self, h: usize) -> usize {
        self.partner[h]
    }

    pub fn owner(&self, h: usize) -> usize {
        self.owner[h]
    }

    /// Vertex at the other end of the edge through half-edge `h`.
    pub fn across(&self, h: usize) -> usize {
        self.owner[self.partner[h]]
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Leg vertices, in vertex order.
    pub fn legs(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(|&v| self.vertices[v].is_univalent())
    }

    pub fn legs_of_color(&self, color: Color) -> Vec<usize> {
        self.legs()
            .filter(|&v| self.vertices[v].color() == Some(color))
            .collect()
    }

    pub fn leg_color(&self, v: usize) -> Option<Color> {
        self.vertices.get(v).and_then(Vertex::color)
    }

    pub fn degree(&self) -> usize {
        self.vertices.len() / 2
    }

    pub fn num_trivalent(&self) -> usize {
        self.vertices.len() - self.legs().count()
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &h in self.vertices[v].halves() {
                    let w = self.across(h);
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Index of the component containing vertex `v`.
    pub fn component_of(&self, v: usize) -> Option<usize> {
        self.components().iter().position(|c| c.binary_search(&v).is_ok())
    }

    /// First Betti number `E - V + 1` of component `component`.
    pub fn first_betti(&self, component: usize) -> Result<usize, DiagramError> {
        let comps = self.components();
        let comp = comps
            .get(component)
            .ok_or(DiagramError::NoSuchComponent(component))?;
        Ok(self.betti_of(comp))
    }

    fn betti_of(&self, comp: &[usize]) -> usize {
        let halves: usize = comp.iter().map(|&v| self.vertices[v].halves().len()).sum();
        halves / 2 + 1 - comp.len()
    }

    /// True when some component has two legs of one color or a cycle.
    pub fn is_boring(&self) -> bool {
        self.components().iter().any(|comp| {
            if self.betti_of(comp) > 0 {
                return true;
            }
            let mut colors: Vec<u8> = comp
                .iter()
                .filter_map(|&v| self.vertices[v].color().map(Color::get))
                .collect();
            let before = colors.len();
            colors.sort_unstable();
            colors.dedup();
            colors.len() != before
        })
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Number of components that are a bare edge with ends colored `i` and `j`.
    pub fn count_segments(&self, i: Color, j: Color) -> Result<usize, DiagramError> {
        if i == j {
            return Err(DiagramError::SameColors);
        }
        let want = (i.min(j), i.max(j));
        Ok(self
            .components()
            .iter()
            .filter(|comp| comp.len() == 2)
            .filter(|comp| {
                match (self.vertices[comp[0]].color(), self.vertices[comp[1]].color()) {
                    (Some(a), Some(b)) => (a.min(b), a.max(b)) == want,
                    _ => false,
                }
            })
            .count())
    }

    /// True when every component is a bare edge.
    pub fn is_segment_forest(&self) -> bool {
        self.vertices.iter().all(Vertex::is_univalent)
    }

    /// Degree of the largest component.
    pub fn max_component_degree(&self) -> usize {
        self.components()
            .iter()
            .map(|c| c.len() / 2)
            .max()
            .unwrap_or(0)
    }

    pub fn disjoint_union(&self, other: &Diagram) -> Result<Diagram, DiagramError> {
        if self.k != other.k {
            return Err(DiagramError::KMismatch(self.k, other.k));
        }
        let voff = self.vertices.len();
        let hoff = self.partner.len();
        let mut vertices = self.vertices.clone();
        vertices.extend(other.vertices.iter().map(|v| match v {
            Vertex::Uni { color, half } => Vertex::Uni {
                color: *color,
                half: half + hoff,
            },
            Vertex::Tri { halves } => Vertex::Tri {
                halves: halves.map(|h| h + hoff),
            },
        }));
        let mut partner = self.partner.clone();
        partner.extend(other.partner.iter().map(|p| p + hoff));
        let mut owner = self.owner.clone();
        owner.extend(other.owner.iter().map(|o| o + voff));
        Ok(Diagram {
            k: self.k,
            vertices,
            owner,
            partner,
        })
    }

    /// Sub-diagram on the listed components (indices into [`Self::components`]).
    pub fn restrict_to_components(&self, which: &[usize]) -> Diagram {
        let comps = self.components();
        let mut keep = vec![false; self.vertices.len()];
        for &c in which {
            for &v in &comps[c] {
                keep[v] = true;
            }
        }
        let mut s = Surgery::new(self);
        for (v, &kept) in keep.iter().enumerate() {
            if !kept {
                s.remove_vertex(v);
            }
        }
        s.finish().expect("whole components restrict cleanly")
    }

    /// Same diagram with colors replaced by `map[color - 1]` under a new `k`.
    pub fn recolored(&self, k: u8, map: impl Fn(usize, Color) -> Color) -> Result<Diagram, DiagramError> {
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .map(|(v, vert)| match vert {
                Vertex::Uni { color, half } => Vertex::Uni {
                    color: map(v, *color),
                    half: *half,
                },
                t => t.clone(),
            })
            .collect();
        Diagram::from_parts(k, vertices, self.partner.clone())
    }

    /// Relabel vertices: vertex `v` becomes vertex `order[v]`.
    pub fn renumbered(&self, order: &[usize]) -> Diagram {
        let n = self.vertices.len();
        assert_eq!(order.len(), n);
        let mut vertices = vec![None; n];
        for (v, vert) in self.vertices.iter().enumerate() {
            vertices[order[v]] = Some(vert.clone());
        }
        let vertices: Vec<Vertex> = vertices.into_iter().map(Option::unwrap).collect();
        Diagram::from_parts(self.k, vertices, self.partner.clone())
            .expect("renumbering preserves validity")
            .compacted()
    }

    /// Reorder the half-edges at trivalent vertex `v` by `perm`.
    pub fn reoriented(&self, v: usize, perm: [usize; 3]) -> Diagram {
        let mut d = self.clone();
        if let Vertex::Tri { halves } = &mut d.vertices[v] {
            let old = *halves;
            *halves = perm.map(|i| old[i]);
        }
        d
    }

    /// Renumber half-edges so that they appear in vertex order.
    fn compacted(self) -> Diagram {
        Surgery::new(&self).finish().expect("compaction preserves validity")
    }

    /// Join the stems of legs `u` and `w` at a new trivalent vertex carrying a
    /// fresh leg of their shared color. The new vertex is oriented
    /// (stem of `u`, stem of `w`, new leg).
    pub fn graft(&self, u: usize, w: usize) -> Result<Diagram, DiagramError> {
        if u == w {
            return Err(DiagramError::SameLeg);
        }
        let cu = self.leg_color_checked(u)?;
        let cw = self.leg_color_checked(w)?;
        if cu != cw {
            return Err(DiagramError::ColorMismatch(u, w));
        }
        let hu = self.vertices[u].halves()[0];
        let hw = self.vertices[w].halves()[0];
        let mut s = Surgery::new(self);
        let (_, th) = s.add_trivalent();
        let (_, lh) = s.add_leaf(cu);
        if self.partner[hu] == hw {
            s.pair(th[0], th[1]);
        } else {
            s.pair(th[0], self.partner[hu]);
            s.pair(th[1], self.partner[hw]);
        }
        s.pair(th[2], lh);
        s.remove_vertex(u);
        s.remove_vertex(w);
        s.finish()
    }

    fn leg_color_checked(&self, v: usize) -> Result<Color, DiagramError> {
        match self.vertices.get(v) {
            None => Err(DiagramError::NoSuchVertex(v)),
            Some(Vertex::Tri { .. }) => Err(DiagramError::NotALeg(v)),
            Some(Vertex::Uni { color, .. }) => Ok(*color),
        }
    }
}

/// Builds diagrams vertex by vertex. `connect` fills the next free
/// half-edge at each end, so the order of `connect` calls at a trivalent
/// vertex fixes its orientation.
#[derive(Debug, Clone)]
pub struct DiagramBuilder {
    k: u8,
    vertices: Vec<Vertex>,
    partner: Vec<usize>,
    next_free: Vec<usize>,
}

impl DiagramBuilder {
    pub fn new(k: u8) -> Self {
        DiagramBuilder {
            k,
            vertices: Vec::new(),
            partner: Vec::new(),
            next_free: Vec::new(),
        }
    }

    pub fn leaf(&mut self, color: u8) -> usize {
        let h = self.partner.len();
        self.partner.push(usize::MAX);
        self.vertices.push(Vertex::Uni {
            color: Color::new(color),
            half: h,
        });
        self.next_free.push(0);
        self.vertices.len() - 1
    }

    pub fn trivalent(&mut self) -> usize {
        let h = self.partner.len();
        self.partner.extend([usize::MAX; 3]);
        self.vertices.push(Vertex::Tri {
            halves: [h, h + 1, h + 2],
        });
        self.next_free.push(0);
        self.vertices.len() - 1
    }

    fn take_half(&mut self, v: usize) -> usize {
        let slot = self.next_free[v];
        let halves = self.vertices[v].halves();
        assert!(slot < halves.len(), "vertex {v} has no free half-edge");
        self.next_free[v] += 1;
        halves[slot]
    }

    pub fn connect(&mut self, a: usize, b: usize) {
        let ha = self.take_half(a);
        let hb = self.take_half(b);
        self.partner[ha] = hb;
        self.partner[hb] = ha;
    }

    pub fn build(self) -> Result<Diagram, DiagramError> {
        for (v, vert) in self.vertices.iter().enumerate() {
            if self.next_free[v] != vert.halves().len() {
                return Err(DiagramError::Valence {
                    vertex: v,
                    reason: format!(
                        "{} of {} half-edges connected",
                        self.next_free[v],
                        vert.halves().len()
                    ),
                });
            }
        }
        Diagram::from_parts(self.k, self.vertices, self.partner)
    }
}

/// In-place editing of a diagram: add vertices, re-pair half-edges, delete
/// vertices, then compact and re-validate.
pub(crate) struct Surgery {
    k: u8,
    vertices: Vec<Option<Vertex>>,
    partner: Vec<usize>,
}

impl Surgery {
    pub(crate) fn new(d: &Diagram) -> Self {
        Surgery {
            k: d.k,
            vertices: d.vertices.iter().cloned().map(Some).collect(),
            partner: d.partner.clone(),
        }
    }

    pub(crate) fn add_leaf(&mut self, color: Color) -> (usize, usize) {
        let h = self.partner.len();
        self.partner.push(usize::MAX);
        self.vertices.push(Some(Vertex::Uni { color, half: h }));
        (self.vertices.len() - 1, h)
    }

    pub(crate) fn add_trivalent(&mut self) -> (usize, [usize; 3]) {
        let h = self.partner.len();
        self.partner.extend([usize::MAX; 3]);
        let halves = [h, h + 1, h + 2];
        self.vertices.push(Some(Vertex::Tri { halves }));
        (self.vertices.len() - 1, halves)
    }

    pub(crate) fn pair(&mut self, a: usize, b: usize) {
        self.partner[a] = b;
        self.partner[b] = a;
    }

    pub(crate) fn remove_vertex(&mut self, v: usize) {
        self.vertices[v] = None;
    }

    /// Drop removed vertices and renumber half-edges in vertex order.
    pub(crate) fn finish(self) -> Result<Diagram, DiagramError> {
        let mut new_half = vec![usize::MAX; self.partner.len()];
        let mut next = 0;
        for vert in self.vertices.iter().flatten() {
            for &h in vert.halves() {
                new_half[h] = next;
                next += 1;
            }
        }
        let mut partner = vec![usize::MAX; next];
        for (h, &nh) in new_half.iter().enumerate() {
            if nh == usize::MAX {
                continue;
            }
            let p = self.partner[h];
            if p == usize::MAX || new_half[p] == usize::MAX {
                return Err(DiagramError::DanglingHalf { half: nh });
            }
            partner[nh] = new_half[p];
        }
        let vertices = self
            .vertices
            .into_iter()
            .flatten()
            .map(|vert| match vert {
                Vertex::Uni { color, half } => Vertex::Uni {
                    color,
                    half: new_half[half],
                },
                Vertex::Tri { halves } => Vertex::Tri {
                    halves: halves.map(|h| new_half[h]),
                },
            })
            .collect();
        Diagram::from_parts(self.k, vertices, partner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bubble() -> Diagram {
        let mut b = DiagramBuilder::new(2);
        let s = b.trivalent();
        let t = b.trivalent();
        let l1 = b.leaf(1);
        let l2 = b.leaf(2);
        b.connect(s, l1);
        b.connect(s, t);
        b.connect(s, t);
        b.connect(t, l2);
        b.build().unwrap()
    }

    fn theta_with_two_legs() -> Diagram {
        let mut b = DiagramBuilder::new(2);
        let pa = b.trivalent();
        let pb = b.trivalent();
        let c = b.trivalent();
        let d = b.trivalent();
        b.connect(pa, pb);
        b.connect(pa, c);
        b.connect(c, pb);
        b.connect(pa, d);
        b.connect(d, pb);
        let l1 = b.leaf(1);
        let l2 = b.leaf(2);
        b.connect(c, l1);
        b.connect(d, l2);
        b.build().unwrap()
    }

    #[test]
    fn degrees() {
        assert_eq!(Diagram::segment(2, 1, 2).degree(), 1);
        assert_eq!(Diagram::tripod(3, 1, 2, 3).degree(), 2);
        assert_eq!(Diagram::caterpillar(4, 1, 2, 3, 4).degree(), 3);
    }

    #[test]
    fn betti_numbers() {
        assert_eq!(Diagram::caterpillar(4, 1, 2, 3, 4).first_betti(0), Ok(0));
        assert_eq!(bubble().first_betti(0), Ok(1));
        assert_eq!(theta_with_two_legs().first_betti(0), Ok(2));
        assert_eq!(
            Diagram::segment(2, 1, 2).first_betti(1),
            Err(DiagramError::NoSuchComponent(1))
        );
    }

    #[test]
    fn boring_predicate() {
        let s = Diagram::segment(2, 1, 2);
        assert!(!s.disjoint_union(&s).unwrap().is_boring());
        assert!(Diagram::tripod(3, 2, 2, 3).is_boring());
        let forest = Diagram::tripod(4, 1, 2, 3)
            .disjoint_union(&Diagram::segment(4, 1, 4))
            .unwrap();
        assert!(!forest.is_boring());
        assert!(bubble().is_boring());
    }

    #[test]
    fn unions() {
        let s = Diagram::segment(3, 1, 2);
        assert_eq!(s.disjoint_union(&Diagram::empty(3)).unwrap(), s);
        let ss = s.disjoint_union(&s).unwrap();
        assert_eq!(ss.count_segments(Color::new(1), Color::new(2)), Ok(2));
        let ts = Diagram::tripod(3, 1, 2, 3).disjoint_union(&s).unwrap();
        assert_eq!(ts.degree(), 3);
        assert_eq!(ts.components().len(), 2);
        assert!(matches!(
            s.disjoint_union(&Diagram::segment(2, 1, 2)),
            Err(DiagramError::KMismatch(3, 2))
        ));
    }

    #[test]
    fn segment_counts() {
        let c = Color::new;
        let t = Diagram::tripod(3, 1, 2, 3);
        assert_eq!(t.count_segments(c(1), c(2)), Ok(0));
        let ts = t.disjoint_union(&Diagram::segment(3, 1, 3)).unwrap();
        assert_eq!(ts.count_segments(c(1), c(3)), Ok(1));
        assert_eq!(ts.count_segments(c(3), c(1)), Ok(1));
        assert_eq!(ts.count_segments(c(2), c(2)), Err(DiagramError::SameColors));
    }

    #[test]
    fn builder_rejects_missing_connections() {
        let mut b = DiagramBuilder::new(2);
        let t = b.trivalent();
        let l = b.leaf(1);
        b.connect(t, l);
        assert!(matches!(b.build(), Err(DiagramError::Valence { vertex: 0, .. })));
    }

    #[test]
    fn closed_component_rejected() {
        // theta graph without legs
        let mut b = DiagramBuilder::new(1);
        let x = b.trivalent();
        let y = b.trivalent();
        for _ in 0..3 {
            b.connect(x, y);
        }
        assert!(matches!(b.build(), Err(DiagramError::NoLeg { .. })));
    }

    #[test]
    fn graft_shapes() {
        let e = Diagram::segment(3, 1, 3)
            .disjoint_union(&Diagram::segment(3, 1, 2))
            .unwrap();
        let g = e.graft(0, 2).unwrap();
        assert_eq!(g.degree(), 2);
        assert!(g.is_connected());
        assert!(!g.is_boring());

        let s = Diagram::segment(2, 1, 2);
        let ss = s.disjoint_union(&s).unwrap();
        let g = ss.graft(0, 2).unwrap();
        assert!(g.is_boring());
        assert_eq!(g.degree(), 2);

        assert_eq!(ss.graft(0, 0), Err(DiagramError::SameLeg));
        assert_eq!(ss.graft(0, 1), Err(DiagramError::ColorMismatch(0, 1)));
        let t = Diagram::tripod(3, 1, 2, 3).disjoint_union(&Diagram::segment(3, 1, 2)).unwrap();
        assert_eq!(t.graft(0, 4), Err(DiagramError::NotALeg(0)));
    }

    #[test]
    fn restrict_components() {
        let d = Diagram::tripod(3, 1, 2, 3)
            .disjoint_union(&Diagram::segment(3, 1, 2))
            .unwrap();
        assert_eq!(d.restrict_to_components(&[1]).degree(), 1);
        assert_eq!(d.restrict_to_components(&[0]).degree(), 2);
        assert!(d.restrict_to_components(&[]).is_empty());
    }
}
