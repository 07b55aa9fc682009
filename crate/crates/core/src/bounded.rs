//! Diagrams whose legs sit on `k` ordered, oriented segments.
//!
//! The leg order on each segment is part of the identity, so a bounded
//! diagram is stored as a unitrivalent graph whose legs are colored by
//! *slot*: slot `offset(i) + p + 1` is position `p` (from the bottom) on
//! segment `i`. Canonicalization then reuses the plain diagram machinery.

use serde::{Deserialize, Serialize};

use crate::diagram::{canonicalize, Color, Diagram, DiagramDoc, DiagramError, Key, ParseError, SignedKey};

const TAG_BOUNDED: u8 = b'A';

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundedDiagram {
    k: u8,
    counts: Vec<u8>,
    graph: Diagram,
}

impl BoundedDiagram {
    /// Attach the legs of `d` to segments: `orders[i]` lists the legs of
    /// color `i + 1` from bottom to top.
    pub fn attach(d: &Diagram, orders: &[Vec<usize>]) -> Result<Self, DiagramError> {
        let k = d.k();
        assert_eq!(orders.len(), k as usize, "one order per segment");
        let counts: Vec<u8> = orders.iter().map(|o| o.len() as u8).collect();
        let mut slot = vec![0u8; d.num_vertices()];
        let mut next = 0u8;
        for (i, order) in orders.iter().enumerate() {
            for &v in order {
                if d.leg_color(v) != Some(Color::new(i as u8 + 1)) {
                    return Err(DiagramError::NotALeg(v));
                }
                next += 1;
                slot[v] = next;
            }
        }
        if (next as usize) != d.legs().count() {
            return Err(DiagramError::Valence {
                vertex: 0,
                reason: "every leg must be placed exactly once".into(),
            });
        }
        let graph = d.recolored(next, |v, _| Color::new(slot[v]))?;
        Ok(BoundedDiagram { k, counts, graph })
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn graph(&self) -> &Diagram {
        &self.graph
    }

    pub fn legs_on(&self, segment: usize) -> usize {
        self.counts[segment] as usize
    }

    pub fn degree(&self) -> usize {
        self.graph.degree()
    }

    fn offset(&self, segment: usize) -> u8 {
        self.counts[..segment].iter().sum()
    }

    fn segment_of_slot(&self, slot: u8) -> usize {
        let mut acc = 0u8;
        for (i, &c) in self.counts.iter().enumerate() {
            acc += c;
            if slot <= acc {
                return i;
            }
        }
        unreachable!("slot {slot} out of range")
    }

    /// Graph vertex of the leg at `position` on `segment`.
    pub fn leg_at(&self, segment: usize, position: usize) -> usize {
        let want = Color::new(self.offset(segment) + position as u8 + 1);
        self.graph
            .legs()
            .find(|&v| self.graph.leg_color(v) == Some(want))
            .expect("every slot is occupied")
    }

    /// Forget the leg order: legs colored by segment.
    pub fn to_colored(&self) -> Diagram {
        self.graph
            .recolored(self.k, |_, c| Color::new(self.segment_of_slot(c.get()) as u8 + 1))
            .expect("segment colors are in range")
    }

    pub fn is_boring(&self) -> bool {
        self.to_colored().is_boring()
    }

    pub fn canonicalize(&self) -> Result<SignedKey, DiagramError> {
        let inner = canonicalize(&self.graph)?;
        let mut bytes = vec![TAG_BOUNDED, self.k];
        bytes.extend(&self.counts);
        bytes.extend(inner.key.as_bytes());
        Ok(SignedKey {
            key: Key::from_bytes(bytes),
            sign: inner.sign,
        })
    }

    pub fn from_key(key: &Key) -> Result<Self, DiagramError> {
        let b = key.as_bytes();
        if b.len() < 2 || b[0] != TAG_BOUNDED || b.len() < 2 + b[1] as usize {
            return Err(DiagramError::BadKey("not a bounded diagram key".into()));
        }
        let k = b[1];
        let counts = b[2..2 + k as usize].to_vec();
        let graph = Diagram::from_key(&Key::from_bytes(b[2 + k as usize..].to_vec()))?;
        let total: u8 = counts.iter().sum();
        if graph.k() != total || graph.legs().count() != total as usize {
            return Err(DiagramError::BadKey("slot count mismatch".into()));
        }
        Ok(BoundedDiagram { k, counts, graph })
    }

    fn relabel_slots(&self, counts: Vec<u8>, map: impl Fn(u8) -> u8) -> BoundedDiagram {
        let total: u8 = counts.iter().sum();
        let graph = self
            .graph
            .recolored(total, |_, c| Color::new(map(c.get())))
            .expect("slot relabeling stays in range");
        BoundedDiagram {
            k: self.k,
            counts,
            graph,
        }
    }

    /// Same leg placement with the graph replaced; the legs must keep their
    /// slot colors.
    pub(crate) fn with_graph(&self, graph: Diagram) -> BoundedDiagram {
        BoundedDiagram {
            graph,
            ..self.clone()
        }
    }

    /// Exchange the legs at `position` and `position + 1` on `segment`.
    pub fn swap_adjacent(&self, segment: usize, position: usize) -> BoundedDiagram {
        assert!(position + 1 < self.legs_on(segment));
        let a = self.offset(segment) + position as u8 + 1;
        self.relabel_slots(self.counts.clone(), |s| {
            if s == a {
                a + 1
            } else if s == a + 1 {
                a
            } else {
                s
            }
        })
    }

    /// Merge the legs at `position` and `position + 1` on `segment` into one
    /// leg feeding a new trivalent vertex oriented (lower stem, upper stem, leg).
    pub fn merge_adjacent(&self, segment: usize, position: usize) -> Result<BoundedDiagram, DiagramError> {
        assert!(position + 1 < self.legs_on(segment));
        let lower = self.leg_at(segment, position);
        let upper = self.leg_at(segment, position + 1);
        let a = self.offset(segment) + position as u8 + 1;
        let mut counts = self.counts.clone();
        counts[segment] -= 1;
        let merged = self.relabel_slots(counts, |s| if s <= a { s } else { s - 1 });
        let graph = merged.graph.graft(lower, upper)?;
        Ok(BoundedDiagram { graph, ..merged })
    }

    /// Move the top leg of `segment` to the bottom.
    pub fn cycle_top_to_bottom(&self, segment: usize) -> BoundedDiagram {
        let n = self.legs_on(segment) as u8;
        if n == 0 {
            return self.clone();
        }
        let lo = self.offset(segment) + 1;
        let hi = lo + n - 1;
        self.relabel_slots(self.counts.clone(), |s| {
            if s == hi {
                lo
            } else if (lo..hi).contains(&s) {
                s + 1
            } else {
                s
            }
        })
    }

    pub fn to_doc(&self) -> BoundedDoc {
        let colored = self.to_colored();
        let segments = (0..self.k as usize)
            .map(|i| (0..self.legs_on(i)).map(|p| self.leg_at(i, p) as i64).collect())
            .collect();
        BoundedDoc {
            k: self.k as i64,
            segments,
            graph: DiagramDoc::from_diagram(&colored),
        }
    }

    pub fn from_doc(doc: &BoundedDoc) -> Result<Self, ParseError> {
        let colored = doc.graph.to_diagram()?;
        let index: std::collections::HashMap<i64, usize> = doc
            .graph
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id, i))
            .collect();
        let orders = doc
            .segments
            .iter()
            .map(|seg| {
                seg.iter()
                    .map(|id| {
                        index.get(id).copied().ok_or_else(|| ParseError {
                            location: format!("segment leg {id}"),
                            message: "no such vertex".into(),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        if orders.len() != colored.k() as usize {
            return Err(ParseError {
                location: "segments".into(),
                message: format!("expected {} segments", colored.k()),
            });
        }
        BoundedDiagram::attach(&colored, &orders).map_err(|e| ParseError {
            location: "segments".into(),
            message: e.to_string(),
        })
    }
}

/// Interchange form: the graph colored by segment plus bottom-to-top leg ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedDoc {
    pub k: i64,
    pub segments: Vec<Vec<i64>>,
    pub graph: DiagramDoc,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_chords(order2: [usize; 2]) -> BoundedDiagram {
        let s = Diagram::segment(2, 1, 2);
        let d = s.disjoint_union(&s).unwrap();
        // legs: 0 (1), 1 (2), 2 (1), 3 (2)
        BoundedDiagram::attach(&d, &[vec![0, 2], vec![order2[0], order2[1]]]).unwrap()
    }

    #[test]
    fn leg_orders_distinguish() {
        let a = two_chords([1, 3]).canonicalize().unwrap();
        let b = two_chords([3, 1]).canonicalize().unwrap();
        assert_ne!(a.key, b.key);
        // swapping segment 1 of one equals the other
        let c = two_chords([1, 3]).swap_adjacent(0, 0).canonicalize().unwrap();
        assert_eq!(c.key, b.key);
    }

    #[test]
    fn key_round_trip() {
        let t = Diagram::tripod(3, 1, 2, 3);
        let b = BoundedDiagram::attach(&t, &[vec![1], vec![2], vec![3]]).unwrap();
        let sk = b.canonicalize().unwrap();
        let back = BoundedDiagram::from_key(&sk.key).unwrap();
        assert_eq!(back.canonicalize().unwrap().key, sk.key);
        assert_eq!(back.canonicalize().unwrap().sign, 1);
    }

    #[test]
    fn merging_parallel_chords_is_boring() {
        let m = two_chords([1, 3]).merge_adjacent(0, 0).unwrap();
        assert_eq!(m.legs_on(0), 1);
        assert_eq!(m.degree(), 2);
        assert!(m.is_boring());
    }

    #[test]
    fn merging_distinct_trees() {
        let d = Diagram::segment(3, 1, 2)
            .disjoint_union(&Diagram::segment(3, 1, 3))
            .unwrap();
        let b = BoundedDiagram::attach(&d, &[vec![0, 2], vec![1], vec![3]]).unwrap();
        let m = b.merge_adjacent(0, 0).unwrap();
        assert!(!m.is_boring());
        assert!(m.graph().is_connected());
    }

    #[test]
    fn cycling() {
        let b = two_chords([1, 3]);
        assert_eq!(
            b.cycle_top_to_bottom(1).canonicalize().unwrap().key,
            two_chords([3, 1]).canonicalize().unwrap().key
        );
    }

    #[test]
    fn doc_round_trip() {
        let b = two_chords([3, 1]);
        let back = BoundedDiagram::from_doc(&b.to_doc()).unwrap();
        assert_eq!(back.canonicalize().unwrap(), b.canonicalize().unwrap());
    }
}
