//! Relation families: the link relation (*) built from grafts, IHX on forests,
//! STU and leg cycling on bounded diagrams, and 1T/4T on chord diagrams.
//! Antisymmetry is implicit in every canonical key.
//!
//! Every relator carries an id from which [`regenerate`] rebuilds it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounded::BoundedDiagram;
use crate::chord::{enum_chord, ChordDiagram};
use crate::diagram::{Diagram, DiagramError, Key, Vertex};
use crate::enumerate::{enum_bounded, enum_forests};
use crate::lincomb::{q, LinComb, TermDoc, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelatorKind {
    Star,
    Ihx,
    Stu,
    Link1,
    #[serde(rename = "4t")]
    FourT,
    #[serde(rename = "1t")]
    OneT,
}

impl RelatorKind {
    pub fn tag(self) -> &'static str {
        match self {
            RelatorKind::Star => "star",
            RelatorKind::Ihx => "ihx",
            RelatorKind::Stu => "stu",
            RelatorKind::Link1 => "link1",
            RelatorKind::FourT => "4t",
            RelatorKind::OneT => "1t",
        }
    }

    fn from_tag(tag: &str) -> Option<Self> {
        Some(match tag {
            "star" => RelatorKind::Star,
            "ihx" => RelatorKind::Ihx,
            "stu" => RelatorKind::Stu,
            "link1" => RelatorKind::Link1,
            "4t" => RelatorKind::FourT,
            "1t" => RelatorKind::OneT,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relator {
    pub id: String,
    pub element: LinComb,
}

impl Relator {
    pub fn kind(&self) -> Option<RelatorKind> {
        RelatorKind::from_tag(self.id.split(':').next()?)
    }

    pub fn to_doc(&self) -> RelatorDoc {
        RelatorDoc {
            id: self.id.clone(),
            terms: self.element.to_terms(),
        }
    }
}

/// Export record for one relator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelatorDoc {
    pub id: String,
    pub terms: Vec<TermDoc>,
}

/// `m(D; i, j)`: components of `d` that are single edges colored `{i, j}`.
pub fn count_segments(d: &Diagram, i: u8, j: u8) -> Result<usize, DiagramError> {
    d.count_segments(crate::diagram::Color::new(i), crate::diagram::Color::new(j))
}

/// See [`Diagram::graft`].
pub fn graft(e: &Diagram, u: usize, w: usize) -> Result<Diagram, DiagramError> {
    e.graft(u, w)
}

/// The link relation at leg `u` of `e`: the sum of `graft(e, u, w)` over
/// every other leg `w` of the same color, boring terms dropped.
pub fn star_element(e: &Diagram, u: usize) -> Result<LinComb, DiagramError> {
    let color = e.leg_color(u).ok_or(DiagramError::NotALeg(u))?;
    let mut out = LinComb::new();
    for w in e.legs_of_color(color) {
        if w != u {
            out.add_homotopy(&e.graft(u, w)?, &q(1))?;
        }
    }
    Ok(out)
}

/// Star relator at leg `u` of the canonical representative of `key`.
pub fn star_relator(key: &Key, u: usize) -> Result<Relator, DiagramError> {
    let e = Diagram::from_key(key)?;
    Ok(Relator {
        id: format!("star:{}:{u}", key.to_hex()),
        element: star_element(&e, u)?,
    })
}

/// Star relators for every basis forest and every leg.
pub fn star_relators(basis: &[Key]) -> Vec<Relator> {
    basis
        .par_iter()
        .flat_map_iter(|key| {
            let e = Diagram::from_key(key).expect("basis keys decode");
            e.legs()
                .map(|u| star_relator(key, u).expect("legs graft"))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// The two other resolutions of the internal edge through half-edge `h`.
///
/// With the far vertex `v` rotated to `(r, s, e)` and the near vertex `u`
/// to `(e, p, q)`, the relation is `I - T1 - T2` where
/// `T1` has `v = (r, e, q)`, `u = (e, s, p)` and
/// `T2` has `v = (r, p, e)`, `u = (e, s, q)`.
/// This is the Jacobi identity `[S, [P, Q]] = [[S, P], Q] + [P, [S, Q]]`.
pub fn ihx_resolutions(d: &Diagram, h: usize) -> Option<(Diagram, Diagram)> {
    let hv = d.partner(h);
    let (u, v) = (d.owner(h), d.owner(hv));
    if u == v {
        return None;
    }
    let (Vertex::Tri { halves: hu }, Vertex::Tri { halves: hvs }) = (d.vertex(u), d.vertex(v)) else {
        return None;
    };
    let [_, p, q] = rotate_to_front(*hu, h);
    // (e, r, s) is the same rotation as (r, s, e)
    let [_, r, s] = rotate_to_front(*hvs, hv);
    let build = |uh: [usize; 3], vh: [usize; 3]| {
        let mut vertices = d.vertices().to_vec();
        vertices[u] = Vertex::Tri { halves: uh };
        vertices[v] = Vertex::Tri { halves: vh };
        let partner = (0..d.num_halves()).map(|x| d.partner(x)).collect();
        Diagram::from_parts(d.k(), vertices, partner).expect("resolutions are valid")
    };
    let t1 = build([h, s, p], [r, hv, q]);
    let t2 = build([h, s, q], [r, p, hv]);
    Some((t1, t2))
}

/// Cyclic rotation of `halves` that starts with `h`, read as `(h, a, b)`.
fn rotate_to_front(halves: [usize; 3], h: usize) -> [usize; 3] {
    let i = halves.iter().position(|&x| x == h).expect("half-edge at vertex");
    [halves[i], halves[(i + 1) % 3], halves[(i + 2) % 3]]
}

/// IHX element at the internal edge through half-edge `h` of `d`.
pub fn ihx_element(d: &Diagram, h: usize) -> Result<Option<LinComb>, DiagramError> {
    let Some((t1, t2)) = ihx_resolutions(d, h) else {
        return Ok(None);
    };
    let mut out = LinComb::new();
    out.add_homotopy(d, &q(1))?;
    out.add_homotopy(&t1, &q(-1))?;
    out.add_homotopy(&t2, &q(-1))?;
    Ok(Some(out))
}

/// Half-edges naming each internal edge once (`h < partner(h)`).
pub fn internal_edges(d: &Diagram) -> Vec<usize> {
    (0..d.num_halves())
        .filter(|&h| {
            let p = d.partner(h);
            h < p && !d.vertex(d.owner(h)).is_univalent() && !d.vertex(d.owner(p)).is_univalent()
        })
        .collect()
}

pub fn ihx_relators(basis: &[Key]) -> Vec<Relator> {
    let per_key = |key: &Key| -> Vec<Relator> {
        if key.as_bytes().first() == Some(&b'A') {
            let b = BoundedDiagram::from_key(key).expect("basis keys decode");
            return internal_edges(b.graph())
                .into_iter()
                .map(|h| Relator {
                    id: format!("ihx:{}:h{h}", key.to_hex()),
                    element: bounded_ihx_element(&b, h).expect("internal edge"),
                })
                .collect();
        }
        let d = Diagram::from_key(key).expect("basis keys decode");
        internal_edges(&d)
            .into_iter()
            .map(|h| Relator {
                id: format!("ihx:{}:h{h}", key.to_hex()),
                element: ihx_element(&d, h).expect("valid").expect("internal edge"),
            })
            .collect()
    };
    basis.par_iter().flat_map_iter(per_key).collect()
}

/// IHX at an internal edge of a bounded diagram; the leg order is untouched.
pub fn bounded_ihx_element(b: &BoundedDiagram, h: usize) -> Option<LinComb> {
    let (t1, t2) = ihx_resolutions(b.graph(), h)?;
    let mut out = LinComb::new();
    add_bounded(&mut out, b, 1);
    add_bounded(&mut out, &b.with_graph(t1), -1);
    add_bounded(&mut out, &b.with_graph(t2), -1);
    Some(out)
}

/// Add `coeff * b` with its antisymmetry sign; boring diagrams vanish.
pub fn add_bounded(out: &mut LinComb, b: &BoundedDiagram, coeff: i64) {
    add_bounded_scaled(out, b, &q(coeff));
}

pub fn add_bounded_scaled(out: &mut LinComb, b: &BoundedDiagram, coeff: &Q) {
    if b.is_boring() {
        return;
    }
    let sk = b.canonicalize().expect("bounded diagrams canonicalize");
    if sk.sign != 0 {
        out.add_term(sk.key, coeff * q(sk.sign as i64));
    }
}

/// STU `S - T + U` at legs `pos`, `pos + 1` of `segment`: `S` merges them,
/// `T` is the diagram, `U` has them exchanged.
pub fn stu_element(b: &BoundedDiagram, segment: usize, pos: usize) -> LinComb {
    let mut out = LinComb::new();
    add_bounded(&mut out, &b.merge_adjacent(segment, pos).expect("same segment legs merge"), 1);
    add_bounded(&mut out, b, -1);
    add_bounded(&mut out, &b.swap_adjacent(segment, pos), 1);
    out
}

pub fn stu_relators_on(basis: &[Key]) -> Vec<Relator> {
    basis
        .par_iter()
        .flat_map_iter(|key| {
            let b = BoundedDiagram::from_key(key).expect("basis keys decode");
            let mut out = Vec::new();
            for seg in 0..b.k() as usize {
                for pos in 0..b.legs_on(seg).saturating_sub(1) {
                    out.push(Relator {
                        id: format!("stu:{}:{seg}:{pos}", key.to_hex()),
                        element: stu_element(&b, seg, pos),
                    });
                }
            }
            out
        })
        .collect()
}

pub fn stu_relators(k: u8, d: usize) -> Vec<Relator> {
    stu_relators_on(&enum_bounded(k, d))
}

/// Closing segment `segment`: the top leg moved to the bottom equals the
/// original.
pub fn link1_element(b: &BoundedDiagram, segment: usize) -> LinComb {
    let mut out = LinComb::new();
    add_bounded(&mut out, &b.cycle_top_to_bottom(segment), 1);
    add_bounded(&mut out, b, -1);
    out
}

pub fn link1_relators_on(basis: &[Key]) -> Vec<Relator> {
    basis
        .par_iter()
        .flat_map_iter(|key| {
            let b = BoundedDiagram::from_key(key).expect("basis keys decode");
            (0..b.k() as usize)
                .filter(|&seg| b.legs_on(seg) > 0)
                .map(|seg| Relator {
                    id: format!("link1:{}:{seg}", key.to_hex()),
                    element: link1_element(&b, seg),
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

pub fn link1_relators(k: u8, d: usize) -> Vec<Relator> {
    link1_relators_on(&enum_bounded(k, d))
}

pub fn one_t_relators(d: usize) -> Vec<Relator> {
    enum_chord(d)
        .into_iter()
        .filter(|c| c.has_isolated_chord())
        .map(|c| Relator {
            id: format!("1t:{}", c.key().to_hex()),
            element: LinComb::single(c.key(), q(1)),
        })
        .collect()
}

/// Move endpoint `x` of its chord next to the ends `P`, `Q` of chord `a`:
/// `D(x before P) - D(x after P) + D(x before Q) - D(x after Q)`.
pub fn four_t_element(c: &ChordDiagram, x: usize, a: usize) -> LinComb {
    let word = c.word();
    let b = word[x];
    assert_ne!(a, b, "the moving end must belong to another chord");
    let mut rest = word.clone();
    rest.remove(x);
    let ends: Vec<usize> = (0..rest.len()).filter(|&i| rest[i] == a).collect();
    let mut out = LinComb::new();
    for &p in &ends {
        for (offset, sign) in [(0, 1), (1, -1)] {
            let mut w = rest.clone();
            w.insert(p + offset, b);
            out.add_term(ChordDiagram::from_word(&w).key(), q(sign));
        }
    }
    out
}

pub fn four_t_relators(d: usize) -> Vec<Relator> {
    enum_chord(d)
        .par_iter()
        .flat_map_iter(|c| {
            let word = c.word();
            let mut out = Vec::new();
            for x in 0..word.len() {
                for a in 0..d {
                    if a != word[x] {
                        out.push(Relator {
                            id: format!("4t:{}:{x}:{a}", c.key().to_hex()),
                            element: four_t_element(c, x, a),
                        });
                    }
                }
            }
            out
        })
        .collect()
}

/// Star and IHX relators over the non-boring forests of degree `d`.
pub fn homotopy_relators(k: u8, d: usize) -> (Vec<Key>, Vec<Relator>) {
    let basis = enum_forests(k, d);
    let mut rels = star_relators(&basis);
    rels.extend(ihx_relators(&basis));
    (basis, rels)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot regenerate relator {id:?}: {reason}")]
pub struct RegenerateError {
    pub id: String,
    pub reason: String,
}

/// Rebuild a relator from its id alone.
pub fn regenerate(id: &str) -> Result<Relator, RegenerateError> {
    let fail = |reason: &str| RegenerateError {
        id: id.to_string(),
        reason: reason.to_string(),
    };
    let parts: Vec<&str> = id.split(':').collect();
    let kind = parts
        .first()
        .and_then(|t| RelatorKind::from_tag(t))
        .ok_or_else(|| fail("unknown kind"))?;
    let key = parts
        .get(1)
        .and_then(|h| Key::from_hex(h).ok())
        .ok_or_else(|| fail("bad key"))?;
    let num = |i: usize| -> Result<usize, RegenerateError> {
        parts
            .get(i)
            .map(|s| s.trim_start_matches('h'))
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| fail("bad site"))
    };
    let expect_len = |n: usize| if parts.len() == n { Ok(()) } else { Err(fail("wrong number of fields")) };
    let element = match kind {
        RelatorKind::Star => {
            expect_len(3)?;
            let e = Diagram::from_key(&key).map_err(|e| fail(&e.to_string()))?;
            star_element(&e, num(2)?).map_err(|e| fail(&e.to_string()))?
        }
        RelatorKind::Ihx => {
            expect_len(3)?;
            let h = num(2)?;
            if key.as_bytes().first() == Some(&b'A') {
                let b = BoundedDiagram::from_key(&key).map_err(|e| fail(&e.to_string()))?;
                if h >= b.graph().num_halves() {
                    return Err(fail("no such half-edge"));
                }
                bounded_ihx_element(&b, h).ok_or_else(|| fail("not an internal edge"))?
            } else {
                let d = Diagram::from_key(&key).map_err(|e| fail(&e.to_string()))?;
                if h >= d.num_halves() {
                    return Err(fail("no such half-edge"));
                }
                ihx_element(&d, h)
                    .map_err(|e| fail(&e.to_string()))?
                    .ok_or_else(|| fail("not an internal edge"))?
            }
        }
        RelatorKind::Stu => {
            expect_len(4)?;
            let b = BoundedDiagram::from_key(&key).map_err(|e| fail(&e.to_string()))?;
            let (seg, pos) = (num(2)?, num(3)?);
            if seg >= b.k() as usize || pos + 1 >= b.legs_on(seg) {
                return Err(fail("no such leg pair"));
            }
            stu_element(&b, seg, pos)
        }
        RelatorKind::Link1 => {
            expect_len(3)?;
            let b = BoundedDiagram::from_key(&key).map_err(|e| fail(&e.to_string()))?;
            let seg = num(2)?;
            if seg >= b.k() as usize || b.legs_on(seg) == 0 {
                return Err(fail("no such segment"));
            }
            link1_element(&b, seg)
        }
        RelatorKind::FourT => {
            expect_len(4)?;
            let c = ChordDiagram::from_key(&key).map_err(|e| fail(&e.to_string()))?;
            let (x, a) = (num(2)?, num(3)?);
            if x >= 2 * c.degree() || a >= c.degree() || c.word()[x] == a {
                return Err(fail("no such site"));
            }
            four_t_element(&c, x, a)
        }
        RelatorKind::OneT => {
            expect_len(2)?;
            let c = ChordDiagram::from_key(&key).map_err(|e| fail(&e.to_string()))?;
            if !c.has_isolated_chord() {
                return Err(fail("no isolated chord"));
            }
            LinComb::single(key, q(1))
        }
    };
    Ok(Relator {
        id: id.to_string(),
        element,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::canonicalize;

    fn key(d: &Diagram) -> Key {
        canonicalize(d).unwrap().key
    }

    #[test]
    fn graft_two_segments_gives_tripod() {
        let e = Diagram::segment(3, 1, 3).disjoint_union(&Diagram::segment(3, 1, 2)).unwrap();
        let g = e.graft(0, 2).unwrap();
        assert_eq!(key(&g), key(&Diagram::tripod(3, 1, 2, 3)));
        let a = canonicalize(&g).unwrap();
        let b = canonicalize(&e.graft(2, 0).unwrap()).unwrap();
        assert_eq!(a.key, b.key);
        assert_eq!(a.sign, -b.sign);
    }

    #[test]
    fn star_on_lonely_leg_is_empty() {
        let e = Diagram::segment(2, 1, 2);
        assert!(star_element(&e, 0).unwrap().is_zero());
    }

    #[test]
    fn star_kills_tripod() {
        let e = Diagram::segment(3, 1, 2).disjoint_union(&Diagram::segment(3, 1, 3)).unwrap();
        let el = star_element(&e, 2).unwrap();
        assert_eq!(el.len(), 1);
        let c = el.coeff(&key(&Diagram::tripod(3, 1, 2, 3)));
        assert!(c == q(1) || c == q(-1));
    }

    #[test]
    fn ihx_on_forests_without_internal_edges() {
        let segs_and_tripods: Vec<Key> = enum_forests(3, 2);
        assert!(ihx_relators(&segs_and_tripods).is_empty());
    }

    #[test]
    fn caterpillar_has_one_ihx() {
        let c = Diagram::caterpillar(4, 1, 2, 3, 4);
        assert_eq!(internal_edges(&c).len(), 1);
        let el = ihx_element(&c, internal_edges(&c)[0]).unwrap().unwrap();
        assert_eq!(el.len(), 3);
    }

    #[test]
    fn stu_counts() {
        assert!(stu_relators(2, 1).is_empty());
        let basis = enum_bounded(3, 2);
        let pairs: usize = basis
            .iter()
            .map(|k| {
                let b = BoundedDiagram::from_key(k).unwrap();
                (0..3).map(|s| b.legs_on(s).saturating_sub(1)).sum::<usize>()
            })
            .sum();
        assert_eq!(stu_relators(3, 2).len(), pairs);
    }

    #[test]
    fn stu_on_parallel_chords() {
        let rels = stu_relators(2, 2);
        let basis = enum_bounded(2, 2);
        assert_eq!(basis.len(), 2);
        for r in rels {
            assert_eq!(r.element.len(), 2);
            let cs: Vec<_> = r.element.iter().map(|(_, c)| c.clone()).collect();
            assert_eq!(&cs[0] + &cs[1], q(0));
        }
    }

    #[test]
    fn link1_single_leg_is_zero() {
        for r in link1_relators(2, 1) {
            assert!(r.element.is_zero());
        }
    }

    #[test]
    fn regeneration_matches() {
        let mut all = star_relators(&enum_forests(3, 2));
        all.extend(ihx_relators(&enum_forests(4, 3)));
        all.extend(stu_relators(3, 2));
        all.extend(link1_relators(2, 2));
        all.extend(four_t_relators(3));
        all.extend(one_t_relators(3));
        for r in &all {
            assert_eq!(&regenerate(&r.id).unwrap(), r, "{}", r.id);
        }
        assert!(regenerate("star:zz:1").is_err());
        assert!(regenerate("nope:00").is_err());
    }

    #[test]
    fn segment_counts() {
        let s = Diagram::segment(3, 1, 2);
        assert_eq!(count_segments(&s.disjoint_union(&s).unwrap(), 1, 2).unwrap(), 2);
        assert_eq!(count_segments(&Diagram::tripod(3, 1, 2, 3), 1, 2).unwrap(), 0);
        let t = Diagram::tripod(3, 1, 2, 3).disjoint_union(&Diagram::segment(3, 1, 3)).unwrap();
        assert_eq!(count_segments(&t, 1, 3).unwrap(), 1);
        assert!(count_segments(&s, 2, 2).is_err());
    }
}
