//! Random link homotopy moves on Gauss code: Reidemeister moves and
//! crossing changes of a component with itself.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{linking_matrix, GaussLink, LinkError, LinkingMatrix, Visit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    R1Add,
    R1Remove,
    R2Add,
    R2Remove,
    R3,
    SelfCrossingChange,
}

const WEIGHTED: [(MoveKind, u32); 6] = [
    (MoveKind::R1Add, 2),
    (MoveKind::R1Remove, 4),
    (MoveKind::R2Add, 2),
    (MoveKind::R2Remove, 4),
    (MoveKind::R3, 3),
    (MoveKind::SelfCrossingChange, 3),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveOutcome {
    Applied(MoveKind),
    NoMove,
}

/// Apply one random move chosen with `seed`. When nothing applies the input
/// comes back unchanged with [`MoveOutcome::NoMove`].
pub fn random_homotopy_move(l: &GaussLink, seed: u64) -> (GaussLink, MoveOutcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    step(l, &mut rng)
}

fn step(l: &GaussLink, rng: &mut ChaCha8Rng) -> (GaussLink, MoveOutcome) {
    let mut order: Vec<(MoveKind, u32)> = WEIGHTED.to_vec();
    // weighted shuffle: repeatedly draw without replacement
    let mut kinds = Vec::with_capacity(order.len());
    while !order.is_empty() {
        let total: u32 = order.iter().map(|&(_, w)| w).sum();
        let mut x = rng.gen_range(0..total);
        let i = order
            .iter()
            .position(|&(_, w)| {
                if x < w {
                    true
                } else {
                    x -= w;
                    false
                }
            })
            .expect("draw within total");
        kinds.push(order.remove(i).0);
    }
    for kind in kinds {
        if let Some(out) = apply(l, kind, rng) {
            debug_assert!(out.validate().is_ok(), "{kind:?} broke the code");
            return (out, MoveOutcome::Applied(kind));
        }
    }
    (l.clone(), MoveOutcome::NoMove)
}

fn apply(l: &GaussLink, kind: MoveKind, rng: &mut ChaCha8Rng) -> Option<GaussLink> {
    match kind {
        MoveKind::R1Add => r1_add(l, rng),
        MoveKind::R1Remove => r1_remove(l, rng),
        MoveKind::R2Add => r2_add(l, rng),
        MoveKind::R2Remove => r2_remove(l, rng),
        MoveKind::R3 => r3(l, rng),
        MoveKind::SelfCrossingChange => self_change(l, rng),
    }
}

fn fresh_id(l: &GaussLink) -> u32 {
    l.components().iter().flatten().map(|v| v.crossing).max().unwrap_or(0) + 1
}

fn random_sign(rng: &mut ChaCha8Rng) -> i8 {
    if rng.gen_bool(0.5) {
        1
    } else {
        -1
    }
}

/// Adjacent visit pairs `(component, p, p + 1 mod len)` on components with
/// at least two visits.
fn adjacent_pairs(l: &GaussLink) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for (c, comp) in l.components().iter().enumerate() {
        let n = comp.len();
        if n < 2 {
            continue;
        }
        for p in 0..n {
            let q = (p + 1) % n;
            if n == 2 && p == 1 {
                break;
            }
            out.push((c, p, q));
        }
    }
    out
}

fn remove_crossings(l: &GaussLink, ids: &[u32]) -> GaussLink {
    let mut out = l.clone();
    for comp in out.components_mut() {
        comp.retain(|v| !ids.contains(&v.crossing));
    }
    out
}

fn r1_add(l: &GaussLink, rng: &mut ChaCha8Rng) -> Option<GaussLink> {
    if l.num_components() == 0 {
        return None;
    }
    let c = rng.gen_range(0..l.num_components());
    let p = rng.gen_range(0..=l.components()[c].len());
    let id = fresh_id(l);
    let sign = random_sign(rng);
    let first_over = rng.gen_bool(0.5);
    let mut out = l.clone();
    let comp = &mut out.components_mut()[c];
    comp.insert(p, Visit { crossing: id, sign, over: !first_over });
    comp.insert(p, Visit { crossing: id, sign, over: first_over });
    Some(out)
}

fn r1_remove(l: &GaussLink, rng: &mut ChaCha8Rng) -> Option<GaussLink> {
    let candidates: Vec<u32> = adjacent_pairs(l)
        .into_iter()
        .filter_map(|(c, p, q)| {
            let comp = &l.components()[c];
            (comp[p].crossing == comp[q].crossing).then_some(comp[p].crossing)
        })
        .collect();
    let id = *candidates.choose(rng)?;
    Some(remove_crossings(l, &[id]))
}

fn r2_add(l: &GaussLink, rng: &mut ChaCha8Rng) -> Option<GaussLink> {
    let n = l.num_components();
    if n == 0 {
        return None;
    }
    let (ca, cb) = (rng.gen_range(0..n), rng.gen_range(0..n));
    let a = fresh_id(l);
    let b = a + 1;
    let s = random_sign(rng);
    let mut out = l.clone();
    let over_pos = rng.gen_range(0..=out.components()[ca].len());
    out.components_mut()[ca].splice(
        over_pos..over_pos,
        [Visit { crossing: a, sign: s, over: true }, Visit { crossing: b, sign: -s, over: true }],
    );
    let under_pos = rng.gen_range(0..=out.components()[cb].len());
    // the lower strand may run parallel or antiparallel to the upper one
    let (x, y) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
    let sx = if x == a { s } else { -s };
    out.components_mut()[cb].splice(
        under_pos..under_pos,
        [Visit { crossing: x, sign: sx, over: false }, Visit { crossing: y, sign: -sx, over: false }],
    );
    Some(out)
}

fn r2_remove(l: &GaussLink, rng: &mut ChaCha8Rng) -> Option<GaussLink> {
    let pairs = adjacent_pairs(l);
    let mut over_pairs = Vec::new();
    let mut under_pairs = Vec::new();
    for &(c, p, q) in &pairs {
        let comp = &l.components()[c];
        let (x, y) = (comp[p], comp[q]);
        if x.crossing == y.crossing || x.sign == y.sign {
            continue;
        }
        let key = (x.crossing.min(y.crossing), x.crossing.max(y.crossing));
        if x.over && y.over {
            over_pairs.push(key);
        } else if !x.over && !y.over {
            under_pairs.push(key);
        }
    }
    let candidates: Vec<(u32, u32)> = over_pairs.into_iter().filter(|k| under_pairs.contains(k)).collect();
    let &(a, b) = candidates.choose(rng)?;
    Some(remove_crossings(l, &[a, b]))
}

/// A triangle: three crossings, each pair adjacent along some strand, with
/// one strand over at both of its crossings and one under at both.
fn r3(l: &GaussLink, rng: &mut ChaCha8Rng) -> Option<GaussLink> {
    let pairs: Vec<(usize, usize, usize)> = adjacent_pairs(l)
        .into_iter()
        .filter(|&(c, p, q)| {
            let comp = &l.components()[c];
            comp[p].crossing != comp[q].crossing
        })
        .collect();
    let ids = |&(c, p, q): &(usize, usize, usize)| {
        let comp = &l.components()[c];
        (comp[p].crossing, comp[q].crossing)
    };
    let mut by_id: std::collections::BTreeMap<u32, Vec<usize>> = Default::default();
    for (i, s) in pairs.iter().enumerate() {
        let (a, b) = ids(s);
        by_id.entry(a).or_default().push(i);
        by_id.entry(b).or_default().push(i);
    }
    let other = |i: usize, x: u32| {
        let (a, b) = ids(&pairs[i]);
        if a == x {
            b
        } else {
            a
        }
    };
    let roles = |s: &(usize, usize, usize)| {
        let comp = &l.components()[s.0];
        (comp[s.1].over as u8) + (comp[s.2].over as u8)
    };
    let mut triangles = Vec::new();
    for (i, s1) in pairs.iter().enumerate() {
        let (a, b) = ids(s1);
        for &j in &by_id[&b] {
            let c = other(j, b);
            if j <= i || c == a {
                continue;
            }
            for &m in &by_id[&c] {
                if m <= i || m == j || other(m, c) != a {
                    continue;
                }
                let tri = [*s1, pairs[j], pairs[m]];
                let mut r = tri.map(|s| roles(&s));
                r.sort();
                let sites: std::collections::BTreeSet<(usize, usize)> =
                    tri.iter().flat_map(|s| [(s.0, s.1), (s.0, s.2)]).collect();
                if r == [0, 1, 2] && sites.len() == 6 {
                    triangles.push(tri);
                }
            }
        }
    }
    let tri = triangles.choose(rng)?;
    let mut out = l.clone();
    for &(c, p, q) in tri {
        out.components_mut()[c].swap(p, q);
    }
    Some(out)
}

fn self_change(l: &GaussLink, rng: &mut ChaCha8Rng) -> Option<GaussLink> {
    let selfs: Vec<u32> = l
        .crossings()
        .into_iter()
        .filter(|(_, s)| s.over.0 == s.under.0)
        .map(|(id, _)| id)
        .collect();
    let id = *selfs.choose(rng)?;
    let mut out = l.clone();
    for v in out.components_mut().iter_mut().flatten() {
        if v.crossing == id {
            v.over = !v.over;
            v.sign = -v.sign;
        }
    }
    Some(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub moves: usize,
    pub applied: usize,
    pub max_crossings: usize,
    pub matrix: LinkingMatrix,
    pub invariant: bool,
}

/// Apply `moves` random moves from one seeded stream, recomputing the
/// linking matrix after each.
pub fn fuzz_linking_matrix(l: &GaussLink, moves: usize, seed: u64) -> Result<FuzzReport, LinkError> {
    let start = linking_matrix(l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = l.clone();
    let mut applied = 0;
    let mut max_crossings = cur.num_crossings();
    let mut invariant = true;
    for _ in 0..moves {
        let (next, outcome) = step(&cur, &mut rng);
        next.validate()?;
        if matches!(outcome, MoveOutcome::Applied(_)) {
            applied += 1;
        }
        if linking_matrix(&next)? != start {
            invariant = false;
        }
        max_crossings = max_crossings.max(next.num_crossings());
        cur = next;
    }
    Ok(FuzzReport {
        moves,
        applied,
        max_crossings,
        matrix: start,
        invariant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkio::samples;

    #[test]
    fn twist_on_unlink() {
        let u = GaussLink::unlink(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = r1_add(&u, &mut rng).unwrap();
        assert_eq!(t.num_crossings(), 1);
        assert_eq!(linking_matrix(&t).unwrap(), linking_matrix(&u).unwrap());
        assert_eq!(r1_remove(&t, &mut rng).unwrap(), u);
    }

    #[test]
    fn hopf_twist_then_change() {
        let h = samples::positive_hopf();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t = r1_add(&h, &mut rng).unwrap();
        let c = self_change(&t, &mut rng).unwrap();
        assert_eq!(linking_matrix(&c).unwrap().get(0, 1), 1);
    }

    #[test]
    fn r2_round_trip() {
        let h = samples::positive_hopf();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = r2_add(&h, &mut rng).unwrap();
        assert_eq!(a.num_crossings(), 4);
        assert!(a.validate().is_ok());
        assert_eq!(linking_matrix(&a).unwrap(), linking_matrix(&h).unwrap());
        let b = r2_remove(&a, &mut rng).unwrap();
        assert_eq!(b.num_crossings(), 2);
    }

    #[test]
    fn deterministic_per_seed() {
        let w = samples::whitehead();
        assert_eq!(random_homotopy_move(&w, 42), random_homotopy_move(&w, 42));
        let a = fuzz_linking_matrix(&w, 200, 5).unwrap();
        let b = fuzz_linking_matrix(&w, 200, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.invariant);
    }

    #[test]
    fn no_components_no_move() {
        let (out, outcome) = random_homotopy_move(&GaussLink::unlink(0), 1);
        assert_eq!(outcome, MoveOutcome::NoMove);
        assert_eq!(out.num_components(), 0);
    }
}
