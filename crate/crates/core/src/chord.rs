//! Chord diagrams on an oriented circle, and based ("long") chord diagrams
//! obtained by cutting the circle at a point.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::diagram::{DiagramError, Key};

const TAG_CHORD: u8 = b'C';
const TAG_LONG: u8 = b'L';

/// A perfect matching on `2d` points of an oriented circle, stored as the
/// rotation with the lexicographically least partner array.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChordDiagram {
    partner: Vec<u8>,
}

impl ChordDiagram {
    pub fn empty() -> Self {
        ChordDiagram { partner: Vec::new() }
    }

    /// From any partner array (not necessarily canonical).
    pub fn from_partner(partner: &[usize]) -> Self {
        let n = partner.len();
        assert!(n.is_multiple_of(2));
        let mut best: Option<Vec<u8>> = None;
        for r in 0..n.max(1) {
            if n == 0 {
                break;
            }
            let rotated: Vec<u8> = (0..n)
                .map(|i| ((partner[(i + r) % n] + n - r) % n) as u8)
                .collect();
            if best.as_ref().is_none_or(|b| rotated < *b) {
                best = Some(rotated);
            }
        }
        ChordDiagram {
            partner: best.unwrap_or_default(),
        }
    }

    /// From a cyclic word in which every chord label occurs twice.
    pub fn from_word(word: &[usize]) -> Self {
        ChordDiagram::from_partner(&partner_of_word(word))
    }

    pub fn degree(&self) -> usize {
        self.partner.len() / 2
    }

    pub fn partner(&self) -> Vec<usize> {
        self.partner.iter().map(|&p| p as usize).collect()
    }

    /// Chords as `(lower, upper)` point pairs.
    pub fn chords(&self) -> Vec<(usize, usize)> {
        (0..self.partner.len())
            .filter(|&i| i < self.partner[i] as usize)
            .map(|i| (i, self.partner[i] as usize))
            .collect()
    }

    /// Label sequence: chord `c` sits at the points of `chords()[c]`.
    pub fn word(&self) -> Vec<usize> {
        let mut word = vec![0; self.partner.len()];
        for (c, (a, b)) in self.chords().into_iter().enumerate() {
            word[a] = c;
            word[b] = c;
        }
        word
    }

    /// True when some chord joins two neighboring points.
    pub fn has_isolated_chord(&self) -> bool {
        let n = self.partner.len();
        (0..n).any(|i| self.partner[i] as usize == (i + 1) % n)
    }

    pub fn key(&self) -> Key {
        let mut b = vec![TAG_CHORD, self.degree() as u8];
        b.extend(&self.partner);
        Key::from_bytes(b)
    }

    pub fn from_key(key: &Key) -> Result<Self, DiagramError> {
        let b = key.as_bytes();
        if b.len() < 2 || b[0] != TAG_CHORD || b.len() != 2 + 2 * b[1] as usize {
            return Err(DiagramError::BadKey("not a chord diagram key".into()));
        }
        let p: Vec<usize> = b[2..].iter().map(|&x| x as usize).collect();
        check_matching(&p)?;
        let d = ChordDiagram::from_partner(&p);
        if d.partner != b[2..] {
            return Err(DiagramError::BadKey("not in canonical rotation".into()));
        }
        Ok(d)
    }

    /// Cut the circle just before point `cut`.
    pub fn cut_at(&self, cut: usize) -> LongChordDiagram {
        let w = self.word();
        let n = w.len();
        let rotated: Vec<usize> = (0..n).map(|i| w[(i + cut) % n]).collect();
        LongChordDiagram::from_word(&rotated)
    }

    pub fn to_doc(&self) -> ChordDoc {
        ChordDoc {
            degree: self.degree(),
            pairing: self.partner(),
        }
    }

    pub fn from_doc(doc: &ChordDoc) -> Result<Self, DiagramError> {
        if doc.pairing.len() != 2 * doc.degree {
            return Err(DiagramError::BadKey("pairing length is not twice the degree".into()));
        }
        check_matching(&doc.pairing)?;
        Ok(ChordDiagram::from_partner(&doc.pairing))
    }
}

fn check_matching(p: &[usize]) -> Result<(), DiagramError> {
    for (i, &j) in p.iter().enumerate() {
        if j >= p.len() || j == i || p[j] != i {
            return Err(DiagramError::BadKey(format!("point {i} is not matched")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordDoc {
    pub degree: usize,
    pub pairing: Vec<usize>,
}

pub(crate) fn partner_of_word(word: &[usize]) -> Vec<usize> {
    let mut first: std::collections::HashMap<usize, usize> = Default::default();
    let mut partner = vec![usize::MAX; word.len()];
    for (i, &c) in word.iter().enumerate() {
        if let Some(j) = first.remove(&c) {
            partner[i] = j;
            partner[j] = i;
        } else {
            first.insert(c, i);
        }
    }
    assert!(first.is_empty(), "every chord label must occur twice");
    partner
}

/// All chord diagrams of degree `d` up to rotation, sorted.
pub fn enum_chord(d: usize) -> Vec<ChordDiagram> {
    let mut out = BTreeSet::new();
    let mut partner = vec![usize::MAX; 2 * d];
    matchings(&mut partner, &mut |p| {
        out.insert(ChordDiagram::from_partner(p));
    });
    out.into_iter().collect()
}

fn matchings(partner: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    let Some(i) = partner.iter().position(|&p| p == usize::MAX) else {
        visit(partner);
        return;
    };
    for j in i + 1..partner.len() {
        if partner[j] == usize::MAX {
            partner[i] = j;
            partner[j] = i;
            matchings(partner, visit);
            partner[i] = usize::MAX;
            partner[j] = usize::MAX;
        }
    }
}

/// A chord diagram on an oriented line: chords are labeled in order of
/// their first endpoint, which makes the word itself canonical.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LongChordDiagram {
    word: Vec<u8>,
}

impl LongChordDiagram {
    pub fn empty() -> Self {
        LongChordDiagram { word: Vec::new() }
    }

    pub fn from_word(word: &[usize]) -> Self {
        let mut relabel: std::collections::HashMap<usize, u8> = Default::default();
        let word = word
            .iter()
            .map(|c| {
                let next = relabel.len() as u8;
                *relabel.entry(*c).or_insert(next)
            })
            .collect();
        LongChordDiagram { word }
    }

    pub fn word(&self) -> Vec<usize> {
        self.word.iter().map(|&c| c as usize).collect()
    }

    pub fn degree(&self) -> usize {
        self.word.len() / 2
    }

    /// Concatenation: `self` first along the line.
    pub fn concat(&self, other: &LongChordDiagram) -> LongChordDiagram {
        let shift = self.degree();
        let mut w = self.word();
        w.extend(other.word.iter().map(|&c| c as usize + shift));
        LongChordDiagram::from_word(&w)
    }

    /// Keep only the chords whose label is in `keep`.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> LongChordDiagram {
        let w: Vec<usize> = self.word().into_iter().filter(|&c| keep(c)).collect();
        LongChordDiagram::from_word(&w)
    }

    pub fn close(&self) -> ChordDiagram {
        ChordDiagram::from_word(&self.word())
    }

    pub fn key(&self) -> Key {
        let mut b = vec![TAG_LONG, self.degree() as u8];
        b.extend(&self.word);
        Key::from_bytes(b)
    }

    pub fn from_key(key: &Key) -> Result<Self, DiagramError> {
        let b = key.as_bytes();
        if b.len() < 2 || b[0] != TAG_LONG || b.len() != 2 + 2 * b[1] as usize {
            return Err(DiagramError::BadKey("not a long chord diagram key".into()));
        }
        let w: Vec<usize> = b[2..].iter().map(|&x| x as usize).collect();
        let d = LongChordDiagram::from_word(&w);
        if d.word != b[2..] {
            return Err(DiagramError::BadKey("chords not labeled in order".into()));
        }
        Ok(d)
    }
}

/// All long chord diagrams of degree `d`.
pub fn enum_long_chord(d: usize) -> Vec<LongChordDiagram> {
    let mut out = Vec::new();
    let mut partner = vec![usize::MAX; 2 * d];
    matchings(&mut partner, &mut |p| {
        let mut word = vec![0; p.len()];
        let mut next = 0;
        for i in 0..p.len() {
            if p[i] > i {
                word[i] = next;
                word[p[i]] = next;
                next += 1;
            }
        }
        out.push(LongChordDiagram::from_word(&word));
    });
    out.sort();
    out
}
