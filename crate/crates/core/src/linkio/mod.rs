//! Link presentations and pairwise linking numbers.
//!
//! Gauss text format: one line per component, listing the crossings met
//! while traveling along the component. A visit is written `±id^o` (passing
//! over) or `±id^u` (passing under), where the sign is the crossing sign and
//! must agree at both visits. A line holding only `.` is a component with no
//! crossings; `#` starts a comment; blank lines are ignored.
//!
//! ```text
//! # positive Hopf link
//! +1^o +2^u
//! +1^u +2^o
//! ```

mod moves;
mod pd;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use moves::{random_homotopy_move, fuzz_linking_matrix, FuzzReport, MoveKind, MoveOutcome};
pub use pd::{parse_pd, PdCrossing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Visit {
    pub crossing: u32,
    pub sign: i8,
    pub over: bool,
}

impl fmt::Display for Visit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign > 0 { '+' } else { '-' };
        let r = if self.over { 'o' } else { 'u' };
        write!(f, "{s}{}^{r}", self.crossing)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct LinkParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error("crossing {0} appears {1} times")]
    Count(u32, usize),
    #[error("crossing {0} must be visited once over and once under")]
    Role(u32),
    #[error("crossing {0} has different signs at its two visits")]
    Sign(u32),
    #[error("bad sign at crossing {0}")]
    BadSign(u32),
    #[error("linking number between components {0} and {1} is not an integer")]
    NonIntegral(usize, usize),
    #[error("no component {0}")]
    NoComponent(usize),
}

/// A link diagram as signed Gauss code.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussLink {
    components: Vec<Vec<Visit>>,
}

/// Where a crossing is visited: `(component, position)` for over and under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingSites {
    pub sign: i8,
    pub over: (usize, usize),
    pub under: (usize, usize),
}

impl GaussLink {
    pub fn new(components: Vec<Vec<Visit>>) -> Result<Self, LinkError> {
        let l = GaussLink { components };
        l.validate()?;
        Ok(l)
    }

    pub fn unlink(n: usize) -> Self {
        GaussLink {
            components: vec![Vec::new(); n],
        }
    }

    pub fn components(&self) -> &[Vec<Visit>] {
        &self.components
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn num_crossings(&self) -> usize {
        self.components.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn validate(&self) -> Result<(), LinkError> {
        let mut seen: BTreeMap<u32, Vec<Visit>> = BTreeMap::new();
        for v in self.components.iter().flatten() {
            if v.sign != 1 && v.sign != -1 {
                return Err(LinkError::BadSign(v.crossing));
            }
            seen.entry(v.crossing).or_default().push(*v);
        }
        for (id, vs) in seen {
            if vs.len() != 2 {
                return Err(LinkError::Count(id, vs.len()));
            }
            if vs[0].over == vs[1].over {
                return Err(LinkError::Role(id));
            }
            if vs[0].sign != vs[1].sign {
                return Err(LinkError::Sign(id));
            }
        }
        Ok(())
    }

    pub fn crossings(&self) -> BTreeMap<u32, CrossingSites> {
        let mut over = BTreeMap::new();
        let mut under = BTreeMap::new();
        let mut sign = BTreeMap::new();
        for (c, comp) in self.components.iter().enumerate() {
            for (p, v) in comp.iter().enumerate() {
                sign.insert(v.crossing, v.sign);
                if v.over {
                    over.insert(v.crossing, (c, p));
                } else {
                    under.insert(v.crossing, (c, p));
                }
            }
        }
        sign.into_iter()
            .map(|(id, s)| {
                (
                    id,
                    CrossingSites {
                        sign: s,
                        over: over[&id],
                        under: under[&id],
                    },
                )
            })
            .collect()
    }

    /// Reverse the orientation of component `i`. Crossings between `i` and
    /// another component change sign.
    pub fn reverse_component(&self, i: usize) -> Result<GaussLink, LinkError> {
        if i >= self.components.len() {
            return Err(LinkError::NoComponent(i));
        }
        let mixed: Vec<u32> = self
            .crossings()
            .into_iter()
            .filter(|(_, s)| (s.over.0 == i) != (s.under.0 == i))
            .map(|(id, _)| id)
            .collect();
        let mut components = self.components.clone();
        components[i].reverse();
        for v in components.iter_mut().flatten() {
            if mixed.contains(&v.crossing) {
                v.sign = -v.sign;
            }
        }
        Ok(GaussLink { components })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for comp in &self.components {
            if comp.is_empty() {
                out.push('.');
            } else {
                let toks: Vec<String> = comp.iter().map(Visit::to_string).collect();
                out.push_str(&toks.join(" "));
            }
            out.push('\n');
        }
        out
    }

    fn components_mut(&mut self) -> &mut Vec<Vec<Visit>> {
        &mut self.components
    }
}

impl fmt::Display for GaussLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn token_error(line: usize, column: usize, message: impl Into<String>) -> LinkParseError {
    LinkParseError {
        line,
        column,
        message: message.into(),
    }
}

fn parse_token(tok: &str, line: usize, column: usize) -> Result<Visit, LinkParseError> {
    let sign = match tok.chars().next() {
        Some('+') => 1,
        Some('-') => -1,
        _ => return Err(token_error(line, column, format!("missing sign in {tok:?}"))),
    };
    let body = &tok[1..];
    let (id, role) = body
        .split_once('^')
        .ok_or_else(|| token_error(line, column, format!("missing role in {tok:?}; expected ^o or ^u")))?;
    let crossing: u32 = id
        .parse()
        .map_err(|_| token_error(line, column, format!("bad crossing id {id:?}")))?;
    let over = match role {
        "o" => true,
        "u" => false,
        _ => return Err(token_error(line, column, format!("unknown role {role:?}; expected o or u"))),
    };
    Ok(Visit { crossing, sign, over })
}

pub fn parse_gauss(text: &str) -> Result<GaussLink, LinkParseError> {
    let mut components = Vec::new();
    let mut where_: BTreeMap<u32, Vec<(usize, usize, Visit)>> = BTreeMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        if content.trim() == "." {
            components.push(Vec::new());
            continue;
        }
        let mut comp = Vec::new();
        let mut col = 0;
        for tok in content.split_whitespace() {
            let offset = content[col..].find(tok).expect("token inside line") + col;
            let column = content[..offset].chars().count() + 1;
            col = offset + tok.len();
            let v = parse_token(tok, line, column)?;
            where_.entry(v.crossing).or_default().push((line, column, v));
            comp.push(v);
        }
        components.push(comp);
    }
    for (id, visits) in &where_ {
        let (line, column, first) = visits[0];
        if visits.len() != 2 {
            let (l, c, _) = visits[visits.len().min(3) - 1];
            return Err(token_error(
                if visits.len() > 2 { l } else { line },
                if visits.len() > 2 { c } else { column },
                format!("crossing {id} appears {} times; expected 2", visits.len()),
            ));
        }
        let (l2, c2, second) = visits[1];
        if first.over == second.over {
            return Err(token_error(
                l2,
                c2,
                format!("crossing {id} is visited {} twice", if first.over { "over" } else { "under" }),
            ));
        }
        if first.sign != second.sign {
            return Err(token_error(l2, c2, format!("crossing {id} has conflicting signs")));
        }
    }
    Ok(GaussLink { components })
}

/// Symmetric integer matrix of pairwise linking numbers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinkingMatrix {
    pub entries: Vec<Vec<i64>>,
}

impl LinkingMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|&x| x == 0)
    }
}

impl fmt::Display for LinkingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// `lk(i, j)`: half the signed count of crossings between `i` and `j`.
pub fn linking_matrix(l: &GaussLink) -> Result<LinkingMatrix, LinkError> {
    let n = l.num_components();
    let mut twice = vec![vec![0i64; n]; n];
    for s in l.crossings().values() {
        let (a, b) = (s.over.0, s.under.0);
        if a != b {
            twice[a][b] += s.sign as i64;
            twice[b][a] += s.sign as i64;
        }
    }
    let mut entries = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            if twice[i][j] % 2 != 0 {
                return Err(LinkError::NonIntegral(i.min(j), i.max(j)));
            }
            entries[i][j] = twice[i][j] / 2;
        }
    }
    Ok(LinkingMatrix { entries })
}

/// Reference presentations.
pub mod samples {
    use super::{parse_gauss, GaussLink};

    pub const POSITIVE_HOPF: &str = "+1^o +2^u\n+1^u +2^o\n";
    /// Five crossings; crossing 2 is a self-crossing of the second component.
    pub const WHITEHEAD: &str = "-1^o +4^u +5^o -3^u\n-3^o -1^u -2^o +5^u +4^o -2^u\n";

    pub fn unlink(n: usize) -> GaussLink {
        GaussLink::unlink(n)
    }

    pub fn positive_hopf() -> GaussLink {
        parse_gauss(POSITIVE_HOPF).expect("valid sample")
    }

    pub fn whitehead() -> GaussLink {
        parse_gauss(WHITEHEAD).expect("valid sample")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unlink_parses() {
        let l = parse_gauss(".\n.\n").unwrap();
        assert_eq!(l.num_components(), 2);
        assert!(linking_matrix(&l).unwrap().is_zero());
    }

    #[test]
    fn hopf_and_whitehead() {
        let h = samples::positive_hopf();
        assert_eq!(linking_matrix(&h).unwrap().get(0, 1), 1);
        assert_eq!(linking_matrix(&h).unwrap().get(1, 0), 1);
        let w = samples::whitehead();
        assert_eq!(w.num_crossings(), 5);
        assert!(linking_matrix(&w).unwrap().is_zero());
    }

    #[test]
    fn single_appearance_names_the_id() {
        let err = parse_gauss("+1^o +2^u\n+2^o\n").unwrap_err();
        assert!(err.message.contains("crossing 1"), "{err}");
        assert_eq!((err.line, err.column), (1, 1));
    }

    #[test]
    fn token_errors_have_positions() {
        let err = parse_gauss("+1^o  3^u\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 7));
        assert!(err.message.contains("missing sign"));
        let err = parse_gauss("# c\n+1^o +1^o\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 6));
        let err = parse_gauss("+1^o -1^u\n").unwrap_err();
        assert!(err.message.contains("signs"));
        assert!(parse_gauss("+1^x -1^u\n").is_err());
    }

    #[test]
    fn text_round_trip() {
        let w = samples::whitehead();
        assert_eq!(parse_gauss(&w.to_text()).unwrap(), w);
        let u = GaussLink::unlink(3);
        assert_eq!(parse_gauss(&u.to_text()).unwrap(), u);
    }

    #[test]
    fn reversal_negates_row() {
        let h = samples::positive_hopf();
        let r = h.reverse_component(0).unwrap();
        assert_eq!(linking_matrix(&r).unwrap().get(0, 1), -1);
        assert!(h.reverse_component(5).is_err());
    }

    #[test]
    fn half_integer_rejected() {
        let l = GaussLink::new(vec![
            vec![Visit { crossing: 1, sign: 1, over: true }],
            vec![Visit { crossing: 1, sign: 1, over: false }],
        ])
        .unwrap();
        assert!(matches!(linking_matrix(&l), Err(LinkError::NonIntegral(0, 1))));
    }
}
