//! Planar diagram codes.
//!
//! Each crossing is `X[i,j,k,l]`, edges listed counterclockwise starting
//! from the incoming under edge: the under strand runs `i -> k`, and the
//! crossing is positive when the over strand runs `l -> j`.
//!
//! Under strands fix the direction of their edges, and the rest follows by
//! propagation. A component that never passes under is oriented by an
//! optional `C[e1,e2,...]` line listing its edges in travel order, or else
//! by assuming consecutive numbering. With `C[...]` lines the components
//! appear in the listed order, starting at the first listed edge; without
//! them they are ordered by smallest edge label.

use std::collections::{BTreeMap, BTreeSet};

use super::{GaussLink, LinkParseError, Visit};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PdCrossing {
    pub edges: [u32; 4],
}

fn err(line: usize, column: usize, message: impl Into<String>) -> LinkParseError {
    LinkParseError {
        line,
        column,
        message: message.into(),
    }
}

/// A crossing with the line and column where it was written.
type Located = (PdCrossing, usize, usize);

/// Parse every `X[..]` and `C[..]` group in `text`.
fn scan(text: &str) -> Result<(Vec<Located>, Vec<Vec<u32>>), LinkParseError> {
    let mut crossings = Vec::new();
    let mut comps = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut rest = content;
        let mut base = 0;
        loop {
            let trimmed = rest.trim_start_matches(|c: char| c.is_whitespace() || c == ',' || c == ';');
            base += rest.len() - trimmed.len();
            rest = trimmed;
            if rest.is_empty() {
                break;
            }
            let column = content[..base].chars().count() + 1;
            let tag = rest.chars().next().expect("nonempty");
            if !(tag == 'X' || tag == 'C') || !rest[1..].starts_with('[') {
                return Err(err(line, column, "expected X[...] or C[...]"));
            }
            let close = rest
                .find(']')
                .ok_or_else(|| err(line, column, "unclosed bracket"))?;
            let nums: Result<Vec<u32>, _> = rest[2..close]
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse::<u32>())
                .collect();
            let nums = nums.map_err(|_| err(line, column, "edge labels must be nonnegative integers"))?;
            if tag == 'X' {
                let edges: [u32; 4] = nums
                    .try_into()
                    .map_err(|_| err(line, column, "a crossing lists exactly 4 edges"))?;
                crossings.push((PdCrossing { edges }, line, column));
            } else {
                comps.push(nums);
            }
            base += close + 1;
            rest = &rest[close + 1..];
        }
    }
    Ok((crossings, comps))
}

/// Convert a PD code to signed Gauss code; crossing `n` of the input
/// becomes crossing id `n + 1`.
pub fn parse_pd(text: &str) -> Result<GaussLink, LinkParseError> {
    let (crossings, comps) = scan(text)?;
    let mut slots: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (n, (x, _, _)) in crossings.iter().enumerate() {
        for (pos, &e) in x.edges.iter().enumerate() {
            slots.entry(e).or_default().push((n, pos));
        }
    }
    if let Some((&e, _)) = slots.iter().find(|(_, v)| v.len() != 2) {
        let (_, line, column) = crossings
            .iter()
            .find(|(x, _, _)| x.edges.contains(&e))
            .expect("edge came from a crossing");
        return Err(err(*line, *column, format!("edge {e} must occur exactly twice")));
    }
    let hint = orientation_hint(&crossings, &comps, &slots)?;
    let head = resolve_heads(&crossings, &slots, &hint)?;
    let at = |n: usize, pos: usize| crossings[n].0.edges[pos];
    // the outgoing edge on the same strand as the incoming slot
    let exit = |pos: usize| -> usize {
        match pos {
            0 => 2,
            2 => 0,
            1 => 3,
            _ => 1,
        }
    };
    let starts: Vec<u32> = if comps.is_empty() {
        let mut seen = BTreeSet::new();
        let mut starts = Vec::new();
        for &e in slots.keys() {
            if seen.contains(&e) {
                continue;
            }
            starts.push(e);
            let mut cur = e;
            loop {
                seen.insert(cur);
                let &(n, pos) = slots[&cur].iter().find(|&&(n, pos)| head[n][pos]).expect("every edge has a head");
                cur = at(n, exit(pos));
                if cur == e {
                    break;
                }
            }
        }
        starts
    } else {
        comps.iter().filter_map(|c| c.first().copied()).collect()
    };
    let mut components = Vec::new();
    let mut used = BTreeSet::new();
    for (ci, &start) in starts.iter().enumerate() {
        let mut visits = Vec::new();
        let mut order = Vec::new();
        let mut cur = start;
        loop {
            if !used.insert(cur) {
                return Err(err(1, 1, format!("edge {cur} lies on two components")));
            }
            order.push(cur);
            let &(n, pos) = slots[&cur].iter().find(|&&(n, pos)| head[n][pos]).expect("every edge has a head");
            let over = pos % 2 == 1;
            // positive exactly when the over strand enters at l
            let sign = if head[n][3] { 1 } else { -1 };
            visits.push(Visit { crossing: n as u32 + 1, sign, over });
            cur = at(n, exit(pos));
            if cur == start {
                break;
            }
        }
        if let Some(listed) = comps.get(ci) {
            if *listed != order {
                return Err(err(1, 1, format!("C[...] line {} disagrees with the crossing orientations", ci + 1)));
            }
        }
        components.push(visits);
    }
    if used.len() != slots.len() {
        return Err(err(1, 1, "C[...] lines must cover every edge"));
    }
    GaussLink::new(components).map_err(|e| err(1, 1, e.to_string()))
}

/// For over strands never fixed by an under strand: `(crossing, true)` when
/// `l` is taken as incoming, from the component order or numbering.
fn orientation_hint(
    crossings: &[Located],
    comps: &[Vec<u32>],
    slots: &BTreeMap<u32, Vec<(usize, usize)>>,
) -> Result<Vec<bool>, LinkParseError> {
    let mut next: BTreeMap<u32, u32> = BTreeMap::new();
    if comps.is_empty() {
        // consecutive numbering within each connected edge set
        let mut seen = BTreeSet::new();
        for &e in slots.keys() {
            if seen.contains(&e) {
                continue;
            }
            let mut comp = vec![e];
            let mut stack = vec![e];
            seen.insert(e);
            while let Some(f) = stack.pop() {
                for &(n, pos) in &slots[&f] {
                    let g = crossings[n].0.edges[(pos + 2) % 4];
                    if seen.insert(g) {
                        comp.push(g);
                        stack.push(g);
                    }
                }
            }
            comp.sort();
            for (i, &f) in comp.iter().enumerate() {
                next.insert(f, comp[(i + 1) % comp.len()]);
            }
        }
    } else {
        for c in comps {
            for (i, &e) in c.iter().enumerate() {
                if next.insert(e, c[(i + 1) % c.len()]).is_some() {
                    return Err(err(1, 1, format!("edge {e} listed twice in C[...] lines")));
                }
            }
        }
    }
    Ok(crossings
        .iter()
        .map(|(x, _, _)| {
            let [_, j, _, l] = x.edges;
            next.get(&l) == Some(&j)
        })
        .collect())
}

/// `head[n][pos]`: whether the edge in slot `pos` of crossing `n` ends there.
fn resolve_heads(
    crossings: &[Located],
    slots: &BTreeMap<u32, Vec<(usize, usize)>>,
    hint: &[bool],
) -> Result<Vec<[bool; 4]>, LinkParseError> {
    let n = crossings.len();
    let mut head: Vec<[Option<bool>; 4]> = vec![[Some(true), None, Some(false), None]; n];
    let mut queue: Vec<(usize, usize)> = (0..n).flat_map(|c| [(c, 0), (c, 2)]).collect();
    loop {
        while let Some((c, pos)) = queue.pop() {
            let v = head[c][pos].expect("queued slots are set");
            let e = crossings[c].0.edges[pos];
            let mut implied = vec![];
            // the other end of the same edge
            for &(c2, p2) in &slots[&e] {
                if (c2, p2) != (c, pos) {
                    implied.push((c2, p2, !v));
                }
            }
            if pos % 2 == 1 {
                implied.push((c, 4 - pos, !v));
            }
            for (c2, p2, want) in implied {
                match head[c2][p2] {
                    None => {
                        head[c2][p2] = Some(want);
                        queue.push((c2, p2));
                    }
                    Some(have) if have != want => {
                        let (_, line, column) = crossings[c2];
                        return Err(err(line, column, "inconsistent strand orientations"));
                    }
                    _ => {}
                }
            }
        }
        let Some(c) = (0..n).find(|&c| head[c][3].is_none()) else { break };
        head[c][3] = Some(hint[c]);
        queue.push((c, 3));
    }
    Ok(head.into_iter().map(|h| h.map(|x| x.expect("resolved"))).collect())
}
