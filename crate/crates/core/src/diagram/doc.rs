//! JSON interchange document for diagrams.
//!
//! ```json
//! { "k": 3,
//!   "vertices": [{"id": 0, "kind": "tri", "rotation": [0, 1, 2]},
//!                {"id": 1, "kind": "uni", "color": 1}, ...],
//!   "edges": [{"id": 0, "ends": [0, 1]}, ...] }
//! ```

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Color, Diagram, DiagramError, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Uni,
    Tri,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: i64,
    pub kind: VertexKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: i64,
    pub ends: [i64; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    pub k: i64,
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {message}")]
pub struct ParseError {
    /// `line L, column C` for syntax errors, or the offending item.
    pub location: String,
    pub message: String,
}

impl ParseError {
    fn at(location: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        ParseError::at(
            format!("line {}, column {}", e.line(), e.column()),
            e.to_string(),
        )
    }
}

impl DiagramDoc {
    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents serialize")
    }

    pub fn to_diagram(&self) -> Result<Diagram, ParseError> {
        let k = u8::try_from(self.k)
            .ok()
            .filter(|&k| k >= 1)
            .ok_or_else(|| ParseError::at("k", format!("color count {} out of range", self.k)))?;
        let mut vindex = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if vindex.insert(v.id, i).is_some() {
                return Err(ParseError::at(format!("vertex {}", v.id), "duplicate vertex id"));
            }
        }
        // half-edges: edge e contributes 2e (first end) and 2e + 1 (second end)
        let mut eindex = HashMap::new();
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.vertices.len()];
        for (e, edge) in self.edges.iter().enumerate() {
            if eindex.insert(edge.id, e).is_some() {
                return Err(ParseError::at(format!("edge {}", edge.id), "duplicate edge id"));
            }
            for (side, end) in edge.ends.iter().enumerate() {
                let &v = vindex.get(end).ok_or_else(|| {
                    ParseError::at(
                        format!("edge {}", edge.id),
                        format!("dangling end: no vertex {end}"),
                    )
                })?;
                incident[v].push(2 * e + side);
            }
        }
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            let loc = || format!("vertex {}", v.id);
            let valence = incident[i].len();
            match v.kind {
                VertexKind::Uni => {
                    if valence != 1 {
                        return Err(ParseError::at(
                            loc(),
                            format!("univalent vertex has valence {valence}"),
                        ));
                    }
                    let c = v
                        .color
                        .ok_or_else(|| ParseError::at(loc(), "univalent vertex without color"))?;
                    if c < 1 || c > k as i64 {
                        return Err(ParseError::at(
                            loc(),
                            format!("color {c} out of range 1..={k}"),
                        ));
                    }
                    vertices.push(Vertex::Uni {
                        color: Color::new(c as u8),
                        half: incident[i][0],
                    });
                }
                VertexKind::Tri => {
                    if valence != 3 {
                        return Err(ParseError::at(
                            loc(),
                            format!("trivalent vertex has valence {valence}"),
                        ));
                    }
                    let rot = v
                        .rotation
                        .as_ref()
                        .ok_or_else(|| ParseError::at(loc(), "trivalent vertex without rotation"))?;
                    if rot.len() != 3 {
                        return Err(ParseError::at(loc(), "rotation must list 3 edges"));
                    }
                    let mut free = incident[i].clone();
                    let mut halves = [0usize; 3];
                    for (slot, eid) in rot.iter().enumerate() {
                        let &e = eindex.get(eid).ok_or_else(|| {
                            ParseError::at(loc(), format!("rotation names unknown edge {eid}"))
                        })?;
                        let pos = free.iter().position(|&h| h / 2 == e).ok_or_else(|| {
                            ParseError::at(loc(), format!("edge {eid} is not incident here"))
                        })?;
                        halves[slot] = free.swap_remove(pos);
                    }
                    vertices.push(Vertex::Tri { halves });
                }
            }
        }
        let partner = (0..2 * self.edges.len()).map(|h| h ^ 1).collect();
        Diagram::from_parts(k, vertices, partner).map_err(|e| match e {
            DiagramError::NoLeg { vertex } => ParseError::at(
                format!("vertex {}", self.vertices[vertex].id),
                "component has no univalent vertex",
            ),
            other => ParseError::at("document", other.to_string()),
        })
    }

    pub fn from_diagram(d: &Diagram) -> Self {
        let mut edge_of = vec![0i64; d.num_halves()];
        let mut edges = Vec::new();
        for h in 0..d.num_halves() {
            let p = d.partner(h);
            if h < p {
                let id = edges.len() as i64;
                edge_of[h] = id;
                edge_of[p] = id;
                edges.push(EdgeDoc {
                    id,
                    ends: [d.owner(h) as i64, d.owner(p) as i64],
                });
            }
        }
        let vertices = d
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, v)| match v {
                Vertex::Uni { color, .. } => VertexDoc {
                    id: i as i64,
                    kind: VertexKind::Uni,
                    color: Some(color.get() as i64),
                    rotation: None,
                },
                Vertex::Tri { halves } => VertexDoc {
                    id: i as i64,
                    kind: VertexKind::Tri,
                    color: None,
                    rotation: Some(halves.iter().map(|&h| edge_of[h]).collect()),
                },
            })
            .collect();
        DiagramDoc {
            k: d.k() as i64,
            vertices,
            edges,
        }
    }
}

impl Diagram {
    pub fn parse(text: &str) -> Result<Diagram, ParseError> {
        DiagramDoc::from_json(text)?.to_diagram()
    }

    pub fn to_json(&self) -> String {
        DiagramDoc::from_diagram(self).to_json()
    }
}
