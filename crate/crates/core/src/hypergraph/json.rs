//! Canonical JSON interchange:
//! `{"k": 3, "n": 5, "edges": [[0,1,2], ...], "colors": ["R", ...]}`.
//! Colours are aligned with the edge list; on output edges are sorted.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Color, ColoredHypergraph, Edge, Hypergraph, Vertex};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub k: usize,
    pub n: usize,
    pub edges: Vec<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<String>>,
}

impl GraphDocument {
    pub fn from_hypergraph(h: &Hypergraph) -> Self {
        GraphDocument {
            k: h.k(),
            n: h.n(),
            edges: h.edges().iter().map(Edge::to_vec).collect(),
            colors: None,
        }
    }

    pub fn from_colored(g: &ColoredHypergraph) -> Self {
        let mut doc = Self::from_hypergraph(g.base());
        doc.colors = Some(g.colors().iter().map(|c| c.symbol().to_string()).collect());
        doc
    }

    pub fn to_hypergraph(&self) -> Result<Hypergraph> {
        Hypergraph::new(self.k, self.n, &self.edges)
    }

    pub fn to_colored(&self) -> Result<ColoredHypergraph> {
        let symbols = self.colors.as_deref().unwrap_or(&[]);
        if symbols.len() != self.edges.len() {
            return Err(Error::MissingColors {
                found: symbols.len(),
                expected: self.edges.len(),
            });
        }
        let base = self.to_hypergraph()?;
        let mut by_edge: HashMap<Edge, Color> = HashMap::with_capacity(symbols.len());
        for (raw, symbol) in self.edges.iter().zip(symbols) {
            by_edge.insert(Edge::new(raw.iter().copied()), Color::from_symbol(symbol)?);
        }
        let colors = base.edges().iter().map(|e| by_edge[e]).collect();
        ColoredHypergraph::new(base, colors)
    }
}

impl Serialize for ColoredHypergraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphDocument::from_colored(self).serialize(s)
    }
}

impl Serialize for Hypergraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphDocument::from_hypergraph(self).serialize(s)
    }
}

pub fn parse_document(text: &str) -> Result<GraphDocument> {
    serde_json::from_str(text).map_err(|e| Error::MalformedJson(e.to_string()))
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    parse_document(text)?.to_hypergraph()
}

pub fn parse_colored(text: &str) -> Result<ColoredHypergraph> {
    parse_document(text)?.to_colored()
}

pub fn serialize_hypergraph(h: &Hypergraph) -> String {
    serde_json::to_string(&GraphDocument::from_hypergraph(h)).expect("graph documents serialize")
}

pub fn serialize_colored(g: &ColoredHypergraph) -> String {
    serde_json::to_string(&GraphDocument::from_colored(g)).expect("graph documents serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::random_colored_complete;
    use crate::rational::ratio;

    #[test]
    fn round_trips() {
        for seed in 0..10 {
            let g = random_colored_complete(3, 7, &ratio(1, 2), seed).unwrap();
            let text = serialize_colored(&g);
            assert_eq!(parse_colored(&text).unwrap(), g);
            assert_eq!(serialize_colored(&parse_colored(&text).unwrap()), text);
        }
        let h = Hypergraph::new(4, 6, [[0, 1, 2, 3], [2, 3, 4, 5]]).unwrap();
        assert_eq!(parse_hypergraph(&serialize_hypergraph(&h)).unwrap(), h);
    }

    #[test]
    fn colours_follow_their_edges_through_sorting() {
        let text = r#"{"k":3,"n":5,"edges":[[2,3,4],[0,1,2]],"colors":["B","R"]}"#;
        let g = parse_colored(text).unwrap();
        assert_eq!(g.color_of(&Edge::from([0, 1, 2])), Some(Color::Red));
        assert_eq!(g.color_of(&Edge::from([2, 3, 4])), Some(Color::Blue));
    }

    #[test]
    fn distinct_error_codes() {
        let code = |t: &str| parse_colored(t).unwrap_err().code();
        assert_eq!(code("{\"k\":3"), "malformed-json");
        assert_eq!(code(r#"{"k":3,"n":4,"edges":[[0,1]],"colors":["R"]}"#), "bad-arity");
        assert_eq!(
            code(r#"{"k":3,"n":4,"edges":[[0,1,2],[2,0,1]],"colors":["R","B"]}"#),
            "duplicate-edge"
        );
        assert_eq!(code(r#"{"k":3,"n":4,"edges":[[0,1,2]]}"#), "missing-colors");
        assert_eq!(code(r#"{"k":1,"n":4,"edges":[],"colors":[]}"#), "wrong-uniformity");
        assert_eq!(code(r#"{"k":3,"n":4,"edges":[[0,1,2]],"colors":["G"]}"#), "bad-color");
    }
}
