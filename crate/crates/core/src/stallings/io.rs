use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{Edge, LabeledGraph};
use crate::error::{Error, Result};
use crate::words::Alphabet;

/// Graph interchange format:
/// `{"alphabet": ["a","b"], "vertices": N, "base": 0, "edges": [{"from":i,"label":"a","to":j}, ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub alphabet: Vec<String>,
    pub vertices: usize,
    pub base: usize,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: usize,
    pub label: String,
    pub to: usize,
}

impl From<&LabeledGraph> for GraphJson {
    fn from(g: &LabeledGraph) -> Self {
        GraphJson {
            alphabet: g.alphabet().symbols().to_vec(),
            vertices: g.vertex_count(),
            base: g.base(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeJson {
                    from: e.from,
                    label: g.alphabet().symbol(e.label).to_string(),
                    to: e.to,
                })
                .collect(),
        }
    }
}

impl TryFrom<&GraphJson> for LabeledGraph {
    type Error = Error;

    fn try_from(j: &GraphJson) -> Result<Self> {
        let alphabet = Alphabet::new(j.alphabet.iter().cloned())?;
        let edges = j
            .edges
            .iter()
            .map(|e| {
                alphabet
                    .index_of(&e.label)
                    .map(|l| Edge::new(e.from, l, e.to))
                    .ok_or_else(|| Error::UnknownSymbol(e.label.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        LabeledGraph::from_edges(&alphabet, j.vertices, j.base, &edges)
    }
}

impl LabeledGraph {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GraphJson::from(self)).expect("graph serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let j: GraphJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidGraph(e.to_string()))?;
        LabeledGraph::try_from(&j)
    }

    /// Graphviz rendering; the base vertex is double-circled.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph stallings {\n  rankdir=LR;\n  node [shape=circle];\n");
        for v in 0..self.vertex_count() {
            if v == self.base() {
                let _ = writeln!(s, "  {v} [shape=doublecircle];");
            } else {
                let _ = writeln!(s, "  {v};");
            }
        }
        for e in self.edges() {
            let _ = writeln!(
                s,
                "  {} -> {} [label=\"{}\"];",
                e.from,
                e.to,
                self.alphabet().symbol(e.label)
            );
        }
        s.push_str("}\n");
        s
    }
}
