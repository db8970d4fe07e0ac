//! Reduced `A`-labeled graphs (Stallings automata).
//!
//! A [`LabeledGraph`] is always connected, deterministic, codeterministic and
//! a core at its base vertex, and is stored in canonical numbering: vertices
//! are numbered in breadth-first order from the base (which is vertex `0`),
//! visiting at every vertex the labels in ascending order and, for each
//! label, the outgoing edge before the incoming one. Two graphs therefore
//! represent the same subgroup exactly when they compare equal.

mod fold;
mod io;
mod morphism;
mod schreier;

pub use fold::RawGraph;
pub use io::{EdgeJson, GraphJson};
pub use morphism::{find_morphism, GraphMorphism};
pub use schreier::{SchreierData, SpanningTreeStrategy};

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, Word};

/// A directed edge `from --label--> to`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Edge {
    pub from: usize,
    pub label: usize,
    pub to: usize,
}

impl Edge {
    pub fn new(from: usize, label: usize, to: usize) -> Self {
        Edge { from, label, to }
    }
}

/// Index of a subgroup in the free group.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Index {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(k) => write!(f, "{k}"),
            Index::Infinite => write!(f, "infinite"),
        }
    }
}

/// Canonical reduced labeled graph with base vertex `0`.
#[derive(Clone)]
pub struct LabeledGraph {
    alphabet: Alphabet,
    vertex_count: usize,
    edges: Vec<Edge>,
    out: Vec<Option<usize>>,
    inc: Vec<Option<usize>>,
}

impl LabeledGraph {
    /// The graph of the trivial subgroup: one vertex, no edges.
    pub fn trivial(alphabet: &Alphabet) -> Self {
        LabeledGraph::from_canonical(alphabet.clone(), 1, Vec::new())
    }

    /// Single vertex with a loop for every symbol; represents the whole group.
    pub fn bouquet(alphabet: &Alphabet) -> Self {
        let edges = (0..alphabet.len()).map(|l| Edge::new(0, l, 0)).collect();
        LabeledGraph::from_canonical(alphabet.clone(), 1, edges)
    }

    /// Stallings graph of the subgroup generated by `gens`.
    pub fn from_generators(gens: &[Word], alphabet: &Alphabet) -> Result<Self> {
        let mut raw = RawGraph::new(alphabet);
        for g in gens {
            g.check_alphabet(alphabet)?;
            raw.add_cycle(0, g);
        }
        Ok(raw.fold())
    }

    /// Validates an explicit reduced graph and returns its canonical form.
    pub fn from_edges(
        alphabet: &Alphabet,
        vertex_count: usize,
        base: usize,
        edges: &[Edge],
    ) -> Result<Self> {
        if base >= vertex_count {
            return Err(Error::InvalidGraph(format!("base {base} out of range")));
        }
        let n = alphabet.len();
        let mut degree = vec![0usize; vertex_count];
        for e in edges {
            if e.from >= vertex_count || e.to >= vertex_count || e.label >= n {
                return Err(Error::InvalidGraph(format!("edge {e:?} out of range")));
            }
            degree[e.from] += 1;
            degree[e.to] += 1;
        }
        let (out, inc) = adjacency(vertex_count, n, edges)?;
        if let Some(v) = (0..vertex_count).find(|&v| v != base && degree[v] < 2) {
            return Err(Error::InvalidGraph(format!("vertex {v} has valence below two")));
        }
        let g = canonicalize(alphabet, vertex_count, base, edges, &out, &inc);
        if g.vertex_count != vertex_count {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    /// Builds from edges that are already in canonical numbering.
    pub(crate) fn from_canonical(alphabet: Alphabet, vertex_count: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        let n = alphabet.len();
        let mut out = vec![None; vertex_count * n];
        let mut inc = vec![None; vertex_count * n];
        for e in &edges {
            out[e.from * n + e.label] = Some(e.to);
            inc[e.to * n + e.label] = Some(e.from);
        }
        LabeledGraph { alphabet, vertex_count, edges, out, inc }
    }

    /// Graph of the kernel of `F -> (Z/dZ)^n`: the Cayley graph of
    /// `(Z/dZ)^n` on the standard generators.
    pub fn cayley(d: usize, alphabet: &Alphabet) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("modulus must be at least 1".into()));
        }
        let n = alphabet.len();
        let count = u32::try_from(n)
            .ok()
            .and_then(|n| d.checked_pow(n))
            .filter(|&c| c <= 1 << 22)
            .ok_or_else(|| Error::InvalidParameter(format!("(Z/{d})^{n} is too large")))?;
        let mut edges = Vec::with_capacity(count * n);
        for v in 0..count {
            let mut stride = 1;
            for label in 0..n {
                let digit = (v / stride) % d;
                let to = if digit + 1 == d { v - digit * stride } else { v + stride };
                edges.push(Edge::new(v, label, to));
                stride *= d;
            }
        }
        LabeledGraph::from_edges(alphabet, count, 0, &edges)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn base(&self) -> usize {
        0
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted by `(from, label, to)`; positions are the edge ids.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edge(&self, v: usize, label: usize) -> Option<usize> {
        self.out[v * self.alphabet.len() + label]
    }

    pub fn in_edge(&self, v: usize, label: usize) -> Option<usize> {
        self.inc[v * self.alphabet.len() + label]
    }

    /// Follows one letter: forwards along an out-edge or backwards along an in-edge.
    pub fn step(&self, v: usize, letter: Letter) -> Option<usize> {
        if letter.inverse {
            self.in_edge(v, letter.symbol)
        } else {
            self.out_edge(v, letter.symbol)
        }
    }

    /// Id of the edge leaving `from` with `label`.
    pub fn edge_id(&self, from: usize, label: usize) -> Option<usize> {
        self.edges
            .binary_search_by(|e| (e.from, e.label).cmp(&(from, label)))
            .ok()
    }

    /// End vertex of the path labelled `w` starting at `start`, if it exists.
    pub fn trace_from(&self, start: usize, w: &Word) -> Option<usize> {
        w.letters().iter().try_fold(start, |v, &l| self.step(v, l))
    }

    /// Reduced words never backtrack in a folded graph, so membership is a
    /// single deterministic walk.
    pub fn member(&self, w: &Word) -> bool {
        w.check_alphabet(&self.alphabet).is_ok() && self.trace_from(0, w) == Some(0)
    }

    /// Number of free generators: `|E| - |V| + 1`.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertex_count
    }

    pub fn is_complete(&self) -> bool {
        self.out.iter().all(Option::is_some) && self.inc.iter().all(Option::is_some)
    }

    pub fn index(&self) -> Index {
        if !self.alphabet.is_empty() && self.is_complete() {
            Index::Finite(self.vertex_count)
        } else if self.alphabet.is_empty() {
            Index::Finite(1)
        } else {
            Index::Infinite
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.edges.is_empty()
    }

    /// Whether this graph represents the whole free group.
    pub fn is_whole_group(&self) -> bool {
        self.vertex_count == 1 && self.edges.len() == self.alphabet.len()
    }

    /// Number of edge endpoints at `v`; loops count twice.
    pub fn valence(&self, v: usize) -> usize {
        let n = self.alphabet.len();
        (0..n)
            .map(|l| {
                usize::from(self.out_edge(v, l).is_some()) + usize::from(self.in_edge(v, l).is_some())
            })
            .sum()
    }

    /// Schreier basis for the breadth-first spanning tree.
    pub fn generators(&self) -> Vec<Word> {
        self.schreier_bfs().basis_words()
    }

    pub fn schreier_bfs(&self) -> SchreierData {
        let tree = self.spanning_tree(SpanningTreeStrategy::Bfs);
        SchreierData::new(self, &tree).expect("breadth-first tree spans the graph")
    }

    pub(crate) fn key(&self) -> (&Alphabet, usize, &[Edge]) {
        (&self.alphabet, self.vertex_count, &self.edges)
    }
}

impl PartialEq for LabeledGraph {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for LabeledGraph {}

impl Hash for LabeledGraph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for LabeledGraph {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Smaller graphs first, then lexicographic on edges.
impl Ord for LabeledGraph {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.vertex_count, self.edges.len(), &self.edges, &self.alphabet).cmp(&(
            other.vertex_count,
            other.edges.len(),
            &other.edges,
            &other.alphabet,
        ))
    }
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabeledGraph({} vertices; ", self.vertex_count)?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}->{}", self.alphabet.symbol(e.label), e.from, e.to)?;
        }
        write!(f, ")")
    }
}

/// Out/in transition tables; fails on a determinism or codeterminism violation.
fn adjacency(
    vertex_count: usize,
    n: usize,
    edges: &[Edge],
) -> Result<(Vec<Option<usize>>, Vec<Option<usize>>)> {
    let mut out = vec![None; vertex_count * n];
    let mut inc = vec![None; vertex_count * n];
    for e in edges {
        if out[e.from * n + e.label].replace(e.to).is_some() {
            return Err(Error::InvalidGraph(format!("not deterministic at vertex {}", e.from)));
        }
        if inc[e.to * n + e.label].replace(e.from).is_some() {
            return Err(Error::InvalidGraph(format!("not codeterministic at vertex {}", e.to)));
        }
    }
    Ok((out, inc))
}

/// Breadth-first renumbering from `base`. Vertices not reachable from the
/// base are dropped together with their edges.
fn canonicalize(
    alphabet: &Alphabet,
    vertex_count: usize,
    base: usize,
    edges: &[Edge],
    out: &[Option<usize>],
    inc: &[Option<usize>],
) -> LabeledGraph {
    let n = alphabet.len();
    let mut number = vec![usize::MAX; vertex_count];
    let mut queue = VecDeque::from([base]);
    number[base] = 0;
    let mut next = 1;
    while let Some(v) = queue.pop_front() {
        for label in 0..n {
            for w in [out[v * n + label], inc[v * n + label]].into_iter().flatten() {
                if number[w] == usize::MAX {
                    number[w] = next;
                    next += 1;
                    queue.push_back(w);
                }
            }
        }
    }
    let renumbered = edges
        .iter()
        .filter(|e| number[e.from] != usize::MAX)
        .map(|e| Edge::new(number[e.from], e.label, number[e.to]))
        .collect();
    LabeledGraph::from_canonical(alphabet.clone(), next, renumbered)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::letters(2).unwrap()
    }

    fn graph(gens: &str) -> LabeledGraph {
        let a = ab();
        LabeledGraph::from_generators(&a.parse_list(gens).unwrap(), &a).unwrap()
    }

    #[test]
    fn three_vertex_graph() {
        let g = graph("baB,bbA");
        let expected = LabeledGraph::from_edges(
            &ab(),
            3,
            0,
            &[Edge::new(0, 1, 1), Edge::new(1, 0, 1), Edge::new(1, 1, 2), Edge::new(0, 0, 2)],
        )
        .unwrap();
        assert_eq!(g, expected);
        assert_eq!(g.rank(), 2);
    }

    #[test]
    fn canonical_numbering_is_label_major() {
        // base: a-out discovers 1, b-out discovers 2
        let g = graph("baB,bbA");
        assert_eq!(g.out_edge(0, 0), Some(1));
        assert_eq!(g.out_edge(0, 1), Some(2));
    }

    #[test]
    fn trivial_and_empty() {
        let g = graph("");
        assert_eq!(g, LabeledGraph::trivial(&ab()));
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.rank(), 0);
        assert_eq!(g.index(), Index::Infinite);
        assert!(g.member(&Word::identity()));
        assert_eq!(graph("aA,,bB"), g);
    }

    #[test]
    fn membership() {
        let g = graph("baB,bbA");
        let a = ab();
        assert!(g.member(&a.parse("baB").unwrap()));
        assert!(g.member(&a.parse("baaB").unwrap()));
        assert!(g.member(&Word::identity()));
        assert!(!g.member(&a.parse("a").unwrap()));
        assert!(!g.member(&Alphabet::letters(3).unwrap().parse("c").unwrap()));
    }

    #[test]
    fn six_vertex_rank_and_index() {
        let g = graph("abAb,BAbAb,AB,BabbbAb");
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 9);
        assert_eq!(g.rank(), 4);
        assert_eq!(g.index(), Index::Infinite);
    }

    #[test]
    fn cayley_graphs() {
        let a = ab();
        let c1 = LabeledGraph::cayley(1, &a).unwrap();
        assert_eq!(c1, LabeledGraph::bouquet(&a));
        assert!(c1.is_whole_group());
        let c2 = LabeledGraph::cayley(2, &a).unwrap();
        assert_eq!((c2.vertex_count(), c2.edge_count()), (4, 8));
        assert_eq!(c2.index(), Index::Finite(4));
        assert_eq!(c2.rank(), 5);
        assert!(c2.member(&a.parse("abAB").unwrap()));
        assert!(!c2.member(&a.parse("ab").unwrap()));
        let c3 = LabeledGraph::cayley(3, &a).unwrap();
        assert_eq!((c3.rank(), c3.index()), (10, Index::Finite(9)));
    }

    #[test]
    fn from_edges_validation() {
        let a = ab();
        let dup = [Edge::new(0, 0, 0), Edge::new(0, 0, 1), Edge::new(1, 1, 1)];
        assert!(LabeledGraph::from_edges(&a, 2, 0, &dup).is_err());
        let hanging = [Edge::new(0, 0, 0), Edge::new(0, 1, 1)];
        assert!(LabeledGraph::from_edges(&a, 2, 0, &hanging).is_err());
        let disconnected = [Edge::new(1, 0, 1), Edge::new(1, 1, 1)];
        assert!(LabeledGraph::from_edges(&a, 2, 0, &disconnected).is_err());
    }

    #[test]
    fn canonical_form_independent_of_input_numbering() {
        let a = ab();
        // a-cycle of length 3 through the base, given in two numberings
        let g1 = LabeledGraph::from_edges(
            &a,
            3,
            0,
            &[Edge::new(0, 0, 1), Edge::new(1, 0, 2), Edge::new(2, 0, 0)],
        )
        .unwrap();
        let g2 = LabeledGraph::from_edges(
            &a,
            3,
            2,
            &[Edge::new(2, 0, 0), Edge::new(0, 0, 1), Edge::new(1, 0, 2)],
        )
        .unwrap();
        assert_eq!(g1, g2);
        assert_eq!(g1, graph("aaa"));
    }
}
