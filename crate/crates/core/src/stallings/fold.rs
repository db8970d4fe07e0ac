use std::collections::hash_map::Entry;
use std::collections::HashMap;

use super::{canonicalize, Edge, LabeledGraph};
use crate::words::{Alphabet, Word};

/// A mutable labeled graph that may violate determinism, codeterminism and
/// the core condition. [`RawGraph::fold`] turns it into a [`LabeledGraph`].
#[derive(Clone, Debug)]
pub struct RawGraph {
    alphabet: Alphabet,
    vertex_count: usize,
    base: usize,
    edges: Vec<Edge>,
}

impl RawGraph {
    /// A single base vertex `0` and no edges.
    pub fn new(alphabet: &Alphabet) -> Self {
        RawGraph { alphabet: alphabet.clone(), vertex_count: 1, base: 0, edges: Vec::new() }
    }

    /// Copies a reduced graph (base stays `0`).
    pub fn from_graph(g: &LabeledGraph) -> Self {
        RawGraph {
            alphabet: g.alphabet().clone(),
            vertex_count: g.vertex_count(),
            base: 0,
            edges: g.edges().to_vec(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn set_base(&mut self, base: usize) {
        assert!(base < self.vertex_count);
        self.base = base;
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edges_mut(&mut self) -> &mut Vec<Edge> {
        &mut self.edges
    }

    pub fn add_vertex(&mut self) -> usize {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    pub fn add_edge(&mut self, from: usize, label: usize, to: usize) {
        assert!(from < self.vertex_count && to < self.vertex_count);
        assert!(label < self.alphabet.len());
        self.edges.push(Edge::new(from, label, to));
    }

    /// Adds a subdivided path from `from` to `to` reading `w`; inverse
    /// letters become edges in the reverse direction. An empty `w` requires
    /// `from == to`.
    pub fn add_path(&mut self, from: usize, w: &Word, to: usize) {
        let letters = w.letters();
        if letters.is_empty() {
            assert_eq!(from, to, "empty path must be closed");
            return;
        }
        let mut current = from;
        for (i, l) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() { to } else { self.add_vertex() };
            if l.inverse {
                self.add_edge(next, l.symbol, current);
            } else {
                self.add_edge(current, l.symbol, next);
            }
            current = next;
        }
    }

    /// Adds a closed subdivided circle at `at` reading `w`.
    pub fn add_cycle(&mut self, at: usize, w: &Word) {
        self.add_path(at, w, at);
    }

    /// Glues a copy of `g` at this graph's base and returns the vertex map.
    pub fn add_wedge(&mut self, g: &LabeledGraph) -> Vec<usize> {
        let map: Vec<usize> = (0..g.vertex_count())
            .map(|v| if v == g.base() { self.base } else { self.add_vertex() })
            .collect();
        for e in g.edges() {
            self.add_edge(map[e.from], e.label, map[e.to]);
        }
        map
    }

    /// Identifies equal-label edges sharing an origin or a terminus until
    /// none remain, prunes valence-one vertices other than the base, and
    /// returns the canonical result. The graph must be connected.
    pub fn fold(self) -> LabeledGraph {
        let RawGraph { alphabet, vertex_count, base, edges } = self;
        let n = alphabet.len();
        let mut uf = UnionFind::new(vertex_count);
        loop {
            let mut merged = false;
            let mut out: HashMap<(usize, usize), usize> = HashMap::new();
            let mut inc: HashMap<(usize, usize), usize> = HashMap::new();
            for e in &edges {
                let (f, t) = (uf.find(e.from), uf.find(e.to));
                match out.entry((f, e.label)) {
                    Entry::Occupied(o) => merged |= uf.union(*o.get(), t),
                    Entry::Vacant(v) => {
                        v.insert(t);
                    }
                }
                let t = uf.find(e.to);
                let f = uf.find(e.from);
                match inc.entry((t, e.label)) {
                    Entry::Occupied(o) => merged |= uf.union(*o.get(), f),
                    Entry::Vacant(v) => {
                        v.insert(f);
                    }
                }
            }
            if !merged {
                break;
            }
        }

        let mut folded: Vec<Edge> = edges
            .iter()
            .map(|e| Edge::new(uf.find(e.from), e.label, uf.find(e.to)))
            .collect();
        folded.sort_unstable();
        folded.dedup();
        let base = uf.find(base);

        // prune hanging trees
        let mut degree = vec![0usize; vertex_count];
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
        for (i, e) in folded.iter().enumerate() {
            degree[e.from] += 1;
            degree[e.to] += 1;
            incident[e.from].push(i);
            if e.to != e.from {
                incident[e.to].push(i);
            }
        }
        let mut alive = vec![true; folded.len()];
        let mut stack: Vec<usize> =
            (0..vertex_count).filter(|&v| v != base && degree[v] == 1).collect();
        while let Some(v) = stack.pop() {
            if degree[v] != 1 {
                continue;
            }
            let Some(&i) = incident[v].iter().find(|&&i| alive[i]) else { continue };
            alive[i] = false;
            let e = folded[i];
            let other = if e.from == v { e.to } else { e.from };
            degree[v] = 0;
            degree[other] -= 1;
            if other != base && degree[other] == 1 {
                stack.push(other);
            }
        }
        let core: Vec<Edge> =
            folded.into_iter().zip(alive).filter_map(|(e, a)| a.then_some(e)).collect();

        let mut out = vec![None; vertex_count * n];
        let mut inc = vec![None; vertex_count * n];
        for e in &core {
            out[e.from * n + e.label] = Some(e.to);
            inc[e.to * n + e.label] = Some(e.from);
        }
        canonicalize(&alphabet, vertex_count, base, &core, &out, &inc)
    }
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        match self.rank[a].cmp(&self.rank[b]) {
            std::cmp::Ordering::Less => self.parent[a] = b,
            std::cmp::Ordering::Greater => self.parent[b] = a,
            std::cmp::Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
            }
        }
        true
    }
}
