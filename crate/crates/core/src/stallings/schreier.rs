use std::collections::VecDeque;

use super::LabeledGraph;
use crate::error::{Error, Result};
use crate::words::{Letter, Word};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum SpanningTreeStrategy {
    /// Tree edges are the ones that discover each vertex in canonical order.
    #[default]
    Bfs,
    /// Depth-first discovery, labels ascending, outgoing before incoming.
    Dfs,
}

impl LabeledGraph {
    /// Spanning tree as a sorted list of edge ids.
    pub fn spanning_tree(&self, strategy: SpanningTreeStrategy) -> Vec<usize> {
        let n = self.alphabet().len();
        let mut seen = vec![false; self.vertex_count()];
        seen[0] = true;
        let mut tree = Vec::with_capacity(self.vertex_count() - 1);
        let mut frontier = VecDeque::from([0]);
        let pop = |f: &mut VecDeque<usize>| match strategy {
            SpanningTreeStrategy::Bfs => f.pop_front(),
            SpanningTreeStrategy::Dfs => f.pop_back(),
        };
        while let Some(v) = pop(&mut frontier) {
            let mut discovered = Vec::new();
            for label in 0..n {
                if let Some(w) = self.out_edge(v, label) {
                    if !seen[w] {
                        seen[w] = true;
                        tree.push(self.edge_id(v, label).expect("out edge"));
                        discovered.push(w);
                    }
                }
                if let Some(u) = self.in_edge(v, label) {
                    if !seen[u] {
                        seen[u] = true;
                        tree.push(self.edge_id(u, label).expect("in edge"));
                        discovered.push(u);
                    }
                }
            }
            if strategy == SpanningTreeStrategy::Dfs {
                discovered.reverse();
            }
            frontier.extend(discovered);
        }
        tree.sort_unstable();
        tree
    }

    /// Every spanning tree, each as a sorted list of edge ids. Exponential;
    /// meant for small graphs.
    pub fn spanning_trees(&self) -> Vec<Vec<usize>> {
        fn go(
            g: &LabeledGraph,
            next: usize,
            chosen: &mut Vec<usize>,
            parent: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            let need = g.vertex_count() - 1;
            if chosen.len() == need {
                out.push(chosen.clone());
                return;
            }
            if g.edge_count() - next < need - chosen.len() {
                return;
            }
            let e = g.edges()[next];
            let (ra, rb) = (root(parent, e.from), root(parent, e.to));
            if ra != rb {
                let saved = parent.clone();
                parent[ra] = rb;
                chosen.push(next);
                go(g, next + 1, chosen, parent, out);
                chosen.pop();
                *parent = saved;
            }
            go(g, next + 1, chosen, parent, out);
        }
        fn root(parent: &[usize], mut x: usize) -> usize {
            while parent[x] != x {
                x = parent[x];
            }
            x
        }
        let mut out = Vec::new();
        let mut parent: Vec<usize> = (0..self.vertex_count()).collect();
        go(self, 0, &mut Vec::new(), &mut parent, &mut out);
        out
    }
}

/// Schreier transversal and basis attached to a spanning tree.
#[derive(Clone, Debug)]
pub struct SchreierData {
    graph: LabeledGraph,
    in_tree: Vec<bool>,
    transversal: Vec<Word>,
    /// `(edge id, basis word)` for every non-tree edge, in edge-id order.
    basis: Vec<(usize, Word)>,
    /// Position in `basis` of each non-tree edge.
    basis_index: Vec<Option<usize>>,
}

impl SchreierData {
    pub fn new(graph: &LabeledGraph, tree: &[usize]) -> Result<Self> {
        let v_count = graph.vertex_count();
        let mut in_tree = vec![false; graph.edge_count()];
        for &id in tree {
            if id >= graph.edge_count() || std::mem::replace(&mut in_tree[id], true) {
                return Err(Error::NotASpanningTree);
            }
        }
        if tree.len() + 1 != v_count {
            return Err(Error::NotASpanningTree);
        }

        // walk the tree from the base
        let mut transversal: Vec<Option<Word>> = vec![None; v_count];
        transversal[0] = Some(Word::identity());
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); v_count];
        for &id in tree {
            let e = graph.edges()[id];
            adjacency[e.from].push(id);
            adjacency[e.to].push(id);
        }
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            let here = transversal[v].clone().expect("visited");
            for &id in &adjacency[v] {
                let e = graph.edges()[id];
                let (w, letter) = if e.from == v {
                    (e.to, Letter::new(e.label))
                } else {
                    (e.from, Letter::new(e.label).inverse())
                };
                if transversal[w].is_none() {
                    transversal[w] = Some(&here * &Word::from_letters([letter]));
                    queue.push_back(w);
                }
            }
        }
        let transversal: Vec<Word> =
            transversal.into_iter().collect::<Option<_>>().ok_or(Error::NotASpanningTree)?;

        let mut basis = Vec::new();
        let mut basis_index = vec![None; graph.edge_count()];
        for (id, e) in graph.edges().iter().enumerate() {
            if !in_tree[id] {
                let w = &(&transversal[e.from] * &Word::generator(e.label))
                    * &transversal[e.to].inverse();
                basis_index[id] = Some(basis.len());
                basis.push((id, w));
            }
        }
        Ok(SchreierData { graph: graph.clone(), in_tree, transversal, basis, basis_index })
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn tree(&self) -> Vec<usize> {
        (0..self.in_tree.len()).filter(|&i| self.in_tree[i]).collect()
    }

    pub fn is_tree_edge(&self, id: usize) -> bool {
        self.in_tree[id]
    }

    /// Transversal word of each vertex.
    pub fn transversal(&self) -> &[Word] {
        &self.transversal
    }

    pub fn basis(&self) -> &[(usize, Word)] {
        &self.basis
    }

    pub fn basis_words(&self) -> Vec<Word> {
        self.basis.iter().map(|(_, w)| w.clone()).collect()
    }

    /// Position in [`SchreierData::basis`] of a non-tree edge.
    pub fn basis_position(&self, edge_id: usize) -> Option<usize> {
        self.basis_index[edge_id]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;
    use std::collections::BTreeSet;

    fn ab() -> Alphabet {
        Alphabet::letters(2).unwrap()
    }

    fn words(s: &str) -> BTreeSet<Word> {
        ab().parse_list(s).unwrap().into_iter().collect()
    }

    #[test]
    fn cayley_two_with_given_tree() {
        let a = ab();
        let g = LabeledGraph::cayley(2, &a).unwrap();
        // canonical ids: 0 = 00, 1 = 10, 2 = 01, 3 = 11
        let id = |f, l, t| g.edges().iter().position(|e| (e.from, e.label, e.to) == (f, l, t)).unwrap();
        let tree = vec![id(0, 0, 1), id(0, 1, 2), id(1, 1, 3)];
        let s = SchreierData::new(&g, &tree).unwrap();
        let t: BTreeSet<Word> = s.transversal().iter().cloned().collect();
        assert_eq!(t, words(",a,b,ab"));
        assert_eq!(s.basis_words().into_iter().collect::<BTreeSet<_>>(), words("aa,baBA,abaB,bb,abbA"));
        assert!(s.basis_words().iter().all(|w| g.member(w)));
        assert_eq!(g.spanning_tree(SpanningTreeStrategy::Bfs), {
            let mut t = tree.clone();
            t.sort();
            t
        });
    }

    #[test]
    fn single_loop() {
        let a = ab();
        let g = LabeledGraph::from_generators(&[a.parse("a").unwrap()], &a).unwrap();
        let s = g.schreier_bfs();
        assert_eq!(s.transversal(), &[Word::identity()]);
        assert_eq!(s.basis_words(), vec![a.parse("a").unwrap()]);
    }

    #[test]
    fn rejects_non_trees() {
        let g = LabeledGraph::cayley(2, &ab()).unwrap();
        assert_eq!(SchreierData::new(&g, &[0, 1]).unwrap_err(), Error::NotASpanningTree);
        assert_eq!(SchreierData::new(&g, &[0, 0, 1]).unwrap_err(), Error::NotASpanningTree);
        // three edges around a cycle 0-1-3-2? pick a cycle: a-edges 0->1 and 1->0 plus one more
        let cyc: Vec<usize> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.label == 0 && (e.from == 0 || e.from == 1))
            .map(|(i, _)| i)
            .chain([g.edge_id(2, 0).unwrap()])
            .collect();
        assert_eq!(SchreierData::new(&g, &cyc).unwrap_err(), Error::NotASpanningTree);
    }

    #[test]
    fn spanning_tree_count_of_cayley_two() {
        // Kirchhoff: the underlying multigraph of Cay((Z/2)^2) is a 4-cycle with doubled edges: 4 * 2^3 = 32
        let g = LabeledGraph::cayley(2, &ab()).unwrap();
        let trees = g.spanning_trees();
        assert_eq!(trees.len(), 32);
        for t in &trees {
            let s = SchreierData::new(&g, t).unwrap();
            assert_eq!(s.basis().len(), g.rank());
        }
        let dfs = g.spanning_tree(SpanningTreeStrategy::Dfs);
        assert!(trees.contains(&dfs));
    }
}
