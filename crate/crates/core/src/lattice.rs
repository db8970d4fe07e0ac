//! Lattice operations on subgroup graphs: intersection (pullback), join,
//! overgroup fringe, and change of basis into a subgroup's Schreier basis.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::stallings::{find_morphism, GraphMorphism, LabeledGraph, RawGraph, SchreierData};
use crate::words::{Alphabet, Letter, Word};

fn same_alphabet(g1: &LabeledGraph, g2: &LabeledGraph) -> Result<()> {
    if g1.alphabet() == g2.alphabet() {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch { expected: g1.alphabet().len(), found: g2.alphabet().len() })
    }
}

/// Graph of `L(g1) ∩ L(g2)`: the component of `(base, base)` in the product
/// graph, pruned to its core.
pub fn intersect(g1: &LabeledGraph, g2: &LabeledGraph) -> Result<LabeledGraph> {
    same_alphabet(g1, g2)?;
    let n = g1.alphabet().len();
    let mut raw = RawGraph::new(g1.alphabet());
    let mut id: HashMap<(usize, usize), usize> = HashMap::from([((0, 0), 0)]);
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    while let Some((u, v)) = queue.pop_front() {
        let here = id[&(u, v)];
        for label in 0..n {
            if let (Some(u2), Some(v2)) = (g1.out_edge(u, label), g2.out_edge(v, label)) {
                let there = *id.entry((u2, v2)).or_insert_with(|| {
                    queue.push_back((u2, v2));
                    raw.add_vertex()
                });
                raw.add_edge(here, label, there);
            }
            // reached through an in-edge; the edge itself is added from its source
            if let (Some(u2), Some(v2)) = (g1.in_edge(u, label), g2.in_edge(v, label)) {
                id.entry((u2, v2)).or_insert_with(|| {
                    queue.push_back((u2, v2));
                    raw.add_vertex()
                });
            }
        }
    }
    Ok(raw.fold())
}

/// Graph of the subgroup generated by `L(g1) ∪ L(g2)`.
pub fn join(g1: &LabeledGraph, g2: &LabeledGraph) -> Result<LabeledGraph> {
    same_alphabet(g1, g2)?;
    let mut raw = RawGraph::from_graph(g1);
    raw.add_wedge(g2);
    Ok(raw.fold())
}

/// Join of every graph in `graphs`; `None` when empty.
pub fn join_all<'a>(graphs: impl IntoIterator<Item = &'a LabeledGraph>) -> Result<Option<LabeledGraph>> {
    let mut iter = graphs.into_iter();
    let Some(first) = iter.next() else { return Ok(None) };
    let mut raw = RawGraph::from_graph(first);
    for g in iter {
        same_alphabet(first, g)?;
        raw.add_wedge(g);
    }
    Ok(Some(raw.fold()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FringeConfig {
    /// Largest origin accepted for exhaustive enumeration.
    pub max_vertices: usize,
    /// Largest number of overgroups enumerated before giving up.
    pub max_members: usize,
}

impl Default for FringeConfig {
    fn default() -> Self {
        FringeConfig { max_vertices: 12, max_members: 20_000 }
    }
}

#[derive(Clone, Debug)]
pub struct FringeMember {
    pub graph: LabeledGraph,
    /// Surjective morphism from the origin.
    pub witness: GraphMorphism,
}

/// The overgroups of a subgroup: every reduced graph that is the image of a
/// surjective morphism from the origin graph.
#[derive(Clone, Debug)]
pub struct Fringe {
    pub origin: LabeledGraph,
    /// In discovery order; the origin comes first.
    pub members: Vec<FringeMember>,
}

impl Fringe {
    pub fn contains(&self, g: &LabeledGraph) -> bool {
        self.members.iter().any(|m| &m.graph == g)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn graphs(&self) -> impl Iterator<Item = &LabeledGraph> {
        self.members.iter().map(|m| &m.graph)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.members
                .iter()
                .map(|m| {
                    serde_json::json!({
                        "graph": m.graph.to_json(),
                        "vertex_map": m.witness.vertex_map,
                    })
                })
                .collect(),
        )
    }
}

/// Enumerates the fringe by merging vertex pairs and folding, breadth first,
/// deduplicating on canonical form.
pub fn fringe(origin: &LabeledGraph, config: &FringeConfig) -> Result<Fringe> {
    if origin.vertex_count() > config.max_vertices {
        return Err(Error::FringeCapExceeded { cap: config.max_vertices });
    }
    let mut seen: HashSet<LabeledGraph> = HashSet::from([origin.clone()]);
    let mut order = vec![origin.clone()];
    let mut queue = VecDeque::from([origin.clone()]);
    while let Some(g) = queue.pop_front() {
        for u in 0..g.vertex_count() {
            for v in u + 1..g.vertex_count() {
                let q = merge_vertices(&g, u, v);
                if seen.insert(q.clone()) {
                    if seen.len() > config.max_members {
                        return Err(Error::FringeCapExceeded { cap: config.max_members });
                    }
                    order.push(q.clone());
                    queue.push_back(q);
                }
            }
        }
    }
    let members = order
        .into_iter()
        .map(|graph| {
            let witness = find_morphism(origin, &graph)?
                .filter(|m| m.surjective)
                .ok_or_else(|| {
                    Error::CertificateFailure("fringe member is not a surjective image".into())
                })?;
            Ok(FringeMember { graph, witness })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Fringe { origin: origin.clone(), members })
}

/// Identifies vertices `u < v` and folds.
pub fn merge_vertices(g: &LabeledGraph, u: usize, v: usize) -> LabeledGraph {
    let mut raw = RawGraph::from_graph(g);
    for e in raw.edges_mut() {
        if e.from == v {
            e.from = u;
        }
        if e.to == v {
            e.to = u;
        }
    }
    raw.fold()
}

/// Identification of a subgroup `K` with the free group on its Schreier basis.
#[derive(Clone, Debug)]
pub struct BasisDictionary {
    ambient: SchreierData,
    symbols: Alphabet,
    to_ambient: Vec<Word>,
}

impl BasisDictionary {
    /// Uses the breadth-first spanning tree; symbols are `x1, x2, ...` in
    /// non-tree edge order.
    pub fn new(k: &LabeledGraph) -> Self {
        BasisDictionary::from_schreier(k.schreier_bfs())
    }

    pub fn from_schreier(ambient: SchreierData) -> Self {
        let to_ambient = ambient.basis_words();
        let symbols = Alphabet::indexed("x", to_ambient.len());
        BasisDictionary { ambient, symbols, to_ambient }
    }

    pub fn ambient(&self) -> &SchreierData {
        &self.ambient
    }

    pub fn ambient_graph(&self) -> &LabeledGraph {
        self.ambient.graph()
    }

    pub fn symbols(&self) -> &Alphabet {
        &self.symbols
    }

    pub fn to_ambient(&self) -> &[Word] {
        &self.to_ambient
    }

    /// Writes a member of `K` as a word in the basis symbols.
    pub fn rewrite(&self, w: &Word) -> Result<Word> {
        let g = self.ambient.graph();
        w.check_alphabet(g.alphabet())?;
        let mut v = g.base();
        let mut out = Vec::new();
        for &l in w.letters() {
            let (edge, next) = if l.inverse {
                let u = g.in_edge(v, l.symbol).ok_or(Error::NotAMember)?;
                (g.edge_id(u, l.symbol).expect("in edge"), u)
            } else {
                let t = g.out_edge(v, l.symbol).ok_or(Error::NotAMember)?;
                (g.edge_id(v, l.symbol).expect("out edge"), t)
            };
            if let Some(pos) = self.ambient.basis_position(edge) {
                out.push(Letter { symbol: pos, inverse: l.inverse });
            }
            v = next;
        }
        if v != g.base() {
            return Err(Error::NotAMember);
        }
        Ok(Word::from_letters(out))
    }

    /// Substitutes basis words back: the image of a word in the symbols.
    pub fn expand(&self, w: &Word) -> Word {
        w.letters().iter().fold(Word::identity(), |acc, l| {
            let image = &self.to_ambient[l.symbol];
            if l.inverse {
                &acc * &image.inverse()
            } else {
                &acc * image
            }
        })
    }

    /// Image of a subgroup graph over the symbols under `F(symbols) ≅ K ⊆ F(A)`.
    pub fn blow_up(&self, g: &LabeledGraph) -> Result<LabeledGraph> {
        if g.alphabet() != &self.symbols {
            return Err(Error::AlphabetMismatch {
                expected: self.symbols.len(),
                found: g.alphabet().len(),
            });
        }
        let mut raw = RawGraph::new(self.ambient.graph().alphabet());
        for _ in 1..g.vertex_count() {
            raw.add_vertex();
        }
        for e in g.edges() {
            raw.add_path(e.from, &self.to_ambient[e.label], e.to);
        }
        Ok(raw.fold())
    }

    /// Graph over the symbols of a subgroup `H ≤ K` given by its graph over `A`.
    pub fn restrict(&self, h: &LabeledGraph) -> Result<LabeledGraph> {
        let gens = h
            .generators()
            .iter()
            .map(|w| self.rewrite(w))
            .collect::<Result<Vec<_>>>()?;
        LabeledGraph::from_generators(&gens, &self.symbols)
    }
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
    fn intersections() {
        assert_eq!(intersect(&graph("a"), &graph("b")).unwrap(), graph(""));
        assert_eq!(intersect(&graph("aa"), &graph("aaa")).unwrap(), graph("aaaaaa"));
        let c2 = LabeledGraph::cayley(2, &ab()).unwrap();
        assert_eq!(intersect(&graph("aaa"), &c2).unwrap(), graph("aaaaaa"));
        let g = graph("baB,bbA");
        assert_eq!(intersect(&g, &LabeledGraph::bouquet(&ab())).unwrap(), g);
    }

    #[test]
    fn joins() {
        assert_eq!(join(&graph("aa"), &graph("aaa")).unwrap(), graph("a"));
        let g = graph("baB,bbA");
        assert_eq!(join(&g, &graph("")).unwrap(), g);
        assert_eq!(join(&graph("aaaaaa"), &graph("aaa")).unwrap(), graph("aaa"));
        assert_eq!(join_all([&graph("aa"), &graph("b"), &graph("aaa")]).unwrap().unwrap(), graph("a,b"));
        assert!(join_all(std::iter::empty()).unwrap().is_none());
    }

    #[test]
    fn fringe_of_a_squared() {
        let f = fringe(&graph("aa"), &FringeConfig::default()).unwrap();
        let members: Vec<_> = f.graphs().cloned().collect();
        assert_eq!(members, vec![graph("aa"), graph("a")]);
    }

    #[test]
    fn fringe_of_trivial() {
        let f = fringe(&graph(""), &FringeConfig::default()).unwrap();
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn fringe_contains_surjective_example() {
        let f = fringe(&graph("abbA,abaaBA,ababa"), &FringeConfig::default()).unwrap();
        assert!(f.contains(&graph("aa,abba,ababa")));
        assert_eq!(f.members[0].graph, f.origin);
    }

    #[test]
    fn fringe_caps() {
        let g = graph("abAb,BAbAb,AB,BabbbAb");
        let tight = FringeConfig { max_vertices: 5, max_members: 10 };
        assert_eq!(fringe(&g, &tight).unwrap_err(), Error::FringeCapExceeded { cap: 5 });
        // overgroups of <a^12> are <a^d> for d | 12
        let cyclic = graph("aaaaaaaaaaaa");
        assert_eq!(fringe(&cyclic, &FringeConfig::default()).unwrap().len(), 6);
        let few = FringeConfig { max_vertices: 12, max_members: 3 };
        assert_eq!(fringe(&cyclic, &few).unwrap_err(), Error::FringeCapExceeded { cap: 3 });
    }

    #[test]
    fn rewrite_powers() {
        let a = ab();
        let dict = BasisDictionary::new(&graph("aa"));
        assert_eq!(dict.to_ambient(), &[a.parse("aa").unwrap()]);
        let w = dict.rewrite(&a.parse("aaaaaa").unwrap()).unwrap();
        assert_eq!(w, Word::generator_power(0, 3));
        assert_eq!(dict.expand(&w), a.parse("aaaaaa").unwrap());
        assert_eq!(dict.rewrite(&Word::identity()).unwrap(), Word::identity());
        assert_eq!(dict.rewrite(&a.parse("a").unwrap()), Err(Error::NotAMember));
        assert_eq!(dict.rewrite(&a.parse("b").unwrap()), Err(Error::NotAMember));
    }

    #[test]
    fn rewrite_in_cayley_two() {
        let a = ab();
        let dict = BasisDictionary::new(&LabeledGraph::cayley(2, &a).unwrap());
        let aa = a.parse("aa").unwrap();
        let x = dict.rewrite(&aa).unwrap();
        assert_eq!(x.len(), 1);
        assert_eq!(dict.to_ambient()[x.letters()[0].symbol], aa);
        let comm = a.parse("abAB").unwrap();
        assert_eq!(dict.expand(&dict.rewrite(&comm).unwrap()), comm);
    }

    #[test]
    fn blow_ups() {
        let a = ab();
        let dict = BasisDictionary::new(&graph("aa"));
        let x = dict.symbols().clone();
        let cube = LabeledGraph::from_generators(&[x.parse("x1.x1.x1").unwrap()], &x).unwrap();
        assert_eq!(dict.blow_up(&cube).unwrap(), graph("aaaaaa"));
        assert_eq!(dict.blow_up(&LabeledGraph::trivial(&x)).unwrap(), graph(""));
        assert_eq!(dict.blow_up(&LabeledGraph::bouquet(&x)).unwrap(), graph("aa"));
        assert!(dict.blow_up(&graph("a")).is_err());
        let _ = a;
    }

    #[test]
    fn restrict_then_blow_up() {
        let k = LabeledGraph::cayley(2, &ab()).unwrap();
        let dict = BasisDictionary::new(&k);
        let h = intersect(&graph("aaa,bab"), &k).unwrap();
        let over_basis = dict.restrict(&h).unwrap();
        assert_eq!(dict.blow_up(&over_basis).unwrap(), h);
        assert_eq!(dict.restrict(&graph("a")).unwrap_err(), Error::NotAMember);
    }
}
