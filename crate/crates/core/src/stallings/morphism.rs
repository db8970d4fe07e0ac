use std::collections::VecDeque;

use super::LabeledGraph;
use crate::error::{Error, Result};

/// The unique base- and label-preserving map between two reduced graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMorphism {
    pub vertex_map: Vec<usize>,
    pub injective: bool,
    pub surjective: bool,
}

/// Returns the morphism `source -> target` if it exists, which happens
/// exactly when `L(source)` is a subgroup of `L(target)`.
pub fn find_morphism(source: &LabeledGraph, target: &LabeledGraph) -> Result<Option<GraphMorphism>> {
    if source.alphabet() != target.alphabet() {
        return Err(Error::AlphabetMismatch {
            expected: source.alphabet().len(),
            found: target.alphabet().len(),
        });
    }
    let n = source.alphabet().len();
    let mut map = vec![usize::MAX; source.vertex_count()];
    map[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        let image = map[v];
        for label in 0..n {
            let pairs = [
                (source.out_edge(v, label), target.out_edge(image, label)),
                (source.in_edge(v, label), target.in_edge(image, label)),
            ];
            for (s, t) in pairs {
                let Some(s) = s else { continue };
                let Some(t) = t else { return Ok(None) };
                if map[s] == usize::MAX {
                    map[s] = t;
                    queue.push_back(s);
                } else if map[s] != t {
                    return Ok(None);
                }
            }
        }
    }

    let mut hit_vertex = vec![false; target.vertex_count()];
    let mut injective = true;
    for &m in &map {
        injective &= !std::mem::replace(&mut hit_vertex[m], true);
    }
    let mut hit_edge = vec![false; target.edge_count()];
    for e in source.edges() {
        let id = target.edge_id(map[e.from], e.label).expect("edge image exists");
        hit_edge[id] = true;
    }
    let surjective = hit_vertex.iter().all(|&h| h) && hit_edge.iter().all(|&h| h);
    Ok(Some(GraphMorphism { vertex_map: map, injective, surjective }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;

    fn graph(gens: &str) -> LabeledGraph {
        let a = Alphabet::letters(2).unwrap();
        LabeledGraph::from_generators(&a.parse_list(gens).unwrap(), &a).unwrap()
    }

    #[test]
    fn injective_example() {
        let m = find_morphism(&graph("abbAb,abba"), &graph("bAbbbb,abbbb,Abb,BBAb"))
            .unwrap()
            .unwrap();
        assert!(m.injective);
        assert!(!m.surjective);
    }

    #[test]
    fn surjective_example() {
        let m = find_morphism(&graph("abbA,abaaBA,ababa"), &graph("aa,abba,ababa"))
            .unwrap()
            .unwrap();
        assert!(m.surjective);
        assert!(!m.injective);
    }

    #[test]
    fn no_morphism_between_unrelated_cyclic_subgroups() {
        assert!(find_morphism(&graph("a"), &graph("b")).unwrap().is_none());
        assert!(find_morphism(&graph("a"), &graph("aa")).unwrap().is_none());
        let m = find_morphism(&graph("aa"), &graph("a")).unwrap().unwrap();
        assert!(m.surjective && !m.injective);
    }

    #[test]
    fn identity_is_bijective() {
        let g = graph("baB,bbA");
        let m = find_morphism(&g, &g).unwrap().unwrap();
        assert!(m.injective && m.surjective);
        assert_eq!(m.vertex_map, vec![0, 1, 2]);
    }

    #[test]
    fn alphabet_mismatch() {
        let a3 = Alphabet::letters(3).unwrap();
        let g3 = LabeledGraph::trivial(&a3);
        assert!(find_morphism(&graph("a"), &g3).is_err());
    }
}
