//! Linear algebra over `Z/dZ`: canonical subgroup forms, abelianized images,
//! coset graphs, and the metabelian-type quotient used for `H_p` checks.

mod magnus;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigUint;

use crate::arith::ext_gcd;
use crate::error::{Error, Result};
use crate::stallings::{Edge, LabeledGraph};
use crate::words::{Alphabet, Word};

pub use magnus::{magnus_image, MagnusElement, MagnusSubgroup};

/// A subgroup of `(Z/dZ)^n`, stored in Howell form: rows have strictly
/// increasing pivot columns, each pivot divides `d`, entries above a pivot
/// are reduced below it, and every element of the subgroup vanishing on the
/// first `c` columns is spanned by the rows with pivot `>= c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModSubgroup {
    modulus: u64,
    dim: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

fn is_zero(v: &[u64]) -> bool {
    v.iter().all(|&x| x == 0)
}

impl ModSubgroup {
    pub fn zero(modulus: u64, dim: usize) -> Result<Self> {
        Self::generated_by(modulus, dim, &[])
    }

    pub fn full(modulus: u64, dim: usize) -> Result<Self> {
        let gens: Vec<Vec<i64>> = (0..dim)
            .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::generated_by(modulus, dim, &gens)
    }

    pub fn generated_by(modulus: u64, dim: usize, gens: &[Vec<i64>]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidParameter("modulus must be at least 1".into()));
        }
        let d = modulus as i128;
        let mut pending: Vec<Vec<i128>> = Vec::with_capacity(gens.len());
        for g in gens {
            if g.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: g.len() });
            }
            let row: Vec<i128> = g.iter().map(|&x| (x as i128).rem_euclid(d)).collect();
            if row.iter().any(|&x| x != 0) {
                pending.push(row);
            }
        }

        let combine = |x: &[i128], s: i128, y: &[i128], t: i128| -> Vec<i128> {
            x.iter().zip(y).map(|(&a, &b)| (s * a + t * b).rem_euclid(d)).collect()
        };

        let mut rows: Vec<Vec<i128>> = Vec::new();
        let mut pivots = Vec::new();
        for c in 0..dim {
            let mut pivot: Option<Vec<i128>> = None;
            let mut rest = Vec::with_capacity(pending.len());
            for r in pending {
                if r[c] == 0 {
                    rest.push(r);
                    continue;
                }
                let Some(p) = pivot.take() else {
                    pivot = Some(r);
                    continue;
                };
                let (g, s, t) = ext_gcd(p[c], r[c]);
                let new_p = combine(&p, s, &r, t);
                let new_r = combine(&p, -(r[c] / g), &r, p[c] / g);
                if new_r.iter().any(|&x| x != 0) {
                    rest.push(new_r);
                }
                pivot = Some(new_p);
            }
            if let Some(p) = pivot {
                let u = unit_normalizer(p[c], d);
                let p: Vec<i128> = p.iter().map(|&x| (u * x).rem_euclid(d)).collect();
                let g = p[c];
                let annihilated: Vec<i128> = p.iter().map(|&x| (d / g * x).rem_euclid(d)).collect();
                if annihilated.iter().any(|&x| x != 0) {
                    rest.push(annihilated);
                }
                rows.push(p);
                pivots.push(c);
            }
            pending = rest;
        }
        debug_assert!(pending.is_empty());

        for i in 0..rows.len() {
            let (c, g) = (pivots[i], rows[i][pivots[i]]);
            for j in 0..i {
                let q = rows[j][c] / g;
                if q != 0 {
                    let reduced = combine(&rows[j], 1, &rows[i], -q);
                    rows[j] = reduced;
                }
            }
        }
        Ok(ModSubgroup {
            modulus,
            dim,
            rows: rows.into_iter().map(|r| r.into_iter().map(|x| x as u64).collect()).collect(),
            pivots,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Canonical generating rows.
    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_full(&self) -> bool {
        self.modulus == 1
            || (self.rows.len() == self.dim && self.rows.iter().zip(&self.pivots).all(|(r, &c)| r[c] == 1))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Number of canonical rows; the dimension when the modulus is prime.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn subgroup_order(&self) -> BigUint {
        let d = BigUint::from(self.modulus);
        self.rows
            .iter()
            .zip(&self.pivots)
            .fold(BigUint::from(1u32), |acc, (r, &c)| acc * (&d / BigUint::from(r[c])))
    }

    /// `d^n / |S|`.
    pub fn index(&self) -> BigUint {
        BigUint::from(self.modulus).pow(self.dim as u32) / self.subgroup_order()
    }

    /// Canonical representative of the coset `v + S`.
    pub fn reduce(&self, v: &[i64]) -> Result<Vec<u64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        let d = self.modulus as i128;
        let mut x: Vec<i128> = v.iter().map(|&a| (a as i128).rem_euclid(d)).collect();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let q = x[c] / row[c] as i128;
            if q != 0 {
                for (xi, &ri) in x.iter_mut().zip(row) {
                    *xi = (*xi - q * ri as i128).rem_euclid(d);
                }
            }
        }
        Ok(x.into_iter().map(|a| a as u64).collect())
    }

    pub fn member_vec(&self, v: &[i64]) -> Result<bool> {
        Ok(is_zero(&self.reduce(v)?))
    }

    /// Every element, by breadth-first closure; meant for tests and tiny groups.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let d = self.modulus;
        let mut seen = std::collections::BTreeSet::from([vec![0u64; self.dim]]);
        let mut queue = VecDeque::from([vec![0u64; self.dim]]);
        while let Some(x) = queue.pop_front() {
            for r in &self.rows {
                let y: Vec<u64> = x.iter().zip(r).map(|(a, b)| (a + b) % d).collect();
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }
}

impl fmt::Display for ModSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mod {} in dimension {}:", self.modulus, self.dim)?;
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(u64::to_string).collect();
            writeln!(f, "  [{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// A unit `u` mod `d` with `u * a = gcd(a, d)` mod `d`.
fn unit_normalizer(a: i128, d: i128) -> i128 {
    let (g, _, _) = ext_gcd(a, d);
    let (a1, d1) = (a / g, d / g);
    let (_, inv, _) = ext_gcd(a1, d1);
    let mut u = inv.rem_euclid(d1);
    while ext_gcd(u, d).0 != 1 {
        u += d1;
    }
    u
}

/// Exponent-sum image of a subgroup in `(Z/dZ)^n`.
pub fn abelian_image(gens: &[Word], n: usize, d: u64) -> Result<ModSubgroup> {
    let vectors: Vec<Vec<i64>> = gens.iter().map(|w| w.exponent_sums(n)).collect();
    ModSubgroup::generated_by(d, n, &vectors)
}

/// Graph of the cosets of `s`, pulled back to the free group on `alphabet`.
pub fn coset_graph(s: &ModSubgroup, alphabet: &Alphabet) -> Result<LabeledGraph> {
    let n = alphabet.len();
    if n != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), found: n });
    }
    let start = vec![0u64; n];
    let mut ids: HashMap<Vec<u64>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut reps = vec![start];
    let mut edges = Vec::new();
    let mut next = 0;
    while next < reps.len() {
        let rep = reps[next].clone();
        for i in 0..n {
            let mut v: Vec<i64> = rep.iter().map(|&x| x as i64).collect();
            v[i] += 1;
            let r = s.reduce(&v)?;
            let id = *ids.entry(r.clone()).or_insert_with(|| {
                reps.push(r);
                reps.len() - 1
            });
            edges.push(Edge::new(next, i, id));
        }
        next += 1;
    }
    LabeledGraph::from_edges(alphabet, reps.len(), 0, &edges)
}

/// Whether the integer span of `vectors` is all of `Z^n`.
pub fn integer_span_is_full(vectors: &[Vec<i64>], n: usize) -> Result<bool> {
    let mut pending: Vec<Vec<i128>> = Vec::new();
    for v in vectors {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        pending.push(v.iter().map(|&x| x as i128).collect());
    }
    for c in 0..n {
        // Euclid on column c; the surviving row must have pivot +-1
        let mut pivot: Option<Vec<i128>> = None;
        let mut rest = Vec::new();
        for r in pending {
            if r[c] == 0 {
                rest.push(r);
                continue;
            }
            let Some(p) = pivot.take() else {
                pivot = Some(r);
                continue;
            };
            let (g, s, t) = ext_gcd(p[c], r[c]);
            let (pa, ra) = (p[c] / g, r[c] / g);
            let new_p: Vec<i128> = p.iter().zip(&r).map(|(&x, &y)| s * x + t * y).collect();
            let new_r: Vec<i128> = p.iter().zip(&r).map(|(&x, &y)| -ra * x + pa * y).collect();
            if new_r.iter().any(|&x| x != 0) {
                rest.push(new_r);
            }
            pivot = Some(new_p);
        }
        match pivot {
            Some(p) if p[c].abs() == 1 => {}
            _ => return Ok(false),
        }
        pending = rest;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn brute_span(d: u64, n: usize, gens: &[Vec<i64>]) -> BTreeSet<Vec<u64>> {
        let mut seen = BTreeSet::from([vec![0u64; n]]);
        let mut queue = VecDeque::from([vec![0u64; n]]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y: Vec<u64> = x
                    .iter()
                    .zip(g)
                    .map(|(&a, &b)| ((a as i64 + b).rem_euclid(d as i64)) as u64)
                    .collect();
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    fn all_vectors(d: u64, n: usize) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v: Vec<i64>| {
                    (0..d as i64).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn abelian_image_examples() {
        let a = Alphabet::letters(2).unwrap();
        for d in [1, 2, 5, 12] {
            assert!(abelian_image(&a.parse_list("a,b").unwrap(), 2, d).unwrap().is_full());
        }
        let s = abelian_image(&a.parse_list("aa").unwrap(), 2, 2).unwrap();
        assert!(s.is_zero());
        let s = abelian_image(&a.parse_list("aa").unwrap(), 2, 3).unwrap();
        assert_eq!(s.rows(), &[vec![1, 0]]);
        assert_eq!(s.subgroup_order(), BigUint::from(3u32));
    }

    #[test]
    fn fullness_order_membership() {
        let s = ModSubgroup::full(5, 2).unwrap();
        assert!(s.is_full());
        assert_eq!(s.subgroup_order(), BigUint::from(25u32));
        let s = ModSubgroup::generated_by(3, 2, &[vec![1, 0]]).unwrap();
        assert!(!s.is_full());
        assert_eq!(s.subgroup_order(), BigUint::from(3u32));
        let s = ModSubgroup::generated_by(4, 2, &[vec![2, 0]]).unwrap();
        assert!(!s.member_vec(&[1, 0]).unwrap());
        assert!(s.member_vec(&[2, 0]).unwrap());
        assert_eq!(s.member_vec(&[1]), Err(Error::DimensionMismatch { expected: 2, found: 1 }));
        assert_eq!(
            ModSubgroup::generated_by(4, 2, &[vec![1]]).unwrap_err(),
            Error::DimensionMismatch { expected: 2, found: 1 }
        );
    }

    #[test]
    fn howell_needs_annihilator_rows() {
        // <(2,1)> mod 4 contains (0,2) = 2*(2,1), which a plain echelon form misses
        let s = ModSubgroup::generated_by(4, 2, &[vec![2, 1]]).unwrap();
        assert_eq!(s.rows(), &[vec![2, 1], vec![0, 2]]);
        assert!(s.member_vec(&[0, 2]).unwrap());
        assert_eq!(s.subgroup_order(), BigUint::from(4u32));
    }

    #[test]
    fn coset_graph_examples() {
        let a = Alphabet::letters(2).unwrap();
        let g = coset_graph(&ModSubgroup::full(7, 2).unwrap(), &a).unwrap();
        assert!(g.is_whole_group());
        let s = ModSubgroup::generated_by(3, 2, &[vec![1, 0]]).unwrap();
        let g = coset_graph(&s, &a).unwrap();
        let expected = LabeledGraph::from_edges(
            &a,
            3,
            0,
            &[
                Edge::new(0, 0, 0),
                Edge::new(1, 0, 1),
                Edge::new(2, 0, 2),
                Edge::new(0, 1, 1),
                Edge::new(1, 1, 2),
                Edge::new(2, 1, 0),
            ],
        )
        .unwrap();
        assert_eq!(g, expected);
        let z = ModSubgroup::zero(2, 2).unwrap();
        assert_eq!(coset_graph(&z, &a).unwrap(), LabeledGraph::cayley(2, &a).unwrap());
    }

    #[test]
    fn integer_fullness() {
        assert!(integer_span_is_full(&[vec![1, 0], vec![0, 1]], 2).unwrap());
        assert!(integer_span_is_full(&[vec![2, 0], vec![3, 0], vec![0, -1]], 2).unwrap());
        assert!(!integer_span_is_full(&[vec![2, 0], vec![0, 1]], 2).unwrap());
        assert!(!integer_span_is_full(&[vec![1, 1]], 2).unwrap());
        assert!(integer_span_is_full(&[], 0).unwrap());
    }

    proptest! {
        #[test]
        fn howell_matches_brute_force(
            d in 1u64..13,
            gens in prop::collection::vec(prop::collection::vec(-20i64..20, 3), 0..4),
        ) {
            let s = ModSubgroup::generated_by(d, 3, &gens).unwrap();
            let span = brute_span(d, 3, &gens);
            prop_assert_eq!(s.subgroup_order(), BigUint::from(span.len()));
            prop_assert_eq!(s.elements().into_iter().collect::<BTreeSet<_>>(), span.clone());
            for v in all_vectors(d, 3) {
                let u: Vec<u64> = v.iter().map(|&x| x as u64).collect();
                prop_assert_eq!(s.member_vec(&v).unwrap(), span.contains(&u));
            }
            // canonical: any generating set of the same subgroup gives the same rows
            let again: Vec<Vec<i64>> = span.iter().map(|v| v.iter().map(|&x| x as i64).collect()).collect();
            prop_assert_eq!(&ModSubgroup::generated_by(d, 3, &again).unwrap(), &s);
        }

        #[test]
        fn coset_count_times_order(
            d in 1u64..7,
            gens in prop::collection::vec(prop::collection::vec(-6i64..6, 2), 0..3),
        ) {
            let a = Alphabet::letters(2).unwrap();
            let s = ModSubgroup::generated_by(d, 2, &gens).unwrap();
            let g = coset_graph(&s, &a).unwrap();
            prop_assert!(g.is_complete());
            prop_assert_eq!(s.subgroup_order() * BigUint::from(g.vertex_count()), BigUint::from(d * d));
        }
    }
}
