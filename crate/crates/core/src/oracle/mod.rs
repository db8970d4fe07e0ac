//! Independent checks through explicit finite groups: variety predicates,
//! `p'`-cores, homomorphisms from free groups, and separation of words from
//! subgroups.

mod group;

use std::fmt;

pub use group::{FiniteGroup, Subgroup, MAX_ORDER};

use crate::arith::{is_prime, prime_factors};
use crate::closures::Variety;
use crate::error::{Error, Result};
use crate::words::{Alphabet, Word};

impl FiniteGroup {
    pub fn prime_divisors(&self) -> Vec<u64> {
        prime_factors(self.order() as u64)
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        prime_factors(self.order() as u64).iter().all(|&q| q == p)
    }

    /// Largest normal subgroup whose order satisfies `keep`: generated by
    /// every element whose normal closure qualifies.
    fn core_where(&self, keep: impl Fn(usize) -> bool) -> Subgroup {
        let gens: Vec<usize> =
            (0..self.order()).filter(|&x| keep(self.normal_closure(&[x]).order())).collect();
        self.generate(&gens)
    }

    /// `O_p(G)`.
    pub fn p_core(&self, p: u64) -> Subgroup {
        self.core_where(|m| prime_factors(m as u64).iter().all(|&q| q == p))
    }

    /// `O_{p'}(G)`.
    pub fn p_prime_core(&self, p: u64) -> Subgroup {
        self.core_where(|m| m as u64 % p != 0)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.prime_divisors().into_iter().all(|p| {
            let mut part = 1;
            while self.order() % (part * p as usize) == 0 {
                part *= p as usize;
            }
            self.p_core(p).order() == part
        })
    }

    /// Peels off normal subgroups of prime order; a minimal normal subgroup
    /// of a supersolvable group has prime order, so one choice per step is
    /// enough.
    pub fn is_supersolvable(&self) -> bool {
        if self.order() == 1 {
            return true;
        }
        let step = (0..self.order())
            .filter(|&x| is_prime(self.element_order(x) as u64))
            .map(|x| self.generate(&[x]))
            .find(|&s| self.is_normal(s));
        match step {
            Some(n) => self.quotient(n).expect("normal").is_supersolvable(),
            None => false,
        }
    }

    /// Membership in `G_p * Ab_{p-1}`: `G / O_p(G)` is abelian of exponent
    /// dividing `p - 1`.
    pub fn in_hp(&self, p: u64) -> bool {
        let q = self.quotient(self.p_core(p)).expect("normal");
        q.is_abelian() && (p - 1) % q.exponent() as u64 == 0
    }

    pub fn in_variety(&self, v: Variety) -> bool {
        match v {
            Variety::Ab(d) => self.is_abelian() && d % self.exponent() as u64 == 0,
            Variety::Gp(p) => self.is_p_group(p),
            Variety::Hp(p) => self.in_hp(p),
            Variety::Nil => self.is_nilpotent(),
            Variety::Su => self.is_supersolvable(),
        }
    }
}

/// Groups of order at most `max_order`, optionally restricted to a variety.
/// Coarse fingerprints remove obvious duplicates, so a few isomorphic pairs
/// may survive; the list is built to err toward inclusion.
pub fn catalog(max_order: usize, filter: Option<Variety>) -> Result<Vec<FiniteGroup>> {
    if max_order > MAX_ORDER {
        return Err(Error::OrderCapExceeded { order: max_order, cap: MAX_ORDER });
    }
    let mut all = vec![FiniteGroup::trivial()];

    // abelian groups by invariant factors d1 | d2 | ...
    fn factors(rest: usize, min: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for d in min..=rest {
            if acc.last().is_none_or(|&l| d % l == 0) {
                acc.push(d);
                out.push(acc.clone());
                factors(rest / d, d, acc, out);
                acc.pop();
            }
        }
    }
    let mut seqs = Vec::new();
    factors(max_order, 2, &mut Vec::new(), &mut seqs);
    for s in seqs {
        let mut g = FiniteGroup::cyclic(s[0]);
        for &d in &s[1..] {
            g = FiniteGroup::direct_product(&g, &FiniteGroup::cyclic(d))?;
        }
        all.push(g);
    }

    let mut nonabelian = Vec::new();
    if max_order >= 6 {
        nonabelian.push(FiniteGroup::symmetric(3)?);
    }
    for m in 4..=max_order / 2 {
        nonabelian.push(FiniteGroup::dihedral(m));
    }
    for m in 2..=max_order / 4 {
        nonabelian.push(FiniteGroup::dicyclic(m));
    }
    if max_order >= 12 {
        nonabelian.push(FiniteGroup::alternating4());
    }
    if max_order >= 24 {
        nonabelian.push(FiniteGroup::symmetric(4)?);
    }
    if max_order >= 24 {
        nonabelian.push(FiniteGroup::sl2_3());
    }
    // split metacyclic Z/n : Z/d, one action per cyclic subgroup of units
    for n in 3..=max_order / 2 {
        for d in 2..=max_order / n {
            let mut actions: Vec<Vec<usize>> = Vec::new();
            for r in 2..n {
                if gcd(r, n) != 1 {
                    continue;
                }
                let mut powers = vec![1];
                let mut x = r;
                while x != 1 {
                    powers.push(x);
                    x = x * r % n;
                }
                if d % powers.len() != 0 {
                    continue;
                }
                powers.sort_unstable();
                if !actions.contains(&powers) {
                    actions.push(powers);
                    nonabelian.push(FiniteGroup::semidirect_cyclic(n, d, r)?);
                }
            }
        }
    }
    for a in all.iter().filter(|g| g.order() >= 4 && g.order() * 2 <= max_order) {
        if a.exponent() != a.order() {
            nonabelian.push(FiniteGroup::generalized_dihedral(a)?);
        }
    }
    let small: Vec<FiniteGroup> = nonabelian.iter().filter(|g| g.order() * 2 <= max_order).cloned().collect();
    for g in &small {
        for c in 2..=max_order / g.order() {
            nonabelian.push(FiniteGroup::direct_product(g, &FiniteGroup::cyclic(c))?);
        }
        for h in &small {
            if g.order() * h.order() <= max_order && g.name() <= h.name() {
                nonabelian.push(FiniteGroup::direct_product(g, h)?);
            }
        }
    }
    all.extend(nonabelian);

    let mut seen = std::collections::HashSet::new();
    all.retain(|g| seen.insert(g.fingerprint()));
    all.sort_by_key(FiniteGroup::order);
    if let Some(v) = filter {
        let v = v.validate()?;
        all.retain(|g| g.in_variety(v));
    }
    Ok(all)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A homomorphism from the free group on `images.len()` generators.
#[derive(Clone, Debug)]
pub struct Hom<'g> {
    pub target: &'g FiniteGroup,
    pub images: Vec<usize>,
}

impl<'g> Hom<'g> {
    pub fn eval(&self, w: &Word) -> usize {
        w.letters().iter().fold(self.target.identity(), |acc, l| {
            let x = self.images[l.symbol];
            self.target.mul(acc, if l.inverse { self.target.inv(x) } else { x })
        })
    }

    pub fn image_of(&self, gens: &[Word]) -> Subgroup {
        let imgs: Vec<usize> = gens.iter().map(|w| self.eval(w)).collect();
        self.target.generate(&imgs)
    }

    pub fn describe(&self, alphabet: &Alphabet) -> String {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, &x)| format!("{} -> {}", alphabet.symbol(i), self.target.label(x)))
            .collect();
        format!("F -> {}: {}", self.target.name(), parts.join(", "))
    }
}

/// Every homomorphism from the free group of rank `n`, images in
/// lexicographic order.
pub fn homs(target: &FiniteGroup, n: usize) -> impl Iterator<Item = Hom<'_>> {
    let m = target.order();
    let total = m.checked_pow(n as u32).expect("hom count fits");
    (0..total).map(move |mut k| {
        let mut images = vec![0; n];
        for slot in images.iter_mut().rev() {
            *slot = k % m;
            k /= m;
        }
        Hom { target, images }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub group: String,
    pub group_order: usize,
    pub images: Vec<usize>,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separation {
    /// `w` lies outside the closure.
    Separated(Witness),
    /// No homomorphism into a catalog group up to this order separates.
    NotSeparatedUpTo(usize),
}

impl fmt::Display for Separation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Separation::Separated(w) => write!(f, "SEPARATED by {}", w.description),
            Separation::NotSeparatedUpTo(m) => write!(f, "NOT_SEPARATED_UP_TO({m})"),
        }
    }
}

/// Looks for `φ: F -> G`, `G` in the variety, with `φ(w) ∉ φ(H)`. The
/// first hit in catalog order, then lexicographic image order, is returned.
pub fn separation_status(
    w: &Word,
    h_gens: &[Word],
    alphabet: &Alphabet,
    variety: Variety,
    max_order: usize,
) -> Result<Separation> {
    let groups = catalog(max_order, Some(variety))?;
    Ok(separate_in(w, h_gens, alphabet, &groups)?.unwrap_or(Separation::NotSeparatedUpTo(max_order)))
}

/// [`separation_status`] over an explicit list of groups; `None` when none
/// of them separates.
pub fn separate_in(
    w: &Word,
    h_gens: &[Word],
    alphabet: &Alphabet,
    groups: &[FiniteGroup],
) -> Result<Option<Separation>> {
    w.check_alphabet(alphabet)?;
    for g in h_gens {
        g.check_alphabet(alphabet)?;
    }
    for group in groups {
        for phi in homs(group, alphabet.len()) {
            if !phi.image_of(h_gens).contains(phi.eval(w)) {
                return Ok(Some(Separation::Separated(Witness {
                    group: group.name().to_string(),
                    group_order: group.order(),
                    images: phi.images.clone(),
                    description: phi.describe(alphabet),
                })));
            }
        }
    }
    Ok(None)
}

/// First homomorphism into the catalog with `⟨φ(C)⟩ ≠ ⟨φ(H)⟩`, if any.
/// A closure `C` of `H` can never produce one.
pub fn closure_inconsistency(
    h_gens: &[Word],
    c_gens: &[Word],
    alphabet: &Alphabet,
    variety: Variety,
    max_order: usize,
) -> Result<Option<Witness>> {
    for group in catalog(max_order, Some(variety))? {
        for phi in homs(&group, alphabet.len()) {
            if phi.image_of(h_gens) != phi.image_of(c_gens) {
                return Ok(Some(Witness {
                    group: group.name().to_string(),
                    group_order: group.order(),
                    images: phi.images.clone(),
                    description: phi.describe(alphabet),
                }));
            }
        }
    }
    Ok(None)
}

/// Every subgroup `M` equals the intersection of `M O_{p'}(G)` over the
/// primes dividing `|G|`.
pub fn verify_lemma_fff(g: &FiniteGroup) -> bool {
    let cores: Vec<Subgroup> = g.prime_divisors().iter().map(|&p| g.p_prime_core(p)).collect();
    g.subgroups().into_iter().all(|m| {
        let meet = cores
            .iter()
            .map(|&o| g.generate_from(m, &o.elements().collect::<Vec<_>>()))
            .fold(g.whole(), Subgroup::intersection);
        meet == m
    })
}

/// For supersolvable `G`, `G / O_{p'}(G)` lies in `H_p` for each prime
/// dividing `|G|`.
pub fn verify_lemma_fp(g: &FiniteGroup) -> Result<bool> {
    if !g.is_supersolvable() {
        return Err(Error::InvalidGroup(format!("{} is not supersolvable", g.name())));
    }
    for p in g.prime_divisors() {
        if !g.quotient(g.p_prime_core(p))?.in_hp(p) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The `p'`-cores over the primes dividing `|G|` meet trivially.
pub fn lemma_ff(g: &FiniteGroup) -> bool {
    g.prime_divisors()
        .iter()
        .map(|&p| g.p_prime_core(p))
        .fold(g.whole(), Subgroup::intersection)
        == g.trivial_subgroup()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(gs: &[FiniteGroup]) -> Vec<String> {
        gs.iter().map(|g| g.name().to_string()).collect()
    }

    #[test]
    fn predicates() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let a4 = FiniteGroup::alternating4();
        assert!(s3.is_supersolvable());
        assert!(!a4.is_supersolvable());
        assert!(!FiniteGroup::symmetric(4).unwrap().is_supersolvable());
        assert!(FiniteGroup::cyclic(12).is_supersolvable());
        assert!(FiniteGroup::dihedral(4).is_supersolvable());
        assert!(s3.in_hp(3));
        assert!(!s3.in_hp(2));
        assert!(!s3.in_hp(5));
        assert!(FiniteGroup::dicyclic(2).is_p_group(2));
        assert!(FiniteGroup::dicyclic(2).is_nilpotent());
        assert!(!s3.is_nilpotent());
        assert!(FiniteGroup::cyclic(4).in_variety(Variety::Ab(4)));
        assert!(!FiniteGroup::cyclic(4).in_variety(Variety::Ab(2)));
        // Z5 : Z4 is in H_5
        assert!(FiniteGroup::semidirect_cyclic(5, 4, 2).unwrap().in_hp(5));
    }

    #[test]
    fn cores_and_quotients() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.p_prime_core(2).order(), 3);
        assert_eq!(s3.p_prime_core(3).order(), 1);
        let q = s3.quotient(s3.p_prime_core(2)).unwrap();
        assert_eq!(q.fingerprint(), FiniteGroup::cyclic(2).fingerprint());
        let s4 = FiniteGroup::symmetric(4).unwrap();
        assert_eq!(s4.p_prime_core(3).order(), 4);
        assert_eq!(s4.p_core(2).order(), 4);
    }

    #[test]
    fn catalog_contents() {
        let two = catalog(2, None).unwrap();
        assert_eq!(names(&two), vec!["Z1", "Z2"]);
        let su6 = names(&catalog(6, Some(Variety::Su)).unwrap());
        assert!(su6.contains(&"S3".to_string()));
        assert!(su6.contains(&"Z6".to_string()));
        let all12 = names(&catalog(12, None).unwrap());
        assert!(all12.contains(&"A4".to_string()));
        assert!(!names(&catalog(12, Some(Variety::Su)).unwrap()).contains(&"A4".to_string()));
        // orders 1..8 have 1,1,1,2,1,2,1,5 groups
        let eight = catalog(8, None).unwrap();
        assert_eq!(eight.len(), 14);
        assert_eq!(catalog(65, None).unwrap_err(), Error::OrderCapExceeded { order: 65, cap: 64 });
    }

    #[test]
    fn separation_examples() {
        let a = Alphabet::letters(2).unwrap();
        let w = a.parse("a").unwrap();
        let cube = [a.parse("aaa").unwrap()];
        match separation_status(&w, &cube, &a, Variety::Su, 6).unwrap() {
            Separation::Separated(wit) => assert_eq!(wit.group, "Z3"),
            other => panic!("{other}"),
        }
        let s3 = [FiniteGroup::symmetric(3).unwrap()];
        match separate_in(&w, &cube, &a, &s3).unwrap() {
            Some(Separation::Separated(wit)) => {
                assert!(wit.description.starts_with("F -> S3: a -> (1 2 3)") || wit.description.starts_with("F -> S3: a -> (1 3 2)"));
            }
            other => panic!("{other:?}"),
        }
        match separation_status(&w, &[a.parse("aa").unwrap()], &a, Variety::Gp(2), 4).unwrap() {
            Separation::Separated(wit) => assert_eq!(wit.group, "Z2"),
            other => panic!("{other}"),
        }
        let z4 = [FiniteGroup::cyclic(4)];
        let square = [a.parse("aa").unwrap()];
        assert!(matches!(separate_in(&w, &square, &a, &z4).unwrap(), Some(Separation::Separated(_))));
        let h = a.parse_list("abA,bb").unwrap();
        let inside = a.parse("abbbA").unwrap();
        assert_eq!(
            separation_status(&inside, &h, &a, Variety::Su, 12).unwrap(),
            Separation::NotSeparatedUpTo(12)
        );
    }

    #[test]
    fn lemmas_on_small_groups() {
        for g in catalog(24, None).unwrap() {
            assert!(lemma_ff(&g), "{}", g.name());
            if g.order() <= 12 {
                assert!(verify_lemma_fff(&g), "{}", g.name());
            }
            if g.is_supersolvable() {
                assert!(verify_lemma_fp(&g).unwrap(), "{}", g.name());
            }
        }
        assert!(verify_lemma_fp(&FiniteGroup::alternating4()).is_err());
    }
}
