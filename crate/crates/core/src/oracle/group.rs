use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Largest group order the oracle handles; subsets are `u64` masks.
pub const MAX_ORDER: usize = 64;

/// A subgroup (or any subset) of a finite group, as a bit mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup(pub u64);

impl Subgroup {
    pub fn contains(self, x: usize) -> bool {
        self.0 >> x & 1 == 1
    }

    pub fn order(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn elements(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.0 >> i & 1 == 1)
    }

    pub fn is_subset_of(self, other: Subgroup) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersection(self, other: Subgroup) -> Subgroup {
        Subgroup(self.0 & other.0)
    }
}

/// A finite group given by its multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u8>,
    identity: usize,
    inverses: Vec<usize>,
    labels: Vec<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl FiniteGroup {
    /// Validates the group axioms, associativity included.
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>, labels: Vec<String>) -> Result<Self> {
        let name = name.into();
        let m = table.len();
        if m == 0 {
            return Err(Error::InvalidGroup(format!("{name}: empty table")));
        }
        if m > MAX_ORDER {
            return Err(Error::OrderCapExceeded { order: m, cap: MAX_ORDER });
        }
        if labels.len() != m || table.iter().any(|row| row.len() != m || row.iter().any(|&x| x >= m)) {
            return Err(Error::InvalidGroup(format!("{name}: table is not {m} x {m}")));
        }
        let bad = |what: &str| Err(Error::InvalidGroup(format!("{name}: {what}")));
        let Some(identity) = (0..m).find(|&e| (0..m).all(|x| table[e][x] == x && table[x][e] == x)) else {
            return bad("no identity");
        };
        let mut inverses = Vec::with_capacity(m);
        for x in 0..m {
            match (0..m).find(|&y| table[x][y] == identity && table[y][x] == identity) {
                Some(y) => inverses.push(y),
                None => return bad("missing inverse"),
            }
        }
        for x in 0..m {
            for y in 0..m {
                let xy = table[x][y];
                for z in 0..m {
                    if table[xy][z] != table[x][table[y][z]] {
                        return bad("not associative");
                    }
                }
            }
        }
        let flat = table.iter().flatten().map(|&x| x as u8).collect();
        Ok(FiniteGroup { name, order: m, table: flat, identity, inverses, labels })
    }

    /// Builds the table from a multiplication on `0..m`.
    pub fn from_fn(
        name: impl Into<String>,
        m: usize,
        mul: impl Fn(usize, usize) -> usize,
        label: impl Fn(usize) -> String,
    ) -> Result<Self> {
        let table = (0..m).map(|x| (0..m).map(|y| mul(x, y)).collect()).collect();
        Self::from_table(name, table, (0..m).map(label).collect())
    }

    /// The group generated by permutations of `0..degree`.
    pub fn from_permutations(name: impl Into<String>, degree: usize, gens: &[Vec<usize>]) -> Result<Self> {
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y: Vec<usize> = (0..degree).map(|i| g[x[i]]).collect();
                if !elems.contains(&y) {
                    if elems.len() == MAX_ORDER {
                        return Err(Error::OrderCapExceeded { order: elems.len() + 1, cap: MAX_ORDER });
                    }
                    elems.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        elems.sort();
        let index = |p: &Vec<usize>| elems.iter().position(|q| q == p).expect("closed");
        // x * y: apply x first, then y
        let mul = |x: usize, y: usize| {
            let p: Vec<usize> = (0..degree).map(|i| elems[y][elems[x][i]]).collect();
            index(&p)
        };
        Self::from_fn(name, elems.len(), mul, |x| cycle_notation(&elems[x]))
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(m: usize) -> Self {
        Self::from_fn(format!("Z{m}"), m, |x, y| (x + y) % m, |x| x.to_string()).expect("cyclic group")
    }

    /// `Z/n ⋊ Z/d` with the generator of `Z/d` acting by `x -> r x`.
    pub fn semidirect_cyclic(n: usize, d: usize, r: usize) -> Result<Self> {
        let mut rp = vec![1 % n.max(1)];
        for i in 1..d {
            rp.push(rp[i - 1] * r % n);
        }
        if (rp[d - 1] * r) % n != 1 % n {
            return Err(Error::InvalidGroup(format!("{r} does not have order dividing {d} mod {n}")));
        }
        let enc = |x: usize, y: usize| y * n + x;
        Self::from_fn(
            format!("Z{n}:Z{d}[{r}]"),
            n * d,
            |a, b| {
                let (x1, y1, x2, y2) = (a % n, a / n, b % n, b / n);
                enc((x1 + rp[y1] * x2) % n, (y1 + y2) % d)
            },
            |a| format!("({},{})", a % n, a / n),
        )
    }

    /// Dihedral group of order `2m`.
    pub fn dihedral(m: usize) -> Self {
        let mut g = Self::semidirect_cyclic(m, 2, m - 1).expect("inversion has order 2");
        g.name = format!("D{m}");
        g
    }

    /// Dicyclic group of order `4m`; `m = 2` is the quaternion group.
    pub fn dicyclic(m: usize) -> Self {
        let n = 2 * m;
        let enc = |k: usize, e: usize| e * n + k;
        let name = if m == 2 { "Q8".to_string() } else { format!("Dic{m}") };
        Self::from_fn(
            name,
            2 * n,
            |a, b| {
                let (k1, e1, k2, e2) = (a % n, a / n, b % n, b / n);
                match (e1, e2) {
                    (0, _) => enc((k1 + k2) % n, e2),
                    (_, 0) => enc((k1 + n - k2) % n, 1),
                    _ => enc((k1 + n - k2 + m) % n, 0),
                }
            },
            |a| format!("a{}x{}", a % n, a / n),
        )
        .expect("dicyclic group")
    }

    /// `A ⋊ Z/2` with the involution inverting the abelian group `A`.
    pub fn generalized_dihedral(a: &FiniteGroup) -> Result<Self> {
        if !a.is_abelian() {
            return Err(Error::InvalidGroup(format!("{} is not abelian", a.name)));
        }
        let n = a.order;
        Self::from_fn(
            format!("Dih({})", a.name),
            2 * n,
            |x, y| {
                let (a1, e1, a2, e2) = (x % n, x / n, y % n, y / n);
                let twisted = if e1 == 1 { a.inv(a2) } else { a2 };
                ((e1 + e2) % 2) * n + a.mul(a1, twisted)
            },
            |x| format!("({},{})", a.labels[x % n], x / n),
        )
    }

    /// `SL(2, 3)`, the binary tetrahedral group.
    pub fn sl2_3() -> Self {
        let mut mats = Vec::new();
        for m in 0..81usize {
            let (a, b, c, d) = (m % 3, m / 3 % 3, m / 9 % 3, m / 27);
            if (a * d + 2 * b * c) % 3 == 1 {
                mats.push([a, b, c, d]);
            }
        }
        let index = |x: [usize; 4]| mats.iter().position(|&y| y == x).expect("closed");
        Self::from_fn(
            "SL(2,3)",
            mats.len(),
            |x, y| {
                let ([a, b, c, d], [e, f, g, h]) = (mats[x], mats[y]);
                index([(a * e + b * g) % 3, (a * f + b * h) % 3, (c * e + d * g) % 3, (c * f + d * h) % 3])
            },
            |x| format!("[{} {}; {} {}]", mats[x][0], mats[x][1], mats[x][2], mats[x][3]),
        )
        .expect("SL(2,3)")
    }

    pub fn symmetric(degree: usize) -> Result<Self> {
        let transposition: Vec<usize> = (0..degree).map(|i| if i < 2 { 1 - i } else { i }).collect();
        let cycle: Vec<usize> = (0..degree).map(|i| (i + 1) % degree).collect();
        Self::from_permutations(format!("S{degree}"), degree, &[transposition, cycle])
    }

    pub fn alternating4() -> Self {
        Self::from_permutations("A4", 4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).expect("A4")
    }

    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self> {
        let n = h.order;
        Self::from_fn(
            format!("{}x{}", g.name, h.name),
            g.order * n,
            |a, b| g.mul(a / n, b / n) * n + h.mul(a % n, b % n),
            |a| format!("({},{})", g.labels[a / n], h.labels[a % n]),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y] as usize
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inverses[x]
    }

    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|x| (0..x).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn exponent(&self) -> usize {
        (0..self.order).map(|x| self.element_order(x)).fold(1, lcm)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup(if self.order == 64 { u64::MAX } else { (1u64 << self.order) - 1 })
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup(1 << self.identity)
    }

    /// Subgroup generated by `gens` together with the elements of `start`.
    pub fn generate_from(&self, start: Subgroup, gens: &[usize]) -> Subgroup {
        let mut all: Vec<usize> = start.elements().collect();
        all.extend_from_slice(gens);
        all.retain(|&g| g != self.identity);
        all.sort_unstable();
        all.dedup();
        let mut mask = self.trivial_subgroup().0;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in &all {
                let y = self.mul(x, g);
                if mask >> y & 1 == 0 {
                    mask |= 1 << y;
                    queue.push_back(y);
                }
            }
        }
        Subgroup(mask)
    }

    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        self.generate_from(self.trivial_subgroup(), gens)
    }

    pub fn is_subgroup(&self, s: Subgroup) -> bool {
        s.contains(self.identity)
            && s.elements().all(|x| x < self.order && s.elements().all(|y| s.contains(self.mul(x, self.inv(y)))))
    }

    pub fn is_normal(&self, s: Subgroup) -> bool {
        (0..self.order).all(|g| s.elements().all(|x| s.contains(self.conjugate(x, g))))
    }

    pub fn normal_closure(&self, gens: &[usize]) -> Subgroup {
        let conjugates: Vec<usize> =
            gens.iter().flat_map(|&x| (0..self.order).map(move |g| (x, g))).map(|(x, g)| self.conjugate(x, g)).collect();
        self.generate(&conjugates)
    }

    /// Every subgroup, found by adjoining one element at a time to known
    /// subgroups. Sorted by mask.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        let start = self.trivial_subgroup();
        let mut seen = std::collections::BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for x in 0..self.order {
                if !s.contains(x) {
                    let t = self.generate_from(s, &[x]);
                    if seen.insert(t) {
                        queue.push_back(t);
                    }
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        self.subgroups().into_iter().filter(|&s| self.is_normal(s)).collect()
    }

    /// `G / N` on the cosets of `N`, numbered by least element.
    pub fn quotient(&self, n: Subgroup) -> Result<FiniteGroup> {
        if !self.is_subgroup(n) || !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for x in 0..self.order {
            if coset_of[x] == usize::MAX {
                for y in n.elements() {
                    coset_of[self.mul(x, y)] = reps.len();
                }
                reps.push(x);
            }
        }
        let name = format!("{}/{}", self.name, n.order());
        FiniteGroup::from_fn(
            name,
            reps.len(),
            |a, b| coset_of[self.mul(reps[a], reps[b])],
            |a| format!("{}N", self.labels[reps[a]]),
        )
    }

    /// Invariant used to drop obvious duplicates from the catalog.
    pub fn fingerprint(&self) -> (usize, bool, Vec<(usize, usize)>) {
        let mut profile: Vec<(usize, usize)> = (0..self.order)
            .map(|x| {
                let centralizer = (0..self.order).filter(|&y| self.mul(x, y) == self.mul(y, x)).count();
                (self.element_order(x), centralizer)
            })
            .collect();
        profile.sort_unstable();
        (self.order, self.is_abelian(), profile)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for i in 0..p.len() {
        if seen[i] || p[i] == i {
            continue;
        }
        let mut cycle = vec![i + 1];
        seen[i] = true;
        let mut j = p[i];
        while j != i {
            seen[j] = true;
            cycle.push(j + 1);
            j = p[j];
        }
        let body: Vec<String> = cycle.iter().map(usize::to_string).collect();
        out.push_str(&format!("({})", body.join(" ")));
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructions() {
        assert_eq!(FiniteGroup::trivial().order(), 1);
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(FiniteGroup::symmetric(4).unwrap().order(), 24);
        assert_eq!(FiniteGroup::alternating4().order(), 12);
        let q8 = FiniteGroup::dicyclic(2);
        assert_eq!(q8.order(), 8);
        assert_eq!((0..8).filter(|&x| q8.element_order(x) == 4).count(), 6);
        assert_eq!(FiniteGroup::dihedral(4).fingerprint().0, 8);
        assert_ne!(FiniteGroup::dihedral(4).fingerprint(), q8.fingerprint());
        assert_eq!(FiniteGroup::dihedral(3).fingerprint(), s3.fingerprint());
        let z7z3 = FiniteGroup::semidirect_cyclic(7, 3, 2).unwrap();
        assert_eq!(z7z3.order(), 21);
        assert!(FiniteGroup::semidirect_cyclic(7, 3, 3).is_err());
        let p = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3)).unwrap();
        assert_eq!(p.fingerprint(), FiniteGroup::cyclic(6).fingerprint());
        assert_eq!(s3.exponent(), 6);
        let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)).unwrap();
        assert!(FiniteGroup::generalized_dihedral(&v4).unwrap().is_abelian());
        let dih4 = FiniteGroup::generalized_dihedral(&FiniteGroup::cyclic(4)).unwrap();
        assert_eq!(dih4.fingerprint(), FiniteGroup::dihedral(4).fingerprint());
        let sl = FiniteGroup::sl2_3();
        assert_eq!(sl.order(), 24);
        assert_eq!((0..24).filter(|&x| sl.element_order(x) == 2).count(), 1);
    }

    #[test]
    fn rejects_non_groups() {
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroup::from_table("x", bad, vec!["e".into(), "a".into()]).is_err());
        let big = (0..65).map(|x| (0..65).map(|y| (x + y) % 65).collect()).collect();
        assert_eq!(
            FiniteGroup::from_table("z65", big, (0..65).map(|i| i.to_string()).collect()),
            Err(Error::OrderCapExceeded { order: 65, cap: 64 })
        );
    }

    #[test]
    fn subgroups_and_quotients() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.subgroups().len(), 6);
        assert_eq!(s3.normal_subgroups().len(), 3);
        let a3 = s3.normal_subgroups().into_iter().find(|s| s.order() == 3).unwrap();
        let q = s3.quotient(a3).unwrap();
        assert_eq!(q.fingerprint(), FiniteGroup::cyclic(2).fingerprint());
        let two = s3.subgroups().into_iter().find(|s| s.order() == 2).unwrap();
        assert_eq!(s3.quotient(two).unwrap_err(), Error::NotNormal);
        assert_eq!(FiniteGroup::symmetric(4).unwrap().subgroups().len(), 30);
        assert_eq!(FiniteGroup::cyclic(12).subgroups().len(), 6);
    }

    #[test]
    fn labels() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.label(s3.identity()), "()");
        assert!((0..6).any(|x| s3.label(x) == "(1 2 3)"));
    }
}
