//! Denseness tests and closures in the pro-`V` topologies for `Ab_d`, `G_p`,
//! `H_p = G_p * Ab_{p-1}`, `Nil` and `Su`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{check_prime, next_prime, prime_factors};
use crate::error::{Error, Result};
use crate::lattice::{fringe, intersect, join, join_all, merge_vertices, BasisDictionary, FringeConfig};
use crate::modlin::{abelian_image, coset_graph, integer_span_is_full, magnus_image, MagnusSubgroup};
use crate::stallings::{find_morphism, Index, LabeledGraph};

/// Largest `(p-1)^n` for which the Magnus cross-checks run.
pub const MAGNUS_LIMIT: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variety {
    Ab(u64),
    Gp(u64),
    Hp(u64),
    Nil,
    Su,
}

impl Variety {
    pub fn validate(self) -> Result<Self> {
        match self {
            Variety::Ab(0) => Err(Error::InvalidParameter("ab:d needs d >= 1".into())),
            Variety::Gp(p) | Variety::Hp(p) => check_prime(p).map(|_| self),
            _ => Ok(self),
        }
    }
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variety::Ab(d) => write!(f, "ab:{d}"),
            Variety::Gp(p) => write!(f, "gp:{p}"),
            Variety::Hp(p) => write!(f, "hp:{p}"),
            Variety::Nil => write!(f, "nil"),
            Variety::Su => write!(f, "su"),
        }
    }
}

impl FromStr for Variety {
    type Err = Error;

    /// `ab:d`, `gp:p`, `hp:p`, `nil` or `su`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let bad = || Error::InvalidParameter(format!("unknown variety '{s}'"));
        let v = match s.split_once(':') {
            None if s == "nil" => Variety::Nil,
            None if s == "su" => Variety::Su,
            None => return Err(bad()),
            Some((kind, arg)) => {
                let k: u64 = arg.parse().map_err(|_| bad())?;
                match kind {
                    "ab" => Variety::Ab(k),
                    "gp" => Variety::Gp(k),
                    "hp" => Variety::Hp(k),
                    _ => return Err(bad()),
                }
            }
        };
        v.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClosureStatus {
    Exact,
    /// The result contains the true closure.
    SoundUpper,
}

impl fmt::Display for ClosureStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosureStatus::Exact => "EXACT",
            ClosureStatus::SoundUpper => "SOUND_UPPER",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ClosureResult {
    pub graph: LabeledGraph,
    pub variety: Variety,
    pub status: ClosureStatus,
    pub primes_used: Vec<u64>,
    /// Checks that passed while computing the result, plus any warnings.
    pub certificates: Vec<String>,
}

impl ClosureResult {
    pub fn to_json(&self) -> serde_json::Value {
        let a = self.graph.alphabet();
        let gens: Vec<String> = self.graph.generators().iter().map(|w| a.format(w)).collect();
        serde_json::json!({
            "variety": self.variety.to_string(),
            "status": self.status,
            "primes_used": self.primes_used,
            "graph": self.graph.to_json(),
            "generators": gens,
            "certificates": self.certificates,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureConfig {
    pub fringe: FringeConfig,
    /// Run the Magnus-quotient checks when `(p-1)^n <= MAGNUS_LIMIT`.
    pub cross_check: bool,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        ClosureConfig { fringe: FringeConfig::default(), cross_check: true }
    }
}

/// Which primes `cl_nil` and `cl_su` intersect over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePolicy {
    /// Always processed, in ascending order.
    pub base_primes: Vec<u64>,
    /// Stop once the running intersection has not changed for this many primes.
    pub stability_window: usize,
    /// No prime above this is tried beyond the base primes.
    pub max_prime: u64,
}

impl Default for PrimePolicy {
    fn default() -> Self {
        PrimePolicy { base_primes: vec![2, 3, 5, 7], stability_window: 3, max_prime: 31 }
    }
}

impl PrimePolicy {
    /// Exactly the given primes.
    pub fn fixed(primes: &[u64]) -> Self {
        PrimePolicy {
            base_primes: primes.to_vec(),
            stability_window: 0,
            max_prime: primes.iter().copied().max().unwrap_or(2),
        }
    }

    fn base(&self) -> Result<Vec<u64>> {
        let mut base = self.base_primes.clone();
        for &p in &base {
            check_prime(p)?;
        }
        base.sort_unstable();
        base.dedup();
        Ok(base)
    }
}

fn check_modulus(d: u64) -> Result<()> {
    if d == 0 {
        Err(Error::InvalidParameter("modulus must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn whole(h: &LabeledGraph) -> LabeledGraph {
    LabeledGraph::bouquet(h.alphabet())
}

fn cross_check_applies(h: &LabeledGraph, p: u64, config: &ClosureConfig) -> bool {
    config.cross_check
        && ((p - 1) as usize)
            .checked_pow(h.alphabet().len() as u32)
            .is_some_and(|q| q <= MAGNUS_LIMIT)
}

pub fn ab_dense(h: &LabeledGraph, d: u64) -> Result<bool> {
    check_modulus(d)?;
    Ok(abelian_image(&h.generators(), h.alphabet().len(), d)?.is_full())
}

/// `H [F,F] F^d`.
pub fn cl_ab(h: &LabeledGraph, d: u64) -> Result<ClosureResult> {
    check_modulus(d)?;
    let image = abelian_image(&h.generators(), h.alphabet().len(), d)?;
    let graph = coset_graph(&image, h.alphabet())?;
    if find_morphism(h, &graph)?.is_none() {
        return Err(Error::CertificateFailure("coset graph does not contain H".into()));
    }
    Ok(ClosureResult {
        certificates: vec![
            format!("image of H in (Z/{d}Z)^{} has order {}", image.dim(), image.subgroup_order()),
            format!("coset graph is complete with {} vertices and contains H", graph.vertex_count()),
        ],
        graph,
        variety: Variety::Ab(d),
        status: ClosureStatus::Exact,
        primes_used: Vec::new(),
    })
}

pub fn gp_dense(h: &LabeledGraph, p: u64) -> Result<bool> {
    check_prime(p)?;
    ab_dense(h, p)
}

/// Whether `H` is `G_p`-dense in `K`, read off in the free group on a
/// Schreier basis of `K`. Trivial `K` counts as dense.
pub fn intrinsic_gp_dense(h: &LabeledGraph, k: &LabeledGraph, p: u64) -> Result<bool> {
    check_prime(p)?;
    if find_morphism(h, k)?.is_none() {
        return Err(Error::NotASubgroup);
    }
    let rank = k.rank();
    if rank == 0 {
        return Ok(true);
    }
    let dict = BasisDictionary::new(k);
    let vectors = h
        .generators()
        .iter()
        .map(|w| Ok(dict.rewrite(w)?.exponent_sums(rank)))
        .collect::<Result<Vec<_>>>()?;
    Ok(crate::modlin::ModSubgroup::generated_by(p, rank, &vectors)?.is_full())
}

/// Join of the overgroups of `H` in which `H` is `G_p`-dense.
pub fn cl_gp(h: &LabeledGraph, p: u64, config: &ClosureConfig) -> Result<ClosureResult> {
    check_prime(p)?;
    let fail = |what: &str| Err(Error::CertificateFailure(format!("cl_gp p={p}: {what}")));
    let fr = match fringe(h, &config.fringe) {
        Ok(fr) => Some(fr),
        Err(Error::FringeCapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut certificates = Vec::new();
    let graph = match &fr {
        Some(fr) => {
            let mut dense = Vec::new();
            for k in fr.graphs() {
                if intrinsic_gp_dense(h, k, p)? {
                    dense.push(k.clone());
                }
            }
            let graph = join_all(&dense)?.expect("H is dense in itself");
            if !fr.contains(&graph) {
                return fail("result is not in the fringe of H");
            }
            for k in &dense {
                if find_morphism(k, &graph)?.is_none() {
                    return fail("a dense overgroup is not contained in the result");
                }
            }
            certificates.push(format!(
                "fringe of H has {} members, {} with H {p}-dense in them",
                fr.len(),
                dense.len()
            ));
            certificates.push("result contains every overgroup in which H is dense".into());
            if config.cross_check {
                if gp_ascent(h, p)? != graph {
                    return fail("greedy ascent disagrees with the fringe search");
                }
                certificates.push("greedy ascent reaches the same subgroup".into());
            }
            graph
        }
        None => {
            let graph = gp_ascent(h, p)?;
            certificates.push(format!(
                "fringe of H over the cap; greedy ascent from {} to {} vertices",
                h.vertex_count(),
                graph.vertex_count()
            ));
            graph
        }
    };

    if !find_morphism(h, &graph)?.is_some_and(|m| m.surjective) {
        return fail("result is not a surjective image of H's graph");
    }
    if !intrinsic_gp_dense(h, &graph, p)? {
        return fail("H is not p-dense in the result");
    }
    certificates.insert(1, "result is a surjective image of H's graph (lies in the fringe)".into());
    certificates.insert(2, format!("H is {p}-dense in the result"));
    certificates.push("completeness: the G_p-closure of H lies in its fringe".into());
    Ok(ClosureResult {
        certificates,
        graph,
        variety: Variety::Gp(p),
        status: ClosureStatus::Exact,
        primes_used: vec![p],
    })
}

// Subgroups between H and its closure are exactly those in which H is dense,
// and each is reachable from H by single merges through such subgroups.
fn gp_ascent(h: &LabeledGraph, p: u64) -> Result<LabeledGraph> {
    let mut k = h.clone();
    'outer: loop {
        for u in 0..k.vertex_count() {
            for v in u + 1..k.vertex_count() {
                let q = merge_vertices(&k, u, v);
                if intrinsic_gp_dense(h, &q, p)? {
                    k = q;
                    continue 'outer;
                }
            }
        }
        return Ok(k);
    }
}

/// Condition: `H` is `Ab_{p-1}`-dense and `H ∩ N_{p-1}` is `Ab_p`-dense in `N_{p-1}`.
pub fn hp_dense(h: &LabeledGraph, p: u64) -> Result<bool> {
    check_prime(p)?;
    if p == 2 {
        return gp_dense(h, 2);
    }
    if !ab_dense(h, p - 1)? {
        return Ok(false);
    }
    let n = LabeledGraph::cayley((p - 1) as usize, h.alphabet())?;
    let i = intersect(h, &n)?;
    intrinsic_gp_dense(&i, &n, p)
}

/// Condition: `H [N,N] N^p = F` with `N = N_{p-1}`, decided in the Magnus model.
pub fn hp_dense_quotient(h: &LabeledGraph, p: u64) -> Result<bool> {
    check_prime(p)?;
    let n = h.alphabet().len();
    let image = MagnusSubgroup::from_words(&h.generators(), n, p)?;
    let all = MagnusSubgroup::whole(n, p)?;
    Ok(image.order() == all.order())
}

/// [`hp_dense`] cross-checked against [`hp_dense_quotient`].
pub fn hp_dense_checked(h: &LabeledGraph, p: u64) -> Result<bool> {
    let rank_test = hp_dense(h, p)?;
    let quotient_test = hp_dense_quotient(h, p)?;
    if rank_test != quotient_test {
        return Err(Error::CertificateFailure(format!(
            "hp_dense p={p}: rank test says {rank_test}, quotient test says {quotient_test}"
        )));
    }
    Ok(rank_test)
}

/// `G_p`-closure of `H ∩ N_{p-1}` inside `N_{p-1}`, joined with `H`.
pub fn cl_hp(h: &LabeledGraph, p: u64, config: &ClosureConfig) -> Result<ClosureResult> {
    check_prime(p)?;
    if p == 2 {
        let mut r = cl_gp(h, 2, config)?;
        r.variety = Variety::Hp(2);
        return Ok(r);
    }
    let k = LabeledGraph::cayley((p - 1) as usize, h.alphabet())?;
    let i = intersect(h, &k)?;
    let dict = BasisDictionary::new(&k);
    let j = dict.restrict(&i)?;
    let inner = cl_gp(&j, p, config)?;
    let c = dict.blow_up(&inner.graph)?;
    let graph = join(&c, h)?;

    let fail = |what: &str| Err(Error::CertificateFailure(format!("cl_hp p={p}: {what}")));
    if !find_morphism(h, &graph)?.is_some_and(|m| m.surjective) {
        return fail("result is not a surjective image of H's graph");
    }
    let mut certificates = vec![
        format!(
            "H ∩ N_{} has rank {} inside N_{} of rank {}",
            p - 1,
            i.rank(),
            p - 1,
            k.rank()
        ),
        "result is a surjective image of H's graph (lies in the fringe)".into(),
    ];
    if cross_check_applies(h, p, config) {
        let n = h.alphabet().len();
        let image = MagnusSubgroup::from_words(&h.generators(), n, p)?;
        for w in graph.generators() {
            if !image.contains(&magnus_image(&w, n, p)?) {
                return fail("result escapes H [N,N] N^p");
            }
        }
        certificates.push(format!("result lies in H [N,N] N^p (quotient of order {})", MagnusSubgroup::whole(n, p)?.order()));
    } else {
        certificates.push("Magnus cross-check skipped".into());
    }
    certificates.extend(inner.certificates.iter().map(|c| format!("inner: {c}")));
    Ok(ClosureResult {
        graph,
        variety: Variety::Hp(p),
        status: inner.status,
        primes_used: vec![p],
        certificates,
    })
}

fn intersect_over_primes(
    h: &LabeledGraph,
    variety: Variety,
    policy: &PrimePolicy,
    mut per_prime: impl FnMut(u64) -> Result<ClosureResult>,
) -> Result<ClosureResult> {
    let base = policy.base()?;
    let mut running: Option<LabeledGraph> = None;
    let mut streak = 0;
    let mut used = Vec::new();
    let mut terms = Vec::new();
    let mut stable = false;
    let mut tried = 0;
    let mut p = 1;
    let mut queue = base.clone().into_iter();
    loop {
        p = match queue.next() {
            Some(q) => q,
            None => {
                let q = next_prime(p.max(base.last().copied().unwrap_or(1)));
                if q > policy.max_prime {
                    break;
                }
                q
            }
        };
        tried += 1;
        let term = per_prime(p)?.graph;
        let next = match &running {
            Some(r) => intersect(r, &term)?,
            None => term.clone(),
        };
        if running.as_ref() == Some(&next) {
            streak += 1;
        } else {
            streak = 0;
        }
        running = Some(next);
        used.push(p);
        terms.push(term);
        if tried >= base.len() && streak >= policy.stability_window {
            stable = true;
            break;
        }
    }
    let graph = running.unwrap_or_else(|| whole(h));

    let fail = |what: String| Err(Error::CertificateFailure(format!("cl_{variety}: {what}")));
    if find_morphism(h, &graph)?.is_none() {
        return fail("result does not contain H".into());
    }
    for (q, t) in used.iter().zip(&terms) {
        if find_morphism(&graph, t)?.is_none() {
            return fail(format!("result not contained in the term for p={q}"));
        }
    }
    let mut certificates = vec![
        "result contains H".to_string(),
        format!("result is contained in each per-prime closure for p in {used:?}"),
        format!("Schreier basis of the result has {} words = rank", graph.rank()),
    ];
    if graph == *h {
        certificates.push("upper bound equals H, so H is closed".into());
    }
    if !stable {
        certificates.push(format!(
            "warning: policy exhausted at max_prime {} without {} stable primes",
            policy.max_prime, policy.stability_window
        ));
    }
    Ok(ClosureResult { graph, variety, status: ClosureStatus::SoundUpper, primes_used: used, certificates })
}

/// Intersection of `G_p`-closures over the primes chosen by `policy`.
pub fn cl_nil(h: &LabeledGraph, policy: &PrimePolicy, config: &ClosureConfig) -> Result<ClosureResult> {
    intersect_over_primes(h, Variety::Nil, policy, |p| cl_gp(h, p, config))
}

/// Intersection of `H_p`-closures over the primes chosen by `policy`.
pub fn cl_su(h: &LabeledGraph, policy: &PrimePolicy, config: &ClosureConfig) -> Result<ClosureResult> {
    intersect_over_primes(h, Variety::Su, policy, |p| cl_hp(h, p, config))
}

pub fn closure(
    h: &LabeledGraph,
    variety: Variety,
    policy: &PrimePolicy,
    config: &ClosureConfig,
) -> Result<ClosureResult> {
    match variety.validate()? {
        Variety::Ab(d) => cl_ab(h, d),
        Variety::Gp(p) => cl_gp(h, p, config),
        Variety::Hp(p) => cl_hp(h, p, config),
        Variety::Nil => cl_nil(h, policy, config),
        Variety::Su => cl_su(h, policy, config),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseVerdict {
    pub dense: bool,
    /// `SoundUpper` when a positive answer only covers `primes_used`.
    pub status: ClosureStatus,
    pub primes_used: Vec<u64>,
}

impl DenseVerdict {
    fn exact(dense: bool) -> Self {
        DenseVerdict { dense, status: ClosureStatus::Exact, primes_used: Vec::new() }
    }
}

/// Denseness for every variety. `Nil` is decided over `Z`; `Su` is exact
/// for finite-index `H` (only primes dividing the index can fail) and
/// otherwise limited to the primes of `policy`.
pub fn dense(h: &LabeledGraph, variety: Variety, policy: &PrimePolicy) -> Result<DenseVerdict> {
    let n = h.alphabet().len();
    let nil_dense = || {
        let vectors: Vec<Vec<i64>> = h.generators().iter().map(|w| w.exponent_sums(n)).collect();
        integer_span_is_full(&vectors, n)
    };
    Ok(match variety.validate()? {
        Variety::Ab(d) => DenseVerdict::exact(ab_dense(h, d)?),
        Variety::Gp(p) => DenseVerdict::exact(gp_dense(h, p)?),
        Variety::Hp(p) => DenseVerdict::exact(hp_dense(h, p)?),
        Variety::Nil => DenseVerdict::exact(nil_dense()?),
        Variety::Su => {
            if !nil_dense()? {
                return Ok(DenseVerdict::exact(false));
            }
            match h.index() {
                Index::Finite(m) => {
                    let primes = prime_factors(m as u64);
                    let mut dense = true;
                    for &p in &primes {
                        dense &= hp_dense(h, p)?;
                    }
                    DenseVerdict { dense, status: ClosureStatus::Exact, primes_used: primes }
                }
                Index::Infinite => {
                    let mut used = Vec::new();
                    let mut p = 1;
                    let mut queue = policy.base()?.into_iter();
                    loop {
                        p = match queue.next() {
                            Some(q) => q,
                            None => {
                                let q = next_prime(p);
                                if q > policy.max_prime {
                                    break;
                                }
                                q
                            }
                        };
                        used.push(p);
                        if !hp_dense(h, p)? {
                            return Ok(DenseVerdict { dense: false, status: ClosureStatus::Exact, primes_used: used });
                        }
                    }
                    DenseVerdict { dense: true, status: ClosureStatus::SoundUpper, primes_used: used }
                }
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;

    fn graph(gens: &str) -> LabeledGraph {
        let a = Alphabet::letters(2).unwrap();
        LabeledGraph::from_generators(&a.parse_list(gens).unwrap(), &a).unwrap()
    }

    fn cfg() -> ClosureConfig {
        ClosureConfig::default()
    }

    #[test]
    fn variety_syntax() {
        assert_eq!("ab:4".parse::<Variety>().unwrap(), Variety::Ab(4));
        assert_eq!("HP:3".parse::<Variety>().unwrap(), Variety::Hp(3));
        assert_eq!("su".parse::<Variety>().unwrap(), Variety::Su);
        assert_eq!("gp:4".parse::<Variety>(), Err(Error::NotPrime(4)));
        assert!("ab:0".parse::<Variety>().is_err());
        assert!("xyz".parse::<Variety>().is_err());
        for v in ["ab:6", "gp:5", "hp:7", "nil", "su"] {
            assert_eq!(v.parse::<Variety>().unwrap().to_string(), v);
        }
    }

    #[test]
    fn abelian_examples() {
        assert!(ab_dense(&graph("a,b"), 6).unwrap());
        assert!(!ab_dense(&graph("aa,b"), 2).unwrap());
        assert!(ab_dense(&graph("aa,b"), 3).unwrap());
        assert!(cl_ab(&graph("a,b"), 5).unwrap().graph.is_whole_group());
        let r = cl_ab(&graph("a"), 3).unwrap();
        assert_eq!(r.graph, graph("a,bbb,baB,bbaBB"));
        assert_eq!(cl_ab(&graph(""), 2).unwrap().graph, LabeledGraph::cayley(2, graph("").alphabet()).unwrap());
        assert!(ab_dense(&graph("a"), 0).is_err());
    }

    #[test]
    fn gp_examples() {
        assert!(gp_dense(&graph("a,b"), 5).unwrap());
        assert!(!gp_dense(&graph("aa,b"), 2).unwrap());
        assert!(gp_dense(&graph("aaa,b"), 2).unwrap());
        assert!(intrinsic_gp_dense(&graph("aa"), &graph("a"), 3).unwrap());
        assert!(!intrinsic_gp_dense(&graph("aa"), &graph("a"), 2).unwrap());
        let h = graph("abAb,BAbAb");
        assert!(intrinsic_gp_dense(&h, &h, 7).unwrap());
        assert_eq!(intrinsic_gp_dense(&graph("a"), &graph("aa"), 3), Err(Error::NotASubgroup));
        assert_eq!(cl_gp(&graph("aa"), 3, &cfg()).unwrap().graph, graph("a"));
        assert_eq!(cl_gp(&graph("aa"), 2, &cfg()).unwrap().graph, graph("aa"));
        assert!(cl_gp(&graph("a,b"), 3, &cfg()).unwrap().graph.is_whole_group());
        assert_eq!(cl_gp(&graph(""), 3, &cfg()).unwrap().graph, graph(""));
    }

    #[test]
    fn ascent_matches_fringe_search() {
        let tight = ClosureConfig { fringe: FringeConfig { max_vertices: 1, max_members: 1 }, cross_check: true };
        for gens in ["aa", "aaa,bab", "abAB", "aab,bba", "aaaaaa,bAbab"] {
            for p in [2, 3, 5] {
                let h = graph(gens);
                let full = cl_gp(&h, p, &cfg()).unwrap();
                let fallback = cl_gp(&h, p, &tight).unwrap();
                assert_eq!(full.graph, fallback.graph, "{gens} p={p}");
            }
        }
    }

    #[test]
    fn hp_examples() {
        assert!(hp_dense(&graph("a,b"), 5).unwrap());
        assert!(!hp_dense(&graph("aa"), 3).unwrap());
        let index_five = graph("a,bbbbb,baB,bbaBB,bbbaBBB,bbbbaBBBB");
        assert_eq!(index_five.index(), Index::Finite(5));
        assert!(hp_dense_checked(&index_five, 3).unwrap());
        assert_eq!(cl_hp(&graph("aaa"), 3, &cfg()).unwrap().graph, graph("aaa"));
        assert_eq!(cl_hp(&graph("aaa"), 5, &cfg()).unwrap().graph, graph("a"));
        assert!(cl_hp(&graph("a,b"), 7, &cfg()).unwrap().graph.is_whole_group());
        assert_eq!(cl_hp(&graph(""), 5, &cfg()).unwrap().graph, graph(""));
        assert_eq!(cl_hp(&graph("aa"), 2, &cfg()).unwrap().variety, Variety::Hp(2));
    }

    #[test]
    fn su_and_nil_examples() {
        let policy = PrimePolicy::default();
        let r = cl_su(&graph("aaa"), &policy, &cfg()).unwrap();
        assert_eq!(r.graph, graph("aaa"));
        assert_eq!(r.status, ClosureStatus::SoundUpper);
        assert_eq!(r.primes_used, vec![2, 3, 5, 7, 11]);
        assert_eq!(cl_su(&graph("aa"), &policy, &cfg()).unwrap().graph, graph("aa"));
        assert!(cl_su(&graph("a,b"), &policy, &cfg()).unwrap().graph.is_whole_group());
        // nilpotent closure of <a^3> is <a>: only 3-groups see the index
        let r = cl_nil(&graph("aaa"), &policy, &cfg()).unwrap();
        assert_eq!(r.graph, graph("aaa"));
        let r = cl_nil(&graph("aaa"), &PrimePolicy::fixed(&[2, 5]), &cfg()).unwrap();
        assert_eq!(r.graph, graph("a"));
        assert_eq!(r.primes_used, vec![2, 5]);
    }

    #[test]
    fn policy_exhaustion_is_a_warning() {
        let policy = PrimePolicy { base_primes: vec![2], stability_window: 10, max_prime: 7 };
        let r = cl_su(&graph("aaa"), &policy, &cfg()).unwrap();
        assert_eq!(r.primes_used, vec![2, 3, 5, 7]);
        assert!(r.certificates.iter().any(|c| c.starts_with("warning")));
        assert_eq!(
            cl_su(&graph("a"), &PrimePolicy::fixed(&[4]), &cfg()).unwrap_err(),
            Error::NotPrime(4)
        );
    }

    #[test]
    fn denseness_verdicts() {
        let p = PrimePolicy::default();
        assert!(!dense(&graph("aa"), Variety::Hp(3), &p).unwrap().dense);
        assert!(dense(&graph("a,b"), Variety::Su, &p).unwrap().dense);
        assert!(!dense(&graph("aa,b"), Variety::Nil, &p).unwrap().dense);
        assert!(dense(&graph("aaab,aab"), Variety::Nil, &p).unwrap().dense);
        let index_five = graph("a,bbbbb,baB,bbaBB,bbbaBBB,bbbbaBBBB");
        assert_eq!(dense(&index_five, Variety::Su, &p).unwrap(), DenseVerdict::exact(false));
        // stabilizer of a point for a -> (123), b -> (12): nil-dense, index 3, not Su-dense
        let a = Alphabet::letters(2).unwrap();
        let edges = [(0, 0, 1), (1, 0, 2), (2, 0, 0), (0, 1, 1), (1, 1, 0), (2, 1, 2)]
            .map(|(f, l, t)| crate::stallings::Edge::new(f, l, t));
        let stab = LabeledGraph::from_edges(&a, 3, 2, &edges).unwrap();
        assert!(dense(&stab, Variety::Nil, &p).unwrap().dense);
        let v = dense(&stab, Variety::Su, &p).unwrap();
        assert_eq!(v.primes_used, vec![3]);
        assert_eq!(v.status, ClosureStatus::Exact);
        assert!(!v.dense);
    }

    #[test]
    fn json_shape() {
        let r = cl_gp(&graph("aa"), 3, &cfg()).unwrap();
        let j = r.to_json();
        assert_eq!(j["variety"], "gp:3");
        assert_eq!(j["status"], "EXACT");
        assert_eq!(j["generators"], serde_json::json!(["a"]));
    }
}
