use std::collections::VecDeque;

use num_bigint::BigUint;

use super::ModSubgroup;
use crate::arith::check_prime;
use crate::error::{Error, Result};
use crate::words::Word;

/// Element of `(Z/pZ)[Q]^n ⋊ Q` with `Q = (Z/(p-1)Z)^n`.
///
/// The map sending the `i`-th generator to `(delta_i at 0, e_i)` is the
/// Magnus embedding of `F / [N, N] N^p` with `N = [F, F] F^(p-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MagnusElement {
    p: u64,
    n: usize,
    /// Coordinate `i`, point `x` lives at `i * |Q| + x`.
    derivative: Vec<u64>,
    tail: Vec<u64>,
}

fn q_size(p: u64, n: usize) -> usize {
    ((p - 1) as usize).pow(n as u32)
}

impl MagnusElement {
    pub fn identity(p: u64, n: usize) -> Result<Self> {
        check_prime(p)?;
        Ok(MagnusElement { p, n, derivative: vec![0; n * q_size(p, n)], tail: vec![0; n] })
    }

    pub fn generator(p: u64, n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::InvalidParameter(format!("generator {i} out of range for rank {n}")));
        }
        let mut g = Self::identity(p, n)?;
        g.derivative[i * q_size(p, n)] = 1;
        g.tail[i] = 1 % (p - 1);
        Ok(g)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn tail(&self) -> &[u64] {
        &self.tail
    }

    pub fn tail_index(&self) -> usize {
        encode(&self.tail, self.p - 1)
    }

    pub fn derivative(&self) -> &[u64] {
        &self.derivative
    }

    pub fn is_identity(&self) -> bool {
        self.tail.iter().all(|&t| t == 0) && self.derivative.iter().all(|&c| c == 0)
    }

    /// `perm[y]` is the index of `y + sign * tail`.
    fn translation(&self, negate: bool) -> Vec<usize> {
        let m = self.p - 1;
        let size = q_size(self.p, self.n);
        let mut digits = vec![0u64; self.n];
        let mut perm = Vec::with_capacity(size);
        for _ in 0..size {
            let moved: Vec<u64> = digits
                .iter()
                .zip(&self.tail)
                .map(|(&y, &q)| if negate { (y + m - q) % m } else { (y + q) % m })
                .collect();
            perm.push(encode(&moved, m));
            for d in digits.iter_mut() {
                *d += 1;
                if *d == m {
                    *d = 0;
                } else {
                    break;
                }
            }
        }
        perm
    }

    /// Panics if the two elements live in different groups.
    pub fn mul(&self, other: &MagnusElement) -> MagnusElement {
        assert_eq!((self.p, self.n), (other.p, other.n), "Magnus elements from different groups");
        let size = q_size(self.p, self.n);
        let perm = self.translation(false);
        let mut derivative = self.derivative.clone();
        for i in 0..self.n {
            for (y, &to) in perm.iter().enumerate() {
                let slot = &mut derivative[i * size + to];
                *slot = (*slot + other.derivative[i * size + y]) % self.p;
            }
        }
        let m = self.p - 1;
        let tail = self.tail.iter().zip(&other.tail).map(|(a, b)| (a + b) % m).collect();
        MagnusElement { p: self.p, n: self.n, derivative, tail }
    }

    pub fn inverse(&self) -> MagnusElement {
        let size = q_size(self.p, self.n);
        let perm = self.translation(false);
        let mut derivative = vec![0; self.derivative.len()];
        for i in 0..self.n {
            for (x, &from) in perm.iter().enumerate() {
                derivative[i * size + x] = (self.p - self.derivative[i * size + from]) % self.p;
            }
        }
        let m = self.p - 1;
        let tail = self.tail.iter().map(|&q| (m - q) % m).collect();
        MagnusElement { p: self.p, n: self.n, derivative, tail }
    }
}

fn encode(digits: &[u64], m: u64) -> usize {
    digits.iter().rev().fold(0usize, |acc, &d| acc * m as usize + d as usize)
}

/// Image of `w` in the Magnus model of `F / [N, N] N^p` on `n` generators.
pub fn magnus_image(w: &Word, n: usize, p: u64) -> Result<MagnusElement> {
    let mut x = MagnusElement::identity(p, n)?;
    let gens: Vec<(MagnusElement, MagnusElement)> = (0..n)
        .map(|i| {
            let g = MagnusElement::generator(p, n, i)?;
            let inv = g.inverse();
            Ok((g, inv))
        })
        .collect::<Result<_>>()?;
    for l in w.letters() {
        if l.symbol >= n {
            return Err(Error::DimensionMismatch { expected: n, found: l.symbol + 1 });
        }
        let (g, inv) = &gens[l.symbol];
        x = x.mul(if l.inverse { inv } else { g });
    }
    Ok(x)
}

/// Subgroup of the Magnus model, stored as a transversal of its tails
/// together with its intersection with the derivative part, computed via
/// Schreier generators.
#[derive(Clone, Debug)]
pub struct MagnusSubgroup {
    p: u64,
    n: usize,
    transversal: Vec<Option<MagnusElement>>,
    kernel: ModSubgroup,
}

impl MagnusSubgroup {
    pub fn generated_by(p: u64, n: usize, gens: &[MagnusElement]) -> Result<Self> {
        let identity = MagnusElement::identity(p, n)?;
        for g in gens {
            if (g.p, g.n) != (p, n) {
                return Err(Error::InvalidParameter("generator from a different Magnus group".into()));
            }
        }
        let size = q_size(p, n);
        let mut transversal: Vec<Option<MagnusElement>> = vec![None; size];
        transversal[0] = Some(identity);
        let mut queue = VecDeque::from([0usize]);
        while let Some(q) = queue.pop_front() {
            let t = transversal[q].clone().expect("visited");
            for g in gens {
                let x = t.mul(g);
                let r = x.tail_index();
                if transversal[r].is_none() {
                    transversal[r] = Some(x);
                    queue.push_back(r);
                }
            }
        }
        let mut vectors = Vec::new();
        for t in transversal.iter().flatten() {
            for g in gens {
                let x = t.mul(g);
                let back = transversal[x.tail_index()].as_ref().expect("closed under generators");
                let y = x.mul(&back.inverse());
                debug_assert!(y.tail_index() == 0);
                vectors.push(y.derivative.iter().map(|&c| c as i64).collect());
            }
        }
        let kernel = ModSubgroup::generated_by(p, n * size, &vectors)?;
        Ok(MagnusSubgroup { p, n, transversal, kernel })
    }

    pub fn from_words(gens: &[Word], n: usize, p: u64) -> Result<Self> {
        let images = gens.iter().map(|w| magnus_image(w, n, p)).collect::<Result<Vec<_>>>()?;
        Self::generated_by(p, n, &images)
    }

    /// Image of the whole free group.
    pub fn whole(n: usize, p: u64) -> Result<Self> {
        let gens = (0..n).map(|i| MagnusElement::generator(p, n, i)).collect::<Result<Vec<_>>>()?;
        Self::generated_by(p, n, &gens)
    }

    pub fn tail_count(&self) -> usize {
        self.transversal.iter().flatten().count()
    }

    pub fn kernel(&self) -> &ModSubgroup {
        &self.kernel
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.tail_count()) * self.kernel.subgroup_order()
    }

    pub fn contains(&self, x: &MagnusElement) -> bool {
        if (x.p, x.n) != (self.p, self.n) {
            return false;
        }
        let Some(t) = &self.transversal[x.tail_index()] else { return false };
        let y = x.mul(&t.inverse());
        let v: Vec<i64> = y.derivative.iter().map(|&c| c as i64).collect();
        self.kernel.member_vec(&v).expect("dimension matches")
    }
}
