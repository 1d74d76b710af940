use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::config::Bounds;
use crate::error::{Error, Result};
use crate::zmod::{Mat, Zle};

/// Generators of a subgroup of E[ℓ^e]^r, as coordinate vectors in (Z/ℓ^e)^{2r}
/// with respect to the torsion basis of each factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupData {
    pub r: usize,
    #[serde(rename = "l")]
    pub ell: u64,
    pub e: u32,
    pub generators: Vec<Vec<u64>>,
}

/// A subgroup of (Z/ℓ^e)^dim stored as a membership bitset over all vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    ring: Zle,
    dim: usize,
    bits: Vec<u64>,
}

fn universe(ring: Zle, dim: usize) -> usize {
    (ring.n as usize).pow(dim as u32)
}

/// Fails unless (Z/ℓ^e)^dim has at most `bounds.group_elements` elements.
pub fn check_universe(ring: Zle, dim: usize, bounds: &Bounds) -> Result<()> {
    let size = (ring.n as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if size > bounds.group_elements as u128 {
        return Err(Error::bound("subgroup universe", size, bounds.group_elements as u128));
    }
    Ok(())
}

impl Subgroup {
    pub fn zero(ring: Zle, dim: usize) -> Self {
        let mut s = Subgroup { ring, dim, bits: vec![0; universe(ring, dim).div_ceil(64)] };
        s.set(0);
        s
    }

    pub fn full(ring: Zle, dim: usize) -> Self {
        let n = universe(ring, dim);
        let mut s = Subgroup { ring, dim, bits: vec![0; n.div_ceil(64)] };
        (0..n).for_each(|i| s.set(i));
        s
    }

    pub fn span(ring: Zle, dim: usize, gens: &[Vec<u64>]) -> Self {
        gens.iter().fold(Subgroup::zero(ring, dim), |s, g| s.with(g))
    }

    pub fn ring(&self) -> Zle {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn set(&mut self, i: usize) {
        self.bits[i / 64] |= 1 << (i % 64);
    }

    fn has(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    fn index(&self, v: &[u64]) -> usize {
        v.iter().rev().fold(0, |acc, &x| acc * self.ring.n as usize + (x % self.ring.n) as usize)
    }

    fn vector(&self, mut i: usize) -> Vec<u64> {
        let n = self.ring.n as usize;
        (0..self.dim)
            .map(|_| {
                let x = i % n;
                i /= n;
                x as u64
            })
            .collect()
    }

    fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..universe(self.ring, self.dim)).filter(|&i| self.has(i))
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.has(self.index(v))
    }

    pub fn order(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn elements(&self) -> Vec<Vec<u64>> {
        self.indices().map(|i| self.vector(i)).collect()
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| self.ring.add(x, y)).collect()
    }

    /// The subgroup generated by `self` and `v`.
    pub fn with(&self, v: &[u64]) -> Subgroup {
        if self.contains(v) {
            return self.clone();
        }
        let base = self.elements();
        let mut out = self.clone();
        let mut kv = v.to_vec();
        while !self.contains(&kv) {
            for s in &base {
                let i = out.index(&self.add(s, &kv));
                out.set(i);
            }
            kv = self.add(&kv, v);
        }
        out
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect();
        Subgroup { ring: self.ring, dim: self.dim, bits }
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// A generating set, chosen greedily in index order.
    pub fn generators(&self) -> Vec<Vec<u64>> {
        let mut span = Subgroup::zero(self.ring, self.dim);
        let mut gens = Vec::new();
        for i in self.indices() {
            if !span.has(i) {
                let v = self.vector(i);
                span = span.with(&v);
                gens.push(v);
            }
        }
        gens
    }

    /// Whether x ↦ m·x maps the subgroup into itself.
    pub fn is_stable(&self, m: &Mat) -> bool {
        self.generators().iter().all(|g| self.contains(&self.ring.mat_vec(m, g)))
    }

    /// G₁ × G₂ inside (Z/ℓ^e)^{dim₁ + dim₂}.
    pub fn product(&self, other: &Subgroup) -> Subgroup {
        let dim = self.dim + other.dim;
        let mut gens: Vec<Vec<u64>> =
            self.generators().into_iter().map(|g| [g, vec![0; other.dim]].concat()).collect();
        gens.extend(other.generators().into_iter().map(|g| [vec![0; self.dim], g].concat()));
        Subgroup::span(self.ring, dim, &gens)
    }

    pub fn to_data(&self) -> SubgroupData {
        SubgroupData { r: self.dim / 2, ell: self.ring.ell, e: self.ring.e, generators: self.generators() }
    }
}

/// The 2r×2r block-diagonal matrix with r copies of `m`.
pub fn block_diag(ring: Zle, m: &Mat, r: usize) -> Mat {
    let mut out = ring.zeros(2 * r, 2 * r);
    for k in 0..r {
        for i in 0..2 {
            for j in 0..2 {
                out[2 * k + i][2 * k + j] = m[i][j] % ring.n;
            }
        }
    }
    out
}

/// All subgroups of (Z/ℓ^e)^dim stable under `frob`, sorted. Each one is reached from
/// a smaller stable subgroup S by adding the Frobenius-cyclic submodule of a vector,
/// one vector per coset of S.
pub fn stable_subgroups(ring: Zle, dim: usize, frob: &Mat, bounds: &Bounds) -> Result<Vec<Subgroup>> {
    check_universe(ring, dim, bounds)?;
    let zero = Subgroup::zero(ring, dim);
    let mut seen: HashSet<Subgroup> = HashSet::from([zero.clone()]);
    let mut queue = vec![zero];
    while let Some(s) = queue.pop() {
        let members = s.elements();
        let mut done = s.clone();
        for i in 0..universe(ring, dim) {
            if done.has(i) {
                continue;
            }
            let v = s.vector(i);
            for m in &members {
                let j = s.index(&s.add(m, &v));
                done.set(j);
            }
            let mut t = s.clone();
            let mut w = v;
            while !t.contains(&w) {
                t = t.with(&w);
                w = ring.mat_vec(frob, &w);
            }
            if seen.insert(t.clone()) {
                if seen.len() as u64 > bounds.group_elements {
                    return Err(Error::bound("stable subgroups", seen.len() as u128, bounds.group_elements as u128));
                }
                queue.push(t);
            }
        }
    }
    let mut out: Vec<Subgroup> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}
