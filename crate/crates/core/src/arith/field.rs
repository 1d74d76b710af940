use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::poly;
use crate::config::Bounds;
use crate::error::{Error, Result};
use crate::ntheory;

/// Element of a finite field, stored as the integer encoding `sum c_i p^i` of its
/// coefficient vector in the polynomial basis of the field modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fq(pub(crate) u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn encoding(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    p: u32,
    degree: u32,
    order: u32,
    modulus: Vec<u64>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    digit_pow: Vec<u32>,
    half_exp: u64,
    as_roots: OnceLock<Vec<u32>>,
}

/// The field F_{p^m}, built from the smallest monic irreducible modulus with
/// exp/log tables over the smallest primitive element.
#[derive(Clone)]
pub struct FiniteField(Arc<Inner>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.degree == other.0.degree
    }
}
impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.0.p, self.0.degree)
    }
}

fn registry() -> &'static Mutex<HashMap<(u32, u32), FiniteField>> {
    static REG: OnceLock<Mutex<HashMap<(u32, u32), FiniteField>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Smallest monic irreducible polynomial of degree `m` over F_p, where candidates are
/// ordered by the integer encoding of their lower coefficients.
pub(crate) fn smallest_irreducible(p: u64, m: u32) -> Vec<u64> {
    if m == 1 {
        return vec![0, 1];
    }
    let count = p.pow(m);
    for code in 0..count {
        let mut f = poly::decode(code, p, m as usize);
        f.resize(m as usize, 0);
        f.push(1);
        if f[0] != 0 && poly::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FiniteField {
    pub fn new(p: u64, m: u32, bounds: &Bounds) -> Result<Self> {
        if !ntheory::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 || m > bounds.extension_degree {
            return Err(Error::DegreeOutOfRange { degree: m, max: bounds.extension_degree });
        }
        let order = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
        if order > bounds.field_order as u128 || order > u32::MAX as u128 {
            return Err(Error::bound("field order", order, bounds.field_order.min(u32::MAX as u64)));
        }
        let key = (p as u32, m);
        if let Some(f) = registry().lock().unwrap().get(&key) {
            return Ok(f.clone());
        }
        let field = FiniteField(Arc::new(Self::build(p, m)));
        registry().lock().unwrap().entry(key).or_insert(field.clone());
        Ok(field)
    }

    fn build(p: u64, m: u32) -> Inner {
        let modulus = smallest_irreducible(p, m);
        let order = p.pow(m);
        let n1 = order - 1;
        let cofactors: Vec<u64> = ntheory::prime_divisors(n1).into_iter().map(|r| n1 / r).collect();
        let generator = (1..order)
            .find(|&code| {
                let g = poly::decode(code, p, m as usize);
                if g.is_empty() {
                    return false;
                }
                cofactors.iter().all(|&c| poly::powmod(&g, c as u128, &modulus, p) != vec![1])
            })
            .expect("multiplicative group is cyclic");

        let mut digit_pow = Vec::with_capacity(m as usize);
        let mut w = 1u32;
        for _ in 0..m {
            digit_pow.push(w);
            w = w.wrapping_mul(p as u32);
        }

        let mut exp = vec![0u32; n1 as usize];
        let mut log = vec![0u32; order as usize];
        let gdig = {
            let mut g = poly::decode(generator, p, m as usize);
            g.resize(m as usize, 0);
            g
        };
        let mut cur = vec![0u64; m as usize];
        cur[0] = 1;
        let mut prod = vec![0u64; 2 * m as usize];
        for i in 0..n1 as usize {
            let code = poly::encode(&cur, p) as u32;
            exp[i] = code;
            log[code as usize] = i as u32;
            // cur <- cur * g mod modulus
            prod.iter_mut().for_each(|c| *c = 0);
            for (a, &x) in cur.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (b, &y) in gdig.iter().enumerate() {
                    prod[a + b] += x * y;
                }
            }
            for k in (m as usize..prod.len()).rev() {
                let c = prod[k] % p;
                if c == 0 {
                    continue;
                }
                prod[k] = 0;
                for j in 0..m as usize {
                    let idx = k - m as usize + j;
                    prod[idx] += (p - c) * modulus[j];
                }
            }
            for j in 0..m as usize {
                cur[j] = prod[j] % p;
            }
        }
        let half_exp = if p == 2 {
            // inverse of 2 modulo the odd group order, used for square roots
            n1.div_ceil(2)
        } else {
            0
        };
        Inner {
            p: p as u32,
            degree: m,
            order: order as u32,
            modulus,
            generator: generator as u32,
            exp,
            log,
            digit_pow,
            half_exp,
            as_roots: OnceLock::new(),
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    pub fn order(&self) -> u64 {
        self.0.order as u64
    }

    /// Modulus coefficients in ascending degree, leading 1 included.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn generator(&self) -> Fq {
        Fq(self.0.generator)
    }

    pub fn contains(&self, a: Fq) -> bool {
        a.0 < self.0.order
    }

    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<Fq> {
        if coeffs.len() > self.0.degree as usize {
            return Err(Error::FieldMismatch);
        }
        let p = self.0.p as i64;
        let code = coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * p as u64 + c.rem_euclid(p) as u64);
        Ok(Fq(code as u32))
    }

    pub fn from_encoding(&self, code: u64) -> Result<Fq> {
        if code >= self.order() {
            return Err(Error::FieldMismatch);
        }
        Ok(Fq(code as u32))
    }

    pub fn coeffs(&self, a: Fq) -> Vec<u64> {
        poly::decode(a.0 as u64, self.0.p as u64, self.0.degree as usize)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.0.order).map(Fq)
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let inner = &*self.0;
        if inner.p == 2 {
            return Fq(a.0 ^ b.0);
        }
        if inner.degree == 1 {
            let s = a.0 + b.0;
            return Fq(if s >= inner.p { s - inner.p } else { s });
        }
        let p = inner.p;
        let (mut x, mut y, mut out) = (a.0, b.0, 0u32);
        for &w in &inner.digit_pow {
            if x == 0 && y == 0 {
                break;
            }
            let s = x % p + y % p;
            out += if s >= p { s - p } else { s } * w;
            x /= p;
            y /= p;
        }
        Fq(out)
    }

    pub fn neg(&self, a: Fq) -> Fq {
        let inner = &*self.0;
        if inner.p == 2 {
            return a;
        }
        let p = inner.p;
        let (mut x, mut out) = (a.0, 0u32);
        for &w in &inner.digit_pow {
            if x == 0 {
                break;
            }
            let d = x % p;
            if d != 0 {
                out += (p - d) * w;
            }
            x /= p;
        }
        Fq(out)
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        let inner = &*self.0;
        let n1 = inner.order - 1;
        let s = inner.log[a.0 as usize] as u64 + inner.log[b.0 as usize] as u64;
        Fq(inner.exp[(s % n1 as u64) as usize])
    }

    pub fn square(&self, a: Fq) -> Fq {
        self.mul(a, a)
    }

    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a.0 == 0 {
            return None;
        }
        let inner = &*self.0;
        let n1 = inner.order - 1;
        let l = inner.log[a.0 as usize];
        Some(Fq(inner.exp[((n1 - l) % n1) as usize]))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Option<Fq> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq::ONE;
        }
        if a.0 == 0 {
            return Fq::ZERO;
        }
        let inner = &*self.0;
        let n1 = (inner.order - 1) as u128;
        let l = inner.log[a.0 as usize] as u128;
        Fq(inner.exp[((l * e as u128) % n1) as usize])
    }

    /// Integer multiple n·a.
    pub fn mul_int(&self, a: Fq, n: i64) -> Fq {
        self.mul(a, self.from_int(n))
    }

    /// a^{p^k}.
    pub fn frobenius(&self, a: Fq, k: u32) -> Fq {
        if a.0 == 0 {
            return a;
        }
        let inner = &*self.0;
        let n1 = (inner.order - 1) as u128;
        let pk = ntheory::pow_mod(inner.p as u128, k as u128, n1);
        let l = inner.log[a.0 as usize] as u128;
        Fq(inner.exp[((l * pk) % n1) as usize])
    }

    pub fn log(&self, a: Fq) -> Option<u32> {
        (a.0 != 0).then(|| self.0.log[a.0 as usize])
    }

    pub fn is_square(&self, a: Fq) -> bool {
        a.0 == 0 || self.0.p == 2 || self.0.log[a.0 as usize].is_multiple_of(2)
    }

    /// A square root of `a`, if one exists. For odd characteristic the other root is its negative.
    pub fn sqrt(&self, a: Fq) -> Option<Fq> {
        if a.0 == 0 {
            return Some(a);
        }
        let inner = &*self.0;
        let n1 = (inner.order - 1) as u64;
        let l = inner.log[a.0 as usize] as u64;
        if inner.p == 2 {
            return Some(Fq(inner.exp[((l * inner.half_exp) % n1) as usize]));
        }
        l.is_multiple_of(2).then(|| Fq(inner.exp[(l / 2) as usize]))
    }

    /// In characteristic 2, the smallest z with z² + z = c, if any.
    pub fn artin_schreier_root(&self, c: Fq) -> Option<Fq> {
        debug_assert_eq!(self.0.p, 2);
        let table = self.0.as_roots.get_or_init(|| {
            let mut t = vec![u32::MAX; self.0.order as usize];
            for z in (0..self.0.order).rev() {
                let v = self.add(self.square(Fq(z)), Fq(z));
                t[v.0 as usize] = z;
            }
            t
        });
        let z = table[c.0 as usize];
        (z != u32::MAX).then_some(Fq(z))
    }

    /// Embedding of this field into `big`, sending the class of x to the smallest root
    /// of this field's modulus inside `big`.
    pub fn embedding_into(&self, big: &FiniteField) -> Result<Embedding> {
        if self.characteristic() != big.characteristic() || !big.degree().is_multiple_of(self.degree()) {
            return Err(Error::FieldMismatch);
        }
        let root = if self.degree() == 1 {
            Fq::ZERO
        } else {
            let step = (big.order() - 1) / (self.order() - 1);
            let modulus: Vec<Fq> = self.0.modulus.iter().map(|&c| big.from_int(c as i64)).collect();
            let mut best: Option<Fq> = None;
            for k in 0..(self.order() - 1) {
                let z = big.pow(big.generator(), k * step);
                let mut acc = Fq::ZERO;
                for &c in modulus.iter().rev() {
                    acc = big.add(big.mul(acc, z), c);
                }
                if acc.is_zero() && best.is_none_or(|b| z < b) {
                    best = Some(z);
                }
            }
            best.expect("subfield contains a root of its modulus")
        };
        let mut table = Vec::with_capacity(self.order() as usize);
        for a in self.elements() {
            let mut acc = Fq::ZERO;
            for &c in self.coeffs(a).iter().rev() {
                acc = big.add(big.mul(acc, root), big.from_int(c as i64));
            }
            table.push(acc);
        }
        Ok(Embedding { table })
    }
}

/// Field homomorphism F_{p^a} → F_{p^{ab}} given by a lookup table.
#[derive(Debug, Clone)]
pub struct Embedding {
    table: Vec<Fq>,
}

impl Embedding {
    pub fn apply(&self, a: Fq) -> Fq {
        self.table[a.0 as usize]
    }
}
