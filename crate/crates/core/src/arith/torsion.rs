use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::curve::{extension_count, CurvePoint, EllipticCurve};
use crate::config::Bounds;
use crate::error::{Error, Result};
use crate::ntheory;

/// The ℓ-primary part of E(F) ≅ Z/ℓ^{a1} × Z/ℓ^{a2} (a1 ≥ a2) with generators and a
/// discrete-logarithm table.
#[derive(Debug, Clone)]
pub struct PrimaryGroup {
    pub ell: u64,
    pub exps: [u32; 2],
    pub gens: [CurvePoint; 2],
    dlog: Arc<HashMap<CurvePoint, [u64; 2]>>,
}

impl PrimaryGroup {
    pub fn order(&self) -> u64 {
        self.ell.pow(self.exps[0] + self.exps[1])
    }

    pub fn coords(&self, p: &CurvePoint) -> Option<[u64; 2]> {
        self.dlog.get(p).copied()
    }

    /// Points of the group, in the fixed total order.
    pub fn elements(&self) -> Vec<CurvePoint> {
        let mut v: Vec<_> = self.dlog.keys().copied().collect();
        v.sort();
        v
    }

    /// Matrix of an endomorphism given by its action on points; column k holds the
    /// coordinates of the image of generator k.
    pub fn matrix_of(&self, f: impl Fn(&CurvePoint) -> CurvePoint) -> [[u64; 2]; 2] {
        let c0 = self.coords(&f(&self.gens[0])).expect("endomorphism preserves the group");
        let c1 = self.coords(&f(&self.gens[1])).expect("endomorphism preserves the group");
        [[c0[0], c1[0]], [c0[1], c1[1]]]
    }
}

fn log_order(curve: &EllipticCurve, p: &CurvePoint, ell: u64) -> u32 {
    let mut k = 0;
    let mut cur = *p;
    while !cur.is_infinity() {
        cur = curve.mul(&cur, ell as i128);
        k += 1;
    }
    k
}

/// ℓ-primary part of E(F) for the curve's current field, given the group order.
pub fn primary_part(curve: &EllipticCurve, ell: u64, count: u128, bounds: &Bounds) -> Result<PrimaryGroup> {
    let v = ntheory::valuation(count, ell as u128);
    let size = (ell as u128).pow(v);
    if size > bounds.group_elements as u128 {
        return Err(Error::bound("group elements", size, bounds.group_elements));
    }
    let cofactor = count / size;
    let mut set: HashSet<CurvePoint> = HashSet::from([CurvePoint::Infinity]);
    let mut elems = vec![CurvePoint::Infinity];
    if size > 1 {
        for pt in curve.points() {
            let r = curve.mul(&pt, cofactor as i128);
            if set.contains(&r) {
                continue;
            }
            let base = elems.clone();
            let mut cur = r;
            while !set.contains(&cur) {
                for h in &base {
                    let s = curve.add(h, &cur);
                    set.insert(s);
                    elems.push(s);
                }
                cur = curve.add(&cur, &r);
            }
            if elems.len() as u128 == size {
                break;
            }
        }
    }
    if elems.len() as u128 != size {
        return Err(Error::CrossCheckMismatch(format!(
            "{ell}-primary part has {} points, expected {size}",
            elems.len()
        )));
    }
    elems.sort();
    let (mut best, mut a1) = (CurvePoint::Infinity, 0);
    for p in &elems {
        let k = log_order(curve, p, ell);
        if k > a1 {
            best = *p;
            a1 = k;
        }
    }
    let a2 = v - a1;
    let mut cyc: HashSet<CurvePoint> = HashSet::new();
    let mut cur = CurvePoint::Infinity;
    for _ in 0..ell.pow(a1) {
        cyc.insert(cur);
        cur = curve.add(&cur, &best);
    }
    let q = if a2 == 0 {
        CurvePoint::Infinity
    } else {
        *elems
            .iter()
            .find(|p| {
                log_order(curve, p, ell) == a2
                    && !cyc.contains(&curve.mul(p, (ell as i128).pow(a2 - 1)))
            })
            .expect("complementary cyclic factor exists")
    };
    let mut dlog = HashMap::with_capacity(size as usize);
    let mut row = CurvePoint::Infinity;
    for j in 0..ell.pow(a2) {
        let mut pt = row;
        for i in 0..ell.pow(a1) {
            dlog.insert(pt, [i, j]);
            pt = curve.add(&pt, &best);
        }
        row = curve.add(&row, &q);
    }
    debug_assert_eq!(dlog.len() as u128, size);
    Ok(PrimaryGroup { ell, exps: [a1, a2], gens: [best, q], dlog: Arc::new(dlog) })
}

/// E(F_{q^m}) ≅ Z/d1 × Z/d2 with d1 | d2 and generators of the two factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupStructure {
    pub d1: u64,
    pub d2: u64,
    pub gens: [CurvePoint; 2],
}

pub fn group_structure(curve: &EllipticCurve, m: u32, bounds: &Bounds) -> Result<GroupStructure> {
    let t = curve.frobenius_trace(bounds)?;
    let big = curve.base_change(m, bounds)?;
    if big.field().order() > bounds.field_order {
        return Err(Error::bound("field order", big.field().order(), bounds.field_order));
    }
    let n = extension_count(t, curve.q(), m);
    let (mut d1, mut d2) = (1u64, 1u64);
    let (mut g1, mut g2) = (CurvePoint::Infinity, CurvePoint::Infinity);
    for ell in ntheory::prime_divisors(n as u64) {
        let pg = primary_part(&big, ell, n, bounds)?;
        d2 *= ell.pow(pg.exps[0]);
        d1 *= ell.pow(pg.exps[1]);
        g2 = big.add(&g2, &pg.gens[0]);
        g1 = big.add(&g1, &pg.gens[1]);
    }
    if !big.mul(&g2, d2 as i128).is_infinity() || !big.mul(&g1, d1 as i128).is_infinity() {
        return Err(Error::CrossCheckMismatch("generator orders".into()));
    }
    Ok(GroupStructure { d1, d2, gens: [g1, g2] })
}

/// E[ℓ^e] over the smallest extension where it is rational, with the matrix of the
/// q-Frobenius on a fixed basis (columns are images of basis points).
#[derive(Debug, Clone)]
pub struct TorsionLattice {
    pub ell: u64,
    pub e: u32,
    pub modulus: u64,
    /// Extension degree m over the field of definition.
    pub degree: u32,
    pub curve: EllipticCurve,
    pub basis: [CurvePoint; 2],
    pub frob: [[u64; 2]; 2],
    dlog: Arc<HashMap<CurvePoint, [u64; 2]>>,
}

impl TorsionLattice {
    pub fn coords(&self, p: &CurvePoint) -> Option<[u64; 2]> {
        self.dlog.get(p).copied()
    }

    pub fn point(&self, a: u64, b: u64) -> CurvePoint {
        let c = &self.curve;
        c.add(&c.mul(&self.basis[0], a as i128), &c.mul(&self.basis[1], b as i128))
    }

    pub fn frob_trace(&self) -> u64 {
        (self.frob[0][0] + self.frob[1][1]) % self.modulus
    }

    pub fn frob_det(&self) -> u64 {
        let n = self.modulus as i128;
        let d = self.frob[0][0] as i128 * self.frob[1][1] as i128 - self.frob[0][1] as i128 * self.frob[1][0] as i128;
        d.rem_euclid(n) as u64
    }
}

/// Smallest extension degree m with E[ℓ^e] ⊆ E(F_{q^m}); candidates are filtered by
/// ℓ^{2e} | #E(F_{q^m}) and ℓ^e | q^m − 1 before being verified on points.
pub fn torsion_basis(curve: &EllipticCurve, ell: u64, e: u32, bounds: &Bounds) -> Result<TorsionLattice> {
    let p = curve.characteristic();
    if ell == p {
        return Err(Error::BadPrime(ell));
    }
    if !ntheory::is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if e == 0 {
        return Err(Error::InvalidInput("torsion exponent must be at least 1".into()));
    }
    let t = curve.frobenius_trace(bounds)?;
    let q = curve.q();
    let n = (ell as u128).pow(e);
    for m in 1..=bounds.extension_degree {
        let count = extension_count(t, q, m);
        let qm1 = (q as u128).pow(m) - 1;
        if !count.is_multiple_of(n * n) || qm1 % n != 0 {
            continue;
        }
        let order = (q as u128).pow(m);
        if order > bounds.field_order as u128 {
            return Err(Error::bound("field order", order, bounds.field_order));
        }
        let big = curve.base_change(m, bounds)?;
        let pg = primary_part(&big, ell, count, bounds)?;
        if pg.exps[1] < e {
            continue;
        }
        return Ok(lattice_from_primary(big, &pg, ell, e, m));
    }
    Err(Error::bound("extension degree", bounds.extension_degree as u128 + 1, bounds.extension_degree))
}

fn lattice_from_primary(big: EllipticCurve, pg: &PrimaryGroup, ell: u64, e: u32, m: u32) -> TorsionLattice {
    let n = ell.pow(e);
    let mut torsion: Vec<CurvePoint> =
        pg.elements().into_iter().filter(|p| big.mul(p, n as i128).is_infinity()).collect();
    torsion.sort();
    let top = (ell as i128).pow(e - 1);
    let p1 = *torsion
        .iter()
        .find(|p| !big.mul(p, top).is_infinity())
        .expect("point of exact order ℓ^e");
    let base = big.mul(&p1, top);
    let line: HashSet<CurvePoint> = (0..ell).map(|k| big.mul(&base, k as i128)).collect();
    let p2 = *torsion
        .iter()
        .find(|p| !line.contains(&big.mul(p, top)))
        .expect("E[ℓ] is two-dimensional");
    let mut dlog = HashMap::with_capacity((n * n) as usize);
    let mut row = CurvePoint::Infinity;
    for b in 0..n {
        let mut pt = row;
        for a in 0..n {
            dlog.insert(pt, [a, b]);
            pt = big.add(&pt, &p1);
        }
        row = big.add(&row, &p2);
    }
    let f1 = dlog[&big.frobenius(&p1)];
    let f2 = dlog[&big.frobenius(&p2)];
    TorsionLattice {
        ell,
        e,
        modulus: n,
        degree: m,
        curve: big,
        basis: [p1, p2],
        frob: [[f1[0], f2[0]], [f1[1], f2[1]]],
        dlog: Arc::new(dlog),
    }
}
