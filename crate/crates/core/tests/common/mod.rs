#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use isopower::arith::{EllipticCurve, FiniteField, Fq};
use isopower::decide::EndConductor;
use isopower::functor::CurveData;
use isopower::Bounds;

/// Every nonsingular curve over F_{p^m}: short Weierstrass for p ≥ 5, long otherwise.
pub fn curves_over(p: u64, m: u32, bounds: &Bounds) -> Vec<EllipticCurve> {
    let f = FiniteField::new(p, m, bounds).unwrap();
    let elems: Vec<Fq> = f.elements().collect();
    let zero = elems[0];
    let k = elems.len();
    let mut out = Vec::new();
    if p >= 5 {
        for &a4 in &elems {
            for &a6 in &elems {
                if let Ok(c) = EllipticCurve::new(f.clone(), [zero, zero, zero, a4, a6]) {
                    out.push(c);
                }
            }
        }
    } else {
        for code in 0..k.pow(5) {
            let a = [0u32, 1, 2, 3, 4].map(|i| elems[code / k.pow(i) % k]);
            if let Ok(c) = EllipticCurve::new(f.clone(), a) {
                out.push(c);
            }
        }
    }
    out
}

pub fn data(c: EllipticCurve, bounds: &Bounds) -> Arc<CurveData> {
    Arc::new(CurveData::new(c, *bounds).unwrap())
}

/// One curve per (field, trace, End conductor) over a handful of small fields.
pub fn corpus(bounds: &Bounds) -> Vec<Arc<CurveData>> {
    let mut out = Vec::new();
    for (p, m) in [(5, 1), (7, 1), (11, 1), (13, 1), (2, 1), (3, 1), (2, 2), (3, 2), (2, 3)] {
        let mut by_tj: BTreeMap<(i64, u32), EllipticCurve> = BTreeMap::new();
        for c in curves_over(p, m, bounds) {
            let t = c.frobenius_trace(bounds).unwrap();
            by_tj.entry((t, c.j_invariant().encoding())).or_insert(c);
        }
        let mut seen = BTreeMap::new();
        for ((t, _), c) in by_tj {
            let d = data(c, bounds);
            let Ok(report) = d.conductor_report() else { continue };
            let key = match report.end {
                EndConductor::Quadratic { f_e } => (t, f_e),
                EndConductor::Rank4 => (t, 0),
            };
            seen.entry(key).or_insert(d);
        }
        out.extend(seen.into_values());
    }
    out
}

/// Kronecker symbol (d/n) for a discriminant d and n ≥ 1.
pub fn kronecker(d: i64, n: u64) -> i64 {
    let mut result = 1;
    let mut n = n;
    while n.is_multiple_of(2) {
        n /= 2;
        result *= match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    // Jacobi symbol (d mod n / n) for odd n
    let mut a = d.rem_euclid(n as i64) as u64;
    let mut m = n;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if m % 8 == 3 || m % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        a %= m;
    }
    if m == 1 {
        result
    } else {
        0
    }
}

fn units(d: i64) -> u64 {
    match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

/// Class number of the order of discriminant dk·f², from the analytic formula
/// for the maximal order and the conductor index formula.
pub fn class_number(dk: i64, f: u64) -> u64 {
    let n = dk.unsigned_abs();
    let s: i64 = (1..n).map(|k| kronecker(dk, k) * k as i64).sum();
    let hk = (units(dk) as i64 * s.abs()) as u64 / (2 * n);
    let mut num = hk * f;
    let mut r = f;
    let mut ell = 2;
    while r > 1 {
        if r.is_multiple_of(ell) {
            num = num / ell * (ell as i64 - kronecker(dk, ell)) as u64;
            while r.is_multiple_of(ell) {
                r /= ell;
            }
        }
        ell += 1;
    }
    if f > 1 {
        num / (units(dk) / 2)
    } else {
        num
    }
}
