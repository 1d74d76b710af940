use std::sync::OnceLock;

use super::field::{FiniteField, Fq};
use crate::config::Bounds;
use crate::error::{Error, Result};

/// A point of an elliptic curve over the curve's current field. The derived ordering
/// (infinity first, then affine points by x then y encodings) is the fixed total order
/// used for every deterministic choice of points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine { x: Fq, y: Fq },
}

impl CurvePoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }
}

/// Elliptic curve in long Weierstrass form
/// y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6.
///
/// A curve remembers the degree of the field it was originally defined over, so that
/// after base change the q-power Frobenius still refers to the original base field.
#[derive(Debug, Clone)]
pub struct EllipticCurve {
    field: FiniteField,
    a: [Fq; 5],
    def_degree: u32,
    def_trace: OnceLock<i64>,
}

impl PartialEq for EllipticCurve {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.a == other.a && self.def_degree == other.def_degree
    }
}
impl Eq for EllipticCurve {}

impl EllipticCurve {
    /// Coefficients in the order a1, a2, a3, a4, a6.
    pub fn new(field: FiniteField, a: [Fq; 5]) -> Result<Self> {
        if a.iter().any(|&c| !field.contains(c)) {
            return Err(Error::FieldMismatch);
        }
        let def_degree = field.degree();
        let curve = EllipticCurve { field, a, def_degree, def_trace: OnceLock::new() };
        if curve.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(curve)
    }

    /// Curve over a field with integer coefficients (reduced mod p).
    pub fn from_ints(field: FiniteField, a: [i64; 5]) -> Result<Self> {
        let coeffs = a.map(|c| field.from_int(c));
        Self::new(field, coeffs)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn coefficients(&self) -> [Fq; 5] {
        self.a
    }

    pub fn characteristic(&self) -> u64 {
        self.field.characteristic()
    }

    /// Degree over F_p of the field of definition.
    pub fn definition_degree(&self) -> u32 {
        self.def_degree
    }

    /// Order q of the field of definition.
    pub fn q(&self) -> u64 {
        self.characteristic().pow(self.def_degree)
    }

    /// Degree of the current field over the field of definition.
    pub fn extension_degree(&self) -> u32 {
        self.field.degree() / self.def_degree
    }

    pub fn b_invariants(&self) -> [Fq; 4] {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        let b2 = f.add(f.square(a1), f.mul_int(a2, 4));
        let b4 = f.add(f.mul_int(a4, 2), f.mul(a1, a3));
        let b6 = f.add(f.square(a3), f.mul_int(a6, 4));
        let mut b8 = f.mul(f.square(a1), a6);
        b8 = f.add(b8, f.mul_int(f.mul(a2, a6), 4));
        b8 = f.sub(b8, f.mul(f.mul(a1, a3), a4));
        b8 = f.add(b8, f.mul(a2, f.square(a3)));
        b8 = f.sub(b8, f.square(a4));
        [b2, b4, b6, b8]
    }

    pub fn discriminant(&self) -> Fq {
        let f = &self.field;
        let [b2, b4, b6, b8] = self.b_invariants();
        let mut d = f.neg(f.mul(f.square(b2), b8));
        d = f.sub(d, f.mul_int(f.mul(f.square(b4), b4), 8));
        d = f.sub(d, f.mul_int(f.square(b6), 27));
        d = f.add(d, f.mul_int(f.mul(f.mul(b2, b4), b6), 9));
        d
    }

    pub fn j_invariant(&self) -> Fq {
        let f = &self.field;
        let [b2, b4, _, _] = self.b_invariants();
        let c4 = f.sub(f.square(b2), f.mul_int(b4, 24));
        f.div(f.mul(f.square(c4), c4), self.discriminant()).expect("nonsingular")
    }

    /// Same curve over the degree-k extension of its current field.
    pub fn base_change(&self, k: u32, bounds: &Bounds) -> Result<EllipticCurve> {
        if k == 1 {
            return Ok(self.clone());
        }
        let total = self.field.degree().saturating_mul(k);
        if self.extension_degree() * k > bounds.extension_degree {
            return Err(Error::DegreeOutOfRange {
                degree: self.extension_degree() * k,
                max: bounds.extension_degree,
            });
        }
        let trace = self.frobenius_trace(bounds)?;
        let big = FiniteField::new(self.characteristic(), total, bounds)?;
        let emb = self.field.embedding_into(&big)?;
        let curve = EllipticCurve {
            field: big,
            a: self.a.map(|c| emb.apply(c)),
            def_degree: self.def_degree,
            def_trace: OnceLock::new(),
        };
        let _ = curve.def_trace.set(trace);
        Ok(curve)
    }

    pub fn is_on_curve(&self, pt: &CurvePoint) -> bool {
        match *pt {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                if !self.field.contains(x) || !self.field.contains(y) {
                    return false;
                }
                let f = &self.field;
                let [a1, _, a3, _, _] = self.a;
                let lhs = f.add(f.square(y), f.mul(y, f.add(f.mul(a1, x), a3)));
                f.sub(lhs, self.rhs(x)).is_zero()
            }
        }
    }

    /// Validates a point supplied from outside the crate.
    pub fn check_point(&self, pt: &CurvePoint) -> Result<()> {
        if let CurvePoint::Affine { x, y } = *pt {
            if !self.field.contains(x) || !self.field.contains(y) {
                return Err(Error::FieldMismatch);
            }
        }
        if self.is_on_curve(pt) {
            Ok(())
        } else {
            Err(Error::NotOnCurve)
        }
    }

    fn rhs(&self, x: Fq) -> Fq {
        let f = &self.field;
        let [_, a2, _, a4, a6] = self.a;
        let mut acc = f.add(x, a2);
        acc = f.add(f.mul(acc, x), a4);
        f.add(f.mul(acc, x), a6)
    }

    pub fn neg(&self, pt: &CurvePoint) -> CurvePoint {
        match *pt {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                let f = &self.field;
                let [a1, _, a3, _, _] = self.a;
                let ny = f.sub(f.neg(y), f.add(f.mul(a1, x), a3));
                CurvePoint::Affine { x, y: ny }
            }
        }
    }

    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (*p, *q) {
            (CurvePoint::Infinity, _) => return *q,
            (_, CurvePoint::Infinity) => return *p,
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        let (lambda, nu) = if x1 == x2 {
            if y1 != y2 || self.neg(p) == *p {
                return CurvePoint::Infinity;
            }
            let den = f.add(f.add(f.mul_int(y1, 2), f.mul(a1, x1)), a3);
            let den_inv = f.inv(den).expect("non-2-torsion point has nonzero tangent denominator");
            let mut num = f.mul_int(f.square(x1), 3);
            num = f.add(num, f.mul_int(f.mul(a2, x1), 2));
            num = f.add(num, a4);
            num = f.sub(num, f.mul(a1, y1));
            let mut nn = f.neg(f.mul(f.square(x1), x1));
            nn = f.add(nn, f.mul(a4, x1));
            nn = f.add(nn, f.mul_int(a6, 2));
            nn = f.sub(nn, f.mul(a3, y1));
            (f.mul(num, den_inv), f.mul(nn, den_inv))
        } else {
            let den_inv = f.inv(f.sub(x2, x1)).expect("distinct x");
            let lambda = f.mul(f.sub(y2, y1), den_inv);
            let nu = f.mul(f.sub(f.mul(y1, x2), f.mul(y2, x1)), den_inv);
            (lambda, nu)
        };
        let mut x3 = f.add(f.square(lambda), f.mul(a1, lambda));
        x3 = f.sub(f.sub(f.sub(x3, a2), x1), x2);
        let y3 = f.sub(f.sub(f.neg(f.mul(f.add(lambda, a1), x3)), nu), a3);
        CurvePoint::Affine { x: x3, y: y3 }
    }

    pub fn sub(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        self.add(p, &self.neg(q))
    }

    pub fn double(&self, p: &CurvePoint) -> CurvePoint {
        self.add(p, p)
    }

    pub fn mul(&self, p: &CurvePoint, n: i128) -> CurvePoint {
        let base = if n < 0 { self.neg(p) } else { *p };
        let mut k = n.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &b);
            }
            k >>= 1;
            if k > 0 {
                b = self.double(&b);
            }
        }
        acc
    }

    /// Checked group law for points supplied from outside.
    pub fn try_add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        self.check_point(p)?;
        self.check_point(q)?;
        Ok(self.add(p, q))
    }

    pub fn try_mul(&self, p: &CurvePoint, n: i128) -> Result<CurvePoint> {
        self.check_point(p)?;
        Ok(self.mul(p, n))
    }

    /// The q-power Frobenius, q the order of the field of definition.
    pub fn frobenius(&self, p: &CurvePoint) -> CurvePoint {
        match *p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: self.field.frobenius(x, self.def_degree),
                y: self.field.frobenius(y, self.def_degree),
            },
        }
    }

    /// All y with (x, y) on the curve, in increasing order.
    pub fn y_roots(&self, x: Fq) -> Vec<Fq> {
        let f = &self.field;
        let [a1, _, a3, _, _] = self.a;
        let h = f.add(f.mul(a1, x), a3);
        let g = self.rhs(x);
        let mut out = Vec::with_capacity(2);
        if f.characteristic() == 2 {
            if h.is_zero() {
                out.push(f.sqrt(g).expect("every element is a square in characteristic 2"));
            } else {
                let c = f.div(g, f.square(h)).expect("h nonzero");
                if let Some(z) = f.artin_schreier_root(c) {
                    out.push(f.mul(h, z));
                    out.push(f.mul(h, f.add(z, Fq::ONE)));
                }
            }
        } else {
            let disc = f.add(f.square(h), f.mul_int(g, 4));
            let half = f.inv(f.from_int(2)).expect("odd characteristic");
            if disc.is_zero() {
                out.push(f.mul(f.neg(h), half));
            } else if let Some(s) = f.sqrt(disc) {
                out.push(f.mul(f.sub(s, h), half));
                out.push(f.mul(f.sub(f.neg(s), h), half));
            }
        }
        out.sort();
        out
    }

    /// Every rational point over the current field, in the fixed total order.
    pub fn points(&self) -> impl Iterator<Item = CurvePoint> + '_ {
        std::iter::once(CurvePoint::Infinity).chain(
            self.field
                .elements()
                .flat_map(move |x| self.y_roots(x).into_iter().map(move |y| CurvePoint::Affine { x, y })),
        )
    }

    /// Number of rational points over the current field, by enumeration of x.
    pub fn count_points(&self) -> u64 {
        let f = &self.field;
        let [a1, _, a3, _, _] = self.a;
        let mut n = 1u64;
        if f.characteristic() == 2 {
            for x in f.elements() {
                let h = f.add(f.mul(a1, x), a3);
                if h.is_zero() {
                    n += 1;
                } else {
                    let c = f.div(self.rhs(x), f.square(h)).expect("h nonzero");
                    if f.artin_schreier_root(c).is_some() {
                        n += 2;
                    }
                }
            }
        } else {
            for x in f.elements() {
                let h = f.add(f.mul(a1, x), a3);
                let disc = f.add(f.square(h), f.mul_int(self.rhs(x), 4));
                n += match f.log(disc) {
                    None => 1,
                    Some(l) if l % 2 == 0 => 2,
                    Some(_) => 0,
                };
            }
        }
        n
    }

    /// Trace of the q-Frobenius over the field of definition.
    pub fn frobenius_trace(&self, bounds: &Bounds) -> Result<i64> {
        if let Some(&t) = self.def_trace.get() {
            return Ok(t);
        }
        debug_assert_eq!(self.def_degree, self.field.degree());
        if self.field.order() > bounds.field_order {
            return Err(Error::bound("field order", self.field.order(), bounds.field_order));
        }
        let t = self.q() as i64 + 1 - self.count_points() as i64;
        let _ = self.def_trace.set(t);
        Ok(t)
    }
}

/// Traces t_m of π^m from t = t_1 by t_m = t·t_{m−1} − q·t_{m−2}.
pub fn power_traces(t: i64, q: u64, m: u32) -> Vec<i128> {
    let mut out = vec![2i128, t as i128];
    for k in 2..=m as usize {
        let next = t as i128 * out[k - 1] - q as i128 * out[k - 2];
        out.push(next);
    }
    out
}

/// #E(F_{q^m}) = q^m + 1 − t_m.
pub fn extension_count(t: i64, q: u64, m: u32) -> u128 {
    let tm = power_traces(t, q, m)[m as usize];
    ((q as i128).pow(m) + 1 - tm) as u128
}

/// Point count over F_{q^m} with the base trace and Frobenius char poly x² − t·x + q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointCount {
    pub n: u128,
    pub t: i64,
    /// Coefficients [q, −t, 1] in ascending degree.
    pub charpoly: [i64; 3],
}

/// Counts E(F_{q^m}) by exhaustive enumeration over the extension.
pub fn point_count(curve: &EllipticCurve, m: u32, bounds: &Bounds) -> Result<PointCount> {
    let q = curve.q();
    let qm = (q as u128).checked_pow(m).unwrap_or(u128::MAX);
    if qm > bounds.field_order as u128 {
        return Err(Error::bound("field order", qm, bounds.field_order));
    }
    let t = curve.frobenius_trace(bounds)?;
    let n = if m == 1 { (q as i64 + 1 - t) as u128 } else { curve.base_change(m, bounds)?.count_points() as u128 };
    Ok(PointCount { n, t, charpoly: [q as i64, -t, 1] })
}
