use serde::Serialize;

use crate::arith::{CurvePoint, EllipticCurve, Fq, TorsionLattice};
use crate::error::{Error, Result};
use crate::functor::CurveData;
use crate::zmod::{Mat, Zle};

/// Which of the three local shapes the commutant takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CommutantShape {
    /// R_ℓ = Z_ℓ, so C is the full matrix algebra.
    #[serde(rename = "scalar-only-M2")]
    ScalarOnlyM2,
    /// R_ℓ is a rank-2 order and C = R_ℓ.
    #[serde(rename = "rank2")]
    Rank2,
    /// R_ℓ is the full matrix algebra and C = Z_ℓ.
    #[serde(rename = "Z_l-center")]
    ZlCenter,
}

/// The commutant C of End(E) ⊗ Z_ℓ acting on E[ℓ^e], together with the image of
/// End(E) itself. Matrices act on coordinate columns in the torsion basis.
#[derive(Debug, Clone, Serialize)]
pub struct Commutant {
    pub ell: u64,
    pub e: u32,
    pub basis: Vec<Mat>,
    pub shape: CommutantShape,
    pub frob: Mat,
    /// Matrices whose Z/ℓ^e-span is the image of End(E).
    pub end_image: Vec<Mat>,
    /// False when the endomorphisms found explicitly do not generate the whole image.
    pub verified: bool,
}

impl Commutant {
    pub fn ring(&self) -> Zle {
        Zle::new(self.ell, self.e)
    }

    /// log_ℓ of #(C/ℓ^e C).
    pub fn log_size(&self) -> u32 {
        span_log(self.ring(), &self.basis)
    }
}

fn flatten(m: &Mat) -> Vec<u64> {
    m.iter().flatten().copied().collect()
}

/// log_ℓ of the order of the Z/ℓ^e-span of the matrices.
pub fn span_log(ring: Zle, mats: &[Mat]) -> u32 {
    ring.span_log_size(&mats.iter().map(flatten).collect::<Vec<_>>())
}

/// Matrices spanning the Z/ℓ^e-algebra generated by `gens`.
pub fn algebra_span(ring: Zle, gens: &[Mat]) -> Vec<Mat> {
    let k = gens.first().map_or(2, Vec::len);
    let mut span = vec![ring.identity(k)];
    let mut size = span_log(ring, &span);
    let mut next = 0;
    while next < span.len() {
        let x = span[next].clone();
        next += 1;
        for g in gens {
            let y = ring.mat_mul(&x, &ring.reduce_mat(g));
            span.push(y);
            let grown = span_log(ring, &span);
            if grown > size {
                size = grown;
            } else {
                span.pop();
            }
        }
    }
    span
}

/// Generators of the centralizer of `mats` in 2×2 matrices over Z/ℓ^e.
pub fn centralizer(ring: Zle, mats: &[Mat]) -> Vec<Mat> {
    // X·A − A·X = 0, unknowns x00, x01, x10, x11
    let mut rows: Mat = Vec::new();
    for a in mats {
        for i in 0..2 {
            for j in 0..2 {
                let mut row = vec![0; 4];
                for k in 0..2 {
                    // (XA)_ij = Σ_k x_ik a_kj
                    row[2 * i + k] = ring.add(row[2 * i + k], a[k][j] % ring.n);
                    // (AX)_ij = Σ_k a_ik x_kj
                    row[2 * k + j] = ring.sub(row[2 * k + j], a[i][k] % ring.n);
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        rows.push(vec![0; 4]);
    }
    ring.kernel(&rows, 4).gens.into_iter().map(|v| vec![vec![v[0], v[1]], vec![v[2], v[3]]]).collect()
}

fn is_scalar_mod_ell(m: &Mat, ell: u64) -> bool {
    m[0][1].is_multiple_of(ell) && m[1][0].is_multiple_of(ell) && (m[0][0] + ell - m[1][1] % ell).is_multiple_of(ell)
}

/// The commutant on E[ℓ^e], computed from the matrices of Frobenius and of a
/// generator of End(E).
pub fn commutant(data: &CurveData, ell: u64, e: u32) -> Result<Commutant> {
    if ell == data.characteristic() {
        return Err(Error::BadPrime(ell));
    }
    if data.frobenius_order().is_none() {
        return rank4_commutant(data, ell, e);
    }
    let end = data.end_order()?;
    let act = data.action(&end, ell, e)?;
    let ring = act.ring();
    let w = act.omega;
    let frob = act.frob;
    if is_scalar_mod_ell(&w, ell) {
        return Err(Error::CrossCheckMismatch(format!("endomorphism generator is scalar modulo {ell}")));
    }
    if ring.mat_mul(&w, &frob) != ring.mat_mul(&frob, &w) {
        return Err(Error::CrossCheckMismatch("Frobenius and End generator do not commute".into()));
    }
    let f0 = data.frobenius_order().expect("quadratic Frobenius").conductor();
    let expect = ring.mat_add(
        &ring.mat_scale(&ring.identity(2), ring.reduce(data.c0()? as i128)),
        &ring.mat_scale(&w, ring.reduce((f0 / end.conductor()) as i128)),
    );
    if expect != frob {
        return Err(Error::CrossCheckMismatch("Frobenius is not c0 + (f0/f_E)·W".into()));
    }
    let end_image = vec![ring.identity(2), w.clone()];
    let basis = centralizer(ring, &[frob.clone(), w]);
    let both: Vec<Mat> = basis.iter().chain(&end_image).cloned().collect();
    if span_log(ring, &basis) != 2 * e || span_log(ring, &both) != 2 * e {
        return Err(Error::CrossCheckMismatch("commutant is not the image of End".into()));
    }
    Ok(Commutant { ell, e, basis, shape: CommutantShape::Rank2, frob, end_image, verified: true })
}

/// Coefficients (u, r, s, t) of an automorphism
/// (x, y) ↦ (u²x + r, u³y + u²s·x + t).
type Aut = (Fq, Fq, Fq, Fq);

fn preserves(c: &EllipticCurve, (u, r, s, t): Aut) -> [bool; 5] {
    let f = c.field();
    let [a1, a2, a3, a4, a6] = c.coefficients();
    let (u2, s2, r2) = (f.square(u), f.square(s), f.square(r));
    let u3 = f.mul(u2, u);
    let u4 = f.square(u2);
    let u6 = f.square(u3);
    let int = |n| f.from_int(n);
    let e1 = f.mul(u, a1) == f.add(a1, f.mul(int(2), s));
    let e2 = f.mul(u2, a2) == f.sub(f.add(f.sub(a2, f.mul(s, a1)), f.mul(int(3), r)), s2);
    let e3 = f.mul(u3, a3) == f.add(f.add(a3, f.mul(r, a1)), f.mul(int(2), t));
    let rhs4 = [f.neg(f.mul(s, a3)), f.mul(int(2), f.mul(r, a2)), f.neg(f.mul(f.add(t, f.mul(r, s)), a1)), f.mul(int(3), r2), f.neg(f.mul(int(2), f.mul(s, t)))]
        .into_iter()
        .fold(a4, |acc, x| f.add(acc, x));
    let e4 = f.mul(u4, a4) == rhs4;
    let rhs6 = [f.mul(r, a4), f.mul(r2, a2), f.mul(r2, r), f.neg(f.mul(t, a3)), f.neg(f.square(t)), f.neg(f.mul(f.mul(r, t), a1))]
        .into_iter()
        .fold(a6, |acc, x| f.add(acc, x));
    let e6 = f.mul(u6, a6) == rhs6;
    [e1, e2, e3, e4, e6]
}

/// Automorphisms of the curve defined over its field, found by solving the
/// coordinate-change equations. `None` when the search would be too large.
fn automorphisms(c: &EllipticCurve) -> Option<Vec<Aut>> {
    let f = c.field();
    let p = f.characteristic();
    let zero = f.from_int(0);
    let mut out = Vec::new();
    if p >= 5 {
        let q1 = f.order() - 1;
        let g = crate::ntheory::gcd_u(24, q1);
        let [a1, a2, a3, _, _] = c.coefficients();
        for k in 0..g {
            let u = f.pow(f.generator(), k * (q1 / g));
            let s = f.div(f.sub(f.mul(u, a1), a1), f.from_int(2))?;
            let r = f.div(f.add(f.add(f.sub(f.mul(f.square(u), a2), a2), f.mul(s, a1)), f.square(s)), f.from_int(3))?;
            let t = f.div(f.sub(f.sub(f.mul(f.mul(f.square(u), u), a3), a3), f.mul(r, a1)), f.from_int(2))?;
            if preserves(c, (u, r, s, t)).iter().all(|&b| b) {
                out.push((u, r, s, t));
            }
        }
        return Some(out);
    }
    if f.order() > 256 {
        return None;
    }
    let elems: Vec<Fq> = f.elements().collect();
    for &u in elems.iter().filter(|&&u| u != zero) {
        for &s in &elems {
            if !preserves(c, (u, zero, s, zero))[0] {
                continue;
            }
            for &r in &elems {
                if !preserves(c, (u, r, s, zero))[1] {
                    continue;
                }
                for &t in &elems {
                    if preserves(c, (u, r, s, t)).iter().all(|&b| b) {
                        out.push((u, r, s, t));
                    }
                }
            }
        }
    }
    Some(out)
}

fn apply_aut(c: &EllipticCurve, (u, r, s, t): Aut, pt: &CurvePoint) -> CurvePoint {
    let f = c.field();
    match *pt {
        CurvePoint::Infinity => CurvePoint::Infinity,
        CurvePoint::Affine { x, y } => {
            let u2 = f.square(u);
            CurvePoint::Affine {
                x: f.add(f.mul(u2, x), r),
                y: f.add(f.add(f.mul(f.mul(u2, u), y), f.mul(f.mul(u2, s), x)), t),
            }
        }
    }
}

fn matrix_of(lat: &TorsionLattice, ring: Zle, map: impl Fn(&CurvePoint) -> CurvePoint) -> Result<Mat> {
    let mut m = ring.zeros(2, 2);
    for (k, b) in lat.basis.iter().enumerate() {
        let img = map(b);
        let c = lat
            .coords(&img)
            .ok_or_else(|| Error::CrossCheckMismatch("endomorphism leaves the torsion lattice".into()))?;
        m[0][k] = c[0] % ring.n;
        m[1][k] = c[1] % ring.n;
    }
    Ok(m)
}

/// When π is an integer, End(E) ⊗ Z_ℓ is all of M₂(Z_ℓ) and C is the scalars. The image
/// of End(E) is rebuilt from automorphisms and the p-power Frobenius where available.
fn rank4_commutant(data: &CurveData, ell: u64, e: u32) -> Result<Commutant> {
    let lat = data.torsion_lattice(ell, e)?;
    let ring = Zle::new(ell, e);
    let frob = ring.reduce_mat(&lat.frob.iter().map(|r| r.to_vec()).collect());
    let c = &lat.curve;
    let f = c.field();
    let mut gens = vec![frob.clone()];
    if let Some(auts) = automorphisms(c) {
        for a in auts {
            gens.push(matrix_of(&lat, ring, |pt| apply_aut(c, a, pt))?);
        }
    }
    let base = data.curve().coefficients();
    let base_field = data.curve().field();
    if base.iter().all(|&a| base_field.frobenius(a, 1) == a) {
        gens.push(matrix_of(&lat, ring, |pt| match *pt {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x: f.frobenius(x, 1), y: f.frobenius(y, 1) },
        })?);
    }
    let end_image = algebra_span(ring, &gens);
    let verified = span_log(ring, &end_image) == 4 * e;
    Ok(Commutant {
        ell,
        e,
        basis: vec![ring.identity(2)],
        shape: CommutantShape::ZlCenter,
        frob,
        end_image,
        verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::test_curve as data;

    #[test]
    fn irreducible_frobenius_gives_a_field() {
        // y² = x³ + x + 1 over F_5 has 9 points, t = −3
        let cd = data(5, 1, [0, 0, 0, 1, 1]);
        assert_eq!(cd.trace(), -3);
        let c = commutant(&cd, 2, 1).unwrap();
        assert_eq!(c.shape, CommutantShape::Rank2);
        assert_eq!(c.log_size(), 2);
        // C/2C has no zero divisors: every nonzero element is invertible
        let r = c.ring();
        let [i, w] = [c.basis[0].clone(), c.basis[1].clone()];
        for (a, b) in [(1, 0), (0, 1), (1, 1)] {
            let x = r.mat_add(&r.mat_scale(&i, a), &r.mat_scale(&w, b));
            let det = r.sub(r.mul(x[0][0], x[1][1]), r.mul(x[0][1], x[1][0]));
            assert_eq!(det, 1);
        }
        // the solve against Frobenius alone gives the same algebra
        assert_eq!(span_log(r, &centralizer(r, std::slice::from_ref(&c.frob))), 2);
    }

    #[test]
    fn scalar_frobenius_keeps_rank_two() {
        // y² = x³ + x over F_5: t = 2, π = 1 + 2i ≡ 1 on E[2]
        let cd = data(5, 1, [0, 0, 0, 1, 0]);
        assert_eq!(cd.trace(), 2);
        let c = commutant(&cd, 2, 1).unwrap();
        let r = c.ring();
        assert_eq!(c.frob, r.identity(2));
        assert_eq!(c.log_size(), 2);
        // C/2C = F_2[i] with (i − 1)² = 0
        let n = r.mat_sub(&c.end_image[1], &r.identity(2));
        let n = if n == r.zeros(2, 2) { r.mat_add(&c.end_image[1], &r.identity(2)) } else { n };
        assert_eq!(r.mat_mul(&n, &n), r.zeros(2, 2));
        // the Frobenius-only centralizer is all of M2
        assert_eq!(span_log(r, &centralizer(r, std::slice::from_ref(&c.frob))), 4);
    }

    #[test]
    fn matrix_algebra_from_automorphisms() {
        // y² + y = x³ over F_4 has t = −4: Frobenius is −2
        let cd = data(2, 2, [0, 0, 1, 0, 0]);
        assert!(cd.frobenius_order().is_none());
        let c = commutant(&cd, 3, 1).unwrap();
        assert_eq!(c.shape, CommutantShape::ZlCenter);
        assert!(c.verified);
        assert_eq!(c.log_size(), 1);
        assert_eq!(span_log(c.ring(), &centralizer(c.ring(), &c.end_image)), 1);
    }

    #[test]
    fn characteristic_is_rejected() {
        let cd = data(5, 1, [0, 0, 0, 1, 1]);
        assert_eq!(commutant(&cd, 5, 1).unwrap_err(), Error::BadPrime(5));
    }
}
