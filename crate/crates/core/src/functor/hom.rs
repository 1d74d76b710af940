use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde::Serialize;

use super::action::CurveData;
use crate::error::{Error, Result};
use crate::intmat::{self, IMat};
use crate::modules::RModule;
use crate::ntheory;
use crate::orders::{KElem, QuadOrder};
use crate::zmod::{self, Mat, Zle};

/// A_[ℓ^e] = Hom_R(M, E[ℓ^e]) as an abelian group with its Frobenius matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsionRealization {
    pub ell: u64,
    pub e: u32,
    /// Exponents of the cyclic factors, descending.
    pub structure: Vec<u32>,
    /// Frobenius on the kernel generators; column k is the image of generator k.
    pub frob: Mat,
    /// Characteristic polynomial mod ℓ^e (ascending), when the group is free.
    pub charpoly: Option<Vec<u64>>,
}

impl TorsionRealization {
    pub fn log_order(&self) -> u32 {
        self.structure.iter().sum()
    }

    pub fn is_free_of_rank(&self, rank: usize) -> bool {
        self.structure.len() == rank && self.structure.iter().all(|&x| x == self.e)
    }
}

/// Coordinates of an element of R in its Z-basis {1, f_R·ω}.
pub(crate) fn r_coords(base: &QuadOrder, x: &KElem) -> Result<(i128, i128)> {
    if !x.is_integral_in(base) {
        return Err(Error::InvalidInput("coefficient does not lie in the order".into()));
    }
    Ok((x.x[0], x.x[1] / base.conductor() as i128))
}

/// Relation system Σ_j (u_ij + v_ij·f_R ω)·g_j = 0 on k unknown points.
struct Relations {
    k: usize,
    rows: Vec<Vec<(i128, i128)>>,
}

impl Relations {
    /// R-linearity of g: M → G on a Z-basis b_i: f_R ω·g_i = Σ_j Ω_ij g_j.
    fn module(m: &RModule) -> Self {
        let omega = m.omega_matrix();
        let k = omega.len();
        let rows = (0..k)
            .map(|i| (0..k).map(|j| (-omega[i][j], (i == j) as i128)).collect())
            .collect();
        Relations { k, rows }
    }

    fn presentation(base: &QuadOrder, n: usize, x: &[Vec<KElem>]) -> Result<Self> {
        let rows = x
            .iter()
            .map(|row| row.iter().map(|e| r_coords(base, e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Relations { k: n, rows })
    }

    /// Integer matrix on (Z²)^k of the relations for a 2×2 action matrix w.
    fn matrix(&self, w: &[Vec<i128>]) -> IMat {
        let mut a = vec![vec![0i128; 2 * self.k]; 2 * self.rows.len()];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, &(u, v)) in row.iter().enumerate() {
                for r in 0..2 {
                    for c in 0..2 {
                        a[2 * i + r][2 * j + c] = u * (r == c) as i128 + v * w[r][c];
                    }
                }
            }
        }
        a
    }
}

fn to_int(m: &Mat) -> IMat {
    m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
}

fn block_diag(m: &[Vec<i128>], k: usize) -> IMat {
    let d = m.len();
    let mut out = vec![vec![0; d * k]; d * k];
    for b in 0..k {
        for r in 0..d {
            for c in 0..d {
                out[b * d + r][b * d + c] = m[r][c];
            }
        }
    }
    out
}

/// Solves the relations on E[ℓ^e] and returns the kernel with its Frobenius matrix.
fn torsion_solution(data: &CurveData, base: &QuadOrder, rel: &Relations, ell: u64, e: u32) -> Result<TorsionRealization> {
    let act = data.action(base, ell, e)?;
    let ring = act.ring();
    let a = rel.matrix(&to_int(&act.omega));
    let a: Mat = a.iter().map(|r| r.iter().map(|&x| ring.reduce(x)).collect()).collect();
    let ker = ring.kernel(&a, 2 * rel.k);
    let fb = block_diag(&to_int(&act.frob), rel.k);
    let fb: Mat = fb.iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect();
    let cols: Vec<Vec<u64>> = ker.gens.iter().map(|g| ker.coords(&ring.mat_vec(&fb, g))).collect();
    let n = cols.len();
    let frob: Mat = (0..n).map(|r| (0..n).map(|c| cols[c][r]).collect()).collect();
    let mut structure = ker.orders.clone();
    structure.sort_unstable_by(|x, y| y.cmp(x));
    let charpoly = ker.is_free().then(|| ring.charpoly(&frob));
    Ok(TorsionRealization { ell, e, structure, frob, charpoly })
}

/// Hom_R(M, E[ℓ^e]) with the Frobenius action.
pub fn hom_torsion(m: &RModule, data: &CurveData, ell: u64, e: u32) -> Result<TorsionRealization> {
    if ell == data.characteristic() {
        return Err(Error::BadPrime(ell));
    }
    data.check_subring(m.base())?;
    torsion_solution(data, m.base(), &Relations::module(m), ell, e)
}

/// log_ℓ #{g ∈ G_ℓ^k satisfying the relations} for G_ℓ the ℓ-part of E(F_{q^deg}).
fn local_log_count(data: &CurveData, base: &QuadOrder, rel: &Relations, deg: u32, ell: u64) -> Result<u32> {
    let (a, d) = data.generator_ratio(base)?;
    let pg = data.primary(deg, ell)?;
    let [a1, a2] = pg.exps;
    if d % ell != 0 {
        // act directly on E(F_{q^deg})[ℓ^∞] ≅ Z/ℓ^{a1} × Z/ℓ^{a2}
        let big = data.extension(deg)?;
        let f = pg.matrix_of(|p| big.frobenius(p));
        let ring = Zle::new(ell, a1);
        let scale = ring.mul(ring.reduce(a as i128), ring.inv(ring.reduce(d as i128)).expect("unit"));
        let c0 = data.c0()? as i128;
        let w: IMat = (0..2)
            .map(|r| {
                (0..2)
                    .map(|c| {
                        let x = f[r][c] as i128 - if r == c { c0 } else { 0 };
                        ring.mul(ring.reduce(x), scale) as i128
                    })
                    .collect()
            })
            .collect();
        let dom: Vec<u32> = (0..rel.k).flat_map(|_| [a1, a2]).collect();
        let cod: Vec<u32> = (0..rel.rows.len()).flat_map(|_| [a1, a2]).collect();
        Ok(zmod::mixed_kernel_log_size(ell, &dom, &cod, &rel.matrix(&w)))
    } else {
        // the order's generator needs division by ℓ: work inside E[ℓ^{a1}] and cut out
        // the rational points with F^deg − 1
        if a1 == 0 {
            return Ok(0);
        }
        let act = data.action(base, ell, a1)?;
        let ring = act.ring();
        let fm = ring.mat_sub(&ring.mat_pow(&act.frob, deg as u64), &ring.identity(2));
        let mut a = rel.matrix(&to_int(&act.omega));
        a.extend(block_diag(&to_int(&fm), rel.k));
        let a: Mat = a.iter().map(|r| r.iter().map(|&x| ring.reduce(x)).collect()).collect();
        Ok(ring.kernel(&a, 2 * rel.k).log_size())
    }
}

fn relation_count(data: &CurveData, base: &QuadOrder, rel: &Relations, deg: u32) -> Result<u128> {
    let n = data.count(deg);
    let mut total = 1u128;
    for ell in ntheory::prime_divisors(n as u64) {
        total *= (ell as u128).pow(local_log_count(data, base, rel, deg, ell)?);
    }
    Ok(total)
}

fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// (x² − t·x + q)^n, ascending coefficients.
pub fn frobenius_power_poly(t: i64, q: u64, n: usize) -> Vec<i128> {
    let base = [q as i128, -(t as i128), 1];
    (0..n).fold(vec![1], |acc, _| poly_mul(&acc, &base))
}

/// det(C^m − I) for the companion matrix C of a monic polynomial.
fn companion_count(poly: &[i128], m: u32) -> i128 {
    let n = poly.len() - 1;
    if n == 0 {
        return 1;
    }
    let mut c = vec![vec![0i128; n]; n];
    for i in 1..n {
        c[i][i - 1] = 1;
    }
    for (i, row) in c.iter_mut().enumerate() {
        row[n - 1] = -poly[i];
    }
    let mut p = intmat::identity(n);
    for _ in 0..m {
        p = intmat::mat_mul(&p, &c);
    }
    for (i, row) in p.iter_mut().enumerate() {
        row[i] -= 1;
    }
    intmat::det(&p)
}

/// #Hom_R(M, E(F_{q^m})) computed on points, with the prediction from the
/// characteristic polynomial of Frobenius checked on Hom_R(M, E[ℓ]).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomCount {
    pub degree: u32,
    pub count: u128,
    pub predicted: u128,
    /// Prime at which the characteristic polynomial was checked.
    pub check_ell: u64,
    pub saturated: bool,
}

impl HomCount {
    pub fn agrees(&self) -> bool {
        self.count == self.predicted
    }
}

/// First prime ℓ ≠ p for which Hom_R(M, E[ℓ]) is computable within bounds.
pub(crate) fn check_level(m: &RModule, data: &CurveData) -> Result<TorsionRealization> {
    let mut last = None;
    for ell in [2u64, 3, 5, 7, 11, 13] {
        if ell == data.characteristic() {
            continue;
        }
        match hom_torsion(m, data, ell, 1) {
            Ok(r) => return Ok(r),
            Err(e) if e.is_bound_violation() => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::UnsupportedCase("no torsion level available".into())))
}

pub fn hom_point_count(m: &RModule, data: &CurveData, deg: u32) -> Result<HomCount> {
    data.check_subring(m.base())?;
    let saturated = data.end_order()? == *m.base();
    let count = relation_count(data, m.base(), &Relations::module(m), deg)?;
    let level = check_level(m, data)?;
    let n = m.rank();
    let poly = frobenius_power_poly(data.trace(), data.q(), n);
    let ring = Zle::new(level.ell, 1);
    let expected: Vec<u64> = poly.iter().map(|&c| ring.reduce(c)).collect();
    let predicted = companion_count(&poly, deg).unsigned_abs();
    let consistent = level.is_free_of_rank(2 * n) && level.charpoly.as_deref() == Some(&expected[..]);
    let out = HomCount { degree: deg, count, predicted, check_ell: level.ell, saturated };
    if saturated && (!consistent || !out.agrees()) {
        return Err(Error::CrossCheckMismatch(format!(
            "points give {count}, characteristic polynomial gives {predicted} (free: {consistent})"
        )));
    }
    Ok(out)
}

/// #Hom_R(coker X, E(F_{q^m})) for a presentation X: R^r → R^n, torsion allowed.
pub fn hom_presentation_count(base: &QuadOrder, n: usize, x: &[Vec<KElem>], data: &CurveData, deg: u32) -> Result<u128> {
    data.check_subring(base)?;
    if x.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput("presentation rows must have n entries".into()));
    }
    relation_count(data, base, &Relations::presentation(base, n, x)?, deg)
}

/// Hom_R(coker X, E[ℓ^e]).
pub fn hom_presentation_torsion(
    base: &QuadOrder,
    n: usize,
    x: &[Vec<KElem>],
    data: &CurveData,
    ell: u64,
    e: u32,
) -> Result<TorsionRealization> {
    data.check_subring(base)?;
    torsion_solution(data, base, &Relations::presentation(base, n, x)?, ell, e)
}

/// A = HOM_R(M, E) with memoized torsion realizations.
#[derive(Debug)]
pub struct VarietyModel {
    data: Arc<CurveData>,
    module: RModule,
    torsion: RwLock<HashMap<(u64, u32), Arc<TorsionRealization>>>,
}

impl VarietyModel {
    pub fn new(data: Arc<CurveData>, module: RModule) -> Result<Self> {
        data.check_subring(module.base())?;
        Ok(VarietyModel { data, module, torsion: RwLock::default() })
    }

    pub fn dim(&self) -> usize {
        self.module.rank()
    }

    pub fn module(&self) -> &RModule {
        &self.module
    }

    pub fn curve_data(&self) -> &CurveData {
        &self.data
    }

    pub fn torsion(&self, ell: u64, e: u32) -> Result<Arc<TorsionRealization>> {
        if let Some(t) = self.torsion.read().expect("cache lock").get(&(ell, e)) {
            return Ok(t.clone());
        }
        let t = Arc::new(hom_torsion(&self.module, &self.data, ell, e)?);
        self.torsion.write().expect("cache lock").insert((ell, e), t.clone());
        Ok(t)
    }

    pub fn point_count(&self, deg: u32) -> Result<HomCount> {
        hom_point_count(&self.module, &self.data, deg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::test_curve;
    use crate::modules::{module_from_ideals, module_from_presentation};
    use crate::orders::QuadIdeal;

    #[test]
    fn free_modules_give_powers() {
        let cd = test_curve(5, 1, [0, 0, 0, 1, 1]);
        let r = cd.end_order().unwrap();
        let one = RModule::free(r, 1);
        let tors = hom_torsion(&one, &cd, 2, 1).unwrap();
        assert_eq!(tors.structure, vec![1, 1]);
        // x² + 3x + 5 ≡ x² + x + 1 (mod 2)
        assert_eq!(tors.charpoly, Some(vec![1, 1, 1]));
        let two = RModule::free(r, 2);
        assert_eq!(hom_point_count(&one, &cd, 1).unwrap().count, 9);
        assert_eq!(hom_point_count(&two, &cd, 1).unwrap().count, 81);
        for m in 1..=3 {
            let c = hom_point_count(&two, &cd, m).unwrap();
            assert_eq!(c.count, cd.count(m).pow(2));
        }
        assert_eq!(hom_torsion(&two, &cd, 3, 1).unwrap().structure, vec![1; 4]);
    }

    #[test]
    fn unsaturated_order_adds_two_torsion() {
        // End = Z[i] for y² = x³ + x over F_5, with π = 1 + 2i
        let cd = test_curve(5, 1, [0, 0, 0, 1, 0]);
        let r = QuadOrder::from_disc(-16).unwrap();
        let two_i = KElem::from_sqrt(-4, 0, 1, 1);
        let x = vec![vec![two_i, KElem::integer(-4, -2)], vec![KElem::integer(-4, 2), two_i]];
        assert_eq!(module_from_presentation(&r, 2, &x).unwrap().rank(), 1);
        assert_eq!(hom_presentation_count(&r, 2, &x, &cd, 1).unwrap(), 16);
        let ok = module_from_ideals(&r, &[QuadIdeal::principal(r.maximal())]).unwrap();
        let c = hom_point_count(&ok, &cd, 1).unwrap();
        assert!(!c.saturated);
        assert_eq!((c.count, c.predicted), (16, 4));
    }

    #[test]
    fn maximal_order_module_over_smaller_end() {
        // a curve over F_5 with t = 2 and End = Z[2i]
        let b = crate::Bounds::default();
        let f = crate::arith::FiniteField::new(5, 1, &b).unwrap();
        let mut found = false;
        for a4 in 0..5 {
            for a6 in 0..5 {
                let Ok(e) = crate::arith::EllipticCurve::from_ints(f.clone(), [0, 0, 0, a4, a6]) else { continue };
                let cd = CurveData::new(e, b).unwrap();
                if cd.trace() != 2 || cd.end_order().unwrap().conductor() != 2 {
                    continue;
                }
                found = true;
                let r = cd.end_order().unwrap();
                let ok = module_from_ideals(&r, &[QuadIdeal::principal(r.maximal())]).unwrap();
                for m in 1..=3 {
                    let c = hom_point_count(&ok, &cd, m).unwrap();
                    assert!(c.saturated && c.agrees());
                    assert_eq!(c.count, cd.count(m));
                }
            }
        }
        assert!(found);
    }
}
