use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::arith::{extension_count, primary_part, torsion_basis, EllipticCurve, PrimaryGroup, TorsionLattice};
use crate::config::Bounds;
use crate::decide::{end_conductor, ConductorReport, EndConductor};
use crate::error::{Error, Result};
use crate::ntheory;
use crate::orders::QuadOrder;
use crate::zmod::{Mat, Zle};

/// A curve together with its Frobenius data and memoized torsion computations.
///
/// Frobenius is embedded as π = c0 + f0·ω, i.e. π = (t + f0·√d_K)/2.
#[derive(Debug)]
pub struct CurveData {
    curve: EllipticCurve,
    bounds: Bounds,
    t: i64,
    frob_order: Option<QuadOrder>,
    lattices: RwLock<HashMap<(u64, u32), Arc<TorsionLattice>>>,
    extensions: RwLock<HashMap<u32, Arc<EllipticCurve>>>,
    primaries: RwLock<HashMap<(u32, u64), Arc<PrimaryGroup>>>,
    conductor: OnceLock<Result<ConductorReport>>,
}

fn memo<K: std::hash::Hash + Eq + Copy, V>(
    table: &RwLock<HashMap<K, Arc<V>>>,
    key: K,
    make: impl FnOnce() -> Result<V>,
) -> Result<Arc<V>> {
    if let Some(v) = table.read().expect("memo lock").get(&key) {
        return Ok(v.clone());
    }
    let v = Arc::new(make()?);
    table.write().expect("memo lock").insert(key, v.clone());
    Ok(v)
}

/// Action of Frobenius and of the generator f_R·ω of an order R on a basis of E[ℓ^e].
#[derive(Debug, Clone)]
pub struct TorsionAction {
    pub ell: u64,
    pub e: u32,
    pub frob: Mat,
    pub omega: Mat,
    /// The basis is ℓ^shift times the basis of `lattice`.
    pub shift: u32,
    pub lattice: Arc<TorsionLattice>,
}

impl TorsionAction {
    pub fn ring(&self) -> Zle {
        Zle::new(self.ell, self.e)
    }
}

impl CurveData {
    pub fn new(curve: EllipticCurve, bounds: Bounds) -> Result<Self> {
        let t = curve.frobenius_trace(&bounds)?;
        let disc = t * t - 4 * curve.q() as i64;
        let frob_order = if disc < 0 { Some(QuadOrder::from_disc(disc)?) } else { None };
        Ok(CurveData {
            curve,
            bounds,
            t,
            frob_order,
            lattices: RwLock::default(),
            extensions: RwLock::default(),
            primaries: RwLock::default(),
            conductor: OnceLock::new(),
        })
    }

    pub fn curve(&self) -> &EllipticCurve {
        &self.curve
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn trace(&self) -> i64 {
        self.t
    }

    pub fn q(&self) -> u64 {
        self.curve.q()
    }

    pub fn characteristic(&self) -> u64 {
        self.curve.characteristic()
    }

    pub fn is_supersingular(&self) -> bool {
        self.t.rem_euclid(self.characteristic() as i64) == 0
    }

    /// Z[π], or `None` when π is an integer (t² = 4q).
    pub fn frobenius_order(&self) -> Option<QuadOrder> {
        self.frob_order
    }

    fn quadratic(&self) -> Result<QuadOrder> {
        self.frob_order.ok_or_else(|| Error::UnsupportedCase("Frobenius is an integer; no quadratic order".into()))
    }

    /// Constant term c0 with π = c0 + f0·ω.
    pub fn c0(&self) -> Result<i64> {
        let o = self.quadratic()?;
        Ok((self.t - o.conductor() as i64 * o.fundamental_disc()) / 2)
    }

    pub fn conductor_report(&self) -> Result<&ConductorReport> {
        self.conductor.get_or_init(|| end_conductor(self)).as_ref().map_err(Clone::clone)
    }

    /// End E as a quadratic order, when it has rank 2.
    pub fn end_order(&self) -> Result<QuadOrder> {
        let o = self.quadratic()?;
        match self.conductor_report()?.end {
            EndConductor::Quadratic { f_e } => Ok(o.with_conductor(f_e)),
            EndConductor::Rank4 => Err(Error::UnsupportedCase("endomorphism ring has rank 4".into())),
        }
    }

    /// Fails with `NotSubring` unless R ⊆ End E.
    pub fn check_subring(&self, r: &QuadOrder) -> Result<()> {
        let end = self.end_order()?;
        if r.fundamental_disc() != end.fundamental_disc() || !r.conductor().is_multiple_of(end.conductor()) {
            return Err(Error::NotSubring { conductor: r.conductor() });
        }
        Ok(())
    }

    pub fn torsion_lattice(&self, ell: u64, e: u32) -> Result<Arc<TorsionLattice>> {
        memo(&self.lattices, (ell, e), || torsion_basis(&self.curve, ell, e, &self.bounds))
    }

    pub fn extension(&self, m: u32) -> Result<Arc<EllipticCurve>> {
        memo(&self.extensions, m, || self.curve.base_change(m, &self.bounds))
    }

    /// #E(F_{q^m}) from the trace recurrence.
    pub fn count(&self, m: u32) -> u128 {
        extension_count(self.t, self.q(), m)
    }

    /// ℓ-primary part of E(F_{q^m}).
    pub fn primary(&self, m: u32, ell: u64) -> Result<Arc<PrimaryGroup>> {
        let qm = (self.q() as u128).checked_pow(m).unwrap_or(u128::MAX);
        if qm > self.bounds.field_order as u128 {
            return Err(Error::bound("field order", qm, self.bounds.field_order));
        }
        let big = self.extension(m)?;
        memo(&self.primaries, (m, ell), || primary_part(&big, ell, self.count(m), &self.bounds))
    }

    /// f_R·ω = a·(π − c0)/d with gcd(a, d) = 1.
    pub fn generator_ratio(&self, r: &QuadOrder) -> Result<(u64, u64)> {
        let f0 = self.quadratic()?.conductor();
        let g = ntheory::gcd_u(f0, r.conductor());
        Ok((r.conductor() / g, f0 / g))
    }

    /// Frobenius and f_R·ω on E[ℓ^e]. When ℓ divides the denominator d, the division
    /// by ℓ^j is carried out on E[ℓ^{e+j}], whose basis multiplied by ℓ^j spans E[ℓ^e].
    pub fn action(&self, r: &QuadOrder, ell: u64, e: u32) -> Result<TorsionAction> {
        let (a, d) = self.generator_ratio(r)?;
        let j = ntheory::valuation(d as u128, ell as u128);
        let lattice = self.torsion_lattice(ell, e + j)?;
        let big = Zle::new(ell, e + j);
        let ring = Zle::new(ell, e);
        let c0 = big.reduce(self.c0()? as i128);
        let lj = ell.pow(j);
        let unit = ring.inv(ring.reduce((d / lj) as i128)).expect("cofactor prime to ℓ");
        let scale = ring.mul(unit, ring.reduce(a as i128));
        let mut omega = vec![vec![0; 2]; 2];
        let mut frob = vec![vec![0; 2]; 2];
        for r_ in 0..2 {
            for c in 0..2 {
                let f = lattice.frob[r_][c] % big.n;
                let shifted = if r_ == c { big.sub(f, c0) } else { f };
                if shifted % lj != 0 {
                    return Err(Error::DenominatorClash { ell });
                }
                omega[r_][c] = ring.mul(ring.reduce((shifted / lj) as i128), scale);
                frob[r_][c] = f % ring.n;
            }
        }
        Ok(TorsionAction { ell, e, frob, omega, shift: j, lattice })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::test_curve as data;

    #[test]
    fn omega_satisfies_its_minimal_polynomial() {
        // y² = x³ + x over F_5: π = 1 + 2i, End = Z[i]
        let cd = data(5, 1, [0, 0, 0, 1, 0]);
        assert_eq!(cd.c0().unwrap(), 5);
        let zi = QuadOrder::from_disc(-4).unwrap();
        for (ell, e) in [(2, 1), (2, 2), (3, 1)] {
            let act = cd.action(&zi, ell, e).unwrap();
            let r = act.ring();
            // ω = −2 + i satisfies ω² + 4ω + 5 = 0
            let w2 = r.mat_mul(&act.omega, &act.omega);
            let lhs = r.mat_add(&r.mat_add(&w2, &r.mat_scale(&act.omega, 4)), &r.mat_scale(&r.identity(2), 5));
            assert_eq!(lhs, r.zeros(2, 2), "ℓ={ell} e={e}");
            assert_eq!(r.mat_mul(&act.omega, &act.frob), r.mat_mul(&act.frob, &act.omega));
        }
    }
}
