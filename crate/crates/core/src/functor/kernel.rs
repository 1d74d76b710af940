use serde::Serialize;

use super::action::CurveData;
use super::hom::r_coords;
use crate::error::{Error, Result};
use crate::ntheory;
use crate::orders::{KElem, Lattice, QuadIdeal, QuadOrder};
use crate::zmod::Mat;

/// E[I] restricted to prime-to-p torsion, with the order predicted by #(R/I).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdealKernel {
    /// #(R/I).
    pub norm: u128,
    /// Order of E[I](k_s) measured on torsion points.
    pub measured: u128,
    /// p-part of the norm, attributed to the connected part without verification.
    pub p_part_inferred: u128,
    /// Per prime ℓ: cyclic factor exponents of E[I][ℓ^∞].
    pub primes: Vec<(u64, Vec<u32>)>,
}

impl IdealKernel {
    pub fn matches(&self) -> bool {
        self.measured * self.p_part_inferred == self.norm
    }
}

/// Kernel of an R-ideal given as a lattice inside R.
pub fn kernel_of_ideal(data: &CurveData, owner: &QuadOrder, ideal: &Lattice) -> Result<IdealKernel> {
    data.check_subring(owner)?;
    let r = owner.lattice();
    if !ideal.is_subset(&r) {
        return Err(Error::InvalidInput("ideal is not contained in the order".into()));
    }
    let gens = ideal.basis();
    if gens.iter().any(|g| !ideal.contains(&g.mul(&owner.generator()))) {
        return Err(Error::InvalidInput("lattice is not stable under the order".into()));
    }
    let (cn, cd) = ideal.covolume();
    let (rn, rd) = r.covolume();
    let norm = ((cn * rd) / (cd * rn)) as u128;
    let p = data.characteristic();
    let coords: Vec<(i128, i128)> = gens.iter().map(|g| r_coords(owner, g)).collect::<Result<_>>()?;
    let mut measured = 1u128;
    let mut primes = Vec::new();
    let mut p_part = 1u128;
    for (ell, v) in ntheory::factor(norm as u64) {
        if ell == p {
            p_part *= (ell as u128).pow(v);
            continue;
        }
        // n·R ⊆ I, so E[I] lies in E[ℓ^v] at ℓ
        let act = data.action(owner, ell, v)?;
        let ring = act.ring();
        let mut a: Mat = Vec::new();
        for &(u, w) in &coords {
            let m = ring.mat_add(&ring.mat_scale(&ring.identity(2), ring.reduce(u)), &ring.mat_scale(&act.omega, ring.reduce(w)));
            a.extend(m);
        }
        let ker = ring.kernel(&a, 2);
        measured *= (ell as u128).pow(ker.log_size());
        let mut s = ker.orders.clone();
        s.sort_unstable_by(|x, y| y.cmp(x));
        primes.push((ell, s));
    }
    Ok(IdealKernel { norm, measured, p_part_inferred: p_part, primes })
}

pub fn kernel_of_quad_ideal(data: &CurveData, ideal: &QuadIdeal) -> Result<IdealKernel> {
    kernel_of_ideal(data, &ideal.owner, &ideal.zbasis())
}

/// The principal ideal α·R.
pub fn principal_lattice(owner: &QuadOrder, alpha: &KElem) -> Result<Lattice> {
    owner.lattice().scale(alpha)
}
