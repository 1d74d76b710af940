use serde::{Deserialize, Serialize};

use super::lattice::{KElem, Lattice};
use crate::error::{Error, Result};
use crate::ntheory;

/// Imaginary quadratic order of discriminant D = f²·d_K.
///
/// Elements of K are written in the basis (1, ω) of O_K with ω = (d_K + √d_K)/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadOrder {
    disc: i64,
    dk: i64,
    f: u64,
}

fn is_squarefree(n: u64) -> bool {
    ntheory::factor(n).iter().all(|&(_, e)| e == 1)
}

pub fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    let m = d.unsigned_abs();
    match d.rem_euclid(4) {
        1 => is_squarefree(m),
        0 => {
            let q = d / 4;
            matches!(q.rem_euclid(4), 2 | 3) && is_squarefree(q.unsigned_abs())
        }
        _ => false,
    }
}

impl QuadOrder {
    pub fn from_disc(d: i64) -> Result<Self> {
        if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
            return Err(Error::BadDiscriminant(d));
        }
        let mut s = 1u64;
        let mut m = d;
        for (r, e) in ntheory::factor(d.unsigned_abs()) {
            let k = e / 2;
            s *= r.pow(k);
            m /= (r as i64).pow(2 * k);
        }
        let (dk, f) = if m.rem_euclid(4) == 1 { (m, s) } else { (4 * m, s / 2) };
        debug_assert!(is_fundamental(dk));
        Ok(QuadOrder { disc: d, dk, f })
    }

    pub fn from_conductor(dk: i64, f: u64) -> Result<Self> {
        if !is_fundamental(dk) {
            return Err(Error::BadDiscriminant(dk));
        }
        if f == 0 {
            return Err(Error::InvalidInput("conductor must be positive".into()));
        }
        let disc = dk.checked_mul((f as i64).checked_mul(f as i64).ok_or(Error::BadDiscriminant(dk))?);
        Ok(QuadOrder { disc: disc.ok_or(Error::BadDiscriminant(dk))?, dk, f })
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn fundamental_disc(&self) -> i64 {
        self.dk
    }

    pub fn conductor(&self) -> u64 {
        self.f
    }

    pub fn is_maximal(&self) -> bool {
        self.f == 1
    }

    /// The order of conductor g in the same field.
    pub fn with_conductor(&self, g: u64) -> QuadOrder {
        QuadOrder::from_conductor(self.dk, g).expect("fundamental discriminant")
    }

    pub fn maximal(&self) -> QuadOrder {
        self.with_conductor(1)
    }

    /// True when `self ⊆ other`.
    pub fn is_contained_in(&self, other: &QuadOrder) -> bool {
        self.dk == other.dk && self.f.is_multiple_of(other.f)
    }

    /// Orders containing this one, from itself up to the maximal order.
    pub fn suborder_chain_candidates(&self) -> Vec<QuadOrder> {
        let mut ds = ntheory::divisors(self.f);
        ds.reverse();
        ds.into_iter().map(|g| self.with_conductor(g)).collect()
    }

    /// ω² = d_K·ω − n_ω.
    pub fn n_omega(&self) -> i128 {
        let d = self.dk as i128;
        (d * d - d) / 4
    }

    /// The generator f·ω, so that the order is Z + Z·fω.
    pub fn generator(&self) -> KElem {
        KElem::new(self.dk, [0, self.f as i128], 1)
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::new(self.dk, &[[1, 0], [0, self.f as i128]], 1).expect("full rank")
    }

    /// Number of roots of unity in the order.
    pub fn units(&self) -> u64 {
        match self.disc {
            -3 => 6,
            -4 => 4,
            _ => 2,
        }
    }
}
