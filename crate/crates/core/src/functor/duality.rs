use serde::Serialize;

use super::action::CurveData;
use super::hom::{check_level, hom_point_count, hom_torsion, HomCount, TorsionRealization};
use crate::error::{Error, Result};
use crate::modules::{dual_module, normal_form, ModuleNF, RModule};
use crate::orders::QuadOrder;

/// Comparison of HOM_R(M, E) and HOM_R(M*, E).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub module: ModuleNF,
    pub dual: ModuleNF,
    pub counts: Vec<u128>,
    pub dual_counts: Vec<u128>,
    pub ell: u64,
    pub charpoly: Option<Vec<u64>>,
    pub dual_charpoly: Option<Vec<u64>>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.counts == self.dual_counts && self.charpoly == self.dual_charpoly && self.charpoly.is_some()
    }
}

/// Point counts over F_{q^m} for m in `degrees` and Frobenius characteristic
/// polynomials on ℓ-torsion, for M and its dual. Without `ell` the first prime
/// whose torsion fits the bounds is used.
pub fn duality_check(m: &RModule, data: &CurveData, degrees: &[u32], ell: Option<u64>) -> Result<DualityReport> {
    let d = dual_module(m)?;
    let level = |x: &RModule| -> Result<TorsionRealization> {
        match ell {
            Some(l) => hom_torsion(x, data, l, 1),
            None => check_level(x, data),
        }
    };
    let (lm, ld) = (level(m)?, level(&d)?);
    let counts = |x: &RModule| -> Result<Vec<u128>> {
        degrees.iter().map(|&k| hom_point_count(x, data, k).map(|c: HomCount| c.count)).collect()
    };
    Ok(DualityReport {
        module: normal_form(m)?,
        dual: normal_form(&d)?,
        counts: counts(m)?,
        dual_counts: counts(&d)?,
        ell: lm.ell,
        charpoly: if lm.ell == ld.ell { lm.charpoly } else { None },
        dual_charpoly: ld.charpoly,
    })
}

/// Whether R is saturated in End E. For orders of the same field this holds exactly
/// when R = End E.
pub fn is_saturated(r: &QuadOrder, data: &CurveData) -> Result<bool> {
    let end = data.end_order()?;
    if r.fundamental_disc() != end.fundamental_disc() || !r.conductor().is_multiple_of(end.conductor()) {
        return Err(Error::NotSubring { conductor: r.conductor() });
    }
    Ok(*r == end)
}
