//! The functor M ↦ HOM_R(M, E) realized on torsion points and point counts.

pub mod action;
pub mod duality;
pub mod hom;
pub mod kernel;

pub use action::{CurveData, TorsionAction};
pub use duality::{duality_check, is_saturated, DualityReport};
pub use hom::{
    frobenius_power_poly, hom_point_count, hom_presentation_count, hom_presentation_torsion, hom_torsion, HomCount,
    TorsionRealization, VarietyModel,
};
pub use kernel::{kernel_of_ideal, kernel_of_quad_ideal, principal_lattice, IdealKernel};

#[cfg(test)]
pub(crate) fn test_curve(p: u64, m: u32, a: [i64; 5]) -> CurveData {
    let b = crate::Bounds::default();
    let f = crate::arith::FiniteField::new(p, m, &b).unwrap();
    CurveData::new(crate::arith::EllipticCurve::from_ints(f, a).unwrap(), b).unwrap()
}
