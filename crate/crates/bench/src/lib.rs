//! Fixtures shared by the criterion benches.

use isopower::arith::{EllipticCurve, FiniteField};
use isopower::functor::CurveData;
use isopower::Bounds;

pub fn curve(p: u64, m: u32, a: [i64; 5]) -> EllipticCurve {
    let f = FiniteField::new(p, m, &Bounds::default()).expect("field");
    EllipticCurve::from_ints(f, a).expect("nonsingular")
}

pub fn curve_data(p: u64, m: u32, a: [i64; 5]) -> CurveData {
    CurveData::new(curve(p, m, a), Bounds::default()).expect("curve data")
}
