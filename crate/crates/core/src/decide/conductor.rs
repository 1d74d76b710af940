use serde::Serialize;

use crate::error::Result;
use crate::functor::CurveData;
use crate::ntheory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EndConductor {
    Quadratic { f_e: u64 },
    Rank4,
}

/// Outcome of "π acts as an integer scalar on E[ℓ^level]".
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScalarTest {
    pub ell: u64,
    pub level: u32,
    /// Degree of the extension over which E[ℓ^level] is rational.
    pub degree: u32,
    pub scalar: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConductorReport {
    pub q: u64,
    pub t: i64,
    /// Conductor of Z[π]; absent when π is an integer.
    pub f0: Option<u64>,
    pub dk: Option<i64>,
    pub end: EndConductor,
    pub tests: Vec<ScalarTest>,
    pub flags: Vec<String>,
}

impl ConductorReport {
    pub fn f_e(&self) -> Option<u64> {
        match self.end {
            EndConductor::Quadratic { f_e } => Some(f_e),
            EndConductor::Rank4 => None,
        }
    }
}

/// Conductor of End E. For each prime ℓ ≠ p dividing f0, v_ℓ(f0/f_E) is the largest j
/// such that π is an integer scalar on E[ℓ^j]; the p-part of f0 never survives in f_E.
pub fn end_conductor(data: &CurveData) -> Result<ConductorReport> {
    let q = data.q();
    let t = data.trace();
    let p = data.characteristic();
    let Some(zpi) = data.frobenius_order() else {
        return Ok(ConductorReport {
            q,
            t,
            f0: None,
            dk: None,
            end: EndConductor::Rank4,
            tests: Vec::new(),
            flags: Vec::new(),
        });
    };
    let f0 = zpi.conductor();
    let mut f_e = f0;
    let mut tests = Vec::new();
    for (ell, v) in ntheory::factor(f0) {
        if ell == p {
            f_e /= ell.pow(v);
            continue;
        }
        for j in 1..=v {
            let lat = data.torsion_lattice(ell, j)?;
            let f = lat.frob;
            let scalar = (f[0][1] == 0 && f[1][0] == 0 && f[0][0] == f[1][1]).then_some(f[0][0]);
            tests.push(ScalarTest { ell, level: j, degree: lat.degree, scalar });
            if scalar.is_none() {
                break;
            }
            f_e /= ell;
        }
    }
    let mut flags = Vec::new();
    let a = ntheory::valuation(q as u128, p as u128);
    if data.is_supersingular() && a >= 3 {
        flags.push(format!("supersingular with rank-2 endomorphisms over F_{{{p}^{a}}}"));
    }
    Ok(ConductorReport {
        q,
        t,
        f0: Some(f0),
        dk: Some(zpi.fundamental_disc()),
        end: EndConductor::Quadratic { f_e },
        tests,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{EllipticCurve, FiniteField};
    use crate::config::Bounds;

    fn report(p: u64, m: u32, a: [i64; 5]) -> ConductorReport {
        let b = Bounds::default();
        let f = FiniteField::new(p, m, &b).unwrap();
        end_conductor(&CurveData::new(EllipticCurve::from_ints(f, a).unwrap(), b).unwrap()).unwrap()
    }

    #[test]
    fn small_conductors() {
        let r = report(5, 1, [0, 0, 0, 1, 1]);
        assert_eq!((r.f0, r.f_e()), (Some(1), Some(1)));
        let r = report(5, 1, [0, 0, 0, 1, 0]);
        assert_eq!((r.f0, r.f_e()), (Some(2), Some(1)));
        assert_eq!(r.tests[0].scalar, Some(1));
        // y² + y = x³ over F_4 has t = −4
        let r = report(2, 2, [0, 0, 1, 0, 0]);
        assert_eq!(r.end, EndConductor::Rank4);
    }
}
