use serde::Serialize;

use super::conductor::{EndConductor, ScalarTest};
use crate::config::Bounds;
use crate::error::{Error, Result};
use crate::functor::CurveData;
use crate::kernels::{commutant, galois_image_test, non_kernel_subgroups, SubgroupData};
use crate::ntheory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduction {
    Ordinary,
    Supersingular,
}

/// Which branch of the classification makes the functor an equivalence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Case {
    #[serde(rename = "ordinary-Zpi=R")]
    OrdinaryZpiIsEnd,
    #[serde(rename = "ss-Fp-Zpi=R")]
    SupersingularPrimeZpiIsEnd,
    #[serde(rename = "ss-Fp2-rank4")]
    SupersingularRank4,
    #[serde(rename = "none")]
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "YES")]
    Yes,
    #[serde(rename = "NO")]
    No,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    ScalarTest(ScalarTest),
    /// Whether F_ℓ[Frobenius] fills C/ℓC, compared with the scalar tests.
    GaloisImage { ell: u64, surjective: bool, end_equals_zpi: bool },
    /// A Frobenius-stable subgroup of E[ℓ] that is not a kernel subgroup.
    Witness { subgroup: SubgroupData },
    Note { text: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceVerdict {
    pub curve: String,
    pub q: u64,
    pub t: i64,
    pub ss: Reduction,
    pub f0: Option<u64>,
    #[serde(rename = "fE", skip_serializing_if = "Option::is_none")]
    pub f_e: Option<u64>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub rank4: bool,
    pub case: Case,
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
}

pub const P_POWER_NOTE: &str = "p-power obstruction: an alpha_p subgroup scheme is not a kernel subgroup";

/// Human-readable identifier: field order and coefficient encodings.
pub fn curve_id(data: &CurveData) -> String {
    let c = data.curve();
    let coeffs: Vec<String> = c.coefficients().iter().map(|a| a.encoding().to_string()).collect();
    format!("F{}:[{}]", c.field().order(), coeffs.join(","))
}

/// Decides whether HOM_R(−, E) is an equivalence onto the isogeny class of powers of E.
pub fn decide_equivalence(data: &CurveData) -> Result<EquivalenceVerdict> {
    let report = data.conductor_report()?;
    let p = data.characteristic();
    let a = ntheory::valuation(data.q() as u128, p as u128);
    let ss = if data.is_supersingular() { Reduction::Supersingular } else { Reduction::Ordinary };
    let mut evidence: Vec<Evidence> = report.tests.iter().cloned().map(Evidence::ScalarTest).collect();
    evidence.extend(report.flags.iter().map(|f| Evidence::Note { text: f.clone() }));
    let zpi_is_end = report.f0.is_some() && report.f0 == report.f_e();
    let case = match (ss, a, report.end) {
        (Reduction::Ordinary, _, _) if zpi_is_end => Case::OrdinaryZpiIsEnd,
        (Reduction::Supersingular, 1, _) if zpi_is_end => Case::SupersingularPrimeZpiIsEnd,
        (Reduction::Supersingular, 2, EndConductor::Rank4) => Case::SupersingularRank4,
        _ => Case::None,
    };
    if ss == Reduction::Supersingular && a >= 2 && case == Case::None {
        evidence.push(Evidence::Note { text: P_POWER_NOTE.into() });
    }
    if let (Some(f0), Some(f_e)) = (report.f0, report.f_e()) {
        for ell in ntheory::prime_divisors(f0).into_iter().filter(|&l| l != p) {
            let c = commutant(data, ell, 1)?;
            let img = galois_image_test(ell, std::slice::from_ref(&c.frob), &c.basis)?;
            let end_equals_zpi = (f0 / f_e) % ell != 0;
            if img.surjective != end_equals_zpi {
                return Err(Error::CrossCheckMismatch(format!(
                    "Galois image and scalar test disagree at {ell}"
                )));
            }
            evidence.push(Evidence::GaloisImage { ell, surjective: img.surjective, end_equals_zpi });
            if !end_equals_zpi {
                let bad = non_kernel_subgroups(&c, 1, data.bounds())?;
                let w = bad.first().ok_or_else(|| {
                    Error::CrossCheckMismatch(format!("no non-kernel subgroup at {ell} although End ≠ Z[π]"))
                })?;
                evidence.push(Evidence::Witness { subgroup: w.to_data() });
            }
        }
    }
    Ok(EquivalenceVerdict {
        curve: curve_id(data),
        q: data.q(),
        t: data.trace(),
        ss,
        f0: report.f0,
        f_e: report.f_e(),
        rank4: report.end == EndConductor::Rank4,
        case,
        verdict: if case == Case::None { Verdict::No } else { Verdict::Yes },
        evidence,
    })
}

/// Convenience wrapper building the curve data.
pub fn classify(curve: crate::arith::EllipticCurve, bounds: &Bounds) -> Result<EquivalenceVerdict> {
    decide_equivalence(&CurveData::new(curve, *bounds)?)
}
