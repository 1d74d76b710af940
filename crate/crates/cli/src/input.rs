use std::sync::Arc;

use isopower::arith::{EllipticCurve, FiniteField, Fq};
use isopower::functor::CurveData;
use isopower::kernels::SubgroupData;
use isopower::Bounds;
use serde::Deserialize;
use serde_json::Value;

use crate::cli::{CurveArgs, OptionalCurve};
use crate::error::CliError;

/// "3", "-1", "1,2" or "[1,2]": polynomial coefficients, lowest degree first.
pub fn parse_element(f: &FiniteField, text: &str) -> Result<Fq, CliError> {
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    let coeffs = inner
        .split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Usage(format!("cannot parse field element {text:?}")))?;
    Ok(f.from_coeffs(&coeffs)?)
}

fn element_from_json(f: &FiniteField, v: &Value) -> Result<Fq, CliError> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::Array(items) => items.iter().map(Value::to_string).collect::<Vec<_>>().join(","),
        Value::String(s) => s.clone(),
        _ => return Err(CliError::Usage(format!("cannot parse field element {v}"))),
    };
    parse_element(f, &text)
}

pub fn curve(p: u64, m: u32, coefficients: &[String], bounds: &Bounds) -> Result<Arc<CurveData>, CliError> {
    let f = FiniteField::new(p, m, bounds)?;
    let a: Vec<Fq> = coefficients.iter().map(|c| parse_element(&f, c)).collect::<Result<_, _>>()?;
    let a: [Fq; 5] = a.try_into().map_err(|_| CliError::Usage("expected five coefficients a1 a2 a3 a4 a6".into()))?;
    Ok(Arc::new(CurveData::new(EllipticCurve::new(f, a)?, *bounds)?))
}

pub fn curve_args(c: &CurveArgs, bounds: &Bounds) -> Result<Arc<CurveData>, CliError> {
    curve(c.p, c.m, &c.coefficients, bounds)
}

#[derive(Debug, Deserialize)]
pub struct CurveSpec {
    pub p: u64,
    #[serde(default = "one")]
    pub m: u32,
    pub a: Vec<Value>,
}

fn one() -> u32 {
    1
}

/// Subgroup generators with an optional curve, as read by `kernel-test`.
#[derive(Debug, Deserialize)]
pub struct KernelInput {
    #[serde(flatten)]
    pub subgroup: SubgroupData,
    pub curve: Option<CurveSpec>,
}

pub fn kernel_input(text: &str, args: &OptionalCurve, bounds: &Bounds) -> Result<(Arc<CurveData>, SubgroupData), CliError> {
    let input: KernelInput = serde_json::from_str(text)?;
    let data = match (args.p, args.m, &input.curve) {
        (Some(p), Some(m), _) if args.coefficients.len() == 5 => curve(p, m, &args.coefficients, bounds)?,
        (None, None, Some(spec)) if args.coefficients.is_empty() => {
            let f = FiniteField::new(spec.p, spec.m, bounds)?;
            let a: Vec<Fq> = spec.a.iter().map(|v| element_from_json(&f, v)).collect::<Result<_, _>>()?;
            let a: [Fq; 5] =
                a.try_into().map_err(|_| CliError::Usage("curve needs five coefficients a1 a2 a3 a4 a6".into()))?;
            Arc::new(CurveData::new(EllipticCurve::new(f, a)?, *bounds)?)
        }
        (None, None, None) if args.coefficients.is_empty() => {
            return Err(CliError::Usage("no curve: pass p m a1 a2 a3 a4 a6 or a \"curve\" field".into()))
        }
        _ => return Err(CliError::Usage("expected p m a1 a2 a3 a4 a6".into())),
    };
    Ok((data, input.subgroup))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_syntax() {
        let b = Bounds::default();
        let f = FiniteField::new(3, 2, &b).unwrap();
        let x = parse_element(&f, "[1,2]").unwrap();
        assert_eq!(f.coeffs(x), vec![1, 2]);
        assert_eq!(parse_element(&f, "1,2").unwrap(), x);
        assert_eq!(parse_element(&f, "-1").unwrap(), f.from_int(2));
        assert!(parse_element(&f, "1,2,0").is_err());
        assert!(parse_element(&f, "x").is_err());
    }

    #[test]
    fn subgroup_schema() {
        let text = r#"{"l": 3, "e": 1, "r": 1, "generators": [[1, 0]], "curve": {"p": 5, "a": [0, 0, 0, 1, 0]}}"#;
        let args = OptionalCurve { p: None, m: None, coefficients: Vec::new() };
        let (data, s) = kernel_input(text, &args, &Bounds::default()).unwrap();
        assert_eq!((s.ell, s.e, s.r), (3, 1, 1));
        assert_eq!(data.q(), 5);
    }
}
