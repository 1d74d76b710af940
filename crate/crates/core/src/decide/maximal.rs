use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{group_structure, torsion_basis, EllipticCurve, FiniteField, Fq};
use crate::config::Bounds;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScanOptions {
    /// Look for N = (p − 1)² instead of N = (p + 1)².
    pub minimal: bool,
    /// Largest number of factors in the product checks.
    pub max_g: usize,
    /// Number of random short-Weierstrass curves to test; `None` scans exhaustively.
    pub sample: Option<usize>,
    pub seed: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { minimal: false, max_g: 3, sample: None, seed: 0 }
    }
}

/// Frobenius on E[ℓ] compared with the expected scalar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsionCheck {
    pub ell: u64,
    pub degree: u32,
    pub scalar: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalCurve {
    pub coefficients: [u32; 5],
    pub j: u32,
    pub t: i64,
    pub structure: [u64; 2],
    pub torsion: Vec<TorsionCheck>,
}

impl ExtremalCurve {
    fn passes(&self, p: u64, minimal: bool) -> bool {
        let (t, d) = if minimal { (2 * p as i64, p - 1) } else { (-2 * p as i64, p + 1) };
        self.t == t && self.structure == [d, d] && self.torsion.iter().all(|c| c.scalar)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassSummary {
    pub j: u32,
    pub models: usize,
    pub representative: [u32; 5],
}

/// A product of extremal curves, one per listed class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductCheck {
    pub classes: Vec<u32>,
    pub points: u128,
    pub invariants: Vec<u64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub p: u64,
    pub q: u64,
    pub minimal: bool,
    pub target: u64,
    pub scanned: usize,
    pub curves: Vec<ExtremalCurve>,
    pub classes: Vec<ClassSummary>,
    pub products: Vec<ProductCheck>,
    /// Every extremal curve and every product passed all checks.
    pub passed: bool,
}

fn candidates(f: &FiniteField, opts: &ScanOptions) -> Vec<[Fq; 5]> {
    let elems: Vec<Fq> = f.elements().collect();
    let zero = f.from_int(0);
    if let Some(n) = opts.sample {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        return (0..n)
            .map(|_| {
                let a4 = elems[rng.gen_range(0..elems.len())];
                let a6 = elems[rng.gen_range(0..elems.len())];
                [zero, zero, zero, a4, a6]
            })
            .collect();
    }
    if f.characteristic() >= 5 {
        return elems.iter().flat_map(|&a4| elems.iter().map(move |&a6| [zero, zero, zero, a4, a6])).collect();
    }
    let mut out = Vec::new();
    let k = elems.len();
    for code in 0..k.pow(5) {
        let mut c = code;
        let mut a = [zero; 5];
        for slot in a.iter_mut() {
            *slot = elems[c % k];
            c /= k;
        }
        out.push(a);
    }
    out
}

/// Scans curves over F_{p²} for those with (p + 1)² points (or (p − 1)² when
/// `minimal`), checks the trace, group structure and scalar Frobenius action of
/// each, groups them by j-invariant and checks products of up to `max_g` of them.
pub fn maximal_scan(p: u64, opts: &ScanOptions, bounds: &Bounds) -> Result<ScanReport> {
    let f = FiniteField::new(p, 2, bounds)?;
    let q = p * p;
    if opts.sample.is_none() && p < 5 && q.pow(5) > bounds.group_elements {
        return Err(Error::bound("curves to scan", q.pow(5), bounds.group_elements));
    }
    let d = if opts.minimal { p - 1 } else { p + 1 };
    let target = d * d;
    let sign: i64 = if opts.minimal { 1 } else { -1 };
    let mut scanned = 0;
    let mut curves = Vec::new();
    let mut by_j: BTreeMap<u32, (usize, EllipticCurve)> = BTreeMap::new();
    for a in candidates(&f, opts) {
        let Ok(c) = EllipticCurve::new(f.clone(), a) else { continue };
        scanned += 1;
        if c.count_points() != target {
            continue;
        }
        let t = c.frobenius_trace(bounds)?;
        let gs = group_structure(&c, 1, bounds)?;
        let mut torsion = Vec::new();
        for ell in [2, 3, 5].into_iter().filter(|&l| l != p) {
            let lat = torsion_basis(&c, ell, 1, bounds)?;
            let s = (sign * p as i64).rem_euclid(ell as i64) as u64;
            let scalar = lat.frob == [[s, 0], [0, s]];
            torsion.push(TorsionCheck { ell, degree: lat.degree, scalar });
        }
        let j = c.j_invariant().encoding();
        by_j.entry(j).or_insert((0, c.clone())).0 += 1;
        curves.push(ExtremalCurve {
            coefficients: a.map(Fq::encoding),
            j,
            t,
            structure: [gs.d1, gs.d2],
            torsion,
        });
    }
    let classes: Vec<ClassSummary> = by_j
        .iter()
        .map(|(&j, (models, c))| ClassSummary { j, models: *models, representative: c.coefficients().map(Fq::encoding) })
        .collect();
    let reps: Vec<(u32, GroupInvariants)> =
        by_j.iter().map(|(&j, (_, c))| Ok((j, invariants(c, bounds)?))).collect::<Result<_>>()?;
    let mut products = Vec::new();
    for g in 1..=opts.max_g {
        for combo in multisets(reps.len(), g) {
            let mut inv: Vec<u64> = combo.iter().flat_map(|&i| reps[i].1.clone()).collect();
            inv.sort_unstable();
            let points: u128 = inv.iter().map(|&x| x as u128).product();
            let passed = points == (d as u128).pow(2 * g as u32) && inv.len() == 2 * g && inv.iter().all(|&x| x == d);
            products.push(ProductCheck { classes: combo.iter().map(|&i| reps[i].0).collect(), points, invariants: inv, passed });
        }
    }
    let passed = curves.iter().all(|c| c.passes(p, opts.minimal)) && products.iter().all(|x| x.passed);
    Ok(ScanReport { p, q, minimal: opts.minimal, target, scanned, curves, classes, products, passed })
}

type GroupInvariants = Vec<u64>;

fn invariants(c: &EllipticCurve, bounds: &Bounds) -> Result<GroupInvariants> {
    let gs = group_structure(c, 1, bounds)?;
    Ok(vec![gs.d1, gs.d2])
}

/// Non-decreasing index sequences of length g drawn from 0..n.
fn multisets(n: usize, g: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..g {
        out = out
            .into_iter()
            .flat_map(|v| {
                let start = v.last().copied().unwrap_or(0);
                (start..n).map(move |i| [v.clone(), vec![i]].concat())
            })
            .collect();
    }
    out
}
