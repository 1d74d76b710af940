use std::collections::{BTreeSet, HashSet};

use super::commutant::Commutant;
use super::subgroup::{block_diag, check_universe, stable_subgroups, Subgroup, SubgroupData};
use crate::config::Bounds;
use crate::error::{Error, Result};
use crate::zmod::Mat;

/// Whether the subgroup generated by `g` is a module over the commutant.
pub fn is_kernel_subgroup(c: &Commutant, g: &SubgroupData) -> Result<bool> {
    if g.ell != c.ell || g.e != c.e {
        return Err(Error::InvalidInput(format!(
            "subgroup lives in E[{}^{}] but the commutant in E[{}^{}]",
            g.ell, g.e, c.ell, c.e
        )));
    }
    if g.r == 0 || g.generators.iter().any(|v| v.len() != 2 * g.r) {
        return Err(Error::InvalidInput(format!("generators must have length 2r = {}", 2 * g.r)));
    }
    let ring = c.ring();
    let s = Subgroup::span(ring, 2 * g.r, &g.generators);
    is_kernel(c, &s, g.r)
}

fn is_kernel(c: &Commutant, s: &Subgroup, r: usize) -> Result<bool> {
    let ring = c.ring();
    if !s.is_stable(&block_diag(ring, &c.frob, r)) {
        return Err(Error::NotGaloisStable);
    }
    Ok(c.basis.iter().all(|m| s.is_stable(&block_diag(ring, m, r))))
}

/// Frobenius-stable subgroups of E[ℓ^e]^r that are modules over the commutant.
pub fn kernel_subgroups(c: &Commutant, r: usize, bounds: &Bounds) -> Result<Vec<Subgroup>> {
    let ring = c.ring();
    let frob = block_diag(ring, &c.frob, r);
    let mut out = Vec::new();
    for s in stable_subgroups(ring, 2 * r, &frob, bounds)? {
        if is_kernel(c, &s, r)? {
            out.push(s);
        }
    }
    Ok(out)
}

/// Frobenius-stable subgroups of E[ℓ^e]^r that are not modules over the commutant.
pub fn non_kernel_subgroups(c: &Commutant, r: usize, bounds: &Bounds) -> Result<Vec<Subgroup>> {
    let ring = c.ring();
    let frob = block_diag(ring, &c.frob, r);
    let mut out = Vec::new();
    for s in stable_subgroups(ring, 2 * r, &frob, bounds)? {
        if !is_kernel(c, &s, r)? {
            out.push(s);
        }
    }
    Ok(out)
}

/// Every element of the image of End(E) in 2×2 matrices over Z/ℓ^e.
fn end_elements(c: &Commutant, bounds: &Bounds) -> Result<Vec<Mat>> {
    let ring = c.ring();
    let k = c.end_image.len() as u32;
    let combos = (ring.n as u128).checked_pow(k).unwrap_or(u128::MAX);
    if combos > bounds.group_elements as u128 {
        return Err(Error::bound("endomorphism combinations", combos, bounds.group_elements));
    }
    let mut seen = BTreeSet::new();
    for mut code in 0..combos as u64 {
        let mut m = ring.zeros(2, 2);
        for b in &c.end_image {
            m = ring.mat_add(&m, &ring.mat_scale(b, code % ring.n));
            code /= ring.n;
        }
        seen.insert(m);
    }
    Ok(seen.into_iter().collect())
}

/// Kernels on E[ℓ^e]^r of all s×r matrices over End(E) with s ≤ s_max, found by
/// enumerating rows and intersecting their kernels.
pub fn brute_force_kernels(c: &Commutant, r: usize, s_max: usize, bounds: &Bounds) -> Result<Vec<Subgroup>> {
    let ring = c.ring();
    check_universe(ring, 2 * r, bounds)?;
    let elems = end_elements(c, bounds)?;
    let rows = (elems.len() as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
    if rows > bounds.group_elements as u128 {
        return Err(Error::bound("matrix rows", rows, bounds.group_elements));
    }
    let mut singles: HashSet<Subgroup> = HashSet::new();
    for mut code in 0..rows as usize {
        // the 2 × 2r matrix [α_1 | … | α_r]
        let mut a = ring.zeros(2, 2 * r);
        for k in 0..r {
            let alpha = &elems[code % elems.len()];
            code /= elems.len();
            for i in 0..2 {
                a[i][2 * k] = alpha[i][0];
                a[i][2 * k + 1] = alpha[i][1];
            }
        }
        singles.insert(Subgroup::span(ring, 2 * r, &ring.kernel(&a, 2 * r).gens));
    }
    let singles: Vec<Subgroup> = singles.into_iter().collect();
    let mut all: HashSet<Subgroup> = singles.iter().cloned().collect();
    let mut layer: Vec<Subgroup> = singles.clone();
    for _ in 1..s_max.max(1) {
        let mut next = Vec::new();
        for a in &layer {
            for b in &singles {
                let x = a.intersect(b);
                if all.insert(x.clone()) {
                    next.push(x);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    let mut out: Vec<Subgroup> = all.into_iter().collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::test_curve as data;
    use crate::kernels::commutant;

    #[test]
    fn irreducible_frobenius_has_only_trivial_kernels() {
        let b = Bounds::default();
        let cd = data(5, 1, [0, 0, 0, 1, 1]);
        let c = commutant(&cd, 2, 1).unwrap();
        let brute = brute_force_kernels(&c, 1, 4, &b).unwrap();
        assert_eq!(brute.len(), 2);
        assert_eq!(brute, kernel_subgroups(&c, 1, &b).unwrap());
    }

    #[test]
    fn scalar_frobenius_exposes_a_non_kernel() {
        let b = Bounds::default();
        let cd = data(5, 1, [0, 0, 0, 1, 0]);
        let c = commutant(&cd, 2, 1).unwrap();
        // all three lines are Frobenius-stable; only the kernel of i − 1 is a kernel subgroup
        let lines: Vec<SubgroupData> =
            [[1, 0], [0, 1], [1, 1]].iter().map(|v| SubgroupData { r: 1, ell: 2, e: 1, generators: vec![v.to_vec()] }).collect();
        let verdicts: Vec<bool> = lines.iter().map(|g| is_kernel_subgroup(&c, g).unwrap()).collect();
        assert_eq!(verdicts.iter().filter(|&&v| v).count(), 1);
        let zero = SubgroupData { r: 1, ell: 2, e: 1, generators: vec![] };
        let full = SubgroupData { r: 1, ell: 2, e: 1, generators: vec![vec![1, 0], vec![0, 1]] };
        assert!(is_kernel_subgroup(&c, &zero).unwrap());
        assert!(is_kernel_subgroup(&c, &full).unwrap());
        for r in [1, 2] {
            assert_eq!(brute_force_kernels(&c, r, 4, &b).unwrap(), kernel_subgroups(&c, r, &b).unwrap());
        }
        assert_eq!(non_kernel_subgroups(&c, 1, &b).unwrap().len(), 2);
    }

    #[test]
    fn unstable_input_is_rejected() {
        let cd = data(5, 1, [0, 0, 0, 1, 1]);
        let c = commutant(&cd, 2, 1).unwrap();
        let g = SubgroupData { r: 1, ell: 2, e: 1, generators: vec![vec![1, 0]] };
        assert_eq!(is_kernel_subgroup(&c, &g).unwrap_err(), Error::NotGaloisStable);
    }

    #[test]
    fn kernels_are_closed_under_intersection_and_products() {
        let b = Bounds::default();
        let cd = data(5, 1, [0, 0, 0, 1, 0]);
        let c = commutant(&cd, 2, 1).unwrap();
        let one = kernel_subgroups(&c, 1, &b).unwrap();
        let two = kernel_subgroups(&c, 2, &b).unwrap();
        for x in &two {
            for y in &two {
                assert!(two.contains(&x.intersect(y)));
            }
        }
        let all1 = stable_subgroups(c.ring(), 2, &c.frob, &b).unwrap();
        for x in &all1 {
            for y in &all1 {
                let both = one.contains(x) && one.contains(y);
                assert_eq!(two.contains(&x.product(y)), both);
            }
        }
    }
}
