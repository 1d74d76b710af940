//! Independent isomorphism search and random re-decompositions.
//!
//! The search works directly with Hom_R(I_1 ⊕ I_2, J_1 ⊕ J_2), whose entries lie
//! in the colon lattices (J_j : I_i), and looks for a matrix whose determinant
//! has the norm forced by the covolumes. It never consults the normal form.

use rand::seq::SliceRandom;
use rand::Rng;

use super::lattice::{kdet, ModLattice};
use super::module::{module_from_ideals, module_from_lattice, RModule};
use crate::config::Bounds;
use crate::error::{Error, Result};
use crate::orders::{class_group, KElem, Lattice, QuadIdeal};

fn ratio(n: (i128, i128)) -> f64 {
    n.0 as f64 / n.1 as f64
}

fn norm_f(x: &KElem) -> f64 {
    ratio(x.norm())
}

/// Gauss-reduced basis with respect to the norm form.
fn reduced_basis(l: &Lattice) -> [KElem; 2] {
    let [mut u, mut v] = l.basis();
    loop {
        if norm_f(&u) < norm_f(&v) {
            std::mem::swap(&mut u, &mut v);
        }
        // now N(u) ≥ N(v); reduce u against v
        let inner = (norm_f(&u.add(&v)) - norm_f(&u) - norm_f(&v)) / 2.0;
        let mu = (inner / norm_f(&v)).round() as i128;
        let w = u.sub(&v.mul(&KElem::integer(v.dk, mu)));
        if mu == 0 || norm_f(&w) >= norm_f(&u) {
            return [v, u];
        }
        u = w;
    }
}

/// Elements x·b1 + y·b2 with |x|, |y| ≤ bound on a reduced basis, zero included.
fn short_elements(l: &Lattice, bound: i128) -> Vec<KElem> {
    let [b1, b2] = reduced_basis(l);
    let mut out = Vec::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            let k = |n| KElem::integer(l.dk(), n);
            out.push(b1.mul(&k(x)).add(&b2.mul(&k(y))));
        }
    }
    out.sort_by(|a, b| norm_f(a).total_cmp(&norm_f(b)));
    out
}

/// Whether the lattice has an element of norm exactly `target` (a reduced fraction).
fn represents(l: &Lattice, target: (i128, i128)) -> bool {
    let [b1, b2] = reduced_basis(l);
    let (a, c) = (norm_f(&b1), norm_f(&b2));
    let b = norm_f(&b1.add(&b2)) - a - c;
    let t = ratio(target);
    let disc = 4.0 * a * c - b * b;
    let ymax = (4.0 * a * t / disc).sqrt().floor() as i128 + 1;
    let k = |n| KElem::integer(l.dk(), n);
    for y in -ymax..=ymax {
        let yf = y as f64;
        // a x² + b y x + c y² − t = 0
        let d = b * b * yf * yf - 4.0 * a * (c * yf * yf - t);
        if d < -1e-9 {
            continue;
        }
        let s = d.max(0.0).sqrt();
        let lo = ((-b * yf - s) / (2.0 * a)).floor() as i128 - 1;
        let hi = ((-b * yf + s) / (2.0 * a)).ceil() as i128 + 1;
        for x in lo..=hi {
            let z = b1.mul(&k(x)).add(&b2.mul(&k(y)));
            if !z.is_zero() && z.norm() == target {
                return true;
            }
        }
    }
    false
}

fn frac_div(a: (i128, i128), b: (i128, i128)) -> (i128, i128) {
    let (n, d) = (a.0 * b.1, a.1 * b.0);
    let g = crate::ntheory::gcd(n, d);
    (n / g, d / g)
}

fn frac_mul(a: (i128, i128), b: (i128, i128)) -> (i128, i128) {
    frac_div(a, (b.1, b.0))
}

fn scaled(l: &Lattice, k: &KElem) -> Option<Lattice> {
    if k.is_zero() {
        None
    } else {
        l.scale(k).ok()
    }
}

fn sum(parts: &[Option<Lattice>]) -> Option<Lattice> {
    parts.iter().flatten().copied().reduce(|a, b| a.add(&b))
}

/// Searches for an isomorphism between two modules given as ideal direct sums
/// of rank at most 2. Rank 1 is decided exactly. In rank 2 a positive answer is
/// a proof; a negative answer means no isomorphism whose first column has
/// coefficients at most `bound` on reduced bases of the colon lattices.
pub fn brute_isomorphic(m1: &RModule, m2: &RModule, bound: i128) -> Result<bool> {
    if m1.base() != m2.base() {
        return Err(Error::BaseMismatch);
    }
    let (Some(is), Some(js)) = (m1.summands(), m2.summands()) else {
        return Err(Error::InvalidInput("isomorphism search needs ideal summands".into()));
    };
    if is.len() != js.len() {
        return Ok(false);
    }
    let il: Vec<Lattice> = is.iter().map(|i| i.zbasis()).collect();
    let jl: Vec<Lattice> = js.iter().map(|j| j.zbasis()).collect();
    let covol = |ls: &[Lattice]| ls.iter().fold((1, 1), |acc, l| frac_mul(acc, l.covolume()));
    let rho = frac_div(covol(&jl), covol(&il));
    match il.len() {
        0 => Ok(true),
        1 => Ok(represents(&jl[0].colon(&il[0])?, rho)),
        2 => {
            let la = jl[0].colon(&il[0])?;
            let lb = jl[1].colon(&il[0])?;
            let lc = jl[0].colon(&il[1])?;
            let ld = jl[1].colon(&il[1])?;
            let shorts_a = short_elements(&la, bound);
            let shorts_c = short_elements(&lc, bound);
            for a in &shorts_a {
                for c in &shorts_c {
                    // first column must map I_1 ⊕ I_2 onto J_1
                    if sum(&[scaled(&il[0], a), scaled(&il[1], c)]) != Some(jl[0]) {
                        continue;
                    }
                    // determinants a·d − c·b fill a·(J_2 : I_2) + c·(J_2 : I_1)
                    let Some(dets) = sum(&[scaled(&ld, a), scaled(&lb, c)]) else { continue };
                    if represents(&dets, rho) {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        }
        n => Err(Error::UnsupportedCase(format!("isomorphism search in rank {n}"))),
    }
}

/// (a + b·ω₀)/c with ω₀ = (δ + √d_K)/2 the short generator, δ ∈ {0, 1}.
fn random_kelem<R: Rng>(dk: i64, rng: &mut R, size: i128) -> KElem {
    let (a, b) = (rng.gen_range(-size..=size), rng.gen_range(-size..=size));
    let shift = (dk as i128 - (dk as i128).rem_euclid(2)) / 2;
    KElem::new(dk, [a - b * shift, b], rng.gen_range(1..=2))
}

/// Random decomposition-level change that preserves the isomorphism class:
/// permutes the summands and replaces (I_i, I_j) with owners R_i ⊆ R_j by
/// (I_i·X, I_j·(X R_j)⁻¹) for a random class X of R_i.
pub fn random_class_move<R: Rng>(m: &RModule, rng: &mut R, bounds: &Bounds) -> Result<RModule> {
    let Some(ids) = m.summands() else {
        return Err(Error::InvalidInput("class moves need ideal summands".into()));
    };
    let mut ids = ids.to_vec();
    ids.shuffle(rng);
    if ids.len() >= 2 {
        let (mut i, mut j) = (0, 1);
        if !ids[i].owner.is_contained_in(&ids[j].owner) {
            std::mem::swap(&mut i, &mut j);
        }
        let cg = class_group(&ids[i].owner, bounds)?;
        let x = QuadIdeal::new(ids[i].owner, cg.rep(rng.gen_range(0..cg.h() as usize)))?;
        let x_up = QuadIdeal::from_lattice(&x.zbasis().mul(&ids[j].owner.lattice()))?;
        ids[i] = ids[i].compose(&x)?;
        ids[j] = ids[j].compose(&x_up.invert())?;
    }
    module_from_ideals(m.base(), &ids)
}

/// A random isomorphic copy of `m` as a bare lattice: class moves, then a random
/// K-linear automorphism of K^n, then a random scalar.
pub fn random_redecomposition<R: Rng>(m: &RModule, rng: &mut R, bounds: &Bounds) -> Result<RModule> {
    let moved = if m.summands().is_some() { random_class_move(m, rng, bounds)? } else { m.clone() };
    let dk = m.base().fundamental_disc();
    let n = m.rank();
    let a = loop {
        let a: Vec<Vec<KElem>> = (0..n).map(|_| (0..n).map(|_| random_kelem(dk, rng, 2)).collect()).collect();
        if !kdet(dk, &a).is_zero() {
            break a;
        }
    };
    let s = loop {
        let s = random_kelem(dk, rng, 2);
        if !s.is_zero() {
            break s;
        }
    };
    let lattice: ModLattice = moved.lattice().transform(&a)?.scale(&s)?;
    module_from_lattice(m.base(), lattice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::{enumerate_modules, normal_form};
    use crate::orders::{Form, QuadOrder};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rank_one_is_class_equality() {
        let r = QuadOrder::from_disc(-15).unwrap();
        let i = QuadIdeal::new(r, Form::new(2, 1, 2)).unwrap();
        let one = module_from_ideals(&r, &[QuadIdeal::principal(r)]).unwrap();
        let mi = module_from_ideals(&r, &[i]).unwrap();
        assert!(brute_isomorphic(&one, &one, 2).unwrap());
        assert!(brute_isomorphic(&mi, &mi, 2).unwrap());
        assert!(!brute_isomorphic(&one, &mi, 2).unwrap());
        let i2 = module_from_ideals(&r, &[QuadIdeal::new(r, Form::new(2, -1, 2)).unwrap()]).unwrap();
        assert!(brute_isomorphic(&mi, &i2, 2).unwrap());
    }

    #[test]
    fn rank_two_agrees_with_class_moves() {
        let b = Bounds::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in [-15i64, -16, -23, -36] {
            let r = QuadOrder::from_disc(d).unwrap();
            let nfs = enumerate_modules(&r, 2, &b).unwrap();
            let mods: Vec<RModule> = nfs.iter().map(|nf| nf.to_module(&r).unwrap()).collect();
            for (x, mx) in mods.iter().enumerate() {
                let moved = random_class_move(mx, &mut rng, &b).unwrap();
                for (y, my) in mods.iter().enumerate() {
                    assert_eq!(brute_isomorphic(&moved, my, 2).unwrap(), x == y, "D={d} {:?} {:?}", nfs[x], nfs[y]);
                }
            }
        }
    }

    #[test]
    fn redecomposition_keeps_normal_form() {
        let b = Bounds::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = QuadOrder::from_disc(-23).unwrap();
        for nf in enumerate_modules(&r, 2, &b).unwrap() {
            let m = nf.to_module(&r).unwrap();
            for _ in 0..5 {
                assert_eq!(normal_form(&random_redecomposition(&m, &mut rng, &b).unwrap()).unwrap(), nf);
            }
        }
    }
}
