use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::lattice::kdet;
use super::module::{module_from_ideals, RModule};
use crate::config::Bounds;
use crate::error::{Error, Result};
use crate::ntheory;
use crate::orders::{class_group, Form, KElem, Lattice, QuadIdeal, QuadOrder};

/// Complete isomorphism invariant of a torsion-free module: the conductors
/// f_1, …, f_n of the chain R_{f_1} ⊆ … ⊆ R_{f_n} (so f_n | … | f_1) and the
/// Steinitz class in Pic(R_{f_n}) as a reduced form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleNF {
    pub conductors: Vec<u64>,
    pub steinitz: Form,
}

impl Serialize for ModuleNF {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ModuleNF", 2)?;
        st.serialize_field("conductors", &self.conductors)?;
        st.serialize_field("steinitz", &[self.steinitz.a, self.steinitz.b, self.steinitz.c])?;
        st.end()
    }
}

impl ModuleNF {
    pub fn rank(&self) -> usize {
        self.conductors.len()
    }

    /// The canonical module R_{f_1} ⊕ … ⊕ R_{f_{n−1}} ⊕ J with [J] the Steinitz class.
    pub fn to_module(&self, base: &QuadOrder) -> Result<RModule> {
        let n = self.conductors.len();
        let mut ideals = Vec::with_capacity(n);
        for (i, &g) in self.conductors.iter().enumerate() {
            let owner = base.with_conductor(g);
            if i + 1 == n {
                ideals.push(QuadIdeal::new(owner, self.steinitz)?);
            } else {
                ideals.push(QuadIdeal::principal(owner));
            }
        }
        module_from_ideals(base, &ideals)
    }
}

/// Conductor chain from the indices [R_g·L : L] over the orders R_g ⊇ R.
fn conductor_chain(m: &RModule) -> Vec<u64> {
    let base = m.base();
    let f = base.conductor();
    let n = m.rank();
    let l = m.lattice();
    let mut chain = vec![1u64; n];
    for (ell, v) in ntheory::factor(f) {
        let core = f / ell.pow(v);
        // s[t] = log_ℓ [R_{core·ℓ^t} L : L] = Σ_i max(0, a_i − t)
        let s: Vec<u32> = (0..=v)
            .map(|t| {
                let g = core * ell.pow(t);
                let gen = KElem::new(base.fundamental_disc(), [0, g as i128], 1);
                let bigger = l.add(&l.scale(&gen).expect("nonzero scalar"));
                ntheory::valuation(l.index_in(&bigger), ell as u128)
            })
            .collect();
        // c[m] = #{i : a_i ≥ m}
        let c: Vec<u32> = (1..=v as usize).map(|m| s[m - 1] - s[m]).collect();
        for (i, slot) in chain.iter_mut().enumerate() {
            let a = c.iter().filter(|&&cm| cm as usize > i).count() as u32;
            *slot *= ell.pow(a);
        }
    }
    chain
}

/// Class of the lattice spanned by all n×n determinants of basis vectors.
fn steinitz_lattice(m: &RModule) -> Result<Lattice> {
    let dk = m.base().fundamental_disc();
    let n = m.rank();
    let vecs = m.lattice().vectors();
    let mut dets = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let rows: Vec<Vec<KElem>> = idx.iter().map(|&i| vecs[i].clone()).collect();
        let d = kdet(dk, &rows);
        if !d.is_zero() {
            dets.push(d);
        }
        // next n-subset of 0..2n in lexicographic order
        let mut k = n;
        loop {
            if k == 0 {
                return Lattice::from_elems(dk, &dets);
            }
            k -= 1;
            if idx[k] < 2 * n - (n - k) {
                idx[k] += 1;
                for j in k + 1..n {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn normal_form(m: &RModule) -> Result<ModuleNF> {
    let n = m.rank();
    if n == 0 {
        return Ok(ModuleNF { conductors: Vec::new(), steinitz: Form::principal(m.base().disc()) });
    }
    let conductors = conductor_chain(m);
    let det = QuadIdeal::from_lattice(&steinitz_lattice(m)?)?;
    if det.owner.conductor() != conductors[n - 1] {
        return Err(Error::CrossCheckMismatch(format!(
            "determinant ideal has conductor {}, chain ends in {}",
            det.owner.conductor(),
            conductors[n - 1]
        )));
    }
    Ok(ModuleNF { conductors, steinitz: det.form.reduce() })
}

pub fn is_isomorphic(m1: &RModule, m2: &RModule) -> Result<bool> {
    if m1.base() != m2.base() {
        return Err(Error::BaseMismatch);
    }
    Ok(m1.rank() == m2.rank() && normal_form(m1)? == normal_form(m2)?)
}

/// Hom_R(M, R) viewed as a left module through complex conjugation. A module
/// given only by a lattice is first replaced by the canonical module of its
/// normal form, so the result is the dual up to isomorphism.
pub fn dual_module(m: &RModule) -> Result<RModule> {
    let base = *m.base();
    let Some(ids) = m.summands() else {
        return dual_module(&normal_form(m)?.to_module(&base)?);
    };
    let lattice = m.lattice().pairing_dual(base.conductor())?.conj();
    let r = base.lattice();
    let mut summands = Vec::with_capacity(ids.len());
    for i in ids {
        let colon = r.colon(&i.zbasis())?.conj();
        summands.push(QuadIdeal::from_lattice(&colon)?);
    }
    Ok(RModule::from_parts(base, lattice, Some(summands)))
}

/// Every isomorphism class of rank-n modules over R, in increasing order.
pub fn enumerate_modules(base: &QuadOrder, n: usize, bounds: &Bounds) -> Result<Vec<ModuleNF>> {
    let divs = ntheory::divisors(base.conductor());
    let mut chains: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for c in &chains {
            for &d in &divs {
                if c.last().is_none_or(|&prev| prev % d == 0) {
                    let mut e = c.clone();
                    e.push(d);
                    next.push(e);
                }
            }
        }
        chains = next;
    }
    let mut out = Vec::new();
    for chain in chains {
        let last = chain.last().copied().unwrap_or(base.conductor());
        let cg = class_group(&base.with_conductor(last), bounds)?;
        if n == 0 {
            out.push(ModuleNF { conductors: chain.clone(), steinitz: Form::principal(base.disc()) });
            continue;
        }
        for f in cg.reps() {
            out.push(ModuleNF { conductors: chain.clone(), steinitz: *f });
        }
        if out.len() as u64 > bounds.group_elements {
            return Err(Error::bound("module classes", out.len() as u64, bounds.group_elements));
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(d: i64, a: i64, b: i64) -> QuadIdeal {
        let o = QuadOrder::from_disc(d).unwrap();
        QuadIdeal::new(o, Form::from_ab(a, b, d).unwrap()).unwrap()
    }

    #[test]
    fn free_and_d15() {
        let r = QuadOrder::from_disc(-15).unwrap();
        let nf = normal_form(&RModule::free(r, 3)).unwrap();
        assert_eq!(nf.conductors, vec![1, 1, 1]);
        assert_eq!(nf.steinitz, Form::principal(-15));
        let i = ideal(-15, 2, 1);
        let ii = module_from_ideals(&r, &[i, i]).unwrap();
        assert_eq!(normal_form(&ii).unwrap(), normal_form(&RModule::free(r, 2)).unwrap());
        let ri = module_from_ideals(&r, &[QuadIdeal::principal(r), i]).unwrap();
        let ir = module_from_ideals(&r, &[i, QuadIdeal::principal(r)]).unwrap();
        assert_eq!(normal_form(&ri).unwrap(), normal_form(&ir).unwrap());
        assert!(!is_isomorphic(&ri, &RModule::free(r, 2)).unwrap());
    }

    #[test]
    fn mixed_owners() {
        let r = QuadOrder::from_disc(-16).unwrap();
        let ok = QuadIdeal::principal(r.maximal());
        let m = module_from_ideals(&r, &[QuadIdeal::principal(r), ok]).unwrap();
        assert_eq!(normal_form(&m).unwrap().conductors, vec![2, 1]);
        let m = module_from_ideals(&r, &[ok]).unwrap();
        assert_eq!(normal_form(&m).unwrap().conductors, vec![1]);
    }

    #[test]
    fn enumeration_counts() {
        let b = Bounds::default();
        assert_eq!(enumerate_modules(&QuadOrder::from_disc(-11).unwrap(), 1, &b).unwrap().len(), 1);
        assert_eq!(enumerate_modules(&QuadOrder::from_disc(-16).unwrap(), 1, &b).unwrap().len(), 2);
        assert_eq!(enumerate_modules(&QuadOrder::from_disc(-15).unwrap(), 2, &b).unwrap().len(), 2);
    }

    #[test]
    fn duals() {
        let r = QuadOrder::from_disc(-23).unwrap();
        let i = ideal(-23, 2, 1);
        let m = module_from_ideals(&r, &[QuadIdeal::principal(r), i]).unwrap();
        let d = dual_module(&m).unwrap();
        assert!(is_isomorphic(&m, &dual_module(&d).unwrap()).unwrap());
        let summandwise = module_from_ideals(&r, d.summands().unwrap()).unwrap();
        assert!(is_isomorphic(&summandwise, &d).unwrap());
    }
}
