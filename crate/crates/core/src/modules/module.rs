use super::lattice::ModLattice;
use crate::error::{Error, Result};
use crate::intmat;
use crate::orders::{KElem, QuadIdeal, QuadOrder};

/// Finitely generated torsion-free module over an imaginary quadratic order R,
/// realised as an R-stable lattice in K^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RModule {
    base: QuadOrder,
    lattice: ModLattice,
    summands: Option<Vec<QuadIdeal>>,
    presentation: Option<Vec<Vec<KElem>>>,
}

impl RModule {
    pub(crate) fn from_parts(base: QuadOrder, lattice: ModLattice, summands: Option<Vec<QuadIdeal>>) -> Self {
        RModule { base, lattice, summands, presentation: None }
    }

    pub fn base(&self) -> &QuadOrder {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn lattice(&self) -> &ModLattice {
        &self.lattice
    }

    /// Ideal summands, when the module was built as a direct sum.
    pub fn summands(&self) -> Option<&[QuadIdeal]> {
        self.summands.as_deref()
    }

    pub fn presentation(&self) -> Option<&[Vec<KElem>]> {
        self.presentation.as_deref()
    }

    pub fn free(base: QuadOrder, n: usize) -> Self {
        module_from_ideals(&base, &vec![QuadIdeal::principal(base); n]).expect("R contains R")
    }

    /// Integer matrix of the generator f·ω of R on the lattice basis.
    pub fn omega_matrix(&self) -> intmat::IMat {
        self.lattice.action_matrix(&self.base.generator()).expect("lattice is an R-module")
    }

    /// Direct sum, keeping summand data when both sides have it.
    pub fn direct_sum(&self, o: &RModule) -> Result<RModule> {
        if self.base != o.base {
            return Err(Error::BaseMismatch);
        }
        let n = self.rank() + o.rank();
        let zero = KElem::integer(self.base.fundamental_disc(), 0);
        let mut gens = Vec::new();
        for v in self.lattice.vectors() {
            let mut w = v.clone();
            w.resize(n, zero);
            gens.push(w);
        }
        for v in o.lattice.vectors() {
            let mut w = vec![zero; self.rank()];
            w.extend(v);
            gens.push(w);
        }
        let lattice = ModLattice::new(self.base.fundamental_disc(), n, &gens)?;
        let summands = match (&self.summands, &o.summands) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        Ok(RModule { base: self.base, lattice, summands, presentation: None })
    }
}

/// I_1 ⊕ … ⊕ I_n for invertible ideals of orders containing R.
pub fn module_from_ideals(base: &QuadOrder, ideals: &[QuadIdeal]) -> Result<RModule> {
    for i in ideals {
        if !base.is_contained_in(&i.owner) {
            return Err(Error::OwnerNotAbove { owner: i.owner.conductor(), base: base.conductor() });
        }
    }
    let parts: Vec<_> = ideals.iter().map(|i| i.zbasis()).collect();
    let lattice = ModLattice::diagonal(base.fundamental_disc(), &parts);
    Ok(RModule { base: *base, lattice, summands: Some(ideals.to_vec()), presentation: None })
}

/// Module given by an R-stable lattice in K^n.
pub fn module_from_lattice(base: &QuadOrder, lattice: ModLattice) -> Result<RModule> {
    if lattice.dk() != base.fundamental_disc() {
        return Err(Error::BaseMismatch);
    }
    if lattice.action_matrix(&base.generator()).is_none() {
        return Err(Error::InvalidInput("lattice is not stable under the order".into()));
    }
    Ok(RModule { base: *base, lattice, summands: None, presentation: None })
}

/// Coordinates of an element of R in its Z-basis {1, f·ω}.
fn r_coords(base: &QuadOrder, z: &KElem) -> [i128; 2] {
    [z.x[0], z.x[1] / base.conductor() as i128]
}

/// Cokernel of R^m → R^n, x ↦ x·X (row vectors), which must be torsion-free.
pub fn module_from_presentation(base: &QuadOrder, n: usize, x: &[Vec<KElem>]) -> Result<RModule> {
    let dk = base.fundamental_disc();
    for row in x {
        if row.len() != n {
            return Err(Error::InvalidInput("presentation rows must have n entries".into()));
        }
        if row.iter().any(|e| e.dk != dk || !e.is_integral_in(base)) {
            return Err(Error::InvalidInput("presentation entries must lie in the base order".into()));
        }
    }
    // relations as a Z-lattice in Z^{2n}
    let w = base.generator();
    let mut rels: intmat::IMat = Vec::new();
    for row in x {
        for mult in [KElem::integer(dk, 1), w] {
            rels.push(row.iter().flat_map(|e| r_coords(base, &e.mul(&mult))).collect());
        }
    }
    let divisors = intmat::elementary_divisors(&rels, 2 * n);
    if let Some(&exp) = divisors.iter().max() {
        if exp > 1 {
            return Err(Error::HasTorsion { exponent: exp as u64 });
        }
    }
    // K-linear quotient K^n / rowspan(X) via reduced row echelon form
    let rref = k_rref(x, n);
    let pivots: Vec<usize> = rref.iter().map(|r| r.iter().position(|e| !e.is_zero()).unwrap()).collect();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let project = |v: &[KElem]| -> Vec<KElem> {
        free.iter()
            .map(|&q| {
                pivots.iter().zip(&rref).fold(v[q], |acc, (&p, row)| acc.sub(&v[p].mul(&row[q])))
            })
            .collect()
    };
    let mut gens = Vec::new();
    for i in 0..n {
        for mult in [KElem::integer(dk, 1), w] {
            let mut e = vec![KElem::integer(dk, 0); n];
            e[i] = mult;
            gens.push(project(&e));
        }
    }
    let lattice = ModLattice::new(dk, free.len(), &gens)?;
    Ok(RModule { base: *base, lattice, summands: None, presentation: Some(x.to_vec()) })
}

/// Reduced row echelon form over K, zero rows dropped.
fn k_rref(x: &[Vec<KElem>], n: usize) -> Vec<Vec<KElem>> {
    let mut a: Vec<Vec<KElem>> = x.to_vec();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].inv().unwrap();
        a[r] = a[r].iter().map(|e| e.mul(&inv)).collect();
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c];
                let pr = a[r].clone();
                a[i] = a[i].iter().zip(&pr).map(|(e, p)| e.sub(&f.mul(p))).collect();
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::Form;

    #[test]
    fn owners_must_contain_base() {
        let r = QuadOrder::from_disc(-4).unwrap();
        let sub = QuadIdeal::principal(QuadOrder::from_disc(-16).unwrap());
        assert_eq!(module_from_ideals(&r, &[sub]), Err(Error::OwnerNotAbove { owner: 2, base: 1 }));
        let r = QuadOrder::from_disc(-15).unwrap();
        let i = QuadIdeal::new(r, Form::new(2, 1, 2)).unwrap();
        assert_eq!(module_from_ideals(&r, &[QuadIdeal::principal(r), i]).unwrap().rank(), 2);
    }

    #[test]
    fn presentations() {
        let r = QuadOrder::from_disc(-16).unwrap();
        let free = module_from_presentation(&r, 2, &[]).unwrap();
        assert_eq!(free.rank(), 2);
        let ell = KElem::integer(-4, 3);
        assert_eq!(module_from_presentation(&r, 1, &[vec![ell]]), Err(Error::HasTorsion { exponent: 3 }));
        let two_i = KElem::from_sqrt(-4, 0, 1, 1);
        let m2 = KElem::integer(-4, -2);
        assert_eq!(
            module_from_presentation(&r, 2, &[vec![two_i, m2]]),
            Err(Error::HasTorsion { exponent: 2 })
        );
        let two = KElem::integer(-4, 2);
        let full = module_from_presentation(&r, 2, &[vec![two_i, m2], vec![two, two_i]]).unwrap();
        assert_eq!(full.rank(), 1);
        assert_eq!(super::super::normal_form(&full).unwrap().conductors, vec![1]);
    }
}
