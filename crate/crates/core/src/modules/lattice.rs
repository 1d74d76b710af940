use crate::error::{Error, Result};
use crate::intmat::{self, IMat};
use crate::ntheory::gcd;
use crate::orders::{KElem, Lattice};

/// Full-rank Z-lattice of rank 2n in K^n. A vector (v_1, …, v_n) has rational
/// coordinates (v_1.x0, v_1.x1, …, v_n.x0, v_n.x1); the basis is kept in Hermite
/// normal form over a common denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModLattice {
    dk: i64,
    n: usize,
    rows: IMat,
    den: i128,
}

fn lcm(a: i128, b: i128) -> i128 {
    a / gcd(a, b) * b
}

impl ModLattice {
    pub fn new(dk: i64, n: usize, gens: &[Vec<KElem>]) -> Result<Self> {
        if n == 0 {
            return Ok(ModLattice { dk, n, rows: Vec::new(), den: 1 });
        }
        let den = gens.iter().flatten().fold(1i128, |l, e| lcm(l, e.den));
        let int_rows: IMat = gens
            .iter()
            .map(|v| {
                assert_eq!(v.len(), n);
                v.iter().flat_map(|e| [e.x[0] * (den / e.den), e.x[1] * (den / e.den)]).collect()
            })
            .collect();
        Self::from_int_rows(dk, n, &int_rows, den)
    }

    pub(crate) fn from_int_rows(dk: i64, n: usize, rows: &[Vec<i128>], den: i128) -> Result<Self> {
        let h = intmat::hnf(rows, 2 * n);
        if h.len() != 2 * n {
            return Err(Error::DegenerateLattice);
        }
        Ok(Self::normalized(dk, n, h, den))
    }

    fn normalized(dk: i64, n: usize, mut h: IMat, den: i128) -> Self {
        let g = gcd(intmat::content(&h), den);
        for r in h.iter_mut() {
            for x in r.iter_mut() {
                *x /= g;
            }
        }
        ModLattice { dk, n, rows: h, den: (den / g).abs() }
    }

    /// Direct sum of rank-1 lattices.
    pub fn diagonal(dk: i64, parts: &[Lattice]) -> Self {
        let n = parts.len();
        let mut gens = Vec::with_capacity(2 * n);
        for (i, l) in parts.iter().enumerate() {
            for b in l.basis() {
                let mut v = vec![KElem::integer(dk, 0); n];
                v[i] = b;
                gens.push(v);
            }
        }
        ModLattice::new(dk, n, &gens).expect("direct sum of full lattices is full")
    }

    pub fn dk(&self) -> i64 {
        self.dk
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn vectors(&self) -> Vec<Vec<KElem>> {
        self.rows
            .iter()
            .map(|r| (0..self.n).map(|i| KElem::new(self.dk, [r[2 * i], r[2 * i + 1]], self.den)).collect())
            .collect()
    }

    fn map_vectors(&self, f: impl Fn(&[KElem]) -> Vec<KElem>) -> Result<Self> {
        let gens: Vec<Vec<KElem>> = self.vectors().iter().map(|v| f(v)).collect();
        ModLattice::new(self.dk, self.n, &gens)
    }

    /// Multiplication by a nonzero scalar of K.
    pub fn scale(&self, k: &KElem) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::DegenerateLattice);
        }
        self.map_vectors(|v| v.iter().map(|x| x.mul(k)).collect())
    }

    /// Image under v ↦ v·A for an n×n matrix over K.
    pub fn transform(&self, a: &[Vec<KElem>]) -> Result<Self> {
        let n = self.n;
        self.map_vectors(|v| {
            (0..n)
                .map(|j| (0..n).fold(KElem::integer(self.dk, 0), |acc, i| acc.add(&v[i].mul(&a[i][j]))))
                .collect()
        })
    }

    pub fn conj(&self) -> Self {
        self.map_vectors(|v| v.iter().map(|x| x.conj()).collect()).expect("conjugation preserves rank")
    }

    pub fn add(&self, o: &ModLattice) -> Self {
        let mut gens = self.vectors();
        gens.extend(o.vectors());
        ModLattice::new(self.dk, self.n, &gens).expect("sum contains a full lattice")
    }

    /// Covolume |det| / den^{2n} as a reduced fraction.
    pub fn covolume(&self) -> (i128, i128) {
        let d: i128 = (0..2 * self.n).map(|i| self.rows[i][i]).product();
        let den = self.den.pow(2 * self.n as u32);
        let g = gcd(d, den);
        (d / g, den / g)
    }

    /// [o : self] for self ⊆ o.
    pub fn index_in(&self, o: &ModLattice) -> u128 {
        let (a, b) = self.covolume();
        let (c, d) = o.covolume();
        let num = a * d;
        let den = b * c;
        debug_assert_eq!(num % den, 0);
        (num / den) as u128
    }

    /// Coordinates of a vector in the lattice basis, if it lies in the lattice.
    pub fn coords(&self, v: &[KElem]) -> Option<Vec<i128>> {
        let den = v.iter().fold(self.den, |l, e| lcm(l, e.den));
        let target: Vec<i128> = v.iter().flat_map(|e| [e.x[0] * (den / e.den), e.x[1] * (den / e.den)]).collect();
        let basis: IMat = self.rows.iter().map(|r| r.iter().map(|&x| x * (den / self.den)).collect()).collect();
        let (x, d) = intmat::solve_left(&basis, &target)?;
        (d == 1).then_some(x)
    }

    pub fn contains(&self, v: &[KElem]) -> bool {
        self.coords(v).is_some()
    }

    pub fn is_subset(&self, o: &ModLattice) -> bool {
        self.vectors().iter().all(|v| o.contains(v))
    }

    /// Integer matrix Ω with k·b_i = Σ_j Ω_ij b_j, if the lattice is stable under k.
    pub fn action_matrix(&self, k: &KElem) -> Option<IMat> {
        self.vectors()
            .iter()
            .map(|v| {
                let w: Vec<KElem> = v.iter().map(|x| x.mul(k)).collect();
                self.coords(&w)
            })
            .collect()
    }

    /// {y ∈ K^n : Σ x_i·y_i ∈ R for every x in the lattice}, where R has conductor f.
    pub fn pairing_dual(&self, f: u64) -> Result<Self> {
        let n = self.n;
        // Each basis vector b and each coordinate functional of R gives a linear form in y.
        // For y with coordinates (y_i0, y_i1): (b_i·y_i) coordinates are linear in y.
        let mut forms: IMat = Vec::new();
        let den = self.den;
        for b in self.vectors() {
            let mut c0 = vec![0i128; 2 * n];
            let mut c1 = vec![0i128; 2 * n];
            for i in 0..n {
                let m = b[i].mult_matrix();
                // y_i · b_i on row vectors: (y0, y1)·M, M scaled by den
                let scale = den / b[i].den;
                c0[2 * i] = m[0][0] * scale;
                c0[2 * i + 1] = m[1][0] * scale;
                c1[2 * i] = m[0][1] * scale;
                c1[2 * i + 1] = m[1][1] * scale;
            }
            // z0 ∈ Z and z1 ∈ fZ where (z0, z1) = (c0·y, c1·y)/den
            forms.push(c0.iter().map(|&x| x * f as i128).collect());
            forms.push(c1);
        }
        // y·form_k/(den·f) ∈ Z for all k: y lies in the dual of span(form_k)/(den·f)
        let g = intmat::hnf(&forms, 2 * n);
        if g.len() != 2 * n {
            return Err(Error::DegenerateLattice);
        }
        let big_d = den * f as i128;
        // dual = big_d·(gᵀ)⁻¹·Z^{2n} = (big_d/e)·span of the rows of xᵀ, and it contains big_d·Z^{2n}
        let (e, x) = intmat::triangular_inverse(&g);
        let modulus = e * big_d;
        let rows: IMat = intmat::transpose(&x).iter().map(|r| r.iter().map(|&v| v.rem_euclid(modulus) * big_d % modulus).collect()).collect();
        Ok(ModLattice::normalized(self.dk, n, intmat::hnf_mod(&rows, 2 * n, modulus), e))
    }
}

/// Determinant of an n×n matrix over K by cofactor expansion.
pub fn kdet(dk: i64, m: &[Vec<KElem>]) -> KElem {
    let n = m.len();
    match n {
        0 => KElem::integer(dk, 1),
        1 => m[0][0],
        _ => {
            let mut acc = KElem::integer(dk, 0);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<KElem>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| *x).collect())
                    .collect();
                let term = m[0][j].mul(&kdet(dk, &minor));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::QuadOrder;

    #[test]
    fn diagonal_and_action() {
        let r = QuadOrder::from_disc(-16).unwrap();
        let l = ModLattice::diagonal(-4, &[r.lattice(), r.maximal().lattice()]);
        assert_eq!(l.rank(), 2);
        assert!(l.action_matrix(&r.generator()).is_some());
        assert!(l.action_matrix(&KElem::omega(-4)).is_none());
    }

    #[test]
    fn dual_of_free_module_is_free() {
        let r = QuadOrder::from_disc(-15).unwrap();
        let l = ModLattice::diagonal(-15, &[r.lattice(), r.lattice()]);
        assert_eq!(l.pairing_dual(1).unwrap(), l);
        let r = QuadOrder::from_disc(-16).unwrap();
        let l = ModLattice::diagonal(-4, &[r.lattice()]);
        assert_eq!(l.pairing_dual(2).unwrap(), l);
    }
}
