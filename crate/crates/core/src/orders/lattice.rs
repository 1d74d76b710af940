use std::fmt;

use super::order::QuadOrder;
use crate::error::{Error, Result};
use crate::intmat;
use crate::ntheory::gcd;

/// Element (x0 + x1·ω)/den of an imaginary quadratic field K = Q(√d_K).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KElem {
    pub dk: i64,
    pub x: [i128; 2],
    pub den: i128,
}

impl KElem {
    pub fn new(dk: i64, x: [i128; 2], den: i128) -> Self {
        assert!(den != 0);
        let g = gcd(gcd(x[0], x[1]), den);
        let s = if den < 0 { -1 } else { 1 };
        KElem { dk, x: [s * x[0] / g, s * x[1] / g], den: s * den / g }
    }

    pub fn integer(dk: i64, n: i128) -> Self {
        KElem::new(dk, [n, 0], 1)
    }

    /// (a + b·√d_K)/den.
    pub fn from_sqrt(dk: i64, a: i128, b: i128, den: i128) -> Self {
        // √d_K = 2ω − d_K
        KElem::new(dk, [a - b * dk as i128, 2 * b], den)
    }

    pub fn omega(dk: i64) -> Self {
        KElem::new(dk, [0, 1], 1)
    }

    fn n_omega(&self) -> i128 {
        let d = self.dk as i128;
        (d * d - d) / 4
    }

    pub fn is_zero(&self) -> bool {
        self.x == [0, 0]
    }

    pub fn add(&self, o: &KElem) -> KElem {
        KElem::new(
            self.dk,
            [self.x[0] * o.den + o.x[0] * self.den, self.x[1] * o.den + o.x[1] * self.den],
            self.den * o.den,
        )
    }

    pub fn neg(&self) -> KElem {
        KElem::new(self.dk, [-self.x[0], -self.x[1]], self.den)
    }

    pub fn sub(&self, o: &KElem) -> KElem {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &KElem) -> KElem {
        let (a0, a1, b0, b1) = (self.x[0], self.x[1], o.x[0], o.x[1]);
        let n = self.n_omega();
        let d = self.dk as i128;
        KElem::new(self.dk, [a0 * b0 - n * a1 * b1, a0 * b1 + a1 * b0 + d * a1 * b1], self.den * o.den)
    }

    pub fn conj(&self) -> KElem {
        KElem::new(self.dk, [self.x[0] + self.x[1] * self.dk as i128, -self.x[1]], self.den)
    }

    /// Norm as a reduced fraction (numerator, denominator).
    pub fn norm(&self) -> (i128, i128) {
        let (x0, x1) = (self.x[0], self.x[1]);
        let num = x0 * x0 + self.dk as i128 * x0 * x1 + self.n_omega() * x1 * x1;
        let den = self.den * self.den;
        let g = gcd(num, den);
        (num / g, den / g)
    }

    pub fn inv(&self) -> Option<KElem> {
        if self.is_zero() {
            return None;
        }
        let (n, d) = self.norm();
        let c = self.conj();
        // 1/α = ᾱ / N(α)
        Some(KElem::new(self.dk, [c.x[0] * d, c.x[1] * d], c.den * n))
    }

    pub fn is_integral_in(&self, order: &QuadOrder) -> bool {
        self.den == 1 && self.x[1] % order.conductor() as i128 == 0
    }

    /// Matrix of x ↦ x·self on row vectors (x0, x1), scaled by `self.den`.
    pub(crate) fn mult_matrix(&self) -> [[i128; 2]; 2] {
        let (a0, a1) = (self.x[0], self.x[1]);
        [[a0, a1], [-self.n_omega() * a1, a0 + self.dk as i128 * a1]]
    }
}

/// Full-rank Z-lattice in K, stored in the canonical basis
/// {(a, 0), (b, c)}/den with a, c > 0 and 0 ≤ b < a.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lattice {
    dk: i64,
    rows: [[i128; 2]; 2],
    den: i128,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<({}, {}), ({}, {})>/{}", self.rows[0][0], self.rows[0][1], self.rows[1][0], self.rows[1][1], self.den)
    }
}

impl Lattice {
    /// Lattice spanned by integer vectors (x0, x1)/den.
    pub fn new(dk: i64, gens: &[[i128; 2]], den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::DegenerateLattice);
        }
        // HNF on swapped coordinates puts the ω-coordinate pivot first.
        let swapped: Vec<Vec<i128>> = gens.iter().map(|g| vec![g[1], g[0]]).collect();
        let h = intmat::hnf(&swapped, 2);
        if h.len() != 2 {
            return Err(Error::DegenerateLattice);
        }
        let (c, b, a) = (h[0][0], h[0][1], h[1][1]);
        let mut rows = [[a, 0], [b.rem_euclid(a), c]];
        let mut den = den;
        let g = gcd(gcd(gcd(a, b), c), den);
        for r in rows.iter_mut() {
            for x in r.iter_mut() {
                *x /= g;
            }
        }
        den /= g;
        if den < 0 {
            // negate all generators: the lattice is symmetric under −1
            den = -den;
        }
        Ok(Lattice { dk, rows, den })
    }

    pub fn from_elems(dk: i64, elems: &[KElem]) -> Result<Self> {
        let den = elems.iter().fold(1i128, |l, e| l / gcd(l, e.den) * e.den);
        let gens: Vec<[i128; 2]> = elems.iter().map(|e| [e.x[0] * (den / e.den), e.x[1] * (den / e.den)]).collect();
        Lattice::new(dk, &gens, den)
    }

    pub fn dk(&self) -> i64 {
        self.dk
    }

    pub fn basis(&self) -> [KElem; 2] {
        [KElem::new(self.dk, self.rows[0], self.den), KElem::new(self.dk, self.rows[1], self.den)]
    }

    /// Canonical data (a, b, c, den).
    pub fn canonical(&self) -> (i128, i128, i128, i128) {
        (self.rows[0][0], self.rows[1][0], self.rows[1][1], self.den)
    }

    pub fn add(&self, o: &Lattice) -> Lattice {
        let mut e = self.basis().to_vec();
        e.extend(o.basis());
        Lattice::from_elems(self.dk, &e).expect("sum of full lattices is full")
    }

    pub fn mul(&self, o: &Lattice) -> Lattice {
        let mut e = Vec::with_capacity(4);
        for x in self.basis() {
            for y in o.basis() {
                e.push(x.mul(&y));
            }
        }
        Lattice::from_elems(self.dk, &e).expect("product of full lattices is full")
    }

    pub fn scale(&self, k: &KElem) -> Result<Lattice> {
        if k.is_zero() {
            return Err(Error::DegenerateLattice);
        }
        let e: Vec<KElem> = self.basis().iter().map(|b| b.mul(k)).collect();
        Lattice::from_elems(self.dk, &e)
    }

    pub fn conj(&self) -> Lattice {
        let e: Vec<KElem> = self.basis().iter().map(|b| b.conj()).collect();
        Lattice::from_elems(self.dk, &e).expect("conjugation preserves rank")
    }

    pub fn contains(&self, x: &KElem) -> bool {
        // x = u·r0/den + v·r1/den with u, v ∈ Z
        let (a, b, c) = (self.rows[0][0], self.rows[1][0], self.rows[1][1]);
        let (y0, y1) = (x.x[0] * self.den, x.x[1] * self.den);
        let xd = x.den;
        // v = y1 / (c·xd), u = (y0 − v·b·xd)/(a·xd)
        if y1 % (c * xd) != 0 {
            return false;
        }
        let v = y1 / (c * xd);
        let rest = y0 - v * b * xd;
        rest % (a * xd) == 0
    }

    pub fn is_subset(&self, o: &Lattice) -> bool {
        self.basis().iter().all(|b| o.contains(b))
    }

    /// Covolume relative to O_K as a reduced fraction: [O_K : L] when L ⊆ O_K.
    pub fn covolume(&self) -> (i128, i128) {
        let num = self.rows[0][0] * self.rows[1][1];
        let den = self.den * self.den;
        let g = gcd(num, den);
        (num / g, den / g)
    }

    /// (self : o) = {x ∈ K : x·o ⊆ self}.
    pub fn colon(&self, o: &Lattice) -> Result<Lattice> {
        let r1: Vec<Vec<i128>> = self.rows.iter().map(|r| r.to_vec()).collect();
        let det1 = intmat::det(&r1);
        if det1 == 0 {
            return Err(Error::DegenerateLattice);
        }
        let adj = intmat::adjugate(&r1);
        // columns of M_β·adj(R1)·den1 for both basis elements β of o
        let mut cols: Vec<Vec<i128>> = Vec::new();
        for beta in o.rows {
            let mb = KElem::new(self.dk, beta, 1).mult_matrix();
            let mb: Vec<Vec<i128>> = mb.iter().map(|r| r.to_vec()).collect();
            let c = intmat::mat_mul(&mb, &adj);
            for j in 0..2 {
                cols.push(vec![c[0][j] * self.den, c[1][j] * self.den]);
            }
        }
        let g = intmat::hnf(&cols, 2);
        if g.len() != 2 {
            return Err(Error::DegenerateLattice);
        }
        // dual of span(cols)/D is D·rows((Gᵀ)⁻¹) = D·adj(Gᵀ)/det(G)
        let big_d = o.den * det1;
        let gt = intmat::transpose(&g);
        let adj_gt = intmat::adjugate(&gt);
        let det_g = intmat::det(&g);
        let gens: Vec<[i128; 2]> = adj_gt.iter().map(|r| [r[0] * big_d, r[1] * big_d]).collect();
        Lattice::new(self.dk, &gens, det_g)
    }

    /// The order (L : L).
    pub fn multiplier_ring(&self) -> Result<QuadOrder> {
        let o = self.colon(self)?;
        let (a, b, c, den) = o.canonical();
        if a != 1 || b != 0 || den != 1 {
            return Err(Error::CrossCheckMismatch(format!("multiplier ring is not an order: {o:?}")));
        }
        QuadOrder::from_conductor(self.dk, c as u64)
    }
}
