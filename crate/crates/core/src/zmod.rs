//! Linear algebra over the local ring Z/ℓ^e.
//!
//! Matrices are row-major `Vec<Vec<u64>>` with entries reduced into `0..ℓ^e`.

use crate::ntheory;

pub type Mat = Vec<Vec<u64>>;

/// The ring Z/ℓ^e for a prime ℓ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Zle {
    pub ell: u64,
    pub e: u32,
    pub n: u64,
}

/// Smith decomposition `A·V = U⁻¹·D`: column transform `v`, its inverse `vinv`, and
/// the valuations of the diagonal entries (`e` marks a zero diagonal entry).
#[derive(Debug, Clone)]
pub struct Smith {
    pub vals: Vec<u32>,
    pub v: Mat,
    pub vinv: Mat,
}

/// Kernel of x ↦ A·x as a direct sum of cyclic groups: generator k has order ℓ^{orders[k]}.
#[derive(Debug, Clone)]
pub struct Kernel {
    pub gens: Vec<Vec<u64>>,
    pub orders: Vec<u32>,
    ring: Zle,
    vinv: Mat,
    index: Vec<usize>,
}

impl Kernel {
    pub fn log_size(&self) -> u32 {
        self.orders.iter().sum()
    }

    pub fn is_free(&self) -> bool {
        self.orders.iter().all(|&o| o == self.ring.e)
    }

    /// Coordinates of a kernel element in terms of `gens` (component k modulo ℓ^{orders[k]}).
    pub fn coords(&self, x: &[u64]) -> Vec<u64> {
        let y = self.ring.mat_vec(&self.vinv, x);
        self.index
            .iter()
            .zip(&self.orders)
            .map(|(&i, &o)| {
                let shift = self.ring.ell.pow(self.ring.e - o);
                debug_assert_eq!(y[i] % shift, 0);
                (y[i] / shift) % self.ring.ell.pow(o)
            })
            .collect()
    }
}

impl Zle {
    pub fn new(ell: u64, e: u32) -> Self {
        Zle { ell, e, n: ell.pow(e) }
    }

    pub fn reduce(&self, x: i128) -> u64 {
        x.rem_euclid(self.n as i128) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.n as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + self.n as u128 - (b % self.n) as u128) % self.n as u128) as u64
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.n as u128) as u64
    }

    pub fn neg(&self, a: u64) -> u64 {
        self.sub(0, a)
    }

    /// ℓ-adic valuation, `e` for zero.
    pub fn val(&self, a: u64) -> u32 {
        let a = a % self.n;
        if a == 0 {
            self.e
        } else {
            ntheory::valuation(a as u128, self.ell as u128)
        }
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        ntheory::mod_inv(a as i128, self.n as i128).map(|x| x as u64)
    }

    pub fn identity(&self, k: usize) -> Mat {
        (0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect()
    }

    pub fn zeros(&self, r: usize, c: usize) -> Mat {
        vec![vec![0; c]; r]
    }

    pub fn mat_mul(&self, a: &Mat, b: &Mat) -> Mat {
        let inner = b.len();
        let cols = b.first().map_or(0, |r| r.len());
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| {
                        let s: u128 = (0..inner).map(|k| row[k] as u128 * b[k][j] as u128 % self.n as u128).sum();
                        (s % self.n as u128) as u64
                    })
                    .collect()
            })
            .collect()
    }

    pub fn mat_vec(&self, a: &Mat, x: &[u64]) -> Vec<u64> {
        a.iter()
            .map(|row| {
                let s: u128 = row.iter().zip(x).map(|(&r, &v)| r as u128 * v as u128 % self.n as u128).sum();
                (s % self.n as u128) as u64
            })
            .collect()
    }

    pub fn mat_add(&self, a: &Mat, b: &Mat) -> Mat {
        a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| self.add(x, y)).collect()).collect()
    }

    pub fn mat_sub(&self, a: &Mat, b: &Mat) -> Mat {
        a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| self.sub(x, y)).collect()).collect()
    }

    pub fn mat_scale(&self, a: &Mat, c: u64) -> Mat {
        a.iter().map(|r| r.iter().map(|&x| self.mul(x, c)).collect()).collect()
    }

    pub fn mat_pow(&self, a: &Mat, mut k: u64) -> Mat {
        let mut acc = self.identity(a.len());
        let mut b = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mat_mul(&acc, &b);
            }
            k >>= 1;
            if k > 0 {
                b = self.mat_mul(&b, &b);
            }
        }
        acc
    }

    pub fn reduce_mat(&self, a: &Mat) -> Mat {
        a.iter().map(|r| r.iter().map(|&x| x % self.n).collect()).collect()
    }

    /// Characteristic polynomial det(x·I − A), ascending coefficients (Berkowitz).
    pub fn charpoly(&self, a: &Mat) -> Vec<u64> {
        let n = a.len();
        // descending coefficients of the leading principal minors
        let mut p = vec![1u64];
        for r in 0..n {
            let s: Mat = a[..r].iter().map(|row| row[..r].to_vec()).collect();
            let row: Vec<u64> = a[r][..r].to_vec();
            let mut col: Vec<u64> = a[..r].iter().map(|x| x[r]).collect();
            let mut t = vec![1, self.neg(a[r][r])];
            for _ in 0..r {
                let dot = row.iter().zip(&col).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)));
                t.push(self.neg(dot));
                col = self.mat_vec(&s, &col);
            }
            p = (0..r + 2)
                .map(|i| (0..=i.min(r)).fold(0, |acc, k| self.add(acc, self.mul(t[i - k], p[k]))))
                .collect();
        }
        p.reverse();
        p
    }

    /// Local Smith form of an r×c matrix, always choosing a pivot of minimal valuation.
    pub fn smith(&self, a: &Mat, cols: usize) -> Smith {
        let mut a = self.reduce_mat(a);
        let rows = a.len();
        let mut v = self.identity(cols);
        let mut vinv = self.identity(cols);
        let mut vals = Vec::new();
        for k in 0..rows.min(cols) {
            let mut best: Option<(u32, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(k) {
                for (j, &x) in row.iter().enumerate().skip(k) {
                    let vx = self.val(x);
                    if vx < self.e && best.is_none_or(|(b, _, _)| vx < b) {
                        best = Some((vx, i, j));
                    }
                }
            }
            let Some((pv, pi, pj)) = best else { break };
            a.swap(k, pi);
            if pj != k {
                for row in a.iter_mut() {
                    row.swap(k, pj);
                }
                for row in v.iter_mut() {
                    row.swap(k, pj);
                }
                vinv.swap(k, pj);
            }
            let scale = self.ell.pow(pv);
            let unit = a[k][k] / scale;
            let uinv = self.inv(unit).expect("unit part is invertible");
            // normalise the pivot to ℓ^pv by scaling column k
            for row in a.iter_mut() {
                row[k] = self.mul(row[k], uinv);
            }
            for row in v.iter_mut() {
                row[k] = self.mul(row[k], uinv);
            }
            for x in vinv[k].iter_mut() {
                *x = self.mul(*x, unit);
            }
            for i in k + 1..rows {
                if a[i][k] == 0 {
                    continue;
                }
                let f = a[i][k] / scale;
                for j in k..cols {
                    let t = self.mul(f, a[k][j]);
                    a[i][j] = self.sub(a[i][j], t);
                }
            }
            for j in k + 1..cols {
                if a[k][j] == 0 {
                    continue;
                }
                let f = a[k][j] / scale;
                for row in a.iter_mut() {
                    let t = self.mul(f, row[k]);
                    row[j] = self.sub(row[j], t);
                }
                for row in v.iter_mut() {
                    let t = self.mul(f, row[k]);
                    row[j] = self.sub(row[j], t);
                }
                let rj = vinv[j].clone();
                for (x, &y) in vinv[k].iter_mut().zip(&rj) {
                    *x = self.add(*x, self.mul(f, y));
                }
            }
            vals.push(pv);
        }
        Smith { vals, v, vinv }
    }

    /// Kernel of x ↦ A·x on (Z/ℓ^e)^cols.
    pub fn kernel(&self, a: &Mat, cols: usize) -> Kernel {
        let s = self.smith(a, cols);
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        let mut index = Vec::new();
        for k in 0..cols {
            let vk = s.vals.get(k).copied().unwrap_or(self.e);
            if vk == 0 {
                continue;
            }
            let shift = self.ell.pow(self.e - vk);
            gens.push((0..cols).map(|i| self.mul(s.v[i][k], shift)).collect());
            orders.push(vk);
            index.push(k);
        }
        Kernel { gens, orders, ring: *self, vinv: s.vinv, index }
    }

    /// log_ℓ of the order of the subgroup of (Z/ℓ^e)^k generated by `vectors`.
    pub fn span_log_size(&self, vectors: &[Vec<u64>]) -> u32 {
        if vectors.is_empty() {
            return 0;
        }
        let k = vectors[0].len();
        // matrix with the vectors as columns
        let a: Mat = (0..k).map(|i| vectors.iter().map(|v| v[i]).collect()).collect();
        self.smith(&a, vectors.len()).vals.iter().map(|&v| self.e - v).sum()
    }
}

/// log_ℓ of the kernel order of an integer matrix viewed as a homomorphism
/// ⊕ Z/ℓ^{dom[i]} → ⊕ Z/ℓ^{cod[j]} (entry (j, i) read modulo ℓ^{cod[j]}).
pub fn mixed_kernel_log_size(ell: u64, dom: &[u32], cod: &[u32], a: &[Vec<i128>]) -> u32 {
    let b = cod.iter().copied().max().unwrap_or(0);
    let total: u32 = dom.iter().sum();
    if b == 0 {
        return total;
    }
    let ring = Zle::new(ell, b);
    let cols: Vec<Vec<u64>> = (0..dom.len())
        .map(|i| {
            (0..cod.len())
                .map(|j| {
                    let scale = ell.pow(b - cod[j]) as i128;
                    ring.reduce(a[j][i].rem_euclid(ell.pow(cod[j]) as i128) * scale)
                })
                .collect()
        })
        .collect();
    total - ring.span_log_size(&cols)
}

/// Exponents of the cyclic factors of the subgroup of ⊕ Z/ℓ^{cod[j]} generated by
/// `vectors`; used to report group structures.
pub fn structure_of_span(ell: u64, cod: &[u32], vectors: &[Vec<u64>]) -> Vec<u32> {
    let b = cod.iter().copied().max().unwrap_or(0);
    if b == 0 || vectors.is_empty() {
        return Vec::new();
    }
    let ring = Zle::new(ell, b);
    let cols: Vec<Vec<u64>> = vectors
        .iter()
        .map(|v| v.iter().zip(cod).map(|(&x, &c)| ring.mul(x, ell.pow(b - c))).collect())
        .collect();
    let a: Mat = (0..cod.len()).map(|i| cols.iter().map(|v| v[i]).collect()).collect();
    let mut out: Vec<u32> =
        ring.smith(&a, cols.len()).vals.iter().map(|&v| b - v).filter(|&x| x > 0).collect();
    out.sort_unstable_by(|x, y| y.cmp(x));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_kernel(r: &Zle, a: &Mat, cols: usize) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        let total = r.n.pow(cols as u32);
        for code in 0..total {
            let x: Vec<u64> = (0..cols).map(|i| (code / r.n.pow(i as u32)) % r.n).collect();
            if r.mat_vec(a, &x).iter().all(|&y| y == 0) {
                out.push(x);
            }
        }
        out
    }

    #[test]
    fn charpoly_of_small_matrices() {
        let r = Zle::new(7, 1);
        assert_eq!(r.charpoly(&vec![vec![1, 2], vec![3, 4]]), vec![5, 2, 1]);
        let a = vec![vec![0, 1, 0], vec![0, 0, 1], vec![2, 3, 4]];
        // companion of x³ − 4x² − 3x − 2
        assert_eq!(r.charpoly(&a), vec![5, 4, 3, 1]);
    }

    #[test]
    fn kernel_sizes_match_brute_force() {
        let r = Zle::new(2, 2);
        let mats: Vec<Mat> = vec![
            vec![vec![2, 0, 1], vec![0, 2, 2]],
            vec![vec![2, 2, 0], vec![0, 0, 0]],
            vec![vec![1, 3, 2]],
            vec![vec![0, 0, 0]],
        ];
        for a in mats {
            let k = r.kernel(&a, 3);
            let brute = brute_kernel(&r, &a, 3);
            assert_eq!(2u64.pow(k.log_size()), brute.len() as u64);
            for g in &k.gens {
                assert!(r.mat_vec(&a, g).iter().all(|&y| y == 0));
            }
            for x in &brute {
                let c = k.coords(x);
                let mut rebuilt = vec![0u64; 3];
                for (g, &ci) in k.gens.iter().zip(&c) {
                    for (slot, &gv) in rebuilt.iter_mut().zip(g) {
                        *slot = r.add(*slot, r.mul(gv, ci));
                    }
                }
                assert_eq!(&rebuilt, x);
            }
        }
    }

    #[test]
    fn mixed_kernel_counts() {
        // multiplication by 2 on Z/4 × Z/2 has kernel of order 4
        let a = vec![vec![2, 0], vec![0, 2]];
        assert_eq!(mixed_kernel_log_size(2, &[2, 1], &[2, 1], &a), 2);
        // projection Z/4 × Z/2 → Z/4 onto the first factor
        let a = vec![vec![1, 0]];
        assert_eq!(mixed_kernel_log_size(2, &[2, 1], &[2], &a), 1);
    }

    #[test]
    fn span_structure() {
        assert_eq!(structure_of_span(3, &[2, 2], &[vec![3, 0], vec![0, 1]]), vec![2, 1]);
    }
}
