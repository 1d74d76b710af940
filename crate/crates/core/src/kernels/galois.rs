use serde::Serialize;

use super::commutant::{algebra_span, span_log};
use crate::error::{Error, Result};
use crate::zmod::{Mat, Zle};

/// Why the generated algebra misses part of the full matrix algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Obstruction {
    /// All matrices fix a common line spanned by `eigenvector`.
    Borel { eigenvector: [u64; 2] },
    /// The matrices generate a copy of F_{ℓ²}.
    NonsplitCartan,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaloisImage {
    pub ell: u64,
    pub algebra_dim: u32,
    pub commutant_dim: u32,
    pub surjective: bool,
    pub obstruction: Option<Obstruction>,
}

/// Compares the F_ℓ-algebra generated by `matrices` with C/ℓC spanned by `c_basis`.
pub fn galois_image_test(ell: u64, matrices: &[Mat], c_basis: &[Mat]) -> Result<GaloisImage> {
    if !crate::ntheory::is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    let ring = Zle::new(ell, 1);
    let shape_ok = |m: &Mat| m.len() == 2 && m.iter().all(|r| r.len() == 2);
    if !matrices.iter().chain(c_basis).all(shape_ok) {
        return Err(Error::InvalidInput("matrices must be 2×2".into()));
    }
    let ms: Vec<Mat> = matrices.iter().map(|m| ring.reduce_mat(m)).collect();
    for m in &ms {
        if ring.sub(ring.mul(m[0][0], m[1][1]), ring.mul(m[0][1], m[1][0])) == 0 {
            return Err(Error::SingularMatrix(ell));
        }
    }
    let cs: Vec<Mat> = c_basis.iter().map(|m| ring.reduce_mat(m)).collect();
    let algebra = algebra_span(ring, &ms);
    let algebra_dim = span_log(ring, &algebra);
    let commutant_dim = span_log(ring, &cs);
    let joint: Vec<Mat> = cs.iter().chain(&algebra).cloned().collect();
    if span_log(ring, &joint) != commutant_dim {
        return Err(Error::InvalidInput("generated algebra is not contained in the given commutant".into()));
    }
    let surjective = algebra_dim == commutant_dim;
    let obstruction = if surjective || commutant_dim != 4 {
        None
    } else if let Some(v) = common_eigenvector(ring, &ms) {
        Some(Obstruction::Borel { eigenvector: v })
    } else if algebra_dim == 2 {
        Some(Obstruction::NonsplitCartan)
    } else {
        return Err(Error::CrossCheckMismatch(format!("proper subalgebra of dimension {algebra_dim} without an eigenline")));
    };
    Ok(GaloisImage { ell, algebra_dim, commutant_dim, surjective, obstruction })
}

fn common_eigenvector(ring: Zle, ms: &[Mat]) -> Option<[u64; 2]> {
    let lines = std::iter::once([0, 1]).chain((0..ring.n).map(|l| [1, l]));
    lines.into_iter().find(|v| {
        ms.iter().all(|m| {
            let w = ring.mat_vec(m, v);
            ring.sub(ring.mul(w[0], v[1]), ring.mul(w[1], v[0])) == 0
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2() -> Vec<Mat> {
        let mut out = Vec::new();
        for k in 0..4 {
            let mut m = vec![vec![0; 2]; 2];
            m[k / 2][k % 2] = 1;
            out.push(m);
        }
        out
    }

    #[test]
    fn identity_is_not_surjective() {
        let id = vec![vec![1, 0], vec![0, 1]];
        let img = galois_image_test(3, std::slice::from_ref(&id), &m2()).unwrap();
        assert!(!img.surjective);
        assert_eq!(img.algebra_dim, 1);
        assert!(matches!(img.obstruction, Some(Obstruction::Borel { .. })));
    }

    #[test]
    fn irreducible_frobenius_spans_its_field() {
        // Frobenius with charpoly x² + x + 1 mod 2
        let f = vec![vec![0, 1], vec![1, 1]];
        let c = vec![vec![vec![1, 0], vec![0, 1]], f.clone()];
        let img = galois_image_test(2, std::slice::from_ref(&f), &c).unwrap();
        assert!(img.surjective);
        let img = galois_image_test(2, &[f], &m2()).unwrap();
        assert_eq!(img.obstruction, Some(Obstruction::NonsplitCartan));
    }

    #[test]
    fn upper_triangular_is_borel() {
        let a = vec![vec![1, 1], vec![0, 1]];
        let b = vec![vec![2, 0], vec![0, 1]];
        let img = galois_image_test(5, &[a, b], &m2()).unwrap();
        assert_eq!(img.algebra_dim, 3);
        assert_eq!(img.obstruction, Some(Obstruction::Borel { eigenvector: [1, 0] }));
        let full = galois_image_test(5, &[vec![vec![1, 1], vec![0, 1]], vec![vec![1, 0], vec![1, 1]]], &m2()).unwrap();
        assert!(full.surjective);
    }

    #[test]
    fn singular_input_is_rejected() {
        let s = vec![vec![1, 2], vec![2, 4]];
        assert_eq!(galois_image_test(5, &[s], &m2()).unwrap_err(), Error::SingularMatrix(5));
    }
}
