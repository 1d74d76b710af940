//! Exact integer matrix routines: Hermite and Smith normal forms, determinants.

use crate::ntheory::{gcd, xgcd};

pub type IMat = Vec<Vec<i128>>;

/// Row-style Hermite normal form of the lattice spanned by `rows`: echelon with
/// positive pivots, entries above each pivot reduced into `0..pivot`, zero rows dropped.
pub fn hnf(rows: &[Vec<i128>], ncols: usize) -> IMat {
    let mut a: IMat = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let mut out_rows = 0;
    for col in 0..ncols {
        if out_rows == a.len() {
            break;
        }
        // Euclid down the column until a single nonzero entry remains.
        loop {
            let mut piv: Option<usize> = None;
            for i in out_rows..a.len() {
                if a[i][col] != 0 && piv.is_none_or(|p| a[i][col].abs() < a[p][col].abs()) {
                    piv = Some(i);
                }
            }
            let Some(p) = piv else { break };
            a.swap(out_rows, p);
            let mut done = true;
            for i in out_rows + 1..a.len() {
                if a[i][col] != 0 {
                    let q = a[i][col].div_euclid(a[out_rows][col]);
                    let (src, dst) = (a[out_rows].clone(), &mut a[i]);
                    for (d, s) in dst.iter_mut().zip(&src) {
                        *d -= q * s;
                    }
                    if a[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a[out_rows][col] == 0 {
            continue;
        }
        if a[out_rows][col] < 0 {
            for x in a[out_rows].iter_mut() {
                *x = -*x;
            }
        }
        let pivot_row = a[out_rows].clone();
        for i in 0..out_rows {
            let q = a[i][col].div_euclid(pivot_row[col]);
            if q != 0 {
                for (d, s) in a[i].iter_mut().zip(&pivot_row) {
                    *d -= q * s;
                }
            }
        }
        out_rows += 1;
    }
    a.truncate(out_rows);
    a.retain(|r| r.iter().any(|&x| x != 0));
    a
}

/// Hermite normal form of a full-rank lattice known to contain `modulus`·Z^ncols.
/// Entries stay below the modulus, so large bases are handled without overflow.
pub fn hnf_mod(rows: &[Vec<i128>], ncols: usize, modulus: i128) -> IMat {
    let r = modulus.abs();
    let mut w: IMat = rows.iter().map(|row| row.iter().map(|x| x.rem_euclid(r)).collect()).collect();
    let mut out: IMat = Vec::with_capacity(ncols);
    for col in 0..ncols {
        loop {
            let mut piv: Option<usize> = None;
            for (i, row) in w.iter().enumerate() {
                if row[col] != 0 && piv.is_none_or(|p| row[col] < w[p][col]) {
                    piv = Some(i);
                }
            }
            let Some(p) = piv else { break };
            let src = w[p].clone();
            let mut done = true;
            for (i, row) in w.iter_mut().enumerate() {
                if i == p || row[col] == 0 {
                    continue;
                }
                let q = row[col] / src[col];
                for (d, s) in row.iter_mut().zip(&src).skip(col) {
                    *d = (*d - q * s).rem_euclid(r);
                }
                done &= row[col] == 0;
            }
            if done {
                break;
            }
        }
        let v = w.iter().position(|row| row[col] != 0);
        let a = v.map_or(0, |i| w[i][col]);
        // pivot = u·v + t·r·e_col has entry gcd(a, r)
        let (g, u, _) = xgcd(a, r);
        let mut pivot = vec![0i128; ncols];
        pivot[col] = g;
        if let Some(i) = v {
            for j in col + 1..ncols {
                pivot[j] = (u.rem_euclid(r) * w[i][j]).rem_euclid(r);
            }
            let q = a / g;
            for j in col..ncols {
                w[i][j] = (w[i][j] - q * pivot[j]).rem_euclid(r);
            }
        }
        // (r/g)·pivot − r·e_col lies in the lattice and vanishes at col
        let tail: Vec<i128> = (0..ncols).map(|j| if j > col { (r / g * pivot[j]).rem_euclid(r) } else { 0 }).collect();
        w.push(tail);
        w.retain(|row| row.iter().any(|&x| x != 0));
        out.push(pivot);
    }
    for i in 0..ncols {
        for j in i + 1..ncols {
            let q = out[i][j].div_euclid(out[j][j]);
            if q != 0 {
                let src = out[j].clone();
                for (d, s) in out[i].iter_mut().zip(&src) {
                    *d -= q * s;
                }
            }
        }
    }
    out
}

/// For an upper-triangular matrix with nonzero diagonal, the least e > 0 with
/// e·g⁻¹ integral, and that integral matrix.
pub fn triangular_inverse(g: &[Vec<i128>]) -> (i128, IMat) {
    let n = g.len();
    let reduce = |(a, b): (i128, i128)| {
        let d = gcd(a, b) * b.signum();
        (a / d, b / d)
    };
    let mut inv = vec![vec![(0i128, 1i128); n]; n];
    for j in 0..n {
        inv[j][j] = reduce((1, g[j][j]));
        for i in (0..j).rev() {
            let (mut num, mut den) = (0i128, 1i128);
            for k in i + 1..=j {
                let (a, b) = inv[k][j];
                let l = den / gcd(den, b) * b;
                num = num * (l / den) + g[i][k] * a * (l / b);
                den = l;
                (num, den) = reduce((num, den));
            }
            inv[i][j] = reduce((-num, den * g[i][i]));
        }
    }
    let e = inv.iter().flatten().fold(1i128, |l, &(_, b)| l / gcd(l, b) * b);
    (e, inv.iter().map(|r| r.iter().map(|&(a, b)| a * (e / b)).collect()).collect())
}

/// Nonzero elementary divisors d_1 | d_2 | … of an integer matrix.
pub fn elementary_divisors(rows: &[Vec<i128>], ncols: usize) -> Vec<i128> {
    let mut a: IMat = rows.to_vec();
    let nrows = a.len();
    let mut out = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        for i in t + 1..nrows {
            let q = a[i][t].div_euclid(a[t][t]);
            if q != 0 {
                let src = a[t].clone();
                for (d, s) in a[i].iter_mut().zip(&src) {
                    *d -= q * s;
                }
            }
            if a[i][t] != 0 {
                clean = false;
            }
        }
        for j in t + 1..ncols {
            let q = a[t][j].div_euclid(a[t][t]);
            if q != 0 {
                for row in a.iter_mut() {
                    let s = row[t];
                    row[j] -= q * s;
                }
            }
            if a[t][j] != 0 {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // enforce divisibility into the remaining block
        let d = a[t][t];
        let mut fixed = true;
        'outer: for i in t + 1..nrows {
            for j in t + 1..ncols {
                if a[i][j] % d != 0 {
                    let src = a[i].clone();
                    for (x, s) in a[t].iter_mut().zip(&src) {
                        *x += s;
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if fixed {
            out.push(d.abs());
            t += 1;
        }
    }
    out
}

/// Determinant by fraction-free Bareiss elimination.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: IMat = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

pub fn mat_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> IMat {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..cols).map(|j| row.iter().zip(b).map(|(&x, r)| x * r[j]).sum()).collect())
        .collect()
}

pub fn transpose(a: &[Vec<i128>]) -> IMat {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

/// Adjugate of a square matrix, so that `a · adj(a) = det(a) · I`.
pub fn adjugate(a: &[Vec<i128>]) -> IMat {
    let n = a.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut out = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: IMat = a
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != j)
                .map(|(_, row)| row.iter().enumerate().filter(|&(c, _)| c != i).map(|(_, &x)| x).collect())
                .collect();
            let s = if (i + j) % 2 == 0 { 1 } else { -1 };
            out[i][j] = s * det(&minor);
        }
    }
    out
}

/// gcd of every entry of a matrix (0 for the zero matrix).
pub fn content(a: &[Vec<i128>]) -> i128 {
    a.iter().flatten().fold(0, |g, &x| gcd(g, x))
}

/// Solves x·B = v over Q for square invertible B, returning (numerators, common denominator).
pub fn solve_left(b: &[Vec<i128>], v: &[i128]) -> Option<(Vec<i128>, i128)> {
    let d = det(b);
    if d == 0 {
        return None;
    }
    let adj = adjugate(b);
    // x = v · adj(B) / det(B)
    let n = b.len();
    let mut x: Vec<i128> = (0..n).map(|j| (0..n).map(|k| v[k] * adj[k][j]).sum()).collect();
    let mut den = d;
    let g = x.iter().fold(den, |g, &y| gcd(g, y));
    for y in x.iter_mut() {
        *y /= g;
    }
    den /= g;
    if den < 0 {
        den = -den;
        for y in x.iter_mut() {
            *y = -*y;
        }
    }
    Some((x, den))
}

/// Extended gcd of a list: returns (g, coefficients) with Σ c_i a_i = g ≥ 0.
pub fn xgcd_list(a: &[i128]) -> (i128, Vec<i128>) {
    let mut g = 0i128;
    let mut coeffs = vec![0i128; a.len()];
    for (i, &x) in a.iter().enumerate() {
        let (d, s, t) = xgcd(g, x);
        for c in coeffs.iter_mut().take(i) {
            *c *= s;
        }
        coeffs[i] = t;
        g = d;
    }
    if g < 0 {
        g = -g;
        for c in coeffs.iter_mut() {
            *c = -*c;
        }
    }
    (g, coeffs)
}
