//! Dense polynomials over a prime field F_p, coefficients in ascending degree order.
//! Only what field construction needs: products, remainders, powers, gcds.

pub(crate) type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    crate::ntheory::mod_inv(a as i128, p as i128).expect("nonzero residue") as u64
}

pub(crate) fn rem(a: &[u64], f: &[u64], p: u64) -> Poly {
    let mut r = trim(a.to_vec());
    let df = f.len() - 1;
    let lead_inv = inv_mod(f[df], p);
    while r.len() > df {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        for i in 0..=df {
            let idx = dr - df + i;
            r[idx] = (r[idx] + p * p - c * f[i] % p) % p;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

pub(crate) fn mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Poly {
    rem(&mul(a, b, p), f, p)
}

pub(crate) fn powmod(base: &[u64], mut e: u128, f: &[u64], p: u64) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, f, p);
        }
        b = mulmod(&b, &b, f, p);
        e >>= 1;
    }
    rem(&acc, f, p)
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let li = inv_mod(lead, p);
        for c in a.iter_mut() {
            *c = *c * li % p;
        }
    }
    a
}

/// Rabin's irreducibility test for a monic polynomial of degree n >= 1.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    let pn = (p as u128).pow(n as u32);
    if sub(&powmod(&x, pn, f, p), &x, p) != Vec::<u64>::new() {
        return false;
    }
    for (r, _) in crate::ntheory::factor(n as u64) {
        let e = (p as u128).pow((n as u64 / r) as u32);
        let h = sub(&powmod(&x, e, f, p), &x, p);
        if gcd(&h, f, p).len() != 1 {
            return false;
        }
    }
    true
}

/// Encoding of a polynomial of degree < n as the integer sum c_i p^i.
pub(crate) fn encode(a: &[u64], p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| acc * p + c)
}

pub(crate) fn decode(mut v: u64, p: u64, n: usize) -> Poly {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(v % p);
        v /= p;
    }
    trim(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_small_cases() {
        // x^2 + x + 1 over F_2
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        // x^2 + 2 over F_5 (-2 = 3 is a non-square)
        assert!(is_irreducible(&[2, 0, 1], 5));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        // x^3 + x + 1 over F_2
        assert!(is_irreducible(&[1, 1, 0, 1], 2));
        // x^4 + x^2 + 1 = (x^2+x+1)^2 over F_2
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
    }

    #[test]
    fn encode_roundtrip() {
        let a = vec![3, 0, 4];
        assert_eq!(decode(encode(&a, 5), 5, 3), a);
    }
}
