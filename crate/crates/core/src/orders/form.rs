use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ntheory::{gcd, xgcd};

/// Binary quadratic form a·x² + b·xy + c·y² of negative discriminant.
///
/// The derived ordering (by a, then b, then c) breaks ties between representatives.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl Form {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Form { a, b, c }
    }

    /// Form with given a, b and the discriminant D; None if c would not be integral.
    pub fn from_ab(a: i64, b: i64, d: i64) -> Option<Self> {
        let num = b as i128 * b as i128 - d as i128;
        let den = 4 * a as i128;
        (a > 0 && num % den == 0).then(|| Form { a, b, c: (num / den) as i64 })
    }

    pub fn principal(d: i64) -> Self {
        let b = d.rem_euclid(2);
        Form { a: 1, b, c: (b * b - d) / 4 }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a as i128, self.b as i128), self.c as i128) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let Form { a, b, c } = *self;
        b.abs() <= a && a <= c && !(b < 0 && (a == c || -b == a))
    }

    pub fn conj(&self) -> Form {
        Form { a: self.a, b: -self.b, c: self.c }
    }

    /// Reduced form properly equivalent to a positive definite form.
    pub fn reduce(&self) -> Form {
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        loop {
            // normalise b into (−a, a] by x ↦ x + s·y
            let s = (a - b).div_euclid(2 * a);
            c += a * s * s + b * s;
            b += 2 * a * s;
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            break;
        }
        Form { a: a as i64, b: b as i64, c: c as i64 }
    }

    /// Gaussian composition followed by reduction (forms of equal discriminant).
    pub fn compose(&self, o: &Form) -> Form {
        let d = self.disc() as i128;
        let (mut f1, mut f2) = (*self, *o);
        if f1.a > f2.a {
            std::mem::swap(&mut f1, &mut f2);
        }
        let (a1, b1, _c1) = (f1.a as i128, f1.b as i128, f1.c as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (y1, dd) = if a2 % a1 == 0 {
            (0, a1)
        } else {
            let (g, u, _v) = xgcd(a2, a1);
            (u, g)
        };
        let (x2, y2, d1) = if s % dd == 0 {
            (0, -1, dd)
        } else {
            let (g, x, y) = xgcd(s, dd);
            (x, -y, g)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (b3 * b3 - d) / (4 * a3);
        debug_assert_eq!((b3 * b3 - d) % (4 * a3), 0);
        Form { a: a3 as i64, b: b3 as i64, c: c3 as i64 }.reduce()
    }

    pub fn pow(&self, mut k: u64) -> Form {
        let mut acc = Form::principal(self.disc());
        let mut base = self.reduce();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            k >>= 1;
        }
        acc
    }

    /// Values a·x² + b·xy + c·y² at (x, y).
    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }
}

/// Every reduced primitive form of discriminant d < 0, sorted.
pub fn reduced_forms(d: i64) -> Vec<Form> {
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * (a as i128) * (a as i128) <= -(d as i128) {
        for b in -a..=a {
            if let Some(f) = Form::from_ab(a, b, d) {
                if f.is_reduced() && f.is_primitive() {
                    out.push(f);
                }
            }
        }
        a += 1;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_composition_d15() {
        let f = Form::new(2, 1, 2);
        assert_eq!(f.compose(&f), Form::new(1, 1, 4));
        assert_eq!(f.conj().reduce(), f);
        assert_eq!(reduced_forms(-15), vec![Form::new(1, 1, 4), Form::new(2, 1, 2)]);
        assert_eq!(reduced_forms(-16), vec![Form::new(1, 0, 4)]);
        assert_eq!(reduced_forms(-4).len(), 1);
    }

    #[test]
    fn reduce_preserves_disc() {
        let f = Form::new(7, 23, 19);
        let r = f.reduce();
        assert_eq!(r.disc(), f.disc());
        assert!(r.is_reduced());
    }

    #[test]
    fn inverse_is_conjugate() {
        for d in [-23i64, -47, -71, -84, -260] {
            for f in reduced_forms(d) {
                assert_eq!(f.compose(&f.conj()), Form::principal(d));
            }
        }
    }
}
