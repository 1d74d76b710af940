use serde::Serialize;

use super::form::Form;
use super::lattice::Lattice;
use super::order::QuadOrder;
use crate::error::{Error, Result};

/// Invertible ideal of an imaginary quadratic order, as a primitive form
/// (a, b, c) of the order's discriminant. Its Z-basis is
/// {a, (−b + √D)/2} = {a, (−b − f·d_K)/2 + f·ω}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuadIdeal {
    pub owner: QuadOrder,
    pub form: Form,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdealOp {
    Compose,
    Invert,
    Conjugate,
    Reduce,
}

impl QuadIdeal {
    pub fn new(owner: QuadOrder, form: Form) -> Result<Self> {
        if form.disc() != owner.disc() {
            return Err(Error::InvalidInput(format!(
                "form {form:?} has discriminant {}, order has {}",
                form.disc(),
                owner.disc()
            )));
        }
        if form.a <= 0 {
            return Err(Error::InvalidInput("ideal norm must be positive".into()));
        }
        if !form.is_primitive() {
            return Err(Error::NonInvertible(form.a, form.b, form.c));
        }
        Ok(QuadIdeal { owner, form })
    }

    pub fn principal(owner: QuadOrder) -> Self {
        QuadIdeal { owner, form: Form::principal(owner.disc()) }
    }

    pub fn norm(&self) -> u64 {
        self.form.a as u64
    }

    pub fn zbasis(&self) -> Lattice {
        let f = self.owner.conductor() as i128;
        let b0 = (-(self.form.b as i128) - f * self.owner.fundamental_disc() as i128) / 2;
        Lattice::new(self.owner.fundamental_disc(), &[[self.form.a as i128, 0], [b0, f]], 1)
            .expect("ideal lattice has full rank")
    }

    /// The ideal class of an invertible lattice, with owner its multiplier ring.
    pub fn from_lattice(l: &Lattice) -> Result<Self> {
        let owner = l.multiplier_ring()?;
        let g = owner.conductor() as i128;
        let (a, b, c, _den) = l.canonical();
        if (g * a) % c != 0 || (g * b) % c != 0 {
            return Err(Error::CrossCheckMismatch(format!("lattice {l:?} is not an ideal of its multiplier ring")));
        }
        let fa = g * a / c;
        let fb = -2 * (g * b / c) - g * owner.fundamental_disc() as i128;
        let form = Form::from_ab(fa as i64, fb as i64, owner.disc())
            .ok_or_else(|| Error::CrossCheckMismatch(format!("lattice {l:?} does not give a form")))?;
        QuadIdeal::new(owner, form.reduce())
    }

    pub fn compose(&self, o: &QuadIdeal) -> Result<QuadIdeal> {
        if self.owner != o.owner {
            return Err(Error::OwnerMismatch);
        }
        Ok(QuadIdeal { owner: self.owner, form: self.form.compose(&o.form) })
    }

    pub fn conjugate(&self) -> QuadIdeal {
        QuadIdeal { owner: self.owner, form: self.form.conj() }
    }

    pub fn invert(&self) -> QuadIdeal {
        self.conjugate()
    }

    pub fn reduce(&self) -> QuadIdeal {
        QuadIdeal { owner: self.owner, form: self.form.reduce() }
    }

    pub fn is_principal(&self) -> bool {
        self.form.reduce() == Form::principal(self.owner.disc())
    }
}

/// Dispatches one of the four ideal operations; `Compose` needs the second operand.
pub fn ideal_arith(i: &QuadIdeal, j: Option<&QuadIdeal>, op: IdealOp) -> Result<QuadIdeal> {
    for x in std::iter::once(i).chain(j) {
        if !x.form.is_primitive() {
            return Err(Error::NonInvertible(x.form.a, x.form.b, x.form.c));
        }
    }
    match op {
        IdealOp::Compose => {
            let j = j.ok_or_else(|| Error::InvalidInput("composition needs two ideals".into()))?;
            i.compose(j)
        }
        IdealOp::Invert => Ok(i.invert()),
        IdealOp::Conjugate => Ok(i.conjugate()),
        IdealOp::Reduce => Ok(i.reduce()),
    }
}
