//! Imaginary quadratic orders, lattices in K, binary quadratic forms and class groups.

pub mod classgroup;
pub mod form;
pub mod ideal;
pub mod lattice;
pub mod order;

pub use classgroup::{class_group, ClassGroup};
pub use form::{reduced_forms, Form};
pub use ideal::{ideal_arith, IdealOp, QuadIdeal};
pub use lattice::{KElem, Lattice};
pub use order::QuadOrder;

use crate::error::Result;

/// (L1 : L2) = {x ∈ K : x·L2 ⊆ L1}.
pub fn colon_lattice(l1: &Lattice, l2: &Lattice) -> Result<Lattice> {
    l1.colon(l2)
}

pub fn multiplier_ring(l: &Lattice) -> Result<QuadOrder> {
    l.multiplier_ring()
}
