//! Finite fields, elliptic curves, point counts and torsion.

pub mod curve;
pub mod field;
pub(crate) mod poly;
pub mod torsion;

pub use curve::{extension_count, point_count, power_traces, CurvePoint, EllipticCurve, PointCount};
pub use field::{Embedding, FiniteField, Fq};
pub use torsion::{group_structure, primary_part, torsion_basis, GroupStructure, PrimaryGroup, TorsionLattice};
