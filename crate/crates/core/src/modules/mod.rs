//! Torsion-free modules over imaginary quadratic orders and their normal forms.

pub mod lattice;
pub mod module;
pub mod normal_form;
pub mod oracle;

pub use lattice::ModLattice;
pub use module::{module_from_ideals, module_from_lattice, module_from_presentation, RModule};
pub use normal_form::{dual_module, enumerate_modules, is_isomorphic, normal_form, ModuleNF};
