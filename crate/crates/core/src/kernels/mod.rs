//! Kernel subgroups of E^r at primes ℓ ≠ p: the commutant, the module criterion,
//! a brute-force oracle and the Galois-image test.

pub mod brute;
pub mod commutant;
pub mod galois;
pub mod subgroup;

pub use brute::{brute_force_kernels, is_kernel_subgroup, kernel_subgroups, non_kernel_subgroups};
pub use commutant::{algebra_span, centralizer, commutant, span_log, Commutant, CommutantShape};
pub use galois::{galois_image_test, GaloisImage, Obstruction};
pub use subgroup::{block_diag, stable_subgroups, Subgroup, SubgroupData};
