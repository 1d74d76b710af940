//! Endomorphism conductors, the equivalence decision, image counts and the scan
//! for maximal curves over F_{p²}.

pub mod conductor;
pub mod image;
pub mod maximal;
pub mod verdict;

pub use conductor::{end_conductor, ConductorReport, EndConductor, ScalarTest};
pub use image::{describe_image, ImageReport, ImageRow};
pub use maximal::{maximal_scan, ClassSummary, ExtremalCurve, ProductCheck, ScanOptions, ScanReport, TorsionCheck};
pub use verdict::{classify, curve_id, decide_equivalence, Case, EquivalenceVerdict, Evidence, Reduction, Verdict};
