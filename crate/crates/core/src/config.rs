use serde::{Deserialize, Serialize};

/// Size caps shared by every exhaustive computation in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Largest field order that may be built or enumerated.
    pub field_order: u64,
    /// Largest extension degree over the curve's base field.
    pub extension_degree: u32,
    /// Largest |D| for class-group enumeration.
    pub discriminant: u64,
    /// Largest finite group (subgroup lattices, point sets) held in memory.
    pub group_elements: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            field_order: 1_000_000,
            extension_degree: 24,
            discriminant: 1_000_000,
            group_elements: 1 << 21,
        }
    }
}

impl Bounds {
    pub fn with_field_order(mut self, cap: u64) -> Self {
        self.field_order = cap;
        self
    }
}
