use serde::{Deserialize, Serialize};

/// Size caps shared by every algorithm. All fields have defaults, so a
/// partial JSON object deserializes cleanly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Limits {
    /// Largest group order stored as a multiplication table.
    pub group_order: usize,
    /// Largest group order for the table-based degree-1 cocycle solver.
    pub h1_order: usize,
    /// Largest group order for the degree-2 cocycle solver.
    pub h2_order: usize,
    /// Largest module dimension.
    pub module_dim: usize,
    /// Largest admissible prime.
    pub prime_max: u32,
    /// Largest number of subgroups a lattice enumeration may produce.
    pub lattice_size: usize,
    /// Largest relatively free subgroup built during variety membership tests.
    pub variety_product_bound: usize,
    /// Largest number of tuples visited by exhaustive oracles.
    pub enumeration_budget: u64,
    /// Largest group order for subquotient scans.
    pub subquotient_order: usize,
    /// Largest group order for exhaustive chain verification of heights.
    pub exhaustive_height_order: usize,
    /// Random algebra elements tried before the chop falls back to exhaustive spinning.
    pub chop_retries: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            group_order: 2048,
            h1_order: 1024,
            h2_order: 128,
            module_dim: 64,
            prime_max: 97,
            lattice_size: 200_000,
            variety_product_bound: 4096,
            enumeration_budget: 10_000_000,
            subquotient_order: 256,
            exhaustive_height_order: 64,
            chop_retries: 64,
        }
    }
}

impl Limits {
    pub fn check_order(&self, what: &'static str, order: usize, cap: usize) -> crate::Result<()> {
        if order > cap {
            Err(crate::Error::capacity(what, order, cap))
        } else {
            Ok(())
        }
    }
}
