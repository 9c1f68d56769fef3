//! The bound b1 ≤ log₂ Σ_{i≤m} C(E, i), where m is the largest support of a
//! minimal representative: distinct classes have distinct minimal
//! representatives, and there are at most that many chains of support ≤ m.

use num_bigint::BigUint;
use num_traits::One;
use reprlab_core::gf2::BitVec;
use reprlab_core::homology::HomologyBasis;
use reprlab_core::minrep::{class_minima, exact_min_representative, Objective, DEFAULT_EXACT_CAP};
use reprlab_core::{Complex2, Error, Result};

use crate::counting::log2_big;

pub fn partial_binomial_sum(n: u64, m: u64) -> BigUint {
    let mut sum = BigUint::one();
    let mut binom = BigUint::one();
    for i in 1..=m {
        binom = binom * (n - i + 1) / i;
        sum += &binom;
    }
    sum
}

pub fn dimension_bound(n_edges: u64, m_max: u64) -> Result<f64> {
    if m_max > n_edges {
        return Err(Error::InvalidParameter(format!(
            "support bound {m_max} exceeds the edge count {n_edges}"
        )));
    }
    Ok(log2_big(&partial_binomial_sum(n_edges, m_max)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DimensionCaps {
    /// Largest b1 for which all 2^b1 − 1 classes are minimized.
    pub max_b1: usize,
    pub exact_cap: usize,
    pub cover_work_limit: u64,
}

impl Default for DimensionCaps {
    fn default() -> Self {
        Self {
            max_b1: 12,
            exact_cap: DEFAULT_EXACT_CAP,
            cover_work_limit: 500_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DimensionCheck {
    Checked {
        b1: usize,
        /// Largest support over all nonzero classes.
        m: usize,
        bound: f64,
        /// bound − b1.
        margin: f64,
        holds: bool,
    },
    Skipped {
        reason: String,
    },
}

impl DimensionCheck {
    pub fn holds(&self) -> Option<bool> {
        match self {
            DimensionCheck::Checked { holds, .. } => Some(*holds),
            DimensionCheck::Skipped { .. } => None,
        }
    }
}

/// Minimizes every nonzero class exactly and checks b1 against the bound.
pub fn verify_dimension_bound(k: &Complex2, basis: &HomologyBasis, caps: &DimensionCaps) -> Result<DimensionCheck> {
    let b1 = basis.b1();
    if b1 > caps.max_b1 {
        return Ok(DimensionCheck::Skipped {
            reason: format!("b1 = {b1} exceeds the class cap {}", caps.max_b1),
        });
    }
    let classes = 1usize << b1;
    let mut m = 0;
    if basis.boundary_rank <= caps.exact_cap {
        for a in 1..classes {
            let coords = BitVec::from_indices(b1, (0..b1).filter(|&i| a >> i & 1 == 1));
            let z = basis.class_representative(&coords)?;
            m = m.max(exact_min_representative(k, basis, &z)?.cycle.weight());
        }
    } else if let Some(cm) = class_minima(k, basis, &Objective::length(k), caps.cover_work_limit)? {
        m = cm.reps[1..].iter().map(|c| c.weight()).max().unwrap_or(0);
    } else {
        return Ok(DimensionCheck::Skipped {
            reason: format!(
                "rank of the face boundaries is {} (cap {}) and the cover search is over budget",
                basis.boundary_rank, caps.exact_cap
            ),
        });
    }
    let bound = dimension_bound(k.n_edges() as u64, m as u64)?;
    Ok(DimensionCheck::Checked {
        b1,
        m,
        bound,
        margin: bound - b1 as f64,
        holds: b1 as f64 <= bound + 1e-12,
    })
}
