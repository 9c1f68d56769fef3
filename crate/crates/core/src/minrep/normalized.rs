use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{anneal_reduce_by, class_minima, exact_min_by, AnnealParams, ClassMinima, MetricProfile, Objective};
use crate::complex::Complex2;
use crate::error::Result;
use crate::gf2::BitVec;
use crate::homology::HomologyBasis;

#[derive(Clone, Debug, PartialEq)]
pub struct NormalizeOptions {
    /// Enumerate every class when there are at most this many; otherwise
    /// evaluate the basis classes plus this many random ones.
    pub budget: usize,
    pub seed: u64,
    pub exact_cap: usize,
    pub cover_work_limit: u64,
    pub anneal: AnnealParams,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        Self {
            budget: 1024,
            seed: 0,
            exact_cap: super::DEFAULT_EXACT_CAP,
            cover_work_limit: 2_000_000_000,
            anneal: AnnealParams::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedRLength {
    pub value: f64,
    /// Every nonzero class was evaluated and minimized exactly.
    pub exact: bool,
    pub classes_evaluated: usize,
    /// Class attaining the supremum, if any class was evaluated.
    pub worst_class: Option<BitVec>,
    pub worst_r_length: f64,
}

pub fn normalized_r_length(
    k: &Complex2,
    basis: &HomologyBasis,
    profile: &MetricProfile,
    budget: usize,
) -> Result<NormalizedRLength> {
    normalized_r_length_with(
        k,
        basis,
        profile,
        &NormalizeOptions {
            budget,
            ..NormalizeOptions::default()
        },
    )
}

/// sup over classes of the minimal R-length, divided by the volume.
pub fn normalized_r_length_with(
    k: &Complex2,
    basis: &HomologyBasis,
    profile: &MetricProfile,
    opts: &NormalizeOptions,
) -> Result<NormalizedRLength> {
    let obj = Objective::r_length(k, profile)?;
    let b1 = basis.b1();
    if b1 == 0 {
        return Ok(NormalizedRLength {
            value: 0.0,
            exact: true,
            classes_evaluated: 0,
            worst_class: None,
            worst_r_length: 0.0,
        });
    }
    let enumerate_all = b1 < 63 && (1u64 << b1) <= opts.budget as u64;
    let classes: Vec<BitVec> = if enumerate_all {
        (1u64..1u64 << b1)
            .map(|a| BitVec::from_indices(b1, (0..b1).filter(|&i| a >> i & 1 == 1)))
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut cs: Vec<BitVec> = (0..b1).map(|i| BitVec::unit(b1, i)).collect();
        while cs.len() < b1 + opts.budget {
            let bits: Vec<bool> = (0..b1).map(|_| rng.gen()).collect();
            let v = BitVec::from_bools(&bits);
            if !v.is_zero() {
                cs.push(v);
            }
        }
        cs
    };

    let cover = if enumerate_all {
        class_minima(k, basis, &obj, opts.cover_work_limit)?
    } else {
        None
    };
    let minima: Vec<(f64, bool)> = match cover {
        Some(cm) => classes
            .iter()
            .map(|c| (cm.values[ClassMinima::class_index(c)], true))
            .collect(),
        None => classes
            .par_iter()
            .enumerate()
            .map(|(i, coords)| -> Result<(f64, bool)> {
                let z = basis.class_representative(coords)?;
                if basis.boundary_rank <= opts.exact_cap {
                    Ok((exact_min_by(k, basis, &z, &obj, opts.exact_cap)?.r_length, true))
                } else {
                    let params = AnnealParams {
                        seed: opts.seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
                        ..opts.anneal.clone()
                    };
                    Ok((anneal_reduce_by(k, &z, &obj, &params)?.r_length, false))
                }
            })
            .collect::<Result<_>>()?,
    };

    let mut worst = 0;
    for (i, m) in minima.iter().enumerate() {
        if m.0 > minima[worst].0 {
            worst = i;
        }
    }
    let all_exact = minima.iter().all(|m| m.1);
    let vol = k.volume();
    Ok(NormalizedRLength {
        value: if vol > 0.0 { minima[worst].0 / vol } else { 0.0 },
        exact: enumerate_all && all_exact,
        classes_evaluated: classes.len(),
        worst_class: Some(classes[worst].clone()),
        worst_r_length: minima[worst].0,
    })
}
