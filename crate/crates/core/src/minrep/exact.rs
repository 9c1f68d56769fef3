use std::cmp::Ordering;

use super::{Method, Objective, ReducedRep};
use crate::complex::{Chain1, Complex2};
use crate::error::{Error, Result};
use crate::homology::HomologyBasis;

pub const DEFAULT_EXACT_CAP: usize = 22;

/// Shortest chain in the class of `c`, by Gray-code enumeration of the span
/// of the basis boundaries.
pub fn exact_min_representative(k: &Complex2, basis: &HomologyBasis, c: &Chain1) -> Result<ReducedRep> {
    exact_min_by(k, basis, c, &Objective::length(k), DEFAULT_EXACT_CAP)
}

/// Minimizes `obj` over the coset `c + im ∂₂`. Ties within a relative
/// tolerance go to the lexicographically smallest support.
pub fn exact_min_by(
    k: &Complex2,
    basis: &HomologyBasis,
    c: &Chain1,
    obj: &Objective,
    cap: usize,
) -> Result<ReducedRep> {
    obj.check(k)?;
    if !crate::complex::is_cycle(k, c)? {
        return Err(Error::NotACycle);
    }
    let faces = &basis.boundary_faces;
    let rank = faces.len();
    if rank > cap || rank >= 63 {
        return Err(Error::CapExceeded { rank, cap });
    }
    let bounds: Vec<&[usize]> = faces.iter().map(|&f| k.face_boundary(f)).collect();
    let w = obj.weights();
    let tol = obj.tolerance();

    let mut cur = c.bits().clone();
    let mut val = obj.bits_value(&cur);
    let mut best = cur.clone();
    let mut best_val = val;
    let mut best_code = 0u64;
    for i in 1u64..(1u64 << rank) {
        let j = i.trailing_zeros() as usize;
        for &e in bounds[j] {
            if cur.get(e) {
                val -= w[e];
            } else {
                val += w[e];
            }
            cur.flip(e);
        }
        let better = if val < best_val - tol {
            true
        } else if val <= best_val + tol {
            cur.lex_cmp(&best) == Ordering::Less
        } else {
            false
        };
        if better {
            best.clone_from(&cur);
            best_val = best_val.min(val);
            best_code = i ^ (i >> 1);
        }
    }
    let moves: Vec<usize> = (0..rank).filter(|&j| best_code >> j & 1 == 1).map(|j| faces[j]).collect();
    Ok(ReducedRep::build(k, Chain1::from_bits(best), obj, Method::Exact, moves, true))
}
