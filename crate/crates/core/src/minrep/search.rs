use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Method, Objective, ReducedRep};
use crate::complex::{is_cycle, Chain1, Complex2};
use crate::error::{Error, Result};
use crate::gf2::BitVec;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieRule {
    /// Among equally good moves take the lowest face index.
    #[default]
    LowestFace,
    /// Take the move whose result has the lexicographically smallest support.
    LexSmallest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DescentParams {
    pub max_iters: usize,
    pub tie_rule: TieRule,
}

impl Default for DescentParams {
    fn default() -> Self {
        Self {
            max_iters: 1_000_000,
            tie_rule: TieRule::LowestFace,
        }
    }
}

/// Temperatures are multiples of the mean positive edge weight.
#[derive(Clone, Debug, PartialEq)]
pub enum Schedule {
    Geometric { t0: f64, alpha: f64, levels: usize },
    Explicit(Vec<f64>),
}

impl Schedule {
    pub fn temperatures(&self) -> Vec<f64> {
        match self {
            Schedule::Geometric { t0, alpha, levels } => {
                (0..*levels).map(|i| t0 * alpha.powi(i as i32)).collect()
            }
            Schedule::Explicit(ts) => ts.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnnealParams {
    pub seed: u64,
    pub schedule: Schedule,
    pub moves_per_temp: usize,
}

impl Default for AnnealParams {
    fn default() -> Self {
        Self {
            seed: 0,
            schedule: Schedule::Geometric {
                t0: 2.0,
                alpha: 0.85,
                levels: 30,
            },
            moves_per_temp: 200,
        }
    }
}

fn check_input(k: &Complex2, c: &Chain1, obj: &Objective) -> Result<()> {
    obj.check(k)?;
    if !is_cycle(k, c)? {
        return Err(Error::NotACycle);
    }
    Ok(())
}

fn apply_face(k: &Complex2, bits: &mut BitVec, f: usize) {
    for &e in k.face_boundary(f) {
        bits.flip(e);
    }
}

/// Steepest descent over single-face moves. Returns whether a fixpoint was
/// reached within `max_iters` moves.
fn descend(
    k: &Complex2,
    bits: &mut BitVec,
    obj: &Objective,
    params: &DescentParams,
    moves: &mut Vec<usize>,
) -> bool {
    let tol = obj.tolerance();
    for _ in 0..params.max_iters {
        let deltas: Vec<f64> = (0..k.n_faces()).map(|f| obj.face_delta(k, bits, f)).collect();
        let Some(min) = deltas.iter().copied().reduce(f64::min) else {
            return true;
        };
        if min >= -tol {
            return true;
        }
        let mut tied = (0..k.n_faces()).filter(|&f| deltas[f] <= min + tol);
        let f = match params.tie_rule {
            TieRule::LowestFace => tied.next().expect("minimum is attained"),
            TieRule::LexSmallest => {
                let mut best: Option<(usize, BitVec)> = None;
                for f in tied {
                    let mut next = bits.clone();
                    apply_face(k, &mut next, f);
                    if best.as_ref().map_or(true, |(_, b)| next.lex_cmp(b) == Ordering::Less) {
                        best = Some((f, next));
                    }
                }
                best.expect("minimum is attained").0
            }
        };
        apply_face(k, bits, f);
        moves.push(f);
    }
    (0..k.n_faces()).all(|f| obj.face_delta(k, bits, f) >= -tol)
}

pub fn local_search_reduce(k: &Complex2, c: &Chain1, params: &DescentParams) -> Result<ReducedRep> {
    local_search_reduce_by(k, c, &Objective::length(k), params)
}

pub fn local_search_reduce_by(
    k: &Complex2,
    c: &Chain1,
    obj: &Objective,
    params: &DescentParams,
) -> Result<ReducedRep> {
    check_input(k, c, obj)?;
    let mut bits = c.bits().clone();
    let mut moves = Vec::new();
    let converged = descend(k, &mut bits, obj, params, &mut moves);
    if !converged {
        log::warn!("descent stopped after {} moves without reaching a fixpoint", params.max_iters);
    }
    Ok(ReducedRep::build(k, Chain1::from_bits(bits), obj, Method::Descent, moves, converged))
}

pub fn anneal_reduce(k: &Complex2, c: &Chain1, params: &AnnealParams) -> Result<ReducedRep> {
    anneal_reduce_by(k, c, &Objective::length(k), params)
}

/// Metropolis search over single-face moves, finished by steepest descent
/// from the best state seen. Levels with temperature ≤ 0 run plain descent.
pub fn anneal_reduce_by(k: &Complex2, c: &Chain1, obj: &Objective, params: &AnnealParams) -> Result<ReducedRep> {
    check_input(k, c, obj)?;
    let tol = obj.tolerance();
    let positive: Vec<f64> = obj.weights().iter().copied().filter(|&w| w > 0.0).collect();
    let scale = if positive.is_empty() {
        1.0
    } else {
        positive.iter().sum::<f64>() / positive.len() as f64
    };
    let active: Vec<usize> = (0..k.n_faces()).filter(|&f| !k.face_boundary(f).is_empty()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let descent = DescentParams::default();

    let mut cur = c.bits().clone();
    let mut val = obj.bits_value(&cur);
    let mut best = cur.clone();
    let mut best_val = val;
    let mut moves = Vec::new();
    let mut best_moves = 0;
    let mut converged = true;

    let consider = |cur: &BitVec, val: f64, n_moves: usize, best: &mut BitVec, best_val: &mut f64, best_moves: &mut usize| {
        if val < *best_val - tol || (val <= *best_val + tol && cur.lex_cmp(best) == Ordering::Less) {
            best.clone_from(cur);
            *best_val = val;
            *best_moves = n_moves;
        }
    };

    for t in params.schedule.temperatures() {
        if t <= 0.0 {
            converged &= descend(k, &mut cur, obj, &descent, &mut moves);
            val = obj.bits_value(&cur);
            consider(&cur, val, moves.len(), &mut best, &mut best_val, &mut best_moves);
            continue;
        }
        if active.is_empty() {
            continue;
        }
        let temp = t * scale;
        for _ in 0..params.moves_per_temp {
            let f = active[rng.gen_range(0..active.len())];
            let d = obj.face_delta(k, &cur, f);
            if d <= tol || rng.gen::<f64>() < (-d / temp).exp() {
                apply_face(k, &mut cur, f);
                val += d;
                moves.push(f);
                consider(&cur, val, moves.len(), &mut best, &mut best_val, &mut best_moves);
            }
        }
    }
    moves.truncate(best_moves);
    converged &= descend(k, &mut best, obj, &descent, &mut moves);
    Ok(ReducedRep::build(k, Chain1::from_bits(best), obj, Method::Anneal, moves, converged))
}
