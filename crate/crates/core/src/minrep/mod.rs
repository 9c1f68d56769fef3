//! Short representatives of homology classes: exact coset search, single-face
//! descent, annealing, and the R-length functionals built on them.

mod circuits;
mod cover;
mod exact;
mod normalized;
mod search;

use std::fmt;

use crate::complex::{chain_length, Chain1, Complex2, Step};
use crate::error::{Error, Result};
use crate::format::write_chain;
use crate::gf2::BitVec;

pub use circuits::{circuit_decompose, local_minimality_check};
pub use cover::{class_minima, ClassMinima};
pub use exact::{exact_min_by, exact_min_representative, DEFAULT_EXACT_CAP};
pub use normalized::{normalized_r_length, normalized_r_length_with, NormalizeOptions, NormalizedRLength};
pub use search::{
    anneal_reduce, anneal_reduce_by, local_search_reduce, local_search_reduce_by, AnnealParams,
    DescentParams, Schedule, TieRule,
};

/// Injectivity radii of every vertex together with a thick/thin threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricProfile {
    injrad: Vec<f64>,
    horizon: f64,
    r: f64,
    thick: Vec<bool>,
}

impl MetricProfile {
    /// Radii above `horizon` are clamped to it.
    pub fn new(injrad: Vec<f64>, horizon: f64, r: f64) -> Result<Self> {
        if !(horizon > 0.0) {
            return Err(Error::InvalidParameter(format!("horizon must be positive, got {horizon}")));
        }
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!("threshold R must be >= 0, got {r}")));
        }
        if let Some(x) = injrad.iter().find(|x| !(**x >= 0.0)) {
            return Err(Error::InvalidParameter(format!("negative injectivity radius {x}")));
        }
        let injrad: Vec<f64> = injrad.into_iter().map(|x| x.min(horizon)).collect();
        let thick = injrad.iter().map(|&x| x > r).collect();
        Ok(Self { injrad, horizon, r, thick })
    }

    /// Every vertex thick: radii at an infinite horizon, R = 0.
    pub fn all_thick(n_vertices: usize) -> Self {
        Self {
            injrad: vec![f64::INFINITY; n_vertices],
            horizon: f64::INFINITY,
            r: 0.0,
            thick: vec![true; n_vertices],
        }
    }

    pub fn with_threshold(&self, r: f64) -> Result<Self> {
        if self.horizon.is_infinite() {
            let mut p = self.clone();
            if !(r >= 0.0) || !r.is_finite() {
                return Err(Error::InvalidParameter(format!("threshold R must be >= 0, got {r}")));
            }
            p.r = r;
            p.thick = p.injrad.iter().map(|&x| x > r).collect();
            return Ok(p);
        }
        Self::new(self.injrad.clone(), self.horizon, r)
    }

    pub fn n_vertices(&self) -> usize {
        self.injrad.len()
    }

    pub fn injrad(&self) -> &[f64] {
        &self.injrad
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn is_thick(&self, v: usize) -> bool {
        self.thick[v]
    }

    pub fn thick_vertices(&self) -> Vec<usize> {
        (0..self.thick.len()).filter(|&v| self.thick[v]).collect()
    }

    pub fn check(&self, k: &Complex2) -> Result<()> {
        if k.n_vertices() != self.injrad.len() {
            return Err(Error::ProfileMismatch {
                expected: self.injrad.len(),
                found: k.n_vertices(),
            });
        }
        Ok(())
    }
}

/// Additive edge weights that a search minimizes.
#[derive(Clone, Debug, PartialEq)]
pub struct Objective {
    weights: Vec<f64>,
}

impl Objective {
    pub fn length(k: &Complex2) -> Self {
        Self {
            weights: k.edges().iter().map(|e| e.length).collect(),
        }
    }

    /// Edge length if both endpoints are thick, else 0.
    pub fn r_length(k: &Complex2, profile: &MetricProfile) -> Result<Self> {
        profile.check(k)?;
        Ok(Self {
            weights: k
                .edges()
                .iter()
                .map(|e| {
                    if profile.is_thick(e.u) && profile.is_thick(e.v) {
                        e.length
                    } else {
                        0.0
                    }
                })
                .collect(),
        })
    }

    pub fn from_weights(weights: Vec<f64>) -> Self {
        Self { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn value(&self, c: &Chain1) -> f64 {
        c.support().map(|e| self.weights[e]).sum()
    }

    fn bits_value(&self, bits: &BitVec) -> f64 {
        bits.ones().map(|e| self.weights[e]).sum()
    }

    /// Change in value when the boundary of face `f` is added.
    fn face_delta(&self, k: &Complex2, bits: &BitVec, f: usize) -> f64 {
        k.face_boundary(f)
            .iter()
            .map(|&e| if bits.get(e) { -self.weights[e] } else { self.weights[e] })
            .sum()
    }

    /// Tolerance for treating two values as equal.
    fn tolerance(&self) -> f64 {
        1e-9 * (1.0 + self.weights.iter().sum::<f64>())
    }

    fn check(&self, k: &Complex2) -> Result<()> {
        if self.weights.len() != k.n_edges() {
            return Err(Error::DimensionMismatch {
                expected: k.n_edges(),
                found: self.weights.len(),
            });
        }
        Ok(())
    }
}

pub fn r_length(k: &Complex2, c: &Chain1, profile: &MetricProfile) -> Result<f64> {
    if c.n_edges() != k.n_edges() {
        return Err(Error::DimensionMismatch {
            expected: k.n_edges(),
            found: c.n_edges(),
        });
    }
    Ok(Objective::r_length(k, profile)?.value(c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    Descent,
    Anneal,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Descent => "descent",
            Method::Anneal => "anneal",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReducedRep {
    pub cycle: Chain1,
    pub length: f64,
    /// R-length under the profile used, or the plain length when none was.
    pub r_length: f64,
    pub circuits: Vec<Vec<Step>>,
    /// No single face move lowers the minimized objective.
    pub certificate: bool,
    pub method: Method,
    /// Faces whose boundaries, added in order to the input, give `cycle`.
    pub moves: Vec<usize>,
    /// False when an iteration limit stopped the search early.
    pub converged: bool,
}

impl ReducedRep {
    fn build(k: &Complex2, cycle: Chain1, obj: &Objective, method: Method, moves: Vec<usize>, converged: bool) -> Self {
        let circuits = circuit_decompose(&cycle, k).expect("searches return cycles");
        let certificate = circuits::is_local_min(k, cycle.bits(), obj);
        Self {
            length: chain_length(k, &cycle),
            r_length: obj.value(&cycle),
            cycle,
            circuits,
            certificate,
            method,
            moves,
            converged,
        }
    }

    /// `rep <method> <length> <r_length> : chain <e...>`
    pub fn to_line(&self) -> String {
        format!(
            "rep {} {} {} : {}",
            self.method,
            self.length,
            self.r_length,
            write_chain(&self.cycle)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::gen_cycle;

    #[test]
    fn r_length_examples() {
        let c8 = gen_cycle(8, 1.0).unwrap();
        let full = Chain1::from_edges(8, 0..8).unwrap();
        let p = MetricProfile::new(vec![4.0; 8], 10.0, 3.0).unwrap();
        assert_eq!(r_length(&c8, &full, &p).unwrap(), 8.0);
        let p = MetricProfile::new(vec![4.0; 8], 10.0, 4.0).unwrap();
        assert_eq!(r_length(&c8, &full, &p).unwrap(), 0.0);
        let all = MetricProfile::all_thick(8);
        assert_eq!(r_length(&c8, &full, &all).unwrap(), 8.0);
        let wrong = MetricProfile::all_thick(3);
        assert!(matches!(r_length(&c8, &full, &wrong), Err(Error::ProfileMismatch { .. })));
    }

    #[test]
    fn thick_set_and_clamp() {
        let p = MetricProfile::new(vec![1.0, 5.0, 2.5], 3.0, 2.0).unwrap();
        assert_eq!(p.injrad(), &[1.0, 3.0, 2.5]);
        assert_eq!(p.thick_vertices(), vec![1, 2]);
        assert!(MetricProfile::new(vec![1.0], 0.0, 1.0).is_err());
        assert!(MetricProfile::new(vec![1.0], 1.0, -1.0).is_err());
    }

    #[test]
    fn rep_line() {
        let c5 = gen_cycle(5, 1.0).unwrap();
        let z = Chain1::from_edges(5, 0..5).unwrap();
        let rep = exact_min_representative(&c5, &crate::homology::homology_basis(&c5), &z).unwrap();
        assert_eq!(rep.to_line(), "rep exact 5 5 : chain 0 1 2 3 4");
    }
}
