//! Mod-2 homology: Betti numbers, a deterministic basis of H₁, class
//! membership and class coordinates.

use crate::complex::{boundary1, is_cycle, Chain1, Complex2};
use crate::error::{Error, Result};
use crate::gf2::{BitVec, Echelon, F2Solver};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Betti {
    pub b0: usize,
    pub b1: usize,
    pub b2: usize,
}

impl Betti {
    pub fn euler(&self) -> i64 {
        self.b0 as i64 - self.b1 as i64 + self.b2 as i64
    }
}

/// Echelon basis of im ∂₂ together with the faces whose boundaries span it,
/// chosen greedily in face order.
fn boundary_echelon(k: &Complex2) -> (Echelon, Vec<usize>) {
    let mut ech = Echelon::new(k.n_edges(), None);
    let mut faces = Vec::new();
    for f in 0..k.n_faces() {
        let v = BitVec::from_indices(k.n_edges(), k.face_boundary(f).iter().copied());
        if ech.insert(v, None) {
            faces.push(f);
        }
    }
    (ech, faces)
}

pub fn betti(k: &Complex2) -> Betti {
    let forest = k.spanning_forest();
    let b0 = forest.n_components();
    let (ech, _) = boundary_echelon(k);
    let rank2 = ech.rank();
    let kernel1 = k.n_edges() + b0 - k.n_vertices();
    Betti {
        b0,
        b1: kernel1 - rank2,
        b2: k.n_faces() - rank2,
    }
}

/// A basis of H₁(K; F₂) and the data needed to work with classes.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    n_vertices: usize,
    n_edges: usize,
    /// Fundamental cycles of the spanning forest; a basis of ker ∂₁.
    pub cycle_basis: Vec<Chain1>,
    /// rank ∂₂.
    pub boundary_rank: usize,
    /// Cycles whose classes form a basis of H₁.
    pub class_reps: Vec<Chain1>,
    /// Faces whose boundaries form a basis of im ∂₂.
    pub boundary_faces: Vec<usize>,
    betti: Betti,
    boundaries: Echelon,
    coords: Echelon,
}

/// Builds the basis. Class representatives are the fundamental cycles that
/// are independent modulo boundaries, scanned in edge order.
pub fn homology_basis(k: &Complex2) -> HomologyBasis {
    let forest = k.spanning_forest();
    let b0 = forest.n_components();
    let (boundaries, boundary_faces) = boundary_echelon(k);
    let rank2 = boundaries.rank();
    let kernel1 = k.n_edges() + b0 - k.n_vertices();
    let b1 = kernel1 - rank2;

    let mut cycle_basis = Vec::with_capacity(kernel1);
    for e in forest.complement_edges() {
        let edge = k.edge(e);
        let mut edges = forest.tree_path(k, edge.u, edge.v);
        edges.push(e);
        cycle_basis.push(Chain1::from_edges(k.n_edges(), edges).expect("edges in range"));
    }
    debug_assert_eq!(cycle_basis.len(), kernel1);

    let mut coords = Echelon::new(k.n_edges(), Some(b1));
    for &f in &boundary_faces {
        let v = BitVec::from_indices(k.n_edges(), k.face_boundary(f).iter().copied());
        coords.insert(v, Some(BitVec::zeros(b1)));
    }
    let mut class_reps = Vec::with_capacity(b1);
    for z in &cycle_basis {
        if class_reps.len() == b1 {
            break;
        }
        let j = class_reps.len();
        if coords.insert(z.bits().clone(), Some(BitVec::unit(b1, j))) {
            class_reps.push(z.clone());
        }
    }
    debug_assert_eq!(class_reps.len(), b1);

    HomologyBasis {
        n_vertices: k.n_vertices(),
        n_edges: k.n_edges(),
        cycle_basis,
        boundary_rank: rank2,
        class_reps,
        boundary_faces,
        betti: Betti {
            b0,
            b1,
            b2: k.n_faces() - rank2,
        },
        boundaries,
        coords,
    }
}

impl HomologyBasis {
    pub fn betti(&self) -> Betti {
        self.betti
    }

    pub fn b1(&self) -> usize {
        self.betti.b1
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    fn check(&self, k: &Complex2, c: &Chain1) -> Result<()> {
        if k.n_edges() != self.n_edges || k.n_vertices() != self.n_vertices {
            return Err(Error::DimensionMismatch {
                expected: self.n_edges,
                found: k.n_edges(),
            });
        }
        if c.n_edges() != self.n_edges {
            return Err(Error::DimensionMismatch {
                expected: self.n_edges,
                found: c.n_edges(),
            });
        }
        if !is_cycle(k, c)? {
            return Err(Error::NotACycle);
        }
        Ok(())
    }

    /// Whether the chain lies in im ∂₂.
    pub fn is_boundary(&self, c: &Chain1) -> bool {
        self.boundaries.contains(c.bits())
    }

    pub fn same_class(&self, k: &Complex2, c1: &Chain1, c2: &Chain1) -> Result<bool> {
        self.check(k, c1)?;
        self.check(k, c2)?;
        Ok(self.is_boundary(&(c1 + c2)))
    }

    /// Coordinates of [c] in the basis given by `class_reps`.
    pub fn class_coordinates(&self, k: &Complex2, c: &Chain1) -> Result<BitVec> {
        self.check(k, c)?;
        let (residual, combo) = self.coords.reduce(c.bits());
        if !residual.is_zero() {
            // ker ∂₁ is spanned by boundaries and class reps, so this only
            // happens for chains that are not cycles.
            return Err(Error::NotACycle);
        }
        Ok(combo.expect("coordinate echelon tracks classes"))
    }

    /// Σ coordᵢ · class_repᵢ.
    pub fn class_representative(&self, coords: &BitVec) -> Result<Chain1> {
        if coords.len() != self.b1() {
            return Err(Error::DimensionMismatch {
                expected: self.b1(),
                found: coords.len(),
            });
        }
        let mut c = Chain1::zero(self.n_edges);
        for i in coords.ones() {
            c += &self.class_reps[i];
        }
        Ok(c)
    }
}

/// Class equality solved against the ∂₂ matrix from scratch.
pub fn same_class(k: &Complex2, c1: &Chain1, c2: &Chain1) -> Result<bool> {
    for c in [c1, c2] {
        if !boundary1(k, c)?.is_zero() {
            return Err(Error::NotACycle);
        }
    }
    let solver = F2Solver::new(&k.boundary2_matrix());
    Ok(solver.solve((c1 + c2).bits())?.is_some())
}

pub fn class_coordinates(k: &Complex2, basis: &HomologyBasis, c: &Chain1) -> Result<BitVec> {
    basis.class_coordinates(k, c)
}
