//! Mod-2 homology of weighted 2-complexes, short representative cycles,
//! nerve approximations and towers of finite covers.

pub mod complex;
pub mod error;
pub mod format;
pub mod gf2;
pub mod homology;
pub mod minrep;
pub mod nerve;
pub mod spaces;

pub use complex::{boundary1, boundary2, chain_length, is_cycle, Chain0, Chain1, Complex2, Edge, Step};
pub use error::{Error, Result};
pub use gf2::{f2_rank, f2_solve, BitMatrix, BitVec};
pub use homology::{betti, homology_basis, Betti, HomologyBasis};
