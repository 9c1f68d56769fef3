//! Test spaces: fixture complexes, covers, towers and injectivity profiles.

mod cover;
mod generators;
mod injrad;
mod tower;

pub use cover::{gen_cover, Cover, Perm, PermRep};
pub use generators::{
    cone_over, csaszar_torus, gen_cycle, gen_path, gen_product_complex, gen_surface, gen_wedge, klein_bottle,
    random_complex, RandomComplexParams,
};
pub use injrad::{bs_statistics, injectivity_profile, injectivity_radii, BsStatistics, DEFAULT_NODE_BUDGET};
pub use tower::{product_tower, wedge_tower, TowerLevel, TowerSpec, TOWER_HEADER};
