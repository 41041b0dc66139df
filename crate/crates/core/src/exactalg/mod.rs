//! Exact integer linear algebra and finitely presented abelian groups.

pub mod group;
pub mod lattice;
pub mod map;
pub mod matrix;
pub mod snf;
pub mod tower;

pub use group::{ext_group, group_from_presentation, hom_group, tensor_group, FpAbelianGroup, NormalizedSubquotient, Presentation};
pub use lattice::Lattice;
pub use map::{exactness_at, kernel_image_cokernel, pullback_group, Exactness, GroupMap, GroupPullback};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SnfDecomposition};
pub use tower::{mittag_leffler_diagnostic, tower_lim_lim1, GroupTower, Lim1Status, MittagLeffler};
