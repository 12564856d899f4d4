//! Zhu algebra presentations.

pub mod algebra;
pub mod closure;
pub mod image;
pub mod ncpoly;

pub use algebra::{reduces_to_zero, IdealMembership, IdealSpan, Membership, ZhuAlgebra};
pub use closure::{
    collect_seeds, relation_closure, ClosureBounds, ClosureStatus, Explored, ExtraRelation, Seed, SeedSelection, ZhuDoc,
    ZhuPresentation,
};
pub use image::{circ, star, zhu_algebra, zhu_commutators, zhu_image, CommutatorRelation};
pub use ncpoly::{MonoKey, Monomial, NCPoly};
