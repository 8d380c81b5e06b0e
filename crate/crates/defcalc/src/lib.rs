//! Exact-arithmetic engine for the deformation theory of augmented
//! differential graded Lie pairs: pro-representing deformation rings,
//! cohomology jump ideals, weight-homogeneity verification and rank-one
//! resonance ideals.

pub mod artin;
pub mod cone;
pub mod defring;
pub mod exactalg;
pub mod homalg;
pub mod linf;
pub mod model;
pub mod poly;
pub mod resonance;

pub use exactalg::{Mat, Rat, Space};
