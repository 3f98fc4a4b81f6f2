//! Exact polynomial and matrix-polynomial algebra, synthetic division and
//! certified roots.

mod matpoly;
#[allow(clippy::module_inception)]
mod poly;
mod roots;

pub use matpoly::MatPoly;
pub use poly::{BoxPoly, Poly};
pub use roots::{certified_roots, multiset_root_inclusion, Inclusion, RootEnclosures, RootItem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("polynomial has degree zero")]
    DegreeZeroInput,
}
