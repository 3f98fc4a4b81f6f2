//! Blowup analysis and certified solution enclosures for linear ODEs with
//! constant coefficients.
//!
//! A scalar ODE `sum a_i y^(i) = sum b_k u^(k)` on `[0, 1]` has a
//! polynomial-time solution for every polynomial-time input exactly when
//! its left characteristic polynomial divides the right one. This crate
//! decides that criterion exactly over the Gaussian rationals, synthesizes
//! the trivial solution `Q(d/dt) u` when it holds, and otherwise evaluates
//! solutions with guaranteed `2^-n` enclosures: the integrating-factor
//! formula for first order, a root-deflation cascade for higher order, and
//! the matrix-exponential formula for first-order systems.
//!
//! Module map:
//!
//! - [`arith`]: dyadics, complex boxes, Gaussian rationals, `exp`, `mat_exp`
//! - [`poly`]: exact polynomials, divisibility, synthetic division, certified roots
//! - [`signal`]: input expressions, symbolic derivatives, exp-polynomials, oracles
//! - [`model`]: scalar ODEs, systems, the LIF builder
//! - [`analyzer`]: blowup verdicts and trivial-solution synthesis
//! - [`solver`]: enclosure solvers and rigorous quadrature
//! - [`lif`]: leaky integrate-and-fire simulation and spike detection
//! - [`profiler`]: work-vs-precision sweeps and growth fits
//! - [`specfile`], [`cli`]: the `.ode` file format and the command-line front end

pub mod analyzer;
pub mod arith;
pub mod cli;
pub mod lif;
pub mod model;
pub mod poly;
pub mod profiler;
pub mod signal;
pub mod solver;
pub mod specfile;
pub mod work;

pub use arith::{CMatrix, ComplexBox, Dyadic, GaussianRational, Interval, MatrixBox};
pub use poly::{Poly, RootEnclosures};
