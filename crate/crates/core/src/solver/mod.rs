//! Guaranteed-accuracy solution values for scalar ODEs and first-order
//! systems: an exact exp-polynomial backend and a rigorous quadrature
//! backend sharing one root-deflation cascade.

pub mod closed;
mod quadrature;
mod scalar;
mod system;

pub use quadrature::{rigorous_integral, SmoothnessBound};
pub use scalar::{deflation_chain, solve_cascade, solve_cascade_with, solve_first_order, DeflationStep};
pub use system::{solve_system, solve_system_with};

use crate::arith::{ComplexBox, Dyadic};
use crate::signal::SignalError;
use crate::work::WorkCounters;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("t must lie in [0, 1] and bits must be at least 1")]
    InvalidQuery,
    #[error("quadrature needs {needed} nodes, above the cap of {cap}")]
    QuadratureBudgetExceeded { needed: u64, cap: u64 },
    #[error("input derivative of order {needed} is unavailable (highest is {available})")]
    DerivativeOrderUnavailable { needed: usize, available: usize },
    #[error("no derivative bound is available for the integrand")]
    MissingSmoothnessBound,
    #[error("characteristic roots could not be separated to the required tightness")]
    RootUncertifiable,
    #[error("leading matrix A_1 is singular")]
    Singular,
    #[error("this solver handles order {supported} only, found {found}")]
    UnsupportedOrder { supported: usize, found: usize },
    #[error("input is not an exp-polynomial; the closed-form backend does not apply")]
    NotExpPolynomial,
    #[error("{expected} input signals expected, found {found}")]
    InputCount { expected: usize, found: usize },
    #[error("enclosure of a real problem excludes the real axis")]
    NotReal,
    #[error(transparent)]
    Signal(#[from] SignalError),
}

/// Evaluation point and requested accuracy: the result has width at most
/// `2^-bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionQuery {
    t: Dyadic,
    bits: u32,
}

impl SolutionQuery {
    pub fn new(t: Dyadic, bits: u32) -> Result<Self, SolveError> {
        if t.is_negative() || t > Dyadic::one() || bits == 0 {
            return Err(SolveError::InvalidQuery);
        }
        Ok(SolutionQuery { t, bits })
    }

    pub fn t(&self) -> &Dyadic {
        &self.t
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    ClosedForm,
    Quadrature,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::ClosedForm => "closed-form",
            Backend::Quadrature => "quadrature",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SolutionResult {
    pub value: Vec<ComplexBox>,
    pub work: WorkCounters,
    pub backend: Backend,
}

impl SolutionResult {
    /// First component; the whole value for scalar problems.
    pub fn scalar(&self) -> &ComplexBox {
        &self.value[0]
    }
}

pub const DEFAULT_MAX_NODES: u64 = 1 << 22;

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Force a backend; `None` picks closed form whenever it applies.
    pub backend: Option<Backend>,
    pub max_nodes: u64,
    /// Deflation order as a permutation of the expanded root list.
    pub root_order: Option<Vec<usize>>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            backend: None,
            max_nodes: DEFAULT_MAX_NODES,
            root_order: None,
        }
    }
}

/// Replace the imaginary part by zero after checking it contains zero.
fn realify(v: ComplexBox) -> Result<ComplexBox, SolveError> {
    if !v.im().contains_zero() {
        return Err(SolveError::NotReal);
    }
    Ok(ComplexBox::real_interval(v.re().clone()))
}
