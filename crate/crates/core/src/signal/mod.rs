//! Input signals: closed-form expressions with symbolic derivatives, their
//! exp-polynomial canonical form, and precision-indexed oracles.

mod exppoly;
mod expr;
mod parse;

use std::fmt;
use std::sync::Arc;

pub use exppoly::{to_exp_polynomial, ExpPolynomial};
pub use expr::Expr;
pub use parse::parse_signal;

use crate::arith::{ComplexBox, Dyadic, Interval};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignalError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown function '{name}' at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("t = {t} lies outside [0, 1]")]
    Domain { t: String },
    #[error("derivative order {order} unavailable (oracle provides up to {max})")]
    OrderUnavailable { order: usize, max: usize },
}

type Approximant = dyn Fn(usize, &Dyadic, u32) -> ComplexBox + Send + Sync;

/// A signal given only through enclosures of its derivatives.
///
/// `approximant(j, t, m)` must contain `u^(j)(t)` with width at most `2^-m`,
/// and `sup_bounds[j]` must bound `|u^(j)|` on `[0, 1]`.
#[derive(Clone)]
pub struct OracleSignal {
    approximant: Arc<Approximant>,
    sup_bounds: Vec<Dyadic>,
}

impl OracleSignal {
    pub fn new(
        approximant: impl Fn(usize, &Dyadic, u32) -> ComplexBox + Send + Sync + 'static,
        sup_bounds: Vec<Dyadic>,
    ) -> Self {
        assert!(!sup_bounds.is_empty(), "at least the j = 0 bound is required");
        OracleSignal {
            approximant: Arc::new(approximant),
            sup_bounds,
        }
    }

    pub fn max_order(&self) -> usize {
        self.sup_bounds.len() - 1
    }

    pub fn sup_bounds(&self) -> &[Dyadic] {
        &self.sup_bounds
    }
}

impl fmt::Debug for OracleSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OracleSignal(max_order = {})", self.max_order())
    }
}

/// An input signal on `[0, 1]`.
#[derive(Clone, Debug)]
pub enum Signal {
    Expr(Expr),
    Oracle(OracleSignal),
}

impl From<Expr> for Signal {
    fn from(e: Expr) -> Self {
        Signal::Expr(e)
    }
}

impl From<OracleSignal> for Signal {
    fn from(o: OracleSignal) -> Self {
        Signal::Oracle(o)
    }
}

impl Signal {
    pub fn parse(text: &str) -> Result<Signal, SignalError> {
        parse_signal(text).map(Signal::Expr)
    }

    pub fn zero() -> Signal {
        Signal::Expr(Expr::int(0))
    }

    /// Highest available derivative order; `None` means unlimited.
    pub fn max_order(&self) -> Option<usize> {
        match self {
            Signal::Expr(_) => None,
            Signal::Oracle(o) => Some(o.max_order()),
        }
    }

    pub fn exp_polynomial(&self) -> Option<ExpPolynomial> {
        match self {
            Signal::Expr(e) => to_exp_polynomial(e),
            Signal::Oracle(_) => None,
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            Signal::Expr(e) => e.is_real(),
            Signal::Oracle(_) => false,
        }
    }

    /// Upper bound on `sup |u^(j)|` over `[0, 1]`.
    pub fn sup_bound(&self, j: usize) -> Result<Dyadic, SignalError> {
        match self {
            Signal::Expr(e) => Ok(expr_sup_bound(&e.nth_derivative(j), 64)),
            Signal::Oracle(o) => o.sup_bounds.get(j).cloned().ok_or(SignalError::OrderUnavailable {
                order: j,
                max: o.max_order(),
            }),
        }
    }

    /// The signal `s -> u(s + t0)`.
    pub fn shifted(&self, t0: &Dyadic) -> Signal {
        match self {
            Signal::Expr(e) => {
                let s = Expr::sum(Expr::t(), Expr::constant(crate::arith::GaussianRational::from_dyadic(t0)));
                Signal::Expr(e.substitute(&s))
            }
            Signal::Oracle(o) => {
                let inner = o.approximant.clone();
                let t0 = t0.clone();
                Signal::Oracle(OracleSignal {
                    approximant: Arc::new(move |j, t, m| inner(j, &(t + &t0), m)),
                    sup_bounds: o.sup_bounds.clone(),
                })
            }
        }
    }
}

/// Interval bound of `|e|` over `[0, 1]` split into `pieces` cells.
fn expr_sup_bound(e: &Expr, pieces: u32) -> Dyadic {
    let mut best = Dyadic::zero();
    let k = pieces.next_power_of_two().trailing_zeros() as i64;
    for c in 0..(1i64 << k) {
        let lo = Dyadic::from_i64(c).shl(-k);
        let hi = Dyadic::from_i64(c + 1).shl(-k);
        let v = e.eval_box(&ComplexBox::real_interval(Interval::new(lo, hi)), 64);
        best = Dyadic::max(&best, &v.mag().round_up(32));
    }
    best
}

/// Enclosure of `u^(j)(t)` with width at most `2^-bits`; results at
/// `bits + 2` or more lie inside the result at `bits`.
pub fn eval_enclosure(s: &Signal, j: usize, t: &Dyadic, bits: u32) -> Result<ComplexBox, SignalError> {
    if t.is_negative() || *t > Dyadic::one() {
        return Err(SignalError::Domain { t: t.to_string() });
    }
    match s {
        Signal::Expr(e) => Ok(eval_expr(&e.nth_derivative(j), t, bits)),
        Signal::Oracle(o) => {
            if j > o.max_order() {
                return Err(SignalError::OrderUnavailable { order: j, max: o.max_order() });
            }
            Ok((o.approximant)(j, t, bits + 2).publish(bits))
        }
    }
}

/// Published enclosure of an already-differentiated expression at `t`.
pub(crate) fn eval_expr(e: &Expr, t: &Dyadic, bits: u32) -> ComplexBox {
    let tb = ComplexBox::real(t.clone());
    let mut guard = 16;
    loop {
        let v = e.eval_box(&tb, bits + guard);
        if v.publishable(bits) || guard > 4096 {
            return v.publish(bits);
        }
        guard *= 2;
    }
}
