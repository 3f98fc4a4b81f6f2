//! Scalar equations of any order via the root-deflation cascade.

use super::closed::{cascade, BoxExpPoly, Rate};
use super::quadrature::{Plan, SmoothnessBound};
use super::{realify, Backend, SolutionQuery, SolutionResult, SolveError, SolverOptions};
use crate::arith::{ComplexBox, Dyadic, GaussianRational};
use crate::model::LinearODE;
use crate::poly::{certified_roots, BoxPoly, Poly, RootEnclosures, RootItem};
use crate::signal::{eval_enclosure, Expr, ExpPolynomial, Signal};
use crate::work;

/// Maximum number of precision doublings in the outer loops.
const MAX_LEVELS: u32 = 8;

/// The characteristic roots of a normalized equation, expanded by
/// multiplicity and arranged in deflation order.
struct Deflation {
    ode: LinearODE,
    items: Vec<RootItem>,
    /// Index into `items` for each root in deflation order.
    order: Vec<usize>,
}

impl Deflation {
    fn new(ode: &LinearODE, root_order: Option<&[usize]>) -> Result<Self, SolveError> {
        let ode = ode.normalize();
        let roots: RootEnclosures = certified_roots(&ode.char_polys().0, 32);
        if !roots.is_certified() {
            return Err(SolveError::RootUncertifiable);
        }
        let items = roots.items().to_vec();
        let expanded: Vec<usize> = items
            .iter()
            .enumerate()
            .flat_map(|(id, it)| std::iter::repeat_n(id, it.multiplicity() as usize))
            .collect();
        let order = match root_order {
            None => expanded,
            Some(perm) => {
                let mut seen = vec![false; expanded.len()];
                if perm.len() != expanded.len() || perm.iter().any(|&p| p >= seen.len() || std::mem::replace(&mut seen[p], true)) {
                    return Err(SolveError::InvalidQuery);
                }
                perm.iter().map(|&p| expanded[p]).collect()
            }
        };
        Ok(Deflation { ode, items, order })
    }

    fn rates(&self, prec: u32) -> Vec<Rate> {
        let refined: Vec<Rate> = self.items.iter().enumerate().map(|(id, it)| Rate::root(it, id, prec)).collect();
        self.order.iter().map(|&id| refined[id].clone()).collect()
    }

    fn ics(&self, prec: u32) -> Vec<ComplexBox> {
        self.ode.y0().iter().map(|c| c.to_box(prec)).collect()
    }

    /// Impulse response: zero data except `y^(m-1)(0) = 1`.
    fn impulse(&self, rates: &[Rate], prec: u32) -> Option<BoxExpPoly> {
        let m = rates.len();
        let mut ics = vec![ComplexBox::zero(); m];
        ics[m - 1] = ComplexBox::one();
        cascade(rates, &ics, &BoxExpPoly::zero(), prec).ok()
    }
}

/// Solve an order-(1, n) equation. Shares its code path with
/// [`solve_cascade`].
pub fn solve_first_order(ode: &LinearODE, u: &Signal, q: &SolutionQuery) -> Result<SolutionResult, SolveError> {
    let m = ode.order().0;
    if m != 1 {
        return Err(SolveError::UnsupportedOrder { supported: 1, found: m });
    }
    solve_cascade(ode, u, q)
}

pub fn solve_cascade(ode: &LinearODE, u: &Signal, q: &SolutionQuery) -> Result<SolutionResult, SolveError> {
    solve_cascade_with(ode, u, q, &SolverOptions::default())
}

pub fn solve_cascade_with(
    ode: &LinearODE,
    u: &Signal,
    q: &SolutionQuery,
    opts: &SolverOptions,
) -> Result<SolutionResult, SolveError> {
    let n = ode.order().1;
    if let Some(max) = u.max_order() {
        if max < n {
            return Err(SolveError::DerivativeOrderUnavailable { needed: n, available: max });
        }
    }
    let closed = match opts.backend {
        Some(Backend::Quadrature) => None,
        _ => u.exp_polynomial(),
    };
    if opts.backend == Some(Backend::ClosedForm) && closed.is_none() {
        return Err(SolveError::NotExpPolynomial);
    }
    let real = ode.is_real() && u.is_real();
    let (value, work) = work::measure(|| {
        let defl = Deflation::new(ode, opts.root_order.as_deref())?;
        match &closed {
            Some(e) => closed_value(&defl, e, q),
            None => quadrature_value(&defl, u, q, opts.max_nodes),
        }
    });
    let mut value = value?;
    if real {
        value = realify(value)?;
    }
    Ok(SolutionResult {
        value: vec![value],
        work,
        backend: if closed.is_some() { Backend::ClosedForm } else { Backend::Quadrature },
    })
}

/// `sum_k b_k u^(k)` for the normalized coefficients.
fn forcing_exp(ode: &LinearODE, u: &ExpPolynomial) -> ExpPolynomial {
    let mut f = ExpPolynomial::zero();
    let mut d = u.clone();
    for b in ode.b() {
        f = f.add(&d.scale(b));
        d = d.derivative();
    }
    f
}

fn closed_value(defl: &Deflation, u: &ExpPolynomial, q: &SolutionQuery) -> Result<ComplexBox, SolveError> {
    let f = forcing_exp(&defl.ode, u);
    let t = ComplexBox::real(q.t().clone());
    for level in 0..MAX_LEVELS {
        let prec = (q.bits() + 16) << level;
        let rates = defl.rates(prec);
        let Ok(y) = cascade(&rates, &defl.ics(prec), &BoxExpPoly::from_exact(&f, prec), prec) else {
            continue;
        };
        let v = y.eval_raw(&t, prec);
        if v.publishable(q.bits()) {
            return Ok(v.publish(q.bits()));
        }
    }
    Err(SolveError::RootUncertifiable)
}

/// Derivative bounds of `f = sum_k b_k u^(k)`: `sup |f^(j)|` for
/// `j = 0..=order`, or `None` when `u` lacks the required order.
fn forcing_bounds(ode: &LinearODE, u: &Signal, order: usize) -> Option<Vec<Dyadic>> {
    let mags: Vec<Dyadic> = ode.b().iter().map(|b| b.to_box(64).mag().round_up(32)).collect();
    (0..=order)
        .map(|j| {
            let mut s = Dyadic::zero();
            for (k, m) in mags.iter().enumerate() {
                if !m.is_zero() {
                    s = &s + &(m * &u.sup_bound(k + j).ok()?);
                }
            }
            Some(s)
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// `sum_l C(r, l) sup|G^(l)| sup|f^(r-l)|` bounds the `r`-th derivative of
/// `s -> G(t - s) f(s)`.
fn leibniz_bound(g: &BoxExpPoly, f: &[Dyadic], r: usize, prec: u32) -> Dyadic {
    let mut acc = Dyadic::zero();
    let mut gd = g.clone();
    for l in 0..=r {
        let term = &(&gd.sup_bound() * &f[r - l]) * &Dyadic::from_i64(binomial(r, l));
        acc = &acc + &term;
        gd = gd.derivative(prec);
    }
    acc
}

/// Box evaluator for `sum_k b_k u^(k)`.
enum Forcing<'a> {
    Expr(Expr),
    Oracle(&'a Signal, Vec<(usize, ComplexBox)>),
}

impl Forcing<'_> {
    fn new<'a>(ode: &LinearODE, u: &'a Signal) -> Forcing<'a> {
        match u {
            Signal::Expr(e) => {
                let mut f = Expr::int(0);
                let mut d = e.clone();
                for b in ode.b() {
                    if !b.is_zero() {
                        f = Expr::sum(f, Expr::prod(Expr::constant(b.clone()), d.clone()));
                    }
                    d = d.differentiate();
                }
                Forcing::Expr(f)
            }
            Signal::Oracle(_) => Forcing::Oracle(
                u,
                ode.b()
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| !b.is_zero())
                    .map(|(k, b)| (k, b.to_box(256)))
                    .collect(),
            ),
        }
    }

    fn eval(&self, s: &Dyadic, prec: u32) -> Result<ComplexBox, SolveError> {
        match self {
            Forcing::Expr(e) => Ok(e.eval_box(&ComplexBox::real(s.clone()), prec)),
            Forcing::Oracle(u, terms) => {
                let mut acc = ComplexBox::zero();
                for (k, b) in terms {
                    let v = eval_enclosure(u, *k, s, prec)?;
                    acc = (&acc + &(b * &v)).round(prec);
                }
                Ok(acc)
            }
        }
    }
}

/// `y(t) = H(t) + int_0^t G(t - s) f(s) ds` with `H` the homogeneous
/// solution and `G` the impulse response.
fn quadrature_value(defl: &Deflation, u: &Signal, q: &SolutionQuery, max_nodes: u64) -> Result<ComplexBox, SolveError> {
    let bits = q.bits();
    let t = q.t();
    let forcing = Forcing::new(&defl.ode, u);
    let m = defl.order.len();
    if m == 0 {
        let mut guard = 16;
        loop {
            let v = forcing.eval(t, bits + guard)?;
            if v.publishable(bits) || guard > 4096 {
                return Ok(v.publish(bits));
            }
            guard *= 2;
        }
    }

    let rates64 = defl.rates(64);
    let g64 = defl.impulse(&rates64, 64).ok_or(SolveError::RootUncertifiable)?;
    let n = defl.ode.order().1;
    let bound = match forcing_bounds(&defl.ode, u, 4) {
        Some(fb) => SmoothnessBound::fourth(leibniz_bound(&g64, &fb, 4, 64)),
        None => match forcing_bounds(&defl.ode, u, 1) {
            Some(fb) => SmoothnessBound::first(leibniz_bound(&g64, &fb, 1, 64)),
            None => {
                return Err(SolveError::DerivativeOrderUnavailable {
                    needed: n + 1,
                    available: u.max_order().unwrap_or(0),
                })
            }
        },
    };
    let plan = (!t.is_zero()).then(|| Plan::new(&bound, t, bits + 4, max_nodes)).transpose()?;
    let log_n = plan.as_ref().map_or(0, |p| 64 - p.nodes().leading_zeros());
    let tb = ComplexBox::real(t.clone());
    for level in 0..MAX_LEVELS {
        let prec = bits + 16 + log_n + (8 << level);
        let rates = defl.rates(prec);
        let (Ok(h), Some(g)) = (cascade(&rates, &defl.ics(prec), &BoxExpPoly::zero(), prec), defl.impulse(&rates, prec))
        else {
            continue;
        };
        let mut v = h.eval_raw(&tb, prec);
        if let Some(plan) = &plan {
            let integral = plan.integrate(1, prec, |_, s| {
                let kernel = g.eval_raw(&ComplexBox::real(t - s), prec);
                Ok(vec![(&kernel * &forcing.eval(s, prec)?).round(prec)])
            })?;
            v = &v + &integral[0];
        }
        if v.publishable(bits) {
            return Ok(v.publish(bits));
        }
    }
    Err(SolveError::RootUncertifiable)
}

/// One step of the deflation chain: the root `sigma` and the characteristic
/// polynomial after dividing out `X - sigma`.
#[derive(Clone, Debug)]
pub struct DeflationStep {
    pub sigma: ComplexBox,
    pub sigma_exact: Option<GaussianRational>,
    /// Exact when every root so far is a Gaussian rational.
    pub reduced_exact: Option<Poly>,
    pub reduced: BoxPoly,
}

/// Successive deflation of `P_y` by its roots in the default order.
pub fn deflation_chain(ode: &LinearODE, bits: u32) -> Result<Vec<DeflationStep>, SolveError> {
    let defl = Deflation::new(ode, None)?;
    let prec = bits + 32;
    let py = defl.ode.char_polys().0;
    let mut exact = Some(py.clone());
    let mut boxed = BoxPoly {
        coeffs: py.coeffs().iter().map(|c| c.to_box(prec)).collect(),
    };
    let mut steps = Vec::new();
    for &id in &defl.order {
        let item = defl.items[id].refine(bits);
        let sigma = item.enclosure().clone();
        exact = match (exact, item.exact()) {
            (Some(p), Some(z)) => p.reduce_at_root(z).ok().map(|(r, _)| r),
            _ => None,
        };
        boxed = match &exact {
            Some(p) => BoxPoly {
                coeffs: p.coeffs().iter().map(|c| c.to_box(prec)).collect(),
            },
            None => synthetic_division(&boxed, &sigma, prec),
        };
        steps.push(DeflationStep {
            sigma,
            sigma_exact: item.exact().cloned(),
            reduced_exact: exact.clone(),
            reduced: boxed.clone(),
        });
    }
    Ok(steps)
}

/// Quotient of `p` by `X - z`, remainder discarded.
fn synthetic_division(p: &BoxPoly, z: &ComplexBox, prec: u32) -> BoxPoly {
    let m = p.coeffs.len() - 1;
    let mut q = vec![ComplexBox::zero(); m];
    let mut carry = ComplexBox::zero();
    for i in (1..=m).rev() {
        carry = (&p.coeffs[i] + &(&carry * z)).round(prec);
        q[i - 1] = carry.clone();
    }
    BoxPoly { coeffs: q }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn query(t: f64, bits: u32) -> SolutionQuery {
        SolutionQuery::new(Dyadic::from_f64(t).unwrap(), bits).unwrap()
    }

    #[test]
    fn first_order_examples() {
        let ode = LinearODE::from_i64(&[1, 1], &[1], &[0]).unwrap();
        let u = Signal::parse("exp(-t)").unwrap();
        let r = solve_first_order(&ode, &u, &query(1.0, 30)).unwrap();
        assert_eq!(r.backend, Backend::ClosedForm);
        assert!(r.scalar().width_within(30));
        assert!((r.scalar().re().mid().to_f64() - (-1f64).exp()).abs() < 1e-9);

        let ode = LinearODE::from_i64(&[0, 1], &[1], &[0]).unwrap();
        let r = solve_first_order(&ode, &Signal::parse("1").unwrap(), &query(0.5, 20)).unwrap();
        assert!(r.scalar().contains_point(&Dyadic::pow2(-1), &Dyadic::zero()));
    }

    #[test]
    fn cascade_orders_agree() {
        let ode = LinearODE::from_i64(&[2, 3, 1], &[1], &[0, 0]).unwrap();
        let u = Signal::parse("1").unwrap();
        let q = query(1.0, 24);
        let a = solve_cascade_with(&ode, &u, &q, &SolverOptions { root_order: Some(vec![0, 1]), ..Default::default() }).unwrap();
        let b = solve_cascade_with(&ode, &u, &q, &SolverOptions { root_order: Some(vec![1, 0]), ..Default::default() }).unwrap();
        assert!(a.scalar().overlaps(b.scalar()));
        let expect = 0.5 - (-1f64).exp() + (-2f64).exp() / 2.0;
        assert!((a.scalar().re().mid().to_f64() - expect).abs() < 1e-7);
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let ode = LinearODE::from_i64(&[1, 1], &[1], &[0]).unwrap();
        let u = Signal::parse("exp(-t)").unwrap();
        let q = query(0.75, 16);
        let c = solve_cascade(&ode, &u, &q).unwrap();
        let n = solve_cascade_with(&ode, &u, &q, &SolverOptions { backend: Some(Backend::Quadrature), ..Default::default() }).unwrap();
        assert_eq!(n.backend, Backend::Quadrature);
        assert!(n.scalar().width_within(16));
        assert!(c.scalar().overlaps(n.scalar()));
        assert!(n.work.quadrature_nodes > 0);
    }

    #[test]
    fn complex_roots_real_result() {
        // y'' + y = 0, y(0) = 0, y'(0) = 1  =>  sin t
        let ode = LinearODE::from_i64(&[1, 0, 1], &[0], &[0, 1]).unwrap();
        let r = solve_cascade(&ode, &Signal::zero(), &query(1.0, 30)).unwrap();
        assert!(r.scalar().im().is_point());
        assert!((r.scalar().re().mid().to_f64() - 1f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn chain_for_distinct_integer_roots() {
        let ode = LinearODE::from_i64(&[2, 3, 1], &[1], &[0, 0]).unwrap();
        let chain = deflation_chain(&ode, 20).unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(chain[0].sigma_exact, Some(GaussianRational::from_i64(-2)));
        assert_eq!(chain[0].reduced_exact, Some(Poly::from_i64(&[1, 1])));
        assert_eq!(chain[1].reduced_exact, Some(Poly::one()));
    }
}
