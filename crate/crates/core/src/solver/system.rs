//! First-order systems `A_1 y' + A_0 y = sum_j B_j u^(j)`.
//!
//! With `M = A_1^{-1} A_0` and `C_j = A_1^{-1} B_j` the solution is
//! `e^{-Mt} y0 + int_0^t e^{-M(t-s)} sum_j C_j u^(j)(s) ds`. On the grid
//! `h = 2^-k` the kernel at node `i` is `K^{N-i}` with `K = e^{-Mh}`, so one
//! matrix exponential serves every node.

use super::quadrature::{Plan, Rule, SmoothnessBound};
use super::{realify, Backend, SolutionQuery, SolutionResult, SolveError, SolverOptions};
use crate::arith::{exp_box, mat_exp, CMatrix, ComplexBox, Dyadic, MatrixBox};
use crate::model::ODESystem;
use crate::signal::{eval_enclosure, Expr, Signal};
use crate::work;

const MAX_LEVELS: u32 = 8;

/// Row-sum norm of an exact matrix, rounded up.
fn norm_inf(m: &CMatrix) -> Dyadic {
    m.to_box(64).norm_inf().round_up(32)
}

pub fn solve_system(sys: &ODESystem, u: &[Signal], q: &SolutionQuery) -> Result<SolutionResult, SolveError> {
    solve_system_with(sys, u, q, &SolverOptions::default())
}

pub fn solve_system_with(
    sys: &ODESystem,
    u: &[Signal],
    q: &SolutionQuery,
    opts: &SolverOptions,
) -> Result<SolutionResult, SolveError> {
    let (m, n) = sys.order();
    if m != 1 {
        return Err(SolveError::UnsupportedOrder { supported: 1, found: m });
    }
    let d = sys.dim();
    if u.len() != d {
        return Err(SolveError::InputCount { expected: d, found: u.len() });
    }
    let inv = sys.a1().inverse().map_err(|_| SolveError::Singular)?;
    let mm = &inv * sys.a0();
    let cs: Vec<CMatrix> = sys.b().iter().map(|b| &inv * b).collect();
    let driven = cs.iter().any(|c| !c.is_zero());
    if driven {
        for s in u {
            if let Some(max) = s.max_order() {
                if max < n {
                    return Err(SolveError::DerivativeOrderUnavailable { needed: n, available: max });
                }
            }
        }
    }
    let real = sys.is_real() && u.iter().all(Signal::is_real);
    let (value, work) = work::measure(|| system_value(sys, &mm, &cs, driven, u, q, opts.max_nodes));
    let mut value = value?;
    if real {
        value = value.into_iter().map(realify).collect::<Result<_, _>>()?;
    }
    Ok(SolutionResult {
        value,
        work,
        backend: if driven { Backend::Quadrature } else { Backend::ClosedForm },
    })
}

/// `sup |w^(k)|` for `w = sum_j C_j u^(j)`, `k = 0..=order`.
fn input_bounds(cs: &[CMatrix], u: &[Signal], order: usize) -> Option<Vec<Dyadic>> {
    let norms: Vec<Dyadic> = cs.iter().map(norm_inf).collect();
    (0..=order)
        .map(|k| {
            let mut s = Dyadic::zero();
            for (j, c) in norms.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut sup = Dyadic::zero();
                for comp in u {
                    sup = Dyadic::max(&sup, &comp.sup_bound(j + k).ok()?);
                }
                s = &s + &(c * &sup);
            }
            Some(s)
        })
        .collect()
}

/// `sum_l C(r, l) |M|^l e^{|M| t} W_{r-l}`.
fn kernel_bound(norm_m: &Dyadic, t: &Dyadic, w: &[Dyadic], r: usize) -> Dyadic {
    let growth = exp_box(&ComplexBox::real(norm_m * t), 16).re_hi().clone();
    let mut acc = Dyadic::zero();
    let mut pow = Dyadic::one();
    let mut binom = 1i64;
    for l in 0..=r {
        acc = &acc + &(&(&pow * &w[r - l]) * &Dyadic::from_i64(binom));
        pow = &pow * norm_m;
        binom = binom * (r - l) as i64 / (l as i64 + 1);
    }
    &acc * &growth
}

struct Inputs<'a> {
    signals: &'a [Signal],
    derivs: Vec<Vec<Option<Expr>>>,
}

impl<'a> Inputs<'a> {
    fn new(u: &'a [Signal], n: usize) -> Self {
        let derivs = u
            .iter()
            .map(|s| match s {
                Signal::Expr(e) => {
                    let mut out = Vec::with_capacity(n + 1);
                    let mut d = e.clone();
                    for _ in 0..=n {
                        out.push(Some(d.clone()));
                        d = d.differentiate();
                    }
                    out
                }
                Signal::Oracle(_) => vec![None; n + 1],
            })
            .collect();
        Inputs { signals: u, derivs }
    }

    fn eval(&self, c: usize, j: usize, s: &Dyadic, prec: u32) -> Result<ComplexBox, SolveError> {
        match &self.derivs[c][j] {
            Some(e) => Ok(e.eval_box(&ComplexBox::real(s.clone()), prec)),
            None => Ok(eval_enclosure(&self.signals[c], j, s, prec)?),
        }
    }
}

fn system_value(
    sys: &ODESystem,
    mm: &CMatrix,
    cs: &[CMatrix],
    driven: bool,
    u: &[Signal],
    q: &SolutionQuery,
    max_nodes: u64,
) -> Result<Vec<ComplexBox>, SolveError> {
    let bits = q.bits();
    let t = q.t();
    let d = sys.dim();
    let norm_m = norm_inf(mm);
    let plan = if driven && !t.is_zero() {
        let bound = match input_bounds(cs, u, 4) {
            Some(w) => SmoothnessBound::fourth(kernel_bound(&norm_m, t, &w, 4)),
            None => match input_bounds(cs, u, 1) {
                Some(w) => SmoothnessBound::first(kernel_bound(&norm_m, t, &w, 1)),
                None => {
                    return Err(SolveError::DerivativeOrderUnavailable {
                        needed: sys.order().1 + 1,
                        available: u.iter().filter_map(Signal::max_order).min().unwrap_or(0),
                    })
                }
            },
        };
        Some(Plan::new(&bound, t, bits + 4, max_nodes)?)
    } else {
        None
    };
    let inputs = Inputs::new(u, cs.len() - 1);
    let log_n = plan.as_ref().map_or(0, |p| 64 - p.nodes().leading_zeros());
    let growth = (norm_m.to_f64() * 1.5).ceil() as u32 + 1;
    for level in 0..MAX_LEVELS {
        let prec = bits + 16 + log_n + growth + (8 << level);
        let mb = mm.to_box(prec);
        let y0: Vec<ComplexBox> = sys.y0().iter().map(|c| c.to_box(prec)).collect();
        let mut v = mat_exp(&mb.scale(&ComplexBox::real(-t)), prec).mul_vec(&y0);
        if let Some(plan) = &plan {
            let h = plan.h.clone();
            let cb: Vec<MatrixBox> = cs.iter().map(|c| c.to_box(prec)).collect();
            let step = mat_exp(&mb.scale(&ComplexBox::real(-&h)), prec);
            let mut kernel = match plan.rule {
                Rule::Simpson => MatrixBox::identity(d),
                Rule::Midpoint => mat_exp(&mb.scale(&ComplexBox::real(-h.shl(-1))), prec),
            };
            let mut first = true;
            let integral = plan.integrate(d, prec, |_, s| {
                if !first {
                    kernel = (&step * &kernel).round(prec);
                }
                first = false;
                let mut w = vec![ComplexBox::zero(); d];
                for (j, c) in cb.iter().enumerate() {
                    if cs[j].is_zero() {
                        continue;
                    }
                    let uj = (0..d).map(|k| inputs.eval(k, j, s, prec)).collect::<Result<Vec<_>, _>>()?;
                    for (a, x) in w.iter_mut().zip(c.mul_vec(&uj)) {
                        *a = (&*a + &x).round(prec);
                    }
                }
                Ok(kernel.mul_vec(&w))
            })?;
            v = v.iter().zip(&integral).map(|(a, b)| a + b).collect();
        }
        if v.iter().all(|x| x.publishable(bits)) {
            return Ok(v.iter().map(|x| x.publish(bits)).collect());
        }
    }
    Err(SolveError::RootUncertifiable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::GaussianRational;
    use crate::model::{build_lif, LinearODE};
    use crate::solver::solve_first_order;

    fn g(v: i64) -> GaussianRational {
        GaussianRational::from_i64(v)
    }

    #[test]
    fn homogeneous_is_matrix_exponential() {
        let sys = ODESystem::new(
            vec![CMatrix::from_i64_rows(&[&[0, 1], &[-1, 0]]), CMatrix::identity(2)],
            vec![CMatrix::zeros(2)],
            vec![g(1), g(0)],
        )
        .unwrap();
        let q = SolutionQuery::new(Dyadic::one(), 30).unwrap();
        let r = solve_system(&sys, &[Signal::zero(), Signal::zero()], &q).unwrap();
        // y' = [[0,-1],[1,0]] y  =>  (cos t, sin t)
        assert!((r.value[0].re().mid().to_f64() - 1f64.cos()).abs() < 1e-9);
        assert!((r.value[1].re().mid().to_f64() - 1f64.sin()).abs() < 1e-9);
        assert!(r.value.iter().all(|v| v.width_within(30)));
    }

    #[test]
    fn decoupled_matches_scalar() {
        let sys = ODESystem::new(
            vec![CMatrix::diag(&[g(1), g(2)]), CMatrix::identity(2)],
            vec![CMatrix::identity(2)],
            vec![g(0), g(1)],
        )
        .unwrap();
        let u = [Signal::parse("exp(-t)").unwrap(), Signal::parse("t").unwrap()];
        let q = SolutionQuery::new(Dyadic::pow2(-1), 20).unwrap();
        let r = solve_system(&sys, &u, &q).unwrap();
        let a = solve_first_order(&LinearODE::from_i64(&[1, 1], &[1], &[0]).unwrap(), &u[0], &q).unwrap();
        let b = solve_first_order(&LinearODE::from_i64(&[2, 1], &[1], &[1]).unwrap(), &u[1], &q).unwrap();
        assert!(r.value[0].overlaps(a.scalar()));
        assert!(r.value[1].overlaps(b.scalar()));
    }

    #[test]
    fn lif_closed_form() {
        let sys = build_lif(&g(1), &GaussianRational::ratio(1, 2), &g(0), &g(0), &g(0)).unwrap();
        let q = SolutionQuery::new(Dyadic::one(), 24).unwrap();
        let r = solve_system(&sys, &[Signal::zero(), Signal::parse("1").unwrap()], &q).unwrap();
        let e = (-1f64).exp();
        assert!((r.value[0].re().mid().to_f64() - (1.0 - 2.0 * e + e * e)).abs() < 1e-7);
        assert!(r.value[0].width_within(24));
    }

    #[test]
    fn singular_leading_matrix() {
        let sys = ODESystem::new(
            vec![CMatrix::identity(2), CMatrix::diag(&[g(1), g(0)])],
            vec![CMatrix::identity(2)],
            vec![g(0), g(0)],
        )
        .unwrap();
        let q = SolutionQuery::new(Dyadic::one(), 10).unwrap();
        assert_eq!(solve_system(&sys, &[Signal::zero(), Signal::zero()], &q).unwrap_err(), SolveError::Singular);
    }
}
