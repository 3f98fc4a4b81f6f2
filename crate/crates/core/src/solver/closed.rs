//! Exp-polynomials with enclosure coefficients and the root-deflation
//! cascade that solves constant-coefficient equations in closed form.

use crate::arith::{exp_raw, ComplexBox, Dyadic, GaussianRational, Interval};
use crate::poly::RootItem;
use crate::signal::ExpPolynomial;

/// Identity of an exponential rate. Exact rates compare by value; inexact
/// roots of the characteristic polynomial compare by their index among the
/// distinct roots, so coincidences are detected exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RateKey {
    Exact(GaussianRational),
    Root(usize),
}

#[derive(Clone, Debug)]
pub struct Rate {
    pub key: RateKey,
    pub value: ComplexBox,
}

impl Rate {
    pub fn exact(q: &GaussianRational, prec: u32) -> Rate {
        Rate {
            key: RateKey::Exact(q.clone()),
            value: q.to_box(prec),
        }
    }

    /// Rate for a distinct root with index `id`, enclosed at `prec` bits.
    pub fn root(item: &RootItem, id: usize, prec: u32) -> Rate {
        match item.exact() {
            Some(q) => Rate::exact(q, prec + 8),
            None => Rate {
                key: RateKey::Root(id),
                value: item.refine(prec).enclosure().clone(),
            },
        }
    }
}

type BoxCoeffs = Vec<ComplexBox>;

fn poly_eval(p: &[ComplexBox], t: &ComplexBox, prec: u32) -> ComplexBox {
    let mut acc = ComplexBox::zero();
    for c in p.iter().rev() {
        acc = (&(&acc * t) + c).round(prec);
    }
    acc
}

fn poly_add(p: &mut BoxCoeffs, q: &[ComplexBox]) {
    if p.len() < q.len() {
        p.resize(q.len(), ComplexBox::zero());
    }
    for (a, b) in p.iter_mut().zip(q) {
        *a = &*a + b;
    }
}

fn poly_derivative(p: &[ComplexBox]) -> BoxCoeffs {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * &ComplexBox::from_i64(i as i64))
        .collect()
}

fn poly_antiderivative(p: &[ComplexBox], prec: u32) -> BoxCoeffs {
    let mut out = vec![ComplexBox::zero()];
    out.extend(p.iter().enumerate().map(|(i, c)| c.div_int(i as u64 + 1, prec)));
    out
}

/// `sum_k p_k(t) e^{r_k t}` with box coefficients and keyed rates.
#[derive(Clone, Debug, Default)]
pub struct BoxExpPoly {
    terms: Vec<(Rate, BoxCoeffs)>,
}

impl BoxExpPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_exact(e: &ExpPolynomial, prec: u32) -> Self {
        let mut out = Self::zero();
        for (mu, p) in e.terms() {
            out.push(&Rate::exact(mu, prec), p.coeffs().iter().map(|c| c.to_box(prec)).collect());
        }
        out
    }

    pub fn terms(&self) -> &[(Rate, BoxCoeffs)] {
        &self.terms
    }

    fn push(&mut self, rate: &Rate, p: BoxCoeffs) {
        match self.terms.iter_mut().find(|(r, _)| r.key == rate.key) {
            Some((_, q)) => poly_add(q, &p),
            None => self.terms.push((rate.clone(), p)),
        }
    }

    /// `r p + p'` per term.
    pub fn derivative(&self, prec: u32) -> Self {
        let mut out = Self::zero();
        for (r, p) in &self.terms {
            let mut q: BoxCoeffs = p.iter().map(|c| (c * &r.value).round(prec)).collect();
            poly_add(&mut q, &poly_derivative(p));
            out.push(r, q);
        }
        out
    }

    pub fn nth_derivative(&self, j: usize, prec: u32) -> Self {
        (0..j).fold(self.clone(), |e, _| e.derivative(prec))
    }

    /// Box containing the value for every point of `t` (unpublished).
    pub fn eval_raw(&self, t: &ComplexBox, prec: u32) -> ComplexBox {
        let mut acc = ComplexBox::zero();
        for (r, p) in &self.terms {
            let pv = poly_eval(p, t, prec);
            let term = if r.value.is_point() && r.value.contains_zero() {
                pv
            } else {
                (&pv * &exp_raw(&(&r.value * t).round(prec), prec)).round(prec)
            };
            acc = (&acc + &term).round(prec);
        }
        acc
    }

    /// Upper bound on the modulus over `t` in `[0, 1]`.
    pub fn sup_bound(&self) -> Dyadic {
        let mut best = Dyadic::zero();
        for c in 0..16 {
            let cell = Interval::new(Dyadic::from_i64(c).shl(-4), Dyadic::from_i64(c + 1).shl(-4));
            let v = self.eval_raw(&ComplexBox::real_interval(cell), 48);
            best = Dyadic::max(&best, &v.mag().round_up(24));
        }
        best
    }
}

/// The rate-difference box contains zero: roots are not yet separated at
/// this precision.
#[derive(Debug)]
pub struct NeedPrecision;

/// Solve `y' - sigma y = g`, `y(0) = c`.
///
/// For a term `p(t) e^{mu t}` of `g` with `lambda = mu - sigma != 0` the
/// contribution is `q(t) e^{mu t} - q(0) e^{sigma t}` where
/// `q = sum_i (-1)^i p^(i) / lambda^(i+1)`; when `mu` and `sigma` coincide
/// it is `P(t) e^{sigma t}` with `P` the antiderivative of `p`.
pub fn first_order(sigma: &Rate, c: &ComplexBox, g: &BoxExpPoly, prec: u32) -> Result<BoxExpPoly, NeedPrecision> {
    let mut out = BoxExpPoly::zero();
    out.push(sigma, vec![c.clone()]);
    for (mu, p) in &g.terms {
        if mu.key == sigma.key {
            out.push(sigma, poly_antiderivative(p, prec));
            continue;
        }
        let lambda = &mu.value - &sigma.value;
        let inv = lambda.recip(prec).map_err(|_| NeedPrecision)?;
        let mut q: BoxCoeffs = Vec::new();
        let mut deriv = p.clone();
        let mut factor = inv.clone();
        let mut sign = true;
        while !deriv.is_empty() {
            let s = if sign { factor.clone() } else { -&factor };
            let scaled: BoxCoeffs = deriv.iter().map(|x| (x * &s).round(prec)).collect();
            poly_add(&mut q, &scaled);
            deriv = poly_derivative(&deriv);
            factor = (&factor * &inv).round(prec);
            sign = !sign;
        }
        let q0 = q.first().cloned().unwrap_or_else(ComplexBox::zero);
        out.push(sigma, vec![-q0]);
        out.push(mu, q);
    }
    Ok(out)
}

/// Solve `prod_k (D - sigma_k) y = f` with `y^(i)(0) = ics[i]`.
///
/// Peels `sigma_0`: `w = y' - sigma_0 y` solves the equation with the
/// remaining roots and initial values `w^(i)(0) = ics[i+1] - sigma_0 ics[i]`,
/// after which `y' - sigma_0 y = w` is first order.
pub fn cascade(roots: &[Rate], ics: &[ComplexBox], f: &BoxExpPoly, prec: u32) -> Result<BoxExpPoly, NeedPrecision> {
    debug_assert_eq!(roots.len(), ics.len());
    let Some((sigma, rest)) = roots.split_first() else {
        return Ok(f.clone());
    };
    let reduced: Vec<ComplexBox> = (0..rest.len())
        .map(|i| (&ics[i + 1] - &(&sigma.value * &ics[i])).round(prec))
        .collect();
    let w = cascade(rest, &reduced, f, prec)?;
    first_order(sigma, &ics[0], &w, prec)
}
