use std::cmp::Ordering;
use std::fmt;

use super::Expr;
use crate::arith::{exp_raw, ComplexBox, Dyadic, GaussianRational};
use crate::poly::Poly;

/// `sum_k p_k(t) e^{mu_k t}` with distinct rates and nonzero polynomials,
/// sorted by rate.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExpPolynomial {
    terms: Vec<(GaussianRational, Poly)>,
}

fn rate_cmp(a: &GaussianRational, b: &GaussianRational) -> Ordering {
    a.re().cmp(b.re()).then_with(|| a.im().cmp(b.im()))
}

impl ExpPolynomial {
    /// Canonicalize arbitrary terms: merge equal rates, drop zero parts.
    pub fn new(mut terms: Vec<(GaussianRational, Poly)>) -> Self {
        terms.sort_by(|a, b| rate_cmp(&a.0, &b.0));
        let mut out: Vec<(GaussianRational, Poly)> = Vec::with_capacity(terms.len());
        for (mu, p) in terms {
            match out.last_mut() {
                Some((m, q)) if *m == mu => *q = &*q + &p,
                _ => out.push((mu, p)),
            }
        }
        out.retain(|(_, p)| !p.is_zero());
        ExpPolynomial { terms: out }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn poly(p: Poly) -> Self {
        Self::new(vec![(GaussianRational::zero(), p)])
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::poly(Poly::constant(c))
    }

    /// `c e^{mu t}`.
    pub fn exponential(c: GaussianRational, mu: GaussianRational) -> Self {
        Self::new(vec![(mu, Poly::constant(c))])
    }

    pub fn terms(&self) -> &[(GaussianRational, Poly)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.terms.iter().chain(&o.terms).cloned().collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&GaussianRational::from_i64(-1)))
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self::new(self.terms.iter().map(|(m, p)| (m.clone(), p.scale(c))).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut terms = Vec::new();
        for (m1, p1) in &self.terms {
            for (m2, p2) in &o.terms {
                terms.push((m1 + m2, p1 * p2));
            }
        }
        Self::new(terms)
    }

    /// `d/dt [p e^{mu t}] = (p' + mu p) e^{mu t}`.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.terms
                .iter()
                .map(|(m, p)| (m.clone(), &p.derivative() + &p.scale(m)))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, j: usize) -> Self {
        (0..j).fold(self.clone(), |e, _| e.derivative())
    }

    /// Exact value at a Gaussian-rational `t` when every rate is zero.
    pub fn value_if_polynomial(&self, t: &GaussianRational) -> Option<GaussianRational> {
        match self.terms.as_slice() {
            [] => Some(GaussianRational::zero()),
            [(m, p)] if m.is_zero() => Some(p.eval(t)),
            _ => None,
        }
    }

    /// Unpublished box at working precision `prec`.
    pub fn eval_raw(&self, t: &ComplexBox, prec: u32) -> ComplexBox {
        let mut acc = ComplexBox::zero();
        for (m, p) in &self.terms {
            let pv = p.eval_box(t, prec);
            let term = if m.is_zero() {
                pv
            } else {
                let arg = (&m.to_box(prec) * t).round(prec);
                (&pv * &exp_raw(&arg, prec)).round(prec)
            };
            acc = (&acc + &term).round(prec);
        }
        acc
    }

    /// Enclosure of the value at `t` with width at most `2^-bits`.
    pub fn eval(&self, t: &Dyadic, bits: u32) -> ComplexBox {
        let tb = ComplexBox::real(t.clone());
        let mut guard = 16;
        loop {
            let v = self.eval_raw(&tb, bits + guard);
            if v.publishable(bits) || guard > 4096 {
                return v.publish(bits);
            }
            guard *= 2;
        }
    }
}

/// Rate `beta` when the exp-polynomial is exactly `beta * t`.
fn linear_rate(e: &ExpPolynomial) -> Option<GaussianRational> {
    match e.terms() {
        [] => Some(GaussianRational::zero()),
        [(m, p)] if m.is_zero() && p.degree() == Some(1) && p.coeff(0).is_zero() => Some(p.coeff(1)),
        _ => None,
    }
}

/// Canonical exp-polynomial form of `e`, or `None` when `e` is outside the
/// class (for instance `exp(t^2)` or `exp(t + 1)`).
pub fn to_exp_polynomial(e: &Expr) -> Option<ExpPolynomial> {
    let half = GaussianRational::ratio(1, 2);
    let i_half = GaussianRational::complex(0, 1, 1, 2);
    Some(match e {
        Expr::Const(c) => ExpPolynomial::constant(c.clone()),
        Expr::Time => ExpPolynomial::poly(Poly::x()),
        Expr::Add(a, b) => to_exp_polynomial(a)?.add(&to_exp_polynomial(b)?),
        Expr::Mul(a, b) => to_exp_polynomial(a)?.mul(&to_exp_polynomial(b)?),
        Expr::Neg(a) => to_exp_polynomial(a)?.scale(&GaussianRational::from_i64(-1)),
        Expr::Pow(a, k) => {
            let base = to_exp_polynomial(a)?;
            (0..*k).fold(ExpPolynomial::constant(GaussianRational::one()), |acc, _| acc.mul(&base))
        }
        Expr::Exp(a) => ExpPolynomial::exponential(GaussianRational::one(), linear_rate(&to_exp_polynomial(a)?)?),
        Expr::Sin(a) => {
            // sin(bt) = (-i/2) e^{ibt} + (i/2) e^{-ibt}
            let ib = &linear_rate(&to_exp_polynomial(a)?)? * &GaussianRational::i();
            ExpPolynomial::exponential(-&i_half, ib.clone()).add(&ExpPolynomial::exponential(i_half, -ib))
        }
        Expr::Cos(a) => {
            let ib = &linear_rate(&to_exp_polynomial(a)?)? * &GaussianRational::i();
            ExpPolynomial::exponential(half.clone(), ib.clone()).add(&ExpPolynomial::exponential(half, -ib))
        }
    })
}

impl fmt::Display for ExpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, p)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if m.is_zero() {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p})e^({m} t)")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::parse_signal;

    #[test]
    fn canonical_examples() {
        let t2 = to_exp_polynomial(&parse_signal("t^2").unwrap()).unwrap();
        assert_eq!(t2.terms(), &[(GaussianRational::zero(), Poly::monomial(GaussianRational::one(), 2))]);

        let s = to_exp_polynomial(&parse_signal("sin(t)").unwrap()).unwrap();
        let i = GaussianRational::i();
        assert_eq!(
            s.terms(),
            &[
                (-&i, Poly::constant(GaussianRational::complex(0, 1, 1, 2))),
                (i.clone(), Poly::constant(GaussianRational::complex(0, 1, -1, 2))),
            ]
        );
        let direct = parse_signal("sin(t)").unwrap().eval_box(&ComplexBox::one(), 80);
        let canon = s.eval(&Dyadic::one(), 30);
        assert!(canon.overlaps(&direct));
        assert!(canon.im().contains_zero());

        assert!(to_exp_polynomial(&parse_signal("exp(t^2)").unwrap()).is_none());
        assert!(to_exp_polynomial(&parse_signal("exp(t + 1)").unwrap()).is_none());
    }

    #[test]
    fn cancellation_and_derivative() {
        let e = to_exp_polynomial(&parse_signal("exp(-t)*exp(t) - 1").unwrap()).unwrap();
        assert!(e.is_zero());
        let u = to_exp_polynomial(&parse_signal("t*exp(-2*t)").unwrap()).unwrap();
        let du = to_exp_polynomial(&parse_signal("t*exp(-2*t)").unwrap().differentiate()).unwrap();
        assert_eq!(u.derivative(), du);
    }
}
