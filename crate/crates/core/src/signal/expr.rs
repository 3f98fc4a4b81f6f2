use std::fmt;

use num_traits::{Signed, Zero};

use crate::arith::{cos_box, exp_raw, sin_box, ComplexBox, GaussianRational};

/// Closed-form input signal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(GaussianRational),
    Time,
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Exp(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
}

use Expr::*;

impl Expr {
    pub fn constant(c: GaussianRational) -> Expr {
        Const(c)
    }

    pub fn int(v: i64) -> Expr {
        Const(GaussianRational::from_i64(v))
    }

    pub fn t() -> Expr {
        Time
    }

    fn as_const(&self) -> Option<&GaussianRational> {
        match self {
            Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(GaussianRational::is_zero)
    }

    // Simplifying constructors used by differentiation.

    pub fn sum(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Const(x + y),
            _ if a.is_zero() => b,
            _ if b.is_zero() => a,
            _ => Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn diff(a: Expr, b: Expr) -> Expr {
        Expr::sum(a, Expr::negate(b))
    }

    pub fn prod(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Const(x * y),
            _ if a.is_zero() || b.is_zero() => Expr::int(0),
            (Some(x), _) if x.is_one() => b,
            (_, Some(y)) if y.is_one() => a,
            _ => Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn negate(a: Expr) -> Expr {
        match a {
            Const(c) => Const(-c),
            Neg(x) => *x,
            x => Neg(Box::new(x)),
        }
    }

    pub fn pow(a: Expr, k: u32) -> Expr {
        match (k, &a) {
            (0, _) => Expr::int(1),
            (1, _) => a,
            (_, Const(c)) => Const(c.pow(k)),
            _ => Pow(Box::new(a), k),
        }
    }

    pub fn exp(a: Expr) -> Expr {
        Exp(Box::new(a))
    }

    pub fn sin(a: Expr) -> Expr {
        Sin(Box::new(a))
    }

    pub fn cos(a: Expr) -> Expr {
        Cos(Box::new(a))
    }

    /// Exact symbolic derivative with respect to `t`.
    pub fn differentiate(&self) -> Expr {
        match self {
            Const(_) => Expr::int(0),
            Time => Expr::int(1),
            Add(a, b) => Expr::sum(a.differentiate(), b.differentiate()),
            Mul(a, b) => Expr::sum(
                Expr::prod(a.differentiate(), (**b).clone()),
                Expr::prod((**a).clone(), b.differentiate()),
            ),
            Neg(a) => Expr::negate(a.differentiate()),
            Pow(a, k) => Expr::prod(
                Expr::prod(Expr::int(*k as i64), Expr::pow((**a).clone(), k - 1)),
                a.differentiate(),
            ),
            Exp(a) => Expr::prod(self.clone(), a.differentiate()),
            Sin(a) => Expr::prod(Expr::cos((**a).clone()), a.differentiate()),
            Cos(a) => Expr::negate(Expr::prod(Expr::sin((**a).clone()), a.differentiate())),
        }
    }

    /// The `j`-th derivative.
    pub fn nth_derivative(&self, j: usize) -> Expr {
        (0..j).fold(self.clone(), |e, _| e.differentiate())
    }

    /// Replace every occurrence of `t` by `s`.
    pub fn substitute(&self, s: &Expr) -> Expr {
        let go = |e: &Expr| Box::new(e.substitute(s));
        match self {
            Const(c) => Const(c.clone()),
            Time => s.clone(),
            Add(a, b) => Add(go(a), go(b)),
            Mul(a, b) => Mul(go(a), go(b)),
            Neg(a) => Neg(go(a)),
            Pow(a, k) => Pow(go(a), *k),
            Exp(a) => Exp(go(a)),
            Sin(a) => Sin(go(a)),
            Cos(a) => Cos(go(a)),
        }
    }

    /// True when no complex constant appears, so values at real `t` are real.
    pub fn is_real(&self) -> bool {
        match self {
            Const(c) => c.is_real(),
            Time => true,
            Add(a, b) | Mul(a, b) => a.is_real() && b.is_real(),
            Neg(a) | Pow(a, _) | Exp(a) | Sin(a) | Cos(a) => a.is_real(),
        }
    }

    /// Box evaluation at working precision `prec`; the result contains the
    /// value at every point of `t`.
    pub fn eval_box(&self, t: &ComplexBox, prec: u32) -> ComplexBox {
        match self {
            Const(c) => c.to_box(prec),
            Time => t.clone(),
            Add(a, b) => (&a.eval_box(t, prec) + &b.eval_box(t, prec)).round(prec),
            Mul(a, b) => (&a.eval_box(t, prec) * &b.eval_box(t, prec)).round(prec),
            Neg(a) => -a.eval_box(t, prec),
            Pow(a, k) => a.eval_box(t, prec).powi(*k, prec),
            Exp(a) => exp_raw(&a.eval_box(t, prec), prec),
            Sin(a) => sin_box(&a.eval_box(t, prec), prec),
            Cos(a) => cos_box(&a.eval_box(t, prec), prec),
        }
    }
}

fn const_is_atom(c: &GaussianRational) -> bool {
    (c.im().is_zero() && !c.re().is_negative() && c.re().is_integer()) || (c.re().is_zero() && c.im() == &num_rational::BigRational::from_integer(1.into()))
}

fn write_const(f: &mut fmt::Formatter<'_>, c: &GaussianRational) -> fmt::Result {
    let part = |r: &num_rational::BigRational| {
        if r.is_integer() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    };
    let (re, im) = (c.re(), c.im());
    if im.is_zero() {
        return write!(f, "{}", part(re));
    }
    let imag = |f: &mut fmt::Formatter<'_>, v: &num_rational::BigRational| -> fmt::Result {
        if v == &num_rational::BigRational::from_integer(1.into()) {
            write!(f, "i")
        } else {
            write!(f, "{}*i", part(v))
        }
    };
    if re.is_zero() {
        if im.is_negative() {
            write!(f, "-")?;
        }
        return imag(f, &im.abs());
    }
    write!(f, "{} {} ", part(re), if im.is_negative() { "-" } else { "+" })?;
    imag(f, &im.abs())
}

impl Expr {
    fn fmt_expr(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Add(a, b) => {
                a.fmt_expr(f)?;
                match &**b {
                    Neg(x) => {
                        write!(f, " - ")?;
                        x.fmt_term(f)
                    }
                    _ => {
                        write!(f, " + ")?;
                        b.fmt_term(f)
                    }
                }
            }
            _ => self.fmt_term(f),
        }
    }

    fn fmt_term(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mul(a, b) => {
                a.fmt_term(f)?;
                write!(f, "*")?;
                b.fmt_factor(f)
            }
            _ => self.fmt_factor(f),
        }
    }

    fn fmt_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pow(a, k) => {
                a.fmt_atom(f)?;
                write!(f, "^{k}")
            }
            Const(c) if c.im().is_zero() && !c.re().is_negative() => write_const(f, c),
            _ => self.fmt_atom(f),
        }
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Time => write!(f, "t"),
            Const(c) if const_is_atom(c) => write_const(f, c),
            Neg(a) => {
                write!(f, "-")?;
                a.fmt_atom(f)
            }
            Exp(a) => write!(f, "exp({a})"),
            Sin(a) => write!(f, "sin({a})"),
            Cos(a) => write!(f, "cos({a})"),
            Const(c) => {
                write!(f, "(")?;
                write_const(f, c)?;
                write!(f, ")")
            }
            _ => {
                write!(f, "(")?;
                self.fmt_expr(f)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_expr(f)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const(c) => write!(f, "{c}"),
            Time => write!(f, "t"),
            Add(a, b) => write!(f, "Add({a:?}, {b:?})"),
            Mul(a, b) => write!(f, "Mul({a:?}, {b:?})"),
            Neg(a) => write!(f, "Neg({a:?})"),
            Pow(a, k) => write!(f, "Pow({a:?}, {k})"),
            Exp(a) => write!(f, "Exp({a:?})"),
            Sin(a) => write!(f, "Sin({a:?})"),
            Cos(a) => write!(f, "Cos({a:?})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Dyadic;

    fn at(e: &Expr, t: f64) -> f64 {
        let tb = ComplexBox::real(Dyadic::from_f64(t).unwrap());
        e.eval_box(&tb, 80).re().mid().to_f64()
    }

    #[test]
    fn derivative_examples() {
        let t2 = Expr::pow(Expr::t(), 2);
        assert_eq!(t2.differentiate(), Expr::prod(Expr::int(2), Expr::t()));
        let e = Expr::exp(Expr::negate(Expr::t()));
        assert_eq!(e.differentiate(), Expr::prod(e.clone(), Expr::int(-1)));
        let g = Expr::prod(e.clone(), Expr::sin(Expr::prod(Expr::int(3), Expr::t())));
        let dg = g.differentiate();
        for &t in &[0.0, 0.2, 0.5, 0.75, 1.0] {
            let h = 1e-6;
            let fd = (at(&g, t + h) - at(&g, t - h)) / (2.0 * h);
            let closed = (-t).exp() * (3.0 * (3.0 * t).cos() - (3.0 * t).sin());
            assert!((at(&dg, t) - closed).abs() < 1e-12);
            assert!((fd - closed).abs() < 1e-6);
        }
    }

    #[test]
    fn printing() {
        let e = Expr::sum(Expr::int(1), Expr::negate(Expr::pow(Expr::t(), 2)));
        assert_eq!(e.to_string(), "1 - t^2");
        let n = Neg(Box::new(Pow(Box::new(Time), 2)));
        assert_eq!(n.to_string(), "-(t^2)");
        let c = Const(GaussianRational::complex(1, 2, -3, 1));
        assert_eq!(c.to_string(), "(1/2 - 3*i)");
    }

    #[test]
    fn real_check() {
        assert!(Expr::sin(Expr::t()).is_real());
        assert!(!Expr::prod(Expr::Const(GaussianRational::i()), Expr::t()).is_real());
    }
}
