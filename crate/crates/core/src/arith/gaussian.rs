use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{ComplexBox, Dyadic, Interval};

/// Exact complex number with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_real(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::from_real(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Self::from_real(BigRational::new(p.into(), q.into()))
    }

    /// `(p1/q1) + (p2/q2) i`.
    pub fn complex(p1: i64, q1: i64, p2: i64, q2: i64) -> Self {
        GaussianRational {
            re: BigRational::new(p1.into(), q1.into()),
            im: BigRational::new(p2.into(), q2.into()),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn from_dyadic(d: &Dyadic) -> Self {
        Self::from_real(d.to_rational())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Enclosure; exact (a point) when both parts are dyadic.
    pub fn to_box(&self, prec: u32) -> ComplexBox {
        let part = |r: &BigRational| match Dyadic::from_rational_exact(r) {
            Some(d) => Interval::point(d),
            None => Interval::new(
                Dyadic::from_rational_down(r, prec),
                Dyadic::from_rational_up(r, prec),
            ),
        };
        ComplexBox::new(part(&self.re), part(&self.im))
    }

    /// Whether this value lies in `b`.
    pub fn in_box(&self, b: &ComplexBox) -> bool {
        let inside = |r: &BigRational, iv: &Interval| {
            &iv.lo().to_rational() <= r && r <= &iv.hi().to_rational()
        };
        inside(&self.re, b.re()) && inside(&self.im, b.im())
    }

    /// Simplest rational (smallest denominator) in `[lo, hi]`.
    pub fn simplest_in(lo: &BigRational, hi: &BigRational) -> BigRational {
        fn go(lo: &BigRational, hi: &BigRational) -> BigRational {
            let fl = lo.floor();
            if &fl == lo {
                return fl;
            }
            if &(fl.clone() + BigRational::one()) <= hi {
                return fl + BigRational::one();
            }
            // lo and hi share an integer part; recurse on reciprocals of fractions.
            let a = lo - &fl;
            let b = hi - &fl;
            let inner = go(&b.recip(), &a.recip());
            fl + inner.recip()
        }
        if lo.is_positive() || lo.is_zero() {
            go(lo, hi)
        } else if hi.is_negative() {
            -go(&-hi, &-lo)
        } else {
            BigRational::zero()
        }
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &'a GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &'a GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &'a GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

/// Panics on division by zero, like the primitive numeric types.
#[allow(clippy::suspicious_arithmetic_impl)]
impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, o: &'a GaussianRational) -> GaussianRational {
        self * &o.recip().expect("division by zero")
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: &'a GaussianRational) -> GaussianRational {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    /// Same syntax the model-file parser accepts: `p/q`, `p/q+r/s i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let im = fmt_rational(&self.im.abs());
        let sign = if self.im.is_negative() { "-" } else { "+" };
        if self.re.is_zero() {
            let lead = if self.im.is_negative() { "-" } else { "" };
            write!(f, "{lead}{im} i")
        } else {
            write!(f, "{}{sign}{im} i", fmt_rational(&self.re))
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid complex rational literal `{0}`")]
pub struct ParseGaussianError(pub String);

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        // Decimal literal, converted exactly.
        let neg = ip.trim_start().starts_with('-');
        let ip = ip.trim().trim_start_matches(['+', '-']);
        if !fp.chars().all(|c| c.is_ascii_digit()) || fp.is_empty() {
            return None;
        }
        let ip: BigInt = if ip.is_empty() { BigInt::zero() } else { ip.parse().ok()? };
        let fpv: BigInt = fp.parse().ok()?;
        let scale = BigInt::from(10u32).pow(fp.len() as u32);
        let v = BigRational::new(ip * &scale + fpv, scale);
        return Some(if neg { -v } else { v });
    }
    Some(BigRational::from_integer(s.parse().ok()?))
}

impl FromStr for GaussianRational {
    type Err = ParseGaussianError;

    /// Accepts `p`, `p/q`, `p.dd`, `r/s i`, `i`, `p/q+r/s i`, `p/q - i`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = || ParseGaussianError(text.to_string());
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err());
        }
        if let Some(body) = s.strip_suffix('i') {
            // Split at the last sign that is not the leading one.
            let split = body
                .char_indices()
                .skip(1)
                .filter(|&(_, c)| c == '+' || c == '-')
                .map(|(k, _)| k)
                .last();
            let (re_s, im_s) = match split {
                Some(k) => (&body[..k], &body[k..]),
                None => ("", body),
            };
            let re = if re_s.is_empty() {
                BigRational::zero()
            } else {
                parse_rational(re_s).ok_or_else(err)?
            };
            let im = match im_s {
                "" | "+" => BigRational::one(),
                "-" => -BigRational::one(),
                other => parse_rational(other.trim_start_matches('+')).ok_or_else(err)?,
            };
            return Ok(GaussianRational { re, im });
        }
        Ok(Self::from_real(parse_rational(&s).ok_or_else(err)?))
    }
}
