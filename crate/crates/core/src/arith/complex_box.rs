use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{ArithError, Dyadic, Interval};

/// Rectangular complex enclosure `[re_lo, re_hi] + i [im_lo, im_hi]`.
///
/// `+`, `-` and `*` are exact (dyadics are closed under them); division and
/// [`ComplexBox::round`] round outward.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ComplexBox {
    re: Interval,
    im: Interval,
}

impl ComplexBox {
    pub fn new(re: Interval, im: Interval) -> Self {
        ComplexBox { re, im }
    }

    pub fn from_bounds(re_lo: Dyadic, re_hi: Dyadic, im_lo: Dyadic, im_hi: Dyadic) -> Self {
        ComplexBox {
            re: Interval::new(re_lo, re_hi),
            im: Interval::new(im_lo, im_hi),
        }
    }

    pub fn point(re: Dyadic, im: Dyadic) -> Self {
        ComplexBox {
            re: Interval::point(re),
            im: Interval::point(im),
        }
    }

    pub fn real(x: Dyadic) -> Self {
        Self::point(x, Dyadic::zero())
    }

    pub fn real_interval(re: Interval) -> Self {
        ComplexBox {
            re,
            im: Interval::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::real(Dyadic::zero())
    }

    pub fn one() -> Self {
        Self::real(Dyadic::one())
    }

    pub fn i() -> Self {
        Self::point(Dyadic::zero(), Dyadic::one())
    }

    pub fn from_i64(v: i64) -> Self {
        Self::real(Dyadic::from_i64(v))
    }

    pub fn re(&self) -> &Interval {
        &self.re
    }

    pub fn im(&self) -> &Interval {
        &self.im
    }

    pub fn re_lo(&self) -> &Dyadic {
        self.re.lo()
    }

    pub fn re_hi(&self) -> &Dyadic {
        self.re.hi()
    }

    pub fn im_lo(&self) -> &Dyadic {
        self.im.lo()
    }

    pub fn im_hi(&self) -> &Dyadic {
        self.im.hi()
    }

    /// `max(re_hi - re_lo, im_hi - im_lo)`.
    pub fn width(&self) -> Dyadic {
        Dyadic::max(&self.re.width(), &self.im.width())
    }

    /// Width is at most `2^-bits`.
    pub fn width_within(&self, bits: i64) -> bool {
        self.width() <= Dyadic::pow2(-bits)
    }

    pub fn mid(&self) -> ComplexBox {
        Self::point(self.re.mid(), self.im.mid())
    }

    pub fn is_point(&self) -> bool {
        self.re.is_point() && self.im.is_point()
    }

    /// Upper bound on `|z|` over the box (`|re| + |im|`).
    pub fn mag(&self) -> Dyadic {
        &self.re.mag() + &self.im.mag()
    }

    /// Upper bound on the distance of any point of the box from its centre.
    pub fn rad(&self) -> Dyadic {
        &self.re.rad() + &self.im.rad()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains_point(&self, re: &Dyadic, im: &Dyadic) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn contains(&self, o: &ComplexBox) -> bool {
        self.re.contains_interval(&o.re) && self.im.contains_interval(&o.im)
    }

    pub fn interior_contains(&self, o: &ComplexBox) -> bool {
        self.re.interior_contains(&o.re) && self.im.interior_contains(&o.im)
    }

    pub fn overlaps(&self, o: &ComplexBox) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    pub fn hull(&self, o: &ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re.hull(&o.re),
            im: self.im.hull(&o.im),
        }
    }

    pub fn intersect(&self, o: &ComplexBox) -> Option<ComplexBox> {
        Some(ComplexBox {
            re: self.re.intersect(&o.re)?,
            im: self.im.intersect(&o.im)?,
        })
    }

    pub fn conj(&self) -> ComplexBox {
        ComplexBox {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn mul_i(&self) -> ComplexBox {
        ComplexBox {
            re: -&self.im,
            im: self.re.clone(),
        }
    }

    pub fn scale(&self, k: &Dyadic) -> ComplexBox {
        ComplexBox {
            re: self.re.scale(k),
            im: self.im.scale(k),
        }
    }

    pub fn shl(&self, k: i64) -> ComplexBox {
        ComplexBox {
            re: self.re.shl(k),
            im: self.im.shl(k),
        }
    }

    pub fn round(&self, prec: u32) -> ComplexBox {
        ComplexBox {
            re: self.re.round(prec),
            im: self.im.round(prec),
        }
    }

    pub fn round_grid(&self, k: i64) -> ComplexBox {
        ComplexBox {
            re: self.re.round_grid(k),
            im: self.im.round_grid(k),
        }
    }

    /// Widen both coordinates by `r`.
    pub fn widen(&self, r: &Dyadic) -> ComplexBox {
        ComplexBox {
            re: self.re.widen(r),
            im: self.im.widen(r),
        }
    }

    /// Publish an enclosure for a `2^-bits` contract.
    ///
    /// Requires `width <= 2^-(bits+2)`. The result is padded by `2^-(bits+2)`
    /// and snapped outward to the `2^-(bits+3)` grid, so its width is at most
    /// `2^-bits` and any enclosure of the same value published at
    /// `bits + 2` or more lies inside it. An exactly zero coordinate stays
    /// zero, which keeps real results real.
    pub fn publish(&self, bits: u32) -> ComplexBox {
        let b = bits as i64;
        let pad = Dyadic::pow2(-(b + 2));
        let one = |x: &Interval| {
            if x.is_point() && x.lo().is_zero() {
                x.clone()
            } else {
                x.widen(&pad).round_grid(b + 3)
            }
        };
        ComplexBox {
            re: one(&self.re),
            im: one(&self.im),
        }
    }

    /// Core enclosure is tight enough for [`ComplexBox::publish`].
    pub fn publishable(&self, bits: u32) -> bool {
        self.width_within(bits as i64 + 2)
    }

    pub fn sqr(&self) -> ComplexBox {
        // Real part via squares keeps the enclosure tight.
        let re = &self.re.sqr() - &self.im.sqr();
        let im = (&self.re * &self.im).shl(1);
        ComplexBox { re, im }
    }

    /// `|z|^2` as a real interval.
    pub fn norm_sqr(&self) -> Interval {
        &self.re.sqr() + &self.im.sqr()
    }

    pub fn recip(&self, prec: u32) -> Result<ComplexBox, ArithError> {
        let n = self.norm_sqr();
        if n.lo().signum() <= 0 {
            return Err(ArithError::DivisorContainsZero);
        }
        let inv = n.recip(prec)?;
        let c = self.conj();
        Ok(ComplexBox {
            re: (&c.re * &inv).round(prec),
            im: (&c.im * &inv).round(prec),
        })
    }

    pub fn div(&self, o: &ComplexBox, prec: u32) -> Result<ComplexBox, ArithError> {
        if o.re.is_point() && o.im.is_point() && o.im.lo().is_zero() {
            // Real point divisor: divide each coordinate directly.
            let d = Interval::point(o.re.lo().clone());
            return Ok(ComplexBox {
                re: self.re.div(&d, prec)?,
                im: self.im.div(&d, prec)?,
            });
        }
        let r = o.recip(prec)?;
        Ok((self * &r).round(prec))
    }

    pub fn div_int(&self, k: u64, prec: u32) -> ComplexBox {
        ComplexBox {
            re: self.re.div_int(k, prec),
            im: self.im.div_int(k, prec),
        }
    }

    pub fn powi(&self, k: u32, prec: u32) -> ComplexBox {
        let mut acc = ComplexBox::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).round(prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr().round(prec);
            }
        }
        acc
    }
}

impl<'a> Add<&'a ComplexBox> for &'a ComplexBox {
    type Output = ComplexBox;
    fn add(self, o: &'a ComplexBox) -> ComplexBox {
        ComplexBox {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl<'a> Sub<&'a ComplexBox> for &'a ComplexBox {
    type Output = ComplexBox;
    fn sub(self, o: &'a ComplexBox) -> ComplexBox {
        ComplexBox {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl<'a> Mul<&'a ComplexBox> for &'a ComplexBox {
    type Output = ComplexBox;
    fn mul(self, o: &'a ComplexBox) -> ComplexBox {
        let self_real = self.im.is_point() && self.im.lo().is_zero();
        let o_real = o.im.is_point() && o.im.lo().is_zero();
        if self_real {
            return ComplexBox {
                re: &self.re * &o.re,
                im: &self.re * &o.im,
            };
        }
        if o_real {
            return ComplexBox {
                re: &self.re * &o.re,
                im: &self.im * &o.re,
            };
        }
        ComplexBox {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }
}

impl Neg for &ComplexBox {
    type Output = ComplexBox;
    fn neg(self) -> ComplexBox {
        ComplexBox {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ComplexBox> for ComplexBox {
            type Output = ComplexBox;
            fn $m(self, rhs: ComplexBox) -> ComplexBox {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ComplexBox> for ComplexBox {
            type Output = ComplexBox;
            fn $m(self, rhs: &'a ComplexBox) -> ComplexBox {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ComplexBox {
    type Output = ComplexBox;
    fn neg(self) -> ComplexBox {
        -&self
    }
}

impl fmt::Debug for ComplexBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + i{:?}", self.re, self.im)
    }
}

impl fmt::Display for ComplexBox {
    /// Real boxes print as `[lo, hi]`; complex ones add the imaginary part.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(12) as u32;
        let re = format!(
            "[{}, {}]",
            self.re.lo().to_decimal(digits, false),
            self.re.hi().to_decimal(digits, true)
        );
        if self.im.is_point() && self.im.lo().is_zero() {
            write!(f, "{re}")
        } else {
            write!(
                f,
                "{re} + i[{}, {}]",
                self.im.lo().to_decimal(digits, false),
                self.im.hi().to_decimal(digits, true)
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rbox(a: i64, b: i64) -> ComplexBox {
        ComplexBox::real_interval(Interval::new(Dyadic::from_i64(a), Dyadic::from_i64(b)))
    }

    #[test]
    fn add_exact_endpoints() {
        assert_eq!(&ComplexBox::from_i64(1) + &ComplexBox::from_i64(2), ComplexBox::from_i64(3));
    }

    #[test]
    fn mul_identity_and_endpoints() {
        let x = ComplexBox::from_bounds(
            Dyadic::pow2(-3),
            Dyadic::one(),
            Dyadic::from_i64(-2),
            Dyadic::pow2(-1),
        );
        assert_eq!(&x * &ComplexBox::one(), x);
        assert_eq!(&rbox(1, 2) * &rbox(-1, 1), rbox(-2, 2));
    }

    #[test]
    fn div_requires_nonzero_divisor() {
        let err = ComplexBox::one().div(&rbox(-1, 1), 30);
        assert_eq!(err, Err(ArithError::DivisorContainsZero));
        let q = ComplexBox::one().div(&ComplexBox::i(), 30).unwrap();
        assert!(q.contains_point(&Dyadic::zero(), &Dyadic::from_i64(-1)));
    }

    #[test]
    fn publish_pads_and_nests() {
        let x = ComplexBox::real(Dyadic::div_down(&Dyadic::one(), &Dyadic::from_i64(3), 60));
        let a = x.publish(10);
        let b = x.publish(18);
        assert!(a.width_within(10) && b.width_within(18));
        assert!(a.contains(&b));
    }
}
