use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{ArithError, Dyadic};
use crate::work;

/// Closed real interval with dyadic endpoints, `lo <= hi`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Self::point(Dyadic::zero())
    }

    /// `[-r, r]` for `r >= 0`.
    pub fn symmetric(r: Dyadic) -> Self {
        let r = r.abs();
        Interval { lo: -&r, hi: r }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Dyadic {
        Dyadic::midpoint(&self.lo, &self.hi)
    }

    /// Half-width; exact.
    pub fn rad(&self) -> Dyadic {
        self.width().shl(-1)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// `max |x|` over the interval.
    pub fn mag(&self) -> Dyadic {
        Dyadic::max(&self.lo.abs(), &self.hi.abs())
    }

    /// `min |x|` over the interval.
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else {
            Dyadic::min(&self.lo.abs(), &self.hi.abs())
        }
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains_interval(&self, o: &Interval) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    /// `o` lies in the open interior of `self`.
    pub fn interior_contains(&self, o: &Interval) -> bool {
        self.lo < o.lo && o.hi < self.hi
    }

    pub fn overlaps(&self, o: &Interval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn hull(&self, o: &Interval) -> Interval {
        Interval {
            lo: Dyadic::min(&self.lo, &o.lo),
            hi: Dyadic::max(&self.hi, &o.hi),
        }
    }

    pub fn intersect(&self, o: &Interval) -> Option<Interval> {
        let lo = Dyadic::max(&self.lo, &o.lo);
        let hi = Dyadic::min(&self.hi, &o.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn round(&self, prec: u32) -> Interval {
        Interval {
            lo: self.lo.round_down(prec),
            hi: self.hi.round_up(prec),
        }
    }

    /// Outward rounding to the absolute grid `2^-k`.
    pub fn round_grid(&self, k: i64) -> Interval {
        Interval {
            lo: self.lo.floor_grid(k),
            hi: self.hi.ceil_grid(k),
        }
    }

    pub fn widen(&self, r: &Dyadic) -> Interval {
        let r = r.abs();
        Interval {
            lo: &self.lo - &r,
            hi: &self.hi + &r,
        }
    }

    pub fn scale(&self, k: &Dyadic) -> Interval {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if k.is_negative() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }

    pub fn shl(&self, k: i64) -> Interval {
        Interval {
            lo: self.lo.shl(k),
            hi: self.hi.shl(k),
        }
    }

    pub fn sqr(&self) -> Interval {
        work::arith(1);
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        if self.contains_zero() {
            Interval {
                lo: Dyadic::zero(),
                hi: Dyadic::max(&a, &b),
            }
        } else if self.lo.is_positive() {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn recip(&self, prec: u32) -> Result<Interval, ArithError> {
        work::arith(1);
        if self.contains_zero() {
            return Err(ArithError::DivisorContainsZero);
        }
        let one = Dyadic::one();
        Ok(Interval {
            lo: Dyadic::div_down(&one, &self.hi, prec),
            hi: Dyadic::div_up(&one, &self.lo, prec),
        })
    }

    pub fn div(&self, o: &Interval, prec: u32) -> Result<Interval, ArithError> {
        Ok((self * &o.recip(prec)?).round(prec))
    }

    /// Division by a positive integer.
    pub fn div_int(&self, k: u64, prec: u32) -> Interval {
        work::arith(1);
        assert!(k > 0);
        let d = Dyadic::from_i64(k as i64);
        Interval {
            lo: Dyadic::div_down(&self.lo, &d, prec),
            hi: Dyadic::div_up(&self.hi, &d, prec),
        }
    }

    pub fn certainly_lt(&self, x: &Dyadic) -> bool {
        &self.hi < x
    }

    pub fn certainly_ge(&self, x: &Dyadic) -> bool {
        &self.lo >= x
    }
}

impl<'a> Add<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn add(self, o: &'a Interval) -> Interval {
        work::arith(1);
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }
}

impl<'a> Sub<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn sub(self, o: &'a Interval) -> Interval {
        work::arith(1);
        Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }
}

impl<'a> Mul<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn mul(self, o: &'a Interval) -> Interval {
        work::arith(1);
        if self.is_point() {
            return o.scale(&self.lo);
        }
        if o.is_point() {
            return self.scale(&o.lo);
        }
        let p = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let mut lo = p[0].clone();
        let mut hi = p[0].clone();
        for v in &p[1..] {
            if v < &lo {
                lo = v.clone();
            }
            if v > &hi {
                hi = v.clone();
            }
        }
        Interval { lo, hi }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: i64, b: i64) -> Interval {
        Interval::new(Dyadic::from_i64(a), Dyadic::from_i64(b))
    }

    #[test]
    fn mul_endpoint_enumeration() {
        assert_eq!(&iv(1, 2) * &iv(-1, 1), iv(-2, 2));
        assert_eq!(&iv(-3, -1) * &iv(2, 5), iv(-15, -2));
    }

    #[test]
    fn sqr_tighter_than_mul() {
        assert_eq!(iv(-1, 2).sqr(), iv(0, 4));
        assert_eq!(iv(-3, -2).sqr(), iv(4, 9));
    }

    #[test]
    fn recip_rejects_zero() {
        assert_eq!(iv(-1, 1).recip(30), Err(ArithError::DivisorContainsZero));
        let r = iv(2, 4).recip(30).unwrap();
        assert!(r.contains(&Dyadic::pow2(-1)) && r.contains(&Dyadic::pow2(-2)));
    }
}
