//! Dyadic rationals `mantissa * 2^exponent` with directed rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A dyadic rational in canonical form: the mantissa is zero or odd, and
/// zero always carries exponent 0, so structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

fn shr_floor(m: &BigInt, k: u64) -> BigInt {
    if m.is_negative() {
        let pos = -m;
        let bump = (BigInt::one() << k) - 1u32;
        -((pos + bump) >> k)
    } else {
        m >> k
    }
}

fn shr_ceil(m: &BigInt, k: u64) -> BigInt {
    -shr_floor(&-m, k)
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Self::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { mantissa, exponent }
        } else {
            Dyadic {
                mantissa: mantissa >> tz,
                exponent: exponent + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: 0,
        }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::new(BigInt::from(v), 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: k,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Multiply by `2^k` (exact).
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + k,
        }
    }

    /// Number of significant bits of the mantissa.
    pub fn bit_len(&self) -> u64 {
        self.mantissa.bits()
    }

    /// Upper bound `e` with `|x| < 2^e`; `i64::MIN` for zero.
    pub fn log2_upper(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exponent + self.bit_len() as i64
        }
    }

    pub fn max(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn min(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn midpoint(a: &Self, b: &Self) -> Self {
        (a + b).shl(-1)
    }

    fn round_bits(&self, prec: u32, up: bool) -> Self {
        let bl = self.bit_len();
        if bl <= prec as u64 {
            return self.clone();
        }
        let drop = bl - prec as u64;
        let m = if up {
            shr_ceil(&self.mantissa, drop)
        } else {
            shr_floor(&self.mantissa, drop)
        };
        Self::new(m, self.exponent + drop as i64)
    }

    /// Round toward −∞ to at most `prec` significant bits.
    pub fn round_down(&self, prec: u32) -> Self {
        self.round_bits(prec, false)
    }

    /// Round toward +∞ to at most `prec` significant bits.
    pub fn round_up(&self, prec: u32) -> Self {
        self.round_bits(prec, true)
    }

    /// Largest multiple of `2^-k` not above `self`.
    pub fn floor_grid(&self, k: i64) -> Self {
        if self.is_zero() || self.exponent >= -k {
            return self.clone();
        }
        let drop = (-k - self.exponent) as u64;
        Self::new(shr_floor(&self.mantissa, drop), -k)
    }

    /// Smallest multiple of `2^-k` not below `self`.
    pub fn ceil_grid(&self, k: i64) -> Self {
        -(-self).floor_grid(k)
    }

    fn div_rounded(a: &Self, b: &Self, prec: u32, up: bool) -> Self {
        assert!(!b.is_zero(), "dyadic division by zero");
        if a.is_zero() {
            return Self::zero();
        }
        // Quotient mantissa gets about prec + 2 bits.
        let shift = prec as i64 + 2 + b.bit_len() as i64 - a.bit_len() as i64;
        let shift = shift.max(0) as u64;
        let num = &a.mantissa << shift;
        let q = if up {
            num.div_ceil(&b.mantissa)
        } else {
            num.div_floor(&b.mantissa)
        };
        let r = Self::new(q, a.exponent - b.exponent - shift as i64);
        if up {
            r.round_up(prec)
        } else {
            r.round_down(prec)
        }
    }

    pub fn div_down(a: &Self, b: &Self, prec: u32) -> Self {
        Self::div_rounded(a, b, prec, false)
    }

    pub fn div_up(a: &Self, b: &Self, prec: u32) -> Self {
        Self::div_rounded(a, b, prec, true)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as u64)
        } else {
            BigRational::new(
                self.mantissa.clone(),
                BigInt::one() << (-self.exponent) as u64,
            )
        }
    }

    /// Exact conversion when the denominator is a power of two.
    pub fn from_rational_exact(r: &BigRational) -> Option<Self> {
        let den = r.denom();
        let tz = den.trailing_zeros().unwrap_or(0);
        if (den >> tz) != BigInt::one() {
            return None;
        }
        Some(Self::new(r.numer().clone(), -(tz as i64)))
    }

    fn from_rational_rounded(r: &BigRational, prec: u32, up: bool) -> Self {
        if let Some(d) = Self::from_rational_exact(r) {
            return if up { d.round_up(prec) } else { d.round_down(prec) };
        }
        let n = Self::new(r.numer().clone(), 0);
        let d = Self::new(r.denom().clone(), 0);
        Self::div_rounded(&n, &d, prec, up)
    }

    pub fn from_rational_down(r: &BigRational, prec: u32) -> Self {
        Self::from_rational_rounded(r, prec, false)
    }

    pub fn from_rational_up(r: &BigRational, prec: u32) -> Self {
        Self::from_rational_rounded(r, prec, true)
    }

    /// Every finite `f64` is a dyadic rational.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & ((1u64 << 52) - 1)) as i64;
        let (m, e) = if exp_bits == 0 {
            (frac, -1074)
        } else {
            (frac | (1i64 << 52), exp_bits - 1075)
        };
        Some(Self::new(BigInt::from(sign * m), e))
    }

    /// Nearest-ish `f64`; diagnostic only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bl = self.bit_len() as i64;
        let (m, e) = if bl > 60 {
            (shr_floor(&self.mantissa, (bl - 60) as u64), self.exponent + bl - 60)
        } else {
            (self.mantissa.clone(), self.exponent)
        };
        let mut v = m.to_f64().unwrap_or(f64::NAN);
        let mut e = e.clamp(-2200, 2200);
        while e != 0 {
            let step = e.clamp(-1000, 1000);
            v *= 2f64.powi(step as i32);
            e -= step;
        }
        v
    }

    /// Decimal string with `digits` fractional digits, rounded in the given
    /// direction.
    pub fn to_decimal(&self, digits: u32, up: bool) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let r = self.to_rational() * BigRational::from_integer(scale.clone());
        let v = if up { r.ceil() } else { r.floor() }.to_integer();
        let neg = v.is_negative();
        let s = v.abs().to_string();
        let s = if s.len() <= digits as usize {
            format!("{}{}", "0".repeat(digits as usize + 1 - s.len()), s)
        } else {
            s
        };
        let (ip, fp) = s.split_at(s.len() - digits as usize);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{ip}")
        } else {
            format!("{sign}{ip}.{fp}")
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same sign: compare magnitudes by order of magnitude first.
        let (la, lb) = (self.log2_upper(), other.log2_upper());
        let mag = if la != lb {
            la.cmp(&lb)
        } else {
            let e = self.exponent.min(other.exponent);
            let ma = self.mantissa.abs() << (self.exponent - e) as u64;
            let mb = other.mantissa.abs() << (other.exponent - e) as u64;
            ma.cmp(&mb)
        };
        if sa > 0 {
            mag
        } else {
            mag.reverse()
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &'a Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(rhs.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &rhs.mantissa << (rhs.exponent - e) as u64;
        Dyadic::new(a + b, e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &'a Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &'a Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        // Product of odd mantissas is odd: already canonical.
        Dyadic {
            mantissa: &self.mantissa * &rhs.mantissa,
            exponent: self.exponent + rhs.exponent,
        }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: &'a Dyadic) -> Dyadic {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{} (~{:e})", self.mantissa, self.exponent, self.to_f64())
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent >= 0 {
            write!(f, "{}", &self.mantissa << self.exponent as u64)
        } else {
            write!(f, "{}/2^{}", self.mantissa, -self.exponent)
        }
    }
}
