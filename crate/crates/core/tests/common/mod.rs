//! Independent oracles built on exact rationals, and fixture helpers.
#![allow(dead_code)]

use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use odeblowup::arith::ComplexBox;
use odeblowup::GaussianRational;

/// A real number known to lie in `[lo, hi]`.
#[derive(Clone, Debug)]
pub struct Bracket {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Bracket {
    pub fn exact(x: BigRational) -> Self {
        Bracket { lo: x.clone(), hi: x }
    }

    pub fn add(&self, o: &Bracket) -> Bracket {
        Bracket {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn neg(&self) -> Bracket {
        Bracket {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn sub(&self, o: &Bracket) -> Bracket {
        self.add(&o.neg())
    }

    /// Product with an exact scalar.
    pub fn scale(&self, c: &BigRational) -> Bracket {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if c.is_negative() {
            Bracket { lo: b, hi: a }
        } else {
            Bracket { lo: a, hi: b }
        }
    }

    pub fn mid_f64(&self) -> f64 {
        to_f64(&((&self.lo + &self.hi) / BigRational::from_integer(2.into())))
    }
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

pub fn to_f64(r: &BigRational) -> f64 {
    let scale = BigInt::from(1u8) << 64u32;
    let v = (r * BigRational::from_integer(scale)).round().to_integer();
    v.to_string().parse::<f64>().unwrap() / 2f64.powi(64)
}

/// `e^x` for rational `|x| <= 8`, enclosed to better than `2^-100`.
pub fn exp_oracle(x: &BigRational) -> Bracket {
    assert!(x.abs() <= rat(8, 1));
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    let mut k = 0i64;
    let tol = BigRational::new(BigInt::one(), BigInt::one() << 100u32);
    loop {
        sum += &term;
        k += 1;
        term = &term * x / BigRational::from_integer(k.into());
        // Tail after this term is at most 2|term| once k > 2|x|.
        if BigRational::from_integer(k.into()) > x.abs() * rat(2, 1) && term.abs() * rat(2, 1) < tol {
            let r = term.abs() * rat(2, 1);
            return Bracket {
                lo: &sum - &r,
                hi: &sum + &r,
            };
        }
    }
}

/// `ln 2 = sum_k 1 / (k 2^k)`.
pub fn ln2_oracle() -> Bracket {
    let mut sum = BigRational::zero();
    let n = 120u32;
    for k in 1..=n {
        sum += BigRational::new(BigInt::one(), BigInt::from(k) << k);
    }
    // Tail is below 1 / ((n+1) 2^n).
    let tail = BigRational::new(BigInt::one(), BigInt::from(n + 1) << n);
    Bracket { lo: sum.clone(), hi: sum + tail }
}

/// The box certifies the oracle value: it contains the whole bracket on the
/// real axis.
pub fn box_contains(b: &ComplexBox, x: &Bracket) -> bool {
    b.re().lo().to_rational() <= x.lo && x.hi <= b.re().hi().to_rational() && b.im().contains_zero()
}

pub fn g(v: i64) -> GaussianRational {
    GaussianRational::from_i64(v)
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}
