//! Rigorous complex exponential (and the trigonometric functions built on it).

use super::{ComplexBox, Dyadic, Interval};
use crate::work;

/// `exp` of a point `c`: halve until `|c / 2^k| <= 1/2`, sum the Taylor
/// series with an explicit tail bound, then square `k` times.
fn exp_point(c: &ComplexBox, prec: u32) -> ComplexBox {
    debug_assert!(c.is_point());
    let mag = c.mag();
    // k with mag * 2^-k <= 1/2.
    let mut k: i64 = 0;
    if !mag.is_zero() {
        let e = mag.log2_upper(); // mag < 2^e
        k = (e + 1).max(0);
    }
    let w = c.shl(-k);
    let wmag = w.mag(); // <= 1/2
    let p = prec + k as u32 + 12;

    let mut sum = ComplexBox::one();
    let mut term = ComplexBox::one();
    let mut j: u64 = 1;
    // Bound on |w|^j / j!, tracked as a dyadic upper bound.
    let mut term_bound = Dyadic::one();
    let target = Dyadic::pow2(-(p as i64) - 2);
    loop {
        term = (&term * &w).div_int(j, p);
        sum = (&sum + &term).round(p);
        term_bound = Dyadic::div_up(&(&term_bound * &wmag).round_up(p), &Dyadic::from_i64(j as i64), p);
        j += 1;
        // Tail: sum_{i>=j} |w|^i/i! <= term_bound * |w| / j * 2 for |w| <= 1/2.
        let tail = Dyadic::div_up(&(&term_bound * &wmag).shl(1).round_up(p), &Dyadic::from_i64(j as i64), p);
        if tail <= target || wmag.is_zero() {
            sum = sum.widen(&tail);
            break;
        }
    }
    for _ in 0..k {
        sum = sum.sqr().round(p);
    }
    sum
}

/// Enclosure of `exp(z)` for every `z` in the box.
///
/// For a point the width is at most `2^-bits`, and results for increasing
/// `bits` are nested; for a box the extra width is the first-order
/// propagation `|exp(mid)| * r * e^r` with `r` the box radius.
pub fn exp_box(z: &ComplexBox, bits: u32) -> ComplexBox {
    exp_raw(z, bits + 2).publish(bits)
}

/// Unpublished enclosure: width at most `2^-(bits+1)` for a point.
pub(crate) fn exp_raw(z: &ComplexBox, bits: u32) -> ComplexBox {
    work::exp_eval();
    let bits = bits.max(1);
    let centre = z.mid();
    // Absolute accuracy needs extra bits when |exp(z)| is large.
    let re_hi = z.re_hi();
    let growth = if re_hi.is_positive() {
        (re_hi.to_f64() * std::f64::consts::LOG2_E).ceil() as u32 + 1
    } else {
        0
    };
    let mut guard = 8;
    let core = loop {
        let e = exp_point(&centre, bits + growth + guard);
        if e.width_within(bits as i64 + 1) || guard > 256 {
            break e;
        }
        guard *= 2;
    };
    if z.is_point() {
        return core;
    }
    // exp(c + w) = exp(c) * (1 + (exp(w) - 1)), |exp(w) - 1| <= r e^r.
    let r = z.rad();
    let er = if r <= Dyadic::pow2(-1) {
        // e^r <= 1 / (1 - r) <= 2
        Dyadic::from_i64(2)
    } else {
        // e^r <= 3^ceil(r)
        let n = r.to_f64().ceil() as u32 + 1;
        Dyadic::new(num_bigint::BigInt::from(3u32).pow(n), 0)
    };
    let rho = (&r * &er).round_up(bits + 8);
    let factor = ComplexBox::new(
        Interval::new(&Dyadic::one() - &rho, &Dyadic::one() + &rho),
        Interval::symmetric(rho),
    );
    (&core * &factor).round(bits + growth + 16)
}

/// `sin(z) = (e^{iz} - e^{-iz}) / (2i)`.
pub fn sin_box(z: &ComplexBox, bits: u32) -> ComplexBox {
    let iz = z.mul_i();
    let a = exp_raw(&iz, bits + 2);
    let b = exp_raw(&-&iz, bits + 2);
    // 1/(2i) = -i/2
    -((&a - &b).mul_i().shl(-1))
}

/// `cos(z) = (e^{iz} + e^{-iz}) / 2`.
pub fn cos_box(z: &ComplexBox, bits: u32) -> ComplexBox {
    let iz = z.mul_i();
    let a = exp_raw(&iz, bits + 2);
    let b = exp_raw(&-&iz, bits + 2);
    (&a + &b).shl(-1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    /// Independent oracle: e as a rational partial sum with a crude tail bound.
    fn e_bounds(terms: u32) -> (BigRational, BigRational) {
        let mut s = BigRational::from_integer(0.into());
        let mut f = BigRational::from_integer(1.into());
        for k in 0..terms {
            if k > 0 {
                f /= BigRational::from_integer((k as i64).into());
            }
            s += &f;
        }
        let tail = f * BigRational::from_integer(2.into()) / BigRational::from_integer((terms as i64).into());
        (s.clone(), s + tail)
    }

    fn contains_rational_interval(b: &ComplexBox, lo: &BigRational, hi: &BigRational) -> bool {
        b.re_lo().to_rational() <= *lo && *hi <= b.re_hi().to_rational()
    }

    #[test]
    fn exp_zero_is_one() {
        let r = exp_box(&ComplexBox::zero(), 30);
        assert!(r.contains(&ComplexBox::one()));
        assert!(r.width_within(30));
    }

    #[test]
    fn exp_one_contains_e() {
        let r = exp_box(&ComplexBox::one(), 20);
        let (lo, hi) = e_bounds(40);
        assert!(contains_rational_interval(&r, &lo, &hi));
        assert!(r.width_within(20));
        assert!(r.im().contains_zero());
    }

    #[test]
    fn exp_i_pi_contains_minus_one() {
        // The f64 nearest pi lies below it, the next one up above it.
        let pi_lo = Dyadic::from_f64(std::f64::consts::PI).unwrap();
        let pi_hi = Dyadic::from_f64(f64::from_bits(std::f64::consts::PI.to_bits() + 1)).unwrap();
        let z = ComplexBox::new(Interval::zero(), Interval::new(pi_lo, pi_hi));
        let r = exp_box(&z, 30);
        assert!(r.contains_point(&Dyadic::from_i64(-1), &Dyadic::zero()));
        assert!(r.width_within(28));
    }

    #[test]
    fn precision_monotone_and_nested() {
        let z = ComplexBox::point(Dyadic::from_f64(-1.25).unwrap(), Dyadic::from_f64(2.5).unwrap());
        for n in [8u32, 16, 24, 40] {
            let a = exp_box(&z, n);
            let b = exp_box(&z, n + 8);
            assert!(b.width() <= a.width());
            assert!(a.contains(&b), "nesting failed at {n}");
        }
    }

    #[test]
    fn sin_cos_small_values() {
        let x = ComplexBox::real(Dyadic::pow2(-1));
        let s = sin_box(&x, 40);
        let c = cos_box(&x, 40);
        // sin(1/2) = 0.479425538604203, cos(1/2) = 0.8775825618903728
        assert!((s.re().mid().to_f64() - 0.479425538604203).abs() < 1e-12);
        assert!((c.re().mid().to_f64() - 0.8775825618903728).abs() < 1e-12);
        assert!(s.im().contains_zero() && c.im().contains_zero());
    }
}
