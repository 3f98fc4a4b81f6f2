use std::ops::{Add, Mul, Sub};

use super::{ComplexBox, Dyadic};

/// Square matrix of complex enclosures, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixBox {
    d: usize,
    entries: Vec<ComplexBox>,
}

impl MatrixBox {
    pub fn from_entries(d: usize, entries: Vec<ComplexBox>) -> Self {
        assert_eq!(entries.len(), d * d, "matrix must be square");
        MatrixBox { d, entries }
    }

    pub fn zeros(d: usize) -> Self {
        Self::from_entries(d, vec![ComplexBox::zero(); d * d])
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d);
        for k in 0..d {
            m.entries[k * d + k] = ComplexBox::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, r: usize, c: usize) -> &ComplexBox {
        &self.entries[r * self.d + c]
    }

    pub fn entries(&self) -> &[ComplexBox] {
        &self.entries
    }

    pub fn map(&self, f: impl Fn(&ComplexBox) -> ComplexBox) -> MatrixBox {
        MatrixBox {
            d: self.d,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn round(&self, prec: u32) -> MatrixBox {
        self.map(|e| e.round(prec))
    }

    pub fn scale(&self, s: &ComplexBox) -> MatrixBox {
        self.map(|e| e * s)
    }

    pub fn shl(&self, k: i64) -> MatrixBox {
        self.map(|e| e.shl(k))
    }

    pub fn width(&self) -> Dyadic {
        self.entries
            .iter()
            .map(ComplexBox::width)
            .fold(Dyadic::zero(), |a, b| Dyadic::max(&a, &b))
    }

    /// Entrywise containment.
    pub fn contains(&self, o: &MatrixBox) -> bool {
        self.d == o.d && self.entries.iter().zip(&o.entries).all(|(a, b)| a.contains(b))
    }

    pub fn overlaps(&self, o: &MatrixBox) -> bool {
        self.d == o.d && self.entries.iter().zip(&o.entries).all(|(a, b)| a.overlaps(b))
    }

    /// Upper bound on the max row-sum norm.
    pub fn norm_inf(&self) -> Dyadic {
        (0..self.d)
            .map(|r| {
                (0..self.d).fold(Dyadic::zero(), |acc, c| &acc + &self.get(r, c).mag())
            })
            .fold(Dyadic::zero(), |a, b| Dyadic::max(&a, &b))
    }

    pub fn mul_vec(&self, v: &[ComplexBox]) -> Vec<ComplexBox> {
        (0..self.d)
            .map(|r| {
                (0..self.d).fold(ComplexBox::zero(), |acc, c| &acc + &(self.get(r, c) * &v[c]))
            })
            .collect()
    }

    fn taylor_exp(a: &MatrixBox, prec: u32, target: &Dyadic) -> MatrixBox {
        let d = a.d;
        let na = a.norm_inf();
        let mut sum = MatrixBox::identity(d);
        let mut term = MatrixBox::identity(d);
        let mut bound = Dyadic::one();
        let mut k: u64 = 1;
        loop {
            term = (&term * a).map(|e| e.div_int(k, prec));
            sum = (&sum + &term).round(prec);
            bound = Dyadic::div_up(&(&bound * &na).round_up(prec), &Dyadic::from_i64(k as i64), prec);
            k += 1;
            // ||sum_{j>=k} A^j/j!|| <= 2 ||A||^k / k! when ||A|| <= 1/2.
            let tail = Dyadic::div_up(&(&bound * &na).shl(1).round_up(prec), &Dyadic::from_i64(k as i64), prec);
            if tail <= *target || na.is_zero() {
                return sum.map(|e| e.widen(&tail));
            }
        }
    }

    fn exp_unpublished(&self, bits: u32) -> MatrixBox {
        let n = self.norm_inf();
        // s with n * 2^-s <= 1/2
        let s: i64 = if n.is_zero() { 0 } else { (n.log2_upper() + 1).max(0) };
        let growth = (n.to_f64() * std::f64::consts::LOG2_E).ceil().max(0.0) as u32;
        let exact_input = self.entries.iter().all(ComplexBox::is_point);
        let mut guard = 10;
        loop {
            let p = bits + s as u32 + growth + guard;
            let target = Dyadic::pow2(-(p as i64));
            let a = self.shl(-s);
            let mut r = Self::taylor_exp(&a, p, &target);
            for _ in 0..s {
                r = (&r * &r).round(p);
            }
            if !exact_input || r.width() <= Dyadic::pow2(-(bits as i64) - 2) || guard > 512 {
                return r;
            }
            guard *= 2;
        }
    }

    /// Entrywise enclosure of `exp(self)` by scaling and squaring.
    ///
    /// For exact (point) input each entry has width at most `2^-bits`, and
    /// results at increasing `bits` are nested.
    pub fn exp(&self, bits: u32) -> MatrixBox {
        self.exp_unpublished(bits).map(|e| e.publish(bits))
    }
}

/// Free-function form of [`MatrixBox::exp`].
pub fn mat_exp(m: &MatrixBox, bits: u32) -> MatrixBox {
    m.exp(bits)
}

impl<'a> Add<&'a MatrixBox> for &'a MatrixBox {
    type Output = MatrixBox;
    fn add(self, o: &'a MatrixBox) -> MatrixBox {
        assert_eq!(self.d, o.d);
        MatrixBox {
            d: self.d,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a MatrixBox> for &'a MatrixBox {
    type Output = MatrixBox;
    fn sub(self, o: &'a MatrixBox) -> MatrixBox {
        assert_eq!(self.d, o.d);
        MatrixBox {
            d: self.d,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a MatrixBox> for &'a MatrixBox {
    type Output = MatrixBox;
    fn mul(self, o: &'a MatrixBox) -> MatrixBox {
        assert_eq!(self.d, o.d);
        let d = self.d;
        let mut entries = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                let mut acc = ComplexBox::zero();
                for k in 0..d {
                    acc = &acc + &(self.get(r, k) * o.get(k, c));
                }
                entries.push(acc);
            }
        }
        MatrixBox { d, entries }
    }
}
