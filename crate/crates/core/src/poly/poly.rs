use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::PolyError;
use crate::arith::{ComplexBox, GaussianRational};

/// Univariate polynomial over the Gaussian rationals; `coeffs[i]` is the
/// coefficient of `X^i`. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<GaussianRational>,
}

/// Polynomial with enclosure coefficients, produced by deflating at a box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxPoly {
    pub coeffs: Vec<ComplexBox>,
}

impl BoxPoly {
    pub fn eval(&self, z: &ComplexBox, prec: u32) -> ComplexBox {
        let mut acc = ComplexBox::zero();
        for c in self.coeffs.iter().rev() {
            acc = (&(&acc * z) + c).round(prec);
        }
        acc
    }

    pub fn contains(&self, p: &Poly) -> bool {
        let n = self.coeffs.len().max(p.coeffs.len());
        (0..n).all(|i| {
            let b = self.coeffs.get(i).cloned().unwrap_or_else(ComplexBox::zero);
            p.coeff(i).in_box(&b)
        })
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(GaussianRational::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate `X`.
    pub fn x() -> Self {
        Self::monomial(GaussianRational::one(), 1)
    }

    pub fn monomial(c: GaussianRational, k: usize) -> Self {
        let mut v = vec![GaussianRational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `X - z`.
    pub fn linear(z: &GaussianRational) -> Self {
        Self::new(vec![-z, GaussianRational::one()])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| GaussianRational::from_i64(c)).collect())
    }

    /// `prod (X - r)`.
    pub fn from_roots(roots: &[GaussianRational]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| &acc * &Self::linear(r))
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    /// Coefficient of `X^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> GaussianRational {
        self.coeffs.get(i).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(GaussianRational::is_one)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(GaussianRational::is_real)
    }

    pub fn scale(&self, s: &GaussianRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Divide by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.recip().expect("lead is nonzero")),
        }
    }

    pub fn eval(&self, z: &GaussianRational) -> GaussianRational {
        self.coeffs
            .iter()
            .rev()
            .fold(GaussianRational::zero(), |acc, c| &(&acc * z) + c)
    }

    /// Horner evaluation in box arithmetic.
    pub fn eval_box(&self, z: &ComplexBox, prec: u32) -> ComplexBox {
        let mut acc = ComplexBox::zero();
        for c in self.coeffs.iter().rev() {
            acc = (&(&acc * z) + &c.to_box(prec)).round(prec);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &GaussianRational::from_i64(i as i64))
                .collect(),
        )
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Poly {
        let mut v = vec![GaussianRational::zero()];
        for (i, c) in self.coeffs.iter().enumerate() {
            v.push(c * &GaussianRational::ratio(1, i as i64 + 1));
        }
        Poly::new(v)
    }

    /// `P(X + s)`.
    pub fn shift(&self, s: &GaussianRational) -> Poly {
        let lin = Poly::new(vec![s.clone(), GaussianRational::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * &lin) + &Poly::constant(c.clone()))
    }

    pub fn divmod(&self, d: &Poly) -> Result<(Poly, Poly), PolyError> {
        let dd = d.degree().ok_or(PolyError::DivisionByZeroPoly)?;
        let inv = d.lead().unwrap().recip().expect("lead is nonzero");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![GaussianRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = &r[k + j] - &(&c * dc);
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(q), Poly::new(r)))
    }

    /// Whether `self` divides `p` exactly.
    pub fn divides(&self, p: &Poly) -> Result<bool, PolyError> {
        Ok(p.divmod(self)?.1.is_zero())
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divmod(&b).expect("b is nonzero").1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Yun's square-free decomposition: monic, pairwise coprime, square-free
    /// factors `g_k` with `self = lead * prod g_k^k`. Constant factors are
    /// omitted.
    pub fn squarefree(&self) -> Vec<(Poly, u32)> {
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.divmod(&a0).unwrap().0;
        let mut c = df.divmod(&a0).unwrap().0;
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        let mut k = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), k));
            }
            b = b.divmod(&a).unwrap().0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.divmod(&a).unwrap().0;
            d = &c - &b.derivative();
            k += 1;
        }
        out
    }

    /// Synthetic division by `X - z`: returns `(R, b)` with
    /// `self = (X - z) R + b`.
    pub fn reduce_at_root(&self, z: &GaussianRational) -> Result<(Poly, GaussianRational), PolyError> {
        let m = match self.degree() {
            Some(m) if m >= 1 => m,
            _ => return Err(PolyError::DegreeZeroInput),
        };
        // b_{m-1} = a_m, b_{i-1} = a_i + z b_i
        let mut b = vec![GaussianRational::zero(); m];
        b[m - 1] = self.coeffs[m].clone();
        for i in (1..m).rev() {
            b[i - 1] = &self.coeffs[i] + &(z * &b[i]);
        }
        let rem = &self.coeffs[0] + &(z * &b[0]);
        Ok((Poly::new(b), rem))
    }

    /// Synthetic division by `X - z` for a box `z`: the coefficient and
    /// remainder boxes contain the exact values for every point of `z`.
    pub fn reduce_at_box(&self, z: &ComplexBox, prec: u32) -> Result<(BoxPoly, ComplexBox), PolyError> {
        let m = match self.degree() {
            Some(m) if m >= 1 => m,
            _ => return Err(PolyError::DegreeZeroInput),
        };
        let a: Vec<ComplexBox> = self.coeffs.iter().map(|c| c.to_box(prec)).collect();
        let mut b = vec![ComplexBox::zero(); m];
        b[m - 1] = a[m].clone();
        for i in (1..m).rev() {
            b[i - 1] = (&a[i] + &(z * &b[i])).round(prec);
        }
        let rem = (&a[0] + &(z * &b[0])).round(prec);
        Ok((BoxPoly { coeffs: b }, rem))
    }

    /// Multiply through by the least common denominator, giving Gaussian
    /// integer coefficients (real and imaginary numerators).
    pub fn integer_coeffs(&self) -> Vec<(BigInt, BigInt)> {
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = num_integer::lcm(l, c.re().denom().clone());
            l = num_integer::lcm(l, c.im().denom().clone());
        }
        let lr = BigRational::from_integer(l);
        self.coeffs
            .iter()
            .map(|c| ((c.re() * &lr).to_integer(), (c.im() * &lr).to_integer()))
            .collect()
    }

    /// Bit length of the largest Gaussian-integer coefficient after clearing
    /// denominators.
    pub fn height_bits(&self) -> u64 {
        self.integer_coeffs()
            .iter()
            .map(|(a, b)| a.bits().max(b.bits()))
            .max()
            .unwrap_or(0)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &'a Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &'a Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &'a Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![GaussianRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = &v[i + j] + &(a * b);
            }
        }
        Poly::new(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly {
    /// Descending powers, e.g. `X^2+3X+2`, `X-1/2`, `(1/2+i)X`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{k}"),
            };
            if c.is_real() {
                let neg = c.re() < &BigRational::zero();
                let mag = if neg { -c.clone() } else { c.clone() };
                if neg {
                    write!(f, "-")?;
                } else if !first {
                    write!(f, "+")?;
                }
                if k == 0 || !mag.is_one() {
                    write!(f, "{mag}")?;
                }
            } else {
                if !first {
                    write!(f, "+")?;
                }
                write!(f, "({c})")?;
            }
            write!(f, "{mono}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    #[test]
    fn divmod_examples() {
        let (q, r) = p(&[2, 3, 1]).divmod(&p(&[1, 1])).unwrap();
        assert_eq!(q, p(&[2, 1]));
        assert!(r.is_zero());
        let (q, r) = p(&[2, 3, 1]).divmod(&Poly::one()).unwrap();
        assert_eq!(q, p(&[2, 3, 1]));
        assert!(r.is_zero());
        let (q, r) = p(&[2, 1]).divmod(&p(&[1, 0, 1])).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, p(&[2, 1]));
        assert_eq!(p(&[1]).divmod(&Poly::zero()), Err(PolyError::DivisionByZeroPoly));
    }

    #[test]
    fn divides_examples() {
        assert!(p(&[1, 1]).divides(&p(&[2, 3, 1])).unwrap());
        assert!(!p(&[0, 1]).divides(&p(&[1])).unwrap());
        let q = p(&[5, -2, 0, 7]);
        assert!(q.divides(&q).unwrap());
    }

    #[test]
    fn reduce_examples() {
        let (r, b) = p(&[2, 3, 1]).reduce_at_root(&GaussianRational::from_i64(-1)).unwrap();
        assert_eq!(r, p(&[2, 1]));
        assert!(b.is_zero());

        let c = GaussianRational::complex(3, 7, -1, 2);
        let (r, b) = Poly::linear(&c).reduce_at_root(&c).unwrap();
        assert_eq!(r, Poly::one());
        assert!(b.is_zero());

        let q = p(&[4, 1, 5]);
        let (r, b) = q.reduce_at_root(&GaussianRational::zero()).unwrap();
        assert_eq!(r, p(&[1, 5]));
        assert_eq!(b, GaussianRational::from_i64(4));

        assert_eq!(p(&[3]).reduce_at_root(&GaussianRational::one()), Err(PolyError::DegreeZeroInput));
    }

    #[test]
    fn reduce_at_box_encloses_exact() {
        let q = p(&[1, -2, 0, 3]);
        let z = GaussianRational::ratio(1, 4);
        let (r, b) = q.reduce_at_root(&z).unwrap();
        let (rb, bb) = q.reduce_at_box(&z.to_box(64), 64).unwrap();
        assert!(rb.contains(&r));
        assert!(b.in_box(&bb));
    }

    #[test]
    fn squarefree_multiplicities() {
        // (X-1)^2 (X+2)^3 X
        let f = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &(&Poly::from_roots(&vec![GaussianRational::from_i64(-2); 3]) * &Poly::x());
        let sf = f.squarefree();
        assert_eq!(sf.len(), 3);
        assert!(sf.iter().any(|(g, k)| *k == 1 && *g == Poly::x()));
        let total: usize = sf.iter().map(|(g, k)| g.degree().unwrap() * *k as usize).sum();
        assert_eq!(total, 6);
        assert!(sf.iter().any(|(g, k)| *k == 2 && *g == p(&[-1, 1])));
        assert!(sf.iter().any(|(g, k)| *k == 3 && *g == p(&[2, 1])));
    }

    #[test]
    fn antiderivative_and_shift() {
        let q = p(&[1, 2, 3]);
        assert_eq!(q.antiderivative().derivative(), q);
        let s = q.shift(&GaussianRational::from_i64(1));
        assert_eq!(s.eval(&GaussianRational::zero()), q.eval(&GaussianRational::one()));
    }

    #[test]
    fn display_format() {
        assert_eq!(p(&[2, 3, 1]).to_string(), "X^2+3X+2");
        assert_eq!(p(&[2, 1]).to_string(), "X+2");
        assert_eq!(p(&[-1, 0, -1]).to_string(), "-X^2-1");
        assert_eq!(Poly::one().to_string(), "1");
        assert_eq!(Poly::new(vec![GaussianRational::ratio(-1, 2), GaussianRational::one()]).to_string(), "X-1/2");
    }
}
