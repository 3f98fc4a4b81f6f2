use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{ArithError, GaussianRational, MatrixBox};

/// Square matrix over the Gaussian rationals, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CMatrix {
    d: usize,
    data: Vec<GaussianRational>,
}

impl CMatrix {
    pub fn zeros(d: usize) -> Self {
        CMatrix {
            d,
            data: vec![GaussianRational::zero(); d * d],
        }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d);
        for k in 0..d {
            m.data[k * d + k] = GaussianRational::one();
        }
        m
    }

    pub fn scalar(d: usize, s: &GaussianRational) -> Self {
        let mut m = Self::zeros(d);
        for k in 0..d {
            m.data[k * d + k] = s.clone();
        }
        m
    }

    pub fn diag(entries: &[GaussianRational]) -> Self {
        let d = entries.len();
        let mut m = Self::zeros(d);
        for (k, e) in entries.iter().enumerate() {
            m.data[k * d + k] = e.clone();
        }
        m
    }

    /// Build from `d*d` row-major entries.
    pub fn from_row_major(d: usize, data: Vec<GaussianRational>) -> Result<Self, ArithError> {
        if data.len() != d * d {
            return Err(ArithError::DimensionMismatch {
                expected: d * d,
                found: data.len(),
            });
        }
        Ok(CMatrix { d, data })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let d = rows.len();
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), d);
                r.iter().map(|&v| GaussianRational::from_i64(v))
            })
            .collect();
        CMatrix { d, data }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussianRational {
        &self.data[r * self.d + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussianRational) {
        self.data[r * self.d + c] = v;
    }

    pub fn entries(&self) -> &[GaussianRational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GaussianRational::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(GaussianRational::is_real)
    }

    pub fn scale(&self, s: &GaussianRational) -> CMatrix {
        CMatrix {
            d: self.d,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> CMatrix {
        let mut acc = Self::identity(self.d);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &CMatrix) -> CMatrix {
        &(self * other) - &(other * self)
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Vec<GaussianRational> {
        (0..self.d)
            .map(|r| {
                (0..self.d).fold(GaussianRational::zero(), |acc, c| {
                    &acc + &(self.get(r, c) * &v[c])
                })
            })
            .collect()
    }

    /// Exact inverse by Gauss–Jordan elimination over the Gaussian rationals.
    pub fn inverse(&self) -> Result<CMatrix, ArithError> {
        let d = self.d;
        let mut a = self.clone();
        let mut inv = Self::identity(d);
        for col in 0..d {
            let pivot = (col..d)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(ArithError::Singular)?;
            if pivot != col {
                for c in 0..d {
                    a.data.swap(pivot * d + c, col * d + c);
                    inv.data.swap(pivot * d + c, col * d + c);
                }
            }
            let p = a.get(col, col).recip().expect("pivot is nonzero");
            for c in 0..d {
                let v = a.get(col, c) * &p;
                a.set(col, c, v);
                let w = inv.get(col, c) * &p;
                inv.set(col, c, w);
            }
            for r in 0..d {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for c in 0..d {
                    let v = a.get(r, c) - &(&f * a.get(col, c));
                    a.set(r, c, v);
                    let w = inv.get(r, c) - &(&f * inv.get(col, c));
                    inv.set(r, c, w);
                }
            }
        }
        Ok(inv)
    }

    /// Solve `self * x = b` exactly.
    pub fn solve(&self, b: &[GaussianRational]) -> Result<Vec<GaussianRational>, ArithError> {
        Ok(self.inverse()?.mul_vec(b))
    }

    pub fn to_box(&self, prec: u32) -> MatrixBox {
        MatrixBox::from_entries(self.d, self.data.iter().map(|x| x.to_box(prec)).collect())
    }
}

impl<'a> Add<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn add(self, o: &'a CMatrix) -> CMatrix {
        assert_eq!(self.d, o.d, "dimension mismatch");
        CMatrix {
            d: self.d,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn sub(self, o: &'a CMatrix) -> CMatrix {
        assert_eq!(self.d, o.d, "dimension mismatch");
        CMatrix {
            d: self.d,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn mul(self, o: &'a CMatrix) -> CMatrix {
        assert_eq!(self.d, o.d, "dimension mismatch");
        let d = self.d;
        let mut out = CMatrix::zeros(d);
        for r in 0..d {
            for c in 0..d {
                let mut acc = GaussianRational::zero();
                for k in 0..d {
                    let (a, b) = (self.get(r, k), o.get(k, c));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(r, c, acc);
            }
        }
        out
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix {
            d: self.d,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }
}

impl fmt::Display for CMatrix {
    /// `[[a, b], [c, d]]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.d {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.d {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_examples() {
        let i2 = CMatrix::identity(2);
        assert_eq!(i2.inverse().unwrap(), i2);

        let d = CMatrix::from_i64_rows(&[&[2, 0], &[0, 4]]);
        let expect = CMatrix::diag(&[GaussianRational::ratio(1, 2), GaussianRational::ratio(1, 4)]);
        assert_eq!(d.inverse().unwrap(), expect);

        let u = CMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]);
        let ui = u.inverse().unwrap();
        assert_eq!(ui, CMatrix::from_i64_rows(&[&[1, -1], &[0, 1]]));
        assert_eq!(&u * &ui, i2);
    }

    #[test]
    fn singular_detected() {
        let s = CMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.inverse(), Err(ArithError::Singular));
    }

    #[test]
    fn complex_inverse_and_pivoting() {
        let mut m = CMatrix::zeros(3);
        m.set(0, 1, GaussianRational::i());
        m.set(1, 0, GaussianRational::complex(1, 2, 1, 1));
        m.set(2, 2, GaussianRational::from_i64(3));
        m.set(1, 2, GaussianRational::from_i64(-1));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, CMatrix::identity(3));
        assert_eq!(&inv * &m, CMatrix::identity(3));
    }
}
