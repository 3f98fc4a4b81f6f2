use crate::arith::{ArithError, CMatrix};

/// Matrix polynomial `sum C_k X^k` with square coefficients of one size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatPoly {
    d: usize,
    coeffs: Vec<CMatrix>,
}

impl MatPoly {
    /// Trailing zero matrices are dropped.
    pub fn new(d: usize, mut coeffs: Vec<CMatrix>) -> Result<Self, ArithError> {
        if let Some(bad) = coeffs.iter().find(|c| c.dim() != d) {
            return Err(ArithError::DimensionMismatch {
                expected: d * d,
                found: bad.dim() * bad.dim(),
            });
        }
        while coeffs.last().is_some_and(CMatrix::is_zero) {
            coeffs.pop();
        }
        Ok(MatPoly { d, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &[CMatrix] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `sum C_k M^k`, coefficient on the left of the power.
    pub fn eval(&self, m: &CMatrix) -> Result<CMatrix, ArithError> {
        if m.dim() != self.d {
            return Err(ArithError::DimensionMismatch {
                expected: self.d * self.d,
                found: m.dim() * m.dim(),
            });
        }
        let mut acc = CMatrix::zeros(self.d);
        let mut power = CMatrix::identity(self.d);
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                power = &power * m;
            }
            acc = &acc + &(c * &power);
        }
        Ok(acc)
    }

    /// Multiply every coefficient on the left by `l`.
    pub fn left_mul(&self, l: &CMatrix) -> MatPoly {
        MatPoly {
            d: self.d,
            coeffs: self.coeffs.iter().map(|c| l * c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        let a0 = CMatrix::from_i64_rows(&[&[1, -1], &[0, 2]]);
        let p = MatPoly::new(2, vec![a0.clone(), CMatrix::identity(2)]).unwrap();
        assert!(p.eval(&-&a0).unwrap().is_zero());

        let b0 = CMatrix::from_i64_rows(&[&[3, 1], &[4, 1]]);
        let c = MatPoly::new(2, vec![b0.clone()]).unwrap();
        assert_eq!(c.eval(&a0).unwrap(), b0);

        let x = MatPoly::new(2, vec![CMatrix::zeros(2), CMatrix::identity(2)]).unwrap();
        assert_eq!(x.eval(&a0).unwrap(), a0);

        assert!(x.eval(&CMatrix::identity(3)).is_err());
    }

    #[test]
    fn coefficient_order_is_observable() {
        let c = CMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]);
        let m = CMatrix::from_i64_rows(&[&[1, 0], &[0, 2]]);
        let p = MatPoly::new(2, vec![CMatrix::zeros(2), c.clone()]).unwrap();
        assert_eq!(p.eval(&m).unwrap(), &c * &m);
        assert_ne!(p.eval(&m).unwrap(), &m * &c);
    }
}
