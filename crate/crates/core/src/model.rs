//! Scalar linear ODEs, first-order systems, and the LIF builder.

use num_traits::Signed;

use crate::arith::{CMatrix, GaussianRational};
use crate::poly::{MatPoly, Poly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("leading coefficient a_m is zero")]
    ZeroLeadingCoefficient,
    #[error("time constants must be positive")]
    NonpositiveTimeConstant,
    #[error("threshold must exceed the resting potential")]
    ThresholdNotAboveRest,
    #[error("{what}: expected {expected}, found {found}")]
    Dimension { what: &'static str, expected: usize, found: usize },
}

/// `sum_{i<=m} a_i y^(i) = sum_{k<=n} b_k u^(k)` on `[0, 1]` with initial
/// values `y^(i)(0) = y0[i]` for `i < m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearODE {
    a: Vec<GaussianRational>,
    b: Vec<GaussianRational>,
    y0: Vec<GaussianRational>,
}

impl LinearODE {
    /// Trailing zero `b` coefficients are dropped; an all-zero `b` means
    /// a homogeneous equation.
    pub fn new(a: Vec<GaussianRational>, mut b: Vec<GaussianRational>, y0: Vec<GaussianRational>) -> Result<Self, ModelError> {
        if a.last().is_none_or(GaussianRational::is_zero) {
            return Err(ModelError::ZeroLeadingCoefficient);
        }
        while b.len() > 1 && b.last().is_some_and(GaussianRational::is_zero) {
            b.pop();
        }
        if b.is_empty() {
            b.push(GaussianRational::zero());
        }
        if y0.len() != a.len() - 1 {
            return Err(ModelError::Dimension {
                what: "initial values",
                expected: a.len() - 1,
                found: y0.len(),
            });
        }
        Ok(LinearODE { a, b, y0 })
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_i64(a: &[i64], b: &[i64], y0: &[i64]) -> Result<Self, ModelError> {
        let g = |v: &[i64]| v.iter().map(|&x| GaussianRational::from_i64(x)).collect();
        Self::new(g(a), g(b), g(y0))
    }

    /// `(m, n)`.
    pub fn order(&self) -> (usize, usize) {
        (self.a.len() - 1, self.b.len() - 1)
    }

    pub fn a(&self) -> &[GaussianRational] {
        &self.a
    }

    pub fn b(&self) -> &[GaussianRational] {
        &self.b
    }

    pub fn y0(&self) -> &[GaussianRational] {
        &self.y0
    }

    pub fn with_y0(&self, y0: Vec<GaussianRational>) -> Result<Self, ModelError> {
        Self::new(self.a.clone(), self.b.clone(), y0)
    }

    pub fn is_real(&self) -> bool {
        self.a.iter().chain(&self.b).chain(&self.y0).all(GaussianRational::is_real)
    }

    /// Divide every coefficient by `a_m`.
    pub fn normalize(&self) -> LinearODE {
        let inv = self.a.last().unwrap().recip().expect("a_m is nonzero");
        LinearODE {
            a: self.a.iter().map(|x| x * &inv).collect(),
            b: self.b.iter().map(|x| x * &inv).collect(),
            y0: self.y0.clone(),
        }
    }

    /// `(P_y, P_u)`.
    pub fn char_polys(&self) -> (Poly, Poly) {
        (Poly::new(self.a.clone()), Poly::new(self.b.clone()))
    }
}

/// `A_1 y' + A_0 y = sum_j B_j u^(j)` in `d` dimensions. Higher-order terms
/// `A_2, ...` can be stored but are rejected by the analyzer and solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ODESystem {
    d: usize,
    a: Vec<CMatrix>,
    b: Vec<CMatrix>,
    y0: Vec<GaussianRational>,
}

impl ODESystem {
    /// `a = [A_0, A_1, ...]`, `b = [B_0, ...]`.
    pub fn new(a: Vec<CMatrix>, b: Vec<CMatrix>, y0: Vec<GaussianRational>) -> Result<Self, ModelError> {
        let d = y0.len();
        if a.len() < 2 {
            return Err(ModelError::Dimension {
                what: "left-hand matrices",
                expected: 2,
                found: a.len(),
            });
        }
        if b.is_empty() {
            return Err(ModelError::Dimension {
                what: "right-hand matrices",
                expected: 1,
                found: 0,
            });
        }
        for m in a.iter().chain(&b) {
            if m.dim() != d {
                return Err(ModelError::Dimension {
                    what: "matrix dimension",
                    expected: d,
                    found: m.dim(),
                });
            }
        }
        if a.last().unwrap().is_zero() {
            return Err(ModelError::ZeroLeadingCoefficient);
        }
        Ok(ODESystem { d, a, b, y0 })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// `(m, n)`.
    pub fn order(&self) -> (usize, usize) {
        (self.a.len() - 1, self.b.len() - 1)
    }

    pub fn a1(&self) -> &CMatrix {
        &self.a[1]
    }

    pub fn a0(&self) -> &CMatrix {
        &self.a[0]
    }

    pub fn a(&self) -> &[CMatrix] {
        &self.a
    }

    pub fn b(&self) -> &[CMatrix] {
        &self.b
    }

    pub fn y0(&self) -> &[GaussianRational] {
        &self.y0
    }

    pub fn is_real(&self) -> bool {
        self.a.iter().chain(&self.b).all(CMatrix::is_real) && self.y0.iter().all(GaussianRational::is_real)
    }

    /// `(P_y, P_u)` as matrix polynomials.
    pub fn char_polys(&self) -> (MatPoly, MatPoly) {
        (
            MatPoly::new(self.d, self.a.clone()).expect("dimensions checked"),
            MatPoly::new(self.d, self.b.clone()).expect("dimensions checked"),
        )
    }
}

/// The LIF neuron as a 2-system in the shifted state `(V - V_rest, I)`:
/// `A_1 = I`, `A_0 = [[1/tau_m, -1/tau_m], [0, 1/tau_s]]`,
/// `B_0 = diag(1/tau_s, 1/tau_s)`, driven by `u = (0, I_e)`.
///
/// The `(0, 0)` entry of `B_0` only ever multiplies the zero input
/// component, so it does not affect solutions.
pub fn build_lif(
    tau_m: &GaussianRational,
    tau_s: &GaussianRational,
    v_rest: &GaussianRational,
    v0: &GaussianRational,
    i0: &GaussianRational,
) -> Result<ODESystem, ModelError> {
    let positive = |x: &GaussianRational| x.is_real() && x.re().is_positive();
    if !positive(tau_m) || !positive(tau_s) {
        return Err(ModelError::NonpositiveTimeConstant);
    }
    let im = tau_m.recip().unwrap();
    let is = tau_s.recip().unwrap();
    let z = GaussianRational::zero();
    let a0 = CMatrix::from_row_major(2, vec![im.clone(), -&im, z.clone(), is.clone()]).unwrap();
    let b0 = CMatrix::diag(&[is.clone(), is]);
    ODESystem::new(vec![a0, CMatrix::identity(2)], vec![b0], vec![v0 - v_rest, i0.clone()])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: i64) -> GaussianRational {
        GaussianRational::from_i64(v)
    }

    #[test]
    fn normalize_examples() {
        let o = LinearODE::from_i64(&[2, 2], &[1], &[0]).unwrap().normalize();
        assert_eq!(o.a(), &[g(1), g(1)]);
        assert_eq!(o.b(), &[GaussianRational::ratio(1, 2)]);
        assert_eq!(o.normalize(), o);

        let o = LinearODE::from_i64(&[1, 0, 3], &[3], &[0, 0]).unwrap().normalize();
        assert_eq!(o.a(), &[GaussianRational::ratio(1, 3), g(0), g(1)]);
        assert_eq!(o.b(), &[g(1)]);
        assert!(o.char_polys().0.is_monic());
    }

    #[test]
    fn validation() {
        assert_eq!(LinearODE::from_i64(&[0, 0], &[1], &[0]), Err(ModelError::ZeroLeadingCoefficient));
        assert!(matches!(LinearODE::from_i64(&[1, 1], &[1], &[]), Err(ModelError::Dimension { .. })));
    }

    #[test]
    fn char_poly_readoff() {
        let (py, pu) = LinearODE::from_i64(&[1, 1], &[1], &[0]).unwrap().char_polys();
        assert_eq!(py, Poly::from_i64(&[1, 1]));
        assert_eq!(pu, Poly::one());
    }

    #[test]
    fn lif_matrices() {
        let one = g(1);
        let s = build_lif(&one, &one, &g(0), &g(0), &g(0)).unwrap();
        assert_eq!(*s.a0(), CMatrix::from_i64_rows(&[&[1, -1], &[0, 1]]));
        assert_eq!(s.b()[0], CMatrix::identity(2));

        let s = build_lif(&one, &GaussianRational::ratio(1, 2), &g(-3), &g(1), &g(0)).unwrap();
        assert_eq!(*s.a0(), CMatrix::from_i64_rows(&[&[1, -1], &[0, 2]]));
        assert_eq!(s.b()[0], CMatrix::from_i64_rows(&[&[2, 0], &[0, 2]]));
        assert_eq!(s.y0(), &[g(4), g(0)]);
        assert!(s.a0().commutator(&s.b()[0]).is_zero());

        assert_eq!(build_lif(&g(0), &one, &g(0), &g(0), &g(0)), Err(ModelError::NonpositiveTimeConstant));
    }
}
