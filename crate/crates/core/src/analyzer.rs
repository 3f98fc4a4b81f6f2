//! The blowup criterion for scalar equations and first-order systems, and
//! the polynomial-time solution operator `y = Q(D) u + y_h` for the
//! divisible case.

use crate::arith::{CMatrix, ComplexBox, Dyadic, GaussianRational};
use crate::model::{LinearODE, ODESystem};
use crate::poly::{certified_roots, multiset_root_inclusion, Inclusion, Poly, RootItem};
use crate::signal::{eval_enclosure, Signal, SignalError};
use crate::solver::closed::{cascade, BoxExpPoly, Rate};

/// Root-enclosure tightness used for the inclusion path.
const ROOT_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalyzeError {
    #[error("only first-order systems are supported, found order {0}")]
    UnsupportedOrder(usize),
    #[error("P_y does not divide P_u")]
    NotDivisible,
    #[error("input derivative of order {needed} is unavailable (highest is {available})")]
    DerivativeOrderUnavailable { needed: usize, available: usize },
    #[error("characteristic roots could not be separated")]
    RootUncertifiable,
    #[error(transparent)]
    Signal(#[from] SignalError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Verdict {
    /// `P_u = P_y Q`.
    TrivialNoBlowup { q: Poly },
    /// `witness` is a root of `P_y` with multiplicity `needed` that occurs in
    /// `P_u` only `available` times.
    Blowup {
        witness: RootItem,
        needed: u32,
        available: u32,
        /// `P_u(-a_0)` for normalized first-order equations.
        pu_at_minus_a0: Option<GaussianRational>,
    },
    SystemBlowup { criterion: CMatrix, literal_py: CMatrix },
    SystemNoBlowupCandidate { criterion: CMatrix, literal_py: CMatrix },
    CriterionNotApplicable { reason: String },
    Inconclusive { reason: String },
}

impl Verdict {
    /// 0 for trivial or candidate, 2 for blowup, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::TrivialNoBlowup { .. } | Verdict::SystemNoBlowupCandidate { .. } => 0,
            Verdict::Blowup { .. } | Verdict::SystemBlowup { .. } => 2,
            Verdict::CriterionNotApplicable { .. } | Verdict::Inconclusive { .. } => 3,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::TrivialNoBlowup { .. } => "trivial-no-blowup",
            Verdict::Blowup { .. } => "blowup",
            Verdict::SystemBlowup { .. } => "system-blowup",
            Verdict::SystemNoBlowupCandidate { .. } => "system-no-blowup-candidate",
            Verdict::CriterionNotApplicable { .. } => "criterion-not-applicable",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// Decide the criterion by exact division, cross-checked against root
/// inclusion. A disagreement is reported as `Inconclusive`.
pub fn classify_scalar(ode: &LinearODE) -> Verdict {
    let ode = ode.normalize();
    let (py, pu) = ode.char_polys();
    let exact = pu.divmod(&py).expect("P_y is nonzero");
    let divisible = exact.1.is_zero();

    let ry = certified_roots(&py, ROOT_BITS);
    let ru = certified_roots(&pu, ROOT_BITS);
    let inclusion = if pu.is_zero() {
        Inclusion::Included
    } else {
        multiset_root_inclusion(&ry, &ru)
    };
    match (divisible, inclusion) {
        (true, Inclusion::Included) => Verdict::TrivialNoBlowup { q: exact.0 },
        (false, Inclusion::NotIncluded { witness, available }) => {
            let item = ry.items()[witness].clone();
            let pu_at_minus_a0 = (ode.order().0 == 1).then(|| pu.eval(&-&ode.a()[0]));
            Verdict::Blowup {
                needed: item.multiplicity(),
                witness: item,
                available,
                pu_at_minus_a0,
            }
        }
        (_, Inclusion::Inconclusive { reason }) => Verdict::Inconclusive { reason },
        (d, _) => Verdict::Inconclusive {
            reason: format!("division says divisible = {d}, root inclusion disagrees"),
        },
    }
}

/// The system criterion: `K = sum_j C_j (-M)^j` with `M = A_1^{-1} A_0`,
/// `C_j = A_1^{-1} B_j`, valid when every `C_j` commutes with `M`. The
/// literal expression `A_1 (-M) + A_0` is reported alongside.
pub fn classify_system(sys: &ODESystem) -> Result<Verdict, AnalyzeError> {
    let (m, _) = sys.order();
    if m != 1 {
        return Err(AnalyzeError::UnsupportedOrder(m));
    }
    let Ok(inv) = sys.a1().inverse() else {
        return Ok(Verdict::CriterionNotApplicable {
            reason: "A_1 is singular".into(),
        });
    };
    let mm = &inv * sys.a0();
    let cs: Vec<CMatrix> = sys.b().iter().map(|b| &inv * b).collect();
    if let Some(j) = cs.iter().position(|c| !mm.commutator(c).is_zero()) {
        return Ok(Verdict::CriterionNotApplicable {
            reason: format!("A_1^-1 A_0 does not commute with A_1^-1 B_{j}"),
        });
    }
    let neg = -&mm;
    let mut criterion = CMatrix::zeros(sys.dim());
    let mut pow = CMatrix::identity(sys.dim());
    for c in &cs {
        criterion = &criterion + &(c * &pow);
        pow = &pow * &neg;
    }
    let (py, _) = sys.char_polys();
    let literal_py = py.eval(&neg).expect("dimensions checked");
    Ok(if criterion.is_zero() {
        Verdict::SystemNoBlowupCandidate { criterion, literal_py }
    } else {
        Verdict::SystemBlowup { criterion, literal_py }
    })
}

/// `y = sum_k q_k u^(k) + y_h` where `y_h` solves the homogeneous equation
/// with the initial values left over after the particular part.
#[derive(Clone, Debug)]
pub struct TrivialSolution {
    ode: LinearODE,
    q: Poly,
    u: Signal,
}

/// Build the solution operator for `P_u = P_y Q`.
pub fn synthesize_trivial_solution(ode: &LinearODE, q: &Poly, u: &Signal) -> Result<TrivialSolution, AnalyzeError> {
    let ode = ode.normalize();
    let (py, pu) = ode.char_polys();
    if &py * q != pu {
        return Err(AnalyzeError::NotDivisible);
    }
    let needed = q.degree().unwrap_or(0) + ode.order().0;
    if let Some(max) = u.max_order() {
        if max < needed {
            return Err(AnalyzeError::DerivativeOrderUnavailable { needed, available: max });
        }
    }
    Ok(TrivialSolution {
        ode,
        q: q.clone(),
        u: u.clone(),
    })
}

impl TrivialSolution {
    pub fn q(&self) -> &Poly {
        &self.q
    }

    /// `sum_k q_k u^(k+j)(t)` at working precision.
    fn particular(&self, j: usize, t: &Dyadic, prec: u32) -> Result<ComplexBox, AnalyzeError> {
        let mut acc = ComplexBox::zero();
        for (k, c) in self.q.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = eval_enclosure(&self.u, k + j, t, prec)?;
            acc = (&acc + &(&c.to_box(prec) * &v)).round(prec);
        }
        Ok(acc)
    }

    fn homogeneous(&self, prec: u32) -> Result<Option<BoxExpPoly>, AnalyzeError> {
        let m = self.ode.order().0;
        let roots = certified_roots(&self.ode.char_polys().0, ROOT_BITS);
        let rates: Vec<Rate> = roots
            .items()
            .iter()
            .enumerate()
            .flat_map(|(id, it)| std::iter::repeat_n(Rate::root(it, id, prec), it.multiplicity() as usize))
            .collect();
        let mut ics = Vec::with_capacity(m);
        for i in 0..m {
            let p = self.particular(i, &Dyadic::zero(), prec)?;
            ics.push((&self.ode.y0()[i].to_box(prec) - &p).round(prec));
        }
        Ok(cascade(&rates, &ics, &BoxExpPoly::zero(), prec).ok())
    }

    /// Enclosure of `y^(j)(t)` of width at most `2^-bits`.
    pub fn eval(&self, j: usize, t: &Dyadic, bits: u32) -> Result<ComplexBox, AnalyzeError> {
        let tb = ComplexBox::real(t.clone());
        for level in 0..8 {
            let prec = (bits + 16) << level;
            let Some(h) = self.homogeneous(prec)? else {
                continue;
            };
            let v = &self.particular(j, t, prec)? + &h.nth_derivative(j, prec).eval_raw(&tb, prec);
            if v.publishable(bits) {
                return Ok(v.publish(bits));
            }
        }
        Err(AnalyzeError::RootUncertifiable)
    }

    /// `sum_i a_i y^(i)(t) - sum_k b_k u^(k)(t)`, which must contain zero.
    pub fn residual(&self, t: &Dyadic, bits: u32) -> Result<ComplexBox, AnalyzeError> {
        let prec = bits + 16;
        let mut acc = ComplexBox::zero();
        for (i, a) in self.ode.a().iter().enumerate() {
            acc = &acc + &(&a.to_box(prec) * &self.eval(i, t, prec)?);
        }
        for (k, b) in self.ode.b().iter().enumerate() {
            if !b.is_zero() {
                acc = &acc - &(&b.to_box(prec) * &eval_enclosure(&self.u, k, t, prec)?);
            }
        }
        Ok(acc.round(prec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_examples() {
        let ode = LinearODE::from_i64(&[1, 1], &[2, 3, 1], &[0]).unwrap();
        assert_eq!(classify_scalar(&ode), Verdict::TrivialNoBlowup { q: Poly::from_i64(&[2, 1]) });

        let ode = LinearODE::from_i64(&[0, 1], &[1], &[0]).unwrap();
        match classify_scalar(&ode) {
            Verdict::Blowup { witness, pu_at_minus_a0, .. } => {
                assert_eq!(witness.exact(), Some(&GaussianRational::zero()));
                assert_eq!(pu_at_minus_a0, Some(GaussianRational::one()));
            }
            v => panic!("{v:?}"),
        }

        let ode = LinearODE::from_i64(&[1, 1], &[1, 1], &[0]).unwrap();
        assert_eq!(classify_scalar(&ode), Verdict::TrivialNoBlowup { q: Poly::one() });

        let ode = LinearODE::from_i64(&[3, 0, 1], &[0], &[0, 0]).unwrap();
        assert_eq!(classify_scalar(&ode), Verdict::TrivialNoBlowup { q: Poly::zero() });
    }

    #[test]
    fn scale_invariance() {
        let ode = LinearODE::from_i64(&[4, 4], &[6, 8, 2], &[0]).unwrap();
        assert_eq!(classify_scalar(&ode), classify_scalar(&ode.normalize()));
    }

    #[test]
    fn system_examples() {
        let g = GaussianRational::from_i64;
        let sys = crate::model::build_lif(&g(1), &GaussianRational::ratio(1, 2), &g(0), &g(0), &g(0)).unwrap();
        match classify_system(&sys).unwrap() {
            Verdict::SystemBlowup { criterion, literal_py } => {
                assert_eq!(criterion, CMatrix::scalar(2, &g(2)));
                assert!(literal_py.is_zero());
            }
            v => panic!("{v:?}"),
        }

        let sys = ODESystem::new(
            vec![CMatrix::diag(&[g(1), g(2)]), CMatrix::identity(2)],
            vec![CMatrix::from_i64_rows(&[&[0, 1], &[0, 0]])],
            vec![g(0), g(0)],
        )
        .unwrap();
        assert!(matches!(classify_system(&sys).unwrap(), Verdict::CriterionNotApplicable { .. }));

        let sys = ODESystem::new(
            vec![CMatrix::from_i64_rows(&[&[1, 2], &[3, 4]]), CMatrix::identity(2)],
            vec![CMatrix::zeros(2), CMatrix::zeros(2)],
            vec![g(0), g(0)],
        )
        .unwrap();
        assert!(matches!(classify_system(&sys).unwrap(), Verdict::SystemNoBlowupCandidate { .. }));
    }

    #[test]
    fn synthesized_solution() {
        // y' + y = u'' + 3u' + 2u, u = e^{-t}: y = u' + 2u = e^{-t} when y(0) = 1.
        let ode = LinearODE::from_i64(&[1, 1], &[2, 3, 1], &[1]).unwrap();
        let u = Signal::parse("exp(-t)").unwrap();
        let sol = synthesize_trivial_solution(&ode, &Poly::from_i64(&[2, 1]), &u).unwrap();
        assert!(synthesize_trivial_solution(&ode, &Poly::one(), &u).is_err());
        let v = sol.eval(0, &Dyadic::one(), 30).unwrap();
        assert!((v.re().mid().to_f64() - (-1f64).exp()).abs() < 1e-9);

        // Mismatched initial value adds c e^{-t}.
        let sol = synthesize_trivial_solution(&ode.with_y0(vec![GaussianRational::from_i64(3)]).unwrap(), sol.q(), &u).unwrap();
        let v = sol.eval(0, &Dyadic::one(), 30).unwrap();
        assert!((v.re().mid().to_f64() - 3.0 * (-1f64).exp()).abs() < 1e-9);
        assert!(sol.residual(&Dyadic::pow2(-1), 24).unwrap().contains_zero());
        assert!(sol.eval(0, &Dyadic::zero(), 30).unwrap().contains(&ComplexBox::from_i64(3)));
    }
}
