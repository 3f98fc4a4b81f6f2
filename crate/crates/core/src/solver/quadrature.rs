//! Composite Simpson and midpoint rules on dyadic grids with a-priori
//! remainder bounds.

use super::{SolveError, DEFAULT_MAX_NODES};
use crate::arith::{ComplexBox, Dyadic};
use crate::work;

/// Upper bounds on `sup |f'|` and `sup |f''''|` over the integration range.
/// Simpson is used whenever the fourth-derivative bound is present.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SmoothnessBound {
    pub first: Option<Dyadic>,
    pub fourth: Option<Dyadic>,
}

impl SmoothnessBound {
    pub fn fourth(m: Dyadic) -> Self {
        SmoothnessBound { first: None, fourth: Some(m) }
    }

    pub fn first(m: Dyadic) -> Self {
        SmoothnessBound { first: Some(m), fourth: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Rule {
    Simpson,
    Midpoint,
}

/// Grid `h = t 2^-k` with `2^k` panels covering `[0, t]`, plus the
/// truncation radius of the chosen rule.
#[derive(Clone, Debug)]
pub(crate) struct Plan {
    pub rule: Rule,
    pub panels: u64,
    pub h: Dyadic,
    pub radius: Dyadic,
}

impl Plan {
    /// Coarsest grid whose remainder bound is at most `2^-err_bits`.
    pub fn new(bound: &SmoothnessBound, t: &Dyadic, err_bits: u32, max_nodes: u64) -> Result<Plan, SolveError> {
        debug_assert!(t.is_positive());
        let (rule, m) = match (&bound.fourth, &bound.first) {
            (Some(m), _) => (Rule::Simpson, m.clone()),
            (None, Some(m)) => (Rule::Midpoint, m.clone()),
            (None, None) => return Err(SolveError::MissingSmoothnessBound),
        };
        let target = Dyadic::pow2(-(err_bits as i64));
        let t2 = t * t;
        let tm = match rule {
            Rule::Simpson => &(&(&t2 * &t2) * t) * &m,
            Rule::Midpoint => &t2 * &m,
        };
        // Simpson needs an even panel count.
        let mut k: i64 = match rule {
            Rule::Simpson => 1,
            Rule::Midpoint => 0,
        };
        loop {
            let panels = 1u64.checked_shl(k as u32).unwrap_or(u64::MAX);
            let nodes = panels.saturating_add(u64::from(rule == Rule::Simpson));
            let radius = match rule {
                // t h^4 M / 180
                Rule::Simpson => Dyadic::div_up(&tm.shl(-4 * k), &Dyadic::from_i64(180), 32),
                // t h M / 4
                Rule::Midpoint => tm.shl(-k - 2),
            };
            if radius <= target {
                if nodes > max_nodes {
                    return Err(SolveError::QuadratureBudgetExceeded { needed: nodes, cap: max_nodes });
                }
                return Ok(Plan {
                    rule,
                    panels,
                    h: t.shl(-k),
                    radius,
                });
            }
            if nodes > max_nodes {
                // The grid can only get finer from here; report the size
                // that would have been required.
                let gap = (radius.log2_upper() - target.log2_upper()) as u64;
                let extra = match rule {
                    Rule::Simpson => gap.div_ceil(4),
                    Rule::Midpoint => gap,
                };
                let needed = nodes.saturating_mul(1u64.checked_shl(extra as u32).unwrap_or(u64::MAX));
                return Err(SolveError::QuadratureBudgetExceeded { needed, cap: max_nodes });
            }
            k += 1;
        }
    }

    pub fn nodes(&self) -> u64 {
        match self.rule {
            Rule::Simpson => self.panels + 1,
            Rule::Midpoint => self.panels,
        }
    }

    /// Position and integer weight of node `i`.
    pub fn node(&self, i: u64) -> (Dyadic, u64) {
        match self.rule {
            Rule::Simpson => {
                let w = if i == 0 || i == self.panels {
                    1
                } else if i % 2 == 1 {
                    4
                } else {
                    2
                };
                (&self.h * &Dyadic::from_i64(i as i64), w)
            }
            Rule::Midpoint => ((&self.h * &Dyadic::from_i64(2 * i as i64 + 1)).shl(-1), 1),
        }
    }

    /// Enclosure of the integral of a `dim`-vector integrand. Nodes are
    /// visited from the right end of the interval to the left.
    pub fn integrate(
        &self,
        dim: usize,
        prec: u32,
        mut f: impl FnMut(u64, &Dyadic) -> Result<Vec<ComplexBox>, SolveError>,
    ) -> Result<Vec<ComplexBox>, SolveError> {
        let mut acc = vec![ComplexBox::zero(); dim];
        for i in (0..self.nodes()).rev() {
            let (s, w) = self.node(i);
            let v = f(i, &s)?;
            let wb = ComplexBox::from_i64(w as i64);
            for (a, x) in acc.iter_mut().zip(&v) {
                *a = (&*a + &(x * &wb)).round(prec);
            }
        }
        work::nodes(self.nodes());
        Ok(acc
            .into_iter()
            .map(|a| {
                let scaled = (&a * &ComplexBox::real(self.h.clone())).round(prec);
                let scaled = match self.rule {
                    Rule::Simpson => scaled.div_int(3, prec),
                    Rule::Midpoint => scaled,
                };
                scaled.widen(&self.radius)
            })
            .collect())
    }
}

/// Enclosure of `int_0^t f` of width at most `2^-bits`.
///
/// `f(s, m)` must enclose the integrand at `s` with width at most `2^-m`,
/// and `bound` must hold on `[0, t]`.
pub fn rigorous_integral(
    f: impl Fn(&Dyadic, u32) -> ComplexBox,
    bound: &SmoothnessBound,
    t: &Dyadic,
    bits: u32,
) -> Result<ComplexBox, SolveError> {
    rigorous_integral_capped(f, bound, t, bits, DEFAULT_MAX_NODES)
}

/// [`rigorous_integral`] with an explicit node cap.
pub fn rigorous_integral_capped(
    f: impl Fn(&Dyadic, u32) -> ComplexBox,
    bound: &SmoothnessBound,
    t: &Dyadic,
    bits: u32,
    max_nodes: u64,
) -> Result<ComplexBox, SolveError> {
    if t.is_negative() || *t > Dyadic::one() {
        return Err(SolveError::InvalidQuery);
    }
    if t.is_zero() {
        return Ok(ComplexBox::zero());
    }
    let plan = Plan::new(bound, t, bits + 4, max_nodes)?;
    let log_n = 64 - plan.nodes().leading_zeros();
    let mut guard = 8;
    loop {
        let prec = bits + 8 + log_n + guard;
        let v = plan.integrate(1, prec, |_, s| Ok(vec![f(s, bits + 4 + guard / 2)]))?;
        let v = v.into_iter().next().unwrap();
        if v.publishable(bits) || guard >= 512 {
            return Ok(v.publish(bits));
        }
        guard *= 2;
    }
}
