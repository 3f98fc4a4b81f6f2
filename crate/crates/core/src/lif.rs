//! Leaky integrate-and-fire neuron: enclosures of `(V, I)` and certified
//! threshold-crossing times.
//!
//! Dynamics: `tau_m V' = -(V - V_rest) + I`, `tau_s I' = -I + I_e`.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::arith::{exp_box, CMatrix, ComplexBox, Dyadic, GaussianRational};
use crate::model::{build_lif, ModelError, ODESystem};
use crate::signal::{eval_enclosure, Signal};
use crate::solver::{solve_system, SolutionQuery, SolveError};

/// Initial scan grid; doubled on failure up to [`MAX_SCAN_CELLS`].
const SCAN_CELLS: u64 = 64;
const MAX_SCAN_CELLS: u64 = 1 << 14;
/// Accuracy of the scan evaluations, independent of the requested bits so
/// that brackets are reproducible across accuracies.
const SCAN_BITS: u32 = 24;
/// Precision doublings allowed when a bisection midpoint is undecided.
const MAX_DOUBLINGS: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LifError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("accumulated restart widths exceed the tolerance 2^-{bits}")]
    BudgetExceeded { bits: u32 },
}

#[derive(Clone, Debug)]
pub struct LifConfig {
    tau_m: GaussianRational,
    tau_s: GaussianRational,
    v_rest: GaussianRational,
    theta: GaussianRational,
    v0: GaussianRational,
    i0: GaussianRational,
    input: Signal,
}

impl LifConfig {
    pub fn new(
        tau_m: GaussianRational,
        tau_s: GaussianRational,
        v_rest: GaussianRational,
        theta: GaussianRational,
        v0: GaussianRational,
        i0: GaussianRational,
        input: Signal,
    ) -> Result<Self, ModelError> {
        build_lif(&tau_m, &tau_s, &v_rest, &v0, &i0)?;
        if !theta.is_real() || !v_rest.is_real() || theta.re() <= v_rest.re() {
            return Err(ModelError::ThresholdNotAboveRest);
        }
        Ok(LifConfig {
            tau_m,
            tau_s,
            v_rest,
            theta,
            v0,
            i0,
            input,
        })
    }

    pub fn tau_m(&self) -> &GaussianRational {
        &self.tau_m
    }

    pub fn tau_s(&self) -> &GaussianRational {
        &self.tau_s
    }

    pub fn v_rest(&self) -> &GaussianRational {
        &self.v_rest
    }

    pub fn theta(&self) -> &GaussianRational {
        &self.theta
    }

    pub fn input(&self) -> &Signal {
        &self.input
    }

    pub fn with_theta(&self, theta: GaussianRational) -> Result<Self, ModelError> {
        Self::new(
            self.tau_m.clone(),
            self.tau_s.clone(),
            self.v_rest.clone(),
            theta,
            self.v0.clone(),
            self.i0.clone(),
            self.input.clone(),
        )
    }

    /// The equation in the shifted state `(V - V_rest, I)`.
    pub fn system(&self) -> ODESystem {
        build_lif(&self.tau_m, &self.tau_s, &self.v_rest, &self.v0, &self.i0).expect("validated")
    }

    fn inputs(&self) -> [Signal; 2] {
        [Signal::zero(), self.input.clone()]
    }
}

/// Enclosures of `V(t)` and `I(t)`, each of width at most `2^-bits`.
pub fn simulate_lif(cfg: &LifConfig, t: &Dyadic, bits: u32) -> Result<(ComplexBox, ComplexBox), SolveError> {
    let q = SolutionQuery::new(t.clone(), bits + 4)?;
    let r = solve_system(&cfg.system(), &cfg.inputs(), &q)?;
    let v = &r.value[0] + &cfg.v_rest.to_box(bits + 8);
    Ok((v.publish(bits), r.value[1].publish(bits)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpikeStatus {
    /// `V(lo) < theta <= V(hi)` certified, with `hi - lo <= 2^-bits`.
    Crossed { lo: Dyadic, hi: Dyadic },
    NoCrossing,
    /// Cells where enclosures could not be separated from the threshold.
    Indeterminate { candidates: Vec<(Dyadic, Dyadic)> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpikeReport {
    pub status: SpikeStatus,
}

impl SpikeReport {
    pub fn status_label(&self) -> &'static str {
        match self.status {
            SpikeStatus::Crossed { .. } => "crossed",
            SpikeStatus::NoCrossing => "no-crossing",
            SpikeStatus::Indeterminate { .. } => "indeterminate",
        }
    }

    /// `t_lo,t_hi,status` with bounds rounded outward to 12 digits.
    pub fn csv_row(&self) -> String {
        let (lo, hi) = match &self.status {
            SpikeStatus::Crossed { lo, hi } => (lo.clone(), hi.clone()),
            SpikeStatus::NoCrossing => (Dyadic::zero(), Dyadic::one()),
            SpikeStatus::Indeterminate { candidates } => (
                candidates.first().map_or_else(Dyadic::zero, |c| c.0.clone()),
                candidates.last().map_or_else(Dyadic::one, |c| c.1.clone()),
            ),
        };
        format!("{},{},{}", lo.to_decimal(12, false), hi.to_decimal(12, true), self.status_label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Below,
    Above,
    Unknown,
}

/// Threshold detection for the shifted system on `[0, horizon]`.
struct Probe {
    sys: ODESystem,
    inputs: [Signal; 2],
    /// Row 0 of `-M` and of `C_0`.
    neg_m0: Vec<ComplexBox>,
    c0: Vec<ComplexBox>,
    /// `theta - V_rest`.
    theta_lo: Dyadic,
    theta_hi: Dyadic,
    /// Bounds on `|y'|` and `|y''|` over the horizon.
    d1: Dyadic,
    d2: Option<Dyadic>,
    /// Scan-precision states by time.
    cache: RefCell<HashMap<Dyadic, Vec<ComplexBox>>>,
}

fn norm(m: &CMatrix) -> Dyadic {
    m.to_box(64).norm_inf().round_up(32)
}

impl Probe {
    fn new(cfg: &LifConfig) -> Result<Self, SolveError> {
        let sys = cfg.system();
        let inv = sys.a1().inverse().map_err(|_| SolveError::Singular)?;
        let mm = &inv * sys.a0();
        let c = &inv * &sys.b()[0];
        let th = (&cfg.theta - &cfg.v_rest).to_box(128);
        let nm = norm(&mm);
        let nc = norm(&c);
        let inputs = cfg.inputs();
        let w0 = &nc * &inputs[1].sup_bound(0)?;
        let y0 = sys.y0().iter().map(|v| v.to_box(64).mag()).fold(Dyadic::zero(), |a, b| Dyadic::max(&a, &b));
        // Gronwall on [0, 1]: |y| <= e^{|M|} (|y0| + W0).
        let growth = exp_box(&ComplexBox::real(nm.clone()), 16).re_hi().clone();
        let y = &growth * &(&y0 + &w0);
        let d1 = &(&nm * &y) + &w0;
        let d2 = inputs[1].sup_bound(1).ok().map(|b| &(&nm * &d1) + &(&nc * &b));
        let row = |m: &CMatrix, sign: i64| (0..2).map(|k| m.get(0, k).to_box(128).scale(&Dyadic::from_i64(sign))).collect();
        Ok(Probe {
            neg_m0: row(&mm, -1),
            c0: row(&c, 1),
            inputs,
            sys,
            theta_lo: th.re_lo().clone(),
            theta_hi: th.re_hi().clone(),
            d1: d1.round_up(32),
            d2: d2.map(|d| d.round_up(32)),
            cache: RefCell::default(),
        })
    }

    fn state(&self, t: &Dyadic, bits: u32) -> Result<Vec<ComplexBox>, SolveError> {
        Ok(solve_system(&self.sys, &self.inputs, &SolutionQuery::new(t.clone(), bits)?)?.value)
    }

    fn scan_state(&self, t: &Dyadic) -> Result<Vec<ComplexBox>, SolveError> {
        if let Some(y) = self.cache.borrow().get(t) {
            return Ok(y.clone());
        }
        let y = self.state(t, SCAN_BITS)?;
        self.cache.borrow_mut().insert(t.clone(), y.clone());
        Ok(y)
    }

    fn side(&self, v: &ComplexBox) -> Side {
        if *v.re_hi() < self.theta_lo {
            Side::Below
        } else if *v.re_lo() >= self.theta_hi {
            Side::Above
        } else {
            Side::Unknown
        }
    }

    /// Side at `t`, raising precision while undecided.
    fn decide(&self, t: &Dyadic, bits: u32, doublings: u32) -> Result<Side, SolveError> {
        let mut side = Side::Unknown;
        for k in 0..=doublings {
            side = self.side(&self.state(t, bits << k)?[0]);
            if side != Side::Unknown {
                break;
            }
        }
        Ok(side)
    }

    /// Upper bound on `V` over `[a, b]` from the state at one end.
    fn cell_below(&self, a: &Dyadic, ya: &[ComplexBox], b: &Dyadic, yb: &[ComplexBox]) -> Result<bool, SolveError> {
        let h = b - a;
        let hi = Dyadic::max(ya[0].re_hi(), yb[0].re_hi());
        let lipschitz = &hi + &(&self.d1 * &h).shl(-1);
        if lipschitz < self.theta_lo {
            return Ok(true);
        }
        let Some(d2) = &self.d2 else {
            return Ok(false);
        };
        let curvature = (&(d2 * &h) * &h).shl(-1);
        let slope = |t: &Dyadic, y: &[ComplexBox]| -> Result<ComplexBox, SolveError> {
            let u = eval_enclosure(&self.inputs[1], 0, t, SCAN_BITS)?;
            Ok(&(&(&self.neg_m0[0] * &y[0]) + &(&self.neg_m0[1] * &y[1])) + &(&self.c0[1] * &u))
        };
        let sa = slope(a, ya)?;
        let sb = slope(b, yb)?;
        let pos = |d: &Dyadic| Dyadic::max(d, &Dyadic::zero());
        let from_left = &(ya[0].re_hi() + &(&pos(sa.re_hi()) * &h)) + &curvature;
        let from_right = &(yb[0].re_hi() + &(&pos(&-sb.re_lo()) * &h)) + &curvature;
        Ok(Dyadic::min(&from_left, &from_right) < self.theta_lo)
    }

    fn bisect(&self, mut lo: Dyadic, mut hi: Dyadic, bits: u32) -> Result<SpikeStatus, SolveError> {
        let target = Dyadic::pow2(-(bits as i64));
        while &hi - &lo > target {
            let mid = Dyadic::midpoint(&lo, &hi);
            match self.decide(&mid, bits + 8, MAX_DOUBLINGS)? {
                Side::Below => lo = mid,
                Side::Above => hi = mid,
                Side::Unknown => return Ok(SpikeStatus::Indeterminate { candidates: vec![(lo, hi)] }),
            }
        }
        Ok(SpikeStatus::Crossed { lo, hi })
    }

    /// First certified crossing on `[0, horizon]`.
    fn first_crossing(&self, horizon: &Dyadic, bits: u32) -> Result<SpikeStatus, SolveError> {
        let y_start = self.state(&Dyadic::zero(), SCAN_BITS)?;
        if self.side(&y_start[0]) == Side::Above {
            return Ok(SpikeStatus::Crossed {
                lo: Dyadic::zero(),
                hi: Dyadic::zero(),
            });
        }
        let k = SCAN_CELLS.trailing_zeros() as i64;
        let mut open: Vec<(Dyadic, Dyadic)> = (0..SCAN_CELLS as i64)
            .map(|i| (horizon * &Dyadic::from_i64(i).shl(-k), horizon * &Dyadic::from_i64(i + 1).shl(-k)))
            .collect();
        let mut cells = SCAN_CELLS;
        loop {
            let mut uncertain = Vec::new();
            for (a, b) in &open {
                let ya = self.scan_state(a)?;
                let yb = self.scan_state(b)?;
                let end = self.side(&yb[0]);
                match (self.side(&ya[0]), end) {
                    (Side::Below, Side::Above) if uncertain.is_empty() => return self.bisect(a.clone(), b.clone(), bits),
                    (Side::Below, Side::Below) if self.cell_below(a, &ya, b, &yb)? => {}
                    _ => uncertain.push((a.clone(), b.clone())),
                }
                // The first crossing lies at or before a point already above.
                if end == Side::Above {
                    break;
                }
            }
            if uncertain.is_empty() {
                return Ok(SpikeStatus::NoCrossing);
            }
            if cells >= MAX_SCAN_CELLS {
                return Ok(SpikeStatus::Indeterminate { candidates: uncertain });
            }
            cells *= 2;
            open = uncertain
                .into_iter()
                .flat_map(|(a, b)| {
                    let m = Dyadic::midpoint(&a, &b);
                    [(a, m.clone()), (m, b)]
                })
                .collect();
        }
    }
}

/// Certified first threshold crossing on `[0, 1]`.
pub fn first_spike(cfg: &LifConfig, bits: u32) -> Result<SpikeReport, SolveError> {
    let probe = Probe::new(cfg)?;
    Ok(SpikeReport {
        status: probe.first_crossing(&Dyadic::one(), bits)?,
    })
}

/// Repeated crossings with reset `V <- V_rest` at the right end of each
/// crossing box and `I` continued from its enclosure midpoint. Reported
/// times are absolute.
pub fn spike_train(cfg: &LifConfig, bits: u32) -> Result<Vec<SpikeReport>, LifError> {
    let tolerance = Dyadic::pow2(-(bits as i64));
    let mut spent = Dyadic::zero();
    let mut offset = Dyadic::zero();
    let mut current = cfg.clone();
    let mut out = Vec::new();
    while offset < Dyadic::one() {
        let probe = Probe::new(&current)?;
        let horizon = &Dyadic::one() - &offset;
        match probe.first_crossing(&horizon, bits)? {
            SpikeStatus::NoCrossing => break,
            SpikeStatus::Indeterminate { candidates } => {
                let candidates = candidates.into_iter().map(|(a, b)| (&a + &offset, &b + &offset)).collect();
                out.push(SpikeReport {
                    status: SpikeStatus::Indeterminate { candidates },
                });
                break;
            }
            SpikeStatus::Crossed { lo, hi } => {
                let i_hi = probe.state(&hi, bits + 8)?[1].clone();
                spent = &spent + &i_hi.width();
                if spent > tolerance {
                    return Err(LifError::BudgetExceeded { bits });
                }
                out.push(SpikeReport {
                    status: SpikeStatus::Crossed {
                        lo: &lo + &offset,
                        hi: &hi + &offset,
                    },
                });
                if hi.is_zero() {
                    // Already above threshold at the restart point.
                    return Err(LifError::BudgetExceeded { bits });
                }
                offset = &offset + &hi;
                current = LifConfig {
                    v0: current.v_rest.clone(),
                    i0: GaussianRational::from_dyadic(&i_hi.re().mid()),
                    input: cfg.input.shifted(&offset),
                    ..current
                };
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: i64) -> GaussianRational {
        GaussianRational::from_i64(v)
    }

    fn ln2_fixture() -> LifConfig {
        LifConfig::new(
            g(1),
            GaussianRational::ratio(1, 2),
            g(0),
            GaussianRational::ratio(1, 4),
            g(0),
            g(0),
            Signal::parse("1").unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn equilibrium() {
        let cfg = LifConfig::new(g(1), g(1), g(-3), g(-2), g(-3), g(0), Signal::zero()).unwrap();
        let (v, i) = simulate_lif(&cfg, &Dyadic::pow2(-1), 20).unwrap();
        assert!(v.contains(&ComplexBox::from_i64(-3)) && i.contains_zero());
        assert_eq!(first_spike(&cfg, 20).unwrap().status, SpikeStatus::NoCrossing);
    }

    #[test]
    fn ln2_crossing() {
        let r = first_spike(&ln2_fixture(), 20).unwrap();
        let SpikeStatus::Crossed { lo, hi } = &r.status else {
            panic!("{r:?}")
        };
        let ln2 = std::f64::consts::LN_2;
        assert!(lo.to_f64() < ln2 && ln2 < hi.to_f64());
        assert!((hi - lo) <= Dyadic::pow2(-20));
        assert!(r.csv_row().ends_with(",crossed"));
    }

    #[test]
    fn tangential_threshold_is_indeterminate() {
        // V = e^{-t} - e^{-2t} peaks at exactly 1/4 when t = ln 2.
        let cfg = LifConfig::new(
            g(1),
            GaussianRational::ratio(1, 2),
            g(0),
            GaussianRational::ratio(1, 4),
            g(0),
            g(1),
            Signal::zero(),
        )
        .unwrap();
        let r = first_spike(&cfg, 20).unwrap();
        assert!(matches!(r.status, SpikeStatus::Indeterminate { .. }), "{r:?}");
    }

    #[test]
    fn validation() {
        let r = LifConfig::new(g(1), g(1), g(0), g(0), g(0), g(0), Signal::zero());
        assert_eq!(r.unwrap_err(), ModelError::ThresholdNotAboveRest);
    }
}
