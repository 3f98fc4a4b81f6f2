//! Work-versus-accuracy sweeps and growth classification.

use std::io::{self, Write};

use crate::arith::Dyadic;
use crate::model::{LinearODE, ODESystem};
use crate::signal::Signal;
use crate::solver::{solve_cascade_with, solve_system_with, Backend, SolutionQuery, SolveError, SolverOptions};

pub const CSV_HEADER: &str = "n,arith_ops,quadrature_nodes,exp_evals,elapsed_ns,backend,status";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProfileError {
    #[error("at least {needed} rows are required, found {found}")]
    InsufficientRows { needed: usize, found: usize },
}

#[derive(Clone, Debug)]
pub enum Problem {
    Scalar { ode: LinearODE, u: Signal },
    System { sys: ODESystem, u: Vec<Signal> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileRow {
    pub bits: u32,
    pub arith_ops: u64,
    pub quadrature_nodes: u64,
    pub exp_evals: u64,
    pub elapsed_ns: u128,
    pub backend: Option<Backend>,
    /// `ok` or the solver error.
    pub status: String,
}

impl ProfileRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    pub fn csv(&self) -> String {
        let backend = self.backend.map_or_else(|| "-".to_string(), |b| b.to_string());
        let status = self.status.replace([',', '\n'], ";");
        format!(
            "{},{},{},{},{},{},{}",
            self.bits, self.arith_ops, self.quadrature_nodes, self.exp_evals, self.elapsed_ns, backend, status
        )
    }
}

fn solve(problem: &Problem, q: &SolutionQuery, opts: &SolverOptions) -> Result<crate::solver::SolutionResult, SolveError> {
    match problem {
        Problem::Scalar { ode, u } => solve_cascade_with(ode, u, q, opts),
        Problem::System { sys, u } => solve_system_with(sys, u, q, opts),
    }
}

/// One row per entry of `bits`; failures are recorded, not propagated.
pub fn run_profile(problem: &Problem, t: &Dyadic, bits: &[u32], backend: Option<Backend>) -> Vec<ProfileRow> {
    let opts = SolverOptions {
        backend,
        ..SolverOptions::default()
    };
    bits.iter()
        .map(|&n| {
            let outcome = SolutionQuery::new(t.clone(), n).and_then(|q| solve(problem, &q, &opts));
            match outcome {
                Ok(r) => ProfileRow {
                    bits: n,
                    arith_ops: r.work.arith_ops,
                    quadrature_nodes: r.work.quadrature_nodes,
                    exp_evals: r.work.exp_evals,
                    elapsed_ns: r.work.elapsed.as_nanos(),
                    backend: Some(r.backend),
                    status: "ok".into(),
                },
                Err(e) => ProfileRow {
                    bits: n,
                    arith_ops: 0,
                    quadrature_nodes: 0,
                    exp_evals: 0,
                    elapsed_ns: 0,
                    backend,
                    status: e.to_string(),
                },
            }
        })
        .collect()
}

pub fn write_csv(rows: &[ProfileRow], mut out: impl Write) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.csv())?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Growth {
    Polynomial,
    Exponential,
    Ambiguous,
}

impl std::fmt::Display for Growth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Growth::Polynomial => "polynomial-consistent",
            Growth::Exponential => "exponential-consistent",
            Growth::Ambiguous => "ambiguous",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingFit {
    /// Slope of `log2 work` against `log2 n`.
    pub degree: f64,
    pub poly_residual: f64,
    /// `work ~ base^n`.
    pub base: f64,
    pub exp_residual: f64,
    pub class: Growth,
}

/// Least-squares line; returns slope and RMS residual.
fn line_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - my - slope * (x - mx)).powi(2)).sum();
    (slope, (rss / n).sqrt())
}

/// Residuals below this are treated as exact fits.
const EXACT: f64 = 1e-9;
/// Work that changes by less than this factor (log2) across the whole sweep
/// is treated as degree-0 polynomial: no base can be resolved from it.
const FLAT_SPAN: f64 = 1.0;

/// Fit `log2 work` against `log2 n` and against `n`, where work is the sum
/// of the counter columns of successful rows, and pick the clearly better
/// fit (10% margin). A sweep whose fitted growth stays under one doubling
/// is polynomial-consistent whatever the residuals say.
pub fn fit_scaling(rows: &[ProfileRow]) -> Result<ScalingFit, ProfileError> {
    let ok: Vec<&ProfileRow> = rows.iter().filter(|r| r.is_ok()).collect();
    if ok.len() < 4 {
        return Err(ProfileError::InsufficientRows { needed: 4, found: ok.len() });
    }
    let work: Vec<f64> = ok
        .iter()
        .map(|r| ((r.arith_ops + r.quadrature_nodes + r.exp_evals).max(1) as f64).log2())
        .collect();
    let n: Vec<f64> = ok.iter().map(|r| f64::from(r.bits)).collect();
    let log_n: Vec<f64> = n.iter().map(|x| x.log2()).collect();
    let (degree, poly_residual) = line_fit(&log_n, &work);
    let (slope, exp_residual) = line_fit(&n, &work);
    let span = n.iter().cloned().fold(f64::MIN, f64::max) - n.iter().cloned().fold(f64::MAX, f64::min);
    let flat = slope.abs() * span < FLAT_SPAN || (poly_residual < EXACT && exp_residual < EXACT);
    let class = if flat || poly_residual < 0.9 * exp_residual {
        Growth::Polynomial
    } else if exp_residual < 0.9 * poly_residual {
        Growth::Exponential
    } else {
        Growth::Ambiguous
    };
    Ok(ScalingFit {
        degree,
        poly_residual,
        base: slope.exp2(),
        exp_residual,
        class,
    })
}
