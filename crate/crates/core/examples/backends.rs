// Closed form against rigorous quadrature on the same problem.

use odeblowup::model::LinearODE;
use odeblowup::signal::Signal;
use odeblowup::solver::{solve_cascade_with, Backend, SolutionQuery, SolverOptions};
use odeblowup::Dyadic;

pub fn main() {
    let ode = LinearODE::from_i64(&[1, 0, 1], &[1], &[0, 1]).unwrap();
    let u = Signal::parse("exp(-t)*cos(3*t)").unwrap();
    for bits in [12, 20, 28] {
        let q = SolutionQuery::new(Dyadic::pow2(-1), bits).unwrap();
        for backend in [Backend::ClosedForm, Backend::Quadrature] {
            let opts = SolverOptions {
                backend: Some(backend),
                ..SolverOptions::default()
            };
            let r = solve_cascade_with(&ode, &u, &q, &opts).unwrap();
            println!(
                "bits {bits:>2} {:<11} {:.12}  ops {:>8}  nodes {:>5}",
                r.backend.to_string(),
                r.scalar(),
                r.work.arith_ops,
                r.work.quadrature_nodes
            );
        }
    }
}
