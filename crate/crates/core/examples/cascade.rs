// Higher-order equations through successive first-order solves.

use odeblowup::model::LinearODE;
use odeblowup::signal::Signal;
use odeblowup::solver::{deflation_chain, solve_cascade_with, SolutionQuery, SolverOptions};
use odeblowup::Dyadic;

pub fn main() {
    let ode = LinearODE::from_i64(&[2, 3, 1], &[1], &[0, 0]).unwrap();
    for step in deflation_chain(&ode, 32).unwrap() {
        let sigma = step.sigma_exact.map_or_else(|| step.sigma.to_string(), |s| s.to_string());
        println!("deflate at {sigma:>3} -> {}", step.reduced_exact.unwrap());
    }
    let q = SolutionQuery::new(Dyadic::one(), 40).unwrap();
    let u = Signal::parse("1").unwrap();
    for order in [vec![0, 1], vec![1, 0]] {
        let opts = SolverOptions {
            root_order: Some(order.clone()),
            ..SolverOptions::default()
        };
        let y = solve_cascade_with(&ode, &u, &q, &opts).unwrap();
        println!("order {order:?}: y(1) in {:.15}", y.scalar());
    }
    let e = (-1f64).exp();
    println!("closed form 1/2 - e^-1 + e^-2/2 = {:.15}", 0.5 - e + e * e / 2.0);
}
