// Inputs known only through enclosures and derivative bounds.

use odeblowup::model::LinearODE;
use odeblowup::signal::{eval_enclosure, OracleSignal, Signal};
use odeblowup::solver::{solve_cascade, SolutionQuery};
use odeblowup::Dyadic;

pub fn main() {
    // A stand-in black box: u = cos(t) served through its enclosures,
    // with |u^(j)| <= 1 for j <= 5.
    let hidden = Signal::parse("cos(t)").unwrap();
    let oracle = OracleSignal::new(move |j, t, bits| eval_enclosure(&hidden, j, t, bits).unwrap(), vec![Dyadic::one(); 6]);
    let ode = LinearODE::from_i64(&[2, 1], &[1], &[0]).unwrap();
    let q = SolutionQuery::new(Dyadic::one(), 24).unwrap();
    let y = solve_cascade(&ode, &Signal::Oracle(oracle), &q).unwrap();
    println!("y(1) in {:.10} via {} with {} nodes", y.scalar(), y.backend, y.work.quadrature_nodes);
    let exact = (2.0 * 1f64.cos() + 1f64.sin() - 2.0 * (-2f64).exp()) / 5.0;
    println!("closed form          {exact:.10}");
}
