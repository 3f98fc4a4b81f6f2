// The polynomial-time solution operator when P_y divides P_u.

use odeblowup::analyzer::synthesize_trivial_solution;
use odeblowup::model::LinearODE;
use odeblowup::signal::Signal;
use odeblowup::{Dyadic, Poly};

pub fn main() {
    // y'' + 3y' + 2y = u''' + 4u'' + 5u' + 2u, so Q = X + 1.
    let ode = LinearODE::from_i64(&[2, 3, 1], &[2, 5, 4, 1], &[1, 0]).unwrap();
    let u = Signal::parse("sin(2*t)").unwrap();
    let sol = synthesize_trivial_solution(&ode, &Poly::from_i64(&[1, 1]), &u).unwrap();
    println!("Q = {}", sol.q());
    for k in 0..=4 {
        let t = Dyadic::from_i64(k).shl(-2);
        let y = sol.eval(0, &t, 30).unwrap();
        let r = sol.residual(&t, 30).unwrap();
        println!("t = {:<5} y = {y:.10}  residual magnitude <= {:.3e}", t.to_f64(), r.mag().to_f64());
    }
}
