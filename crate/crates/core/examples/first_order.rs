// `y' + y = e^-t`: certified values and their nesting across accuracies.

use odeblowup::model::LinearODE;
use odeblowup::signal::Signal;
use odeblowup::solver::{solve_first_order, SolutionQuery};
use odeblowup::Dyadic;

pub fn main() {
    let ode = LinearODE::from_i64(&[1, 1], &[1], &[0]).unwrap();
    let u = Signal::parse("exp(-t)").unwrap();
    let mut previous = None;
    for bits in [8, 16, 32, 64] {
        let q = SolutionQuery::new(Dyadic::one(), bits).unwrap();
        let y = solve_first_order(&ode, &u, &q).unwrap();
        let nested = previous.as_ref().is_none_or(|p: &odeblowup::ComplexBox| p.contains(y.scalar()));
        println!("bits {bits:>2}: {:.20} nested {nested}", y.scalar());
        previous = Some(y.scalar().clone());
    }
    println!("exact value e^-1 = {:.20}", (-1f64).exp());
}
