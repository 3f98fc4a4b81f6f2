// First-order systems: the criterion matrix and a solution enclosure.

use odeblowup::analyzer::classify_system;
use odeblowup::model::ODESystem;
use odeblowup::signal::Signal;
use odeblowup::solver::{solve_system, SolutionQuery};
use odeblowup::{CMatrix, Dyadic, GaussianRational};

pub fn main() {
    let g = GaussianRational::from_i64;
    let sys = ODESystem::new(
        vec![CMatrix::from_i64_rows(&[&[1, 1], &[0, 2]]), CMatrix::identity(2)],
        vec![CMatrix::identity(2), CMatrix::from_i64_rows(&[&[1, 1], &[0, 2]])],
        vec![g(1), g(0)],
    )
    .unwrap();
    let v = classify_system(&sys).unwrap();
    println!("verdict {} ({v:?})", v.label());

    let u = [Signal::parse("t").unwrap(), Signal::parse("exp(-t)").unwrap()];
    let q = SolutionQuery::new(Dyadic::one(), 20).unwrap();
    let r = solve_system(&sys, &u, &q).unwrap();
    for (k, c) in r.value.iter().enumerate() {
        println!("y_{k}(1) in {c:.9}");
    }
}
