// Work counters against accuracy, with a growth fit per backend.

use odeblowup::model::LinearODE;
use odeblowup::profiler::{fit_scaling, run_profile, write_csv, Problem};
use odeblowup::signal::Signal;
use odeblowup::solver::Backend;
use odeblowup::Dyadic;

pub fn main() {
    let problem = Problem::Scalar {
        ode: LinearODE::from_i64(&[1, 1], &[1], &[0]).unwrap(),
        u: Signal::parse("exp(-t)").unwrap(),
    };
    let bits: Vec<u32> = (8..=40).step_by(8).collect();
    for backend in [Backend::ClosedForm, Backend::Quadrature] {
        let rows = run_profile(&problem, &Dyadic::one(), &bits, Some(backend));
        write_csv(&rows, std::io::stdout()).unwrap();
        let fit = fit_scaling(&rows).unwrap();
        println!("{backend}: {} (degree {:.2}, base {:.3})\n", fit.class, fit.degree, fit.base);
    }
}
