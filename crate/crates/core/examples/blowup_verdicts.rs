// The scalar criterion on a few equations.

use odeblowup::analyzer::{classify_scalar, Verdict};
use odeblowup::model::LinearODE;

pub fn main() {
    let cases = [
        ("y' + y = u'' + 3u' + 2u", LinearODE::from_i64(&[1, 1], &[2, 3, 1], &[0])),
        ("y' = u", LinearODE::from_i64(&[0, 1], &[1], &[0])),
        ("y'' + 3y' + 2y = u' + u", LinearODE::from_i64(&[2, 3, 1], &[1, 1], &[0, 0])),
        ("2y' + 4y = 6u' + 12u", LinearODE::from_i64(&[4, 2], &[12, 6], &[0])),
    ];
    for (text, ode) in cases {
        let v = classify_scalar(&ode.unwrap());
        let detail = match &v {
            Verdict::TrivialNoBlowup { q } => format!("y = Q(D)u + y_h with Q = {q}"),
            Verdict::Blowup { witness, needed, available, .. } => {
                format!("root {:.6} needed {needed}x, present {available}x in P_u", witness.enclosure())
            }
            other => format!("{other:?}"),
        };
        println!("{text:<26} {:<18} {detail}", v.label());
    }
}
