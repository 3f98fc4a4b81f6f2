// Exact divisibility against certified root multisets.

use odeblowup::poly::{certified_roots, multiset_root_inclusion, Inclusion};
use odeblowup::{GaussianRational, Poly};

pub fn main() {
    let i = GaussianRational::i();
    let py = Poly::from_roots(&[GaussianRational::from_i64(-1), i.clone(), -&i]);
    let pu = &py * &Poly::from_i64(&[3, 0, 1]);
    let pv = Poly::from_roots(&[GaussianRational::from_i64(-1), i.clone(), i.clone()]);

    for (name, p) in [("P_u", &pu), ("P_v", &pv)] {
        let exact = py.divides(p).unwrap();
        let verdict = multiset_root_inclusion(&certified_roots(&py, 32), &certified_roots(p, 32));
        let roots = matches!(verdict, Inclusion::Included);
        println!("{py} | {p} ({name}): exact {exact}, roots {roots}");
    }

    let p = Poly::from_i64(&[-2, 0, 1]);
    for r in certified_roots(&p, 40).items() {
        println!("root of {p}: {:.14} (multiplicity {})", r.enclosure(), r.multiplicity());
    }
    let (reduced, rem) = Poly::from_i64(&[2, 3, 1]).reduce_at_root(&GaussianRational::from_i64(-1)).unwrap();
    println!("X^2+3X+2 deflated at -1: {reduced}, remainder {rem}");
}
