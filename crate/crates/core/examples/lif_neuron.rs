// Leaky integrate-and-fire: trajectory enclosures and certified spikes.

use odeblowup::analyzer::classify_system;
use odeblowup::lif::{simulate_lif, spike_train, LifConfig};
use odeblowup::signal::Signal;
use odeblowup::{Dyadic, GaussianRational};

pub fn main() {
    let r = GaussianRational::ratio;
    let cfg = LifConfig::new(r(1, 2), r(1, 4), r(-65, 1), r(-60, 1), r(-65, 1), r(0, 1), Signal::parse("24 + 8*sin(4*t)").unwrap())
        .unwrap();
    println!("criterion: {}", classify_system(&cfg.system()).unwrap().label());
    for k in [1, 2, 4] {
        let t = Dyadic::from_i64(k).shl(-3);
        let (v, i) = simulate_lif(&cfg, &t, 20).unwrap();
        println!("t = {:<5} V in {v:.7}  I in {i:.7}", t.to_f64());
    }
    println!("t_lo,t_hi,status");
    for s in spike_train(&cfg, 16).unwrap() {
        println!("{}", s.csv_row());
    }
}
