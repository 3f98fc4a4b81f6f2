// Outward-rounded boxes: arithmetic, `exp`, and the publish step.

use odeblowup::arith::{exp_box, mat_exp, sin_box, CMatrix};
use odeblowup::{ComplexBox, Dyadic, GaussianRational};

pub fn main() {
    let third = GaussianRational::ratio(1, 3).to_box(40);
    println!("1/3 at 40 bits     {third:.15}");
    println!("(1/3)^2            {:.15}", third.sqr().round(40));

    let z = ComplexBox::point(Dyadic::one(), Dyadic::pow2(-1));
    for bits in [10, 30, 50] {
        let e = exp_box(&z, bits);
        println!("exp(1 + i/2) @ {bits:>2}  {e:.16}  width <= 2^-{bits}: {}", e.width_within(bits.into()));
    }
    println!("sin(1)             {:.16}", sin_box(&ComplexBox::one(), 50));

    let rot = CMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]);
    let e = mat_exp(&rot.to_box(64), 40);
    println!("exp([[0,-1],[1,0]]) first column: {:.12}, {:.12}", e.get(0, 0), e.get(1, 0));
}
