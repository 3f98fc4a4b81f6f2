mod common;

use common::{exp_oracle, g};
use odeblowup::analyzer::{classify_scalar, Verdict};
use odeblowup::arith::{exp_box, mat_exp, CMatrix, ComplexBox, Dyadic, GaussianRational, Interval};
use odeblowup::lif::{first_spike, LifConfig, SpikeStatus};
use odeblowup::model::{build_lif, LinearODE};
use odeblowup::poly::{certified_roots, multiset_root_inclusion, Inclusion, Poly};
use odeblowup::profiler::{run_profile, Problem};
use odeblowup::signal::{eval_enclosure, parse_signal, to_exp_polynomial, Signal};
use odeblowup::solver::{solve_cascade, solve_cascade_with, solve_first_order, Backend, SolutionQuery, SolverOptions};
use proptest::prelude::*;

/// Regressions are not persisted: integration tests have no source root.
fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn dyadic() -> impl Strategy<Value = Dyadic> {
    (-(1i64 << 20)..(1i64 << 20), -24i64..4).prop_map(|(m, e)| Dyadic::from_i64(m).shl(e))
}

/// A box together with a point inside it.
fn sampled_box() -> impl Strategy<Value = (ComplexBox, Dyadic, Dyadic)> {
    (dyadic(), dyadic(), 0u32..16, 0u32..16, 0i64..=16, 0i64..=16).prop_map(|(re, im, wr, wi, fr, fi)| {
        let w_re = Dyadic::pow2(-i64::from(wr));
        let w_im = Dyadic::pow2(-i64::from(wi));
        let b = ComplexBox::from_bounds(re.clone(), &re + &w_re, im.clone(), &im + &w_im);
        let pr = &re + &(&w_re * &Dyadic::from_i64(fr)).shl(-4);
        let pi = &im + &(&w_im * &Dyadic::from_i64(fi)).shl(-4);
        (b, pr, pi)
    })
}

fn gaussian() -> impl Strategy<Value = GaussianRational> {
    (-30i64..30, 1i64..12, -30i64..30, 1i64..12).prop_map(|(a, b, c, d)| GaussianRational::complex(a, b, c, d))
}

fn small_root() -> impl Strategy<Value = GaussianRational> {
    (-4i64..=4, 1i64..=3, -2i64..=2, 1i64..=2).prop_map(|(a, b, c, d)| GaussianRational::complex(a, b, c, d))
}

fn exact_point(re: &Dyadic, im: &Dyadic) -> GaussianRational {
    GaussianRational::new(re.to_rational(), im.to_rational())
}

proptest! {
    #![proptest_config(config(10_000))]

    #[test]
    fn box_ops_are_outward_rounded((x, xr, xi) in sampled_box(), (y, yr, yi) in sampled_box(), prec in 4u32..40) {
        let (a, b) = (exact_point(&xr, &xi), exact_point(&yr, &yi));
        prop_assert!((&a + &b).in_box(&(&x + &y).round(prec)));
        prop_assert!((&a - &b).in_box(&(&x - &y).round(prec)));
        prop_assert!((&a * &b).in_box(&(&x * &y).round(prec)));
        if let Ok(q) = x.div(&y, prec) {
            prop_assert!((&a * &b.recip().unwrap()).in_box(&q));
        }
    }
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn gaussian_field_ops_are_exact(a in gaussian(), b in gaussian()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) * &b.recip().unwrap(), a);
        }
    }

    #[test]
    fn exp_is_sound_and_monotone(p in -64i64..64, bits in 4u32..60) {
        let x = Dyadic::from_i64(p).shl(-4);
        let want = exp_oracle(&x.to_rational());
        let loose = exp_box(&ComplexBox::real(x.clone()), bits);
        let tight = exp_box(&ComplexBox::real(x), bits + 8);
        prop_assert!(common::box_contains(&tight, &want));
        prop_assert!(tight.width() <= loose.width());
        prop_assert!(loose.contains(&tight));
    }

    #[test]
    fn mat_exp_is_nested(e in proptest::collection::vec(-8i64..8, 4), bits in 8u32..40) {
        let m = CMatrix::from_i64_rows(&[&e[..2], &e[2..]]).scale(&GaussianRational::ratio(1, 4));
        let b = m.to_box(bits + 16);
        let loose = mat_exp(&b, bits);
        let tight = mat_exp(&b, bits + 8);
        prop_assert!(loose.contains(&tight));
    }

    #[test]
    fn reduce_at_root_reconstructs(c in proptest::collection::vec(gaussian(), 2..10), z in gaussian()) {
        let p = Poly::new(c);
        prop_assume!(p.degree().unwrap_or(0) >= 1);
        let (r, b) = p.reduce_at_root(&z).unwrap();
        prop_assert_eq!(&(&Poly::linear(&z) * &r) + &Poly::constant(b), p);
    }

    #[test]
    fn deflation_removes_one_copy(roots in proptest::collection::vec(small_root(), 1..6), pick in 0usize..6) {
        let sigma = roots[pick % roots.len()].clone();
        let p = Poly::from_roots(&roots);
        let (r, b) = p.reduce_at_root(&sigma).unwrap();
        prop_assert!(b.is_zero());
        let mut want = roots.clone();
        want.remove(pick % roots.len());
        let mut have: Vec<GaussianRational> = Vec::new();
        for it in certified_roots(&r, 32).items() {
            let z = it.exact().expect("rational roots are found exactly").clone();
            have.extend(std::iter::repeat_n(z, it.multiplicity() as usize));
        }
        let key = |z: &GaussianRational| (z.re().clone(), z.im().clone());
        want.sort_by_key(key);
        have.sort_by_key(key);
        prop_assert_eq!(have, want);
    }

    #[test]
    fn multiplicities_sum_to_degree(c in proptest::collection::vec(gaussian(), 2..7)) {
        let p = Poly::new(c);
        prop_assume!(p.degree().unwrap_or(0) >= 1);
        let r = certified_roots(&p, 24);
        prop_assert_eq!(r.total_multiplicity(), p.degree().unwrap());
    }

    #[test]
    fn divisibility_paths_agree(a in proptest::collection::vec(small_root(), 1..4), b in proptest::collection::vec(small_root(), 0..4)) {
        let py = Poly::from_roots(&a);
        let pu = Poly::from_roots(&b);
        let exact = py.divides(&pu).unwrap();
        match multiset_root_inclusion(&certified_roots(&py, 32), &certified_roots(&pu, 32)) {
            Inclusion::Included => prop_assert!(exact),
            Inclusion::NotIncluded { .. } => prop_assert!(!exact),
            Inclusion::Inconclusive { .. } => {}
        }
    }
}

fn signal_text() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec![
        "t^2",
        "exp(-t)",
        "sin(3*t)",
        "exp(-t)*sin(3*t)",
        "cos(t)^2 + t",
        "exp(1/2*t)*(t^3 - 2*t)",
        "sin(cos(t))",
        "exp(t^2)",
        "i*t + exp(i*t)",
    ])
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn derivative_matches_finite_difference(text in signal_text(), k in 1i64..16) {
        let s = Signal::parse(text).unwrap();
        let t = Dyadic::from_i64(k).shl(-4);
        let h = Dyadic::pow2(-20);
        let f = |x: &Dyadic| eval_enclosure(&s, 0, x, 60).unwrap();
        let fd = (&f(&(&t + &h)) - &f(&(&t - &h))).shl(19);
        let d = eval_enclosure(&s, 1, &t, 30).unwrap();
        prop_assert!((&fd - &d).mag() <= Dyadic::pow2(-10));
    }

    #[test]
    fn canonical_form_matches_ast(text in signal_text(), k in 0i64..=16, bits in prop::sample::select(vec![10u32, 20, 30])) {
        let e = parse_signal(text).unwrap();
        if let Some(ep) = to_exp_polynomial(&e) {
            let t = Dyadic::from_i64(k).shl(-4);
            let direct = eval_enclosure(&Signal::Expr(e), 0, &t, bits).unwrap();
            prop_assert!(ep.eval(&t, bits).overlaps(&direct));
        } else {
            prop_assert!(text == "sin(cos(t))" || text == "exp(t^2)");
        }
    }

    #[test]
    fn parser_round_trip(text in signal_text()) {
        let e = parse_signal(text).unwrap();
        prop_assert_eq!(parse_signal(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn signal_enclosures_nest(text in signal_text(), j in 0usize..3, k in 0i64..=8, bits in 4u32..40) {
        let s = Signal::parse(text).unwrap();
        let t = Dyadic::from_i64(k).shl(-3);
        let loose = eval_enclosure(&s, j, &t, bits).unwrap();
        let tight = eval_enclosure(&s, j, &t, bits + 8).unwrap();
        prop_assert!(loose.contains(&tight));
        prop_assert!(loose.width_within(i64::from(bits)));
    }

    #[test]
    fn normalize_is_idempotent_and_keeps_verdict(a in proptest::collection::vec(gaussian(), 2..5), b in proptest::collection::vec(gaussian(), 1..5)) {
        prop_assume!(!a.last().unwrap().is_zero());
        let m = a.len() - 1;
        let ode = LinearODE::new(a, b, vec![g(0); m]).unwrap();
        let n = ode.normalize();
        prop_assert_eq!(n.normalize(), n.clone());
        prop_assert!(n.char_polys().0.is_monic());
        let (py, pu) = ode.char_polys();
        let (npy, npu) = n.char_polys();
        prop_assert_eq!(py.divides(&pu).unwrap(), npy.divides(&npu).unwrap());
    }

    #[test]
    fn classification_is_scale_invariant(roots in proptest::collection::vec(small_root(), 1..4), extra in proptest::collection::vec(small_root(), 0..3), c in gaussian(), shared in any::<bool>()) {
        prop_assume!(!c.is_zero());
        let py = Poly::from_roots(&roots);
        let mut pu_roots = if shared { roots.clone() } else { vec![] };
        pu_roots.extend(extra);
        let pu = Poly::from_roots(&pu_roots);
        let m = roots.len();
        let ode = LinearODE::new(py.scale(&c).coeffs().to_vec(), pu.coeffs().to_vec(), vec![g(0); m]).unwrap();
        let v = classify_scalar(&ode);
        prop_assert_eq!(&v, &classify_scalar(&ode.normalize()));
        if let Verdict::TrivialNoBlowup { q } = &v {
            prop_assert_eq!(&(&py.scale(&c) * q).scale(&c.recip().unwrap()), &pu.scale(&c.recip().unwrap()));
        }
        if let Verdict::Blowup { witness, .. } = &v {
            let w = witness.refine(48);
            for r in certified_roots(&pu, 48).items() {
                prop_assert!(!w.enclosure().overlaps(r.enclosure()) || witness.multiplicity() > r.multiplicity());
            }
        }
    }

    #[test]
    fn lif_satisfies_system_hypotheses(p in 1i64..40, q in 1i64..10, r in 1i64..40, s in 1i64..10) {
        let sys = build_lif(&GaussianRational::ratio(p, q), &GaussianRational::ratio(r, s), &g(0), &g(0), &g(0)).unwrap();
        let inv = sys.a1().inverse().unwrap();
        let mm = &inv * sys.a0();
        prop_assert!(mm.commutator(&(&inv * &sys.b()[0])).is_zero());
    }
}

fn exp_poly_ode() -> impl Strategy<Value = (LinearODE, &'static str)> {
    (
        prop::sample::select(vec![vec![1i64, 1], vec![-1, 2], vec![2, 3, 1], vec![1, 0, 1], vec![6, 11, 6, 1], vec![0, 1]]),
        prop::sample::select(vec!["exp(-t)", "t^2 + 1", "sin(2*t)", "exp(1/2*t)*cos(t)"]),
        -3i64..=3,
    )
        .prop_map(|(a, text, y)| {
            let m = a.len() - 1;
            let y0: Vec<i64> = (0..m as i64).map(|k| y - k).collect();
            (LinearODE::from_i64(&a, &[1], &y0).unwrap(), text)
        })
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn solutions_nest((ode, text) in exp_poly_ode(), k in 0i64..=4, bits in 4u32..28) {
        let u = Signal::parse(text).unwrap();
        let t = Dyadic::from_i64(k).shl(-2);
        let loose = solve_cascade(&ode, &u, &SolutionQuery::new(t.clone(), bits).unwrap()).unwrap();
        let tight = solve_cascade(&ode, &u, &SolutionQuery::new(t, bits + 8).unwrap()).unwrap();
        prop_assert!(loose.scalar().width_within(i64::from(bits)));
        prop_assert!(loose.scalar().contains(tight.scalar()));
    }

    #[test]
    fn backends_and_orders_agree((ode, text) in exp_poly_ode(), k in 1i64..=4) {
        let u = Signal::parse(text).unwrap();
        let q = SolutionQuery::new(Dyadic::from_i64(k).shl(-2), 16).unwrap();
        let closed = solve_cascade(&ode, &u, &q).unwrap();
        let quad = solve_cascade_with(&ode, &u, &q, &SolverOptions { backend: Some(Backend::Quadrature), ..SolverOptions::default() }).unwrap();
        prop_assert_eq!(quad.backend, Backend::Quadrature);
        prop_assert!(closed.scalar().overlaps(quad.scalar()));
        let m = ode.order().0;
        let reversed: Vec<usize> = (0..m).rev().collect();
        let rev = solve_cascade_with(&ode, &u, &q, &SolverOptions { root_order: Some(reversed), ..SolverOptions::default() }).unwrap();
        prop_assert!(closed.scalar().overlaps(rev.scalar()));
        if m == 1 {
            prop_assert!(solve_first_order(&ode, &u, &q).unwrap().scalar().overlaps(closed.scalar()));
        }
    }

    #[test]
    fn first_order_residual(a0 in -2i64..=4, text in prop::sample::select(vec!["exp(-t)", "t^2 + 1", "sin(2*t)"]), k in 2i64..=14) {
        // (y(t+h) - y(t-h)) / 2h + a0 y(t) against u(t).
        let ode = LinearODE::from_i64(&[a0, 1], &[1], &[1]).unwrap();
        let u = Signal::parse(text).unwrap();
        let t = Dyadic::from_i64(k).shl(-4);
        let h = Dyadic::pow2(-10);
        let y = |x: Dyadic| solve_first_order(&ode, &u, &SolutionQuery::new(x, 44).unwrap()).unwrap().scalar().clone();
        let fd = (&y(&t + &h) - &y(&t - &h)).shl(9);
        let lhs = &fd + &(&y(t.clone()) * &ComplexBox::from_i64(a0));
        let rhs = eval_enclosure(&u, 0, &t, 40).unwrap();
        // Truncation h^2 |y'''| / 6 stays below 2^-12 for these data.
        prop_assert!((&lhs - &rhs).mag() <= Dyadic::pow2(-12));
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn spike_boxes_refine(theta in prop::sample::select(vec![(1i64, 8i64), (1, 4), (3, 8), (1, 3)]), bits in 8u32..14) {
        let cfg = LifConfig::new(g(1), GaussianRational::ratio(1, 2), g(0), GaussianRational::ratio(theta.0, theta.1), g(0), g(0), Signal::parse("1").unwrap()).unwrap();
        let loose = first_spike(&cfg, bits).unwrap();
        let tight = first_spike(&cfg, bits + 8).unwrap();
        match (&loose.status, &tight.status) {
            (SpikeStatus::Crossed { lo: a, hi: b }, SpikeStatus::Crossed { lo: c, hi: d }) => {
                prop_assert!(a <= c && d <= b);
                // t* solves (1 - e^-t)^2 = theta.
                let want = -(1.0 - (theta.0 as f64 / theta.1 as f64).sqrt()).ln();
                prop_assert!(c.to_f64() <= want + 1e-12 && want - 1e-12 <= d.to_f64());
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn resting_neuron_never_fires(v in -70i64..0, dth in 1i64..20) {
        let cfg = LifConfig::new(g(1), g(1), g(v), g(v + dth), g(v), g(0), Signal::zero()).unwrap();
        prop_assert_eq!(first_spike(&cfg, 12).unwrap().status, SpikeStatus::NoCrossing);
    }

    #[test]
    fn profile_is_deterministic_and_monotone(pick in 0usize..2) {
        let texts = ["exp(-t)", "t^2 + 1"];
        let problem = Problem::Scalar { ode: LinearODE::from_i64(&[1, 1], &[1], &[0]).unwrap(), u: Signal::parse(texts[pick]).unwrap() };
        let bits = [8, 12, 16, 20];
        let a = run_profile(&problem, &Dyadic::one(), &bits, Some(Backend::Quadrature));
        let b = run_profile(&problem, &Dyadic::one(), &bits, Some(Backend::Quadrature));
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!((x.arith_ops, x.quadrature_nodes, x.exp_evals), (y.arith_ops, y.quadrature_nodes, y.exp_evals));
        }
        prop_assert!(a.windows(2).all(|w| w[0].quadrature_nodes <= w[1].quadrature_nodes));
    }
}

#[test]
fn interval_division_by_zero_is_refused() {
    let z = Interval::new(Dyadic::from_i64(-1), Dyadic::one());
    assert!(Interval::point(Dyadic::one()).div(&z, 10).is_err());
}
