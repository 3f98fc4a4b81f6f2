//! Certified root enclosures with exact multiplicities.
//!
//! Pipeline: exact square-free decomposition, f64 companion-matrix
//! eigenvalues as starting points, multiprecision Aberth polishing, and a
//! complex Krawczyk test on each box. A box `X` passing the test contains
//! exactly one root of its square-free factor, in its interior.

use nalgebra::{Complex, DMatrix, Schur};
use num_traits::{Signed, ToPrimitive};

use super::Poly;
use crate::arith::{ComplexBox, Dyadic, GaussianRational, Interval};

/// Maximum number of precision doublings before giving up on a box.
const MAX_DOUBLINGS: u32 = 8;

/// One distinct root: a certified box, its multiplicity, and the exact value
/// when the root is a Gaussian rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootItem {
    enclosure: ComplexBox,
    multiplicity: u32,
    exact: Option<GaussianRational>,
    factor: Poly,
    certified: bool,
}

impl RootItem {
    pub fn enclosure(&self) -> &ComplexBox {
        &self.enclosure
    }

    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    pub fn exact(&self) -> Option<&GaussianRational> {
        self.exact.as_ref()
    }

    /// The monic square-free factor this root belongs to.
    pub fn factor(&self) -> &Poly {
        &self.factor
    }

    /// False only if certification hit the doubling cap.
    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// A box around the same root of width at most `2^-bits`, contained in
    /// the current one.
    pub fn refine(&self, bits: u32) -> RootItem {
        if let Some(q) = &self.exact {
            let b = exact_box(q, bits);
            if self.enclosure.contains(&b) {
                return RootItem { enclosure: b, ..self.clone() };
            }
        }
        if self.enclosure.width_within(bits as i64) {
            return self.clone();
        }
        let dg = self.factor.derivative();
        let mut c = self.enclosure.mid();
        let e = bits as i64 + 2;
        for level in 0..=MAX_DOUBLINGS {
            let p = (e as u32 + 32) << level;
            c = newton_polish(&self.factor, &dg, &c, p);
            if let Some(x) = krawczyk(&self.factor, &dg, &c, e, p) {
                if self.enclosure.contains(&x) {
                    return RootItem { enclosure: x, ..self.clone() };
                }
            }
            c = self.enclosure.mid();
        }
        self.clone()
    }
}

/// The multiset of roots of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootEnclosures {
    items: Vec<RootItem>,
}

impl RootEnclosures {
    pub fn items(&self) -> &[RootItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Sum of multiplicities.
    pub fn total_multiplicity(&self) -> usize {
        self.items.iter().map(|i| i.multiplicity as usize).sum()
    }

    pub fn is_certified(&self) -> bool {
        self.items.iter().all(|i| i.certified)
    }

    /// The roots with multiplicity, in the stored order.
    pub fn expanded(&self) -> Vec<&RootItem> {
        self.items
            .iter()
            .flat_map(|i| std::iter::repeat_n(i, i.multiplicity as usize))
            .collect()
    }
}

/// Certified enclosures of all roots of `p`, each of width at most
/// `2^-bits`, ordered by (real midpoint, imaginary midpoint).
pub fn certified_roots(p: &Poly, bits: u32) -> RootEnclosures {
    let bits = bits.max(1);
    let mut items = Vec::new();
    for (g, k) in p.squarefree() {
        for (enclosure, exact, certified) in factor_roots(&g, bits) {
            items.push(RootItem {
                enclosure,
                multiplicity: k,
                exact,
                factor: g.clone(),
                certified,
            });
        }
    }
    separate(&mut items, bits);
    items.sort_by(|a, b| {
        let (ma, mb) = (a.enclosure.mid(), b.enclosure.mid());
        ma.re_lo()
            .cmp(mb.re_lo())
            .then_with(|| ma.im_lo().cmp(mb.im_lo()))
    });
    RootEnclosures { items }
}

/// Refine overlapping boxes from different factors until disjoint.
fn separate(items: &mut [RootItem], bits: u32) {
    for level in 1..=MAX_DOUBLINGS {
        let mut clash = vec![false; items.len()];
        for i in 0..items.len() {
            for j in i + 1..items.len() {
                if items[i].enclosure.overlaps(&items[j].enclosure) {
                    clash[i] = true;
                    clash[j] = true;
                }
            }
        }
        if !clash.iter().any(|&c| c) {
            return;
        }
        for (it, c) in items.iter_mut().zip(clash) {
            if c {
                *it = it.refine(bits << level);
            }
        }
    }
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            if items[i].enclosure.overlaps(&items[j].enclosure) {
                items[i].certified = false;
                items[j].certified = false;
            }
        }
    }
}

fn exact_box(q: &GaussianRational, bits: u32) -> ComplexBox {
    q.to_box(bits + 8 + magnitude_bits(q))
}

fn magnitude_bits(q: &GaussianRational) -> u32 {
    let m = q.re().abs().to_f64().unwrap_or(0.0).max(q.im().abs().to_f64().unwrap_or(0.0));
    if m > 1.0 {
        m.log2().ceil() as u32 + 1
    } else {
        0
    }
}

/// Roots of a monic square-free factor.
fn factor_roots(g: &Poly, bits: u32) -> Vec<(ComplexBox, Option<GaussianRational>, bool)> {
    let d = g.degree().unwrap_or(0);
    if d == 1 {
        let q = -g.coeff(0);
        return vec![(exact_box(&q, bits), Some(q), true)];
    }
    // Rational roots have denominators dividing the cleared lead; at width
    // below 1/L^2 the simplest rational in the box is the root if any is.
    let lead_bits = g.integer_coeffs().last().map(|(a, _)| a.bits()).unwrap_or(1) as i64;
    let snap = 2 * lead_bits + 4;
    let e0 = (bits as i64 + 2).max(snap);

    let dg = g.derivative();
    let mut z = initial_estimates(g);
    for level in 0..=MAX_DOUBLINGS {
        let e = e0 << level;
        let p = (e as u32) + 32 + 8 * d as u32;
        z = aberth(g, &dg, z, p);
        let boxes: Option<Vec<ComplexBox>> = z.iter().map(|c| krawczyk(g, &dg, c, e, p)).collect();
        let Some(boxes) = boxes else { continue };
        let disjoint = (0..d).all(|i| (i + 1..d).all(|j| !boxes[i].overlaps(&boxes[j])));
        if !disjoint {
            z = jitter(&z, p);
            continue;
        }
        return boxes
            .into_iter()
            .map(|x| {
                let q = snap_exact(g, &x);
                let b = match &q {
                    Some(q) if Dyadic::from_rational_exact(q.re()).is_some()
                        && Dyadic::from_rational_exact(q.im()).is_some() =>
                    {
                        q.to_box(64)
                    }
                    _ => x,
                };
                (b, q, true)
            })
            .collect();
    }
    // Uncertified fallback: best estimates, padded.
    z.into_iter()
        .map(|c| (c.widen(&Dyadic::pow2(-(bits as i64) - 1)), None, false))
        .collect()
}

fn snap_exact(g: &Poly, x: &ComplexBox) -> Option<GaussianRational> {
    let re = GaussianRational::simplest_in(&x.re_lo().to_rational(), &x.re_hi().to_rational());
    let im = GaussianRational::simplest_in(&x.im_lo().to_rational(), &x.im_hi().to_rational());
    let q = GaussianRational::new(re, im);
    g.eval(&q).is_zero().then_some(q)
}

fn point_round(b: &ComplexBox, p: u32) -> ComplexBox {
    let m = b.mid();
    ComplexBox::point(m.re_lo().round_down(p), m.im_lo().round_down(p))
}

fn to_c64(b: &ComplexBox) -> Complex<f64> {
    let m = b.mid();
    Complex::new(m.re_lo().to_f64(), m.im_lo().to_f64())
}

fn from_c64(c: Complex<f64>) -> ComplexBox {
    let f = |x: f64| Dyadic::from_f64(if x.is_finite() { x } else { 0.0 }).unwrap();
    ComplexBox::point(f(c.re), f(c.im))
}

/// Companion-matrix eigenvalues, or points on a circle if that fails.
fn initial_estimates(g: &Poly) -> Vec<ComplexBox> {
    let d = g.degree().unwrap_or(0);
    let cf: Vec<Complex<f64>> = g
        .coeffs()
        .iter()
        .map(|c| Complex::new(c.re().to_f64().unwrap_or(0.0), c.im().to_f64().unwrap_or(0.0)))
        .collect();
    let mut m = DMatrix::<Complex<f64>>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -cf[i];
    }
    let eig = Schur::try_new(m, 1e-14, 10_000).and_then(|s| s.eigenvalues());
    if let Some(ev) = eig {
        if ev.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return ev.iter().map(|&z| from_c64(z)).collect();
        }
    }
    let radius = 1.0 + cf[..d].iter().map(|c| c.norm()).fold(0.0, f64::max);
    (0..d)
        .map(|k| {
            let a = std::f64::consts::TAU * (k as f64 + 0.25) / d as f64;
            from_c64(Complex::from_polar(radius, a))
        })
        .collect()
}

fn jitter(z: &[ComplexBox], p: u32) -> Vec<ComplexBox> {
    z.iter()
        .enumerate()
        .map(|(k, c)| {
            let w = to_c64(c);
            let eps = 1e-3 * (1.0 + w.norm()) * (k as f64 + 1.0);
            point_round(&(c + &from_c64(Complex::from_polar(eps, 0.7 + k as f64))), p)
        })
        .collect()
}

/// Simultaneous Aberth iteration at working precision `p` (point arithmetic).
fn aberth(g: &Poly, dg: &Poly, mut z: Vec<ComplexBox>, p: u32) -> Vec<ComplexBox> {
    let d = z.len();
    let tol = Dyadic::pow2(-(p as i64) + 16);
    for _ in 0..200 {
        let mut biggest = Dyadic::zero();
        for k in 0..d {
            let gv = point_round(&g.eval_box(&z[k], p), p);
            if gv.is_point() && gv.contains_zero() {
                continue;
            }
            let dv = point_round(&dg.eval_box(&z[k], p), p);
            let Ok(n) = gv.div(&dv, p) else {
                z[k] = jitter(&z[k..k + 1], p).remove(0);
                continue;
            };
            let n = point_round(&n, p);
            let mut s = ComplexBox::zero();
            for j in 0..d {
                if j != k {
                    match ComplexBox::one().div(&(&z[k] - &z[j]), p) {
                        Ok(r) => s = point_round(&(&s + &r), p),
                        Err(_) => continue,
                    }
                }
            }
            let denom = &ComplexBox::one() - &(&n * &s);
            let w = match n.div(&denom, p) {
                Ok(w) => point_round(&w, p),
                Err(_) => n,
            };
            let scale = Dyadic::max(&Dyadic::one(), &z[k].mag());
            let rel = Dyadic::div_up(&w.mag(), &scale, 32);
            if rel > biggest {
                biggest = rel;
            }
            z[k] = point_round(&(&z[k] - &w), p);
        }
        if biggest <= tol {
            break;
        }
    }
    z
}

fn newton_polish(g: &Poly, dg: &Poly, c: &ComplexBox, p: u32) -> ComplexBox {
    let mut c = point_round(c, p);
    let tol = Dyadic::pow2(-(p as i64) + 16);
    for _ in 0..100 {
        let gv = point_round(&g.eval_box(&c, p), p);
        let dv = point_round(&dg.eval_box(&c, p), p);
        let Ok(w) = gv.div(&dv, p) else { break };
        let w = point_round(&w, p);
        c = point_round(&(&c - &w), p);
        if w.mag() <= Dyadic::max(&Dyadic::one(), &c.mag()).shl(-(p as i64) + 16) || w.mag() <= tol {
            break;
        }
    }
    c
}

/// Krawczyk test on the square box of half-width `2^-(e+1)` about `c`.
/// Returns the box when it provably contains exactly one root of `g`.
fn krawczyk(g: &Poly, dg: &Poly, c: &ComplexBox, e: i64, p: u32) -> Option<ComplexBox> {
    let r = Dyadic::pow2(-e - 1);
    let x = c.widen(&r);
    let dc = point_round(&dg.eval_box(c, p), p);
    let y = point_round(&ComplexBox::one().div(&dc, p).ok()?, p);
    let gc = g.eval_box(c, p);
    let dgx = dg.eval_box(&x, p);
    let dx = ComplexBox::new(Interval::symmetric(r.clone()), Interval::symmetric(r));
    let k = &(c - &(&y * &gc)) + &(&(&ComplexBox::one() - &(&y * &dgx)) * &dx);
    x.interior_contains(&k.round(p)).then_some(x)
}

/// Outcome of comparing two root multisets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inclusion {
    Included,
    /// `witness` indexes an item of the first multiset whose root occurs in
    /// the second with multiplicity `available`, less than needed.
    NotIncluded { witness: usize, available: u32 },
    Inconclusive { reason: String },
}

/// Whether every root of `a` occurs in `b` with at least the same
/// multiplicity.
pub fn multiset_root_inclusion(a: &RootEnclosures, b: &RootEnclosures) -> Inclusion {
    let mut used = vec![false; b.items.len()];
    let mut undetermined = None;
    for (ia, ra) in a.items.iter().enumerate() {
        let mut matched = None;
        let mut unsure = false;
        for (ib, rb) in b.items.iter().enumerate() {
            if used[ib] || !ra.enclosure.overlaps(&rb.enclosure) {
                continue;
            }
            match same_root(ra, rb) {
                Some(true) => {
                    matched = Some(ib);
                    break;
                }
                Some(false) => {}
                None => unsure = true,
            }
        }
        match matched {
            Some(ib) => {
                used[ib] = true;
                let available = b.items[ib].multiplicity;
                if available < ra.multiplicity {
                    return Inclusion::NotIncluded { witness: ia, available };
                }
            }
            None if !unsure && ra.certified => {
                return Inclusion::NotIncluded { witness: ia, available: 0 };
            }
            None => undetermined = undetermined.or(Some(ia)),
        }
    }
    match undetermined {
        Some(ia) => Inclusion::Inconclusive {
            reason: format!("root {ia} could not be separated or identified"),
        },
        None => Inclusion::Included,
    }
}

/// Decide whether two overlapping certified boxes hold the same root.
fn same_root(a: &RootItem, b: &RootItem) -> Option<bool> {
    if !(a.certified && b.certified) {
        return None;
    }
    if let (Some(p), Some(q)) = (&a.exact, &b.exact) {
        return Some(p == q);
    }
    if let Some(q) = &a.exact {
        return Some(b.factor.eval(q).is_zero() && q.in_box(&b.enclosure));
    }
    if let Some(q) = &b.exact {
        return Some(a.factor.eval(q).is_zero() && q.in_box(&a.enclosure));
    }
    // Common roots are exactly the roots of the gcd.
    let h = a.factor.gcd(&b.factor);
    if h.degree().unwrap_or(0) == 0 {
        return Some(false);
    }
    let base = a.enclosure.width().log2_upper().unsigned_abs().max(16) as u32;
    for level in 0..=MAX_DOUBLINGS {
        let bits = base << level.min(4);
        let hr = certified_roots(&h, bits + 8 * level);
        let locate = |it: &RootItem| -> Option<Option<usize>> {
            let mut inside = None;
            let mut undecided = false;
            for (k, r) in hr.items.iter().enumerate() {
                if it.enclosure.contains(&r.enclosure) {
                    inside = Some(k);
                } else if it.enclosure.overlaps(&r.enclosure) {
                    undecided = true;
                }
            }
            match (inside, undecided) {
                (Some(k), _) => Some(Some(k)),
                (None, false) => Some(None),
                (None, true) => None,
            }
        };
        match (locate(a), locate(b)) {
            (Some(None), _) | (_, Some(None)) => return Some(false),
            (Some(Some(i)), Some(Some(j))) => return Some(i == j),
            _ => {}
        }
    }
    None
}
