//! Certified enclosures of pi, sin, cos, atan, and rectangle arguments.
//!
//! These back the winding-number zero counter: sample points on a circle need
//! `sin`/`cos` enclosures, and phase bookkeeping needs the argument of a
//! zero-free rectangle `[re] x [im]`. Series are alternating with certified
//! tail bounds; range reductions only ever use enclosed constants, so sloppy
//! reduction choices can widen results but never falsify them.

use super::{Dyadic, RigorousValue};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

fn pi_cache() -> &'static Mutex<HashMap<u32, RigorousValue>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, RigorousValue>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Bracket of `atan(1/m)` by exact rational partial sums of the alternating
/// series, with the first omitted term as the error bound.
fn atan_inv_rational(m: u64, prec: u32) -> (BigRational, BigRational) {
    let msq = BigRational::from_integer(BigInt::from(m * m));
    let threshold = BigRational::new(BigInt::one(), BigInt::one() << (prec as u64 + 8));
    let mut sum = BigRational::zero();
    let mut power = BigRational::new(BigInt::one(), BigInt::from(m)); // 1/m^(2i+1)
    let mut i: u64 = 0;
    loop {
        let term = &power / BigRational::from_integer(BigInt::from(2 * i + 1));
        if term < threshold {
            // Error has the sign of this first omitted term.
            return if i % 2 == 0 { (sum.clone(), sum + term) } else { (sum.clone() - term, sum) };
        }
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &msq;
        i += 1;
    }
}

/// Enclosure of pi at the given precision (Machin's formula), cached.
pub fn pi(prec: u32) -> RigorousValue {
    if let Some(v) = pi_cache().lock().unwrap().get(&prec) {
        return v.clone();
    }
    let (a_lo, a_hi) = atan_inv_rational(5, prec);
    let (b_lo, b_hi) = atan_inv_rational(239, prec);
    let sixteen = BigRational::from_integer(BigInt::from(16));
    let four = BigRational::from_integer(BigInt::from(4));
    let lo = &sixteen * &a_lo - &four * &b_hi;
    let hi = &sixteen * &a_hi - &four * &b_lo;
    let v = RigorousValue::from_rational_bounds(&lo, &hi, prec);
    pi_cache().lock().unwrap().insert(prec, v.clone());
    v
}

/// `2 * pi` enclosure.
pub fn two_pi(prec: u32) -> RigorousValue {
    pi(prec).scale2(1)
}

/// Taylor evaluation of sin and cos on `y` with `|y| <= 1`; the tail after
/// the last retained term is bounded by twice the first omitted term.
fn sin_cos_taylor(y: &RigorousValue, prec: u32) -> (RigorousValue, RigorousValue) {
    debug_assert!(y.mag().to_f64() <= 1.25);
    let threshold = Dyadic::new(BigInt::one(), -(prec as i64 + 6));
    let ysq = y.mul(y);
    // sin: sum (-1)^i y^(2i+1)/(2i+1)!   cos: sum (-1)^i y^(2i)/(2i)!
    let mut sin = RigorousValue::zero(prec);
    let mut cos = RigorousValue::zero(prec);
    let mut term_s = y.clone();
    let mut term_c = RigorousValue::one(prec);
    let mut i: i64 = 0;
    loop {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        sin = sin.add(&term_s.mul_int(sign));
        cos = cos.add(&term_c.mul_int(sign));
        let next_c = term_c
            .mul(&ysq)
            .div(&RigorousValue::from_int((2 * i + 1) * (2 * i + 2), prec))
            .expect("nonzero factorial");
        let next_s = term_s
            .mul(&ysq)
            .div(&RigorousValue::from_int((2 * i + 2) * (2 * i + 3), prec))
            .expect("nonzero factorial");
        if next_s.mag() <= threshold && next_c.mag() <= threshold {
            // Ratios are below 1/2 from the first step on, so twice the next
            // term dominates the whole tail.
            let pad_s = RigorousValue::from_endpoints(
                next_s.mag().scale2(1).neg(),
                next_s.mag().scale2(1),
                prec,
            );
            let pad_c = RigorousValue::from_endpoints(
                next_c.mag().scale2(1).neg(),
                next_c.mag().scale2(1),
                prec,
            );
            sin = sin.add(&pad_s);
            cos = cos.add(&pad_c);
            break;
        }
        term_s = next_s;
        term_c = next_c;
        i += 1;
    }
    let unit = RigorousValue::from_endpoints(Dyadic::from_int(-1), Dyadic::from_int(1), prec);
    (sin.intersect(&unit).unwrap_or(unit.clone()), cos.intersect(&unit).unwrap_or(unit))
}

/// Certified sin and cos of an arbitrary interval argument.
///
/// Quadrant reduction subtracts a heuristic multiple of `pi/2` enclosure-wise;
/// a wrong multiple would only leave `y` outside the Taylor window, which is
/// detected and handled by splitting, never by returning a wrong enclosure.
pub fn sin_cos(x: &RigorousValue, prec: u32) -> (RigorousValue, RigorousValue) {
    let unit = RigorousValue::from_endpoints(Dyadic::from_int(-1), Dyadic::from_int(1), prec);
    if x.width().to_f64() > 6.0 {
        return (unit.clone(), unit);
    }
    if x.width().to_f64() > 0.7 {
        // Split wide arguments and hull the pieces.
        let (a, b) = x.bisect();
        let (sa, ca) = sin_cos(&a, prec);
        let (sb, cb) = sin_cos(&b, prec);
        return (sa.hull(&sb), ca.hull(&cb));
    }
    let half_pi = pi(prec).scale2(-1);
    let k = (x.approx() / (std::f64::consts::PI / 2.0)).round() as i64;
    let y = x.sub(&half_pi.mul_int(k));
    if y.mag().to_f64() > 1.2 {
        // Heuristic reduction missed (possible only for enormous inputs where
        // f64 lost the midpoint); fall back to the trivial enclosure.
        return (unit.clone(), unit);
    }
    let (s, c) = sin_cos_taylor(&y, prec);
    match k.rem_euclid(4) {
        0 => (s, c),
        1 => (c, s.neg()),
        2 => (s.neg(), c.neg()),
        _ => (c.neg(), s),
    }
}

/// atan of a point dyadic, as an enclosure.
fn atan_point(x: &Dyadic, prec: u32) -> RigorousValue {
    if x.is_zero() {
        return RigorousValue::zero(prec);
    }
    if x.is_negative() {
        return atan_point(&x.neg(), prec).neg();
    }
    let one = RigorousValue::one(prec);
    if *x > Dyadic::from_int(1) {
        // atan(x) = pi/2 - atan(1/x)
        let inv = one.div(&RigorousValue::point(x.clone(), prec)).expect("x > 1");
        return pi(prec).scale2(-1).sub(&atan_interval_small(&inv, prec));
    }
    atan_interval_small(&RigorousValue::point(x.clone(), prec), prec)
}

/// atan on `[0, 1]`-ish intervals: five argument halvings then the
/// alternating series.
fn atan_interval_small(x: &RigorousValue, prec: u32) -> RigorousValue {
    const HALVINGS: u32 = 5;
    let one = RigorousValue::one(prec);
    let mut t = x.clone();
    for _ in 0..HALVINGS {
        // atan(t) = 2 atan(t / (1 + sqrt(1 + t^2)))
        let denom = one.add(&one.add(&t.mul(&t)).sqrt().expect("1 + t^2 >= 1"));
        t = t.div(&denom).expect("denominator >= 2");
    }
    let threshold = Dyadic::new(BigInt::one(), -(prec as i64 + 6));
    let tsq = t.mul(&t);
    let mut sum = RigorousValue::zero(prec);
    let mut power = t.clone();
    let mut i: i64 = 0;
    loop {
        let term = power.div(&RigorousValue::from_int(2 * i + 1, prec)).unwrap();
        sum = sum.add(&term.mul_int(if i % 2 == 0 { 1 } else { -1 }));
        power = power.mul(&tsq);
        let next_mag = power.mag();
        if next_mag <= threshold {
            let pad = RigorousValue::from_endpoints(next_mag.scale2(1).neg(), next_mag.scale2(1), prec);
            sum = sum.add(&pad);
            break;
        }
        i += 1;
    }
    sum.scale2(HALVINGS as i64)
}

/// atan over an interval; monotone, so endpoints suffice.
pub fn atan(x: &RigorousValue, prec: u32) -> RigorousValue {
    let lo = atan_point(x.lo(), prec);
    let hi = atan_point(x.hi(), prec);
    RigorousValue::from_endpoints(lo.lo().clone(), hi.hi().clone(), prec)
}

/// A rectangle `[re] x [im]` in the complex plane.
#[derive(Clone, Debug)]
pub struct ComplexRect {
    pub re: RigorousValue,
    pub im: RigorousValue,
}

impl ComplexRect {
    pub fn new(re: RigorousValue, im: RigorousValue) -> ComplexRect {
        ComplexRect { re, im }
    }

    pub fn zero(prec: u32) -> ComplexRect {
        ComplexRect { re: RigorousValue::zero(prec), im: RigorousValue::zero(prec) }
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn add(&self, rhs: &ComplexRect) -> ComplexRect {
        ComplexRect { re: self.re.add(&rhs.re), im: self.im.add(&rhs.im) }
    }

    pub fn mul(&self, rhs: &ComplexRect) -> ComplexRect {
        ComplexRect {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }

    pub fn scale(&self, s: &RigorousValue) -> ComplexRect {
        ComplexRect { re: self.re.mul(s), im: self.im.mul(s) }
    }

    /// Upper bound on |z| over the rectangle.
    pub fn mag_upper(&self) -> Dyadic {
        let prec = self.re.prec();
        let m = RigorousValue::point(self.re.mag(), prec)
            .powi(2)
            .unwrap()
            .add(&RigorousValue::point(self.im.mag(), prec).powi(2).unwrap());
        m.sqrt().expect("nonnegative").hi().clone()
    }
}

/// Argument enclosure of a zero-free rectangle. The result is an interval of
/// angles (not reduced mod 2pi) of width < pi. Fails on rectangles that meet
/// zero, since those have no single-valued argument.
pub fn arg_enclosure(z: &ComplexRect, prec: u32) -> Result<RigorousValue> {
    // A zero-free axis-aligned rectangle misses zero in at least one
    // coordinate, so one of the four open half-planes contains it after a
    // quarter-turn rotation (which permutes/negates coordinates exactly).
    if z.re.lo().is_positive() {
        let ratio = z.im.div(&z.re)?;
        return Ok(atan(&ratio, prec));
    }
    if z.re.hi().is_negative() {
        // Rotate by pi: (-re, -im) is in the right half-plane.
        let rot = ComplexRect { re: z.re.neg(), im: z.im.neg() };
        let base = arg_enclosure(&rot, prec)?;
        return Ok(base.add(&pi(prec)));
    }
    if z.im.lo().is_positive() {
        // Rotate by -pi/2: (im, -re) is in the right half-plane.
        let rot = ComplexRect { re: z.im.clone(), im: z.re.neg() };
        let base = arg_enclosure(&rot, prec)?;
        return Ok(base.add(&pi(prec).scale2(-1)));
    }
    if z.im.hi().is_negative() {
        // Rotate by +pi/2: (-im, re) is in the right half-plane.
        let rot = ComplexRect { re: z.im.neg(), im: z.re.clone() };
        let base = arg_enclosure(&rot, prec)?;
        return Ok(base.sub(&pi(prec).scale2(-1)));
    }
    Err(Error::Inconclusive("rectangle meets zero; argument undefined".into()))
}

/// Reduces an angle difference into `(-pi, pi]` by subtracting the certified
/// nearest multiple of `2 pi`.
pub fn reduce_mod_2pi(d: &RigorousValue, prec: u32) -> RigorousValue {
    let tp = two_pi(prec);
    let k = (d.approx() / (2.0 * std::f64::consts::PI)).round() as i64;
    d.sub(&tp.mul_int(k))
}
