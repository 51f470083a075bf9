//! Outward-rounded interval arithmetic with certified sign verdicts.
//!
//! A [`RigorousValue`] is a closed interval `[lo, hi]` of dyadics together
//! with the working precision its endpoints were rounded at. Every operation
//! rounds the lower endpoint down and the upper endpoint up, so the interval
//! produced always contains the exact image of the inputs. All decisions in
//! this crate reduce to [`RigorousValue::sign`] on such enclosures.

mod dyadic;
pub mod trig;

pub use dyadic::{parse_decimal, Dyadic, Round};

use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use std::cmp::Ordering;
use std::fmt;

/// Smallest accepted working precision in bits.
pub const MIN_PRECISION: u32 = 32;

/// Certified sign of an enclosed quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SignVerdict {
    StrictlyNegative,
    StrictlyPositive,
    /// Upper endpoint is exactly zero, lower endpoint negative or zero.
    NonPositive,
    /// Lower endpoint is exactly zero, upper endpoint positive or zero.
    NonNegative,
    /// The enclosure straddles zero; nothing is certified.
    Indeterminate,
}

impl SignVerdict {
    /// True when the verdict certifies `value <= 0`.
    pub fn certifies_nonpositive(self) -> bool {
        matches!(self, SignVerdict::StrictlyNegative | SignVerdict::NonPositive)
    }

    /// True when the verdict certifies `value >= 0`.
    pub fn certifies_nonnegative(self) -> bool {
        matches!(self, SignVerdict::StrictlyPositive | SignVerdict::NonNegative)
    }
}

/// A certified enclosure `[lo, hi]` with its working precision.
#[derive(Clone, PartialEq, Eq)]
pub struct RigorousValue {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl RigorousValue {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> RigorousValue {
        assert!(lo <= hi, "inverted interval endpoints");
        assert!(prec >= MIN_PRECISION, "precision below minimum");
        RigorousValue { lo, hi, prec }
    }

    /// Checked constructor for externally supplied precisions.
    pub fn try_precision(prec: u32) -> Result<u32> {
        if prec < MIN_PRECISION {
            Err(Error::PrecisionTooLow(prec))
        } else {
            Ok(prec)
        }
    }

    /// Exact point interval.
    pub fn point(v: Dyadic, prec: u32) -> RigorousValue {
        RigorousValue::new(v.clone(), v, prec)
    }

    pub fn from_int(v: i64, prec: u32) -> RigorousValue {
        RigorousValue::point(Dyadic::from_int(v), prec)
    }

    pub fn zero(prec: u32) -> RigorousValue {
        RigorousValue::from_int(0, prec)
    }

    pub fn one(prec: u32) -> RigorousValue {
        RigorousValue::from_int(1, prec)
    }

    /// Tight enclosure of a rational.
    pub fn from_rational(r: &BigRational, prec: u32) -> RigorousValue {
        RigorousValue::new(
            Dyadic::from_rational(r, prec, Round::Down),
            Dyadic::from_rational(r, prec, Round::Up),
            prec,
        )
    }

    /// Enclosure of the closed rational interval `[lo, hi]`.
    pub fn from_rational_bounds(lo: &BigRational, hi: &BigRational, prec: u32) -> RigorousValue {
        assert!(lo <= hi);
        RigorousValue::new(
            Dyadic::from_rational(lo, prec, Round::Down),
            Dyadic::from_rational(hi, prec, Round::Up),
            prec,
        )
    }

    pub fn from_f64(v: f64, prec: u32) -> RigorousValue {
        RigorousValue::point(Dyadic::from_f64(v), prec)
    }

    pub fn from_endpoints(lo: Dyadic, hi: Dyadic, prec: u32) -> RigorousValue {
        RigorousValue::new(lo, hi, prec)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Re-rounds outward to a (usually higher) working precision.
    pub fn with_prec(&self, prec: u32) -> RigorousValue {
        RigorousValue::new(
            self.lo.round_to(prec, Round::Down),
            self.hi.round_to(prec, Round::Up),
            prec,
        )
    }

    fn join_prec(&self, rhs: &RigorousValue) -> u32 {
        self.prec.max(rhs.prec)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, v: &Dyadic) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lo.to_rational() <= *r && *r <= self.hi.to_rational()
    }

    pub fn encloses(&self, other: &RigorousValue) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Exact midpoint (not rounded; used as a split or sample point).
    pub fn midpoint(&self) -> Dyadic {
        self.lo.add_exact(&self.hi).scale2(-1)
    }

    /// Upper bound on the interval width.
    pub fn width(&self) -> Dyadic {
        self.hi.sub_exact(&self.lo)
    }

    /// Largest absolute value attained on the interval.
    pub fn mag(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value attained on the interval (0 if it straddles).
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn sign(&self) -> SignVerdict {
        if self.hi.is_negative() {
            SignVerdict::StrictlyNegative
        } else if self.lo.is_positive() {
            SignVerdict::StrictlyPositive
        } else if self.lo.is_zero() {
            // Exact [0, 0] lands here and reports NonNegative.
            SignVerdict::NonNegative
        } else if self.hi.is_zero() {
            SignVerdict::NonPositive
        } else {
            SignVerdict::Indeterminate
        }
    }

    pub fn neg(&self) -> RigorousValue {
        RigorousValue::new(self.hi.neg(), self.lo.neg(), self.prec)
    }

    pub fn abs(&self) -> RigorousValue {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            RigorousValue::new(Dyadic::zero(), self.mag(), self.prec)
        }
    }

    pub fn add(&self, rhs: &RigorousValue) -> RigorousValue {
        let prec = self.join_prec(rhs);
        RigorousValue::new(
            self.lo.add_round(&rhs.lo, prec, Round::Down),
            self.hi.add_round(&rhs.hi, prec, Round::Up),
            prec,
        )
    }

    pub fn sub(&self, rhs: &RigorousValue) -> RigorousValue {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &RigorousValue) -> RigorousValue {
        let prec = self.join_prec(rhs);
        let cands = [
            self.lo.mul_exact(&rhs.lo),
            self.lo.mul_exact(&rhs.hi),
            self.hi.mul_exact(&rhs.lo),
            self.hi.mul_exact(&rhs.hi),
        ];
        let lo = cands.iter().min().unwrap().round_to(prec, Round::Down);
        let hi = cands.iter().max().unwrap().round_to(prec, Round::Up);
        RigorousValue::new(lo, hi, prec)
    }

    pub fn mul_int(&self, k: i64) -> RigorousValue {
        self.mul(&RigorousValue::from_int(k, self.prec))
    }

    /// Exact scaling by `2^k`.
    pub fn scale2(&self, k: i64) -> RigorousValue {
        RigorousValue::new(self.lo.scale2(k), self.hi.scale2(k), self.prec)
    }

    pub fn div(&self, rhs: &RigorousValue) -> Result<RigorousValue> {
        if rhs.contains_zero() {
            return Err(Error::Domain("division by an interval containing zero".into()));
        }
        let prec = self.join_prec(rhs);
        let corners = [(&self.lo, &rhs.lo), (&self.lo, &rhs.hi), (&self.hi, &rhs.lo), (&self.hi, &rhs.hi)];
        let lo = corners
            .iter()
            .map(|(n, d)| n.div_round(d, prec, Round::Down))
            .min()
            .unwrap();
        let hi = corners
            .iter()
            .map(|(n, d)| n.div_round(d, prec, Round::Up))
            .max()
            .unwrap();
        Ok(RigorousValue::new(lo, hi, prec))
    }

    pub fn recip(&self) -> Result<RigorousValue> {
        RigorousValue::one(self.prec).div(self)
    }

    pub fn sqrt(&self) -> Result<RigorousValue> {
        if self.lo.is_negative() {
            return Err(Error::Domain("sqrt of an interval with negative lower endpoint".into()));
        }
        Ok(RigorousValue::new(
            self.lo.sqrt_round(self.prec, Round::Down),
            self.hi.sqrt_round(self.prec, Round::Up),
            self.prec,
        ))
    }

    /// Integer power with the usual monotonicity case split; even powers of
    /// straddling intervals get the tight `[0, max]` form.
    pub fn powi(&self, n: i64) -> Result<RigorousValue> {
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let n = n as u64;
        let prec = self.prec;
        if n == 0 {
            return Ok(RigorousValue::one(prec));
        }
        if n % 2 == 1 || !self.contains_zero() && !self.lo.is_negative() {
            // Monotone on the whole interval (odd power, or nonnegative base).
            return Ok(RigorousValue::new(
                self.lo.powi_round(n, prec, Round::Down),
                self.hi.powi_round(n, prec, Round::Up),
                prec,
            ));
        }
        if !self.hi.is_positive() {
            // Entirely nonpositive base, even power: decreasing.
            return Ok(RigorousValue::new(
                self.hi.powi_round(n, prec, Round::Down),
                self.lo.powi_round(n, prec, Round::Up),
                prec,
            ));
        }
        // Straddles zero, even power.
        Ok(RigorousValue::new(Dyadic::zero(), self.mag().powi_round(n, prec, Round::Up), prec))
    }

    /// Smallest interval containing both.
    pub fn hull(&self, rhs: &RigorousValue) -> RigorousValue {
        RigorousValue::new(
            self.lo.clone().min(rhs.lo.clone()),
            self.hi.clone().max(rhs.hi.clone()),
            self.join_prec(rhs),
        )
    }

    pub fn intersect(&self, rhs: &RigorousValue) -> Option<RigorousValue> {
        let lo = self.lo.clone().max(rhs.lo.clone());
        let hi = self.hi.clone().min(rhs.hi.clone());
        if lo <= hi {
            Some(RigorousValue::new(lo, hi, self.join_prec(rhs)))
        } else {
            None
        }
    }

    /// `self < rhs` holds for every pair of points.
    pub fn certainly_lt(&self, rhs: &RigorousValue) -> bool {
        self.hi < rhs.lo
    }

    pub fn certainly_le(&self, rhs: &RigorousValue) -> bool {
        self.hi <= rhs.lo
    }

    /// Splits at the midpoint; both halves keep the precision.
    pub fn bisect(&self) -> (RigorousValue, RigorousValue) {
        let m = self.midpoint();
        (
            RigorousValue::new(self.lo.clone(), m.clone(), self.prec),
            RigorousValue::new(m, self.hi.clone(), self.prec),
        )
    }

    /// Widens both endpoints outward by `2^k`.
    pub fn widen2(&self, k: i64) -> RigorousValue {
        let eps = Dyadic::new(BigInt::from(1), k);
        RigorousValue::new(self.lo.sub_exact(&eps), self.hi.add_exact(&eps), self.prec)
    }

    /// Decimal rendering `[lo_rounded_down, hi_rounded_up]`.
    pub fn to_decimal_pair(&self, frac_digits: u32) -> (String, String) {
        (self.lo.to_decimal(frac_digits, Round::Down), self.hi.to_decimal(frac_digits, Round::Up))
    }

    /// Approximate midpoint as f64; heuristics and display only.
    pub fn approx(&self) -> f64 {
        self.midpoint().to_f64()
    }
}

impl fmt::Debug for RigorousValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} .. {}]@{} (w~{:.3e})",
            self.lo.to_f64(),
            self.hi.to_f64(),
            self.prec,
            self.width().to_f64()
        )
    }
}

impl fmt::Display for RigorousValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.prec as f64 * 0.302).ceil() as u32 + 2;
        let (lo, hi) = self.to_decimal_pair(digits.min(50));
        write!(f, "[{lo}, {hi}]")
    }
}

/// Compares two rationals through the interval machinery; exact.
pub fn rational_cmp(a: &BigRational, b: &BigRational) -> Ordering {
    a.cmp(b)
}

/// Convenience: enclosure of `sqrt(r)` for a nonnegative rational.
pub fn sqrt_rational(r: &BigRational, prec: u32) -> Result<RigorousValue> {
    if r.is_negative() {
        return Err(Error::Domain("sqrt of negative rational".into()));
    }
    RigorousValue::from_rational(r, prec + 4).with_prec(prec + 4).sqrt().map(|v| v.with_prec(prec))
}
