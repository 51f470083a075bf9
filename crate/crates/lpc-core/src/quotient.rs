//! Parameter specification and closed-form coefficients.
//!
//! The series is pinned down by `a_0 = a_1 = 1` together with the second
//! quotients `q_n = a_{n-1}^2 / (a_{n-2} a_n)`: `q_n = a` for even `n`,
//! `q_n = b` for odd `n` (`n >= 2`). Unrolling the recurrence gives the
//! closed form `a_k = a^(-e_a(k)) * b^(-e_b(k))` with
//!
//! ```text
//! e(2m)   = (m^2,      m(m-1))
//! e(2m+1) = (m(m+1),   m^2)
//! ```
//!
//! so exponent arithmetic is exact and coefficients are exact rationals for
//! rational parameters.

use crate::rigor::{Dyadic, RigorousValue};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// The two quotient parameters, kept as exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpec {
    a: BigRational,
    b: BigRational,
}

impl QuotientSpec {
    /// Both parameters must exceed 1 for the coefficients to decay.
    pub fn new(a: BigRational, b: BigRational) -> Result<QuotientSpec> {
        let one = BigRational::one();
        if a <= one || b <= one {
            return Err(Error::Parameter(format!(
                "quotients must exceed 1, got a = {a}, b = {b}"
            )));
        }
        Ok(QuotientSpec { a, b })
    }

    pub fn from_f64(a: f64, b: f64) -> Result<QuotientSpec> {
        QuotientSpec::new(Dyadic::from_f64(a).to_rational(), Dyadic::from_f64(b).to_rational())
    }

    /// Parses decimal literals exactly.
    pub fn from_decimal(a: &str, b: &str) -> Result<QuotientSpec> {
        let pa = crate::rigor::parse_decimal(a)
            .ok_or_else(|| Error::Parameter(format!("cannot parse '{a}' as a decimal")))?;
        let pb = crate::rigor::parse_decimal(b)
            .ok_or_else(|| Error::Parameter(format!("cannot parse '{b}' as a decimal")))?;
        QuotientSpec::new(pa, pb)
    }

    /// Diagonal specification `a = b`, used by the one-parameter reduction.
    pub fn diagonal(alpha: BigRational) -> Result<QuotientSpec> {
        QuotientSpec::new(alpha.clone(), alpha)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_diagonal(&self) -> bool {
        self.a == self.b
    }

    /// The quotient `q_n` itself: `a` for even `n`, `b` for odd (`n >= 2`).
    pub fn q(&self, n: u64) -> Result<&BigRational> {
        if n < 2 {
            return Err(Error::Domain(format!("q_{n} is undefined; quotients start at n = 2")));
        }
        Ok(if n % 2 == 0 { &self.a } else { &self.b })
    }

    /// Exact coefficient `a_k` as a rational.
    pub fn coefficient_rational(&self, k: u64) -> BigRational {
        let (ea, eb) = exponents(k);
        rational_pow(&self.a, ea).recip() * rational_pow(&self.b, eb).recip()
    }

    /// Tight dyadic enclosure of `a_k`.
    pub fn coefficient(&self, k: u64, prec: u32) -> Result<RigorousValue> {
        RigorousValue::try_precision(prec)?;
        Ok(RigorousValue::from_rational(&self.coefficient_rational(k), prec))
    }

    /// Exact product `q_2 q_3 ... q_n` (empty product 1 for `n < 2`).
    pub fn quotient_product(&self, n: u64) -> BigRational {
        if n < 2 {
            return BigRational::one();
        }
        let evens = n / 2; // count of even indices in 2..=n
        let odds = (n - 1) / 2; // count of odd indices in 2..=n
        rational_pow(&self.a, evens) * rational_pow(&self.b, odds)
    }
}

/// Closed-form exponents `(e_a(k), e_b(k))` with `a_k = a^(-e_a) b^(-e_b)`.
pub fn exponents(k: u64) -> (u64, u64) {
    if k < 2 {
        return (0, 0);
    }
    let m = k / 2;
    if k % 2 == 0 {
        (m * m, m * (m - 1))
    } else {
        (m * (m + 1), m * m)
    }
}

/// Recomputes `q_n` from three consecutive coefficient enclosures. The result
/// must contain the exact parameter; used as a self-check on the closed form.
pub fn quotient_roundtrip(spec: &QuotientSpec, n: u64, prec: u32) -> Result<RigorousValue> {
    if n < 2 {
        return Err(Error::Domain("quotients start at n = 2".into()));
    }
    let am2 = spec.coefficient(n - 2, prec)?;
    let am1 = spec.coefficient(n - 1, prec)?;
    let an = spec.coefficient(n, prec)?;
    am1.mul(&am1).div(&am2.mul(&an))
}

/// `r^e` for a nonnegative integer exponent (exact).
pub fn rational_pow(r: &BigRational, e: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut base = r.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::ZERO;
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Exact factorial.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exponent_closed_form_small_cases() {
        assert_eq!(exponents(0), (0, 0));
        assert_eq!(exponents(1), (0, 0));
        assert_eq!(exponents(2), (1, 0));
        assert_eq!(exponents(3), (2, 1));
        assert_eq!(exponents(4), (4, 2));
        assert_eq!(exponents(5), (6, 4));
        assert_eq!(exponents(7), (12, 9));
    }

    #[test]
    fn exponents_match_quotient_recurrence_up_to_50() {
        // Independent oracle: unroll a_k = a_{k-1}^2 / (a_{k-2} q_k) with
        // symbolic exponent bookkeeping e(k) = 2 e(k-1) - e(k-2) + [q_k].
        let mut ea = vec![0i64, 0];
        let mut eb = vec![0i64, 0];
        for k in 2..=50u64 {
            let (qa, qb) = if k % 2 == 0 { (1, 0) } else { (0, 1) };
            ea.push(2 * ea[(k - 1) as usize] - ea[(k - 2) as usize] + qa);
            eb.push(2 * eb[(k - 1) as usize] - eb[(k - 2) as usize] + qb);
        }
        for k in 0..=50u64 {
            let (a, b) = exponents(k);
            assert_eq!((a as i64, b as i64), (ea[k as usize], eb[k as usize]), "k = {k}");
        }
    }

    #[test]
    fn diagonal_exponents_sum_to_triangular() {
        for k in 0..=50u64 {
            let (ea, eb) = exponents(k);
            let expect = if k < 2 { 0 } else { k * (k - 1) / 2 };
            assert_eq!(ea + eb, expect, "k = {k}");
        }
    }

    #[test]
    fn coefficient_examples() {
        let spec = QuotientSpec::new(rat(3, 1), rat(4, 1)).unwrap();
        // a_4 = 3^-4 * 4^-2 = 1/1296
        assert_eq!(spec.coefficient_rational(4), rat(1, 1296));
        let enc = spec.coefficient(4, 128).unwrap();
        assert!(enc.contains_rational(&rat(1, 1296)));
        assert_eq!(spec.coefficient_rational(0), rat(1, 1));
        assert_eq!(spec.coefficient_rational(1), rat(1, 1));
        assert_eq!(spec.coefficient_rational(2), rat(1, 3));
        assert_eq!(spec.coefficient_rational(3), rat(1, 36));
    }

    #[test]
    fn roundtrip_recovers_parameters() {
        let spec = QuotientSpec::from_decimal("3.5", "4.2").unwrap();
        for n in 2..=12u64 {
            let q = quotient_roundtrip(&spec, n, 128).unwrap();
            let expect = spec.q(n).unwrap();
            assert!(q.contains_rational(expect), "q_{n} roundtrip");
            assert!(q.width().to_f64() < 1e-25, "q_{n} width");
        }
        assert!(quotient_roundtrip(&spec, 1, 128).is_err());
    }

    #[test]
    fn quotient_products_match_bruteforce() {
        let spec = QuotientSpec::new(rat(3, 1), rat(5, 1)).unwrap();
        let mut acc = BigRational::one();
        assert_eq!(spec.quotient_product(1), acc);
        for n in 2..=25u64 {
            acc *= spec.q(n).unwrap();
            assert_eq!(spec.quotient_product(n), acc, "n = {n}");
        }
    }

    #[test]
    fn parameters_must_exceed_one() {
        assert!(QuotientSpec::new(rat(1, 1), rat(2, 1)).is_err());
        assert!(QuotientSpec::new(rat(2, 1), rat(1, 2)).is_err());
        assert!(QuotientSpec::from_decimal("0.9", "2").is_err());
        assert!(QuotientSpec::from_decimal("x", "2").is_err());
    }

    #[test]
    fn binomial_and_factorial() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(10, 0), BigInt::one());
        assert_eq!(binomial(4, 7), BigInt::ZERO);
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
    }
}
