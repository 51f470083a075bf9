//! Arbitrary-precision dyadic numbers `mant * 2^exp` with directed rounding.
//!
//! Dyadics are the endpoint type for [`super::RigorousValue`]. Addition and
//! multiplication are exact; rounding to a working precision, division, and
//! square roots are directed (toward minus or plus infinity) so that interval
//! endpoints always move outward. Canonical form: `mant` is zero (with
//! `exp == 0`) or odd, which makes equality structural.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Rounding direction for inexact operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    /// Toward minus infinity (safe for lower endpoints).
    Down,
    /// Toward plus infinity (safe for upper endpoints).
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// A dyadic rational `mant * 2^exp`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub const ZERO: fn() -> Dyadic = || Dyadic { mant: BigInt::ZERO, exp: 0 };

    pub fn zero() -> Dyadic {
        Dyadic { mant: BigInt::ZERO, exp: 0 }
    }

    pub fn one() -> Dyadic {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    /// Builds `mant * 2^exp` and normalises (odd mantissa or zero).
    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn from_int(v: i64) -> Dyadic {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Dyadic {
        Dyadic::new(v, 0)
    }

    /// Exact conversion; every finite `f64` is a dyadic.
    pub fn from_f64(v: f64) -> Dyadic {
        assert!(v.is_finite(), "non-finite f64 has no dyadic value");
        if v == 0.0 {
            return Dyadic::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074i64) // subnormal
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Dyadic::new(BigInt::from(sign) * BigInt::from(mant), exp)
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    /// Bit length of the mantissa magnitude (0 for zero).
    pub fn mant_bits(&self) -> u64 {
        self.mant.magnitude().bits()
    }

    /// Position of the most significant bit: smallest `p` with `|x| < 2^p`.
    /// Only meaningful for nonzero values.
    pub fn msb_pos(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.exp + self.mant_bits() as i64
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Exact multiplication by `2^k`.
    pub fn scale2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Exact sum. Cost is linear in the exponent gap, so callers that may
    /// feed wildly separated magnitudes should prefer [`Dyadic::add_round`].
    pub fn add_exact(&self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << u64::try_from(self.exp - e).expect("exponent gap");
        let b = &rhs.mant << u64::try_from(rhs.exp - e).expect("exponent gap");
        Dyadic::new(a + b, e)
    }

    pub fn sub_exact(&self, rhs: &Dyadic) -> Dyadic {
        self.add_exact(&rhs.neg())
    }

    /// Exact product.
    pub fn mul_exact(&self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: &self.mant * &rhs.mant, exp: self.exp + rhs.exp }
    }

    /// Rounds to at most `prec` mantissa bits in direction `dir`.
    /// `Round::Down` never increases the value, `Round::Up` never decreases it.
    pub fn round_to(&self, prec: u32, dir: Round) -> Dyadic {
        debug_assert!(prec >= 2);
        let bits = self.mant_bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        let q = match dir {
            // BigInt shr is a floor shift, exactly round-toward-minus-infinity.
            Round::Down => &self.mant >> s,
            Round::Up => -((-&self.mant) >> s),
        };
        Dyadic::new(q, self.exp + s as i64)
    }

    /// `self + rhs` rounded to `prec` bits. Short-circuits huge exponent gaps:
    /// when the smaller addend cannot affect bits above one quarter ulp of the
    /// result it is replaced by a directed one-ulp nudge.
    pub fn add_round(&self, rhs: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        if self.is_zero() {
            return rhs.round_to(prec, dir);
        }
        if rhs.is_zero() {
            return self.round_to(prec, dir);
        }
        let (big, small) = if self.msb_pos() >= rhs.msb_pos() { (self, rhs) } else { (rhs, self) };
        let gap = big.msb_pos() - small.msb_pos();
        if gap > prec as i64 + 4 {
            let r = big.round_to(prec, dir);
            //
            // |small| < 2^(msb_big - prec - 4) <= ulp(r)/8, so nudging r one
            // ulp outward (only when small pulls against dir) stays correct.
            let needs_nudge = match dir {
                Round::Down => small.is_negative(),
                Round::Up => small.is_positive(),
            };
            if !needs_nudge {
                return r;
            }
            let ulp_exp = r.msb_pos() - prec as i64 - 1;
            let nudge = Dyadic::new(
                match dir {
                    Round::Down => -BigInt::one(),
                    Round::Up => BigInt::one(),
                },
                ulp_exp,
            );
            return r.add_exact(&nudge).round_to(prec, dir);
        }
        self.add_exact(rhs).round_to(prec, dir)
    }

    pub fn mul_round(&self, rhs: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        self.mul_exact(rhs).round_to(prec, dir)
    }

    /// Directed quotient with at least `prec` significant bits.
    pub fn div_round(&self, rhs: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!rhs.is_zero(), "division by zero dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let na = self.mant_bits() as i64;
        let nb = rhs.mant_bits() as i64;
        // Scale the dividend so the integer quotient carries prec+2 bits.
        let s = (prec as i64 + nb - na + 2).max(0) as u64;
        let scaled = &self.mant << s;
        let q = match dir {
            Round::Down => scaled.div_floor(&rhs.mant),
            Round::Up => -((-scaled).div_floor(&rhs.mant)),
        };
        Dyadic::new(q, self.exp - rhs.exp - s as i64).round_to(prec, dir)
    }

    /// Directed square root; the input must be nonnegative.
    pub fn sqrt_round(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let bits = self.mant_bits() as i64;
        let mut t = (2 * (prec as i64 + 2) - bits).max(0);
        if (self.exp - t) % 2 != 0 {
            t += 1;
        }
        let m = &self.mant << u64::try_from(t).unwrap();
        let root = m.sqrt(); // floor square root
        let exact = (&root * &root) == m;
        let q = match dir {
            Round::Down => root,
            Round::Up => {
                if exact {
                    root
                } else {
                    root + BigInt::one()
                }
            }
        };
        Dyadic::new(q, (self.exp - t) / 2).round_to(prec, dir)
    }

    /// Directed integer power via square-and-multiply on magnitudes.
    pub fn powi_round(&self, n: u64, prec: u32, dir: Round) -> Dyadic {
        if n == 0 {
            return Dyadic::one();
        }
        let neg = self.is_negative() && n % 2 == 1;
        // Work on the magnitude with the direction adjusted for the final sign.
        let mdir = if neg { dir.flip() } else { dir };
        let base = self.abs();
        let mut acc = Dyadic::one();
        let mut cur = base;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_exact(&cur).round_to(prec + 4, mdir);
            }
            k >>= 1;
            if k > 0 {
                cur = cur.mul_exact(&cur).round_to(prec + 4, mdir);
            }
        }
        let acc = acc.round_to(prec, mdir);
        if neg {
            acc.neg()
        } else {
            acc
        }
    }

    /// Exact value as a rational.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Directed conversion from a rational.
    pub fn from_rational(r: &BigRational, prec: u32, dir: Round) -> Dyadic {
        let num = Dyadic::from_bigint(r.numer().clone());
        let den = Dyadic::from_bigint(r.denom().clone());
        num.div_round(&den, prec, dir)
    }

    /// Approximate conversion for heuristics and display only; never used in
    /// certified decisions.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant_bits();
        let (m, e) = if bits > 64 {
            let s = bits - 64;
            let q: BigInt = &self.mant >> s;
            (q, self.exp + s as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let mf: f64 = m.to_string().parse().unwrap_or(f64::NAN);
        mf * 2f64.powi(e.clamp(-2000, 2000) as i32)
    }

    /// Directed fixed-point decimal string with `frac_digits` digits after the
    /// point. Used by serialisers; parsing it back brackets the value.
    pub fn to_decimal(&self, frac_digits: u32, dir: Round) -> String {
        let pow10 = BigInt::from(10u32).pow(frac_digits);
        // n = round_dir(self * 10^frac_digits)
        let scaled_num = &self.mant * &pow10;
        let n = if self.exp >= 0 {
            scaled_num << self.exp as u64
        } else {
            let den = BigInt::one() << (-self.exp) as u64;
            match dir {
                Round::Down => scaled_num.div_floor(&den),
                Round::Up => -((-scaled_num).div_floor(&den)),
            }
        };
        let negative = n.is_negative();
        let digits = n.magnitude().to_string();
        let digits = if digits.len() <= frac_digits as usize {
            format!("{}{}", "0".repeat(frac_digits as usize + 1 - digits.len()), digits)
        } else {
            digits
        };
        let split = digits.len() - frac_digits as usize;
        let (int_part, frac_part) = digits.split_at(split);
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(int_part);
        if frac_digits > 0 {
            out.push('.');
            out.push_str(frac_part);
        }
        out
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same nonzero sign: compare msb positions before aligning, which
        // keeps the shift bounded by the mantissa widths.
        let (pa, pb) = (self.msb_pos(), other.msb_pos());
        if pa != pb {
            let mag = pa.cmp(&pb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << u64::try_from(self.exp - e).unwrap();
        let b = &other.mant << u64::try_from(other.exp - e).unwrap();
        a.cmp(&b)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({} * 2^{} ~ {})", self.mant, self.exp, self.to_f64())
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// Parses a plain decimal literal (optional sign, optional fraction, optional
/// `e` exponent) into an exact rational.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(i) => {
            let (m, e) = s.split_at(i);
            (m, e[1..].parse::<i64>().ok()?)
        }
        None => (s, 0),
    };
    let (sign, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match body.find('.') {
        Some(i) => (&body[..i], &body[i + 1..]),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().ok()?;
    let scale = frac_part.len() as i64 - exp10;
    let ten = BigInt::from(10u32);
    let r = if scale >= 0 {
        BigRational::new(num, ten.pow(scale as u32))
    } else {
        BigRational::from_integer(num * ten.pow((-scale) as u32))
    };
    Some(r * BigRational::from_integer(BigInt::from(sign)))
}
