//! Polynomial root location: exact Sturm counting over the rationals and
//! unit-disk root counting.
//!
//! Decision procedures must not be corrupted by rounding, so every counting
//! routine here works in exact rational arithmetic. Sturm chains are kept as
//! primitive integer polynomials (content stripped after every remainder,
//! positive scaling only, so sign variations are untouched). The unit-disk
//! counter runs the classical leading/trailing reduction and, when that
//! degenerates (self-reciprocal polynomials hit it immediately), restarts on
//! a slightly shrunk circle that a certified minimum-modulus bound proves to
//! cross no roots.

use crate::minimize::{find_nonpositive_or_floor, MinimizeConfig, MinimizeOutcome};
use crate::rigor::{rational_cmp, Dyadic, RigorousValue};
use crate::{Error, Result};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn sgn(r: &BigRational) -> i32 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Polynomial with exact rational coefficients, ascending order, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> RatPoly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> RatPoly {
        RatPoly::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero() -> RatPoly {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the zero polynomial is reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(|| BigRational::zero())
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_interval(&self, x: &RigorousValue, prec: u32) -> RigorousValue {
        let mut acc = RigorousValue::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&RigorousValue::from_rational(c, prec));
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::zero();
        }
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }

    pub fn sub(&self, rhs: &RatPoly) -> RatPoly {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &BigRational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    /// Euclidean division; panics only on a zero divisor.
    pub fn divrem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dlc = d.leading().unwrap().clone();
        let dd = d.degree();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![BigRational::zero(); self.coeffs.len()];
        while rem.len() > dd && rem.len() >= d.coeffs.len() {
            let k = rem.len() - 1;
            let factor = rem[k].clone() / &dlc;
            if !factor.is_zero() {
                let shift = k - dd;
                quo[shift] = factor.clone();
                for (i, c) in d.coeffs.iter().enumerate() {
                    let v = c * &factor;
                    rem[shift + i] -= v;
                }
            }
            rem.pop();
        }
        (RatPoly::new(quo), RatPoly::new(rem))
    }

    /// `p(c * x)`.
    pub fn compose_scale(&self, c: &BigRational) -> RatPoly {
        let mut pw = BigRational::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let v = a * &pw;
                pw *= c;
                v
            })
            .collect();
        RatPoly::new(coeffs)
    }

    /// Coefficient reversal `x^n p(1/x)`.
    pub fn reversed(&self) -> RatPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        RatPoly::new(c)
    }

    /// Monic gcd via the remainder sequence with content stripping.
    pub fn gcd(&self, rhs: &RatPoly) -> RatPoly {
        let mut a = primitive_signed(&self.coeffs);
        let mut b = primitive_signed(&rhs.coeffs);
        if a.is_empty() {
            return int_to_poly(&b);
        }
        loop {
            if b.is_empty() {
                let mut g = int_to_poly(&a);
                if let Some(lc) = g.leading().cloned() {
                    g = g.scale(&(BigRational::one() / lc));
                }
                return g;
            }
            let r = rational_rem(&a, &b);
            a = b;
            b = primitive_signed(&r);
        }
    }

    /// `p / gcd(p, p')`: same distinct roots, all simple.
    pub fn square_free_part(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.clone();
        }
        let (q, r) = self.divrem(&g);
        debug_assert!(r.is_zero(), "gcd must divide exactly");
        q
    }
}

/// Scales rational coefficients by a positive constant to coprime integers.
fn primitive_signed(coeffs: &[BigRational]) -> Vec<BigInt> {
    let trimmed: Vec<&BigRational> = {
        let mut t: Vec<&BigRational> = coeffs.iter().collect();
        while t.last().map_or(false, |c| c.is_zero()) {
            t.pop();
        }
        t
    };
    if trimmed.is_empty() {
        return Vec::new();
    }
    let mut denom_lcm = BigInt::one();
    for c in &trimmed {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> =
        trimmed.iter().map(|c| c.numer() * (&denom_lcm / c.denom())).collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    if content.is_zero() || content.is_one() {
        return ints;
    }
    ints.iter().map(|c| c / &content).collect()
}

fn int_to_poly(coeffs: &[BigInt]) -> RatPoly {
    RatPoly::new(coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

/// Rational remainder of integer polynomials (content handled by the caller).
fn rational_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigRational> {
    let pa = int_to_poly(a);
    let pb = int_to_poly(b);
    pa.divrem(&pb).1.coeffs
}

/// An endpoint for real-root counting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootBound {
    NegInf,
    Val(BigRational),
    PosInf,
}

impl RootBound {
    fn lt(&self, other: &RootBound) -> bool {
        match (self, other) {
            (RootBound::NegInf, RootBound::NegInf) => false,
            (RootBound::NegInf, _) => true,
            (_, RootBound::PosInf) => !matches!(self, RootBound::PosInf),
            (RootBound::Val(a), RootBound::Val(b)) => a < b,
            _ => false,
        }
    }
}

/// Sign of an integer polynomial at an endpoint, exactly.
fn sign_at(coeffs: &[BigInt], x: &RootBound) -> i32 {
    if coeffs.is_empty() {
        return 0;
    }
    let n = coeffs.len() - 1;
    match x {
        RootBound::PosInf => match coeffs[n].sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        },
        RootBound::NegInf => {
            let s = match coeffs[n].sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            };
            if n % 2 == 1 {
                -s
            } else {
                s
            }
        }
        RootBound::Val(r) => {
            // Homogenized integer evaluation: sign of sum c_k p^k q^(n-k)
            // equals the sign at p/q (q > 0 in canonical form).
            let p = r.numer();
            let q = r.denom();
            let mut qpow = BigInt::one();
            let mut terms: Vec<BigInt> = Vec::with_capacity(coeffs.len());
            for c in coeffs.iter().rev() {
                terms.push(c * &qpow);
                qpow *= q;
            }
            let mut acc = BigInt::zero();
            for t in terms.iter() {
                acc = acc * p + t;
            }
            match acc.sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            }
        }
    }
}

fn variations(signs: &[i32]) -> u64 {
    let mut count = 0;
    let mut last = 0;
    for &s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Sturm chain of a square-free polynomial, primitive integer rows.
fn sturm_chain(p: &RatPoly) -> Vec<Vec<BigInt>> {
    let mut chain = Vec::new();
    let p0 = primitive_signed(p.coeffs());
    let p1 = primitive_signed(p.derivative().coeffs());
    chain.push(p0);
    if p1.is_empty() {
        return chain;
    }
    chain.push(p1);
    loop {
        let k = chain.len();
        let r = rational_rem(&chain[k - 2], &chain[k - 1]);
        let neg: Vec<BigRational> = r.iter().map(|c| -c).collect();
        let next = primitive_signed(&neg);
        if next.is_empty() {
            return chain;
        }
        chain.push(next);
    }
}

/// Number of distinct real roots of `p` in the half-open interval `(lo, hi]`.
pub fn sturm_count(p: &RatPoly, lo: &RootBound, hi: &RootBound) -> Result<u64> {
    if p.is_zero() {
        return Err(Error::Domain("root counting on the zero polynomial".into()));
    }
    if !lo.lt(hi) {
        return Ok(0);
    }
    let mut q = p.square_free_part();
    let mut at_hi = 0u64;
    if let RootBound::Val(h) = hi {
        if q.eval(h).is_zero() {
            at_hi = 1;
            let lin = RatPoly::new(vec![-h.clone(), BigRational::one()]);
            q = q.divrem(&lin).0;
        }
    }
    if let RootBound::Val(l) = lo {
        if q.eval(l).is_zero() {
            let lin = RatPoly::new(vec![-l.clone(), BigRational::one()]);
            q = q.divrem(&lin).0;
        }
    }
    if q.degree() == 0 {
        return Ok(at_hi);
    }
    let chain = sturm_chain(&q);
    let s_lo: Vec<i32> = chain.iter().map(|row| sign_at(row, lo)).collect();
    let s_hi: Vec<i32> = chain.iter().map(|row| sign_at(row, hi)).collect();
    let v_lo = variations(&s_lo);
    let v_hi = variations(&s_hi);
    Ok(v_lo.saturating_sub(v_hi) + at_hi)
}

/// Distinct real roots over the whole line.
pub fn count_real_roots(p: &RatPoly) -> Result<u64> {
    sturm_count(p, &RootBound::NegInf, &RootBound::PosInf)
}

/// Real roots counted with multiplicity.
pub fn count_real_roots_with_multiplicity(p: &RatPoly) -> Result<u64> {
    if p.is_zero() {
        return Err(Error::Domain("root counting on the zero polynomial".into()));
    }
    if p.degree() == 0 {
        return Ok(0);
    }
    let g = p.gcd(&p.derivative());
    let sf = p.divrem(&g).0;
    let distinct = count_real_roots(&sf)?;
    if g.degree() == 0 {
        Ok(distinct)
    } else {
        Ok(distinct + count_real_roots_with_multiplicity(&g)?)
    }
}

/// Disjoint half-open intervals `(lo, hi]`, each containing exactly one
/// distinct real root of `p`, in ascending order.
pub fn isolate_real_roots(p: &RatPoly) -> Result<Vec<(BigRational, BigRational)>> {
    if p.is_zero() {
        return Err(Error::Domain("root isolation on the zero polynomial".into()));
    }
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    // Strict Cauchy bound: every root has |x| < 1 + max |a_i| / |a_n|.
    let lead = p.leading().expect("nonzero polynomial has a leading coefficient").abs();
    let mut peak = BigRational::zero();
    for c in &p.coeffs()[..p.degree()] {
        let m = c.abs() / &lead;
        if m > peak {
            peak = m;
        }
    }
    let bound = peak + BigRational::one();
    let mut stack = vec![(-bound.clone(), bound)];
    let mut out = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        let c = sturm_count(p, &RootBound::Val(lo.clone()), &RootBound::Val(hi.clone()))?;
        match c {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / BigRational::from_integer(2.into());
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort_by(|x, y| rational_cmp(&x.0, &y.0));
    Ok(out)
}

/// True iff every root of `p` is real (multiplicities included).
pub fn all_real(p: &RatPoly) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::Domain("all_real on the zero polynomial".into()));
    }
    if p.degree() == 0 {
        return Ok(true);
    }
    let sf = p.square_free_part();
    Ok(count_real_roots(&sf)? == sf.degree() as u64)
}

/// Number of roots of `p` in the open unit disk, with multiplicity.
///
/// Precondition: no roots on the unit circle itself; if the reductions cannot
/// decide (which happens exactly when a certified positive minimum modulus on
/// the circle cannot be found), an inconclusive error is returned.
pub fn unit_disk_count(p: &RatPoly) -> Result<u64> {
    unit_disk_count_depth(p, 0)
}

fn unit_disk_count_depth(p: &RatPoly, depth: u32) -> Result<u64> {
    if depth > 64 {
        return Err(Error::Inconclusive("unit-disk reduction did not terminate".into()));
    }
    if p.is_zero() {
        return Err(Error::Domain("unit-disk count of the zero polynomial".into()));
    }
    // Roots at the origin are inside; strip them.
    let mut inside = 0u64;
    let mut coeffs = p.coeffs().to_vec();
    while coeffs.first().map_or(false, |c| c.is_zero()) {
        coeffs.remove(0);
        inside += 1;
    }
    let p = RatPoly::new(coeffs);
    if p.degree() == 0 {
        return Ok(inside);
    }
    let n = p.degree();
    let a0 = p.coeff(0);
    let an = p.leading().unwrap().clone();
    let delta = &a0 * &a0 - &an * &an;
    if delta.is_zero() {
        // |a_0| = |a_n|: reduction stalls. Shrink the circle by a certified
        // margin and recount; the shrink crosses no roots.
        let q = shrink_circle(&p)?;
        return Ok(inside + unit_disk_count_depth(&q, depth + 1)?);
    }
    let t = p.scale(&a0).sub(&p.reversed().scale(&an));
    debug_assert!(!t.is_zero(), "reduction image vanishes despite nonzero offset");
    let inner = unit_disk_count_depth(&t, depth + 1)?;
    if sgn(&delta) > 0 {
        Ok(inside + inner)
    } else {
        Ok(inside + n as u64 - inner)
    }
}

/// Replaces `p(w)` by `p((1-eps)w)` for a certified-safe rational `eps`:
/// `eps * sum k|a_k|` is kept below a proven lower bound for `min |p|` on
/// `|w| = 1`, so by a dominance argument both polynomials have the same
/// number of roots in the open disk.
fn shrink_circle(p: &RatPoly) -> Result<RatPoly> {
    let prec = 128;
    let msq = circle_min_modulus_sq_floor(p, prec)?;
    let mu = crate::rigor::sqrt_rational(&msq, prec)?;
    let mu_lo = mu.lo().to_rational();
    if !mu_lo.is_positive() {
        return Err(Error::Inconclusive("minimum circle modulus rounds to zero".into()));
    }
    let mut b_sum = BigRational::zero();
    for (k, c) in p.coeffs().iter().enumerate() {
        b_sum += BigRational::from_integer(k.into()) * c.abs();
    }
    if b_sum.is_zero() {
        // Constant polynomial; nothing to do.
        return Ok(p.clone());
    }
    let mut eps = mu_lo / (BigRational::from_integer(2.into()) * b_sum);
    let half = BigRational::new(1.into(), 2.into());
    if eps > half {
        eps = half;
    }
    let c = BigRational::one() - eps;
    Ok(p.compose_scale(&c))
}

/// Positive rational lower bound for `min |p(w)|^2` over `|w| = 1`.
///
/// With real coefficients, `|p(e^{i t})|^2 = sum_m beta_m cos(mt)` where
/// `beta_0 = sum a_k^2` and `beta_m = 2 sum_k a_k a_{k+m}`; substituting the
/// Chebyshev polynomials turns this into a plain rational polynomial in
/// `c = cos t` on `[-1, 1]`, bounded below by the covering engine.
pub fn circle_min_modulus_sq_floor(p: &RatPoly, prec: u32) -> Result<BigRational> {
    let a = p.coeffs();
    let n = a.len();
    if n == 0 {
        return Err(Error::Domain("minimum modulus of the zero polynomial".into()));
    }
    let mut beta = vec![BigRational::zero(); n];
    for m in 0..n {
        let mut s = BigRational::zero();
        for k in 0..n - m {
            s += &a[k] * &a[k + m];
        }
        beta[m] = if m == 0 { s } else { s * BigRational::from_integer(2.into()) };
    }
    // Chebyshev basis to monomial basis.
    let mut q = vec![BigRational::zero(); n];
    let mut t_prev: Vec<BigRational> = vec![BigRational::one()];
    let mut t_cur: Vec<BigRational> = vec![BigRational::zero(), BigRational::one()];
    for (m, bm) in beta.iter().enumerate() {
        let t_m: &[BigRational] = match m {
            0 => &t_prev,
            1 => &t_cur,
            _ => {
                // T_m = 2 x T_{m-1} - T_{m-2}
                let mut next = vec![BigRational::zero(); m + 1];
                for (i, c) in t_cur.iter().enumerate() {
                    next[i + 1] += c * BigRational::from_integer(2.into());
                }
                for (i, c) in t_prev.iter().enumerate() {
                    next[i] -= c;
                }
                t_prev = std::mem::replace(&mut t_cur, next);
                &t_cur
            }
        };
        for (i, c) in t_m.iter().enumerate() {
            q[i] += bm * c;
        }
    }
    let qpoly = RatPoly::new(q);
    let eval = |x: &RigorousValue| -> Result<RigorousValue> { Ok(qpoly.eval_interval(x, prec)) };
    let mut cfg = MinimizeConfig::with_precision(prec);
    cfg.grids = Vec::new(); // no witness hunt, only the floor
    cfg.cover_depth = 42;
    match find_nonpositive_or_floor(&Dyadic::from_int(-1), &Dyadic::from_int(1), eval, &cfg)? {
        MinimizeOutcome::FloorPositive { floor } => Ok(floor.lo().to_rational()),
        MinimizeOutcome::Witness { .. } | MinimizeOutcome::Indeterminate { .. } => Err(
            Error::Inconclusive("cannot certify a positive minimum modulus on the circle".into()),
        ),
    }
}

/// Polynomial with enclosure coefficients; supports certified sign-change
/// counting, which lower-bounds the number of distinct real roots.
#[derive(Clone, Debug)]
pub struct IntervalPoly {
    pub coeffs: Vec<RigorousValue>,
}

impl IntervalPoly {
    pub fn new(coeffs: Vec<RigorousValue>) -> IntervalPoly {
        IntervalPoly { coeffs }
    }

    pub fn from_rat_poly(p: &RatPoly, prec: u32) -> IntervalPoly {
        IntervalPoly {
            coeffs: p.coeffs().iter().map(|c| RigorousValue::from_rational(c, prec)).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &RigorousValue) -> RigorousValue {
        let prec = x.prec();
        let mut acc = RigorousValue::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Counts certified sign alternations of evaluations at the given points;
    /// each alternation witnesses a root strictly between its endpoints, so
    /// the result is a lower bound on the number of distinct real roots.
    pub fn certified_sign_changes(&self, points: &[Dyadic], prec: u32) -> u64 {
        let mut count = 0u64;
        let mut last: i32 = 0;
        for pt in points {
            let v = self.eval(&RigorousValue::point(pt.clone(), prec));
            let s = match v.sign() {
                crate::SignVerdict::StrictlyNegative => -1,
                crate::SignVerdict::StrictlyPositive => 1,
                _ => 0,
            };
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rb(v: i64) -> RootBound {
        RootBound::Val(BigRational::from_integer(v.into()))
    }

    #[test]
    fn sturm_counts_simple_cases() {
        let p = RatPoly::from_i64(&[-1, 0, 1]); // x^2 - 1
        assert_eq!(sturm_count(&p, &rb(-2), &rb(2)).unwrap(), 2);
        assert_eq!(sturm_count(&p, &rb(0), &rb(2)).unwrap(), 1);
        assert_eq!(sturm_count(&p, &RootBound::NegInf, &RootBound::PosInf).unwrap(), 2);
        let q = RatPoly::from_i64(&[1, 0, 1]); // x^2 + 1
        assert_eq!(count_real_roots(&q).unwrap(), 0);
    }

    #[test]
    fn half_open_endpoint_semantics() {
        // (x-1)^2 (x+2)
        let p = RatPoly::from_i64(&[1, -2, 1]).mul(&RatPoly::from_i64(&[2, 1]));
        assert_eq!(sturm_count(&p, &rb(0), &rb(1)).unwrap(), 1, "root at hi included");
        assert_eq!(sturm_count(&p, &rb(1), &rb(3)).unwrap(), 0, "root at lo excluded");
        assert_eq!(sturm_count(&p, &rb(-3), &rb(1)).unwrap(), 2);
        assert_eq!(sturm_count(&p, &rb(-2), &rb(1)).unwrap(), 1, "root at lo=-2 excluded");
    }

    #[test]
    fn all_real_handles_multiplicity() {
        let cube = RatPoly::from_i64(&[1, 1]); // x + 1
        let p = cube.mul(&cube).mul(&cube); // (x+1)^3
        assert!(all_real(&p).unwrap());
        assert_eq!(count_real_roots_with_multiplicity(&p).unwrap(), 3);
        let q = RatPoly::from_i64(&[1, 1, 1]); // x^2 + x + 1
        assert!(!all_real(&q).unwrap());
        // Mixed: (x^2+1)(x-3)^2 has 2 real roots with multiplicity.
        let m = RatPoly::from_i64(&[1, 0, 1]).mul(&RatPoly::from_i64(&[9, -6, 1]));
        assert!(!all_real(&m).unwrap());
        assert_eq!(count_real_roots_with_multiplicity(&m).unwrap(), 2);
    }

    #[test]
    fn sturm_agrees_with_constructed_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..60 {
            let n_real = rng.gen_range(0..=4);
            let n_complex_pairs = rng.gen_range(0..=2);
            let mut p = RatPoly::from_i64(&[1]);
            let mut distinct = std::collections::BTreeSet::new();
            for _ in 0..n_real {
                let r = rng.gen_range(-5i64..=5);
                distinct.insert(r);
                p = p.mul(&RatPoly::from_i64(&[-r, 1]));
            }
            for _ in 0..n_complex_pairs {
                // x^2 + bx + c with b^2 < 4c: no real roots.
                let b = rng.gen_range(-3i64..=3);
                let c = rng.gen_range((b * b / 4 + 1)..=(b * b / 4 + 6));
                p = p.mul(&RatPoly::from_i64(&[c, b, 1]));
            }
            if p.degree() == 0 {
                continue;
            }
            assert_eq!(
                count_real_roots(&p).unwrap(),
                distinct.len() as u64,
                "poly {:?}",
                p.coeffs()
            );
        }
    }

    #[test]
    fn unit_disk_counts_spec_cases() {
        // w^2: double root at the origin.
        assert_eq!(unit_disk_count(&RatPoly::from_i64(&[0, 0, 1])).unwrap(), 2);
        // (w - 2)(w - 1/2) = w^2 - 5/2 w + 1: self-reciprocal, one root inside.
        let p = RatPoly::new(vec![
            BigRational::one(),
            BigRational::new((-5).into(), 2.into()),
            BigRational::one(),
        ]);
        assert_eq!(unit_disk_count(&p).unwrap(), 1);
    }

    #[test]
    fn unit_disk_count_handles_plain_cases() {
        // (w - 1/3)(w - 1/4): both inside.
        let p = RatPoly::new(vec![
            BigRational::new(1.into(), 12.into()),
            BigRational::new((-7).into(), 12.into()),
            BigRational::one(),
        ]);
        assert_eq!(unit_disk_count(&p).unwrap(), 2);
        // (w - 2)(w - 3): none inside.
        assert_eq!(unit_disk_count(&RatPoly::from_i64(&[6, -5, 1])).unwrap(), 0);
        // (w - 1/2)^2: double root inside.
        let sq = RatPoly::new(vec![
            BigRational::new(1.into(), 4.into()),
            BigRational::from_integer((-1).into()),
            BigRational::one(),
        ]);
        assert_eq!(unit_disk_count(&sq).unwrap(), 2);
    }

    #[test]
    fn self_reciprocal_pairing_property() {
        // (w - c)(w - 1/c) for c = 3, 5: palindromic quartic, two roots in.
        let f1 = RatPoly::new(vec![
            BigRational::one(),
            BigRational::new((-10).into(), 3.into()),
            BigRational::one(),
        ]);
        let f2 = RatPoly::new(vec![
            BigRational::one(),
            BigRational::new((-26).into(), 5.into()),
            BigRational::one(),
        ]);
        let p = f1.mul(&f2);
        let inside = unit_disk_count(&p).unwrap();
        let inside_rev = unit_disk_count(&p.reversed()).unwrap();
        assert_eq!(inside, 2);
        assert_eq!(inside + inside_rev, p.degree() as u64);
    }

    #[test]
    fn root_on_circle_is_inconclusive() {
        // w - 1 has its root on the unit circle.
        let p = RatPoly::from_i64(&[-1, 1]);
        assert!(matches!(unit_disk_count(&p), Err(Error::Inconclusive(_))));
    }

    #[test]
    fn circle_min_modulus_bound_is_sound() {
        // p = w^2 - 5/2 w + 1: |p(1)| = 1/2 is the circle minimum, squared 1/4.
        let p = RatPoly::new(vec![
            BigRational::one(),
            BigRational::new((-5).into(), 2.into()),
            BigRational::one(),
        ]);
        let lo = circle_min_modulus_sq_floor(&p, 128).unwrap();
        assert!(lo.is_positive());
        assert!(lo <= BigRational::new(1.into(), 4.into()));
        // Must not be absurdly loose either.
        assert!(lo >= BigRational::new(1.into(), 64.into()));
    }

    #[test]
    fn interval_poly_sign_changes_lower_bound_roots() {
        // (x-1)(x-2)(x-3) sampled on a grid: 3 alternations.
        let p = RatPoly::from_i64(&[-6, 11, -6, 1]);
        let ip = IntervalPoly::from_rat_poly(&p, 96);
        let pts: Vec<Dyadic> =
            [0.0, 1.5, 2.5, 3.5].iter().map(|&v| Dyadic::from_f64(v)).collect();
        assert_eq!(ip.certified_sign_changes(&pts, 96), 3);
    }

    #[test]
    fn isolation_brackets_each_distinct_root() {
        // (x+2)(x-1)^2(x-3): distinct roots -2, 1, 3.
        let p = RatPoly::from_i64(&[1, -1])
            .mul(&RatPoly::from_i64(&[1, -1]))
            .mul(&RatPoly::from_i64(&[2, 1]))
            .mul(&RatPoly::from_i64(&[-3, 1]));
        let boxes = isolate_real_roots(&p).unwrap();
        assert_eq!(boxes.len(), 3);
        for ((lo, hi), root) in boxes.iter().zip([-2i64, 1, 3]) {
            let r = BigRational::from_integer(root.into());
            assert!(lo < &r && &r <= hi, "root {root} inside ({lo}, {hi}]");
        }
        assert!(isolate_real_roots(&RatPoly::from_i64(&[7])).unwrap().is_empty());
        // x^2 + 1: no real roots.
        assert!(isolate_real_roots(&RatPoly::from_i64(&[1, 0, 1])).unwrap().is_empty());
    }
}
