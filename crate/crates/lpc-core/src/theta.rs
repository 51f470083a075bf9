//! The partial theta function `g_a(z) = sum_k z^k a^(-k^2)`, its membership
//! threshold, and the section constants.
//!
//! Everything here funnels through one identity: substituting `z = -a x`
//! gives `g_a(-a x) = sum_k (-1)^k x^k alpha^(-k(k-1)/2)` with `alpha = a^2`,
//! which is exactly `phi` of the diagonal spec `(alpha, alpha)`. The witness
//! interval `z in (-a^3, -a)` becomes `x in (1, alpha)`, so the membership
//! machinery applies verbatim and, crucially, all arithmetic stays rational
//! in `alpha` even when `a` itself is irrational. The same substitution turns
//! the degree-n sections into polynomials with rational coefficients
//! `alpha^(-k(k-1)/2)`, where real-rootedness is decided exactly by Sturm.

use crate::membership::{witness_search, MembershipVerdict, Status};
use crate::quotient::{rational_pow, QuotientSpec};
use crate::realroot::{all_real, RatPoly};
use crate::rigor::{Dyadic, RigorousValue, Round};
use crate::{Error, Result};
use num_rational::BigRational;
use num_traits::{One, Signed};

/// Enclosure of `g_a(z)` for rational `a > 1`.
pub fn eval_g(a: &BigRational, z: &RigorousValue, prec: u32) -> Result<RigorousValue> {
    if a <= &BigRational::one() {
        return Err(Error::Parameter(format!("theta base must exceed 1, got {a}")));
    }
    RigorousValue::try_precision(prec)?;
    let zm = z.mag();
    let mut sum = RigorousValue::zero(prec);
    let mut zpow = RigorousValue::one(prec);
    let mut zpow_mag = Dyadic::one();
    let mut k: u64 = 0;
    loop {
        // a^(-k^2), exact rational.
        let coeff = BigRational::one() / rational_pow(a, k * k);
        let term = zpow.mul(&RigorousValue::from_rational(&coeff, prec));
        sum = sum.add(&term);
        k += 1;
        zpow = zpow.mul(z);
        zpow_mag = zpow_mag.mul_round(&zm, prec, Round::Up);
        // Next term magnitude bound and the ratio |z| a^(-(2k+1)).
        let next_coeff = BigRational::one() / rational_pow(a, k * k);
        let next_mag = zpow_mag.mul_round(
            &Dyadic::from_rational(&next_coeff, prec, Round::Up),
            prec,
            Round::Up,
        );
        let ratio_den = rational_pow(a, 2 * k + 1);
        let ratio_ok = zm.to_rational() * BigRational::from_integer(2.into()) <= ratio_den;
        let sum_scale = sum.mag().max(Dyadic::one());
        let small = next_mag.is_zero()
            || next_mag.msb_pos() <= sum_scale.msb_pos() - prec as i64 - 8;
        if k >= 2 && ratio_ok && small {
            let tail = next_mag.scale2(1);
            return Ok(sum.add(&RigorousValue::from_endpoints(tail.neg(), tail, prec)));
        }
        if k > 100_000 {
            return Err(Error::Inconclusive("theta series cutoff did not converge".into()));
        }
    }
}

/// Membership of `g_a` parameterized by `alpha = a^2`: witness search for
/// `phi` of the diagonal spec over `(1, alpha]`.
pub fn theta_member_qsq(
    alpha: &BigRational,
    ladder: &[u32],
    grid_density: u32,
) -> Result<MembershipVerdict> {
    let spec = QuotientSpec::diagonal(alpha.clone())?;
    witness_search(&spec, ladder, grid_density)
}

/// Membership of the partial theta function for rational `a > 1`.
pub fn theta_member(a: &BigRational, prec: u32, grid_density: u32) -> Result<MembershipVerdict> {
    if a <= &BigRational::one() {
        return Err(Error::Parameter(format!("theta base must exceed 1, got {a}")));
    }
    let alpha = a * a;
    let ladder: Vec<u32> = if prec > 64 { vec![64, prec] } else { vec![prec] };
    theta_member_qsq(&alpha, &ladder, grid_density)
}

/// Enclosure of the limiting quotient: bisection on `alpha in [3, 4]`
/// (real-rooted at 4, not at 3) with the theta membership test as the
/// monotone predicate. The result width is at most `tol` unless the
/// predicate goes indeterminate at the boundary, in which case the current
/// honest bracket is returned.
pub fn compute_qinf(prec: u32, tol: &BigRational) -> Result<RigorousValue> {
    if !tol.is_positive() {
        return Err(Error::Parameter("tolerance must be positive".into()));
    }
    let ladder: Vec<u32> = if prec > 64 { vec![64, prec] } else { vec![prec] };
    let grid = 192;
    let mut lo = BigRational::from_integer(3.into()); // certified NotMember side
    let mut hi = BigRational::from_integer(4.into()); // certified Member side
    let half = BigRational::new(1.into(), 2.into());
    let mut iterations = 0;
    while &hi - &lo > *tol {
        iterations += 1;
        if iterations > 200 {
            break;
        }
        let mid = (&lo + &hi) * &half;
        match theta_member_qsq(&mid, &ladder, grid)?.status {
            Status::Member => hi = mid,
            Status::NotMember => lo = mid,
            Status::Indeterminate => {
                // Try an off-center probe once; if the boundary refuses to
                // decide there too, report the bracket we have.
                let probe = &lo + (&hi - &lo) * BigRational::new(5.into(), 11.into());
                match theta_member_qsq(&probe, &ladder, grid)?.status {
                    Status::Member => hi = probe,
                    Status::NotMember => lo = probe,
                    Status::Indeterminate => break,
                }
            }
        }
    }
    Ok(RigorousValue::from_rational_bounds(&lo, &hi, prec))
}

/// The degree-n section after `z = a w`: coefficients `alpha^(-k(k-1)/2)`.
pub fn section_poly(n: u32, alpha: &BigRational) -> RatPoly {
    let coeffs = (0..=n as u64)
        .map(|k| {
            let e = if k < 2 { 0 } else { k * (k - 1) / 2 };
            BigRational::one() / rational_pow(alpha, e)
        })
        .collect();
    RatPoly::new(coeffs)
}

/// Exact real-rootedness of the degree-n section, by Sturm count.
pub fn section_member_qsq(n: u32, alpha: &BigRational) -> Result<bool> {
    if n < 2 {
        return Err(Error::Parameter("sections start at degree 2".into()));
    }
    if alpha <= &BigRational::one() {
        return Err(Error::Parameter(format!("alpha must exceed 1, got {alpha}")));
    }
    all_real(&section_poly(n, alpha))
}

/// Sturm verdict cross-checked against the witness characterization: a
/// certified nonpositive section value at some `w in (-alpha, -1)` must
/// appear exactly when the section is real-rooted. An indeterminate witness
/// search (boundary) defers to Sturm; a certified contradiction errors.
pub fn section_member_checked(n: u32, alpha: &BigRational, prec: u32) -> Result<bool> {
    let by_sturm = section_member_qsq(n, alpha)?;
    let poly = section_poly(n, alpha);
    let lo = Dyadic::from_rational(&-alpha.clone(), prec, Round::Down);
    let hi = Dyadic::from_int(-1);
    let cfg = crate::minimize::MinimizeConfig {
        grids: vec![96],
        cover_depth: 26,
        max_cells: 30_000,
        prec,
    };
    let outcome = crate::minimize::find_nonpositive_or_floor(
        &lo,
        &hi,
        |x| Ok(poly.eval_interval(x, prec)),
        &cfg,
    )?;
    let by_witness = match outcome {
        crate::minimize::MinimizeOutcome::Witness { .. } => Some(true),
        crate::minimize::MinimizeOutcome::FloorPositive { .. } => Some(false),
        crate::minimize::MinimizeOutcome::Indeterminate { .. } => None,
    };
    if let Some(w) = by_witness {
        if w != by_sturm {
            return Err(Error::Inconsistency(format!(
                "section n={n}, alpha={alpha}: Sturm says {by_sturm}, witness test says {w}"
            )));
        }
    }
    Ok(by_sturm)
}

/// Real-rootedness of `S_n(z, g_a)` for rational `a > 1`, dual-route.
pub fn section_member(n: u32, a: &BigRational, prec: u32) -> Result<bool> {
    if a <= &BigRational::one() {
        return Err(Error::Parameter(format!("theta base must exceed 1, got {a}")));
    }
    section_member_checked(n, &(a * a), prec)
}

/// Enclosure of the section constant `c_n` (threshold of `alpha` for
/// real-rootedness of the degree-n section) by bisection with the exact
/// Sturm predicate. Bracket [5/2, 9/2] holds for every n >= 2.
pub fn compute_cn(n: u32, prec: u32, tol: &BigRational) -> Result<RigorousValue> {
    if n < 2 {
        return Err(Error::Parameter("sections start at degree 2".into()));
    }
    if !tol.is_positive() {
        return Err(Error::Parameter("tolerance must be positive".into()));
    }
    let mut lo = BigRational::new(5.into(), 2.into());
    let mut hi = BigRational::new(9.into(), 2.into());
    if section_member_qsq(n, &lo)? || !section_member_qsq(n, &hi)? {
        return Err(Error::Inconsistency(format!(
            "bisection bracket assumption failed for section degree {n}"
        )));
    }
    let half = BigRational::new(1.into(), 2.into());
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) * &half;
        if section_member_qsq(n, &mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(RigorousValue::from_rational_bounds(&lo, &hi, prec))
}
