//! Sign-chain certificates of real-rootedness.
//!
//! A Member verdict is upgraded to a machine-checkable artifact: an
//! increasing ladder of radii at which phi carries certified alternating
//! signs, winding-number zero counts on the even-index circles, and the
//! closed-form inequalities that keep the circle evaluations away from
//! zero. The chain starts at the witness z0 and alternates
//! `phi(rho_j) >= 0` at even indices with `phi(r_j) <= 0` at odd ones;
//! together with exactly j zeros inside the radius-rho_j disk this forces
//! all of those zeros onto the real line.
//!
//! Radii come from the quotient products: `rho_j = q_2 ... q_j sqrt(q_{j+1})`
//! for even j and `r_j = q_2 ... q_j z0` for odd j, so for a spec `(a, b)`
//! they are `a^s b^(s-1) sqrt(b)` with j = 2s and `(ab)^m z0` with
//! j = 2m + 1. Every radius is the square root of an exact rational times
//! an exact rational, which keeps the enclosures one `sqrt` away from exact
//! arithmetic.

use crate::quotient::QuotientSpec;
use crate::realroot::{unit_disk_count, RatPoly};
use crate::rigor::trig::{two_pi, ComplexRect};
use crate::rigor::{sqrt_rational, Dyadic, RigorousValue};
use crate::series::SeriesEvaluator;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntryKind {
    /// Even-index circle radius; phi is certified nonnegative there.
    Rho,
    /// Odd-index witness multiple; phi is certified nonpositive there.
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainSign {
    NonNegative,
    NonPositive,
}

/// One certified point of the chain.
#[derive(Clone, Debug)]
pub struct ChainEntry {
    pub j: u64,
    pub kind: EntryKind,
    pub radius: RigorousValue,
    pub sign: ChainSign,
}

/// Winding-number zero count for the disk of radius rho_j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCount {
    pub j: u64,
    pub count: u64,
}

/// The four closed-form side conditions recorded with every certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofChecks {
    /// Dominance of the quartic block over the series tails on the circles.
    pub esta: bool,
    /// Nonnegativity of the odd-radius numerator combination.
    pub nu: bool,
    /// Root count of the self-reciprocal quartic inside the unit disk.
    pub quartic: u64,
    /// Strict positivity of the min-modulus factor `2 - 2a sqrt(b) + ab`.
    pub estg: bool,
}

#[derive(Clone, Debug)]
pub struct SignChainCertificate {
    pub spec: QuotientSpec,
    pub z0: Dyadic,
    /// Requested chain depth J (even). A complete certificate has entries
    /// for every j in 2..=depth; a shorter entry list means construction
    /// stopped at the first uncertifiable index.
    pub depth: u64,
    pub entries: Vec<ChainEntry>,
    pub zero_counts: Vec<ZeroCount>,
    pub checks: ProofChecks,
    /// First index whose sign (or zero count) could not be certified.
    pub incomplete_at: Option<u64>,
}

/// Outcome of a structural verification pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainStatus {
    Complete,
    Incomplete { first_missing: u64 },
}

/// Radius of the even-index circle: `q_2 ... q_j sqrt(q_{j+1})`.
pub fn rho(spec: &QuotientSpec, j: u64, prec: u32) -> Result<RigorousValue> {
    RigorousValue::try_precision(prec)?;
    if j < 2 || j % 2 != 0 {
        return Err(Error::Parameter(format!(
            "circle radius index must be even and at least 2, got {j}"
        )));
    }
    let qp = spec.quotient_product(j);
    let qnext = spec.q(j + 1)?;
    // rho_j^2 = (q_2 ... q_j)^2 q_{j+1} is exact; one square root suffices.
    sqrt_rational(&(&qp * &qp * qnext), prec)
}

/// Radius of the odd-index chain point: `q_2 ... q_j z0`.
pub fn r_radius(spec: &QuotientSpec, j: u64, z0: &Dyadic, prec: u32) -> Result<RigorousValue> {
    RigorousValue::try_precision(prec)?;
    if j < 3 || j % 2 == 0 {
        return Err(Error::Parameter(format!(
            "witness radius index must be odd and at least 3, got {j}"
        )));
    }
    let z = z0.to_rational();
    if z <= BigRational::one() || &z > spec.a() {
        return Err(Error::Parameter(format!(
            "witness {} outside (1, a]",
            z0.to_f64()
        )));
    }
    Ok(RigorousValue::from_rational(&(spec.quotient_product(j) * z), prec))
}

// Certified comparison at escalating precision. None means the enclosures
// kept overlapping after the last rung, which callers fold to `false`.
fn certified_gt(
    lhs: impl Fn(u32) -> Result<RigorousValue>,
    rhs: impl Fn(u32) -> Result<RigorousValue>,
    strict_margin: bool,
) -> Option<bool> {
    for prec in [128u32, 256, 512] {
        let (l, r) = match (lhs(prec), rhs(prec)) {
            (Ok(l), Ok(r)) => (l, r),
            // Interval division can fail while a denominator still straddles
            // zero; a higher rung usually separates it.
            _ => continue,
        };
        if r.certainly_lt(&l) {
            return Some(true);
        }
        let false_now = if strict_margin {
            // not (lhs > rhs) is lhs <= rhs
            l.hi() <= r.lo()
        } else {
            l.hi() < r.lo()
        };
        if false_now {
            return Some(false);
        }
    }
    None
}

/// Certified truth of `b sqrt(b) a (2 - 2 sqrt(b) a + ab) > 2 / (1 - 1/(b sqrt(b) a^2))`.
///
/// Holds throughout `a >= 3, b > a`; outside that region the value is still
/// the certified comparison, just not guaranteed true.
pub fn dominance_inequality(spec: &QuotientSpec) -> bool {
    let a = spec.a().clone();
    let b = spec.b().clone();
    let lhs = {
        let (a, b) = (a.clone(), b.clone());
        move |prec: u32| -> Result<RigorousValue> {
            let sb = sqrt_rational(&b, prec)?;
            let ra = RigorousValue::from_rational(&a, prec);
            let rb = RigorousValue::from_rational(&b, prec);
            let rab = RigorousValue::from_rational(&(&a * &b), prec);
            let inner = RigorousValue::from_int(2, prec).sub(&sb.mul(&ra).scale2(1)).add(&rab);
            Ok(rb.mul(&sb).mul(&ra).mul(&inner))
        }
    };
    let rhs = move |prec: u32| -> Result<RigorousValue> {
        let sb = sqrt_rational(&b, prec)?;
        let baa = RigorousValue::from_rational(&(&b * &a * &a), prec);
        let den = RigorousValue::one(prec).sub(&sb.mul(&baa).recip()?);
        RigorousValue::from_int(2, prec).div(&den)
    };
    certified_gt(lhs, rhs, true).unwrap_or(false)
}

/// Certified truth of `-2 + 2ab sqrt(b) - 2a^2 b^2 + a^2 b^2 sqrt(b) >= 0`.
pub fn nu_inequality(spec: &QuotientSpec) -> bool {
    let a = spec.a().clone();
    let b = spec.b().clone();
    let lhs = move |prec: u32| -> Result<RigorousValue> {
        let sb = sqrt_rational(&b, prec)?;
        let ab = &a * &b;
        let a2b2 = &ab * &ab;
        // sqrt(b) (2ab + a^2 b^2) - 2 - 2 a^2 b^2
        let lin = RigorousValue::from_rational(&(&ab + &ab + &a2b2), prec);
        let cst = RigorousValue::from_rational(&(-BigRational::from_integer(BigInt::from(2)) - &a2b2 - &a2b2), prec);
        Ok(sb.mul(&lin).add(&cst))
    };
    certified_gt(lhs, |prec| Ok(RigorousValue::zero(prec)), false).unwrap_or(false)
}

/// Enclosure of the min-modulus factor `2 - 2 q_j sqrt(q_{j+1}) + q_j q_{j+1}`
/// for even j, tightened until it certifies strictly positive when it can.
pub fn min_modulus_gblock(spec: &QuotientSpec, j: u64, prec: u32) -> Result<RigorousValue> {
    if j < 2 || j % 2 != 0 {
        return Err(Error::Parameter(format!(
            "min-modulus factor is indexed by even j >= 2, got {j}"
        )));
    }
    let qj = spec.q(j)?.clone();
    let qn = spec.q(j + 1)?.clone();
    let mut out = None;
    for p in [prec, prec * 2, prec * 4] {
        let sq = sqrt_rational(&qn, p)?;
        let lin = RigorousValue::from_rational(&(&qj + &qj), p);
        let cst = RigorousValue::from_rational(
            &(BigRational::from_integer(BigInt::from(2)) + &qj * &qn),
            p,
        );
        let v = cst.sub(&sq.mul(&lin));
        let positive = v.lo().is_positive();
        out = Some(v);
        if positive {
            break;
        }
    }
    Ok(out.expect("escalation ladder is nonempty"))
}

/// The quartic `y^4 - 2y^3 + 2` controlling the min-modulus bound; its
/// minimum over the relevant range is attained at y = 3/2 with value 5/16.
pub fn min_modulus_quartic_at(y: &BigRational) -> BigRational {
    let y2 = y * y;
    &y2 * &y2 - BigRational::from_integer(BigInt::from(2)) * &y2 * y
        + BigRational::from_integer(BigInt::from(2))
}

/// Number of roots of `1 - a sqrt(b) w + ab w^2 - a sqrt(b) w^3 + w^4`
/// inside the unit disk.
///
/// The coefficients are irrational, so the count is taken through the
/// rational resolvent: with `P(w) P(-w) = A(u)^2 - a^2 b u (1 + u)^2` at
/// `u = w^2` and `A(u) = 1 + ab u + u^2`, the unit-disk roots of P biject
/// with the unit-disk roots of the degree-4 rational polynomial in u.
pub fn quartic_unit_disk_count(spec: &QuotientSpec) -> Result<u64> {
    let a = spec.a();
    let b = spec.b();
    let d = a * b;
    let c2 = a * a * b;
    let two_d = &d + &d;
    let mid = &d * &d + BigRational::from_integer(BigInt::from(2)) - &c2 - &c2;
    let side = &two_d - &c2;
    let s = RatPoly::new(vec![BigRational::one(), side.clone(), mid, side, BigRational::one()]);
    match unit_disk_count(&s) {
        Ok(n) => Ok(n),
        Err(Error::Inconclusive(_)) => Err(Error::Inconsistency(
            "self-reciprocal quartic has a root on the unit circle".into(),
        )),
        Err(e) => Err(e),
    }
}

// Open half-planes containing a zero-free rectangle, indexed by the quarter
// turn of the half-plane's center direction: 0 is Re > 0, 1 is Im > 0,
// 2 is Re < 0, 3 is Im < 0. A rectangle misses the origin iff at least one
// entry is true.
fn half_plane_labels(z: &ComplexRect) -> [bool; 4] {
    [
        z.re.lo().is_positive(),
        z.im.lo().is_positive(),
        z.re.hi().is_negative(),
        z.im.hi().is_negative(),
    ]
}

enum Attempt {
    Done(i64),
    NeedSamples,
    NeedPrecision,
}

// One pass of the discrete argument principle at a fixed sample count.
//
// Each sample is a rectangular enclosure of phi on the circle. When the dot
// product of consecutive samples is certified positive, the true phase step
// is below a quarter turn, and the total winding is the net number of
// quarter-turn half-plane transitions divided by four: with d restricted to
// {-1, 0, 1} and each sample inside its labeled half-plane, the phase step
// equals d pi/2 plus a difference of offsets in (-pi/2, pi/2), and the
// offsets telescope around the closed loop.
fn winding_attempt(
    ev: &SeriesEvaluator,
    radius: &RigorousValue,
    samples: u64,
    prec: u32,
) -> Result<Attempt> {
    let turn = two_pi(prec);
    let mut rects: Vec<ComplexRect> = Vec::with_capacity(samples as usize);
    for i in 0..samples {
        let frac = BigRational::new(BigInt::from(i), BigInt::from(samples));
        let theta = turn.mul(&RigorousValue::from_rational(&frac, prec));
        let z = ev.eval_phi_circle(radius, &theta)?;
        if z.contains_zero() {
            return Ok(Attempt::NeedPrecision);
        }
        rects.push(z);
    }
    let labels: Vec<[bool; 4]> = rects.iter().map(half_plane_labels).collect();
    let k0 = labels[0]
        .iter()
        .position(|&v| v)
        .expect("zero-free rectangle lies in a half-plane") as i64;
    let mut k_prev = k0;
    let mut total: i64 = 0;
    for i in 0..samples as usize {
        let nxt = (i + 1) % samples as usize;
        let dot = rects[i]
            .re
            .mul(&rects[nxt].re)
            .add(&rects[i].im.mul(&rects[nxt].im));
        if !dot.lo().is_positive() {
            return Ok(Attempt::NeedSamples);
        }
        let step = if nxt == 0 {
            // The loop must close on the starting label.
            match (k0 - k_prev).rem_euclid(4) {
                0 => Some(0),
                1 => Some(1),
                3 => Some(-1),
                _ => None,
            }
        } else {
            [0i64, 1, -1]
                .into_iter()
                .find(|d| labels[nxt][(k_prev + d).rem_euclid(4) as usize])
        };
        let Some(d) = step else {
            return Ok(Attempt::NeedSamples);
        };
        total += d;
        k_prev = (k_prev + d).rem_euclid(4);
    }
    if total.rem_euclid(4) != 0 {
        return Err(Error::Inconsistency(
            "winding walk closed off the quarter-turn lattice".into(),
        ));
    }
    Ok(Attempt::Done(total / 4))
}

/// Zero count of phi inside the disk of the given radius, as the winding
/// number of the circle image. Sampling doubles until every consecutive
/// phase step is certified below a quarter turn or the budget is exhausted;
/// enclosures straddling zero escalate the working precision instead.
pub fn winding_zero_count(
    spec: &QuotientSpec,
    radius: &RigorousValue,
    precision: u32,
    max_samples: u64,
) -> Result<u64> {
    let base = RigorousValue::try_precision(precision)?;
    if !radius.lo().is_positive() {
        return Err(Error::Domain("winding radius must be strictly positive".into()));
    }
    let mut prec = base;
    let mut ev = SeriesEvaluator::new(spec, prec)?;
    let mut samples: u64 = 64.min(max_samples.max(8));
    loop {
        match winding_attempt(&ev, radius, samples, prec)? {
            Attempt::Done(w) => {
                if w < 0 {
                    return Err(Error::Inconsistency(format!(
                        "negative winding {w} for an entire function"
                    )));
                }
                return Ok(w as u64);
            }
            Attempt::NeedSamples => {
                if samples.saturating_mul(2) > max_samples {
                    return Err(Error::Inconclusive(format!(
                        "phase steps not certified below a quarter turn within {max_samples} samples"
                    )));
                }
                samples *= 2;
            }
            Attempt::NeedPrecision => {
                if prec >= base.saturating_mul(8) {
                    return Err(Error::Inconclusive(
                        "circle enclosure straddles zero after precision escalation".into(),
                    ));
                }
                prec *= 2;
                ev = SeriesEvaluator::new(spec, prec)?;
            }
        }
    }
}

/// Evaluates the four side conditions for a spec.
pub fn proof_checks(spec: &QuotientSpec, precision: u32) -> Result<ProofChecks> {
    let gblock = min_modulus_gblock(spec, 2, precision)?;
    Ok(ProofChecks {
        esta: dominance_inequality(spec),
        nu: nu_inequality(spec),
        quartic: quartic_unit_disk_count(spec)?,
        estg: gblock.lo().is_positive(),
    })
}

const WINDING_SAMPLE_BUDGET: u64 = 1 << 13;

/// Builds the full certificate for a Member spec and its witness.
///
/// Entries are produced for j = 2..=depth in order. The first index whose
/// sign cannot be certified even after doubling the precision truncates the
/// chain and is recorded in `incomplete_at`; everything already certified is
/// kept. Zero counts run over the even indices of the surviving entries.
pub fn sign_chain(
    spec: &QuotientSpec,
    z0: &Dyadic,
    depth: u64,
    precision: u32,
) -> Result<SignChainCertificate> {
    let prec = RigorousValue::try_precision(precision)?;
    if depth < 4 || depth % 2 != 0 {
        return Err(Error::Parameter(format!(
            "chain depth must be even and at least 4, got {depth}"
        )));
    }
    let z = z0.to_rational();
    if z <= BigRational::one() || &z > spec.a() {
        return Err(Error::Parameter(format!(
            "witness {} outside (1, a]",
            z0.to_f64()
        )));
    }

    let mut radii: Vec<(u64, EntryKind, RigorousValue)> = Vec::new();
    for j in 2..=depth {
        let (kind, radius) = if j % 2 == 0 {
            (EntryKind::Rho, rho(spec, j, prec)?)
        } else {
            (EntryKind::R, r_radius(spec, j, z0, prec)?)
        };
        radii.push((j, kind, radius));
    }
    // z0 < rho_2 < r_3 < ... must hold exactly; a violation means the
    // witness or the quotient data is corrupt.
    let mut prev = RigorousValue::point(z0.clone(), prec);
    for (j, _, radius) in &radii {
        if !prev.certainly_lt(radius) {
            return Err(Error::Inconsistency(format!(
                "chain radii fail to increase strictly at index {j}"
            )));
        }
        prev = radius.clone();
    }

    let evaluators: Vec<SeriesEvaluator> =
        [prec, prec * 2].iter().map(|p| SeriesEvaluator::new(spec, *p)).collect::<Result<_>>()?;
    let mut entries: Vec<ChainEntry> = Vec::new();
    let mut incomplete_at: Option<u64> = None;
    for (j, kind, radius) in &radii {
        let mut certified = None;
        for ev in &evaluators {
            let val = ev.eval_phi(radius)?;
            let ok = match kind {
                EntryKind::Rho => val.sign().certifies_nonnegative(),
                EntryKind::R => val.sign().certifies_nonpositive(),
            };
            if ok {
                certified = Some(match kind {
                    EntryKind::Rho => ChainSign::NonNegative,
                    EntryKind::R => ChainSign::NonPositive,
                });
                break;
            }
        }
        match certified {
            Some(sign) => entries.push(ChainEntry {
                j: *j,
                kind: *kind,
                radius: radius.clone(),
                sign,
            }),
            None => {
                incomplete_at = Some(*j);
                break;
            }
        }
    }

    let even_entries: Vec<(u64, RigorousValue)> = entries
        .iter()
        .filter(|e| e.kind == EntryKind::Rho)
        .map(|e| (e.j, e.radius.clone()))
        .collect();
    let counted: Vec<(u64, Result<u64>)> = even_entries
        .par_iter()
        .map(|(j, radius)| (*j, winding_zero_count(spec, radius, prec, WINDING_SAMPLE_BUDGET)))
        .collect();
    let mut zero_counts: Vec<ZeroCount> = Vec::new();
    for (j, outcome) in counted {
        match outcome {
            Ok(count) => {
                if count != j {
                    return Err(Error::Inconsistency(format!(
                        "disk at index {j} holds {count} zeros instead of {j}"
                    )));
                }
                zero_counts.push(ZeroCount { j, count });
            }
            Err(Error::Inconclusive(_)) => {
                if incomplete_at.map_or(true, |at| j < at) {
                    incomplete_at = Some(j);
                }
                break;
            }
            Err(e) => return Err(e),
        }
    }

    Ok(SignChainCertificate {
        spec: spec.clone(),
        z0: z0.clone(),
        depth,
        entries,
        zero_counts,
        checks: proof_checks(spec, prec)?,
        incomplete_at,
    })
}

/// Checks every invariant that is assertable from the certificate alone:
/// entry indices are contiguous from 2, kinds match parity, signs match
/// kinds, radii strictly increase from z0, and every recorded count equals
/// its index. Returns whether the chain covers the full requested depth.
pub fn verify_structure(cert: &SignChainCertificate) -> Result<ChainStatus> {
    if cert.depth < 4 || cert.depth % 2 != 0 {
        return Err(Error::Parameter(format!(
            "certificate depth must be even and at least 4, got {}",
            cert.depth
        )));
    }
    let z = cert.z0.to_rational();
    if z <= BigRational::one() || &z > cert.spec.a() {
        return Err(Error::Parameter("certificate witness outside (1, a]".into()));
    }
    let mut prev_hi = cert.z0.clone();
    for (pos, entry) in cert.entries.iter().enumerate() {
        let expect_j = pos as u64 + 2;
        if entry.j != expect_j {
            return Err(Error::Parameter(format!(
                "entry {pos} carries index {} instead of {expect_j}",
                entry.j
            )));
        }
        let kind_ok = match entry.kind {
            EntryKind::Rho => entry.j % 2 == 0,
            EntryKind::R => entry.j % 2 == 1,
        };
        if !kind_ok {
            return Err(Error::Parameter(format!("entry {} kind disagrees with its parity", entry.j)));
        }
        let sign_ok = match entry.kind {
            EntryKind::Rho => entry.sign == ChainSign::NonNegative,
            EntryKind::R => entry.sign == ChainSign::NonPositive,
        };
        if !sign_ok {
            return Err(Error::Parameter(format!("entry {} sign disagrees with its kind", entry.j)));
        }
        if !(&prev_hi < entry.radius.lo()) {
            return Err(Error::Parameter(format!(
                "radii fail to increase strictly at index {}",
                entry.j
            )));
        }
        prev_hi = entry.radius.hi().clone();
    }
    let mut counted = std::collections::BTreeSet::new();
    for zc in &cert.zero_counts {
        if zc.j % 2 != 0 || zc.j < 2 || zc.j > cert.depth {
            return Err(Error::Parameter(format!("zero count at invalid index {}", zc.j)));
        }
        if zc.count != zc.j {
            return Err(Error::Parameter(format!(
                "zero count {} at index {} breaks the ladder",
                zc.count, zc.j
            )));
        }
        counted.insert(zc.j);
    }
    let last_entry = cert.entries.last().map_or(1, |e| e.j);
    if last_entry < cert.depth {
        return Ok(ChainStatus::Incomplete { first_missing: last_entry + 1 });
    }
    for j in (2..=cert.depth).step_by(2) {
        if !counted.contains(&j) {
            return Ok(ChainStatus::Incomplete { first_missing: j });
        }
    }
    Ok(ChainStatus::Complete)
}

/// Exact decimal rendering when the denominator is 10-smooth, otherwise the
/// reduced fraction.
pub fn rational_string(r: &BigRational) -> String {
    let mut den = r.denom().clone();
    if den.is_negative() {
        den = -den;
    }
    let mut twos = 0u32;
    let mut fives = 0u32;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let digits = twos.max(fives);
    let scale = BigInt::from(10).pow(digits);
    let scaled = (r * BigRational::from_integer(scale)).to_integer();
    if digits == 0 {
        return scaled.to_string();
    }
    let neg = scaled.is_negative();
    let mut body = scaled.abs().to_string();
    while body.len() <= digits as usize {
        body.insert(0, '0');
    }
    body.insert(body.len() - digits as usize, '.');
    if neg {
        body.insert(0, '-');
    }
    body
}

impl SignChainCertificate {
    /// Canonical JSON value: keys sorted, radii as decimal endpoint pairs
    /// with their binary precision.
    pub fn to_json_value(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let digits = (e.radius.prec() / 3).max(12);
                let (lo, hi) = e.radius.to_decimal_pair(digits);
                json!({
                    "j": e.j,
                    "kind": match e.kind { EntryKind::Rho => "rho", EntryKind::R => "r" },
                    "radius": { "dec": [lo, hi], "prec": e.radius.prec() },
                    "sign": match e.sign {
                        ChainSign::NonNegative => "nonnegative",
                        ChainSign::NonPositive => "nonpositive",
                    },
                })
            })
            .collect();
        let counts: Vec<Value> = self
            .zero_counts
            .iter()
            .map(|zc| json!({ "j": zc.j, "count": zc.count }))
            .collect();
        json!({
            "spec": {
                "a": rational_string(self.spec.a()),
                "b": rational_string(self.spec.b()),
            },
            "z0": rational_string(&self.z0.to_rational()),
            "depth": self.depth,
            "entries": entries,
            "zero_counts": counts,
            "checks": {
                "esta": self.checks.esta,
                "nu": self.checks.nu,
                "quartic": self.checks.quartic,
                "estg": self.checks.estg,
            },
        })
    }

    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("certificate value serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigor::Round;

    fn spec(a: f64, b: f64) -> QuotientSpec {
        QuotientSpec::from_f64(a, b).unwrap()
    }

    #[test]
    fn circle_radius_matches_closed_form() {
        let s = spec(4.0, 5.0);
        let r2 = rho(&s, 2, 128).unwrap();
        assert!((r2.approx() - 8.94427190999916).abs() < 1e-12);
        let r4 = rho(&s, 4, 128).unwrap();
        assert!((r4.approx() - 80.0 * 5f64.sqrt()).abs() < 1e-9);
        // q_2..q_j < rho_j < q_2..q_{j+1}
        for j in [2u64, 4, 6, 8] {
            let rj = rho(&s, j, 128).unwrap();
            let lo = s.quotient_product(j);
            let hi = s.quotient_product(j + 1);
            assert!(RigorousValue::from_rational(&lo, 128).certainly_lt(&rj));
            assert!(rj.certainly_lt(&RigorousValue::from_rational(&hi, 128)));
        }
        assert!(rho(&s, 3, 128).is_err());
        assert!(rho(&s, 0, 128).is_err());
    }

    #[test]
    fn diagonal_circle_radius() {
        let s = QuotientSpec::diagonal(BigRational::from_integer(BigInt::from(3))).unwrap();
        let r2 = rho(&s, 2, 128).unwrap();
        assert!((r2.approx() - 3.0 * 3f64.sqrt()).abs() < 1e-12);
        let r6 = rho(&s, 6, 128).unwrap();
        assert!((r6.approx() - 3f64.powi(5) * 3f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn witness_radius_is_exact() {
        let s = spec(4.0, 5.0);
        let z0 = Dyadic::from_int(2);
        let r3 = r_radius(&s, 3, &z0, 128).unwrap();
        assert!(r3.is_point());
        assert!(r3.contains_rational(&BigRational::from_integer(BigInt::from(40))));
        let r5 = r_radius(&s, 5, &z0, 128).unwrap();
        assert!(r5.contains_rational(&BigRational::from_integer(BigInt::from(800))));
        assert!(r_radius(&s, 4, &z0, 128).is_err());
        assert!(r_radius(&s, 3, &Dyadic::from_int(1), 128).is_err());
        assert!(r_radius(&s, 3, &Dyadic::from_int(5), 128).is_err());
    }

    #[test]
    fn side_inequalities_hold_on_samples() {
        for (a, b) in [(3.0, 3.5), (4.0, 5.0), (1.5, 2.0)] {
            assert!(dominance_inequality(&spec(a, b)), "dominance at ({a}, {b})");
        }
        for (a, b) in [(3.0, 3.1), (3.0, 4.0), (4.0, 9.0)] {
            assert!(nu_inequality(&spec(a, b)), "nu at ({a}, {b})");
        }
    }

    #[test]
    fn min_modulus_factor_positive() {
        let g33 = min_modulus_gblock(&spec(3.0, 3.0), 2, 128).unwrap();
        assert!(g33.lo().is_positive());
        assert!((g33.approx() - (11.0 - 6.0 * 3f64.sqrt())).abs() < 1e-12);
        let g45 = min_modulus_gblock(&spec(4.0, 5.0), 2, 128).unwrap();
        assert!((g45.approx() - (22.0 - 8.0 * 5f64.sqrt())).abs() < 1e-12);
        let y = BigRational::new(BigInt::from(3), BigInt::from(2));
        assert_eq!(
            min_modulus_quartic_at(&y),
            BigRational::new(BigInt::from(5), BigInt::from(16))
        );
    }

    #[test]
    fn quartic_count_is_two() {
        for (a, b) in [(4.0, 5.0), (3.0, 3.5), (3.2, 3.9), (5.0, 7.0)] {
            assert_eq!(quartic_unit_disk_count(&spec(a, b)).unwrap(), 2, "at ({a}, {b})");
        }
    }

    #[test]
    fn winding_counts_small_disks() {
        let s = spec(4.0, 5.0);
        let half = RigorousValue::from_rational(&BigRational::new(BigInt::from(1), BigInt::from(2)), 128);
        assert_eq!(winding_zero_count(&s, &half, 128, 1 << 12).unwrap(), 0);
        let r2 = rho(&s, 2, 128).unwrap();
        assert_eq!(winding_zero_count(&s, &r2, 128, 1 << 12).unwrap(), 2);
    }

    #[test]
    fn winding_counts_deeper_disk() {
        let s = spec(4.0, 5.0);
        let r6 = rho(&s, 6, 128).unwrap();
        assert_eq!(winding_zero_count(&s, &r6, 128, 1 << 13).unwrap(), 6);
    }

    #[test]
    fn chain_for_reference_spec() {
        let s = spec(4.0, 5.0);
        let cert = sign_chain(&s, &Dyadic::from_int(2), 8, 128).unwrap();
        assert_eq!(cert.incomplete_at, None);
        assert_eq!(cert.entries.len(), 7);
        for e in &cert.entries {
            match e.kind {
                EntryKind::Rho => assert_eq!(e.sign, ChainSign::NonNegative),
                EntryKind::R => assert_eq!(e.sign, ChainSign::NonPositive),
            }
        }
        assert_eq!(
            cert.zero_counts,
            vec![
                ZeroCount { j: 2, count: 2 },
                ZeroCount { j: 4, count: 4 },
                ZeroCount { j: 6, count: 6 },
                ZeroCount { j: 8, count: 8 }
            ]
        );
        assert!(cert.checks.esta && cert.checks.nu && cert.checks.estg);
        assert_eq!(cert.checks.quartic, 2);
        assert_eq!(verify_structure(&cert).unwrap(), ChainStatus::Complete);
    }

    #[test]
    fn chain_rejects_bad_shapes() {
        let s = spec(4.0, 5.0);
        assert!(sign_chain(&s, &Dyadic::from_int(2), 2, 128).is_err());
        assert!(sign_chain(&s, &Dyadic::from_int(2), 7, 128).is_err());
        assert!(sign_chain(&s, &Dyadic::from_int(1), 8, 128).is_err());
    }

    #[test]
    fn truncated_chain_reports_first_missing() {
        let s = spec(4.0, 5.0);
        let mut cert = sign_chain(&s, &Dyadic::from_int(2), 8, 128).unwrap();
        cert.entries.truncate(4); // keep j = 2..=5
        cert.zero_counts.truncate(2);
        assert_eq!(
            verify_structure(&cert).unwrap(),
            ChainStatus::Incomplete { first_missing: 6 }
        );
        // Complete entries but a missing even count is also incomplete.
        let mut cert2 = sign_chain(&s, &Dyadic::from_int(2), 8, 128).unwrap();
        cert2.zero_counts.remove(1);
        assert_eq!(
            verify_structure(&cert2).unwrap(),
            ChainStatus::Incomplete { first_missing: 4 }
        );
    }

    #[test]
    fn tampered_chain_is_rejected() {
        let s = spec(4.0, 5.0);
        let mut cert = sign_chain(&s, &Dyadic::from_int(2), 8, 128).unwrap();
        cert.zero_counts[1].count = 5;
        assert!(verify_structure(&cert).is_err());
        let mut cert2 = sign_chain(&s, &Dyadic::from_int(2), 8, 128).unwrap();
        cert2.entries[0].sign = ChainSign::NonPositive;
        assert!(verify_structure(&cert2).is_err());
        let mut cert3 = sign_chain(&s, &Dyadic::from_int(2), 8, 128).unwrap();
        cert3.entries.swap(1, 2);
        assert!(verify_structure(&cert3).is_err());
    }

    #[test]
    fn canonical_json_shape_and_determinism() {
        let s = spec(4.0, 5.0);
        let one = sign_chain(&s, &Dyadic::from_int(2), 8, 128).unwrap().to_canonical_json();
        let two = sign_chain(&s, &Dyadic::from_int(2), 8, 128).unwrap().to_canonical_json();
        assert_eq!(one, two);
        let v: Value = serde_json::from_str(&one).unwrap();
        assert_eq!(v["spec"]["a"], "4");
        assert_eq!(v["spec"]["b"], "5");
        assert_eq!(v["z0"], "2");
        assert_eq!(v["depth"], 8);
        assert_eq!(v["checks"]["quartic"], 2);
        assert_eq!(v["entries"].as_array().unwrap().len(), 7);
        assert_eq!(v["entries"][0]["kind"], "rho");
        assert_eq!(v["entries"][1]["kind"], "r");
        assert_eq!(v["zero_counts"][3], json!({ "count": 8, "j": 8 }));
        let obj = v.as_object().unwrap();
        let keys: Vec<&String> = obj.keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn rational_rendering() {
        assert_eq!(rational_string(&BigRational::from_integer(BigInt::from(4))), "4");
        assert_eq!(
            rational_string(&BigRational::new(BigInt::from(7), BigInt::from(2))),
            "3.5"
        );
        assert_eq!(
            rational_string(&BigRational::new(BigInt::from(-3), BigInt::from(40))),
            "-0.075"
        );
        assert_eq!(
            rational_string(&BigRational::new(BigInt::from(1), BigInt::from(3))),
            "1/3"
        );
        let z = Dyadic::new(BigInt::from(27), -4); // 27/16
        assert_eq!(rational_string(&z.to_rational()), "1.6875");
        let _ = Round::Down; // imported for symmetry with sibling test modules
    }
}
