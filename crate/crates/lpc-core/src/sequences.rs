//! Coefficient sequences induced by a Member spec and their action on
//! polynomials.
//!
//! A Member spec yields two sequences: the factorial-weighted coefficients
//! `k! a_k` (exact rationals) and the integer-point values `f(k)`
//! (enclosures). The first acts on real-rooted polynomials without creating
//! nonreal zeros; the second never increases the number of nonreal zeros.
//! Both properties are checked here on seeded polynomial corpora: exact
//! sequences through the Sturm counters, enclosed sequences through
//! certified sign alternations at points separating the isolated roots of
//! the midpoint polynomial.

use crate::membership::{classify_default, Status};
use crate::quotient::{binomial, factorial, QuotientSpec};
use crate::realroot::{
    all_real, count_real_roots_with_multiplicity, isolate_real_roots, IntervalPoly, RatPoly,
};
use crate::rigor::{Dyadic, RigorousValue, Round};
use crate::series::SeriesEvaluator;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Clone, Debug)]
pub enum GammaValue {
    Exact(BigRational),
    Enclosed(RigorousValue),
}

impl GammaValue {
    pub fn approx(&self) -> f64 {
        match self {
            GammaValue::Exact(r) => Dyadic::from_rational(r, 64, Round::Down).to_f64(),
            GammaValue::Enclosed(v) => v.approx(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    MultiplierFromSpec,
    CzdsFromSpec,
    UserSupplied,
}

#[derive(Clone, Debug)]
pub struct GammaSequence {
    pub values: Vec<GammaValue>,
    pub provenance: Provenance,
    /// False when the generating spec did not certify Member; the defining
    /// properties are then not guaranteed, only testable.
    pub member_certified: bool,
}

impl GammaSequence {
    pub fn user_supplied(values: Vec<GammaValue>) -> GammaSequence {
        GammaSequence { values, provenance: Provenance::UserSupplied, member_certified: false }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn exact_values(&self) -> Option<Vec<&BigRational>> {
        self.values
            .iter()
            .map(|v| match v {
                GammaValue::Exact(r) => Some(r),
                GammaValue::Enclosed(_) => None,
            })
            .collect()
    }
}

/// The sequence `k! a_k`, exact because the coefficients are rational.
pub fn multiplier_sequence(
    spec: &QuotientSpec,
    n_terms: usize,
    precision: u32,
) -> Result<GammaSequence> {
    RigorousValue::try_precision(precision)?;
    let member_certified = matches!(
        classify_default(spec),
        Ok(v) if v.status == Status::Member
    );
    let values = (0..n_terms)
        .map(|k| {
            let g = BigRational::from_integer(factorial(k as u64))
                * spec.coefficient_rational(k as u64);
            debug_assert!(g.is_positive());
            GammaValue::Exact(g)
        })
        .collect();
    Ok(GammaSequence { values, provenance: Provenance::MultiplierFromSpec, member_certified })
}

/// The sequence `f(k)` of values at the nonnegative integers, as enclosures.
pub fn czds_sequence(
    spec: &QuotientSpec,
    n_terms: usize,
    precision: u32,
) -> Result<GammaSequence> {
    let prec = RigorousValue::try_precision(precision)?;
    let member_certified = matches!(
        classify_default(spec),
        Ok(v) if v.status == Status::Member
    );
    let ev = SeriesEvaluator::new(spec, prec)?;
    let values = (0..n_terms)
        .map(|k| {
            let x = RigorousValue::from_int(k as i64, prec);
            Ok(GammaValue::Enclosed(ev.eval_f(&x)?))
        })
        .collect::<Result<_>>()?;
    Ok(GammaSequence { values, provenance: Provenance::CzdsFromSpec, member_certified })
}

/// The weights `a^(-k^2)`, exact for rational `a >= 1`.
pub fn gaussian_weights(a: &BigRational, n_terms: usize) -> Result<GammaSequence> {
    if a < &BigRational::one() {
        return Err(Error::Parameter(format!("gaussian weights need a >= 1, got {a}")));
    }
    let values = (0..n_terms)
        .map(|k| {
            let e = (k * k) as u64;
            GammaValue::Exact(crate::quotient::rational_pow(a, e).recip())
        })
        .collect();
    Ok(GammaSequence::user_supplied(values))
}

/// The weights `1/k!`.
pub fn factorial_reciprocal_weights(n_terms: usize) -> GammaSequence {
    let values = (0..n_terms)
        .map(|k| GammaValue::Exact(BigRational::from_integer(factorial(k as u64)).recip()))
        .collect();
    GammaSequence::user_supplied(values)
}

/// `sum_k C(n, k) gamma_k z^k`; requires exact sequence values.
pub fn jensen_polynomial(gamma: &GammaSequence, n: usize) -> Result<RatPoly> {
    if n >= gamma.len() {
        return Err(Error::Parameter(format!(
            "degree {n} needs {} sequence values, have {}",
            n + 1,
            gamma.len()
        )));
    }
    let Some(vals) = gamma.exact_values() else {
        return Err(Error::Parameter(
            "jensen polynomial needs exact sequence values".into(),
        ));
    };
    let coeffs = (0..=n)
        .map(|k| BigRational::from_integer(binomial(n as u64, k as u64)) * vals[k])
        .collect();
    Ok(RatPoly::new(coeffs))
}

// A factor z^m passes through any coefficient-wise product untouched, and
// roots at the origin are real, so verification may divide it out on both
// sides. This matters for the enclosed path: sign alternations cannot see a
// root of even multiplicity, but a root pinned exactly at zero is the one
// repeated factor the product is guaranteed to preserve.
fn strip_origin_root(gamma: &GammaSequence, p: &RatPoly) -> Result<(GammaSequence, RatPoly)> {
    if p.degree() >= gamma.len() {
        return Err(Error::Parameter(format!(
            "degree {} exceeds the {} available sequence values",
            p.degree(),
            gamma.len()
        )));
    }
    let m = p
        .coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .ok_or_else(|| Error::Domain("sequence application to the zero polynomial".into()))?;
    if m == 0 {
        return Ok((gamma.clone(), p.clone()));
    }
    Ok((
        GammaSequence {
            values: gamma.values[m..].to_vec(),
            provenance: gamma.provenance,
            member_certified: gamma.member_certified,
        },
        RatPoly::new(p.coeffs()[m..].to_vec()),
    ))
}

// The coefficient-wise product, in whichever arithmetic the sequence allows.
enum Applied {
    Exact(RatPoly),
    Enclosed(IntervalPoly),
}

fn apply_sequence(gamma: &GammaSequence, p: &RatPoly, prec: u32) -> Result<Applied> {
    if p.is_zero() {
        return Err(Error::Domain("sequence application to the zero polynomial".into()));
    }
    if p.degree() >= gamma.len() {
        return Err(Error::Parameter(format!(
            "degree {} exceeds the {} available sequence values",
            p.degree(),
            gamma.len()
        )));
    }
    if let Some(vals) = gamma.exact_values() {
        let coeffs = p.coeffs().iter().zip(vals).map(|(c, g)| c * g).collect();
        return Ok(Applied::Exact(RatPoly::new(coeffs)));
    }
    let coeffs = p
        .coeffs()
        .iter()
        .zip(&gamma.values)
        .map(|(c, g)| {
            let cv = RigorousValue::from_rational(c, prec);
            match g {
                GammaValue::Exact(r) => cv.mul(&RigorousValue::from_rational(r, prec)),
                GammaValue::Enclosed(v) => cv.mul(&v.with_prec(prec)),
            }
        })
        .collect();
    Ok(Applied::Enclosed(IntervalPoly::new(coeffs)))
}

// Certified lower bound on the number of distinct real roots of every
// polynomial inside an interval family: isolate the roots of the midpoint
// polynomial, then count certified sign alternations at points threaded
// between the isolating intervals.
fn certified_distinct_real_lower_bound(ip: &IntervalPoly, prec: u32) -> Result<u64> {
    let mid = RatPoly::new(
        ip.coeffs.iter().map(|c| c.midpoint().to_rational()).collect(),
    );
    if mid.is_zero() {
        return Ok(0);
    }
    let boxes = isolate_real_roots(&mid)?;
    if boxes.is_empty() {
        return Ok(0);
    }
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let mut pts: Vec<BigRational> = Vec::with_capacity(boxes.len() + 1);
    pts.push(&boxes[0].0 - &one);
    for w in boxes.windows(2) {
        pts.push((&w[0].1 + &w[1].0) / &two);
    }
    pts.push(boxes.last().expect("nonempty").1.clone() + &one);
    let dyadic: Vec<Dyadic> =
        pts.iter().map(|r| Dyadic::from_rational(r, prec + 32, Round::Down)).collect();
    Ok(ip.certified_sign_changes(&dyadic, prec))
}

/// Whether applying the sequence preserves real-rootedness of `p`.
///
/// Exact sequences decide both directions; enclosed sequences certify only
/// the positive direction and report inconclusive otherwise.
pub fn verify_ms(gamma: &GammaSequence, p: &RatPoly) -> Result<bool> {
    if !all_real(p)? {
        return Err(Error::Parameter(
            "multiplier verification expects a real-rooted input".into(),
        ));
    }
    let (gamma, p) = strip_origin_root(gamma, p)?;
    match apply_sequence(&gamma, &p, 128)? {
        Applied::Exact(q) => {
            if q.is_zero() {
                return Ok(true);
            }
            all_real(&q)
        }
        Applied::Enclosed(ip) => {
            let deg = ip.degree() as u64;
            if certified_distinct_real_lower_bound(&ip, 128)? >= deg {
                Ok(true)
            } else {
                Err(Error::Inconclusive(
                    "could not certify all transformed roots real".into(),
                ))
            }
        }
    }
}

/// Whether applying the sequence avoids increasing the count of nonreal
/// zeros (with multiplicity) of `p`.
pub fn verify_czds(gamma: &GammaSequence, p: &RatPoly) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::Domain("verification on the zero polynomial".into()));
    }
    let (gamma, p) = strip_origin_root(gamma, p)?;
    let nonreal_before = p.degree() as u64 - count_real_roots_with_multiplicity(&p)?;
    match apply_sequence(&gamma, &p, 128)? {
        Applied::Exact(q) => {
            if q.is_zero() || q.degree() == 0 {
                return Ok(true);
            }
            let nonreal_after = q.degree() as u64 - count_real_roots_with_multiplicity(&q)?;
            Ok(nonreal_after <= nonreal_before)
        }
        Applied::Enclosed(ip) => {
            // The top coefficient must be bounded away from zero for the
            // degree, and with it the nonreal count, to be well defined.
            let lead = ip.coeffs.last().expect("nonzero input");
            if lead.contains_zero() {
                return Err(Error::Inconclusive(
                    "leading transformed coefficient straddles zero".into(),
                ));
            }
            let deg = ip.degree() as u64;
            let real_lower = certified_distinct_real_lower_bound(&ip, 128)?;
            if deg - real_lower.min(deg) <= nonreal_before {
                Ok(true)
            } else {
                Err(Error::Inconclusive(
                    "certified real-root lower bound leaves too many zeros unaccounted".into(),
                ))
            }
        }
    }
}

/// Seeded corpus of monic real-rooted polynomials with integer roots in
/// [-5, 5] and degrees in [2, 10].
pub fn real_rooted_corpus(seed: u64, count: usize) -> Vec<RatPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let degree = rng.gen_range(2..=10usize);
            let mut p = RatPoly::from_i64(&[1]);
            for _ in 0..degree {
                let root = rng.gen_range(-5i64..=5);
                p = p.mul(&RatPoly::from_i64(&[-root, 1]));
            }
            p
        })
        .collect()
}

/// Seeded corpus mixing real-rooted bases with zero, one, or two factors of
/// the form `z^2 + c`, so the nonreal count ranges over {0, 2, 4}.
pub fn mixed_corpus(seed: u64, count: usize) -> Vec<RatPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let degree = rng.gen_range(1..=5usize);
            let mut p = RatPoly::from_i64(&[1]);
            for _ in 0..degree {
                let root = rng.gen_range(-5i64..=5);
                p = p.mul(&RatPoly::from_i64(&[-root, 1]));
            }
            for _ in 0..(i % 3) {
                let c = rng.gen_range(1i64..=9);
                p = p.mul(&RatPoly::from_i64(&[c, 0, 1]));
            }
            p
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrialOutcome {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub total: usize,
    pub holds: usize,
    pub fails: usize,
    pub inconclusive: usize,
    pub outcomes: Vec<TrialOutcome>,
}

impl CorpusReport {
    fn from_outcomes(outcomes: Vec<TrialOutcome>) -> CorpusReport {
        CorpusReport {
            total: outcomes.len(),
            holds: outcomes.iter().filter(|o| **o == TrialOutcome::Holds).count(),
            fails: outcomes.iter().filter(|o| **o == TrialOutcome::Fails).count(),
            inconclusive: outcomes
                .iter()
                .filter(|o| **o == TrialOutcome::Inconclusive)
                .count(),
            outcomes,
        }
    }

    pub fn all_hold(&self) -> bool {
        self.holds == self.total
    }

    /// Audit record: the corpus alongside the per-trial outcomes.
    pub fn to_json(&self, corpus: &[RatPoly]) -> Value {
        let polys: Vec<Value> = corpus
            .iter()
            .map(|p| Value::Array(p.coeffs().iter().map(|c| json!(c.to_string())).collect()))
            .collect();
        json!({
            "total": self.total,
            "holds": self.holds,
            "fails": self.fails,
            "inconclusive": self.inconclusive,
            "outcomes": self.outcomes,
            "corpus": polys,
        })
    }
}

fn outcome_of(result: Result<bool>) -> Result<TrialOutcome> {
    match result {
        Ok(true) => Ok(TrialOutcome::Holds),
        Ok(false) => Ok(TrialOutcome::Fails),
        Err(Error::Inconclusive(_)) => Ok(TrialOutcome::Inconclusive),
        Err(e) => Err(e),
    }
}

/// Runs verify_ms across a corpus; trials are independent and parallel.
pub fn ms_corpus_report(gamma: &GammaSequence, corpus: &[RatPoly]) -> Result<CorpusReport> {
    let outcomes: Vec<TrialOutcome> = corpus
        .par_iter()
        .map(|p| outcome_of(verify_ms(gamma, p)))
        .collect::<Result<_>>()?;
    Ok(CorpusReport::from_outcomes(outcomes))
}

/// Runs verify_czds across a corpus; trials are independent and parallel.
pub fn czds_corpus_report(gamma: &GammaSequence, corpus: &[RatPoly]) -> Result<CorpusReport> {
    let outcomes: Vec<TrialOutcome> = corpus
        .par_iter()
        .map(|p| outcome_of(verify_czds(gamma, p)))
        .collect::<Result<_>>()?;
    Ok(CorpusReport::from_outcomes(outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realroot::{sturm_count, RootBound};

    fn spec45() -> QuotientSpec {
        QuotientSpec::from_f64(4.0, 5.0).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn multiplier_values_match_closed_forms() {
        let g = multiplier_sequence(&spec45(), 6, 128).unwrap();
        assert!(g.member_certified);
        assert_eq!(g.provenance, Provenance::MultiplierFromSpec);
        let vals = g.exact_values().unwrap();
        assert_eq!(vals[0], &BigRational::one());
        assert_eq!(vals[1], &BigRational::one());
        assert_eq!(vals[2], &rat(1, 2));
        assert_eq!(vals[3], &rat(6, 80));
    }

    #[test]
    fn czds_values_enclose_partial_sums() {
        let g = czds_sequence(&spec45(), 4, 128).unwrap();
        assert!(g.member_certified);
        // f(0) = 1 exactly; f(1) > 2 because the series starts 1 + 1 + ...
        assert!((g.values[0].approx() - 1.0).abs() < 1e-25);
        assert!(g.values[1].approx() > 2.0);
        // f(2) against a 25-term direct summation.
        let s = spec45();
        let mut sum = BigRational::zero();
        let two = BigRational::from_integer(BigInt::from(2));
        for k in 0..25u64 {
            sum += s.coefficient_rational(k) * crate::quotient::rational_pow(&two, k);
        }
        let f2 = match &g.values[2] {
            GammaValue::Enclosed(v) => v.clone(),
            GammaValue::Exact(_) => unreachable!(),
        };
        let sd = Dyadic::from_rational(&sum, 256, Round::Down);
        assert!((f2.approx() - sd.to_f64()).abs() < 1e-12);
        // The partial sum of a positive series sits below the value.
        assert!(&sd < f2.hi());
    }

    #[test]
    fn jensen_small_cases() {
        let ones = GammaSequence::user_supplied(vec![
            GammaValue::Exact(BigRational::one()),
            GammaValue::Exact(BigRational::one()),
        ]);
        let p1 = jensen_polynomial(&ones, 1).unwrap();
        assert_eq!(p1.coeffs(), &[BigRational::one(), BigRational::one()]);
        assert!(all_real(&p1).unwrap());

        let g = multiplier_sequence(&spec45(), 8, 128).unwrap();
        let p2 = jensen_polynomial(&g, 2).unwrap();
        assert_eq!(p2.coeffs(), &[BigRational::one(), rat(2, 1), rat(1, 2)]);
        assert!(all_real(&p2).unwrap());

        let p6 = jensen_polynomial(&g, 6).unwrap();
        assert!(all_real(&p6).unwrap());
        // All roots on one side: six in (-inf, 0], none beyond.
        let neg = sturm_count(&p6, &RootBound::NegInf, &RootBound::Val(BigRational::zero()))
            .unwrap();
        assert_eq!(neg, 6);

        assert!(jensen_polynomial(&g, 8).is_err());
    }

    #[test]
    fn multiplier_preserves_real_rootedness() {
        let g = multiplier_sequence(&spec45(), 12, 128).unwrap();
        // (1 + z)^8
        let mut p = RatPoly::from_i64(&[1]);
        for _ in 0..8 {
            p = p.mul(&RatPoly::from_i64(&[1, 1]));
        }
        assert!(verify_ms(&g, &p).unwrap());
        // Identity sequence on anything real-rooted.
        let ones = GammaSequence::user_supplied(
            (0..12).map(|_| GammaValue::Exact(BigRational::one())).collect(),
        );
        assert!(verify_ms(&ones, &p).unwrap());
        // Non-real-rooted input is a precondition violation.
        assert!(verify_ms(&g, &RatPoly::from_i64(&[1, 0, 1])).is_err());
    }

    #[test]
    fn multiplier_corpus_all_hold() {
        let g = multiplier_sequence(&spec45(), 12, 128).unwrap();
        let corpus = real_rooted_corpus(0x5eed, 100);
        assert_eq!(corpus.len(), 100);
        assert!(corpus.iter().all(|p| p.degree() >= 2 && p.degree() <= 10));
        let report = ms_corpus_report(&g, &corpus).unwrap();
        assert!(report.all_hold(), "report: {:?}", (report.holds, report.fails, report.inconclusive));
    }

    #[test]
    fn czds_examples() {
        // (1/k!) on z^2 + 1: transform is z^2/2 + 1, nonreal count stays 2.
        let g = factorial_reciprocal_weights(4);
        let p = RatPoly::from_i64(&[1, 0, 1]);
        assert!(verify_czds(&g, &p).unwrap());
        // Real-rooted input through the exact gaussian weights.
        let ga = gaussian_weights(&BigRational::from_integer(BigInt::from(2)), 12).unwrap();
        let q = RatPoly::from_i64(&[-6, 11, -6, 1]);
        assert!(verify_czds(&ga, &q).unwrap());
        assert!(gaussian_weights(&rat(1, 2), 4).is_err());
    }

    #[test]
    fn czds_sequence_on_mixed_corpus() {
        let g = czds_sequence(&spec45(), 12, 192).unwrap();
        // The worked example: (z^2+1)(z+1)^2 has nonreal count 2.
        let p = RatPoly::from_i64(&[1, 0, 1]).mul(&RatPoly::from_i64(&[1, 1])).mul(&RatPoly::from_i64(&[1, 1]));
        assert!(verify_czds(&g, &p).unwrap());
        let corpus = mixed_corpus(0xc0ffee, 30);
        let report = czds_corpus_report(&g, &corpus).unwrap();
        assert!(
            report.all_hold(),
            "holds {} fails {} inconclusive {}",
            report.holds,
            report.fails,
            report.inconclusive
        );
    }

    #[test]
    fn gaussian_weights_pass_mixed_corpus() {
        let ga = gaussian_weights(&BigRational::from_integer(BigInt::from(2)), 12).unwrap();
        let corpus = mixed_corpus(0xfeed, 40);
        let report = czds_corpus_report(&ga, &corpus).unwrap();
        assert!(report.all_hold());
        let audit = report.to_json(&corpus);
        assert_eq!(audit["total"], 40);
        assert_eq!(audit["corpus"].as_array().unwrap().len(), 40);
    }

    #[test]
    fn corpus_is_deterministic() {
        let one = real_rooted_corpus(42, 10);
        let two = real_rooted_corpus(42, 10);
        for (p, q) in one.iter().zip(&two) {
            assert_eq!(p.coeffs(), q.coeffs());
        }
        let other = real_rooted_corpus(43, 10);
        assert!(one.iter().zip(&other).any(|(p, q)| p.coeffs() != q.coeffs()));
    }
}
