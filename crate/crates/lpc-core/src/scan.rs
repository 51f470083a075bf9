//! Parameter-plane exploration: classify rectangular grids over (a, b),
//! localise the critical b above a fixed a by bisection, and audit scan
//! output against the expected membership monotonicity.
//!
//! Grid verdicts reuse the membership pipeline but insert one extra gate:
//! a certified enclosure of the limiting quotient of the diagonal family,
//! computed once per process, rejects any a certifiably below it. All four
//! closed-form gates are reported per cell whether or not they decided the
//! verdict, so downstream consumers can cross-check the classification.

use crate::certificates::rational_string;
use crate::membership::{
    self, lemma_f_check, necessary_bound_i, qinf_gate, sufficient_bound_h, GateReason,
    MembershipVerdict, Status,
};
use crate::quotient::QuotientSpec;
use crate::rigor::{RigorousValue, Round};
use crate::theta::compute_qinf;
use crate::{Error, Result};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

/// Digits used when rendering witnesses and floors in scan output.
const SCAN_DIGITS: u32 = 17;

/// Shared enclosure of the limiting quotient used as a rejection gate.
/// Computed once per process at fixed precision so that scans at different
/// precisions agree on which cells the gate rejects.
fn qinf_enclosure() -> Result<&'static RigorousValue> {
    static CELL: OnceLock<Result<RigorousValue>> = OnceLock::new();
    CELL.get_or_init(|| {
        let tol = BigRational::new(1.into(), 10_000.into());
        compute_qinf(128, &tol)
    })
    .as_ref()
    .map_err(Error::clone)
}

/// Closed-form gates evaluated at one grid point. `lemma_f` and `qinf_gate`
/// are pass flags (false forces NotMember), `over_i` forces NotMember when
/// true, and `under_h` certifies Member on its own for 3 <= a < 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanFlags {
    pub lemma_f: bool,
    pub under_h: bool,
    pub over_i: bool,
    pub qinf_gate: bool,
}

/// One classified grid point. Witness and floor live inside the verdict.
#[derive(Clone, Debug)]
pub struct ScanRecord {
    pub a: BigRational,
    pub b: BigRational,
    pub verdict: MembershipVerdict,
    pub flags: ScanFlags,
}

impl ScanRecord {
    pub fn witness(&self) -> Option<&crate::rigor::Dyadic> {
        self.verdict.witness.as_ref()
    }

    /// Positive floor for a search-based NotMember, or the last computed
    /// floor for Indeterminate; absent on gate rejections and Member.
    pub fn min_phi(&self) -> Option<&RigorousValue> {
        self.verdict.floor.as_ref()
    }
}

fn gate_reject(reason: GateReason) -> MembershipVerdict {
    MembershipVerdict {
        status: Status::NotMember,
        witness: None,
        witness_value: None,
        floor: None,
        gate: Some(reason),
        precision_used: 0,
    }
}

/// Classify one (a, b) point and report all four gates alongside the
/// verdict. Gates run cheapest first; the witness search only runs when
/// none of them decides.
pub fn classify_point(a: &BigRational, b: &BigRational, precision: u32) -> Result<ScanRecord> {
    RigorousValue::try_precision(precision)?;
    if a >= b {
        return Err(Error::Parameter(format!(
            "requires a < b strictly, got a = {a}, b = {b}"
        )));
    }
    let spec = QuotientSpec::new(a.clone(), b.clone())?;
    let qinf = qinf_enclosure()?;
    let three = BigRational::from_integer(3.into());
    let four = BigRational::from_integer(4.into());

    let lemma_f = lemma_f_check(&spec);
    let qinf_ok = qinf_gate(&spec, qinf);
    let in_band = a >= &three && a < &four;
    let under_h = in_band && b <= &sufficient_bound_h(a)?;
    let over_i = if in_band {
        let bound = necessary_bound_i(a, precision.max(192))?;
        b > &bound.hi().to_rational()
    } else {
        false
    };
    let flags = ScanFlags { lemma_f, under_h, over_i, qinf_gate: qinf_ok };

    let verdict = if !lemma_f {
        gate_reject(GateReason::LemmaF)
    } else if !qinf_ok {
        gate_reject(GateReason::QinfGate)
    } else if over_i {
        gate_reject(GateReason::BoundI)
    } else {
        let ladder = [precision, precision.saturating_mul(2)];
        membership::witness_search(&spec, &ladder, membership::DEFAULT_GRID)?
    };
    Ok(ScanRecord { a: a.clone(), b: b.clone(), verdict, flags })
}

fn grid_points(range: &(BigRational, BigRational), step: &BigRational) -> Vec<BigRational> {
    let mut pts = Vec::new();
    let mut x = range.0.clone();
    while x <= range.1 {
        pts.push(x.clone());
        x += step;
    }
    pts
}

/// Classify every grid point with a < b, row-major by a then b. Cells with
/// a >= b are skipped. Classification fans out across threads; the output
/// order is the deterministic grid order regardless of thread count.
pub fn scan_grid(
    a_range: &(BigRational, BigRational),
    b_range: &(BigRational, BigRational),
    step: &BigRational,
    precision: u32,
) -> Result<Vec<ScanRecord>> {
    if step <= &BigRational::zero() {
        return Err(Error::Parameter(format!("step must be positive, got {step}")));
    }
    let one = BigRational::one();
    if a_range.0 <= one || b_range.0 <= one {
        return Err(Error::Parameter("scan ranges must stay inside (1, inf)".into()));
    }
    RigorousValue::try_precision(precision)?;
    qinf_enclosure()?;
    let a_pts = grid_points(a_range, step);
    let b_pts = grid_points(b_range, step);
    let cells: Vec<(&BigRational, &BigRational)> = a_pts
        .iter()
        .flat_map(|a| b_pts.iter().filter(move |b| a < *b).map(move |b| (a, b)))
        .collect();
    cells
        .into_par_iter()
        .map(|(a, b)| classify_point(a, b, precision))
        .collect()
}

/// CSV rows in grid order under the fixed header. Missing optionals render
/// as empty cells.
pub fn records_to_csv(records: &[ScanRecord]) -> String {
    let mut out = String::from(
        "a,b,status,witness,min_phi_lo,min_phi_hi,lemmaF,underH,overI,qinfGate,precision\n",
    );
    for r in records {
        let witness = r
            .witness()
            .map(|w| w.to_decimal(SCAN_DIGITS, Round::Down))
            .unwrap_or_default();
        let (phi_lo, phi_hi) =
            r.min_phi().map(|f| f.to_decimal_pair(SCAN_DIGITS)).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            rational_string(&r.a),
            rational_string(&r.b),
            status_str(r.verdict.status),
            witness,
            phi_lo,
            phi_hi,
            r.flags.lemma_f,
            r.flags.under_h,
            r.flags.over_i,
            r.flags.qinf_gate,
            r.verdict.precision_used,
        ));
    }
    out
}

fn status_str(status: Status) -> &'static str {
    match status {
        Status::Member => "Member",
        Status::NotMember => "NotMember",
        Status::Indeterminate => "Indeterminate",
    }
}

/// JSON mirror of the CSV: one object per record with the same fields.
/// The witness, an exact dyadic, is rendered as a two-ended decimal
/// enclosure rather than a bare midpoint.
pub fn record_to_json(r: &ScanRecord) -> Value {
    let witness = r.witness().map(|w| {
        json!([w.to_decimal(SCAN_DIGITS, Round::Down), w.to_decimal(SCAN_DIGITS, Round::Up)])
    });
    let phi = r.min_phi().map(|f| f.to_decimal_pair(SCAN_DIGITS));
    json!({
        "a": rational_string(&r.a),
        "b": rational_string(&r.b),
        "status": status_str(r.verdict.status),
        "witness": witness,
        "min_phi_lo": phi.as_ref().map(|p| p.0.clone()),
        "min_phi_hi": phi.as_ref().map(|p| p.1.clone()),
        "lemmaF": r.flags.lemma_f,
        "underH": r.flags.under_h,
        "overI": r.flags.over_i,
        "qinfGate": r.flags.qinf_gate,
        "precision": r.verdict.precision_used,
    })
}

pub fn records_to_json(records: &[ScanRecord]) -> Value {
    Value::Array(records.iter().map(record_to_json).collect())
}

/// Enclosure of the critical b above a fixed a, with the bisection step
/// count that produced it.
#[derive(Clone, Debug)]
pub struct BoundaryPoint {
    pub a: BigRational,
    pub b_star: RigorousValue,
    pub iterations: u32,
}

/// Outcome of boundary localisation. Above a = 4 every b > a is a member,
/// so there is no finite boundary to localise.
#[derive(Clone, Debug)]
pub enum CriticalB {
    Boundary(BoundaryPoint),
    HutchinsonRegime,
}

/// Bisect for the largest member b above a. Requires a certifiably at or
/// above the limiting quotient, else no member cells exist and there is
/// nothing to bracket. The search bracket is [a + tol, bound_i + 1]; an
/// Indeterminate midpoint stops the refinement and the enclosure is
/// reported at its current width.
pub fn critical_b(a: &BigRational, precision: u32, tol: &BigRational) -> Result<CriticalB> {
    if tol <= &BigRational::zero() {
        return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
    }
    RigorousValue::try_precision(precision)?;
    let four = BigRational::from_integer(4.into());
    if a >= &four {
        return Ok(CriticalB::HutchinsonRegime);
    }
    let qinf = qinf_enclosure()?;
    if a < &qinf.hi().to_rational() {
        return Err(Error::Domain(format!(
            "a = {a} is not certifiably above the limiting quotient; no member b exists to bracket"
        )));
    }

    let ladder = [precision, precision.saturating_mul(2)];
    let classify = |b: &BigRational| -> Result<Status> {
        let spec = QuotientSpec::new(a.clone(), b.clone())?;
        Ok(membership::classify(&spec, &ladder, membership::DEFAULT_GRID)?.status)
    };

    let mut lo = a + tol;
    let mut hi = necessary_bound_i(a, precision.max(192))?.hi().to_rational() + BigRational::one();
    if classify(&lo)? != Status::Member {
        return Err(Error::Parameter(format!(
            "bracket failure: b = {lo} does not classify Member; widen the bracket"
        )));
    }
    if classify(&hi)? != Status::NotMember {
        return Err(Error::Parameter(format!(
            "bracket failure: b = {hi} does not classify NotMember; widen the bracket"
        )));
    }

    let half = BigRational::new(1.into(), 2.into());
    let mut iterations = 0u32;
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) * &half;
        iterations += 1;
        match classify(&mid)? {
            Status::Member => lo = mid,
            Status::NotMember => hi = mid,
            Status::Indeterminate => break,
        }
    }
    Ok(CriticalB::Boundary(BoundaryPoint {
        a: a.clone(),
        b_star: RigorousValue::from_rational_bounds(&lo, &hi, precision),
        iterations,
    }))
}

/// Which monotonicity rule a violation breaks: along a fixed a, membership
/// must persist as b decreases toward a; along a fixed b, membership must
/// persist as a increases toward b.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    FixedA,
    FixedB,
}

#[derive(Clone, Debug)]
pub struct MonotonicityViolation {
    pub kind: ViolationKind,
    /// The Member cell that forces membership at the violating cell.
    pub member: (BigRational, BigRational),
    /// The NotMember cell between the member cell and its parameter.
    pub not_member: (BigRational, BigRational),
}

#[derive(Clone, Debug)]
pub struct MonotonicityReport {
    pub pairs_checked: usize,
    pub indeterminate_skipped: usize,
    pub violations: Vec<MonotonicityViolation>,
}

impl MonotonicityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let violations: Vec<Value> = self
            .violations
            .iter()
            .map(|v| {
                json!({
                    "kind": match v.kind {
                        ViolationKind::FixedA => "fixed_a",
                        ViolationKind::FixedB => "fixed_b",
                    },
                    "member": [rational_string(&v.member.0), rational_string(&v.member.1)],
                    "not_member": [
                        rational_string(&v.not_member.0),
                        rational_string(&v.not_member.1),
                    ],
                })
            })
            .collect();
        json!({
            "pairs_checked": self.pairs_checked,
            "indeterminate_skipped": self.indeterminate_skipped,
            "clean": self.is_clean(),
            "violations": violations,
        })
    }
}

/// Check scan records against both monotonicity rules: a Member at (a, b)
/// forces Member at (a, c) for every grid c in (a, b), and at (d, b) for
/// every grid d in (a, b). Indeterminate cells are skipped, not violations.
pub fn monotonicity_audit(records: &[ScanRecord]) -> MonotonicityReport {
    let mut cols: BTreeMap<&BigRational, Vec<&ScanRecord>> = BTreeMap::new();
    let mut rows: BTreeMap<&BigRational, Vec<&ScanRecord>> = BTreeMap::new();
    for r in records {
        cols.entry(&r.a).or_default().push(r);
        rows.entry(&r.b).or_default().push(r);
    }
    let indeterminate_skipped =
        records.iter().filter(|r| r.verdict.status == Status::Indeterminate).count();

    let mut pairs_checked = 0usize;
    let mut violations = Vec::new();
    let mut seen: BTreeSet<(ViolationKind, BigRational, BigRational)> = BTreeSet::new();

    for col in cols.values() {
        for member in col.iter().filter(|r| r.verdict.status == Status::Member) {
            for inner in col.iter().filter(|r| r.b > r.a && r.b < member.b) {
                pairs_checked += 1;
                if inner.verdict.status == Status::NotMember
                    && seen.insert((ViolationKind::FixedA, inner.a.clone(), inner.b.clone()))
                {
                    violations.push(MonotonicityViolation {
                        kind: ViolationKind::FixedA,
                        member: (member.a.clone(), member.b.clone()),
                        not_member: (inner.a.clone(), inner.b.clone()),
                    });
                }
            }
        }
    }
    for row in rows.values() {
        for member in row.iter().filter(|r| r.verdict.status == Status::Member) {
            for inner in row.iter().filter(|r| r.a > member.a && r.a < r.b) {
                pairs_checked += 1;
                if inner.verdict.status == Status::NotMember
                    && seen.insert((ViolationKind::FixedB, inner.a.clone(), inner.b.clone()))
                {
                    violations.push(MonotonicityViolation {
                        kind: ViolationKind::FixedB,
                        member: (member.a.clone(), member.b.clone()),
                        not_member: (inner.a.clone(), inner.b.clone()),
                    });
                }
            }
        }
    }
    MonotonicityReport { pairs_checked, indeterminate_skipped, violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn mk(a: BigRational, b: BigRational, status: Status) -> ScanRecord {
        ScanRecord {
            a,
            b,
            verdict: MembershipVerdict {
                status,
                witness: None,
                witness_value: None,
                floor: None,
                gate: None,
                precision_used: 128,
            },
            flags: ScanFlags { lemma_f: true, under_h: false, over_i: false, qinf_gate: true },
        }
    }

    #[test]
    fn hutchinson_block_scan_is_member_in_grid_order() {
        let records =
            scan_grid(&(rat(4, 1), rat(9, 2)), &(rat(4, 1), rat(5, 1)), &rat(1, 2), 128).unwrap();
        let cells: Vec<(String, String)> = records
            .iter()
            .map(|r| (rational_string(&r.a), rational_string(&r.b)))
            .collect();
        assert_eq!(
            cells,
            vec![
                ("4".into(), "4.5".into()),
                ("4".into(), "5".into()),
                ("4.5".into(), "5".into()),
            ],
            "a >= b cells skipped, order row-major by a then b"
        );
        for r in &records {
            assert_eq!(r.verdict.status, Status::Member, "({}, {})", r.a, r.b);
            assert!(r.witness().is_some());
            assert!(r.flags.lemma_f && r.flags.qinf_gate && !r.flags.over_i && !r.flags.under_h);
        }
        let audit = monotonicity_audit(&records);
        assert!(audit.is_clean());
        assert_eq!(audit.indeterminate_skipped, 0);
    }

    #[test]
    fn closed_form_gates_reject_without_searching() {
        let r = classify_point(&rat(5, 2), &rat(7, 2), 128).unwrap();
        assert_eq!(r.verdict.status, Status::NotMember);
        assert_eq!(r.verdict.gate, Some(GateReason::LemmaF));
        assert!(!r.flags.lemma_f && !r.flags.qinf_gate);
        assert_eq!(r.verdict.precision_used, 0, "no search ran");

        let r = classify_point(&rat(31, 10), &rat(63, 20), 128).unwrap();
        assert_eq!(r.verdict.gate, Some(GateReason::QinfGate));
        assert!(r.flags.lemma_f && !r.flags.qinf_gate && !r.flags.over_i);

        // Fails the threshold bound as well, but the exact lemma fires first.
        let r = classify_point(&rat(3, 1), &rat(7, 2), 128).unwrap();
        assert_eq!(r.verdict.gate, Some(GateReason::LemmaF));
        assert!(r.flags.over_i, "b = 3.5 exceeds the necessary threshold at a = 3");

        let r = classify_point(&rat(323, 100), &rat(19, 5), 128).unwrap();
        assert_eq!(r.verdict.gate, Some(GateReason::QinfGate));
        assert!(r.flags.over_i, "gate order puts the limiting quotient first");
    }

    #[test]
    fn classify_point_requires_strict_order() {
        assert!(matches!(
            classify_point(&rat(4, 1), &rat(4, 1), 128),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            classify_point(&rat(5, 1), &rat(4, 1), 128),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn csv_and_json_mirrors_are_deterministic() {
        let range_a = (rat(2, 1), rat(5, 2));
        let range_b = (rat(2, 1), rat(3, 1));
        let records = scan_grid(&range_a, &range_b, &rat(1, 2), 128).unwrap();
        assert_eq!(records.len(), 3);

        let csv1 = records_to_csv(&records);
        let csv2 = records_to_csv(&scan_grid(&range_a, &range_b, &rat(1, 2), 128).unwrap());
        assert_eq!(csv1, csv2, "identical scans render byte-identically");
        let mut lines = csv1.lines();
        assert_eq!(
            lines.next().unwrap(),
            "a,b,status,witness,min_phi_lo,min_phi_hi,lemmaF,underH,overI,qinfGate,precision"
        );
        assert_eq!(lines.count(), 3);
        assert!(csv1.contains("2,2.5,NotMember,,,,false,false,false,false,0"));

        let json = records_to_json(&records);
        let arr = json.as_array().unwrap();
        assert_eq!(arr.len(), 3);
        for (rec, row) in records.iter().zip(arr) {
            assert_eq!(row["a"], Value::String(rational_string(&rec.a)));
            assert_eq!(row["status"], Value::String("NotMember".into()));
            assert_eq!(row["witness"], Value::Null);
            assert_eq!(row["lemmaF"], Value::Bool(false));
            assert_eq!(row["precision"], json!(0));
        }
    }

    #[test]
    fn member_record_serialization_carries_witness_and_flags() {
        let r = classify_point(&rat(7, 2), &rat(4, 1), 128).unwrap();
        assert_eq!(r.verdict.status, Status::Member);
        assert!(r.flags.under_h, "b = 4 is below 8/(a(4-a)) = 32/7 at a = 3.5");
        let row = record_to_json(&r);
        let w = row["witness"].as_array().expect("member carries a witness enclosure");
        assert_eq!(w.len(), 2);
        assert_eq!(row["underH"], Value::Bool(true));
        assert_eq!(row["qinfGate"], Value::Bool(true));
        let csv = records_to_csv(std::slice::from_ref(&r));
        assert!(csv.contains("3.5,4,Member,"), "csv row starts with the cell: {csv}");
    }

    #[test]
    fn boundary_bisection_lands_between_the_closed_form_bounds() {
        let a = rat(18, 5);
        let tol = rat(1, 20);
        let out = critical_b(&a, 128, &tol).unwrap();
        let point = match out {
            CriticalB::Boundary(p) => p,
            CriticalB::HutchinsonRegime => panic!("a = 3.6 has a finite boundary"),
        };
        let lo = point.b_star.lo().to_rational();
        let hi = point.b_star.hi().to_rational();
        assert!(&hi - &lo <= tol, "enclosure width {} at tol {tol}", &hi - &lo);
        assert!(point.iterations > 0);
        let h = sufficient_bound_h(&a).unwrap();
        let i = necessary_bound_i(&a, 192).unwrap().hi().to_rational();
        assert!(lo >= &h - &tol, "lower end {lo} against sufficient bound {h}");
        assert!(hi <= &i + &tol, "upper end {hi} against necessary bound {i}");
    }

    #[test]
    fn boundary_reports_hutchinson_regime_and_rejects_low_a() {
        assert!(matches!(
            critical_b(&rat(4, 1), 128, &rat(1, 100)).unwrap(),
            CriticalB::HutchinsonRegime
        ));
        assert!(matches!(
            critical_b(&rat(9, 2), 128, &rat(1, 100)).unwrap(),
            CriticalB::HutchinsonRegime
        ));
        assert!(matches!(critical_b(&rat(31, 10), 128, &rat(1, 100)), Err(Error::Domain(_))));
    }

    #[test]
    fn audit_flags_planted_violations_and_skips_indeterminate() {
        let col = vec![
            mk(rat(7, 2), rat(4, 1), Status::NotMember),
            mk(rat(7, 2), rat(9, 2), Status::Member),
        ];
        let report = monotonicity_audit(&col);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, ViolationKind::FixedA);
        assert_eq!(report.violations[0].not_member.1, rat(4, 1));

        let row = vec![
            mk(rat(17, 5), rat(9, 2), Status::Member),
            mk(rat(4, 1), rat(9, 2), Status::NotMember),
        ];
        let report = monotonicity_audit(&row);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, ViolationKind::FixedB);
        let json = report.to_json();
        assert_eq!(json["clean"], Value::Bool(false));
        assert_eq!(json["violations"][0]["kind"], Value::String("fixed_b".into()));

        let soft = vec![
            mk(rat(7, 2), rat(4, 1), Status::Indeterminate),
            mk(rat(7, 2), rat(9, 2), Status::Member),
        ];
        let report = monotonicity_audit(&soft);
        assert!(report.is_clean(), "indeterminate cells are skipped, not violations");
        assert_eq!(report.indeterminate_skipped, 1);
    }
}
