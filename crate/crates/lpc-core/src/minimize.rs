//! Witness search and certified lower bounds for a function on an interval.
//!
//! The membership test needs one of two certificates on a domain `(lo, hi]`:
//! a point where the function is certifiably nonpositive, or a proof that its
//! infimum is strictly positive. The engine below supplies both: a sampled
//! grid with local refinement hunts for a witness, and an adaptive bisection
//! cover either discharges every cell with a positive lower bound or reports
//! an honest floor enclosure when the budget runs out.

use crate::rigor::{Dyadic, RigorousValue};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct MinimizeConfig {
    /// Successive grid resolutions for the witness hunt.
    pub grids: Vec<u32>,
    /// Maximum bisection depth for the covering stage.
    pub cover_depth: u32,
    /// Hard cap on processed cover cells (safety valve).
    pub max_cells: usize,
    pub prec: u32,
}

impl MinimizeConfig {
    pub fn with_precision(prec: u32) -> MinimizeConfig {
        MinimizeConfig { grids: vec![64, 512], cover_depth: 26, max_cells: 40_000, prec }
    }
}

#[derive(Clone, Debug)]
pub enum MinimizeOutcome {
    /// A point in `(lo, hi]` where the enclosure certifies `value <= 0`.
    Witness { x: Dyadic, value: RigorousValue },
    /// The infimum over the domain is certified strictly positive;
    /// `floor` encloses it.
    FloorPositive { floor: RigorousValue },
    /// Budget exhausted with the sign of the infimum still open.
    Indeterminate { floor: RigorousValue },
}

/// Searches `(lo, hi]` for a certified nonpositive value of `eval`, falling
/// back to a bisection cover that bounds the infimum. `eval` must return a
/// range enclosure: for an interval argument `X` the result contains
/// `{ f(x) : x in X }`.
pub fn find_nonpositive_or_floor<F>(
    lo: &Dyadic,
    hi: &Dyadic,
    eval: F,
    cfg: &MinimizeConfig,
) -> Result<MinimizeOutcome>
where
    F: Fn(&RigorousValue) -> Result<RigorousValue>,
{
    if lo >= hi {
        return Err(Error::Domain("empty search interval".into()));
    }
    let prec = cfg.prec;
    let span = hi.sub_exact(lo);

    for &grid in &cfg.grids {
        let grid = grid.max(2);
        let mut best: Option<(Dyadic, RigorousValue)> = None;
        for i in 1..=grid {
            // x_i = lo + i * span / grid, thin points, i >= 1 keeps x > lo.
            let x = lo.add_exact(
                &span
                    .mul_round(&Dyadic::from_int(i as i64), prec, crate::rigor::Round::Down)
                    .div_round(&Dyadic::from_int(grid as i64), prec, crate::rigor::Round::Down),
            );
            let x = if &x > hi { hi.clone() } else { x };
            let v = eval(&RigorousValue::point(x.clone(), prec))?;
            if v.sign().certifies_nonpositive() {
                return Ok(MinimizeOutcome::Witness { x, value: v });
            }
            let better = match &best {
                None => true,
                Some((_, bv)) => v.midpoint() < bv.midpoint(),
            };
            if better {
                best = Some((x, v));
            }
        }
        if let Some((bx, _)) = best {
            if let Some(w) = refine_local(lo, hi, &bx, &span, &eval, grid, prec)? {
                return Ok(MinimizeOutcome::Witness { x: w.0, value: w.1 });
            }
        }
    }

    cover_for_floor(lo, hi, &eval, cfg)
}

/// Ternary-style local descent around `seed`; purely heuristic navigation,
/// only the final enclosure signs matter.
fn refine_local<F>(
    lo: &Dyadic,
    hi: &Dyadic,
    seed: &Dyadic,
    span: &Dyadic,
    eval: &F,
    grid: u32,
    prec: u32,
) -> Result<Option<(Dyadic, RigorousValue)>>
where
    F: Fn(&RigorousValue) -> Result<RigorousValue>,
{
    let mut h = span.div_round(&Dyadic::from_int(grid as i64), prec, crate::rigor::Round::Up);
    let mut center = seed.clone();
    let mut center_val = eval(&RigorousValue::point(center.clone(), prec))?;
    for _ in 0..70 {
        if center_val.sign().certifies_nonpositive() {
            return Ok(Some((center, center_val)));
        }
        h = h.scale2(-1).add_exact(&h.scale2(-2)); // h *= 3/4
        let mut candidates = Vec::new();
        for probe in [center.sub_exact(&h), center.add_exact(&h)] {
            if &probe > lo && &probe <= hi {
                let v = eval(&RigorousValue::point(probe.clone(), prec))?;
                if v.sign().certifies_nonpositive() {
                    return Ok(Some((probe, v)));
                }
                candidates.push((probe, v));
            }
        }
        for (p, v) in candidates {
            if v.midpoint() < center_val.midpoint() {
                center = p;
                center_val = v;
            }
        }
    }
    Ok(None)
}

fn cover_for_floor<F>(
    lo: &Dyadic,
    hi: &Dyadic,
    eval: &F,
    cfg: &MinimizeConfig,
) -> Result<MinimizeOutcome>
where
    F: Fn(&RigorousValue) -> Result<RigorousValue>,
{
    let prec = cfg.prec;
    // Leaf bookkeeping: the infimum over the union of leaves lies in
    // [min leaf.lo, min leaf.hi].
    let mut floor_lo: Option<Dyadic> = None;
    let mut floor_hi: Option<Dyadic> = None;
    let mut undecided = false;
    let mut stack = vec![(RigorousValue::from_endpoints(lo.clone(), hi.clone(), prec), 0u32)];
    let mut processed = 0usize;

    while let Some((cell, depth)) = stack.pop() {
        processed += 1;
        if processed > cfg.max_cells {
            undecided = true;
            break;
        }
        let v = eval(&cell)?;
        if v.hi() <= &Dyadic::zero() {
            // Every point of the cell is a witness; report its midpoint.
            let x = cell.midpoint();
            let x = if &x <= lo { cell.hi().clone() } else { x };
            return Ok(MinimizeOutcome::Witness { x, value: v });
        }
        let leaf = v.lo().is_positive() || depth >= cfg.cover_depth;
        if leaf {
            if !v.lo().is_positive() {
                undecided = true;
            }
            floor_lo = Some(match floor_lo {
                None => v.lo().clone(),
                Some(f) => f.min(v.lo().clone()),
            });
            floor_hi = Some(match floor_hi {
                None => v.hi().clone(),
                Some(f) => f.min(v.hi().clone()),
            });
            continue;
        }
        let (left, right) = cell.bisect();
        stack.push((left, depth + 1));
        stack.push((right, depth + 1));
    }

    let floor = match (floor_lo, floor_hi) {
        (Some(l), Some(h)) => RigorousValue::from_endpoints(l, h, prec),
        _ => {
            return Err(Error::Inconclusive(
                "cover produced no leaves within the cell budget".into(),
            ))
        }
    };
    if undecided || !floor.lo().is_positive() {
        Ok(MinimizeOutcome::Indeterminate { floor })
    } else {
        Ok(MinimizeOutcome::FloorPositive { floor })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> MinimizeConfig {
        MinimizeConfig::with_precision(96)
    }

    #[test]
    fn finds_witness_for_dipping_parabola() {
        // f(x) = (x - 2)^2 - 1/4 dips below zero near 2.
        let eval = |x: &RigorousValue| -> crate::Result<RigorousValue> {
            let two = RigorousValue::from_int(2, 96);
            let quarter = RigorousValue::from_f64(0.25, 96);
            let d = x.sub(&two);
            Ok(d.mul(&d).sub(&quarter))
        };
        let out =
            find_nonpositive_or_floor(&Dyadic::from_int(1), &Dyadic::from_int(4), eval, &cfg())
                .unwrap();
        match out {
            MinimizeOutcome::Witness { x, value } => {
                let xf = x.to_f64();
                assert!((1.5..=2.5).contains(&xf), "witness at {xf}");
                assert!(value.sign().certifies_nonpositive());
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn certifies_positive_floor() {
        // f(x) = (x - 2)^2 + 1/2 stays above 1/2.
        let eval = |x: &RigorousValue| -> crate::Result<RigorousValue> {
            let two = RigorousValue::from_int(2, 96);
            let half = RigorousValue::from_f64(0.5, 96);
            let d = x.sub(&two);
            Ok(d.mul(&d).add(&half))
        };
        let out =
            find_nonpositive_or_floor(&Dyadic::from_int(1), &Dyadic::from_int(4), eval, &cfg())
                .unwrap();
        match out {
            MinimizeOutcome::FloorPositive { floor } => {
                // Contract: floor.lo <= inf f <= floor.hi with a positive lo;
                // cells discharge as soon as their lower bound clears zero,
                // so the hi side is only loosely localized.
                assert!(floor.lo().is_positive());
                assert!(floor.lo().to_f64() <= 0.5 + 1e-6);
                assert!(floor.hi().to_f64() >= 0.5 - 1e-6);
                assert!(floor.hi().to_f64() <= 1.0, "floor.hi {}", floor.hi().to_f64());
            }
            other => panic!("expected positive floor, got {other:?}"),
        }
    }

    #[test]
    fn exact_touching_minimum_is_indeterminate() {
        // f(x) = (x - 2)^2 touches zero; neither certificate can exist.
        let eval = |x: &RigorousValue| -> crate::Result<RigorousValue> {
            let two = RigorousValue::from_int(2, 96);
            let d = x.sub(&two);
            Ok(d.mul(&d))
        };
        let mut c = cfg();
        c.cover_depth = 12;
        c.max_cells = 2000;
        let out =
            find_nonpositive_or_floor(&Dyadic::from_int(1), &Dyadic::from_int(4), eval, &c)
                .unwrap();
        match out {
            MinimizeOutcome::Indeterminate { floor } => {
                assert!(!floor.lo().is_positive());
                assert!(floor.hi().to_f64() < 1e-4);
            }
            other => panic!("expected indeterminate, got {other:?}"),
        }
    }

    #[test]
    fn witness_respects_half_open_domain() {
        // Only nonpositive point is the excluded left endpoint.
        let eval = |x: &RigorousValue| -> crate::Result<RigorousValue> {
            Ok(x.sub(&RigorousValue::one(96)))
        };
        let out =
            find_nonpositive_or_floor(&Dyadic::from_int(1), &Dyadic::from_int(3), eval, &cfg())
                .unwrap();
        match out {
            MinimizeOutcome::Indeterminate { floor } => {
                assert!(!floor.lo().is_positive());
            }
            MinimizeOutcome::Witness { x, .. } => {
                panic!("witness {x:?} must not certify at the open endpoint");
            }
            MinimizeOutcome::FloorPositive { .. } => {
                panic!("floor cannot be strictly positive, inf is 0");
            }
        }
    }

    #[test]
    fn empty_interval_is_a_domain_error() {
        let eval = |_: &RigorousValue| Ok(RigorousValue::one(96));
        let err =
            find_nonpositive_or_floor(&Dyadic::from_int(2), &Dyadic::from_int(2), eval, &cfg());
        assert!(matches!(err, Err(Error::Domain(_))));
    }
}
