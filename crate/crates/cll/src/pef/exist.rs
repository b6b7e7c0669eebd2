//! Existence of a real root on a bounded interval.
//!
//! The check samples the function on a grid fine enough that, by the
//! Lipschitz bound, the piecewise-linear envelopes `q_j ± δ/2` enclose
//! the function. If some sample is below `−δ/2` and another above
//! `+δ/2`, a sign change (hence a root) is certain; if all samples are on
//! one side, there is no root; otherwise the tolerance is halved and the
//! step repeats. Termination relies on the absence of tangential zeros
//! in the open interval, so the recursion carries an explicit budget and
//! fails loudly instead of looping.

use super::{fmt_rat, PefError, RealFunction};
use crate::rational::{rat_int, Rat};
use num_traits::{ToPrimitive, Zero};
use std::cell::Cell;

/// What a single tolerance level of the existence check concluded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExistOutcome {
    /// Samples below `−δ/2` and above `+δ/2` both exist: root certain.
    Bracketed,
    /// All samples above `+δ/2`: no root.
    AllAbove,
    /// All samples below `−δ/2`: no root.
    AllBelow,
    /// Ambiguous; recursed with `δ/2`.
    Recursed,
}

/// One tolerance level of the existence check.
#[derive(Clone, Debug)]
pub struct ExistStep {
    pub delta: Rat,
    pub samples: usize,
    pub outcome: ExistOutcome,
}

/// The full recursion transcript.
#[derive(Clone, Debug, Default)]
pub struct ExistTrace {
    pub steps: Vec<ExistStep>,
}

/// Hard cap on grid sizes; beyond this the Lipschitz bound is too weak
/// for the window and the caller should shrink it. Grid sizes double at
/// each δ-halving and every sample is an exact evaluation, so this cap
/// also bounds the total work of one call: near-tangential zeros fail
/// fast as `Undecided` instead of grinding for minutes.
const MAX_SAMPLES: u64 = 1 << 14;

/// Total samples allowed across all existence checks spawned by one
/// top-level entry point (root isolation, refinement, time comparison).
/// Isolation near a tangential zero can otherwise issue hundreds of
/// existence checks, each at its individual cap, and grind for minutes;
/// the shared meter turns that into a prompt `Undecided`.
const WORK_CAP: u64 = 1 << 15;

thread_local! {
    static WORK: Cell<u64> = const { Cell::new(0) };
}

/// Start a fresh work budget; called at every public entry point.
pub(crate) fn reset_work() {
    WORK.with(|w| w.set(0));
}

fn charge(n: u64) -> Result<(), PefError> {
    WORK.with(|w| {
        let total = w.get().saturating_add(n);
        w.set(total);
        if total > WORK_CAP {
            Err(PefError::Undecided(format!(
                "existence sampling exceeded the work budget ({total} samples)"
            )))
        } else {
            Ok(())
        }
    })
}

/// Decides whether `f` has a root in `[a, b]`.
///
/// Preconditions: `f(a) ≠ 0`, `f(b) ≠ 0`, and `f` has no tangential zero
/// in `(a, b)` (callers guarantee this via square-free reduction; the
/// `budget` bounds the δ-halvings in case the guarantee fails).
pub fn exist_root<F: RealFunction + ?Sized>(
    f: &F,
    a: &Rat,
    b: &Rat,
    delta: &Rat,
    budget: u32,
) -> Result<bool, PefError> {
    reset_work();
    exist_root_counted(f, a, b, delta, budget).map(|(v, _)| v)
}

/// As [`exist_root`], also returning the per-level transcript.
pub fn exist_root_traced<F: RealFunction + ?Sized>(
    f: &F,
    a: &Rat,
    b: &Rat,
    delta: &Rat,
    budget: u32,
) -> Result<(bool, ExistTrace), PefError> {
    reset_work();
    exist_root_counted(f, a, b, delta, budget)
}

/// The worker: charges the shared work meter but does not reset it, so
/// the many existence checks inside one isolation share a budget.
pub(crate) fn exist_root_counted<F: RealFunction + ?Sized>(
    f: &F,
    a: &Rat,
    b: &Rat,
    delta: &Rat,
    budget: u32,
) -> Result<(bool, ExistTrace), PefError> {
    assert!(a < b, "empty window");
    assert!(delta > &Rat::zero());
    if f.sign_at(a) == 0 {
        return Err(PefError::EndpointRoot(fmt_rat(a)));
    }
    if f.sign_at(b) == 0 {
        return Err(PefError::EndpointRoot(fmt_rat(b)));
    }
    let m = f.lipschitz_bound(a, b);
    let width = b - a;
    let mut delta = delta.clone();
    let mut trace = ExistTrace::default();
    for _ in 0..budget {
        let n_rat = (rat_int(4) * &width * &m / &delta).ceil();
        let n = n_rat.to_integer().to_u64().unwrap_or(u64::MAX).max(1);
        if n > MAX_SAMPLES {
            return Err(PefError::Undecided(format!(
                "existence grid would need {n} samples on [{}, {}]",
                fmt_rat(a),
                fmt_rat(b)
            )));
        }
        charge(n + 1)?;
        let quarter = &delta / rat_int(4);
        let half = &delta / rat_int(2);
        let step = &width / rat_int(n as i64);
        let mut has_low = false;
        let mut has_high = false;
        let mut all_low = true;
        let mut all_high = true;
        for j in 0..=n {
            let s = a + &step * rat_int(j as i64);
            let q = f.eval_approx(&s, &quarter);
            let below = q < -half.clone();
            let above = q > half;
            has_low |= below;
            has_high |= above;
            all_low &= below;
            all_high &= above;
            if has_low && has_high {
                break;
            }
        }
        if has_low && has_high {
            trace.steps.push(ExistStep {
                delta: delta.clone(),
                samples: (n + 1) as usize,
                outcome: ExistOutcome::Bracketed,
            });
            return Ok((true, trace));
        }
        if all_low || all_high {
            trace.steps.push(ExistStep {
                delta: delta.clone(),
                samples: (n + 1) as usize,
                outcome: if all_low { ExistOutcome::AllBelow } else { ExistOutcome::AllAbove },
            });
            return Ok((false, trace));
        }
        trace.steps.push(ExistStep {
            delta: delta.clone(),
            samples: (n + 1) as usize,
            outcome: ExistOutcome::Recursed,
        });
        delta = half;
    }
    Err(PefError::Undecided(format!(
        "no decision after {budget} tolerance halvings on [{}, {}] (possible tangential zero)",
        fmt_rat(a),
        fmt_rat(b)
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgPoly, AlgebraicNumber};
    use crate::pef::{RealPEF, PEF};
    use crate::qpoly::QPoly;
    use crate::rational::{rat, rat_int};
    use num_traits::One;

    fn poly_pef(coeffs: &[i64]) -> RealPEF {
        let p = AlgPoly::new(coeffs.iter().map(|&c| AlgebraicNumber::from_integer(c)).collect());
        RealPEF::new(PEF::term(p, AlgebraicNumber::zero())).unwrap()
    }

    #[test]
    fn sign_change_is_found() {
        // t - 1/2 on [0,1] with δ = 1/4
        let p = AlgPoly::new(vec![
            AlgebraicNumber::from_rational(rat(-1, 2)),
            AlgebraicNumber::one(),
        ]);
        let f = RealPEF::new(PEF::term(p, AlgebraicNumber::zero())).unwrap();
        let (found, trace) =
            exist_root_traced(&f, &Rat::zero(), &Rat::one(), &rat(1, 4), 64).unwrap();
        assert!(found);
        assert_eq!(trace.steps.last().unwrap().outcome, ExistOutcome::Bracketed);
    }

    #[test]
    fn strictly_positive_has_no_root() {
        // t^2 + 1 on [0,1]
        let f = poly_pef(&[1, 0, 1]);
        let (found, trace) =
            exist_root_traced(&f, &Rat::zero(), &Rat::one(), &rat(1, 2), 64).unwrap();
        assert!(!found);
        assert!(matches!(
            trace.steps.last().unwrap().outcome,
            ExistOutcome::AllAbove
        ));
    }

    #[test]
    fn cosine_root_in_window() {
        // e^{it} + e^{-it} on [1,2]: root at pi/2
        let i = AlgebraicNumber::roots_of(&QPoly::new(vec![
            rat_int(1),
            rat_int(0),
            rat_int(1),
        ]))
        .into_iter()
        .find(|r| r.im().sign() > 0)
        .unwrap();
        let f = RealPEF::new(PEF::new(vec![
            (AlgPoly::one(), i.clone()),
            (AlgPoly::one(), i.neg()),
        ]))
        .unwrap();
        assert!(exist_root(&f, &Rat::one(), &rat_int(2), &rat(1, 2), 64).unwrap());
    }

    #[test]
    fn ambiguous_envelope_recurses_with_halved_delta() {
        // small-amplitude positive function with a coarse δ forces at
        // least one recursion before deciding "no root"
        let f = poly_pef(&[1]); // constant 1
        let (found, trace) =
            exist_root_traced(&f, &Rat::zero(), &Rat::one(), &rat_int(16), 64).unwrap();
        assert!(!found);
        assert!(trace.steps.len() > 1, "expected δ-halving steps");
        for w in trace.steps.windows(2) {
            assert_eq!(w[1].delta, &w[0].delta / rat_int(2));
        }
        assert!(matches!(
            trace.steps.last().unwrap().outcome,
            ExistOutcome::AllAbove
        ));
        for s in &trace.steps[..trace.steps.len() - 1] {
            assert_eq!(s.outcome, ExistOutcome::Recursed);
        }
    }

    #[test]
    fn endpoint_root_is_rejected() {
        let f = poly_pef(&[0, 1]); // t
        let err = exist_root(&f, &Rat::zero(), &Rat::one(), &rat(1, 2), 64);
        assert!(matches!(err, Err(PefError::EndpointRoot(_))));
    }
}
