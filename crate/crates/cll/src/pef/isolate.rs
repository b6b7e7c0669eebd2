//! Real-root isolation for PEFs on a bounded open window.
//!
//! The input is first replaced by its square-free part (same real roots,
//! all simple except possibly `t = 0`, which is treated separately by
//! splitting the window). Roots are then isolated recursively: a single
//! exponential term reduces to an algebraic polynomial; when a real
//! exponent is present the derivative chain together with Rolle lifting
//! reduces the term count/degrees; a lone conjugate pair with constant
//! coefficients is a shifted cosine whose root spacing `π/b` gives a
//! sound exact-sign sampling grid.

use super::exist::{exist_root_counted, reset_work};
use super::{square_free_part, IsolatingInterval, PefError, RealPEF};
use crate::rational::{rat, rat_int, Rat};
use num_traits::{ToPrimitive, Zero};

/// Upper bound on the differentiation/square-free recursion depth; the
/// measure argument guarantees termination long before this for the
/// chain sizes arising from small CTMCs.
const MAX_DEPTH: u32 = 64;

/// Cap on shrink iterations when separating a derivative-root interval
/// from roots of the function itself.
const MAX_SHRINK: u32 = 256;

/// Isolate all real roots of `f` in the open window `(lo, hi)`.
///
/// Returns disjoint open rational intervals, in increasing order, each
/// containing exactly one root of `f`; every root of `f` in `(lo, hi)`
/// is covered. Interval endpoints are never roots. Roots at the window
/// endpoints themselves are excluded. `budget` bounds the refinement
/// depth of the embedded existence checks.
pub fn isolate_roots(
    f: &RealPEF,
    lo: &Rat,
    hi: &Rat,
    budget: u32,
) -> Result<Vec<IsolatingInterval>, PefError> {
    assert!(lo < hi, "empty isolation window");
    if f.is_zero() {
        return Err(PefError::DegenerateInput);
    }
    reset_work();
    let s = RealPEF::new(square_free_part(f.pef())?)?;

    let zero = Rat::zero();
    if lo < &zero && &zero < hi {
        // `t = 0` is the only point where the square-free part may have a
        // root of even order, so handle it by splitting.
        let mut left = isolate_real(&s, lo, &zero, budget, MAX_DEPTH)?;
        let right = isolate_real(&s, &zero, hi, budget, MAX_DEPTH)?;
        if s.pef().sign_at(&zero) == 0 {
            let l = match left.last() {
                Some(iv) => iv.high.clone() / rat_int(2),
                None => lo / rat_int(2),
            };
            let r = match right.first() {
                Some(iv) => iv.low.clone() / rat_int(2),
                None => hi / rat_int(2),
            };
            left.push(IsolatingInterval::new(l, r));
        }
        left.extend(right);
        Ok(left)
    } else {
        isolate_real(&s, lo, hi, budget, MAX_DEPTH)
    }
}

/// Shrink an isolating interval of `f` below `target` width by bisection.
///
/// The root is located through the square-free part of `f`, so roots of
/// even order in the original function are refined correctly.
pub fn refine_isolation(
    f: &RealPEF,
    iv: &IsolatingInterval,
    target: &Rat,
) -> Result<IsolatingInterval, PefError> {
    assert!(target > &Rat::zero());
    reset_work();
    let s = RealPEF::new(square_free_part(f.pef())?)?;
    let s = s.pef();
    let mut l = iv.low.clone();
    let mut h = iv.high.clone();

    // A root of even order survives as a root of the square-free part
    // only at t = 0; a non-bracketing interval must be centered there.
    if s.sign_at(&l) == 0 || s.sign_at(&h) == 0 {
        return Err(PefError::EndpointRoot(super::fmt_rat(if s.sign_at(&l) == 0 {
            &l
        } else {
            &h
        })));
    }
    if s.sign_at(&l) * s.sign_at(&h) > 0 {
        let zero = Rat::zero();
        if l < zero && zero < h && s.sign_at(&zero) == 0 {
            let half = half_min(target, &(&zero - &l), &(&h - &zero));
            return Ok(IsolatingInterval::new(-half.clone(), half));
        }
        return Err(PefError::Unsupported(
            "interval does not bracket a sign change of the square-free part".into(),
        ));
    }
    while &(&h - &l) > target {
        let m = (&l + &h) / rat_int(2);
        let sm = s.sign_at(&m);
        if sm == 0 {
            // the root is exactly m: collapse symmetrically around it
            let half = half_min(target, &(&m - &l), &(&h - &m));
            return Ok(IsolatingInterval::new(&m - &half, &m + &half));
        }
        if s.sign_at(&l) * sm < 0 {
            h = m;
        } else {
            l = m;
        }
    }
    Ok(IsolatingInterval::new(l, h))
}

/// min(target, a, b) / 2, keeping everything rational.
fn half_min(target: &Rat, a: &Rat, b: &Rat) -> Rat {
    let mut m = target.clone();
    if a < &m {
        m = a.clone();
    }
    if b < &m {
        m = b.clone();
    }
    m / rat_int(2)
}

/// Isolate roots of a square-free real PEF on `(lo, hi)` not containing 0
/// in its interior.
fn isolate_real(
    s: &RealPEF,
    lo: &Rat,
    hi: &Rat,
    budget: u32,
    depth: u32,
) -> Result<Vec<IsolatingInterval>, PefError> {
    if lo >= hi {
        return Ok(Vec::new());
    }
    if depth == 0 {
        return Err(PefError::Unsupported(
            "differentiation chain exceeded its depth bound".into(),
        ));
    }
    let terms = s.pef().terms();
    debug_assert!(!terms.is_empty());

    // Single term p(t)e^{λt}: realness forces λ real and p real, and the
    // roots are exactly the roots of p.
    if terms.len() == 1 {
        let p = &terms[0].0;
        if p.degree() == 0 {
            return Ok(Vec::new());
        }
        let ivs = p
            .isolate_in_window(lo, hi)
            .into_iter()
            .map(|(a, b)| IsolatingInterval::new(a, b))
            .collect();
        return Ok(ivs);
    }

    // Any real exponent can be shifted to 0 by a unit factor, after which
    // differentiation strictly shrinks that term.
    if let Some((_, r)) = terms.iter().find(|(_, l)| l.is_real()) {
        let shifted = RealPEF::new(s.pef().mul_exp(&r.neg()))?;
        return derivative_chain(&shifted, lo, hi, budget, depth);
    }

    // All exponents nonreal: the supported shape is a single conjugate
    // pair with constant coefficients, i.e. a scaled, phase-shifted
    // cosine after stripping the common real exponent part.
    if terms.len() == 2 {
        let (p0, l0) = &terms[0];
        let (p1, l1) = &terms[1];
        let conjugate_pair = l0.conj().sub(l1).is_zero();
        if conjugate_pair && p0.degree() == 0 && p1.degree() == 0 {
            let re_part = l0.add(&l0.conj()).scale(&rat(1, 2));
            let stripped = RealPEF::new(s.pef().mul_exp(&re_part.neg()))?;
            return trig_isolate(&stripped, lo, hi);
        }
    }
    Err(PefError::Unsupported(
        "exponent structure outside the supported fragment".into(),
    ))
}

/// Rolle-based reduction: isolate the roots of (the square-free part of)
/// the derivative, then lift to isolating intervals for `s` itself.
fn derivative_chain(
    s: &RealPEF,
    lo: &Rat,
    hi: &Rat,
    budget: u32,
    depth: u32,
) -> Result<Vec<IsolatingInterval>, PefError> {
    let d = s.derivative();
    if d.is_zero() {
        // s is a nonzero constant
        return Ok(Vec::new());
    }
    let h = RealPEF::new(square_free_part(d.pef())?)?;
    let mut sub = isolate_real(&h, lo, hi, budget, depth - 1)?;
    sub.sort_by(|a, b| a.low.cmp(&b.low));

    // Shrink each derivative-root interval until it provably contains no
    // root of s and its endpoints are not roots of s.
    let mut shrunk: Vec<IsolatingInterval> = Vec::new();
    let narrow = (hi - lo) / rat_int(4096);
    for iv in &sub {
        let (mut l, mut u) = (iv.low.clone(), iv.high.clone());
        // Pre-narrow the stationary interval by sign bisection on `h`
        // before any existence check: the check's grid size scales with
        // the window width, so testing the original (often window-wide)
        // interval first can cost thousands of exact evaluations.
        while &u - &l > narrow {
            let m = (&l + &u) / rat_int(2);
            let sm = h.pef().sign_at(&m);
            if sm == 0 {
                let w = half_min(&(&u - &l), &(&m - &l), &(&u - &m));
                l = &m - &w;
                u = &m + &w;
            } else if h.pef().sign_at(&l) * sm < 0 {
                u = m;
            } else {
                l = m;
            }
        }
        let mut iters = 0;
        loop {
            iters += 1;
            if iters > MAX_SHRINK {
                return Err(PefError::Undecided(format!(
                    "could not separate a stationary point from roots near ({}, {})",
                    super::fmt_rat(&l),
                    super::fmt_rat(&u)
                )));
            }
            let unresolved = s.pef().sign_at(&l) == 0
                || s.pef().sign_at(&u) == 0
                || exist_root_counted(s, &l, &u, &rat(1, 2), budget)?.0;
            if !unresolved {
                break;
            }
            let m = (&l + &u) / rat_int(2);
            let sm = h.pef().sign_at(&m);
            if sm == 0 {
                // the derivative root is exactly m: collapse symmetrically
                let w = half_min(&(&u - &l), &(&m - &l), &(&u - &m));
                l = &m - &w;
                u = &m + &w;
            } else if h.pef().sign_at(&l) * sm < 0 {
                u = m;
            } else {
                l = m;
            }
        }
        shrunk.push(IsolatingInterval::new(l, u));
    }

    // Between consecutive stationary points s is monotone, so each gap
    // holds exactly one root iff the gap endpoint signs differ. A gap
    // endpoint with sign 0 can only be the window boundary, whose
    // neighborhood is then provably root-free inside the gap.
    let mut points: Vec<Rat> = Vec::with_capacity(2 * shrunk.len() + 2);
    points.push(lo.clone());
    for iv in &shrunk {
        points.push(iv.low.clone());
        points.push(iv.high.clone());
    }
    points.push(hi.clone());

    let mut out = Vec::new();
    for pair in points.chunks(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a >= b {
            continue;
        }
        if s.pef().sign_at(a) * s.pef().sign_at(b) < 0 {
            out.push(IsolatingInterval::new(a.clone(), b.clone()));
        }
    }
    Ok(out)
}

/// Base case: f(t) = c e^{ibt} + c̄ e^{-ibt} = 2|c| cos(bt + φ), b > 0.
/// Consecutive roots are exactly π/b apart, so exact signs on a grid of
/// pitch 3/b_hi < π/b (with b_hi ≥ b rational) isolate every root.
fn trig_isolate(
    f: &RealPEF,
    lo: &Rat,
    hi: &Rat,
) -> Result<Vec<IsolatingInterval>, PefError> {
    let lam = &f.pef().terms()[0].1;
    let mut b = lam.im();
    if b.sign() < 0 {
        b = b.neg();
    }
    while b.lo() <= &Rat::zero() {
        b.refine();
    }
    let step = rat_int(3) / b.hi();
    let width = hi - lo;
    let n = (&width / &step).ceil().to_integer().to_u64().unwrap().max(1);

    let sample = |j: u64| lo + &width * rat_int(j as i64) / rat_int(n as i64);
    let mut prev_t = sample(0);
    let mut prev_sign = f.pef().sign_at(&prev_t);
    let mut out = Vec::new();
    for j in 1..=n {
        let t = sample(j);
        let sign = f.pef().sign_at(&t);
        // an interior rational sample cannot be a root (its coefficients
        // would have to vanish), so sign 0 only occurs at the window
        // boundary, whose adjacent cell is root-free by root spacing
        if prev_sign * sign < 0 {
            out.push(IsolatingInterval::new(prev_t.clone(), t.clone()));
        }
        prev_t = t;
        prev_sign = sign;
    }
    Ok(out)
}
