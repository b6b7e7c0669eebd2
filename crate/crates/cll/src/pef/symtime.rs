//! Symbolic time instants: exact rationals or roots of real PEFs given by
//! an isolating interval, plus a rational offset.
//!
//! Comparisons are exact where the structure allows it. Deciding equality
//! of two transcendental roots in general reduces to detecting a
//! tangential zero of a sum of squares, which the interval existence
//! check can only refute; a genuinely equal pair therefore surfaces as
//! `Undecided` unless a structural fast path applies.

use super::exist::{exist_root_counted, reset_work};
use super::{
    square_free_part, IsolatingInterval, PefError, RealFunction, RealPEF,
};
use crate::rational::{rat, rat_int, rat_sign, rat_to_f64, Rat};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// The value part of a symbolic instant.
#[derive(Clone, Debug)]
pub enum TimeValue {
    /// A known rational.
    Exact(Rat),
    /// The unique root of `witness` (square-free, sign-changing) inside
    /// the open `interval`.
    Root {
        witness: RealPEF,
        interval: IsolatingInterval,
    },
}

/// A time instant `value + offset`.
#[derive(Clone, Debug)]
pub struct SymbolicTime {
    pub value: TimeValue,
    pub offset: Rat,
}

impl SymbolicTime {
    pub fn exact(r: Rat) -> SymbolicTime {
        SymbolicTime { value: TimeValue::Exact(r), offset: Rat::zero() }
    }

    /// The root of `f` isolated by `interval`, shifted by `offset`.
    ///
    /// The stored witness is the square-free part of `f`, so it changes
    /// sign across the root; an interval around the (only possible)
    /// tangential root `t = 0`, or around a rational root of a linear
    /// rational witness, collapses to an exact value.
    pub fn root(
        f: &RealPEF,
        interval: IsolatingInterval,
        offset: Rat,
    ) -> Result<SymbolicTime, PefError> {
        let s = RealPEF::new(square_free_part(f.pef())?)?;
        let sl = s.pef().sign_at(&interval.low);
        let sh = s.pef().sign_at(&interval.high);
        if sl == 0 || sh == 0 {
            return Err(PefError::EndpointRoot(super::fmt_rat(if sl == 0 {
                &interval.low
            } else {
                &interval.high
            })));
        }
        if sl * sh > 0 {
            let zero = Rat::zero();
            if interval.low < zero && zero < interval.high && s.pef().sign_at(&zero) == 0 {
                return Ok(SymbolicTime { value: TimeValue::Exact(zero), offset });
            }
            return Err(PefError::Unsupported(
                "interval does not bracket a sign change of the witness".into(),
            ));
        }
        if let Some(r) = rational_root(&s, &interval) {
            return Ok(SymbolicTime { value: TimeValue::Exact(r), offset });
        }
        Ok(SymbolicTime { value: TimeValue::Root { witness: s, interval }, offset })
    }

    /// The same instant shifted by a rational amount.
    pub fn plus(&self, g: &Rat) -> SymbolicTime {
        SymbolicTime { value: self.value.clone(), offset: &self.offset + g }
    }

    pub fn as_exact(&self) -> Option<Rat> {
        match &self.value {
            TimeValue::Exact(r) => Some(r + &self.offset),
            TimeValue::Root { .. } => None,
        }
    }

    /// Rational lower/upper bounds enclosing the instant.
    pub fn bounds(&self) -> (Rat, Rat) {
        match &self.value {
            TimeValue::Exact(r) => (r + &self.offset, r + &self.offset),
            TimeValue::Root { interval, .. } => {
                (&interval.low + &self.offset, &interval.high + &self.offset)
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.bounds();
        (rat_to_f64(&lo) + rat_to_f64(&hi)) / 2.0
    }

    /// Shrink the isolating interval below `width` by exact bisection.
    pub fn refine(&mut self, width: &Rat) {
        if let TimeValue::Root { witness, interval } = &mut self.value {
            while interval.width() > *width {
                let m = (&interval.low + &interval.high) / rat_int(2);
                let sm = witness.pef().sign_at(&m);
                if sm == 0 {
                    self.value = TimeValue::Exact(m);
                    return;
                }
                if witness.pef().sign_at(&interval.low) * sm < 0 {
                    interval.high = m;
                } else {
                    interval.low = m;
                }
            }
        }
    }
}

impl fmt::Display for SymbolicTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            TimeValue::Exact(r) => {
                let v = r + &self.offset;
                write!(f, "{v}")
            }
            TimeValue::Root { witness, interval } => {
                write!(
                    f,
                    "root of {} in ({}, {})",
                    witness.pef(),
                    super::fmt_rat(&interval.low),
                    super::fmt_rat(&interval.high)
                )?;
                if !self.offset.is_zero() {
                    write!(f, " + {}", self.offset)?;
                }
                Ok(())
            }
        }
    }
}

/// If the witness is a rational polynomial of degree 1 (times an
/// exponential unit), its root is rational.
fn rational_root(s: &RealPEF, interval: &IsolatingInterval) -> Option<Rat> {
    let terms = s.pef().terms();
    if terms.len() != 1 {
        return None;
    }
    let p = &terms[0].0;
    if p.degree() != 1 {
        return None;
    }
    let c0 = p.coeff(0).as_rational()?;
    let c1 = p.coeff(1).as_rational()?;
    let r = -c0 / c1;
    (interval.low < r && r < interval.high).then_some(r)
}

/// Exact sign of `t1 - t2 - gap`.
///
/// `Err(Undecided)` means the two instants could not be separated within
/// the existence budget (in particular, two equal transcendental roots
/// presented through different witnesses).
pub fn compare_times(
    t1: &SymbolicTime,
    t2: &SymbolicTime,
    gap: &Rat,
    budget: u32,
) -> Result<Ordering, PefError> {
    reset_work();
    match (&t1.value, &t2.value) {
        (TimeValue::Exact(a), TimeValue::Exact(b)) => {
            Ok((a + &t1.offset).cmp(&(b + &t2.offset + gap)))
        }
        (TimeValue::Exact(a), TimeValue::Root { witness, interval }) => {
            let c = a + &t1.offset - &t2.offset - gap;
            Ok(cmp_rational_vs_root(&c, witness, interval))
        }
        (TimeValue::Root { witness, interval }, TimeValue::Exact(b)) => {
            let c = b + &t2.offset + gap - &t1.offset;
            Ok(cmp_rational_vs_root(&c, witness, interval).reverse())
        }
        (
            TimeValue::Root { witness: w1, interval: iv1 },
            TimeValue::Root { witness: w2, interval: iv2 },
        ) => {
            // compare ξ1 against ξ2 + g2
            let g2 = &t2.offset + gap - &t1.offset;
            let lo2 = &iv2.low + &g2;
            let hi2 = &iv2.high + &g2;
            if iv1.high <= lo2 {
                return Ok(Ordering::Less);
            }
            if hi2 <= iv1.low {
                return Ok(Ordering::Greater);
            }
            // shrink both intervals first: a short common window keeps
            // the sample counts of the existence check small
            let (mut l1, mut h1) = (iv1.low.clone(), iv1.high.clone());
            let (mut l2, mut h2) = (lo2, hi2);
            let narrow = rat(1, 4096);
            while &h1 - &l1 > narrow {
                bisect_root(w1, &mut l1, &mut h1, &Rat::zero());
            }
            while &h2 - &l2 > narrow {
                bisect_root(w2, &mut l2, &mut h2, &g2);
            }
            if h1 <= l2 {
                return Ok(Ordering::Less);
            }
            if h2 <= l1 {
                return Ok(Ordering::Greater);
            }
            let jl = l1.clone().max(l2.clone());
            let jh = h1.clone().min(h2.clone());

            if g2.is_zero() && w1.pef() == w2.pef() {
                // same function: one sign-changing root decides equality
                if jl < jh && exist_root_counted(w1, &jl, &jh, &rat(1, 2), budget)?.0 {
                    return Ok(Ordering::Equal);
                }
            } else if jl < jh {
                let h = SumSquares { f1: w1.clone(), f2: w2.clone(), shift: g2.clone() };
                match exist_root_counted(&h, &jl, &jh, &rat(1, 2), budget).map(|(v, _)| v) {
                    Ok(true) => return Ok(Ordering::Equal),
                    Ok(false) => {}
                    Err(e) => return Err(e),
                }
            }

            // the roots are distinct: refine both until the intervals
            // separate
            for _ in 0..512 {
                if h1 <= l2 {
                    return Ok(Ordering::Less);
                }
                if h2 <= l1 {
                    return Ok(Ordering::Greater);
                }
                bisect_root(w1, &mut l1, &mut h1, &Rat::zero());
                bisect_root(w2, &mut l2, &mut h2, &g2);
            }
            Err(PefError::Undecided(
                "could not separate two symbolic instants".into(),
            ))
        }
    }
}

/// Ordering of the rational `c` against the root isolated in `interval`.
fn cmp_rational_vs_root(c: &Rat, w: &RealPEF, interval: &IsolatingInterval) -> Ordering {
    if c <= &interval.low {
        return Ordering::Less;
    }
    if c >= &interval.high {
        return Ordering::Greater;
    }
    let sc = w.pef().sign_at(c);
    if sc == 0 {
        Ordering::Equal
    } else if sc == w.pef().sign_at(&interval.low) {
        // sign has not flipped yet: the root lies to the right of c
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Halve an isolating interval of the root `ξ + shift`, querying `w` at
/// `t - shift`.
fn bisect_root(w: &RealPEF, low: &mut Rat, high: &mut Rat, shift: &Rat) {
    let m = (&*low + &*high) / rat_int(2);
    let sm = w.pef().sign_at(&(&m - shift));
    if sm == 0 {
        // the root is exactly m: collapse around it
        let q = (&*high - &*low) / rat_int(8);
        *low = &m - &q;
        *high = &m + &q;
        return;
    }
    if w.pef().sign_at(&(&*low - shift)) * sm < 0 {
        *high = m;
    } else {
        *low = m;
    }
}

/// Exact sign of the real PEF `g` at a symbolic instant.
///
/// At a `Root` instant the zero test runs through a sum-of-squares
/// existence check; `Err(Undecided)` reports an instant too close to (or
/// exactly on) a root of `g` to classify within budget.
pub fn sign_at_symbolic(
    g: &RealPEF,
    time: &SymbolicTime,
    budget: u32,
) -> Result<i32, PefError> {
    if g.is_zero() {
        return Ok(0);
    }
    reset_work();
    let (witness, interval) = match &time.value {
        TimeValue::Exact(r) => return Ok(g.pef().sign_at(&(r + &time.offset))),
        TimeValue::Root { witness, interval } => (witness, interval),
    };
    // fast path: g vanishes at the instant when it has the same
    // square-free part as the witness and no offset is involved
    if time.offset.is_zero() {
        if let Ok(sg) = square_free_part(g.pef()) {
            if &sg == witness.pef() {
                return Ok(0);
            }
        }
    }
    // zero test for g(ξ + offset): a common root of the witness and the
    // shifted g inside the interval, shrunk first to keep the existence
    // check cheap
    let (mut l, mut u) = (interval.low.clone(), interval.high.clone());
    let narrow = rat(1, 4096);
    while &u - &l > narrow {
        bisect_root(witness, &mut l, &mut u, &Rat::zero());
    }
    let h = SumSquares { f1: witness.clone(), f2: g.clone(), shift: -time.offset.clone() };
    match exist_root_counted(&h, &l, &u, &rat(1, 2), budget).map(|(v, _)| v) {
        Ok(true) => return Ok(0),
        Ok(false) => {}
        Err(e) => return Err(e),
    }
    // g is nonzero at the instant: refine until a rigorous enclosure of
    // g over the (shifted) interval excludes zero
    let mut bits = 64u32;
    for _ in 0..10_000 {
        let ball = g
            .pef()
            .eval_ball_range(&(&l + &time.offset), &(&u + &time.offset), bits);
        if ball.excludes_zero() {
            return Ok(rat_sign(&ball.re));
        }
        let m = (&l + &u) / rat_int(2);
        let sm = witness.pef().sign_at(&m);
        if sm == 0 {
            return Ok(g.pef().sign_at(&(&m + &time.offset)));
        }
        if witness.pef().sign_at(&l) * sm < 0 {
            u = m;
        } else {
            l = m;
        }
        bits += 16;
    }
    Err(PefError::Undecided(
        "could not bound the function away from zero at a symbolic instant".into(),
    ))
}

/// h(t) = f1(t)² + f2(t - shift)²: nonnegative, vanishing exactly at
/// common roots. Used as a refutable zero test.
struct SumSquares {
    f1: RealPEF,
    f2: RealPEF,
    shift: Rat,
}

impl RealFunction for SumSquares {
    fn sign_at(&self, t: &Rat) -> i32 {
        let s1 = self.f1.pef().sign_at(t);
        let s2 = self.f2.pef().sign_at(&(t - &self.shift));
        if s1 == 0 && s2 == 0 {
            0
        } else {
            1
        }
    }

    fn eval_approx(&self, t: &Rat, eps: &Rat) -> Rat {
        let t2 = t - &self.shift;
        let a0 = self.f1.pef().eval_approx(t, &Rat::one());
        let b0 = self.f2.pef().eval_approx(&t2, &Rat::one());
        let m = a0.abs() + b0.abs() + rat_int(3);
        let e2 = eps / (rat_int(8) * &m);
        let a = self.f1.pef().eval_approx(t, &e2);
        let b = self.f2.pef().eval_approx(&t2, &e2);
        &a * &a + &b * &b
    }

    fn lipschitz_bound(&self, a: &Rat, b: &Rat) -> Rat {
        let m1 = self.f1.pef().magnitude_bound(a, b);
        let l1 = self.f1.pef().derivative().magnitude_bound(a, b);
        let (a2, b2) = (a - &self.shift, b - &self.shift);
        let m2 = self.f2.pef().magnitude_bound(&a2, &b2);
        let l2 = self.f2.pef().derivative().magnitude_bound(&a2, &b2);
        rat_int(2) * (m1 * l1 + m2 * l2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgPoly, AlgebraicNumber};
    use crate::pef::{isolate_roots, PEF};

    fn alg(n: i64) -> AlgebraicNumber {
        AlgebraicNumber::from_integer(n)
    }

    fn exp_minus(c: i64) -> RealPEF {
        RealPEF::new(
            PEF::term(AlgPoly::one(), alg(1)).sub(&PEF::constant_rat(rat_int(c))),
        )
        .unwrap()
    }

    fn root_of(f: &RealPEF, lo: i64, hi: i64) -> SymbolicTime {
        let ivs = isolate_roots(f, &rat_int(lo), &rat_int(hi), 64).unwrap();
        assert_eq!(ivs.len(), 1);
        SymbolicTime::root(f, ivs[0].clone(), Rat::zero()).unwrap()
    }

    #[test]
    fn exact_comparisons() {
        let a = SymbolicTime::exact(rat(3, 2));
        let b = SymbolicTime::exact(rat(3, 2));
        assert_eq!(compare_times(&a, &b, &Rat::zero(), 16).unwrap(), Ordering::Equal);
        assert_eq!(compare_times(&a, &b, &rat(1, 10), 16).unwrap(), Ordering::Less);
        assert_eq!(
            compare_times(&a.plus(&rat_int(1)), &b, &Rat::zero(), 16).unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn ln_two_against_rationals() {
        // ln 2 ≈ 0.6931
        let t = root_of(&exp_minus(2), 0, 2);
        let one = SymbolicTime::exact(Rat::one());
        let half = SymbolicTime::exact(rat(1, 2));
        assert_eq!(compare_times(&t, &one, &Rat::zero(), 16).unwrap(), Ordering::Less);
        assert_eq!(compare_times(&t, &half, &Rat::zero(), 16).unwrap(), Ordering::Greater);
        assert_eq!(compare_times(&one, &t, &Rat::zero(), 16).unwrap(), Ordering::Greater);
    }

    #[test]
    fn rational_root_witness_collapses_to_exact() {
        // t - 1 and t - 3: rational roots, so gap -2 makes them equal
        let f1 = RealPEF::new(PEF::term(
            AlgPoly::new(vec![alg(-1), alg(1)]),
            AlgebraicNumber::zero(),
        ))
        .unwrap();
        let f3 = RealPEF::new(PEF::term(
            AlgPoly::new(vec![alg(-3), alg(1)]),
            AlgebraicNumber::zero(),
        ))
        .unwrap();
        let t1 = root_of(&f1, 0, 2);
        let t3 = root_of(&f3, 2, 4);
        assert!(t1.as_exact().is_some());
        assert_eq!(
            compare_times(&t1, &t3, &rat_int(-2), 16).unwrap(),
            Ordering::Equal
        );
    }

    #[test]
    fn same_witness_roots_are_equal() {
        let f = exp_minus(2);
        let a = root_of(&f, 0, 2);
        let b = root_of(&f, 0, 1);
        assert_eq!(compare_times(&a, &b, &Rat::zero(), 16).unwrap(), Ordering::Equal);
    }

    #[test]
    fn distinct_transcendental_roots_separate() {
        // ln 2 < ln 3
        let a = root_of(&exp_minus(2), 0, 2);
        let b = root_of(&exp_minus(3), 0, 2);
        assert_eq!(compare_times(&a, &b, &Rat::zero(), 16).unwrap(), Ordering::Less);
        assert_eq!(compare_times(&b, &a, &Rat::zero(), 16).unwrap(), Ordering::Greater);
    }

    #[test]
    fn equal_roots_with_different_witnesses_are_undecided() {
        // e^t - 2 and e^{2t} - 4 share the root ln 2 but have different
        // square-free parts; equality must surface as Undecided
        let f = exp_minus(2);
        let g = RealPEF::new(
            PEF::term(AlgPoly::one(), alg(2)).sub(&PEF::constant_rat(rat_int(4))),
        )
        .unwrap();
        let a = root_of(&f, 0, 2);
        let b = root_of(&g, 0, 2);
        assert!(matches!(
            compare_times(&a, &b, &Rat::zero(), 8),
            Err(PefError::Undecided(_))
        ));
    }

    #[test]
    fn sign_at_symbolic_instants() {
        let f = exp_minus(2);
        let t = root_of(&f, 0, 2);
        // the witness function itself vanishes there
        assert_eq!(sign_at_symbolic(&f, &t, 16).unwrap(), 0);
        // t - 1 at ln 2 is negative, at ln 2 + 1 positive
        let lin = RealPEF::new(PEF::term(
            AlgPoly::new(vec![alg(-1), alg(1)]),
            AlgebraicNumber::zero(),
        ))
        .unwrap();
        assert_eq!(sign_at_symbolic(&lin, &t, 16).unwrap(), -1);
        assert_eq!(sign_at_symbolic(&lin, &t.plus(&Rat::one()), 16).unwrap(), 1);
        // at an exact instant the sign is immediate
        assert_eq!(
            sign_at_symbolic(&lin, &SymbolicTime::exact(rat(1, 2)), 16).unwrap(),
            -1
        );
    }

    #[test]
    fn refine_tightens_bounds() {
        let mut t = root_of(&exp_minus(2), 0, 2);
        t.refine(&rat(1, 1_000_000));
        let (lo, hi) = t.bounds();
        assert!(&hi - &lo <= rat(1, 1_000_000));
        let ln2 = 2.0f64.ln();
        assert!(rat_to_f64(&lo) < ln2 && ln2 < rat_to_f64(&hi));
    }
}
