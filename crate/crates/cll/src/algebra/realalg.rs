//! Real algebraic numbers in isolating-interval representation.
//!
//! A [`RealAlg`] is a square-free rational polynomial together with an
//! open rational interval containing exactly one of its real roots. The
//! representation supports exact sign determination, comparison and
//! arbitrary refinement, all by Sturm counting and bisection; it carries
//! no ring arithmetic (field arithmetic lives in the number-field layer).

use crate::qpoly::QPoly;
use crate::rational::{rat_int, rat_to_f64, Rat};
use num_traits::{One, Zero};
use std::cmp::Ordering;

#[derive(Clone, Debug)]
pub struct RealAlg {
    poly: QPoly,
    lo: Rat,
    hi: Rat,
}

impl RealAlg {
    /// Builds a real algebraic number from a defining polynomial and an
    /// isolating interval. The polynomial is replaced by its square-free
    /// part; the caller must guarantee that `(lo, hi)` isolates exactly
    /// one real root and that the endpoints are not roots.
    pub fn new(poly: QPoly, lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo < hi);
        let sf = poly.squarefree_part();
        debug_assert!(sf.sign_at(&lo) != 0 && sf.sign_at(&hi) != 0);
        debug_assert_eq!(sf.sturm_sequence().count_roots(&lo, &hi), 1);
        RealAlg { poly: sf, lo, hi }
    }

    pub fn from_rational(x: Rat) -> Self {
        let lo = &x - Rat::one();
        let hi = &x + Rat::one();
        RealAlg { poly: QPoly::linear_root(&x), lo, hi }
    }

    pub fn zero() -> Self {
        RealAlg::from_rational(Rat::zero())
    }

    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    /// If the number is rational, returns its exact value.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.poly.degree() == 1 {
            let c = self.poly.coeff(0);
            let lc = self.poly.leading();
            Some(-c / lc)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mut me = self.clone();
        me.refine_to(&Rat::new(1.into(), num_bigint::BigInt::one() << 60));
        (rat_to_f64(&me.lo) + rat_to_f64(&me.hi)) / 2.0
    }

    /// One bisection step.
    pub fn refine(&mut self) {
        let mid = (&self.lo + &self.hi) / rat_int(2);
        match self.poly.sign_at(&mid) {
            0 => {
                // the root is exactly the rational midpoint
                self.poly = QPoly::linear_root(&mid);
                let w = (&self.hi - &self.lo) / rat_int(4);
                self.lo = &mid - &w;
                self.hi = mid + w;
            }
            s => {
                // keep whichever half still shows the sign change; fall
                // back to Sturm when the endpoint signs agree
                let slo = self.poly.sign_at(&self.lo);
                if slo != 0 && s != slo {
                    self.hi = mid;
                } else if slo != 0 && self.poly.sign_at(&self.hi) * s < 0 {
                    self.lo = mid;
                } else {
                    let sturm = self.poly.sturm_sequence();
                    if sturm.count_roots(&self.lo, &mid) == 1 {
                        self.hi = mid;
                    } else {
                        self.lo = mid;
                    }
                }
            }
        }
    }

    /// Refines until the interval width is at most `eps`.
    pub fn refine_to(&mut self, eps: &Rat) {
        while self.width() > *eps {
            self.refine();
        }
    }

    /// Exact sign of the number.
    pub fn sign(&self) -> i32 {
        let zero = Rat::zero();
        if self.lo >= zero {
            // interval endpoints are not roots, so lo == 0 still means
            // the root is positive
            return 1;
        }
        if self.hi <= zero {
            return -1;
        }
        // 0 lies strictly inside the interval
        if self.poly.sign_at(&zero) == 0 {
            return 0;
        }
        let mut me = self.clone();
        loop {
            me.refine();
            if me.lo >= zero {
                return 1;
            }
            if me.hi <= zero {
                return -1;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == 0
    }

    /// The negation `-α` (root of p(-x)).
    pub fn neg(&self) -> RealAlg {
        RealAlg {
            poly: self.poly.compose_linear(&rat_int(-1), &Rat::zero()),
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    /// Scales by a nonzero rational: `c · α` is a root of p(x/c).
    pub fn scale(&self, c: &Rat) -> RealAlg {
        assert!(!c.is_zero());
        let poly = self.poly.compose_linear(&(Rat::one() / c), &Rat::zero());
        let (a, b) = (&self.lo * c, &self.hi * c);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        RealAlg { poly, lo, hi }
    }

    /// Shifts by a rational: `α + c` is a root of p(x - c).
    pub fn shift(&self, c: &Rat) -> RealAlg {
        RealAlg {
            poly: self.poly.compose_linear(&Rat::one(), &-c.clone()),
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    /// Replaces the defining polynomial by the irreducible factor the
    /// root belongs to. In particular a rational value becomes visible
    /// to [`RealAlg::as_rational`].
    pub fn reduce(&self) -> RealAlg {
        if self.poly.degree() <= 1 {
            return self.clone();
        }
        let factors = crate::factor::factor_squarefree(&self.poly);
        for f in factors {
            if f.degree() == 0 {
                continue;
            }
            if f.sturm_sequence().count_roots(&self.lo, &self.hi) == 1 {
                return RealAlg { poly: f, lo: self.lo.clone(), hi: self.hi.clone() };
            }
        }
        self.clone()
    }

    /// Exact equality test.
    pub fn eq_alg(&self, other: &RealAlg) -> bool {
        if self.hi <= other.lo || other.hi <= self.lo {
            return false;
        }
        let g = self.poly.gcd(&other.poly);
        if g.degree() == 0 {
            return false;
        }
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        if lo >= hi {
            // overlap is a single point which is not a root of either
            return false;
        }
        g.sturm_sequence().count_roots(&lo, &hi) >= 1
    }

    /// Exact comparison.
    pub fn cmp_alg(&self, other: &RealAlg) -> Ordering {
        if self.eq_alg(other) {
            return Ordering::Equal;
        }
        let mut a = self.clone();
        let mut b = other.clone();
        loop {
            if a.hi <= b.lo {
                return Ordering::Less;
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            a.refine();
            b.refine();
        }
    }

    /// Exact comparison against a rational.
    pub fn cmp_rat(&self, x: &Rat) -> Ordering {
        self.shift(&-x.clone()).sign().cmp(&0)
    }
}
