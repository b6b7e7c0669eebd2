//! Dense univariate polynomials over the rationals.
//!
//! Provides the arithmetic, gcd/square-free machinery, Sturm sequences,
//! real-root isolation and resultants that the algebraic-number layer is
//! built on.

use crate::rational::{rat_int, rat_sign, rat_to_f64, CBall, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A polynomial with rational coefficients, stored dense, lowest degree
/// first. The invariant is that the leading coefficient (last entry) is
/// nonzero; the zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<Rat>,
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        QPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        QPoly::new(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        QPoly::new(coeffs)
    }

    /// `x - r`.
    pub fn linear_root(r: &Rat) -> Self {
        QPoly::new(vec![-r.clone(), Rat::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; the zero polynomial reports degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        QPoly::new(out)
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - other.coeff(k));
        }
        QPoly::new(out)
    }

    pub fn neg(&self) -> QPoly {
        QPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn scale(&self, s: &Rat) -> QPoly {
        if s.is_zero() {
            return QPoly::zero();
        }
        QPoly { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let lc = self.leading();
        self.scale(&(Rat::one() / lc))
    }

    pub fn derivative(&self) -> QPoly {
        if self.coeffs.len() <= 1 {
            return QPoly::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * rat_int(k as i64))
            .collect();
        QPoly::new(out)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rat_to_f64(c);
        }
        acc
    }

    /// Horner evaluation over a complex ball; the result encloses f(z)
    /// for every z in the input ball.
    pub fn eval_ball(&self, z: &CBall) -> CBall {
        let mut acc = CBall::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(&CBall::real(c.clone()));
        }
        acc
    }

    pub fn sign_at(&self, x: &Rat) -> i32 {
        rat_sign(&self.eval(x))
    }

    /// Quotient and remainder with `deg rem < deg divisor`.
    pub fn divrem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.degree() < divisor.degree() || self.is_zero() {
            return (QPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let lc = divisor.leading();
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = &rem[k] / &lc;
            for j in 0..dd {
                let delta = &q * &divisor.coeffs[j];
                rem[k - dd + j] -= delta;
            }
            rem[k] = Rat::zero();
            quot[k - dd] = q;
        }
        (QPoly::new(quot), QPoly::new(rem))
    }

    /// Exact division; panics if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &QPoly) -> QPoly {
        let (q, r) = self.divrem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.monic(); // keep coefficient growth in check
        }
        a.monic()
    }

    /// Extended gcd: returns monic `g = gcd(self, other)` and `u, v`
    /// with `u*self + v*other = g`.
    pub fn xgcd(&self, other: &QPoly) -> (QPoly, QPoly, QPoly) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let (mut u0, mut u1) = (QPoly::one(), QPoly::zero());
        let (mut v0, mut v1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let nu = u0.sub(&q.mul(&u1));
            let nv = v0.sub(&q.mul(&v1));
            r0 = std::mem::replace(&mut r1, r);
            u0 = std::mem::replace(&mut u1, nu);
            v0 = std::mem::replace(&mut v1, nv);
        }
        if r0.is_zero() {
            return (QPoly::zero(), QPoly::zero(), QPoly::zero());
        }
        let s = Rat::one() / r0.leading();
        (r0.scale(&s), u0.scale(&s), v0.scale(&s))
    }

    /// The square-free part `p / gcd(p, p')`, normalized monic.
    pub fn squarefree_part(&self) -> QPoly {
        if self.degree() == 0 {
            return QPoly::one();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.is_zero() || self.gcd(&self.derivative()).degree() == 0
    }

    /// `f(a*x + b)`.
    pub fn compose_linear(&self, a: &Rat, b: &Rat) -> QPoly {
        let lin = QPoly::new(vec![b.clone(), a.clone()]);
        let mut acc = QPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&QPoly::constant(c.clone()));
        }
        acc
    }

    /// General composition `f(g(x))`.
    pub fn compose(&self, g: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&QPoly::constant(c.clone()));
        }
        acc
    }

    /// Clears denominators and integer content; the result is a primitive
    /// integer polynomial with positive leading coefficient, a rational
    /// multiple of `self`.
    pub fn primitive_integer(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let lcm = crate::rational::denominator_lcm(&self.coeffs);
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rat::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut content = BigInt::zero();
        for v in &ints {
            content = content.gcd(v);
        }
        if content.is_zero() {
            content = BigInt::one();
        }
        if ints.last().unwrap().is_negative() {
            content = -content;
        }
        QPoly::new(
            ints.iter()
                .map(|v| Rat::from_integer(v / &content))
                .collect(),
        )
    }

    /// Cauchy bound: every complex root z satisfies |z| < bound.
    pub fn root_bound(&self) -> Rat {
        if self.coeffs.len() <= 1 {
            return Rat::one();
        }
        let lc = self.leading().abs();
        let mut m = Rat::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            m = m.max(c.abs() / &lc);
        }
        m + Rat::one()
    }

    /// Resultant of `self` and `other` (both over ℚ).
    pub fn resultant(&self, other: &QPoly) -> Rat {
        fn go(f: &QPoly, g: &QPoly) -> Rat {
            if g.is_zero() {
                return if f.degree() == 0 && !f.is_zero() {
                    Rat::one()
                } else {
                    Rat::zero()
                };
            }
            if g.degree() == 0 {
                return num_traits::pow::pow(g.leading(), f.degree());
            }
            let (_, r) = f.divrem(g);
            let df = f.degree();
            let dg = g.degree();
            if r.is_zero() {
                return Rat::zero();
            }
            let sign = if (df * dg) % 2 == 1 { rat_int(-1) } else { Rat::one() };
            sign * num_traits::pow::pow(g.leading(), df - r.degree()) * go(g, &r)
        }
        if self.is_zero() || other.is_zero() {
            return Rat::zero();
        }
        go(self, other)
    }

    /// Sturm sequence of `self`.
    pub fn sturm_sequence(&self) -> SturmSequence {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].divrem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            // normalize to control coefficient growth; positive scaling
            // preserves sign sequences
            let lc = r.leading().abs();
            chain.push(r.neg().scale(&(Rat::one() / lc)));
        }
        SturmSequence { chain }
    }

    /// Isolating intervals for all real roots of `self`, lowest first.
    ///
    /// Returns open intervals `(a, b)` with rational endpoints that are
    /// not roots, each containing exactly one real root of `self`.
    pub fn isolate_real_roots(&self) -> Vec<(Rat, Rat)> {
        assert!(!self.is_zero(), "cannot isolate roots of the zero polynomial");
        let sf = self.squarefree_part();
        if sf.degree() == 0 {
            return vec![];
        }
        let sturm = sf.sturm_sequence();
        let bound = sf.root_bound();
        let lo = -bound.clone();
        let hi = bound;
        // the Cauchy bound is strict, so ±bound are never roots
        let mut out = Vec::new();
        let mut stack = vec![(lo, hi)];
        while let Some((a, b)) = stack.pop() {
            let count = sturm.count_roots(&a, &b);
            match count {
                0 => {}
                1 => out.push((a, b)),
                _ => {
                    let mut mid = (&a + &b) / rat_int(2);
                    if sf.sign_at(&mid) == 0 {
                        // the midpoint is a root: shift it off the root,
                        // keeping it inside (a, b)
                        let mut step = (&b - &a) / rat_int(4);
                        loop {
                            let cand = &mid + &step;
                            if sf.sign_at(&cand) != 0 {
                                mid = cand;
                                break;
                            }
                            step = step / rat_int(2);
                        }
                    }
                    stack.push((a, mid.clone()));
                    stack.push((mid, b));
                }
            }
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }
}

/// A Sturm sequence; supports exact root counting on intervals.
pub struct SturmSequence {
    chain: Vec<QPoly>,
}

impl SturmSequence {
    /// Sign variations of the chain at `x`.
    pub fn variations(&self, x: &Rat) -> usize {
        let mut prev = 0;
        let mut count = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s != 0 {
                if prev != 0 && s != prev {
                    count += 1;
                }
                prev = s;
            }
        }
        count
    }

    /// Number of distinct real roots in `(a, b]`; requires `a <= b`.
    pub fn count_half_open(&self, a: &Rat, b: &Rat) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }

    /// Number of distinct real roots in the open interval `(a, b)`,
    /// assuming neither endpoint is a root of the first chain element.
    pub fn count_roots(&self, a: &Rat, b: &Rat) -> usize {
        if a >= b {
            return 0;
        }
        self.count_half_open(a, b)
    }
}
