//! Univariate polynomials with algebraic-number coefficients.
//!
//! These arise as the coefficient polynomials of polynomial-exponential
//! functions and as the terminal element of the derivative chain used in
//! root isolation. Coefficients live in a field, so division, gcd and
//! Sturm sequences all work exactly.

use crate::algebra::AlgebraicNumber;
use crate::qpoly::QPoly;
use crate::rational::{rat_int, Rat};

/// A dense polynomial over [`AlgebraicNumber`], lowest degree first.
#[derive(Clone, Debug)]
pub struct AlgPoly {
    coeffs: Vec<AlgebraicNumber>,
}

impl AlgPoly {
    pub fn new(mut coeffs: Vec<AlgebraicNumber>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        AlgPoly { coeffs }
    }

    pub fn zero() -> Self {
        AlgPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        AlgPoly::constant(AlgebraicNumber::one())
    }

    pub fn constant(c: AlgebraicNumber) -> Self {
        AlgPoly::new(vec![c])
    }

    pub fn from_qpoly(p: &QPoly) -> Self {
        AlgPoly::new(
            p.coeffs()
                .iter()
                .map(|c| AlgebraicNumber::from_rational(c.clone()))
                .collect(),
        )
    }

    pub fn monomial(c: AlgebraicNumber, k: usize) -> Self {
        let mut coeffs = vec![AlgebraicNumber::zero(); k + 1];
        coeffs[k] = c;
        AlgPoly::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[AlgebraicNumber] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> AlgebraicNumber {
        self.coeffs.get(k).cloned().unwrap_or_else(AlgebraicNumber::zero)
    }

    pub fn leading(&self) -> AlgebraicNumber {
        self.coeffs.last().cloned().unwrap_or_else(AlgebraicNumber::zero)
    }

    pub fn add(&self, other: &AlgPoly) -> AlgPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k).add(&other.coeff(k)));
        }
        AlgPoly::new(out)
    }

    pub fn sub(&self, other: &AlgPoly) -> AlgPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> AlgPoly {
        AlgPoly::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn mul(&self, other: &AlgPoly) -> AlgPoly {
        if self.is_zero() || other.is_zero() {
            return AlgPoly::zero();
        }
        let mut out =
            vec![AlgebraicNumber::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        AlgPoly::new(out)
    }

    pub fn scale(&self, s: &AlgebraicNumber) -> AlgPoly {
        AlgPoly::new(self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn scale_rat(&self, s: &Rat) -> AlgPoly {
        AlgPoly::new(self.coeffs.iter().map(|c| c.scale(s)).collect())
    }

    pub fn derivative(&self) -> AlgPoly {
        if self.coeffs.len() <= 1 {
            return AlgPoly::zero();
        }
        AlgPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| c.scale(&rat_int(k as i64 + 1)))
                .collect(),
        )
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rat(&self, x: &Rat) -> AlgebraicNumber {
        let mut acc = AlgebraicNumber::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(x).add(c);
        }
        acc
    }

    /// Rigorous enclosure of `p(z)` for `z` in a complex ball; `eps`
    /// bounds the coefficient enclosure radii.
    pub fn eval_cball(&self, z: &crate::rational::CBall, eps: &Rat) -> crate::rational::CBall {
        let mut acc = crate::rational::CBall::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(&c.ball(eps));
        }
        acc
    }

    /// Coefficient-wise complex conjugate.
    pub fn conj(&self) -> AlgPoly {
        AlgPoly::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_real())
    }

    /// Exact sign at a rational point; the value must be real.
    pub fn sign_at(&self, x: &Rat) -> i32 {
        let v = self.eval_rat(x);
        if v.is_zero() {
            0
        } else {
            v.sign_real()
        }
    }

    pub fn monic(&self) -> AlgPoly {
        if self.is_zero() {
            return AlgPoly::zero();
        }
        let inv = self.leading().inv();
        self.scale(&inv)
    }

    pub fn divrem(&self, divisor: &AlgPoly) -> (AlgPoly, AlgPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.degree() < divisor.degree() || self.is_zero() {
            return (AlgPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dq = divisor.degree();
        let lead_inv = divisor.leading().inv();
        let mut quot = vec![AlgebraicNumber::zero(); rem.len() - dq];
        for k in (dq..rem.len()).rev() {
            let c = rem[k].mul(&lead_inv);
            if !c.is_zero() {
                for j in 0..dq {
                    rem[k - dq + j] = rem[k - dq + j].sub(&c.mul(&divisor.coeffs[j]));
                }
            }
            rem[k] = AlgebraicNumber::zero();
            quot[k - dq] = c;
        }
        (AlgPoly::new(quot), AlgPoly::new(rem))
    }

    /// Monic greatest common divisor over the coefficient field.
    pub fn gcd(&self, other: &AlgPoly) -> AlgPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn squarefree_part(&self) -> AlgPoly {
        if self.degree() == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.clone();
        }
        self.divrem(&g).0
    }

    /// Isolating intervals for the real roots inside the open window
    /// `(lo, hi)`, lowest root first. Coefficients must be real. Returned
    /// interval endpoints are never roots, except possibly `lo`/`hi`
    /// themselves, and each interval holds exactly one root strictly
    /// inside it.
    pub fn isolate_in_window(&self, lo: &Rat, hi: &Rat) -> Vec<(Rat, Rat)> {
        assert!(!self.is_zero(), "cannot isolate roots of the zero polynomial");
        assert!(lo < hi);
        let sf = self.squarefree_part();
        if sf.degree() == 0 {
            return vec![];
        }
        let sturm = AlgSturm::new(&sf);
        let count_open = |a: &Rat, b: &Rat| -> usize {
            let half = sturm.count_half_open(a, b);
            if sf.sign_at(b) == 0 {
                half.saturating_sub(1)
            } else {
                half
            }
        };
        let mut out = Vec::new();
        let mut stack = vec![(lo.clone(), hi.clone())];
        while let Some((a, b)) = stack.pop() {
            match count_open(&a, &b) {
                0 => {}
                1 => out.push((a, b)),
                _ => {
                    let mut mid = (&a + &b) / rat_int(2);
                    if sf.sign_at(&mid) == 0 {
                        // nudge the split point off a root, staying inside
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

/// Sturm sequence over algebraic coefficients.
struct AlgSturm {
    chain: Vec<AlgPoly>,
}

impl AlgSturm {
    fn new(p: &AlgPoly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
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
            // monic negation keeps the sign-variation property and stops
            // coefficient blow-up in the field representation
            chain.push(r.neg().monic());
        }
        AlgSturm { chain }
    }

    fn variations(&self, x: &Rat) -> usize {
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

    /// Distinct real roots in `(a, b]`.
    fn count_half_open(&self, a: &Rat, b: &Rat) -> usize {
        if a >= b {
            return 0;
        }
        self.variations(a).saturating_sub(self.variations(b))
    }
}

impl PartialEq for AlgPoly {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};
    use crate::rational::rat;

    fn alg(n: i64) -> AlgebraicNumber {
        AlgebraicNumber::from_integer(n)
    }

    fn sqrt2() -> AlgebraicNumber {
        AlgebraicNumber::roots_of(&QPoly::new(vec![rat_int(-2), rat_int(0), rat_int(1)]))
            .into_iter()
            .find(|r| r.sign_real() > 0)
            .unwrap()
    }

    #[test]
    fn divrem_roundtrip() {
        // (x^2 - 2) = (x - sqrt2)(x + sqrt2)
        let p = AlgPoly::new(vec![alg(-2), alg(0), alg(1)]);
        let d = AlgPoly::new(vec![sqrt2().neg(), alg(1)]);
        let (q, r) = p.divrem(&d);
        assert!(r.is_zero());
        assert!(q.mul(&d).sub(&p).is_zero());
    }

    #[test]
    fn gcd_of_shared_factor() {
        let lin = AlgPoly::new(vec![sqrt2().neg(), alg(1)]);
        let a = lin.mul(&AlgPoly::new(vec![alg(1), alg(1)]));
        let b = lin.mul(&AlgPoly::new(vec![alg(3), alg(1)]));
        let g = a.gcd(&b);
        assert_eq!(g.degree(), 1);
        assert!(g.sub(&lin.monic()).is_zero());
    }

    #[test]
    fn isolates_algebraic_roots_in_window() {
        // roots at sqrt2 and 3, window (0, 10)
        let p = AlgPoly::new(vec![sqrt2().neg(), alg(1)])
            .mul(&AlgPoly::new(vec![alg(-3), alg(1)]));
        let ivs = p.isolate_in_window(&Rat::zero(), &rat_int(10));
        assert_eq!(ivs.len(), 2);
        let r0 = crate::rational::rat_to_f64(&ivs[0].0);
        let r0b = crate::rational::rat_to_f64(&ivs[0].1);
        assert!(r0 < 1.4142135 && 1.4142136 < r0b);
        assert!(ivs[1].0 < rat_int(3) && rat_int(3) < ivs[1].1);
    }

    #[test]
    fn squarefree_part_drops_multiplicity() {
        let lin = AlgPoly::new(vec![alg(-1), alg(1)]);
        let p = lin.mul(&lin).mul(&AlgPoly::new(vec![alg(1), alg(1)]));
        let sf = p.squarefree_part();
        assert_eq!(sf.degree(), 2);
        assert_eq!(sf.sign_at(&rat_int(1)), 0);
        assert_eq!(sf.sign_at(&rat(-1, 1)), 0);
    }

    #[test]
    fn window_isolation_handles_root_at_endpoint() {
        // roots 0 and 1/2; window (0, 1) must report only 1/2
        let p = AlgPoly::new(vec![alg(0), alg(1)])
            .mul(&AlgPoly::new(vec![AlgebraicNumber::from_rational(rat(-1, 2)), alg(1)]));
        let ivs = p.isolate_in_window(&Rat::zero(), &Rat::one());
        assert_eq!(ivs.len(), 1);
        assert!(ivs[0].0 < rat(1, 2) && rat(1, 2) < ivs[0].1);
    }
}
