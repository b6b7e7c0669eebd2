//! Exact complex algebraic numbers.
//!
//! An [`AlgebraicNumber`] is either a rational or an element of a number
//! field with a designated embedding. All ring operations, equality and
//! conjugation are exact; numbers from different fields are combined by
//! moving both into a compositum field first.

use crate::algebra::field::{compositum, locate_root, FieldCtx};
use crate::algebra::RealAlg;
use crate::croots::{isolate_complex_roots, ComplexRoot};
use crate::qpoly::QPoly;
use crate::rational::{rat_int, rat_to_f64, CBall, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::sync::Arc;

#[derive(Clone)]
pub struct AlgebraicNumber {
    repr: Repr,
}

#[derive(Clone)]
enum Repr {
    Rat(Rat),
    Elem(Arc<FieldCtx>, QPoly),
}

impl std::fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.repr {
            Repr::Rat(r) => write!(f, "{r}"),
            Repr::Elem(ctx, p) => {
                let b = ctx.elem_ball(p, &Rat::new(BigInt::one(), BigInt::one() << 40));
                write!(f, "≈{}+{}i", rat_to_f64(&b.re), rat_to_f64(&b.im))
            }
        }
    }
}

impl AlgebraicNumber {
    pub fn from_rational(x: Rat) -> Self {
        AlgebraicNumber { repr: Repr::Rat(x) }
    }

    pub fn from_integer(n: i64) -> Self {
        AlgebraicNumber::from_rational(rat_int(n))
    }

    pub fn zero() -> Self {
        AlgebraicNumber::from_integer(0)
    }

    pub fn one() -> Self {
        AlgebraicNumber::from_integer(1)
    }

    pub(crate) fn from_field_elem(ctx: Arc<FieldCtx>, poly: QPoly) -> Self {
        let poly = ctx.reduce(&poly);
        if poly.is_constant() {
            return AlgebraicNumber::from_rational(poly.coeff(0));
        }
        AlgebraicNumber { repr: Repr::Elem(ctx, poly) }
    }

    pub(crate) fn field_parts(&self) -> Option<(&Arc<FieldCtx>, &QPoly)> {
        match &self.repr {
            Repr::Rat(_) => None,
            Repr::Elem(ctx, p) => Some((ctx, p)),
        }
    }

    /// All complex roots of a rational polynomial, as algebraic numbers.
    pub fn roots_of(poly: &QPoly) -> Vec<AlgebraicNumber> {
        let mut out = Vec::new();
        for factor in crate::factor::factor_squarefree(&poly.squarefree_part()) {
            if factor.degree() == 1 {
                out.push(AlgebraicNumber::from_rational(-factor.coeff(0)));
                continue;
            }
            for root in isolate_complex_roots(&factor) {
                let ctx = FieldCtx::new(factor.clone(), root);
                out.push(AlgebraicNumber {
                    repr: Repr::Elem(ctx, QPoly::monomial(Rat::one(), 1)),
                });
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rat(r) => r.is_zero(),
            Repr::Elem(_, p) => p.is_zero(),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.repr, Repr::Rat(_))
    }

    pub fn as_rational(&self) -> Option<Rat> {
        match &self.repr {
            Repr::Rat(r) => Some(r.clone()),
            Repr::Elem(..) => None,
        }
    }

    /// A complex ball of radius at most `eps` containing the value.
    pub fn ball(&self, eps: &Rat) -> CBall {
        match &self.repr {
            Repr::Rat(r) => CBall::real(r.clone()),
            Repr::Elem(ctx, p) => ctx.elem_ball(p, eps),
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        let b = self.ball(&Rat::new(BigInt::one(), BigInt::one() << 60));
        (rat_to_f64(&b.re), rat_to_f64(&b.im))
    }

    /// Monic irreducible minimal polynomial over ℚ.
    pub fn minimal_poly(&self) -> QPoly {
        match &self.repr {
            Repr::Rat(r) => QPoly::linear_root(r),
            Repr::Elem(ctx, p) => ctx.minimal_poly(p),
        }
    }

    /// The value as an isolated root of its minimal polynomial, with its
    /// real and imaginary parts as real algebraic numbers.
    pub fn canonical_root(&self) -> ComplexRoot {
        match &self.repr {
            Repr::Rat(r) => ComplexRoot {
                re: RealAlg::from_rational(r.clone()),
                im: RealAlg::zero(),
            },
            Repr::Elem(ctx, p) => {
                let m = ctx.minimal_poly(p);
                let ctx = ctx.clone();
                let p = p.clone();
                locate_root(&m, move |eps| ctx.elem_ball(&p, eps))
            }
        }
    }

    pub fn re(&self) -> RealAlg {
        self.canonical_root().re.reduce()
    }

    pub fn im(&self) -> RealAlg {
        self.canonical_root().im.reduce()
    }

    pub fn is_real(&self) -> bool {
        match &self.repr {
            Repr::Rat(_) => true,
            Repr::Elem(ctx, p) => match ctx.conj_gen() {
                Some(cg) => ctx.eval_poly(p, cg) == *p,
                None => self.canonical_root().im.is_zero(),
            },
        }
    }

    /// The value as a real algebraic number, if it is real.
    pub fn to_real(&self) -> Option<RealAlg> {
        match &self.repr {
            Repr::Rat(r) => Some(RealAlg::from_rational(r.clone())),
            Repr::Elem(..) => {
                let root = self.canonical_root();
                root.im.is_zero().then_some(root.re)
            }
        }
    }

    /// Complex conjugate.
    pub fn conj(&self) -> AlgebraicNumber {
        match &self.repr {
            Repr::Rat(_) => self.clone(),
            Repr::Elem(ctx, p) => {
                if let Some(cg) = ctx.conj_gen() {
                    return AlgebraicNumber::from_field_elem(ctx.clone(), ctx.eval_poly(p, cg));
                }
                let m = ctx.minimal_poly(p);
                if m.degree() == 1 {
                    return AlgebraicNumber::from_rational(-m.coeff(0));
                }
                let root = self.canonical_root().conj();
                let new_ctx = FieldCtx::new(m, root);
                AlgebraicNumber {
                    repr: Repr::Elem(new_ctx, QPoly::monomial(Rat::one(), 1)),
                }
            }
        }
    }

    pub fn neg(&self) -> AlgebraicNumber {
        match &self.repr {
            Repr::Rat(r) => AlgebraicNumber::from_rational(-r.clone()),
            Repr::Elem(ctx, p) => AlgebraicNumber::from_field_elem(ctx.clone(), p.neg()),
        }
    }

    pub fn inv(&self) -> AlgebraicNumber {
        match &self.repr {
            Repr::Rat(r) => {
                assert!(!r.is_zero(), "division by zero");
                AlgebraicNumber::from_rational(Rat::one() / r)
            }
            Repr::Elem(ctx, p) => AlgebraicNumber::from_field_elem(ctx.clone(), ctx.inv(p)),
        }
    }

    pub fn add(&self, other: &AlgebraicNumber) -> AlgebraicNumber {
        self.binop(other, |ctx, a, b| ctx.reduce(&a.add(b)), |a, b| a + b)
    }

    pub fn sub(&self, other: &AlgebraicNumber) -> AlgebraicNumber {
        self.binop(other, |ctx, a, b| ctx.reduce(&a.sub(b)), |a, b| a - b)
    }

    pub fn mul(&self, other: &AlgebraicNumber) -> AlgebraicNumber {
        self.binop(other, |ctx, a, b| ctx.mul(a, b), |a, b| a * b)
    }

    pub fn div(&self, other: &AlgebraicNumber) -> AlgebraicNumber {
        self.mul(&other.inv())
    }

    pub fn scale(&self, s: &Rat) -> AlgebraicNumber {
        match &self.repr {
            Repr::Rat(r) => AlgebraicNumber::from_rational(r * s),
            Repr::Elem(ctx, p) => AlgebraicNumber::from_field_elem(ctx.clone(), p.scale(s)),
        }
    }

    fn binop(
        &self,
        other: &AlgebraicNumber,
        elem_op: impl Fn(&FieldCtx, &QPoly, &QPoly) -> QPoly,
        rat_op: impl Fn(&Rat, &Rat) -> Rat,
    ) -> AlgebraicNumber {
        match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => AlgebraicNumber::from_rational(rat_op(a, b)),
            (Repr::Elem(ctx, p), Repr::Rat(b)) => {
                let q = QPoly::constant(b.clone());
                AlgebraicNumber::from_field_elem(ctx.clone(), elem_op(ctx, p, &q))
            }
            (Repr::Rat(a), Repr::Elem(ctx, q)) => {
                let p = QPoly::constant(a.clone());
                AlgebraicNumber::from_field_elem(ctx.clone(), elem_op(ctx, &p, q))
            }
            (Repr::Elem(c1, p), Repr::Elem(c2, q)) => {
                if Arc::ptr_eq(c1, c2) {
                    return AlgebraicNumber::from_field_elem(c1.clone(), elem_op(c1, p, q));
                }
                let (ctx, g1, g2) = compositum(c1, c2);
                let p2 = ctx.eval_poly(p, &g1);
                let q2 = ctx.eval_poly(q, &g2);
                AlgebraicNumber::from_field_elem(ctx.clone(), elem_op(&ctx, &p2, &q2))
            }
        }
    }

    /// Exact sign, for real values only.
    pub fn sign_real(&self) -> i32 {
        match &self.repr {
            Repr::Rat(r) => crate::rational::rat_sign(r),
            Repr::Elem(ctx, p) => {
                if p.is_zero() {
                    return 0;
                }
                let mut eps = Rat::new(BigInt::one(), BigInt::from(1024));
                loop {
                    let b = ctx.elem_ball(p, &eps);
                    debug_assert!(
                        b.im.abs() <= b.rad.clone() * rat_int(2),
                        "sign_real on a non-real value"
                    );
                    if &b.re - &b.rad > Rat::zero() {
                        return 1;
                    }
                    if &b.re + &b.rad < Rat::zero() {
                        return -1;
                    }
                    eps = eps / rat_int(64);
                }
            }
        }
    }

    /// Exact order comparison, for real values only.
    pub fn cmp_real(&self, other: &AlgebraicNumber) -> Ordering {
        self.sub(other).sign_real().cmp(&0)
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}
impl Eq for AlgebraicNumber {}

/// Representations of `items` over one shared number field.
///
/// Returns the field context (`None` when every item is rational) and one
/// reduced polynomial per item giving its expression in the field
/// generator. Items from different fields are merged via compositums.
pub(crate) fn to_common_field(
    items: &[AlgebraicNumber],
) -> (Option<Arc<FieldCtx>>, Vec<QPoly>) {
    let mut ctx: Option<Arc<FieldCtx>> = None;
    let mut polys: Vec<QPoly> = Vec::new();
    for item in items {
        match item.field_parts() {
            None => polys.push(QPoly::constant(item.as_rational().unwrap())),
            Some((c2, p2)) => match ctx.clone() {
                None => {
                    ctx = Some(c2.clone());
                    polys.push(p2.clone());
                }
                Some(c1) if Arc::ptr_eq(&c1, c2) => polys.push(p2.clone()),
                Some(c1) => {
                    let (nc, g1, g2) = compositum(&c1, c2);
                    for p in polys.iter_mut() {
                        *p = nc.eval_poly(p, &g1);
                    }
                    polys.push(nc.eval_poly(p2, &g2));
                    ctx = Some(nc);
                }
            },
        }
    }
    (ctx, polys)
}

impl std::ops::Add for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn add(self, rhs: &AlgebraicNumber) -> AlgebraicNumber {
        AlgebraicNumber::add(self, rhs)
    }
}
impl std::ops::Sub for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn sub(self, rhs: &AlgebraicNumber) -> AlgebraicNumber {
        AlgebraicNumber::sub(self, rhs)
    }
}
impl std::ops::Mul for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn mul(self, rhs: &AlgebraicNumber) -> AlgebraicNumber {
        AlgebraicNumber::mul(self, rhs)
    }
}
impl std::ops::Neg for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        AlgebraicNumber::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn poly(cs: &[i64]) -> QPoly {
        QPoly::new(cs.iter().map(|&c| rat_int(c)).collect())
    }

    fn sqrt(n: i64) -> AlgebraicNumber {
        AlgebraicNumber::roots_of(&poly(&[-n, 0, 1]))
            .into_iter()
            .find(|r| r.re().sign() > 0)
            .unwrap()
    }

    #[test]
    fn sqrt2_squared_is_two() {
        let s = sqrt(2);
        let two = s.mul(&s);
        assert_eq!(two, AlgebraicNumber::from_integer(2));
        assert!(two.as_rational().is_some());
    }

    #[test]
    fn cross_field_arithmetic() {
        // sqrt2 * sqrt3 = sqrt6
        let p = sqrt(2).mul(&sqrt(3));
        assert_eq!(p.minimal_poly(), poly(&[-6, 0, 1]));
        assert_eq!(p.sign_real(), 1);
        // sqrt2 + sqrt3 has minimal polynomial x^4 - 10x^2 + 1
        let s = sqrt(2).add(&sqrt(3));
        assert_eq!(s.minimal_poly(), poly(&[1, 0, -10, 0, 1]));
    }

    #[test]
    fn complex_roots_and_conjugation() {
        // roots of x^2 + x + 1
        let roots = AlgebraicNumber::roots_of(&poly(&[1, 1, 1]));
        assert_eq!(roots.len(), 2);
        let a = &roots[0];
        assert!(!a.is_real());
        let c = a.conj();
        assert_eq!(&c, &roots[1]);
        // a * conj(a) = norm = 1, a + conj(a) = -1
        assert_eq!(a.mul(&c), AlgebraicNumber::one());
        assert_eq!(a.add(&c), AlgebraicNumber::from_integer(-1));
        // re = -1/2 exactly
        assert_eq!(a.re().as_rational(), Some(rat(-1, 2)));
    }

    #[test]
    fn ordering_of_real_values() {
        let a = sqrt(2);
        let b = sqrt(3);
        assert_eq!(a.cmp_real(&b), Ordering::Less);
        assert_eq!(a.cmp_real(&a.clone()), Ordering::Equal);
        assert_eq!(a.sub(&b).sign_real(), -1);
        let x = AlgebraicNumber::from_rational(rat(3, 2));
        assert_eq!(a.cmp_real(&x), Ordering::Less); // sqrt2 < 1.5
    }

    #[test]
    fn refinement_reaches_requested_radius() {
        let a = sqrt(2).add(&sqrt(3));
        let eps = rat(1, 1 << 30);
        let b = a.ball(&eps);
        assert!(b.rad <= eps);
        let v = 2f64.sqrt() + 3f64.sqrt();
        assert!((rat_to_f64(&b.re) - v).abs() < 1e-8);
    }

    #[test]
    fn division_and_inverse() {
        let a = sqrt(2);
        let inv = a.inv();
        assert_eq!(a.mul(&inv), AlgebraicNumber::one());
        // 1/sqrt2 = sqrt2/2
        assert_eq!(inv, a.scale(&rat(1, 2)));
    }
}
