//! Number-field arithmetic with designated complex embeddings.
//!
//! A [`FieldCtx`] is ℚ[x]/(m) for a monic irreducible `m`, together with
//! one isolated complex root of `m` that fixes the embedding into ℂ.
//! Elements are residue polynomials; arithmetic is exact, and every
//! element can be enclosed in an arbitrarily small complex ball by
//! refining the root isolation. Composita of two fields are built with a
//! primitive element `γ + c·ρ`, which lets numbers from different fields
//! interoperate.

use crate::croots::{isolate_complex_roots, ComplexRoot};
use crate::qpoly::QPoly;
use crate::rational::{rat_int, CBall, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::sync::{Arc, Mutex, OnceLock};

pub struct FieldCtx {
    modulus: QPoly,
    root: Mutex<ComplexRoot>,
    /// conj(γ) expressed as an element, if the field is closed under
    /// complex conjugation and the closure has been computed.
    conj_gen: OnceLock<QPoly>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FieldCtx(deg {}, modulus {:?})", self.degree(), self.modulus)
    }
}

impl FieldCtx {
    /// Builds a field from a monic irreducible modulus and one of its
    /// isolated roots. Irreducibility is the caller's responsibility and
    /// is what makes division total.
    pub fn new(modulus: QPoly, root: ComplexRoot) -> Arc<FieldCtx> {
        debug_assert!(modulus.leading().is_one());
        debug_assert!(modulus.degree() >= 1);
        Arc::new(FieldCtx { modulus, root: Mutex::new(root), conj_gen: OnceLock::new() })
    }

    pub fn modulus(&self) -> &QPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree()
    }

    /// A ball around the designated root with radius at most `eps`.
    pub fn root_ball(&self, eps: &Rat) -> CBall {
        let mut root = self.root.lock().unwrap();
        root.refine_to(eps);
        root.ball()
    }

    pub fn set_conj_gen(&self, conj: QPoly) {
        let _ = self.conj_gen.set(conj);
    }

    pub fn conj_gen(&self) -> Option<&QPoly> {
        self.conj_gen.get()
    }

    pub fn reduce(&self, p: &QPoly) -> QPoly {
        p.divrem(&self.modulus).1
    }

    pub fn mul(&self, a: &QPoly, b: &QPoly) -> QPoly {
        self.reduce(&a.mul(b))
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: &QPoly) -> QPoly {
        assert!(!a.is_zero(), "division by zero field element");
        let (g, u, _) = a.xgcd(&self.modulus);
        assert!(
            g.degree() == 0 && !g.is_zero(),
            "element not invertible; modulus is not irreducible"
        );
        self.reduce(&u.scale(&(Rat::one() / g.coeff(0))))
    }

    pub fn div(&self, a: &QPoly, b: &QPoly) -> QPoly {
        self.mul(a, &self.inv(b))
    }

    /// Evaluates a rational polynomial at an element.
    pub fn eval_poly(&self, p: &QPoly, at: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for c in p.coeffs().iter().rev() {
            acc = self.mul(&acc, at).add(&QPoly::constant(c.clone()));
        }
        self.reduce(&acc)
    }

    /// A complex ball of radius at most `eps` around the value of the
    /// element `p(γ)`.
    pub fn elem_ball(&self, p: &QPoly, eps: &Rat) -> CBall {
        let mut root_eps = eps.clone();
        loop {
            let ball = self.root_ball(&root_eps);
            let v = p.eval_ball(&ball).round(256);
            if v.rad <= *eps {
                return v;
            }
            root_eps = root_eps / rat_int(16);
        }
    }

    /// Minimal polynomial (monic, irreducible) of the element `p(γ)`,
    /// via the first linear dependency among its powers.
    pub fn minimal_poly(&self, p: &QPoly) -> QPoly {
        let d = self.degree();
        let mut powers: Vec<Vec<Rat>> = Vec::with_capacity(d + 1);
        let mut cur = QPoly::one();
        for k in 0..=d {
            powers.push(coeff_vector(&cur, d));
            if let Some(dep) = linear_dependency(&powers) {
                // dep expresses powers[k] as a combination of the earlier
                // powers: minpoly = x^k - sum dep[i] x^i
                let mut coeffs = dep;
                coeffs.iter_mut().for_each(|c| *c = -c.clone());
                coeffs.push(Rat::one());
                return QPoly::new(coeffs);
            }
            cur = self.mul(&cur, p);
            let _ = k;
        }
        unreachable!("an element of a degree-{d} field has degree at most {d}");
    }
}

fn coeff_vector(p: &QPoly, d: usize) -> Vec<Rat> {
    (0..d).map(|k| p.coeff(k)).collect()
}

/// If the last vector is a linear combination of the preceding ones,
/// returns the coefficients of that combination.
fn linear_dependency(vectors: &[Vec<Rat>]) -> Option<Vec<Rat>> {
    let n = vectors.len();
    if n == 0 {
        return None;
    }
    let d = vectors[0].len();
    // solve sum_{i<n-1} c_i v_i = v_{n-1} by Gaussian elimination on the
    // transposed system
    let cols = n - 1;
    let mut m: Vec<Vec<Rat>> = (0..d)
        .map(|r| {
            let mut row: Vec<Rat> = (0..cols).map(|c| vectors[c][r].clone()).collect();
            row.push(vectors[cols][r].clone());
            row
        })
        .collect();
    let mut pivot_rows = Vec::new();
    let mut r0 = 0;
    for c in 0..cols {
        let Some(pr) = (r0..d).find(|&r| !m[r][c].is_zero()) else {
            pivot_rows.push(None);
            continue;
        };
        m.swap(r0, pr);
        let inv = Rat::one() / m[r0][c].clone();
        for v in m[r0].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..d {
            if r != r0 && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..=cols {
                    let delta = &f * &m[r0][k];
                    m[r][k] -= delta;
                }
            }
        }
        pivot_rows.push(Some(r0));
        r0 += 1;
    }
    // inconsistent => not in span
    for r in r0..d {
        if !m[r][cols].is_zero() {
            return None;
        }
    }
    let mut sol = vec![Rat::zero(); cols];
    for (c, pr) in pivot_rows.iter().enumerate() {
        if let Some(r) = pr {
            sol[c] = m[*r][cols].clone();
        }
    }
    Some(sol)
}

/// Finds the unique root of `poly` whose location matches the enclosure
/// produced by `approx(eps)`; `approx` must enclose an actual root.
pub fn locate_root(poly: &QPoly, mut approx: impl FnMut(&Rat) -> CBall) -> ComplexRoot {
    let mut roots = isolate_complex_roots(poly);
    let mut eps = Rat::new(BigInt::one(), BigInt::from(1024));
    loop {
        let target = approx(&eps);
        for r in roots.iter_mut() {
            r.refine_to(&eps);
        }
        let hits: Vec<usize> = roots
            .iter()
            .enumerate()
            .filter(|(_, r)| balls_intersect(&r.ball(), &target))
            .map(|(i, _)| i)
            .collect();
        if hits.len() == 1 {
            return roots.swap_remove(hits[0]);
        }
        assert!(!hits.is_empty(), "no root of {poly:?} matches the enclosure");
        eps = eps / rat_int(64);
    }
}

fn balls_intersect(a: &CBall, b: &CBall) -> bool {
    let dx = &a.re - &b.re;
    let dy = &a.im - &b.im;
    let r = &a.rad + &b.rad;
    dx.clone() * &dx + dy.clone() * &dy <= r.clone() * &r
}

/// Compositum of two fields: a field containing images of both
/// generators. Returns the new field and the residue polynomials
/// representing the old generators inside it.
pub fn compositum(a: &Arc<FieldCtx>, b: &Arc<FieldCtx>) -> (Arc<FieldCtx>, QPoly, QPoly) {
    let (ctx, ga, gb, _) = compositum_with_multiplier(a, b);
    (ctx, ga, gb)
}

/// Like [`compositum`], additionally returning the rational `c` such
/// that the new generator equals `image(γ_a) + c · image(γ_b)` (with
/// `c = 0` when one side embeds trivially).
pub fn compositum_with_multiplier(
    a: &Arc<FieldCtx>,
    b: &Arc<FieldCtx>,
) -> (Arc<FieldCtx>, QPoly, QPoly, Rat) {
    let x = QPoly::monomial(Rat::one(), 1);
    if Arc::ptr_eq(a, b) {
        return (a.clone(), x.clone(), x, Rat::zero());
    }
    if a.degree() == 1 {
        let ga = QPoly::constant(-a.modulus().coeff(0));
        return (b.clone(), ga, x, Rat::one());
    }
    if b.degree() == 1 {
        let gb = QPoly::constant(-b.modulus().coeff(0));
        return (a.clone(), x, gb, Rat::zero());
    }
    let ma = a.modulus().clone();
    let mb = b.modulus().clone();
    for c_num in 1i64.. {
        let c = rat_int(c_num);
        // annihilator of γ + c·ρ: Res_y(ma(y), n(x - y)) where n is the
        // monic minimal polynomial of c·ρ
        let n = mb
            .compose_linear(&(Rat::one() / &c), &Rat::zero())
            .monic();
        let ann = resultant_in_x(&ma, &n);
        if !ann.is_squarefree() {
            continue;
        }
        // pick the irreducible factor vanishing at γ + c·ρ
        let factors = crate::factor::factor_squarefree(&ann);
        let approx = |eps: &Rat| {
            let ga = a.root_ball(eps);
            let gb = b.root_ball(eps);
            ga.add(&gb.scale(&c)).round(256)
        };
        let modulus = pick_vanishing_factor(&factors, approx);
        let root = locate_root(&modulus, approx);
        let ctx = FieldCtx::new(modulus.clone(), root);
        // recover ρ as the unique common root of mb(t) and ma(γ' - c t):
        // their gcd over the new field is linear
        let gamma_prime = kpoly_from_qpoly(&x);
        let lhs = kpoly_from_rat_poly(&mb);
        let shift = vec![QPoly::monomial(Rat::one(), 1), QPoly::constant(-c.clone())]; // γ' - c·t
        let rhs = kpoly_compose(&ctx, &ma, &shift);
        let _ = gamma_prime;
        let g = kpoly_gcd(&ctx, &lhs, &rhs);
        assert_eq!(g.len(), 2, "expected a linear gcd in the compositum");
        let gb = ctx.div(&g[0], &g[1]);
        let gb = ctx.reduce(&gb.neg());
        let ga = ctx.reduce(&x.sub(&gb.scale(&c)));
        debug_assert!(ctx.eval_poly(&ma, &ga).is_zero());
        debug_assert!(ctx.eval_poly(&mb, &gb).is_zero());
        return (ctx, ga, gb, c);
    }
    unreachable!()
}

/// Among irreducible candidates, the one vanishing at the enclosed value.
fn pick_vanishing_factor(factors: &[QPoly], mut approx: impl FnMut(&Rat) -> CBall) -> QPoly {
    let mut eps = Rat::new(BigInt::one(), BigInt::from(1024));
    loop {
        let ball = approx(&eps);
        let alive: Vec<&QPoly> = factors
            .iter()
            .filter(|f| !f.eval_ball(&ball).excludes_zero())
            .collect();
        if alive.len() == 1 {
            return alive[0].clone();
        }
        assert!(!alive.is_empty(), "no factor vanishes at the enclosed value");
        eps = eps / rat_int(64);
    }
}

/// `Res_y(f(y), g(x - y))` as a polynomial in `x`, via interpolation.
fn resultant_in_x(f: &QPoly, g: &QPoly) -> QPoly {
    let bound = f.degree() * g.degree();
    let xs: Vec<Rat> = (0..=bound as i64).map(rat_int).collect();
    let ys: Vec<Rat> = xs
        .iter()
        .map(|x| f.resultant(&g.compose_linear(&rat_int(-1), x)))
        .collect();
    // Lagrange interpolation
    let mut acc = QPoly::zero();
    for (i, yi) in ys.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut num = QPoly::one();
        let mut den = Rat::one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                num = num.mul(&QPoly::linear_root(xj));
                den *= &xs[i] - xj;
            }
        }
        acc = acc.add(&num.scale(&(yi / den)));
    }
    acc.monic()
}

// --- polynomials with coefficients in a field (lowest degree first) ---

type KPoly = Vec<QPoly>;

fn kpoly_trim(mut p: KPoly) -> KPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn kpoly_from_qpoly(x: &QPoly) -> KPoly {
    // the generator as a constant coefficient
    vec![x.clone()]
}

fn kpoly_from_rat_poly(p: &QPoly) -> KPoly {
    p.coeffs().iter().map(|c| QPoly::constant(c.clone())).collect()
}

/// `p(q(t))` where `p` has rational coefficients and `q` has field
/// coefficients.
fn kpoly_compose(ctx: &FieldCtx, p: &QPoly, q: &KPoly) -> KPoly {
    let mut acc: KPoly = vec![];
    for c in p.coeffs().iter().rev() {
        acc = kpoly_mul(ctx, &acc, q);
        if acc.is_empty() {
            acc.push(QPoly::constant(c.clone()));
        } else {
            acc[0] = acc[0].add(&QPoly::constant(c.clone()));
        }
    }
    kpoly_trim(acc)
}

fn kpoly_mul(ctx: &FieldCtx, a: &KPoly, b: &KPoly) -> KPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![QPoly::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&ctx.mul(ai, bj));
        }
    }
    kpoly_trim(out)
}

fn kpoly_divrem(ctx: &FieldCtx, a: &KPoly, b: &KPoly) -> KPoly {
    // remainder only
    assert!(!b.is_empty());
    let mut rem = a.clone();
    let lc_inv = ctx.inv(b.last().unwrap());
    while rem.len() >= b.len() {
        let k = rem.len() - 1;
        let q = ctx.mul(&rem[k], &lc_inv);
        if !q.is_zero() {
            let shift = k - (b.len() - 1);
            for (j, bj) in b.iter().enumerate() {
                let delta = ctx.mul(&q, bj);
                rem[shift + j] = rem[shift + j].sub(&delta);
            }
        }
        rem.pop();
        rem = kpoly_trim(rem);
        if rem.len() < b.len() {
            break;
        }
    }
    rem
}

fn kpoly_gcd(ctx: &FieldCtx, a: &KPoly, b: &KPoly) -> KPoly {
    let mut f = kpoly_trim(a.clone());
    let mut g = kpoly_trim(b.clone());
    while !g.is_empty() {
        let r = kpoly_divrem(ctx, &f, &g);
        f = g;
        g = r;
    }
    // normalize monic
    if let Some(lc) = f.last().cloned() {
        let inv = ctx.inv(&lc);
        for c in f.iter_mut() {
            *c = ctx.mul(c, &inv);
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RealAlg;
    use crate::rational::{rat, rat_to_f64};

    fn sqrt_field(n: i64) -> Arc<FieldCtx> {
        let m = QPoly::new(vec![rat_int(-n), Rat::zero(), Rat::one()]);
        let root = ComplexRoot {
            re: RealAlg::new(m.clone(), Rat::zero(), rat_int(n)),
            im: RealAlg::zero(),
        };
        FieldCtx::new(m, root)
    }

    #[test]
    fn inverse_in_quadratic_field() {
        // 1 / (1 + sqrt 2) = sqrt 2 - 1
        let k = sqrt_field(2);
        let a = QPoly::new(vec![Rat::one(), Rat::one()]);
        let inv = k.inv(&a);
        assert_eq!(inv, QPoly::new(vec![rat_int(-1), Rat::one()]));
        assert_eq!(k.mul(&a, &inv), QPoly::one());
    }

    #[test]
    fn elem_ball_tracks_value() {
        let k = sqrt_field(2);
        // value: 3 - 2*sqrt(2)
        let p = QPoly::new(vec![rat_int(3), rat_int(-2)]);
        let b = k.elem_ball(&p, &rat(1, 1_000_000));
        let expect = 3.0 - 2.0 * 2f64.sqrt();
        assert!((rat_to_f64(&b.re) - expect).abs() < 1e-5);
        assert!(rat_to_f64(&b.im).abs() < 1e-5);
    }

    #[test]
    fn minimal_poly_of_shifted_generator() {
        let k = sqrt_field(2);
        // minpoly of 1 + sqrt(2) is x^2 - 2x - 1
        let p = QPoly::new(vec![Rat::one(), Rat::one()]);
        let m = k.minimal_poly(&p);
        assert_eq!(m, QPoly::new(vec![rat_int(-1), rat_int(-2), Rat::one()]));
        // minpoly of a rational element is linear
        let m2 = k.minimal_poly(&QPoly::constant(rat(7, 2)));
        assert_eq!(m2, QPoly::linear_root(&rat(7, 2)));
    }

    #[test]
    fn compositum_of_sqrt2_and_sqrt3() {
        let k2 = sqrt_field(2);
        let k3 = sqrt_field(3);
        let (k, g2, g3) = compositum(&k2, &k3);
        assert_eq!(k.degree(), 4);
        // images satisfy their minimal polynomials
        assert!(k.eval_poly(k2.modulus(), &g2).is_zero());
        assert!(k.eval_poly(k3.modulus(), &g3).is_zero());
        // numeric check: g2 ≈ sqrt 2, g3 ≈ sqrt 3
        let b2 = k.elem_ball(&g2, &rat(1, 1 << 20));
        let b3 = k.elem_ball(&g3, &rat(1, 1 << 20));
        assert!((rat_to_f64(&b2.re) - 2f64.sqrt()).abs() < 1e-5);
        assert!((rat_to_f64(&b3.re) - 3f64.sqrt()).abs() < 1e-5);
        // product sqrt6 has degree 2 minpoly x^2 - 6
        let prod = k.mul(&g2, &g3);
        let m = k.minimal_poly(&prod);
        assert_eq!(m, QPoly::new(vec![rat_int(-6), Rat::zero(), Rat::one()]));
    }

    #[test]
    fn compositum_with_rational_field_is_identity() {
        let k2 = sqrt_field(2);
        let k1 = FieldCtx::new(
            QPoly::linear_root(&rat(1, 2)),
            ComplexRoot { re: RealAlg::from_rational(rat(1, 2)), im: RealAlg::zero() },
        );
        let (k, ga, gb) = compositum(&k2, &k1);
        assert!(Arc::ptr_eq(&k, &k2));
        assert_eq!(ga, QPoly::monomial(Rat::one(), 1));
        assert_eq!(gb, QPoly::constant(rat(1, 2)));
    }

    #[test]
    fn compositum_of_complex_quadratics() {
        // Q(i) and Q(sqrt(-3))
        let mi = QPoly::new(vec![Rat::one(), Rat::zero(), Rat::one()]);
        let i_root = ComplexRoot {
            re: RealAlg::zero(),
            im: RealAlg::new(
                QPoly::new(vec![rat_int(-1), Rat::zero(), Rat::one()]),
                Rat::zero(),
                rat_int(2),
            ),
        };
        let ki = FieldCtx::new(mi.clone(), i_root);
        let m3 = QPoly::new(vec![rat_int(3), Rat::zero(), Rat::one()]);
        let r3 = ComplexRoot {
            re: RealAlg::zero(),
            im: RealAlg::new(
                QPoly::new(vec![rat_int(-3), Rat::zero(), Rat::one()]),
                Rat::one(),
                rat_int(3),
            ),
        };
        let k3 = FieldCtx::new(m3.clone(), r3);
        let (k, gi, g3) = compositum(&ki, &k3);
        assert_eq!(k.degree(), 4);
        assert!(k.eval_poly(&mi, &gi).is_zero());
        assert!(k.eval_poly(&m3, &g3).is_zero());
    }
}
