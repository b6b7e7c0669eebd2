//! Exact isolation of the complex roots of a rational polynomial.
//!
//! Real roots come from Sturm bisection. For the non-real roots we use
//! the classical resultant trick: the real parts of the roots are among
//! the real roots of `R(x) = Res_z(f(z), f(2x - z))`, and twice the
//! imaginary parts are among the real roots of the even/odd parts of
//! `D(iy)` where `D(w) = Res_z(f(z), f(z - w))`. Pairing the candidates
//! gives finitely many boxes; rigorous ball evaluation eliminates the
//! spurious ones until exactly the right number remain.

use crate::algebra::RealAlg;
use crate::qpoly::QPoly;
use crate::rational::{rat, rat_int, CBall, Rat};
use num_traits::{One, Zero};

/// One complex root `re + i*im` of a polynomial, with both coordinates
/// represented exactly as real algebraic numbers.
#[derive(Clone, Debug)]
pub struct ComplexRoot {
    pub re: RealAlg,
    pub im: RealAlg,
}

impl ComplexRoot {
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> ComplexRoot {
        ComplexRoot { re: self.re.clone(), im: self.im.neg() }
    }

    /// A rational ball guaranteed to contain the root.
    pub fn ball(&self) -> CBall {
        enclosing_ball(&self.re, &self.im)
    }

    /// Refines both coordinates until the enclosing ball has radius at
    /// most `eps`.
    pub fn refine_to(&mut self, eps: &Rat) {
        let half = eps.clone() / rat_int(4);
        self.re.refine_to(&half);
        self.im.refine_to(&half);
    }
}

fn enclosing_ball(re: &RealAlg, im: &RealAlg) -> CBall {
    let cx = (re.lo() + re.hi()) / rat_int(2);
    let cy = (im.lo() + im.hi()) / rat_int(2);
    let rad = (re.width() + im.width()) / rat_int(2);
    CBall { re: cx, im: cy, rad }
}

/// Lagrange interpolation through the points `(xs[i], ys[i])`.
fn interpolate(xs: &[Rat], ys: &[Rat]) -> QPoly {
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
    acc
}

/// `Res_z(f(z), f(2x - z))` as a polynomial in `x`, by interpolation.
fn re_resultant(f: &QPoly) -> QPoly {
    let n = f.degree();
    let bound = n * n;
    let xs: Vec<Rat> = (0..=bound as i64).map(rat_int).collect();
    let ys: Vec<Rat> = xs
        .iter()
        .map(|x| {
            let g = f.compose_linear(&rat_int(-1), &(x * rat_int(2)));
            f.resultant(&g)
        })
        .collect();
    interpolate(&xs, &ys)
}

/// `Res_z(f(z), f(z - w))` as a polynomial in `w`, by interpolation.
fn diff_resultant(f: &QPoly) -> QPoly {
    let n = f.degree();
    let bound = n * n;
    let xs: Vec<Rat> = (0..=bound as i64).map(rat_int).collect();
    let ys: Vec<Rat> = xs
        .iter()
        .map(|w| {
            let g = f.compose_linear(&Rat::one(), &-w.clone());
            f.resultant(&g)
        })
        .collect();
    interpolate(&xs, &ys)
}

/// Real and imaginary parts of `d(iy)` as real polynomials in `y`.
fn gaussian_parts(d: &QPoly) -> (QPoly, QPoly) {
    let mut even = vec![Rat::zero(); d.coeffs().len()];
    let mut odd = vec![Rat::zero(); d.coeffs().len()];
    for (k, c) in d.coeffs().iter().enumerate() {
        // i^k cycles 1, i, -1, -i
        match k % 4 {
            0 => even[k] = c.clone(),
            1 => odd[k] = c.clone(),
            2 => even[k] = -c.clone(),
            _ => odd[k] = -c.clone(),
        }
    }
    (QPoly::new(even), QPoly::new(odd))
}

/// Isolates all complex roots of `f` (taken square-free first). Real
/// roots appear with an exactly-zero imaginary part; non-real roots
/// appear in conjugate pairs.
pub fn isolate_complex_roots(f: &QPoly) -> Vec<ComplexRoot> {
    let sf = f.squarefree_part();
    let n = sf.degree();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for (lo, hi) in sf.isolate_real_roots() {
        out.push(ComplexRoot {
            re: RealAlg::new(sf.clone(), lo, hi),
            im: RealAlg::zero(),
        });
    }
    let pairs = (n - out.len()) / 2;
    debug_assert_eq!(out.len() + 2 * pairs, n);
    if pairs == 0 {
        return out;
    }

    // candidate real parts
    let rres = re_resultant(&sf).squarefree_part();
    let re_cands: Vec<RealAlg> = rres
        .isolate_real_roots()
        .into_iter()
        .map(|(lo, hi)| RealAlg::new(rres.clone(), lo, hi))
        .collect();

    // candidate (doubled) imaginary parts, positive only
    let dres = diff_resultant(&sf);
    let (even, odd) = gaussian_parts(&dres);
    let source = if !even.is_zero() && even.degree() > 0 { even } else { odd };
    let source = source.squarefree_part();
    let im_cands: Vec<RealAlg> = source
        .isolate_real_roots()
        .into_iter()
        .map(|(lo, hi)| RealAlg::new(source.clone(), lo, hi))
        .filter(|y| y.sign() > 0)
        .map(|y| y.scale(&rat(1, 2)))
        .collect();

    let mut boxes: Vec<(RealAlg, RealAlg)> = Vec::new();
    for re in &re_cands {
        for im in &im_cands {
            boxes.push((re.clone(), im.clone()));
        }
    }

    // eliminate spurious candidate boxes until exactly `pairs` remain
    loop {
        boxes.retain(|(re, im)| !sf.eval_ball(&enclosing_ball(re, im)).excludes_zero());
        if boxes.len() <= pairs {
            break;
        }
        for (re, im) in &mut boxes {
            re.refine();
            im.refine();
        }
    }
    assert_eq!(
        boxes.len(),
        pairs,
        "complex root isolation lost a root (polynomial {sf:?})"
    );

    for (re, im) in boxes {
        let root = ComplexRoot { re, im };
        out.push(root.conj());
        out.push(root);
    }
    out
}
