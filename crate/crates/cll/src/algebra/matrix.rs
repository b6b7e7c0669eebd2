//! Rational matrices and exact Jordan decomposition.
//!
//! The characteristic polynomial is computed by Faddeev–LeVerrier, its
//! roots are pulled into a single splitting field (closed under complex
//! conjugation), and the Jordan basis is built by exact generalized
//! eigenvector chains over that field. The reconstruction
//! `P · J · P⁻¹ = M` is an identity of algebraic numbers, not an
//! approximation.

use crate::algebra::field::{compositum_with_multiplier, FieldCtx};
use crate::algebra::AlgebraicNumber;
use crate::qpoly::QPoly;
use crate::rational::{rat_int, Rat};
use num_traits::{One, Zero};
use std::sync::Arc;

/// A square matrix with rational entries, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    n: usize,
    rows: Vec<Vec<Rat>>,
}

impl RationalMatrix {
    pub fn new(rows: Vec<Vec<Rat>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        RationalMatrix { n, rows }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        RationalMatrix { n, rows }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    pub fn transpose(&self) -> RationalMatrix {
        let rows = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.rows[j][i].clone()).collect())
            .collect();
        RationalMatrix { n: self.n, rows }
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.n, other.n);
        let rows = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| (0..self.n).map(|k| &self.rows[i][k] * &other.rows[k][j]).sum())
                    .collect()
            })
            .collect();
        RationalMatrix { n: self.n, rows }
    }

    pub fn scale(&self, s: &Rat) -> RationalMatrix {
        RationalMatrix {
            n: self.n,
            rows: self.rows.iter().map(|r| r.iter().map(|x| x * s).collect()).collect(),
        }
    }

    pub fn trace(&self) -> Rat {
        (0..self.n).map(|i| self.rows[i][i].clone()).sum()
    }

    pub fn add(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.n, other.n);
        let rows = (0..self.n)
            .map(|i| (0..self.n).map(|j| &self.rows[i][j] + &other.rows[i][j]).collect())
            .collect();
        RationalMatrix { n: self.n, rows }
    }

    pub fn to_alg(&self) -> AMat {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| AlgebraicNumber::from_rational(x.clone())).collect())
            .collect()
    }
}

/// Characteristic polynomial `det(xI - M)`, monic, by Faddeev–LeVerrier.
pub fn char_poly(m: &RationalMatrix) -> QPoly {
    let n = m.size();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut acc = m.clone();
    for k in 1..=n {
        let c = -acc.trace() / rat_int(k as i64);
        coeffs[n - k] = c.clone();
        if k < n {
            let shifted = acc.add(&RationalMatrix::identity(n).scale(&c));
            acc = m.mul(&shifted);
        }
    }
    QPoly::new(coeffs)
}

/// Distinct eigenvalues with algebraic multiplicities. All non-rational
/// eigenvalues are represented inside one shared splitting field that is
/// closed under complex conjugation.
pub fn eigenvalues(m: &RationalMatrix) -> Vec<(AlgebraicNumber, usize)> {
    split_char_poly(&char_poly(m))
}

/// Roots of a rational polynomial with multiplicities, embedded in one
/// conjugation-closed field.
pub fn split_char_poly(cp: &QPoly) -> Vec<(AlgebraicNumber, usize)> {
    let factors = crate::factor::factor(cp);
    let mut values: Vec<(AlgebraicNumber, usize)> = Vec::new();
    // fold all non-rational roots into one field, tracking how the
    // current generator is composed from the adjoined roots
    let mut ctx: Option<Arc<FieldCtx>> = None;
    let mut adjoined: Vec<QPoly> = Vec::new(); // elements of the current field
    let mut slots: Vec<usize> = Vec::new(); // index into `values` per adjoined root
    let mut combo: Vec<Rat> = Vec::new();
    for (f, mult) in &factors {
        if f.degree() == 1 {
            values.push((AlgebraicNumber::from_rational(-f.coeff(0)), *mult));
            continue;
        }
        for root in crate::croots::isolate_complex_roots(f) {
            let root_ctx = FieldCtx::new(f.clone(), root);
            let x = QPoly::monomial(Rat::one(), 1);
            match &ctx {
                None => {
                    ctx = Some(root_ctx);
                    adjoined.push(x);
                    combo.push(Rat::one());
                }
                Some(k) => {
                    let (k2, ga, gb, c) = compositum_with_multiplier(k, &root_ctx);
                    for e in adjoined.iter_mut() {
                        *e = k2.eval_poly(e, &ga);
                    }
                    adjoined.push(gb);
                    combo.push(c);
                    ctx = Some(k2);
                }
            }
            slots.push(values.len());
            values.push((AlgebraicNumber::zero(), *mult)); // placeholder
        }
    }
    if let Some(k) = ctx {
        // generator = Σ combo_i · adjoined_i; find conj(γ) by matching
        // each adjoined root to its complex conjugate among the adjoined
        let conj_targets: Vec<QPoly> = adjoined
            .iter()
            .map(|e| match_conjugate(&k, e, &adjoined))
            .collect();
        let mut conj_gen = QPoly::zero();
        let mut gen_check = QPoly::zero();
        for ((c, t), e) in combo.iter().zip(&conj_targets).zip(&adjoined) {
            conj_gen = conj_gen.add(&t.scale(c));
            gen_check = gen_check.add(&e.scale(c));
        }
        debug_assert_eq!(k.reduce(&gen_check), QPoly::monomial(Rat::one(), 1));
        debug_assert!(k
            .eval_poly(k.modulus(), &k.reduce(&conj_gen))
            .is_zero());
        k.set_conj_gen(k.reduce(&conj_gen));
        for (slot, e) in slots.iter().zip(adjoined) {
            values[*slot].0 = AlgebraicNumber::from_field_elem(k.clone(), e);
        }
    }
    values
}

/// Finds, among `candidates`, the element whose value is the complex
/// conjugate of the value of `e`.
fn match_conjugate(ctx: &Arc<FieldCtx>, e: &QPoly, candidates: &[QPoly]) -> QPoly {
    let mut eps = crate::rational::rat(1, 1024);
    loop {
        let target = {
            let mut b = ctx.elem_ball(e, &eps);
            b.im = -b.im;
            b
        };
        let alive: Vec<&QPoly> = candidates
            .iter()
            .filter(|c| {
                let b = ctx.elem_ball(c, &eps);
                let dx = &b.re - &target.re;
                let dy = &b.im - &target.im;
                let r = &b.rad + &target.rad;
                dx.clone() * &dx + dy.clone() * &dy <= r.clone() * &r
            })
            .collect();
        if alive.len() == 1 {
            return alive[0].clone();
        }
        assert!(!alive.is_empty(), "conjugate root missing from the adjoined set");
        eps = eps / rat_int(64);
    }
}

/// A matrix over algebraic numbers.
pub type AMat = Vec<Vec<AlgebraicNumber>>;

pub fn amat_identity(n: usize) -> AMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { AlgebraicNumber::one() } else { AlgebraicNumber::zero() })
                .collect()
        })
        .collect()
}

pub fn amat_mul(a: &AMat, b: &AMat) -> AMat {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = AlgebraicNumber::zero();
                    for k in 0..n {
                        acc = acc.add(&a[i][k].mul(&b[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Inverse by Gauss–Jordan elimination; panics on singular input.
pub fn amat_inv(a: &AMat) -> AMat {
    let n = a.len();
    let mut m: Vec<Vec<AlgebraicNumber>> = a.clone();
    let mut inv = amat_identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .expect("matrix is singular");
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col].inv();
        for j in 0..n {
            m[col][j] = m[col][j].mul(&p);
            inv[col][j] = inv[col][j].mul(&p);
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..n {
                    let d1 = f.mul(&m[col][j]);
                    let d2 = f.mul(&inv[col][j]);
                    m[r][j] = m[r][j].sub(&d1);
                    inv[r][j] = inv[r][j].sub(&d2);
                }
            }
        }
    }
    inv
}

fn amat_vec_mul(a: &AMat, v: &[AlgebraicNumber]) -> Vec<AlgebraicNumber> {
    a.iter()
        .map(|row| {
            let mut acc = AlgebraicNumber::zero();
            for (x, y) in row.iter().zip(v) {
                acc = acc.add(&x.mul(y));
            }
            acc
        })
        .collect()
}

/// Basis of the kernel of `a`, by reduced row echelon form.
fn kernel(a: &AMat) -> Vec<Vec<AlgebraicNumber>> {
    let n = a.len();
    let mut m = a.clone();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..n).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let p = m[row][col].inv();
        for j in 0..n {
            m[row][j] = m[row][j].mul(&p);
        }
        for r in 0..n {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..n {
                    let d = f.mul(&m[row][j]);
                    m[r][j] = m[r][j].sub(&d);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..n {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![AlgebraicNumber::zero(); n];
        v[free] = AlgebraicNumber::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = m[r][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Incremental independence tracker (row echelon over the field).
struct SpanTracker {
    rows: Vec<Vec<AlgebraicNumber>>,
}

impl SpanTracker {
    fn new() -> Self {
        SpanTracker { rows: Vec::new() }
    }

    /// Adds the vector if it is independent of the current span; returns
    /// whether it was added.
    fn add(&mut self, v: &[AlgebraicNumber]) -> bool {
        let mut w: Vec<AlgebraicNumber> = v.to_vec();
        for row in &self.rows {
            let lead = row.iter().position(|x| !x.is_zero()).unwrap();
            if !w[lead].is_zero() {
                let f = w[lead].div(&row[lead]);
                for (wi, ri) in w.iter_mut().zip(row) {
                    *wi = wi.sub(&f.mul(ri));
                }
            }
        }
        if w.iter().all(|x| x.is_zero()) {
            return false;
        }
        // keep rows sorted by leading index for a cheap reduction pass
        self.rows.push(w);
        self.rows.sort_by_key(|r| r.iter().position(|x| !x.is_zero()).unwrap());
        true
    }
}

/// The exact Jordan decomposition `M = P · J · P⁻¹`.
#[derive(Clone, Debug)]
pub struct JordanDecomposition {
    /// Generalized eigenvector basis, column-major reconstruction.
    pub p: AMat,
    /// The Jordan form: eigenvalues on the diagonal, ones on the
    /// superdiagonal inside each block.
    pub j: AMat,
    pub p_inv: AMat,
    /// Block descriptions: (eigenvalue, block size), in diagonal order.
    pub blocks: Vec<(AlgebraicNumber, usize)>,
}

impl JordanDecomposition {
    /// The eigenvalue at diagonal position `i`.
    pub fn diag(&self, i: usize) -> &AlgebraicNumber {
        &self.j[i][i]
    }

    pub fn size(&self) -> usize {
        self.j.len()
    }
}

pub fn jordan_decompose(m: &RationalMatrix) -> JordanDecomposition {
    let n = m.size();
    let eigs = eigenvalues(m);
    let ma = m.to_alg();
    let mut columns: Vec<Vec<AlgebraicNumber>> = Vec::new();
    let mut blocks: Vec<(AlgebraicNumber, usize)> = Vec::new();
    for (lambda, mult) in &eigs {
        // A = M - λI
        let mut a = ma.clone();
        for i in 0..n {
            a[i][i] = a[i][i].sub(lambda);
        }
        // kernels of A, A², ... until the generalized eigenspace is full
        let mut powers: Vec<AMat> = vec![a.clone()];
        let mut kernels: Vec<Vec<Vec<AlgebraicNumber>>> = vec![kernel(&a)];
        while kernels.last().unwrap().len() < *mult {
            let next = amat_mul(powers.last().unwrap(), &a);
            kernels.push(kernel(&next));
            powers.push(next);
        }
        let s = kernels.len();
        // build chains from the longest down: a new chain top at level k
        // is a kernel vector of A^k independent of ker A^(k-1) and of the
        // level-k vectors of already-built longer chains
        let mut chains: Vec<Vec<Vec<AlgebraicNumber>>> = Vec::new();
        for k in (1..=s).rev() {
            let mut span = SpanTracker::new();
            if k >= 2 {
                for v in &kernels[k - 2] {
                    span.add(v);
                }
            }
            for chain in &chains {
                if chain.len() > k {
                    span.add(&chain[k - 1]);
                }
            }
            for v in kernels[k - 1].clone() {
                if span.add(&v) {
                    // chain: [A^(k-1) v, ..., A v, v]
                    let mut vecs = vec![v];
                    for _ in 1..k {
                        let w = amat_vec_mul(&a, vecs.last().unwrap());
                        vecs.push(w);
                    }
                    vecs.reverse();
                    chains.push(vecs);
                }
            }
        }
        let total: usize = chains.iter().map(|c| c.len()).sum();
        assert_eq!(total, *mult, "generalized eigenspace dimension mismatch");
        for chain in chains {
            blocks.push((lambda.clone(), chain.len()));
            columns.extend(chain);
        }
    }
    assert_eq!(columns.len(), n);
    // P has the chain vectors as columns
    let p: AMat = (0..n).map(|i| (0..n).map(|c| columns[c][i].clone()).collect()).collect();
    let mut j = vec![vec![AlgebraicNumber::zero(); n]; n];
    let mut pos = 0;
    for (lambda, size) in &blocks {
        for k in 0..*size {
            j[pos + k][pos + k] = lambda.clone();
            if k + 1 < *size {
                j[pos + k][pos + k + 1] = AlgebraicNumber::one();
            }
        }
        pos += size;
    }
    let p_inv = amat_inv(&p);
    JordanDecomposition { p, j, p_inv, blocks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn mat(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::new(
            rows.iter().map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect(),
        )
    }

    fn check_reconstruction(m: &RationalMatrix) {
        let jd = jordan_decompose(m);
        let rec = amat_mul(&amat_mul(&jd.p, &jd.j), &jd.p_inv);
        let ma = m.to_alg();
        for i in 0..m.size() {
            for j in 0..m.size() {
                assert_eq!(rec[i][j], ma[i][j], "entry ({i},{j}) differs");
            }
        }
    }

    #[test]
    fn char_poly_of_companion() {
        // companion matrix of x^2 - x - 1
        let m = mat(&[&[0, 1], &[1, 1]]);
        assert_eq!(
            char_poly(&m),
            QPoly::new(vec![rat_int(-1), rat_int(-1), rat_int(1)])
        );
    }

    #[test]
    fn eigenvalues_of_rotation_are_conjugate() {
        let m = mat(&[&[0, -1], &[1, 0]]); // eigenvalues ±i
        let eigs = eigenvalues(&m);
        assert_eq!(eigs.len(), 2);
        assert!(eigs.iter().all(|(v, m)| *m == 1 && !v.is_real()));
        assert_eq!(eigs[0].0.conj(), eigs[1].0);
        assert_eq!(eigs[0].0.add(&eigs[1].0), AlgebraicNumber::zero());
    }

    #[test]
    fn jordan_of_diagonalizable_matrix() {
        let m = mat(&[&[2, 0], &[0, 3]]);
        let jd = jordan_decompose(&m);
        assert_eq!(jd.blocks.len(), 2);
        check_reconstruction(&m);
    }

    #[test]
    fn jordan_of_defective_matrix() {
        // single 2-block for eigenvalue 2
        let m = mat(&[&[2, 1], &[0, 2]]);
        let jd = jordan_decompose(&m);
        assert_eq!(jd.blocks, vec![(AlgebraicNumber::from_integer(2), 2)]);
        check_reconstruction(&m);
    }

    #[test]
    fn jordan_with_irrational_eigenvalues() {
        // eigenvalues ±sqrt(2)
        let m = mat(&[&[0, 2], &[1, 0]]);
        let jd = jordan_decompose(&m);
        assert_eq!(jd.blocks.len(), 2);
        check_reconstruction(&m);
    }

    #[test]
    fn jordan_with_complex_eigenvalues() {
        let m = mat(&[&[0, -1], &[1, 0]]);
        check_reconstruction(&m);
    }

    #[test]
    fn jordan_of_3x3_defective() {
        // eigenvalue 1 with a 3-chain
        let m = mat(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
        let jd = jordan_decompose(&m);
        assert_eq!(jd.blocks, vec![(AlgebraicNumber::one(), 3)]);
        check_reconstruction(&m);
    }

    #[test]
    fn jordan_of_rate_matrix_shape() {
        // a generator-style matrix with mixed rational entries
        let q = RationalMatrix::new(vec![
            vec![rat(-1, 40), rat(1, 50), rat(1, 200)],
            vec![rat(3, 10), rat(-1, 2), rat(1, 5)],
            vec![rat(1, 50), rat(2, 5), rat(-21, 50)],
        ]);
        let cp = char_poly(&q);
        // rows sum to zero, so 0 is an eigenvalue
        assert!(cp.coeff(0).is_zero());
        check_reconstruction(&q);
    }

    #[test]
    fn transpose_and_mul() {
        let m = mat(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.transpose(), mat(&[&[1, 3], &[2, 4]]));
        assert_eq!(m.mul(&RationalMatrix::identity(2)), m);
    }
}
