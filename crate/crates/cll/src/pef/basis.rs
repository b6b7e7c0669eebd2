//! Integral bases for finite sets of algebraic numbers.
//!
//! Given exponents λ_0..λ_K, find ℚ-linearly independent a_1..a_n such
//! that every λ_k is an *integer* combination of the a_i. Rewriting a PEF
//! over such a basis turns it into a Laurent polynomial in the variables
//! e^{a_i t}, which is what the square-free machinery operates on.
//!
//! The construction: express all λ_k as rational vectors over a common
//! number field, pick a maximal ℚ-independent subset, scale the rational
//! coordinate matrix to integers, and reduce the generated lattice to an
//! echelon basis by integer row operations.

use crate::algebra::{to_common_field, AlgebraicNumber};
use crate::rational::Rat;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Returns `(basis, coords)` with `λ_k = Σ_i coords[k][i] · basis[i]`.
///
/// The basis is ℚ-linearly independent and all coordinates are integers.
/// A zero-only input yields an empty basis and empty coordinate rows.
pub fn integral_basis(lams: &[AlgebraicNumber]) -> (Vec<AlgebraicNumber>, Vec<Vec<BigInt>>) {
    assert!(!lams.is_empty(), "integral basis of an empty set");
    let (ctx, polys) = to_common_field(lams);
    let dim = ctx.as_ref().map(|c| c.degree()).unwrap_or(1);
    let vectors: Vec<Vec<Rat>> = polys
        .iter()
        .map(|p| (0..dim).map(|k| p.coeff(k)).collect())
        .collect();

    // maximal ℚ-independent subset and rational coordinates over it
    let mut chosen: Vec<Vec<Rat>> = Vec::new();
    let mut chosen_idx: Vec<usize> = Vec::new();
    let mut coords_q: Vec<Vec<Rat>> = Vec::new();
    for (k, v) in vectors.iter().enumerate() {
        match solve_exact(&chosen, v) {
            Some(c) => coords_q.push(c),
            None => {
                chosen.push(v.clone());
                chosen_idx.push(k);
                let mut unit = vec![Rat::zero(); chosen.len()];
                unit[chosen.len() - 1] = Rat::one();
                // earlier coordinate rows gain a zero column
                for row in coords_q.iter_mut() {
                    row.push(Rat::zero());
                }
                coords_q.push(unit);
            }
        }
    }
    for row in coords_q.iter_mut() {
        row.resize(chosen.len(), Rat::zero());
    }
    if chosen.is_empty() {
        return (vec![], lams.iter().map(|_| vec![]).collect());
    }

    // clear denominators and reduce the lattice of coordinate rows
    let mut d = BigInt::from(1);
    for row in &coords_q {
        for x in row {
            d = num_integer::lcm(d, x.denom().clone());
        }
    }
    let int_rows: Vec<Vec<BigInt>> = coords_q
        .iter()
        .map(|row| row.iter().map(|x| (x * Rat::from_integer(d.clone())).to_integer()).collect())
        .collect();
    let h = hnf(int_rows.clone());

    // basis elements a_j = Σ_i h[j][i] · chosen_i / D
    let basis: Vec<AlgebraicNumber> = h
        .iter()
        .map(|row| {
            let mut acc = AlgebraicNumber::zero();
            for (i, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    let s = Rat::new(c.clone(), d.clone());
                    acc = acc.add(&lams[chosen_idx[i]].scale(&s));
                }
            }
            acc
        })
        .collect();

    // integer coordinates by back-substitution over the echelon basis
    let pivots: Vec<usize> = h
        .iter()
        .map(|row| row.iter().position(|x| !x.is_zero()).unwrap())
        .collect();
    let coords: Vec<Vec<BigInt>> = int_rows
        .iter()
        .map(|z| {
            let mut z = z.clone();
            let mut c = vec![BigInt::zero(); h.len()];
            for (j, row) in h.iter().enumerate() {
                let p = pivots[j];
                let (q, r) = num_integer::Integer::div_rem(&z[p], &row[p]);
                assert!(r.is_zero(), "lattice membership violated");
                if !q.is_zero() {
                    for (zi, hi) in z.iter_mut().zip(row) {
                        *zi -= &q * hi;
                    }
                }
                c[j] = q;
            }
            assert!(z.iter().all(Zero::is_zero), "lattice membership violated");
            c
        })
        .collect();
    (basis, coords)
}

/// Solve `Σ x_i cols_i = v` exactly over ℚ, if `v` lies in the span.
fn solve_exact(cols: &[Vec<Rat>], v: &[Rat]) -> Option<Vec<Rat>> {
    if cols.is_empty() {
        return if v.iter().all(Zero::is_zero) { Some(vec![]) } else { None };
    }
    let dim = v.len();
    let n = cols.len();
    // augmented matrix [cols | v], dim rows, n+1 columns
    let mut m: Vec<Vec<Rat>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Rat> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(v[r].clone());
            row
        })
        .collect();
    let mut pivot_of_col = vec![usize::MAX; n];
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..dim).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Rat::from_integer(1.into()) / m[row][col].clone();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..dim {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c2 in 0..=n {
                    let delta = &m[row][c2] * &f;
                    m[r][c2] = &m[r][c2] - &delta;
                }
            }
        }
        pivot_of_col[col] = row;
        row += 1;
        if row == dim {
            break;
        }
    }
    // inconsistent if any zero-row has nonzero rhs
    for r in row..dim {
        if !m[r][n].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); n];
    for (col, &pr) in pivot_of_col.iter().enumerate() {
        if pr != usize::MAX {
            x[col] = m[pr][n].clone();
        }
    }
    // columns without pivots must not be needed; verify the solution
    for r in 0..dim {
        let mut acc = Rat::zero();
        for (c, xc) in x.iter().enumerate() {
            acc += &cols[c][r] * xc;
        }
        if acc != v[r] {
            return None;
        }
    }
    Some(x)
}

/// Row-echelon basis of the lattice generated by integer rows.
fn hnf(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    if rows.is_empty() {
        return rows;
    }
    let n = rows[0].len();
    let mut pivot_row = 0;
    for col in 0..n {
        if pivot_row >= rows.len() {
            break;
        }
        loop {
            let active: Vec<usize> = (pivot_row..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .collect();
            if active.is_empty() {
                break;
            }
            if active.len() == 1 {
                let r = active[0];
                rows.swap(pivot_row, r);
                if rows[pivot_row][col].is_negative() {
                    for x in rows[pivot_row].iter_mut() {
                        *x = -&*x;
                    }
                }
                pivot_row += 1;
                break;
            }
            // reduce all active entries by the smallest in magnitude
            let k = *active
                .iter()
                .min_by_key(|&&r| rows[r][col].magnitude().clone())
                .unwrap();
            for &r in &active {
                if r == k {
                    continue;
                }
                let q = &rows[r][col] / &rows[k][col];
                if !q.is_zero() {
                    for c2 in 0..n {
                        let delta = &q * &rows[k][c2];
                        rows[r][c2] -= delta;
                    }
                }
            }
        }
    }
    rows.truncate(pivot_row);
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::QPoly;
    use crate::rational::rat_int;

    fn alg(n: i64) -> AlgebraicNumber {
        AlgebraicNumber::from_integer(n)
    }

    fn unit_i() -> AlgebraicNumber {
        AlgebraicNumber::roots_of(&QPoly::new(vec![rat_int(1), rat_int(0), rat_int(1)]))
            .into_iter()
            .find(|r| r.im().sign() > 0)
            .unwrap()
    }

    fn check(lams: &[AlgebraicNumber]) -> (Vec<AlgebraicNumber>, Vec<Vec<BigInt>>) {
        let (basis, coords) = integral_basis(lams);
        for (lam, row) in lams.iter().zip(&coords) {
            let mut acc = AlgebraicNumber::zero();
            for (b, c) in basis.iter().zip(row) {
                acc = acc.add(&b.scale(&Rat::from_integer(c.clone())));
            }
            assert!(acc.sub(lam).is_zero(), "coordinates must reproduce the input");
        }
        (basis, coords)
    }

    #[test]
    fn zero_set_gives_empty_basis() {
        let (basis, coords) = check(&[AlgebraicNumber::zero()]);
        assert!(basis.is_empty());
        assert_eq!(coords, vec![Vec::<BigInt>::new()]);
    }

    #[test]
    fn two_and_three_share_basis_one() {
        let (basis, coords) = check(&[alg(2), alg(3)]);
        assert_eq!(basis.len(), 1);
        assert!(basis[0].sub(&alg(1)).is_zero());
        assert_eq!(coords, vec![vec![BigInt::from(2)], vec![BigInt::from(3)]]);
    }

    #[test]
    fn imaginary_multiples() {
        let i = unit_i();
        let (basis, coords) = check(&[i.clone(), i.neg(), i.scale(&rat_int(2))]);
        assert_eq!(basis.len(), 1);
        assert!(basis[0].sub(&i).is_zero());
        assert_eq!(
            coords,
            vec![vec![BigInt::from(1)], vec![BigInt::from(-1)], vec![BigInt::from(2)]]
        );
    }

    #[test]
    fn conjugate_pair_with_zero() {
        // {0, a+bi, a-bi}: rank 2
        let roots = AlgebraicNumber::roots_of(&QPoly::new(vec![
            rat_int(5),
            rat_int(2),
            rat_int(1),
        ])); // roots -1 ± 2i
        let lams = vec![AlgebraicNumber::zero(), roots[0].clone(), roots[1].clone()];
        let (basis, _) = check(&lams);
        assert_eq!(basis.len(), 2);
    }

    #[test]
    fn rational_halves() {
        // {1/2, 1/3}: basis should make both integer combinations
        let half = AlgebraicNumber::from_rational(Rat::new(1.into(), 2.into()));
        let third = AlgebraicNumber::from_rational(Rat::new(1.into(), 3.into()));
        let (basis, coords) = check(&[half, third]);
        assert_eq!(basis.len(), 1);
        assert!(coords.iter().flatten().all(|c| !c.is_zero()));
    }
}
