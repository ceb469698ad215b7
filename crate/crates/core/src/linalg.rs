//! Exact integer and rational matrix routines: determinants, Smith and
//! Hermite forms, quotient group types.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type IntMat = Vec<Vec<BigInt>>;
pub type RatMat = Vec<Vec<BigRational>>;

pub fn int_mat(rows: &[Vec<i64>]) -> IntMat {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn identity(n: usize) -> IntMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &IntMat, b: &IntMat) -> IntMat {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn rat_mat_mul(a: &RatMat, b: &RatMat) -> RatMat {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = BigRational::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn to_rat(a: &IntMat) -> RatMat {
    a.iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

/// Row vector times matrix.
pub fn vec_mat(v: &[BigRational], m: &RatMat) -> Vec<BigRational> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|j| {
            let mut acc = BigRational::zero();
            for (k, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    acc += x * &m[k][j];
                }
            }
            acc
        })
        .collect()
}

/// Fraction-free Bareiss elimination.
pub fn determinant(a: &IntMat) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Gauss-Jordan inverse; `None` when singular.
pub fn rat_inverse(a: &RatMat) -> Option<RatMat> {
    let n = a.len();
    let mut m: RatMat = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..2 * n {
                    let t = &f * &m[c][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `left * input * right = diag(diag)` with unimodular `left`, `right`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmithForm {
    pub diag: Vec<BigInt>,
    pub left: IntMat,
    pub right: IntMat,
}

impl SmithForm {
    /// Nonzero diagonal entries different from 1.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        self.diag
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn smith_form(a: &IntMat) -> SmithForm {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut d = a.clone();
    let mut left = identity(m);
    let mut right = identity(n);

    for t in 0..m.min(n) {
        loop {
            // smallest nonzero pivot in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !d[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish_smith(d, left, right, m, n);
            };
            d.swap(t, pi);
            left.swap(t, pi);
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in right.iter_mut() {
                row.swap(t, pj);
            }

            let mut dirty = false;
            for i in t + 1..m {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&d[t][t]);
                row_axpy(&mut d, i, t, &q);
                row_axpy(&mut left, i, t, &q);
                if !d[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&d[t][t]);
                col_axpy(&mut d, j, t, &q);
                col_axpy(&mut right, j, t, &q);
                if !d[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block
            let mut bad_row = None;
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if !(&d[i][j] % &d[t][t]).is_zero() {
                        bad_row = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad_row {
                Some(i) => {
                    let one = -BigInt::one();
                    row_axpy(&mut d, t, i, &one);
                    row_axpy(&mut left, t, i, &one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in left[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    finish_smith(d, left, right, m, n)
}

fn finish_smith(d: IntMat, left: IntMat, right: IntMat, m: usize, n: usize) -> SmithForm {
    let diag = (0..m.min(n)).map(|i| d[i][i].clone()).collect();
    SmithForm { diag, left, right }
}

/// row[i] -= q * row[k]
fn row_axpy(a: &mut IntMat, i: usize, k: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src = a[k].clone();
    for (x, s) in a[i].iter_mut().zip(src.iter()) {
        if !s.is_zero() {
            *x -= q * s;
        }
    }
}

/// col[j] -= q * col[k]
fn col_axpy(a: &mut IntMat, j: usize, k: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        if !row[k].is_zero() {
            let t = q * &row[k];
            row[j] -= t;
        }
    }
}

/// Hermite-style echelon basis of the row lattice spanned by `gens`.
pub fn row_basis(gens: &[Vec<BigInt>]) -> IntMat {
    let mut rows: IntMat = gens.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let n = rows.first().map_or(0, |r| r.len());
    let mut out: IntMat = Vec::new();
    for c in 0..n {
        // gcd-combine all rows with a nonzero entry in column c
        loop {
            let mut idx: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if idx.len() <= 1 {
                break;
            }
            idx.sort_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
            let p = idx[0];
            for &i in &idx[1..] {
                let q = rows[i][c].div_floor(&rows[p][c]);
                let src = rows[p].clone();
                for (x, s) in rows[i].iter_mut().zip(src.iter()) {
                    *x -= &q * s;
                }
            }
        }
        if let Some(p) = (0..rows.len()).find(|&i| !rows[i][c].is_zero()) {
            let mut r = rows.swap_remove(p);
            if r[c].is_negative() {
                r.iter_mut().for_each(|x| *x = -x.clone());
            }
            out.push(r);
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    // reduce entries above pivots
    for i in 0..out.len() {
        let c = out[i].iter().position(|x| !x.is_zero()).unwrap();
        for k in 0..i {
            let q = out[k][c].div_floor(&out[i][c]);
            if !q.is_zero() {
                let src = out[i].clone();
                for (x, s) in out[k].iter_mut().zip(src.iter()) {
                    *x -= &q * s;
                }
            }
        }
    }
    out
}

/// Common denominator of a set of rational vectors.
pub fn common_denominator(vs: &[Vec<BigRational>]) -> BigInt {
    let mut den = BigInt::one();
    for v in vs {
        for x in v {
            den = den.lcm(x.denom());
        }
    }
    den
}

pub fn scale_to_int(v: &[BigRational], den: &BigInt) -> Vec<BigInt> {
    v.iter()
        .map(|x| {
            let y = x * BigRational::from_integer(den.clone());
            debug_assert!(y.is_integer());
            y.to_integer()
        })
        .collect()
}

/// Coefficients `c` with `c * basis = v`, for a square invertible basis.
pub fn coords_in_basis(basis_inv: &RatMat, v: &[BigRational]) -> Vec<BigRational> {
    vec_mat(v, basis_inv)
}

/// Elementary divisors (excluding 1) of `span(big ∪ small) / span(small)`.
///
/// Errors with `NotFullRank` when `small` has lower rank than the union.
pub fn quotient_type(big: &[Vec<BigRational>], small: &[Vec<BigRational>]) -> Result<Vec<BigInt>> {
    let mut all: Vec<Vec<BigRational>> = big.to_vec();
    all.extend_from_slice(small);
    if all.is_empty() {
        return Ok(Vec::new());
    }
    let den = common_denominator(&all);
    let ints: IntMat = all.iter().map(|v| scale_to_int(v, &den)).collect();
    let basis = row_basis(&ints);
    let small_int: IntMat = small.iter().map(|v| scale_to_int(v, &den)).collect();
    let small_basis = row_basis(&small_int);
    if small_basis.len() != basis.len() {
        return Err(Error::NotFullRank);
    }
    // coordinates of the small basis in the big basis (square after restricting
    // to pivot columns)
    let pivots: Vec<usize> = basis
        .iter()
        .map(|r| r.iter().position(|x| !x.is_zero()).unwrap())
        .collect();
    let square: IntMat = basis
        .iter()
        .map(|r| pivots.iter().map(|&c| r[c].clone()).collect())
        .collect();
    let inv = rat_inverse(&to_rat(&square)).ok_or(Error::Singular)?;
    let coeffs: IntMat = small_basis
        .iter()
        .map(|r| {
            let v: Vec<BigRational> = pivots
                .iter()
                .map(|&c| BigRational::from_integer(r[c].clone()))
                .collect();
            vec_mat(&v, &inv)
                .into_iter()
                .map(|x| {
                    debug_assert!(x.is_integer());
                    x.to_integer()
                })
                .collect()
        })
        .collect();
    Ok(smith_form(&coeffs).elementary_divisors())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[Vec<i64>]) -> IntMat {
        int_mat(rows)
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = big(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        assert_eq!(determinant(&a), BigInt::from(4));
        let s = big(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(determinant(&s), BigInt::from(-1));
        assert_eq!(determinant(&big(&[vec![1, 2], vec![2, 4]])), BigInt::zero());
    }

    #[test]
    fn smith_form_reconstructs_diagonal() {
        let a = big(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_form(&a);
        let d = mat_mul(&mat_mul(&s.left, &a), &s.right);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { s.diag[i].clone() } else { BigInt::zero() };
                assert_eq!(d[i][j], expect);
            }
        }
        let diag: Vec<i64> = s.diag.iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(diag, vec![2, 6, 12]);
        assert_eq!(determinant(&s.left).abs(), BigInt::one());
        assert_eq!(determinant(&s.right).abs(), BigInt::one());
    }

    #[test]
    fn smith_form_of_rectangular_matrix() {
        let a = big(&[vec![4, 0], vec![0, 6], vec![2, 2]]);
        let s = smith_form(&a);
        let d = mat_mul(&mat_mul(&s.left, &a), &s.right);
        assert_eq!(d[0][1], BigInt::zero());
        assert_eq!(d[1][0], BigInt::zero());
        assert_eq!(d[2][0], BigInt::zero());
        assert_eq!(s.diag.iter().product::<BigInt>(), BigInt::from(4));
    }

    #[test]
    fn row_basis_spans_same_lattice() {
        let gens = big(&[vec![2, 0], vec![0, 2], vec![1, 1]]);
        let b = row_basis(&gens);
        assert_eq!(b.len(), 2);
        assert_eq!(determinant(&b).abs(), BigInt::from(2));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = to_rat(&big(&[vec![2, 1], vec![1, 2]]));
        let inv = rat_inverse(&a).unwrap();
        let p = rat_mat_mul(&a, &inv);
        assert!(p[0][0].is_one() && p[1][1].is_one() && p[0][1].is_zero());
    }

    #[test]
    fn quotient_type_of_index_four() {
        let r = |v: &[i64]| v.iter().map(|&x| BigRational::from_integer(x.into())).collect::<Vec<_>>();
        let big_gens = vec![r(&[1, 0]), r(&[0, 1])];
        let small = vec![r(&[2, 0]), r(&[0, 2])];
        assert_eq!(quotient_type(&big_gens, &small).unwrap(), vec![BigInt::from(2), BigInt::from(2)]);
        let small = vec![r(&[4, 0]), r(&[1, 1]), r(&[0, 4])];
        assert_eq!(quotient_type(&big_gens, &small).unwrap(), vec![BigInt::from(4)]);
        assert_eq!(quotient_type(&big_gens, &[r(&[1, 0])]), Err(Error::NotFullRank));
    }
}
