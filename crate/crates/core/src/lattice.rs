//! Exact integral lattices given by Gram matrices, discriminant forms,
//! short-vector enumeration and the binary-code construction `L_C`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::codes::{hamming_code, BinaryCode};
use crate::error::{Error, Result};
use crate::linalg::{
    determinant, identity, int_mat, mat_mul, quotient_type, smith_form, transpose, IntMat, RatMat,
};

/// Whether the stored integer matrix is the Gram matrix itself or twice it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scale {
    One,
    Half,
}

/// A lattice given by a symmetric nonsingular Gram matrix `stored * scale`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegralLattice {
    stored: IntMat,
    scale: Scale,
}

impl IntegralLattice {
    pub fn new(gram: IntMat) -> Result<Self> {
        Self::with_scale(gram, Scale::One)
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(int_mat(rows))
    }

    /// Gram matrix `stored / 2`; normalized to `Scale::One` when every
    /// entry is even.
    pub fn with_scale(stored: IntMat, scale: Scale) -> Result<Self> {
        let n = stored.len();
        if stored.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("Gram matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if stored[i][j] != stored[j][i] {
                    return Err(Error::Dimension("Gram matrix is not symmetric".into()));
                }
            }
        }
        if determinant(&stored).is_zero() {
            return Err(Error::Singular);
        }
        let mut l = IntegralLattice { stored, scale };
        if scale == Scale::Half && l.stored.iter().flatten().all(|x| x.is_even()) {
            l.stored = l
                .stored
                .iter()
                .map(|r| r.iter().map(|x| x / 2).collect())
                .collect();
            l.scale = Scale::One;
        }
        Ok(l)
    }

    /// The rank-0 lattice.
    pub fn zero() -> Self {
        IntegralLattice {
            stored: Vec::new(),
            scale: Scale::One,
        }
    }

    pub fn rank(&self) -> usize {
        self.stored.len()
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn stored_gram(&self) -> &IntMat {
        &self.stored
    }

    fn denom(&self) -> BigInt {
        match self.scale {
            Scale::One => BigInt::one(),
            Scale::Half => BigInt::from(2),
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> BigRational {
        BigRational::new(self.stored[i][j].clone(), self.denom())
    }

    pub fn gram(&self) -> RatMat {
        (0..self.rank())
            .map(|i| (0..self.rank()).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.scale == Scale::One
    }

    /// The Gram matrix as integers, or `NotIntegral`.
    pub fn int_gram(&self) -> Result<IntMat> {
        if self.is_integral() {
            Ok(self.stored.clone())
        } else {
            Err(Error::NotIntegral)
        }
    }

    pub fn is_even(&self) -> bool {
        self.is_integral() && (0..self.rank()).all(|i| self.stored[i][i].is_even())
    }

    pub fn determinant(&self) -> BigRational {
        let n = self.rank() as u32;
        BigRational::new(determinant(&self.stored), self.denom().pow(n))
    }

    /// `|det|` as an integer (integral lattices only).
    pub fn abs_det(&self) -> Result<BigInt> {
        Ok(determinant(&self.int_gram()?).abs())
    }

    /// `(a, b)` for coordinate vectors.
    pub fn inner(&self, a: &[BigRational], b: &[BigRational]) -> BigRational {
        let mut acc = BigInt::zero();
        let mut den = BigInt::one();
        // accumulate over a common denominator to avoid repeated gcds
        for x in a.iter().chain(b) {
            den = den.lcm(x.denom());
        }
        let ai: Vec<BigInt> = a.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
        let bi: Vec<BigInt> = b.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
        for (i, x) in ai.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in bi.iter().enumerate() {
                if !y.is_zero() {
                    acc += x * y * &self.stored[i][j];
                }
            }
        }
        BigRational::new(acc, den.pow(2) * self.denom())
    }

    pub fn inner_int(&self, a: &[BigInt], b: &[BigInt]) -> BigRational {
        let mut acc = BigInt::zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    acc += x * y * &self.stored[i][j];
                }
            }
        }
        BigRational::new(acc, self.denom())
    }

    pub fn norm(&self, v: &LatticeVector) -> BigRational {
        self.inner(&v.coords, &v.coords)
    }

    /// `v ∈ L*`: `G·v` integral.
    pub fn in_dual(&self, v: &LatticeVector) -> bool {
        let g = self.gram();
        (0..self.rank()).all(|i| {
            v.coords
                .iter()
                .zip(&g[i])
                .fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
                .is_integer()
        })
    }

    /// Positive definite by the signs of the leading principal minors.
    pub fn is_positive_definite(&self) -> bool {
        (1..=self.rank()).all(|k| {
            let minor: IntMat = self.stored[..k].iter().map(|r| r[..k].to_vec()).collect();
            determinant(&minor).is_positive()
        })
    }

    pub fn orthogonal_sum(&self, other: &IntegralLattice) -> IntegralLattice {
        let (a, b) = (self.gram(), other.gram());
        let (n, m) = (a.len(), b.len());
        let half = self.scale == Scale::Half || other.scale == Scale::Half;
        let f = if half { BigInt::from(2) } else { BigInt::one() };
        let mut stored = vec![vec![BigInt::zero(); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                stored[i][j] = (&a[i][j] * BigRational::from_integer(f.clone())).to_integer();
            }
        }
        for i in 0..m {
            for j in 0..m {
                stored[n + i][n + j] = (&b[i][j] * BigRational::from_integer(f.clone())).to_integer();
            }
        }
        let scale = if half { Scale::Half } else { Scale::One };
        IntegralLattice::with_scale(stored, scale).expect("orthogonal sum of nonsingular lattices")
    }

    pub fn orthogonal_power(&self, m: usize) -> IntegralLattice {
        (1..m).fold(self.clone(), |acc, _| acc.orthogonal_sum(self))
    }

    /// `L[s]`: the form multiplied by `s`.
    pub fn rescaled(&self, s: i64) -> Result<IntegralLattice> {
        if s == 0 {
            return Err(Error::Singular);
        }
        let stored = self
            .stored
            .iter()
            .map(|r| r.iter().map(|x| x * s).collect())
            .collect();
        IntegralLattice::with_scale(stored, self.scale)
    }

    /// Sublattice with the given integral basis rows (coordinates in `self`).
    pub fn sublattice(&self, rows: &IntMat) -> Result<IntegralLattice> {
        let g = mat_mul(&mat_mul(rows, &self.stored), &transpose(rows));
        IntegralLattice::with_scale(g, self.scale)
    }

    /// Number of vectors of norm 2.
    pub fn root_count(&self) -> Result<usize> {
        Ok(short_vectors(self, &BigRational::from_integer(2.into()))?.len())
    }
}

impl fmt::Display for IntegralLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::format_gram(self))
    }
}

/// A vector in `L ⊗ Q` by rational coordinates in the lattice basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    pub coords: Vec<BigRational>,
}

impl LatticeVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        LatticeVector { coords }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        LatticeVector {
            coords: v.iter().map(|&x| BigRational::from_integer(x.into())).collect(),
        }
    }

    pub fn from_big(v: &[BigInt]) -> Self {
        LatticeVector {
            coords: v.iter().map(|x| BigRational::from_integer(x.clone())).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        LatticeVector {
            coords: vec![BigRational::zero(); n],
        }
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.coords[i] = BigRational::one();
        v
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|x| x.is_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }

    pub fn to_int(&self) -> Option<Vec<BigInt>> {
        self.is_integral()
            .then(|| self.coords.iter().map(|x| x.to_integer()).collect())
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.to_int()?.iter().map(|x| x.to_i64()).collect()
    }

    pub fn add(&self, o: &LatticeVector) -> LatticeVector {
        LatticeVector {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &LatticeVector) -> LatticeVector {
        LatticeVector {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, s: &BigRational) -> LatticeVector {
        LatticeVector {
            coords: self.coords.iter().map(|a| a * s).collect(),
        }
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// `L_C` together with its ambient realization: lattice vector `i` is
/// `basis[i] / √2` in `Z^n`.
#[derive(Debug, Clone)]
pub struct CodeLattice {
    pub lattice: IntegralLattice,
    pub basis: IntMat,
    basis_inv: RatMat,
}

impl CodeLattice {
    /// Lattice coordinates of the ambient vector `y / √2`, or
    /// `NotInLattice`.
    pub fn coords_of_ambient(&self, y: &[BigInt]) -> Result<LatticeVector> {
        let v: Vec<BigRational> = y.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let c = crate::linalg::vec_mat(&v, &self.basis_inv);
        let lv = LatticeVector::new(c);
        if !lv.is_integral() {
            return Err(Error::NotInLattice(format!("{y:?}")));
        }
        Ok(lv)
    }

    pub fn ambient_of(&self, v: &LatticeVector) -> Vec<BigRational> {
        crate::linalg::vec_mat(&v.coords, &crate::linalg::to_rat(&self.basis))
    }
}

/// `L_C = {(c + x)/√2 : c ∈ C, x ∈ (2Z)^n}` with its ambient basis.
pub fn code_lattice(c: &BinaryCode) -> CodeLattice {
    let n = c.length();
    let mut basis: IntMat = Vec::with_capacity(n);
    let mut pivots = Vec::new();
    for &row in c.generators() {
        pivots.push(row.trailing_zeros() as usize);
        basis.push((0..n).map(|i| BigInt::from((row >> i & 1) as i64)).collect());
    }
    for i in 0..n {
        if !pivots.contains(&i) {
            let mut r = vec![BigInt::zero(); n];
            r[i] = BigInt::from(2);
            basis.push(r);
        }
    }
    let stored = mat_mul(&basis, &transpose(&basis));
    let lattice = IntegralLattice::with_scale(stored, Scale::Half).expect("basis has full rank");
    let basis_inv = crate::linalg::rat_inverse(&crate::linalg::to_rat(&basis)).expect("full rank");
    CodeLattice {
        lattice,
        basis,
        basis_inv,
    }
}

pub fn lattice_from_code(c: &BinaryCode) -> IntegralLattice {
    code_lattice(c).lattice
}

pub fn e8_code_lattice() -> CodeLattice {
    code_lattice(&hamming_code(8).expect("length 8 is supported"))
}

pub fn e8_lattice() -> IntegralLattice {
    e8_code_lattice().lattice
}

/// Root lattice `A_n` in the simple-root basis.
pub fn a_lattice(n: usize) -> IntegralLattice {
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect();
    IntegralLattice::from_rows(&rows).expect("A_n is nonsingular")
}

/// Fincke-Pohst form: `Q(x) = Σ q_ii (x_i + Σ_{j>i} q_ij x_j)^2`.
fn pohst_form(l: &IntegralLattice) -> Result<RatMat> {
    let n = l.rank();
    let mut q = l.gram();
    for i in 0..n {
        if !q[i][i].is_positive() {
            return Err(Error::Indefinite);
        }
        for j in i + 1..n {
            q[j][i] = q[i][j].clone();
            q[i][j] = &q[i][j] / &q[i][i];
        }
        for k in i + 1..n {
            for m in k..n {
                let t = &q[k][i] * &q[i][m];
                q[k][m] -= t;
            }
        }
    }
    Ok(q)
}

/// All lattice vectors of norm `norm`, negation closed.
pub fn short_vectors(l: &IntegralLattice, norm: &BigRational) -> Result<Vec<LatticeVector>> {
    Ok(vectors_up_to(l, norm)?
        .into_iter()
        .filter(|(_, nv)| nv == norm)
        .map(|(v, _)| LatticeVector::from_big(&v))
        .collect())
}

/// All nonzero lattice vectors of norm at most `bound`, with their norms.
pub fn vectors_up_to(l: &IntegralLattice, bound: &BigRational) -> Result<Vec<(Vec<BigInt>, BigRational)>> {
    let n = l.rank();
    let q = pohst_form(l)?;
    let mut out = Vec::new();
    if n == 0 {
        return Ok(out);
    }
    let mut x = vec![BigInt::zero(); n];
    enumerate_level(&q, n - 1, bound, bound.clone(), &mut x, &mut out);
    Ok(out)
}

fn enumerate_level(
    q: &RatMat,
    i: usize,
    bound: &BigRational,
    remaining: BigRational,
    x: &mut Vec<BigInt>,
    out: &mut Vec<(Vec<BigInt>, BigRational)>,
) {
    let n = x.len();
    let mut c = BigRational::zero();
    for j in i + 1..n {
        if !x[j].is_zero() {
            c += &q[i][j] * BigRational::from_integer(x[j].clone());
        }
    }
    // integers t with q_ii (t + c)^2 <= remaining
    let r = &remaining / &q[i][i];
    let b = c.denom().clone();
    let a = c.numer().clone();
    let t = (r * BigRational::from_integer(&b * &b)).floor().to_integer().sqrt();
    let lo = Integer::div_ceil(&(-&t - &a), &b);
    let hi = Integer::div_floor(&(&t - &a), &b);
    let mut v = lo;
    while v <= hi {
        let d = BigRational::from_integer(v.clone()) + &c;
        let used = &q[i][i] * &d * &d;
        if used <= remaining {
            x[i] = v.clone();
            let rest = &remaining - &used;
            if i == 0 {
                if x.iter().any(|y| !y.is_zero()) {
                    out.push((x.clone(), bound - &rest));
                }
            } else {
                enumerate_level(q, i - 1, bound, rest, x, out);
            }
        }
        v += 1;
    }
    x[i] = BigInt::zero();
}

/// `L*/L` with its discriminant quadratic and bilinear forms.
#[derive(Debug, Clone)]
pub struct DiscriminantGroup {
    /// Lifts to `L*` of cyclic generators.
    pub generators: Vec<LatticeVector>,
    pub orders: Vec<BigInt>,
    gram: RatMat,
    left: IntMat,
    // indices of the Smith diagonal matching `generators`
    slots: Vec<usize>,
    int_gram: IntMat,
}

impl DiscriminantGroup {
    pub fn order(&self) -> BigInt {
        self.orders.iter().product()
    }

    pub fn exponent(&self) -> BigInt {
        self.orders.iter().fold(BigInt::one(), |a, b| a.lcm(b))
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    /// `Σ coeffs_i g_i`.
    pub fn element(&self, coeffs: &[BigInt]) -> LatticeVector {
        let n = self.gram.len();
        let mut v = LatticeVector::zero(n);
        for (c, g) in coeffs.iter().zip(&self.generators) {
            v = v.add(&g.scale(&BigRational::from_integer(c.clone())));
        }
        v
    }

    fn inner(&self, a: &LatticeVector, b: &LatticeVector) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    acc += x * y * &self.gram[i][j];
                }
            }
        }
        acc
    }

    /// `q(v) = (v, v) mod 2`.
    pub fn q(&self, v: &LatticeVector) -> BigRational {
        mod_rat(&self.inner(v, v), 2)
    }

    /// `b(v, w) = (v, w) mod 1`.
    pub fn b(&self, v: &LatticeVector, w: &LatticeVector) -> BigRational {
        mod_rat(&self.inner(v, w), 1)
    }

    pub fn q_coeffs(&self, coeffs: &[BigInt]) -> BigRational {
        self.q(&self.element(coeffs))
    }

    pub fn b_coeffs(&self, a: &[BigInt], b: &[BigInt]) -> BigRational {
        self.b(&self.element(a), &self.element(b))
    }

    /// `q(g_i)` for every generator.
    pub fn q_values(&self) -> Vec<BigRational> {
        self.generators.iter().map(|g| self.q(g)).collect()
    }

    /// Coordinates on the generators of the class of `v ∈ L*`.
    pub fn class_of(&self, v: &LatticeVector) -> Result<Vec<BigInt>> {
        let n = self.gram.len();
        let mut w = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = BigRational::zero();
            for j in 0..n {
                acc += BigRational::from_integer(self.int_gram[i][j].clone()) * &v.coords[j];
            }
            if !acc.is_integer() {
                return Err(Error::NotInLattice(format!("{v} is not in the dual")));
            }
            w.push(acc.to_integer());
        }
        Ok(self
            .slots
            .iter()
            .zip(&self.orders)
            .map(|(&s, d)| {
                let y: BigInt = self.left[s].iter().zip(&w).map(|(a, b)| a * b).sum();
                y.mod_floor(d)
            })
            .collect())
    }

    /// `p`-primary parts: for each prime `p | |A|`, generator coefficient
    /// vectors with their orders.
    pub fn primary_parts(&self) -> BTreeMap<BigInt, Vec<(Vec<BigInt>, BigInt)>> {
        let mut out: BTreeMap<BigInt, Vec<(Vec<BigInt>, BigInt)>> = BTreeMap::new();
        for (i, d) in self.orders.iter().enumerate() {
            for (p, a) in factorize(d) {
                let pa = p.pow(a);
                let mut coeffs = vec![BigInt::zero(); self.orders.len()];
                coeffs[i] = d / &pa;
                out.entry(p).or_default().push((coeffs, pa));
            }
        }
        out
    }
}

/// Representative of `x mod m` in `[0, m)`.
pub fn mod_rat(x: &BigRational, m: i64) -> BigRational {
    let m = BigRational::from_integer(m.into());
    x - (x / &m).floor() * &m
}

/// Prime factorization by trial division.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut a = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            a += 1;
        }
        if a > 0 {
            out.push((p.clone(), a));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

pub fn discriminant_group(l: &IntegralLattice) -> Result<DiscriminantGroup> {
    let g = l.int_gram()?;
    let n = l.rank();
    let s = smith_form(&g);
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    let mut slots = Vec::new();
    for (i, d) in s.diag.iter().enumerate() {
        if d.is_one() {
            continue;
        }
        let coords: Vec<BigRational> = (0..n)
            .map(|r| BigRational::new(s.right[r][i].clone(), d.clone()))
            .collect();
        generators.push(LatticeVector::new(coords));
        orders.push(d.clone());
        slots.push(i);
    }
    Ok(DiscriminantGroup {
        generators,
        orders,
        gram: l.gram(),
        left: s.left,
        slots,
        int_gram: g,
    })
}

/// Elementary divisors of `L / span(sub)`.
pub fn sublattice_quotient(l: &IntegralLattice, sub: &[LatticeVector]) -> Result<Vec<BigInt>> {
    let n = l.rank();
    if sub.iter().any(|v| v.len() != n) {
        return Err(Error::Dimension("vector length differs from rank".into()));
    }
    let big: Vec<Vec<BigRational>> = crate::linalg::to_rat(&identity(n));
    let small: Vec<Vec<BigRational>> = sub.iter().map(|v| v.coords.clone()).collect();
    if n == 0 {
        return Ok(Vec::new());
    }
    quotient_type(&big, &small)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn box_count(l: &IntegralLattice, norm: i64, bound: i64) -> usize {
        // every coordinate in [-bound, bound]
        let n = l.rank();
        let mut count = 0;
        let mut x = vec![-bound; n];
        loop {
            let v = LatticeVector::from_ints(&x);
            if l.norm(&v) == r(norm) {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == n {
                    return count;
                }
                if x[i] < bound {
                    x[i] += 1;
                    break;
                }
                x[i] = -bound;
                i += 1;
            }
        }
    }

    #[test]
    fn e8_basic_invariants() {
        let e8 = e8_lattice();
        assert_eq!(e8.rank(), 8);
        assert!(e8.is_even());
        assert_eq!(e8.abs_det().unwrap(), BigInt::one());
        assert!(e8.is_positive_definite());
    }

    #[test]
    fn e8_short_vector_counts() {
        let e8 = e8_lattice();
        assert_eq!(short_vectors(&e8, &r(2)).unwrap().len(), 240);
        assert_eq!(short_vectors(&e8, &r(4)).unwrap().len(), 2160);
        assert!(short_vectors(&e8, &r(1)).unwrap().is_empty());
    }

    #[test]
    fn zero_code_gives_twice_identity() {
        let z = BinaryCode::zero(4).unwrap();
        let l = lattice_from_code(&z);
        assert_eq!(l.gram(), crate::linalg::to_rat(&int_mat(&[
            vec![2, 0, 0, 0],
            vec![0, 2, 0, 0],
            vec![0, 0, 2, 0],
            vec![0, 0, 0, 2]
        ])));
    }

    #[test]
    fn odd_code_is_not_even() {
        let c = BinaryCode::new(2, &[0b11]).unwrap();
        let l = lattice_from_code(&c);
        assert!(!l.is_even());
        assert_eq!(l.determinant(), r(1));
    }

    #[test]
    fn a1_short_vectors() {
        let a1 = a_lattice(1);
        let v = short_vectors(&a1, &r(2)).unwrap();
        assert_eq!(v.len(), 2);
        assert!(v.contains(&LatticeVector::from_ints(&[1])));
        assert!(v.contains(&LatticeVector::from_ints(&[-1])));
    }

    #[test]
    fn short_vectors_match_box_oracle() {
        let lats = [
            a_lattice(2),
            a_lattice(3),
            IntegralLattice::from_rows(&[vec![4, 1, 0], vec![1, 6, 2], vec![0, 2, 8]]).unwrap(),
            IntegralLattice::from_rows(&[vec![2, 1, 0, 0], vec![1, 2, 1, 0], vec![0, 1, 2, 1], vec![0, 0, 1, 4]])
                .unwrap(),
        ];
        for l in &lats {
            for norm in [2, 4, 6, 8] {
                let fast = short_vectors(l, &r(norm)).unwrap();
                assert_eq!(fast.len(), box_count(l, norm, 4), "norm {norm}");
                for v in &fast {
                    assert!(fast.contains(&v.neg()));
                }
            }
        }
    }

    #[test]
    fn indefinite_is_rejected() {
        let u = IntegralLattice::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(short_vectors(&u, &r(2)).unwrap_err(), Error::Indefinite);
        assert!(!u.is_positive_definite());
    }

    #[test]
    fn discriminant_of_a1() {
        let d = discriminant_group(&a_lattice(1)).unwrap();
        assert_eq!(d.orders, vec![BigInt::from(2)]);
        assert_eq!(d.q_values(), vec![BigRational::new(1.into(), 2.into())]);
    }

    #[test]
    fn discriminant_of_four_identity() {
        let rows: Vec<Vec<i64>> = (0..8).map(|i| (0..8).map(|j| if i == j { 4 } else { 0 }).collect()).collect();
        let d = discriminant_group(&IntegralLattice::from_rows(&rows).unwrap()).unwrap();
        assert_eq!(d.orders, vec![BigInt::from(4); 8]);
        for q in d.q_values() {
            assert_eq!(q, BigRational::new(1.into(), 4.into()));
        }
    }

    #[test]
    fn discriminant_class_roundtrip() {
        let l = IntegralLattice::from_rows(&[vec![4, 2, 0], vec![2, 6, 2], vec![0, 2, 10]]).unwrap();
        let d = discriminant_group(&l).unwrap();
        assert_eq!(d.order(), l.abs_det().unwrap());
        for (i, g) in d.generators.iter().enumerate() {
            let c = d.class_of(g).unwrap();
            for (j, x) in c.iter().enumerate() {
                assert_eq!(*x, if i == j { BigInt::one() } else { BigInt::zero() });
            }
        }
    }

    #[test]
    fn e8_discriminant_trivial_and_quotients() {
        let e8 = e8_lattice();
        assert!(discriminant_group(&e8).unwrap().is_trivial());
        let basis: Vec<LatticeVector> = (0..8).map(|i| LatticeVector::unit(8, i)).collect();
        assert!(sublattice_quotient(&e8, &basis).unwrap().is_empty());
        assert_eq!(sublattice_quotient(&e8, &basis[..7]), Err(Error::NotFullRank));
    }

    #[test]
    fn factorize_small() {
        assert_eq!(factorize(&BigInt::from(360)), vec![(2.into(), 3), (3.into(), 2), (5.into(), 1)]);
    }
}
