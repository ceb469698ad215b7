//! Even unimodular overlattices of orthogonal sums of copies of a lattice,
//! built from isotropic glue in the discriminant form.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::budget::{Budget, Ticker};
use crate::error::{Error, Result};
use crate::lattice::{discriminant_group, factorize, mod_rat, short_vectors, IntegralLattice, LatticeVector};
use crate::linalg::{
    common_denominator, determinant, mat_mul, rat_inverse, rat_mat_mul, row_basis, scale_to_int, smith_form,
    to_rat, transpose, vec_mat, IntMat, RatMat,
};

fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn modulus(p: i64, r: u32) -> Result<i64> {
    p.checked_pow(r)
        .filter(|m| *m < 1 << 40)
        .ok_or_else(|| Error::TooLarge(format!("{p}^{r}")))
}

/// `(a, b)` with `a² + b² ≡ −1 (mod p^r)`, lifted from a solution mod `p`.
pub fn sum_two_squares_mod(p: i64, r: u32) -> Result<(i64, i64)> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let full = modulus(p, r.max(1))?;
    let mut sol = None;
    'search: for m in 0..p {
        for b in 0..=m {
            if (m * m + b * b + 1) % p == 0 {
                sol = Some((m, b));
                break 'search;
            }
        }
    }
    let (a0, b0) = sol.expect("every element of F_p is a sum of two squares");
    let (mut a, mut b) = (i128::from(a0), i128::from(b0));
    let p = i128::from(p);
    let mut pr = p;
    for _ in 1..r {
        // a² + b² = −1 + p^r m; pick x, y with 2(ax + by) ≡ −m (mod p)
        let m = (a * a + b * b + 1) / pr;
        let neg_m = (-m).rem_euclid(p);
        if a % p != 0 {
            a += pr * (neg_m * mod_inverse(2 * a, p) % p);
        } else {
            b += pr * (neg_m * mod_inverse(2 * b, p) % p);
        }
        pr *= p;
        a = a.rem_euclid(pr);
        b = b.rem_euclid(pr);
    }
    debug_assert_eq!((a * a + b * b + 1) % i128::from(full), 0);
    Ok((a as i64, b as i64))
}

fn mod_inverse(a: i128, m: i128) -> i128 {
    let e = Integer::extended_gcd(&a.rem_euclid(m), &m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}

/// `(a, b, c, d)` with `a² + b² + c² + d² = 2^r − 1`; nonzero entries
/// ascending, zeros last.
pub fn sum_four_squares_mod(r: u32) -> Result<(i64, i64, i64, i64)> {
    if r > 40 {
        return Err(Error::TooLarge(format!("2^{r}")));
    }
    let n: i64 = (1i64 << r) - 1;
    let isqrt = |x: i64| -> i64 { num_integer::Roots::sqrt(&x) };
    for a in 0..=isqrt(n / 4) {
        for b in a..=isqrt((n - a * a) / 3) {
            for c in b..=isqrt((n - a * a - b * b) / 2) {
                let rest = n - a * a - b * b - c * c;
                let d = isqrt(rest);
                if d * d == rest && d >= c {
                    let mut v: Vec<i64> = [a, b, c, d].into_iter().filter(|&x| x != 0).collect();
                    v.resize(4, 0);
                    return Ok((v[0], v[1], v[2], v[3]));
                }
            }
        }
    }
    unreachable!("Lagrange's four-square theorem")
}

/// Glue vectors in `K ⊗ Q` (basis coordinates of the base lattice `K`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropicSubgroup {
    pub generators: Vec<LatticeVector>,
}

/// Exact isotropy: every generator lies in `K*` with even norm, and all
/// pairings are integral.
pub fn check_isotropic(base: &IntegralLattice, glue: &IsotropicSubgroup) -> Result<()> {
    for (i, g) in glue.generators.iter().enumerate() {
        if g.len() != base.rank() {
            return Err(Error::Dimension(format!("glue vector {i} has length {}", g.len())));
        }
        if !base.in_dual(g) {
            return Err(Error::NotIsotropic(format!("glue vector {i} is not in the dual")));
        }
        if !mod_rat(&base.norm(g), 2).is_zero() {
            return Err(Error::NotIsotropic(format!("q(g_{i}) = {}", mod_rat(&base.norm(g), 2))));
        }
        for (j, h) in glue.generators[..i].iter().enumerate() {
            let b = base.inner(&g.coords, &h.coords);
            if !b.is_integer() {
                return Err(Error::NotIsotropic(format!("b(g_{j}, g_{i}) = {b}")));
            }
        }
    }
    Ok(())
}

/// `M = K + span(glue)` with basis `basis / denominator` in `K`
/// coordinates.
#[derive(Debug, Clone)]
pub struct Overlattice {
    pub base: IntegralLattice,
    pub glue: IsotropicSubgroup,
    pub result: IntegralLattice,
    pub basis: IntMat,
    pub denominator: BigInt,
}

impl Overlattice {
    /// Basis rows of `M` as rationals in `K` coordinates.
    pub fn basis_rat(&self) -> RatMat {
        self.basis
            .iter()
            .map(|r| r.iter().map(|x| BigRational::new(x.clone(), self.denominator.clone())).collect())
            .collect()
    }

    /// `[M : K]`.
    pub fn index(&self) -> BigInt {
        let n = self.base.rank() as u32;
        self.denominator.pow(n) / determinant(&self.basis).abs()
    }
}

pub fn overlattice_from_isotropic(base: &IntegralLattice, glue: &IsotropicSubgroup) -> Result<Overlattice> {
    let g = base.int_gram()?;
    check_isotropic(base, glue)?;
    let n = base.rank();
    let mut gens: Vec<Vec<BigRational>> = glue.generators.iter().map(|v| v.coords.clone()).collect();
    gens.extend(to_rat(&crate::linalg::identity(n)));
    let den = common_denominator(&gens);
    let ints: IntMat = gens.iter().map(|v| scale_to_int(v, &den)).collect();
    let basis = row_basis(&ints);
    let gram = mat_mul(&mat_mul(&basis, &g), &transpose(&basis));
    let d2 = &den * &den;
    let scaled: IntMat = gram
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    if (x % &d2).is_zero() {
                        Ok(x / &d2)
                    } else {
                        Err(Error::NotIntegral)
                    }
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let result = IntegralLattice::new(scaled)?;
    Ok(Overlattice {
        base: base.clone(),
        glue: glue.clone(),
        result,
        basis,
        denominator: den,
    })
}

/// An overlattice of `L^copies ⊥ E` (with `E` of rank `extra` on which
/// `Aut(L)` acts trivially).
#[derive(Debug, Clone)]
pub struct Unimodularization {
    pub input: IntegralLattice,
    pub copies: usize,
    pub extra: usize,
    pub overlattice: Overlattice,
}

impl Unimodularization {
    pub fn lattice(&self) -> &IntegralLattice {
        &self.overlattice.result
    }

    /// First copy of `L` is primitive in `M`: the Smith form of its
    /// coordinates in the basis of `M` has only unit divisors.
    pub fn is_primitive(&self) -> Result<bool> {
        let n = self.input.rank();
        if n == 0 {
            return Ok(true);
        }
        let inv = rat_inverse(&self.overlattice.basis_rat()).ok_or(Error::Singular)?;
        let rows: IntMat = (0..n)
            .map(|i| {
                let e = LatticeVector::unit(self.overlattice.base.rank(), i);
                let c = vec_mat(&e.coords, &inv);
                c.into_iter().map(|x| x.to_integer()).collect()
            })
            .collect();
        let s = smith_form(&rows);
        Ok(s.rank() == n && s.diag.iter().all(|d| d.is_one()))
    }

    /// Definite exactly when every leading principal minor is positive.
    pub fn is_positive_definite(&self) -> bool {
        self.lattice().is_positive_definite()
    }
}

fn glue_lift(dg: &crate::lattice::DiscriminantGroup, coeffs: &[BigInt]) -> LatticeVector {
    dg.element(coeffs)
}

/// `(c_1 x, ..., c_m x)` in `L^m` coordinates.
fn spread(x: &LatticeVector, factors: &[i64], pad: usize) -> LatticeVector {
    let mut coords = Vec::with_capacity(x.len() * factors.len() + pad);
    for &f in factors {
        let fr = BigRational::from_integer(f.into());
        coords.extend(x.coords.iter().map(|c| c * &fr));
    }
    coords.extend(std::iter::repeat(BigRational::zero()).take(pad));
    LatticeVector::new(coords)
}

/// Equivariant even unimodular overlattice of `L^4` (odd determinant) or
/// `L^8` (even determinant).
pub fn unimodularize(l: &IntegralLattice) -> Result<Unimodularization> {
    if !l.is_even() {
        return Err(Error::NotEven);
    }
    let det = l.abs_det()?;
    let dg = discriminant_group(l)?;
    let parts = dg.primary_parts();
    let odd = det.is_odd();
    let copies = if odd { 4 } else { 8 };
    let mut gens = Vec::new();
    for (p, elems) in &parts {
        let pi = p.to_i64().ok_or_else(|| Error::TooLarge(format!("prime {p}")))?;
        let a1 = elems
            .iter()
            .map(|(_, o)| factorize(o)[0].1)
            .max()
            .unwrap_or(0);
        if pi == 2 {
            let (r, s, t, u) = sum_four_squares_mod(a1 + 1)?;
            for (coeffs, _) in elems {
                let x = glue_lift(&dg, coeffs);
                gens.push(spread(&x, &[r, s, t, u, 1, 0, 0, 0], 0));
                gens.push(spread(&x, &[s, -r, u, -t, 0, 1, 0, 0], 0));
                gens.push(spread(&x, &[-1, 0, 0, 0, r, s, t, u], 0));
                gens.push(spread(&x, &[0, -1, 0, 0, s, -r, u, -t], 0));
            }
        } else {
            let (r, s) = sum_two_squares_mod(pi, a1)?;
            for (coeffs, _) in elems {
                let x = glue_lift(&dg, coeffs);
                let d = [r, s, 0, 1];
                let e = [s, -r, 1, 0];
                if odd {
                    gens.push(spread(&x, &d, 0));
                    gens.push(spread(&x, &e, 0));
                } else {
                    let z = [0, 0, 0, 0];
                    gens.push(spread(&x, &[d, z].concat(), 0));
                    gens.push(spread(&x, &[e, z].concat(), 0));
                    gens.push(spread(&x, &[z, d].concat(), 0));
                    gens.push(spread(&x, &[z, e].concat(), 0));
                }
            }
        }
    }
    let base = l.orthogonal_power(copies);
    let ov = overlattice_from_isotropic(&base, &IsotropicSubgroup { generators: gens })?;
    Ok(Unimodularization {
        input: l.clone(),
        copies,
        extra: 0,
        overlattice: ov,
    })
}

/// Hyperbolic plane `U`.
pub fn hyperbolic_plane() -> IntegralLattice {
    IntegralLattice::from_rows(&[vec![0, 1], vec![1, 0]]).expect("U is unimodular")
}

/// Indefinite even unimodular lattice of rank at most `2n + 2` containing
/// `L` primitively: `L ⊥ L(−1)` glued along the diagonal of the
/// discriminant groups, plus one hyperbolic plane.
pub fn hyperbolic_unimodularize(l: &IntegralLattice) -> Result<Unimodularization> {
    if !l.is_even() {
        return Err(Error::NotEven);
    }
    let n = l.rank();
    let dg = discriminant_group(l)?;
    let (copies, base) = if dg.is_trivial() {
        (1, l.orthogonal_sum(&hyperbolic_plane()))
    } else {
        (2, l.orthogonal_sum(&l.rescaled(-1)?).orthogonal_sum(&hyperbolic_plane()))
    };
    let mut gens = Vec::new();
    if copies == 2 {
        for (i, _) in dg.orders.iter().enumerate() {
            let mut coeffs = vec![BigInt::zero(); dg.orders.len()];
            coeffs[i] = BigInt::one();
            gens.push(spread(&glue_lift(&dg, &coeffs), &[1, 1], 2));
        }
    }
    debug_assert_eq!(base.rank(), copies * n + 2);
    let ov = overlattice_from_isotropic(&base, &IsotropicSubgroup { generators: gens })?;
    Ok(Unimodularization {
        input: l.clone(),
        copies,
        extra: 2,
        overlattice: ov,
    })
}

/// `2 |det L|`.
fn twist_modulus(l: &IntegralLattice) -> Result<BigInt> {
    Ok(l.abs_det()? * 2)
}

/// Smallest prime `s ≥ lower` with `s ≡ −1 (mod 2 det L)`.
pub fn dirichlet_prime(l: &IntegralLattice, lower: i64) -> Result<i64> {
    let m = twist_modulus(l)?
        .to_i64()
        .ok_or_else(|| Error::TooLarge("determinant".into()))?;
    let mut s = lower.max(2);
    let r = (s + 1).rem_euclid(m);
    if r != 0 {
        s += m - r;
    }
    while !is_prime(s) {
        s += m;
    }
    Ok(s)
}

/// Overlattice of `L ⊥ L[s]` glued by `{(x, ψx)}`; determinant `s^n`.
pub fn preg4_twist(l: &IntegralLattice, s: i64) -> Result<Unimodularization> {
    if !l.is_even() {
        return Err(Error::NotEven);
    }
    let m = twist_modulus(l)?
        .to_i64()
        .ok_or_else(|| Error::TooLarge("determinant".into()))?;
    if !is_prime(s) || (s + 1).rem_euclid(m) != 0 {
        return Err(Error::Congruence { s, modulus: m });
    }
    let dg = discriminant_group(l)?;
    let gens = (0..dg.orders.len())
        .map(|i| {
            let mut coeffs = vec![BigInt::zero(); dg.orders.len()];
            coeffs[i] = BigInt::one();
            spread(&glue_lift(&dg, &coeffs), &[1, 1], 0)
        })
        .collect();
    let base = l.orthogonal_sum(&l.rescaled(s)?);
    let ov = overlattice_from_isotropic(&base, &IsotropicSubgroup { generators: gens })?;
    Ok(Unimodularization {
        input: l.clone(),
        copies: 2,
        extra: 0,
        overlattice: ov,
    })
}

/// Outcome of extending one automorphism of `L` diagonally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionVerdict {
    pub extends: bool,
    /// The extension in the basis of `M` (row convention).
    pub matrix: Option<IntMat>,
}

/// For each `g ∈ Aut(L)` (row convention, `g G gᵀ = G`), whether
/// `diag(g, ..., g, 1_E)` maps `M` onto itself.
pub fn strong_extension_check(u: &Unimodularization, gens: &[IntMat]) -> Result<Vec<ExtensionVerdict>> {
    let n = u.input.rank();
    let big_n = u.overlattice.base.rank();
    let g_l = u.input.int_gram()?;
    let b = u.overlattice.basis_rat();
    let b_inv = rat_inverse(&b).ok_or(Error::Singular)?;
    let mut out = Vec::new();
    for g in gens {
        if g.len() != n || g.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("automorphism size differs from rank".into()));
        }
        if mat_mul(&mat_mul(g, &g_l), &transpose(g)) != g_l {
            return Err(Error::NotIsometry);
        }
        let mut diag = vec![vec![BigInt::zero(); big_n]; big_n];
        for c in 0..u.copies {
            for i in 0..n {
                for j in 0..n {
                    diag[c * n + i][c * n + j] = g[i][j].clone();
                }
            }
        }
        for t in u.copies * n..big_n {
            diag[t][t] = BigInt::one();
        }
        let m = rat_mat_mul(&rat_mat_mul(&b, &to_rat(&diag)), &b_inv);
        let extends = m.iter().flatten().all(|x| x.is_integer());
        out.push(ExtensionVerdict {
            extends,
            matrix: extends.then(|| m.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect()),
        })
    }
    Ok(out)
}

/// Automorphisms of a definite lattice found by backtracking over images
/// of the basis vectors.
#[derive(Debug, Clone)]
pub struct AutomorphismGenerators {
    pub generators: Vec<IntMat>,
    /// Order of the group generated, when the enumeration finished.
    pub order: Option<u64>,
    pub complete: bool,
}

/// Generators of `Aut(L)` for definite lattices of rank at most 8,
/// enumerating at most `cap` automorphisms.
pub fn lattice_automorphisms(l: &IntegralLattice, cap: usize, budget: &Budget) -> Result<AutomorphismGenerators> {
    let n = l.rank();
    if n > 8 {
        return Err(Error::TooLarge(format!("automorphisms of a rank {n} lattice")));
    }
    if !l.is_positive_definite() {
        return Err(Error::Indefinite);
    }
    let g = l.int_gram()?;
    let gi: Vec<Vec<i64>> = g.iter().map(|r| r.iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect()).collect();
    let mut candidates: Vec<Vec<Vec<i64>>> = Vec::with_capacity(n);
    for i in 0..n {
        let vs = short_vectors(l, &BigRational::from_integer(g[i][i].clone()))?;
        candidates.push(vs.iter().map(|v| v.to_i64().expect("small coordinates")).collect());
    }
    let ip = |a: &[i64], b: &[i64]| -> i64 {
        let mut s = 0;
        for i in 0..n {
            for j in 0..n {
                s += a[i] * gi[i][j] * b[j];
            }
        }
        s
    };
    let mut found: Vec<Vec<Vec<i64>>> = Vec::new();
    let mut ticker = Ticker::new(budget);
    let mut cur: Vec<Vec<i64>> = Vec::new();
    fn dfs(
        level: usize,
        n: usize,
        cand: &[Vec<Vec<i64>>],
        gi: &[Vec<i64>],
        ip: &dyn Fn(&[i64], &[i64]) -> i64,
        cur: &mut Vec<Vec<i64>>,
        found: &mut Vec<Vec<Vec<i64>>>,
        cap: usize,
        ticker: &mut Ticker,
    ) -> Result<bool> {
        ticker.tick()?;
        if level == n {
            found.push(cur.clone());
            return Ok(found.len() >= cap);
        }
        for v in &cand[level] {
            if (0..level).all(|j| ip(v, &cur[j]) == gi[level][j]) {
                cur.push(v.clone());
                let stop = dfs(level + 1, n, cand, gi, ip, cur, found, cap, ticker)?;
                cur.pop();
                if stop {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
    let hit_cap = dfs(0, n, &candidates, &gi, &ip, &mut cur, &mut found, cap, &mut ticker)?;
    // greedy generating set
    let mut gens: Vec<Vec<Vec<i64>>> = Vec::new();
    let mut group: HashSet<Vec<Vec<i64>>> = HashSet::new();
    let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    group.insert(id.clone());
    for a in &found {
        if group.contains(a) {
            continue;
        }
        gens.push(a.clone());
        group = closure(&gens, &id, cap.max(1) * 2);
    }
    let complete = !hit_cap;
    Ok(AutomorphismGenerators {
        generators: gens.iter().map(|m| crate::linalg::int_mat(m)).collect(),
        order: complete.then_some(found.len() as u64),
        complete,
    })
}

fn mul_i64(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn closure(gens: &[Vec<Vec<i64>>], id: &[Vec<i64>], cap: usize) -> HashSet<Vec<Vec<i64>>> {
    let mut seen: HashSet<Vec<Vec<i64>>> = HashSet::new();
    seen.insert(id.to_vec());
    let mut queue = VecDeque::from([id.to_vec()]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = mul_i64(&x, g);
            if seen.len() < cap && seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Signature `(positive, negative)` by exact Gram-Schmidt on the leading
/// minors of a congruent form.
pub fn signature(l: &IntegralLattice) -> (usize, usize) {
    let n = l.rank();
    let mut a = l.gram();
    let (mut pos, mut neg) = (0, 0);
    let mut i = 0;
    while i < n {
        // find a nonzero diagonal entry, creating one if needed
        let piv = (i..n).find(|&j| !a[j][j].is_zero());
        match piv {
            Some(p) => {
                a.swap(i, p);
                for row in a.iter_mut() {
                    row.swap(i, p);
                }
            }
            None => {
                let Some(j) = (i + 1..n).find(|&j| !a[i][j].is_zero()) else {
                    i += 1;
                    continue;
                };
                // e_i += e_j makes a[i][i] = 2 a[i][j] ≠ 0
                for c in 0..n {
                    let t = a[j][c].clone();
                    a[i][c] += t;
                }
                for r in 0..n {
                    let t = a[r][j].clone();
                    a[r][i] += t;
                }
            }
        }
        let d = a[i][i].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for r in i + 1..n {
            let f = &a[r][i] / &d;
            for c in i..n {
                let t = &f * &a[i][c];
                a[r][c] -= t;
            }
        }
        for c in i + 1..n {
            for r in i + 1..n {
                a[c][r] = a[r][c].clone();
            }
            a[i][c] = BigRational::zero();
            a[c][i] = BigRational::zero();
        }
        i += 1;
    }
    (pos, neg)
}
