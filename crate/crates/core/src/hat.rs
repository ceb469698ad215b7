//! The central extension `L̂` of an even lattice by `{±1}`, lifts of
//! lattice automorphisms to `L̂`, the torus action on symbolic frame
//! vectors, and the Miyamoto-involution bookkeeping on the codes `D_k`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::codes::d_code_basis;
use crate::error::{Error, Result};
use crate::frame::{FrameStabilizer, LatticeFrame};
use crate::lattice::{mod_rat, IntegralLattice};
use crate::linalg::{mat_mul, rat_inverse, rat_mat_mul, to_rat, transpose, IntMat};
use crate::monomial::MonomialMap;

/// `ε(a, b) = (−1)^{aᵀ E b}` for an F2 matrix `E`, lower triangular off
/// the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonCocycle {
    n: usize,
    // bit j of rows[i] is E_ij
    rows: Vec<u64>,
}

impl EpsilonCocycle {
    pub fn rank(&self) -> usize {
        self.n
    }

    /// `±1` table on basis pairs.
    pub fn table(&self) -> Vec<Vec<i8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| if self.rows[i] >> j & 1 == 1 { -1 } else { 1 }).collect())
            .collect()
    }

    fn parity(&self, a: &[i64], b: &[i64]) -> u32 {
        let bm = mask(b);
        let mut p = 0;
        for (i, &x) in a.iter().enumerate() {
            if x & 1 != 0 {
                p ^= (self.rows[i] & bm).count_ones() & 1;
            }
        }
        p
    }

    pub fn eval(&self, a: &[i64], b: &[i64]) -> i8 {
        if self.parity(a, b) == 1 {
            -1
        } else {
            1
        }
    }
}

fn mask(v: &[i64]) -> u64 {
    v.iter().enumerate().fold(0, |m, (i, &x)| m | ((x & 1) as u64) << i)
}

fn small_gram(l: &IntegralLattice) -> Result<Vec<Vec<i64>>> {
    l.int_gram()?
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().ok_or_else(|| Error::TooLarge("Gram entry".into()))).collect())
        .collect()
}

pub fn epsilon_from_basis(l: &IntegralLattice) -> Result<EpsilonCocycle> {
    if !l.is_even() {
        return Err(Error::NotEven);
    }
    let n = l.rank();
    if n > 64 {
        return Err(Error::TooLarge(format!("rank {n}")));
    }
    let g = small_gram(l)?;
    let mut rows = vec![0u64; n];
    for i in 0..n {
        if (g[i][i] / 2).rem_euclid(2) == 1 {
            rows[i] |= 1 << i;
        }
        for j in 0..i {
            if g[i][j].rem_euclid(2) == 1 {
                rows[i] |= 1 << j;
            }
        }
    }
    Ok(EpsilonCocycle { n, rows })
}

/// `(s, x)` with `s = ±1` and `x ∈ L` in basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HatElement {
    pub sign: i8,
    pub vec: Vec<i64>,
}

impl HatElement {
    pub fn new(sign: i8, vec: Vec<i64>) -> Self {
        HatElement { sign, vec }
    }
}

/// `L̂` for a fixed lattice and cocycle.
#[derive(Debug, Clone)]
pub struct HatGroup {
    pub gram: Vec<Vec<i64>>,
    pub eps: EpsilonCocycle,
}

impl HatGroup {
    pub fn new(l: &IntegralLattice) -> Result<Self> {
        Ok(HatGroup {
            eps: epsilon_from_basis(l)?,
            gram: small_gram(l)?,
        })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if a[i] != 0 {
                for j in 0..n {
                    s += a[i] * self.gram[i][j] * b[j];
                }
            }
        }
        s
    }

    pub fn identity(&self) -> HatElement {
        HatElement::new(1, vec![0; self.rank()])
    }

    pub fn mul(&self, a: &HatElement, b: &HatElement) -> HatElement {
        let v = a.vec.iter().zip(&b.vec).map(|(x, y)| x + y).collect();
        HatElement::new(a.sign * b.sign * self.eps.eval(&a.vec, &b.vec), v)
    }

    pub fn inv(&self, a: &HatElement) -> HatElement {
        HatElement::new(a.sign * self.eps.eval(&a.vec, &a.vec), a.vec.iter().map(|x| -x).collect())
    }

    pub fn square(&self, a: &HatElement) -> HatElement {
        self.mul(a, a)
    }

    /// `a b a^{-1} b^{-1}`.
    pub fn commutator(&self, a: &HatElement, b: &HatElement) -> HatElement {
        let ab = self.mul(a, b);
        self.mul(&self.mul(&ab, &self.inv(a)), &self.inv(b))
    }

    /// Checks `x̂² = (−1)^{(x,x)/2}` and `[x̂, ŷ] = (−1)^{(x,y)}` for one
    /// pair, plus associativity with a third element.
    pub fn relations_hold(&self, x: &[i64], y: &[i64], z: &[i64]) -> bool {
        let (a, b, c) = (
            HatElement::new(1, x.to_vec()),
            HatElement::new(1, y.to_vec()),
            HatElement::new(1, z.to_vec()),
        );
        let sq = self.square(&a);
        let sq_ok = sq.sign == pow_neg1(self.inner(x, x) / 2) && sq.vec.iter().zip(x).all(|(s, t)| *s == 2 * t);
        let com = self.commutator(&a, &b);
        let com_ok = com.sign == pow_neg1(self.inner(x, y)) && com.vec.iter().all(|&t| t == 0);
        let assoc = self.mul(&self.mul(&a, &b), &c) == self.mul(&a, &self.mul(&b, &c));
        let bilinear = self.eps.eval(&add(x, y), z) == self.eps.eval(x, z) * self.eps.eval(y, z);
        sq_ok && com_ok && assoc && bilinear
    }
}

fn pow_neg1(e: i64) -> i8 {
    if e.rem_euclid(2) == 1 {
        -1
    } else {
        1
    }
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Row convention: the image of `x` is `x · w`.
pub fn apply_matrix(w: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    let n = w.len();
    let mut out = vec![0; n];
    for (i, &a) in x.iter().enumerate() {
        if a != 0 {
            for j in 0..n {
                out[j] += a * w[i][j];
            }
        }
    }
    out
}

/// `(s, x) ↦ (s μ(x), x w)` with `μ` determined by its basis values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedAutomorphism {
    pub w: Vec<Vec<i64>>,
    pub mu: Vec<i8>,
    // F2 matrix of the symmetric form ε(x,y) ε(wx,wy)
    f: Vec<u64>,
}

impl LiftedAutomorphism {
    pub fn mu_of(&self, x: &[i64]) -> i8 {
        let mut p = 0u32;
        for (i, &a) in x.iter().enumerate() {
            if a & 1 != 0 && self.mu[i] == -1 {
                p ^= 1;
            }
            if self.f[i] >> i & 1 == 1 && (a * (a - 1) / 2).rem_euclid(2) == 1 {
                p ^= 1;
            }
            if a & 1 != 0 {
                for (j, &b) in x.iter().enumerate().skip(i + 1) {
                    if b & 1 != 0 && self.f[i] >> j & 1 == 1 {
                        p ^= 1;
                    }
                }
            }
        }
        if p == 1 {
            -1
        } else {
            1
        }
    }

    pub fn apply(&self, a: &HatElement) -> HatElement {
        HatElement::new(a.sign * self.mu_of(&a.vec), apply_matrix(&self.w, &a.vec))
    }

    pub fn is_identity_on_lattice(&self) -> bool {
        self.w.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)))
    }
}

/// Lift of `w` (rows are the images of the basis vectors) with `μ(e_i) =
/// mu[i]`.
pub fn lift_automorphism(hat: &HatGroup, w: &[Vec<i64>], mu: &[i8]) -> Result<LiftedAutomorphism> {
    let n = hat.rank();
    if w.len() != n || w.iter().any(|r| r.len() != n) || mu.len() != n {
        return Err(Error::Dimension("lift data does not match the rank".into()));
    }
    if mu.iter().any(|&m| m != 1 && m != -1) {
        return Err(Error::Dimension("basis signs must be +-1".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if hat.inner(&w[i], &w[j]) != hat.gram[i][j] {
                return Err(Error::NotIsometry);
            }
        }
    }
    let bw: Vec<Vec<i64>> = w.to_vec();
    let mut f = vec![0u64; n];
    for i in 0..n {
        for j in 0..n {
            let e = hat.eps.rows[i] >> j & 1;
            let ew = u64::from(hat.eps.parity(&bw[i], &bw[j]));
            if (e ^ ew) == 1 {
                f[i] |= 1 << j;
            }
        }
    }
    Ok(LiftedAutomorphism {
        w: w.to_vec(),
        mu: mu.to_vec(),
        f,
    })
}

/// `φ ∘ ψ` (apply `psi` first).
pub fn compose_lifts(hat: &HatGroup, phi: &LiftedAutomorphism, psi: &LiftedAutomorphism) -> Result<LiftedAutomorphism> {
    let n = hat.rank();
    let mut w = Vec::with_capacity(n);
    let mut mu = Vec::with_capacity(n);
    for i in 0..n {
        let e = HatElement::new(1, (0..n).map(|j| i64::from(i == j)).collect());
        let img = phi.apply(&psi.apply(&e));
        mu.push(img.sign);
        w.push(img.vec);
    }
    lift_automorphism(hat, &w, &mu)
}

/// Whether `φ` respects the group law on the given pairs.
pub fn is_hat_homomorphism(hat: &HatGroup, phi: &LiftedAutomorphism, samples: &[(Vec<i64>, Vec<i64>)]) -> bool {
    samples.iter().all(|(x, y)| {
        let a = HatElement::new(1, x.clone());
        let b = HatElement::new(-1, y.clone());
        let lhs = phi.apply(&hat.mul(&a, &b));
        let rhs = hat.mul(&phi.apply(&a), &phi.apply(&b));
        lhs == rhs && hat.inner(&phi.apply(&a).vec, &phi.apply(&b).vec) == hat.inner(x, y)
    })
}

/// All `2^n` lifts of `w` (rank at most 16).
pub fn all_lifts(hat: &HatGroup, w: &[Vec<i64>]) -> Result<Vec<LiftedAutomorphism>> {
    let n = hat.rank();
    if n > 16 {
        return Err(Error::TooLarge(format!("2^{n} lifts")));
    }
    (0u32..1 << n)
        .map(|m| {
            let mu: Vec<i8> = (0..n).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect();
            lift_automorphism(hat, w, &mu)
        })
        .collect()
}

/// Whether a lift of the identity is a character of `L/2L`.
pub fn is_kernel_element(phi: &LiftedAutomorphism, samples: &[(Vec<i64>, Vec<i64>)]) -> bool {
    phi.is_identity_on_lattice()
        && samples
            .iter()
            .all(|(x, y)| phi.mu_of(&add(x, y)) == phi.mu_of(x) * phi.mu_of(y))
}

/// `h ∈ L ⊗ Q`, acting on `e^x` by `exp(2πi (h, x))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusElement {
    pub h: Vec<BigRational>,
}

/// `ω_{i,±} = x_i(−1)²/16 ± (e^{x_i} + e^{−x_i})/4` as a label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrameVectorSym {
    pub pair: usize,
    pub plus: bool,
}

/// All `2n` symbols of a frame.
pub fn frame_symbols(n: usize) -> Vec<FrameVectorSym> {
    (0..n)
        .flat_map(|pair| [true, false].map(|plus| FrameVectorSym { pair, plus }))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusFrameAction {
    /// `(h, x_i) mod 1`.
    pub phases: Vec<BigRational>,
    pub fixes: bool,
    pub stabilizes: bool,
    /// Image of each symbol when the frame is stabilized.
    pub images: Option<Vec<FrameVectorSym>>,
}

pub fn torus_action_on_frame(l: &IntegralLattice, h: &TorusElement, x: &LatticeFrame) -> TorusFrameAction {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let phases: Vec<BigRational> = x
        .vectors()
        .iter()
        .map(|v| mod_rat(&l.inner(&h.h, &v.coords), 1))
        .collect();
    let fixes = phases.iter().all(|p| p.is_zero());
    let stabilizes = phases.iter().all(|p| p.is_zero() || *p == half);
    let images = stabilizes.then(|| {
        frame_symbols(x.n())
            .into_iter()
            .map(|s| FrameVectorSym {
                pair: s.pair,
                plus: if phases[s.pair].is_zero() { s.plus } else { !s.plus },
            })
            .collect()
    });
    TorusFrameAction {
        phases,
        fixes,
        stabilizes,
        images,
    }
}

/// Image of `ω_{i,±}` under a lift whose lattice part maps the frame to
/// itself; `None` if some `x_i` is not sent to a frame vector.
pub fn lift_action_on_frame(phi: &LiftedAutomorphism, frame: &[Vec<i64>]) -> Option<Vec<FrameVectorSym>> {
    let n = frame.len();
    let mut images = Vec::with_capacity(2 * n);
    for x in frame {
        let img = phi.apply(&HatElement::new(1, x.clone()));
        let neg: Vec<i64> = img.vec.iter().map(|t| -t).collect();
        let j = frame.iter().position(|y| *y == img.vec || *y == neg)?;
        // e^{â} + e^{â^{-1}} only depends on â up to inversion, so the
        // sign of ω flips exactly when μ(x_i) = −1
        for plus in [true, false] {
            images.push(FrameVectorSym {
                pair: j,
                plus: if img.sign == 1 { plus } else { !plus },
            });
        }
    }
    Some(images)
}

/// Lattice automorphism (row convention) induced by a monomial map on the
/// frame: `x_i ↦ s_i x_{π(i)}`.
pub fn monomial_to_lattice(frame: &IntMat, m: &MonomialMap) -> Result<Vec<Vec<i64>>> {
    let n = frame.len();
    let mut target: IntMat = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for c in 0..n {
            target[i][c] = &frame[m.perm[i]][c] * BigInt::from(m.signs[i]);
        }
    }
    // X W = S X
    let xinv = rat_inverse(&to_rat(frame)).ok_or(Error::Singular)?;
    let w = rat_mat_mul(&xinv, &to_rat(&target));
    w.iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    if x.is_integer() {
                        x.to_integer().to_i64().ok_or_else(|| Error::TooLarge("matrix entry".into()))
                    } else {
                        Err(Error::NotIsometry)
                    }
                })
                .collect()
        })
        .collect()
}

/// Orders of the frame stabilizers in `W̃ = 2^n.W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WtildeStabilizer {
    /// Lifts fixing every pair `{ω_{i,+}, ω_{i,−}}`: `2^n |D_X|`.
    pub pairwise_order: BigUint,
    /// Lifts permuting the `2n` symbols: `2^n |W_X|`.
    pub setwise_order: BigUint,
    /// Number of lifts whose symbolic action was checked.
    pub lifts_checked: usize,
}

/// Checks the symbolic action of every lift of each `D_X` element and of
/// sampled lifts of the `W_X` generators, then reports the orders.
pub fn wtilde_frame_stabilizer(l: &IntegralLattice, x: &LatticeFrame, stab: &FrameStabilizer) -> Result<WtildeStabilizer> {
    let hat = HatGroup::new(l)?;
    let n = x.n();
    let fm = x.matrix();
    let frame: Vec<Vec<i64>> = fm
        .iter()
        .map(|r| r.iter().map(|v| v.to_i64().ok_or_else(|| Error::TooLarge("frame entry".into()))).collect())
        .collect::<Result<_>>()?;
    let mut checked = 0;
    let mut dx_lifts_ok = 0u64;
    let sample_mus: Vec<Vec<i8>> = (0..n.min(16))
        .map(|t| (0..n).map(|i| if (i + t) % 3 == 0 { -1 } else { 1 }).collect())
        .collect();
    for d in &stab.dx {
        let w = monomial_to_lattice(&fm, d)?;
        let mut all_ok = true;
        for mu in &sample_mus {
            let phi = lift_automorphism(&hat, &w, mu)?;
            checked += 1;
            let imgs = lift_action_on_frame(&phi, &frame).ok_or(Error::NotIsometry)?;
            if imgs.iter().enumerate().any(|(t, s)| s.pair != t / 2) {
                all_ok = false;
            }
        }
        if all_ok {
            dx_lifts_ok += 1;
        }
    }
    for g in &stab.wx_generators {
        let w = monomial_to_lattice(&fm, g)?;
        for mu in &sample_mus {
            let phi = lift_automorphism(&hat, &w, mu)?;
            checked += 1;
            let imgs = lift_action_on_frame(&phi, &frame).ok_or(Error::NotIsometry)?;
            let moves_pair = imgs.iter().enumerate().any(|(t, s)| s.pair != t / 2);
            if moves_pair == g.is_diagonal() {
                return Err(Error::InvalidFrame("lift action disagrees with W_X / D_X".into()));
            }
        }
    }
    if BigUint::from(dx_lifts_ok) != stab.dx_order {
        return Err(Error::InvalidFrame("a D_X lift moves a pair".into()));
    }
    Ok(WtildeStabilizer {
        pairwise_order: (BigUint::one() << n) * &stab.dx_order,
        setwise_order: (BigUint::one() << n) * &stab.wx_order,
        lifts_checked: checked,
    })
}

/// Characters of `D_k` as bit masks over the list basis of `d_code(k)`:
/// bit `j` set means the value on basis word `j` is `−1`.
pub type Character = u32;

fn character_value(chi: Character, combo: u32) -> i8 {
    if (chi & combo).count_ones() % 2 == 1 {
        -1
    } else {
        1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiyamotoSet {
    pub k: usize,
    /// `χ_i` for each of the 16 coordinates.
    pub per_coordinate: Vec<Character>,
    /// Distinct characters, sorted.
    pub distinct: Vec<Character>,
    /// `{χ : χ(1^16) = 1}`, the codimension-1 subgroup.
    pub subgroup: Vec<Character>,
    /// `distinct` is exactly the nontrivial coset of `subgroup`.
    pub is_affine_coset: bool,
}

/// `χ_i(I) = (−1)^{I_i}` on `d_code(k)` for `i = 0..16`.
pub fn miyamoto_involutions(k: usize) -> Result<MiyamotoSet> {
    let basis = d_code_basis(k)?;
    let per_coordinate: Vec<Character> = (0..16)
        .map(|i| basis.iter().enumerate().fold(0, |c, (j, &b)| c | ((b >> i & 1) as u32) << j))
        .collect();
    let mut distinct = per_coordinate.clone();
    distinct.sort_unstable();
    distinct.dedup();
    // basis word 0 is 1^16
    let subgroup: Vec<Character> = (0..1u32 << k).filter(|c| c & 1 == 0).collect();
    let differences: Vec<Character> = {
        let mut d: Vec<Character> = distinct.iter().flat_map(|a| distinct.iter().map(move |b| a ^ b)).collect();
        d.sort_unstable();
        d.dedup();
        d
    };
    let coset: Vec<Character> = {
        let mut c: Vec<Character> = subgroup.iter().map(|h| h ^ distinct[0]).collect();
        c.sort_unstable();
        c
    };
    let is_affine_coset = coset == distinct
        && differences.iter().all(|d| subgroup.contains(d))
        && distinct.iter().all(|c| !subgroup.contains(c));
    Ok(MiyamotoSet {
        k,
        per_coordinate,
        distinct,
        subgroup,
        is_affine_coset,
    })
}

/// `dim V_1^I` by the weight of `I ∈ D_k`.
pub fn v1_dimension(k: usize, weight: u32) -> Result<u64> {
    if !(1..=5).contains(&k) {
        return Err(Error::OutOfRange {
            name: "k",
            value: k as i64,
            range: "1..=5",
        });
    }
    let d = 1u64 << (5 - k);
    match weight {
        0 => Ok(8 * (d - 1)),
        8 => Ok(8 * d),
        16 => Ok(1 << (8 - k)),
        w => Err(Error::Dimension(format!("no word of weight {w} in D_k"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutionClass {
    pub minus_dim: u64,
    pub plus_dim: u64,
    pub total_dim: u64,
    /// `"2A"` (112), `"2B"` (128) or `"?"`.
    pub class: &'static str,
}

pub fn involution_class(k: usize, chi: Character) -> Result<InvolutionClass> {
    let basis = d_code_basis(k)?;
    if chi & ((1 << k) - 1) == 0 {
        return Err(Error::TrivialCharacter);
    }
    if chi >> k != 0 {
        return Err(Error::Dimension(format!("character has more than {k} bits")));
    }
    let (mut minus, mut plus) = (0u64, 0u64);
    for combo in 0u32..1 << k {
        let word = basis
            .iter()
            .enumerate()
            .filter(|(j, _)| combo >> j & 1 == 1)
            .fold(0u64, |w, (_, &b)| w ^ b);
        let dim = v1_dimension(k, word.count_ones())?;
        if character_value(chi, combo) == -1 {
            minus += dim;
        } else {
            plus += dim;
        }
    }
    let class = match minus {
        128 => "2B",
        112 => "2A",
        _ => "?",
    };
    Ok(InvolutionClass {
        minus_dim: minus,
        plus_dim: plus,
        total_dim: minus + plus,
        class,
    })
}

/// Elementary divisors of `(⅛M + L*)/L*` (same as the frame module).
pub fn torus_stabilizer_type(l: &IntegralLattice, x: &LatticeFrame) -> Result<Vec<BigInt>> {
    crate::frame::torus_quotient_type(l, x, 8)
}

/// Integer rows of `w` with `w G wᵀ = G` checked.
pub fn is_isometry(l: &IntegralLattice, w: &IntMat) -> Result<bool> {
    let g = l.int_gram()?;
    Ok(mat_mul(&mat_mul(w, &g), &transpose(w)) == g)
}

/// `h = x_i / m` for a frame vector.
pub fn frame_torus_element(x: &LatticeFrame, i: usize, m: i64) -> TorusElement {
    let s = BigRational::new(BigInt::one(), BigInt::from(m));
    TorusElement {
        h: x.vectors()[i].scale(&s).coords,
    }
}

/// Basis pairs `(e_i, e_j)` and sums `e_i + e_j`, the sampling set for the
/// relation checks.
pub fn basis_samples(n: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..n {
        out.push((0..n).map(|t| i64::from(t == i)).collect());
    }
    for i in 0..n {
        for j in i + 1..n {
            out.push((0..n).map(|t| i64::from(t == i || t == j)).collect());
        }
    }
    out
}
