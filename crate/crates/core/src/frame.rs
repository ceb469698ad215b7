//! Lattice frames, the glue code `Δ ≤ (Z/4)^n`, the monomial stabilizers
//! `W_X ⊇ D_X`, the order bookkeeping for `G ∩ N`, and the E8 census.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::budget::{Budget, Ticker};
use crate::codes::{classify_markings, hamming_code, Marking};
use crate::error::{Error, Result};
use crate::lattice::{e8_code_lattice, short_vectors, CodeLattice, IntegralLattice, LatticeVector};
use crate::linalg::{quotient_type, rat_inverse, smith_form, IntMat};
use crate::monomial::{span_words, CodeAutSearch, MonomialMap, Packing};

/// `|W(E8)|`.
pub const WEYL_E8_ORDER: u64 = 696_729_600;

/// Largest frame size accepted by the monomial stabilizer search.
pub const MAX_STABILIZER_N: usize = 12;

/// One representative `x_i` per sign-pair `{±x_i}` of norm-4 vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeFrame {
    vectors: Vec<LatticeVector>,
}

impl LatticeFrame {
    /// Checks membership, norms 4 and pairwise orthogonality.
    pub fn new(l: &IntegralLattice, vectors: Vec<LatticeVector>) -> Result<Self> {
        let n = l.rank();
        if vectors.len() != n {
            return Err(Error::InvalidFrame(format!("{} vectors for rank {n}", vectors.len())));
        }
        let four = BigRational::from_integer(4.into());
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != n {
                return Err(Error::Dimension(format!("vector {i} has length {}", v.len())));
            }
            if !v.is_integral() {
                return Err(Error::NotInLattice(v.to_string()));
            }
            if l.norm(v) != four {
                return Err(Error::InvalidFrame(format!("vector {i} has norm {}", l.norm(v))));
            }
            for (j, w) in vectors[..i].iter().enumerate() {
                if !l.inner(&v.coords, &w.coords).is_zero() {
                    return Err(Error::InvalidFrame(format!("vectors {j} and {i} are not orthogonal")));
                }
            }
        }
        Ok(LatticeFrame { vectors })
    }

    pub fn vectors(&self) -> &[LatticeVector] {
        &self.vectors
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    /// Integer coordinate rows of the representatives.
    pub fn matrix(&self) -> IntMat {
        self.vectors
            .iter()
            .map(|v| v.to_int().expect("frame vectors are integral"))
            .collect()
    }

    /// Same frame with representatives `signs[i] * x_{perm[i]}`.
    pub fn reoriented(&self, perm: &[usize], signs: &[i8]) -> LatticeFrame {
        let vectors = perm
            .iter()
            .zip(signs)
            .map(|(&p, &s)| if s < 0 { self.vectors[p].neg() } else { self.vectors[p].clone() })
            .collect();
        LatticeFrame { vectors }
    }
}

/// A subgroup of `(Z/4)^n` given by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Z4Code {
    n: usize,
    generators: Vec<Vec<u8>>,
}

impl Z4Code {
    pub fn new(n: usize, generators: Vec<Vec<u8>>) -> Result<Self> {
        if generators.iter().any(|g| g.len() != n) {
            return Err(Error::Dimension("generator length differs from n".into()));
        }
        let generators = generators
            .into_iter()
            .map(|g| g.into_iter().map(|x| x % 4).collect::<Vec<u8>>())
            .filter(|g| g.iter().any(|&x| x != 0))
            .collect();
        Ok(Z4Code { n, generators })
    }

    pub fn zero(n: usize) -> Self {
        Z4Code {
            n,
            generators: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Vec<u8>] {
        &self.generators
    }

    /// All words, capped at `2^20`.
    pub fn words(&self) -> Result<Vec<Vec<u8>>> {
        let p = Packing::new(self.n, 4)?;
        let gens: Vec<u64> = self.generators.iter().map(|g| p.pack(g)).collect();
        Ok(span_words(&p, &gens, 1 << 20)?.into_iter().map(|w| p.unpack(w)).collect())
    }

    /// `|Δ| = 2^ℓ 4^k`.
    pub fn order(&self) -> BigUint {
        let (l, k) = abelian_type(self);
        BigUint::one() << (l + 2 * k)
    }

    /// Reduction mod 2 of the code, as bit masks.
    pub fn mod2_rank(&self) -> usize {
        let rows: Vec<u64> = self
            .generators
            .iter()
            .map(|g| g.iter().enumerate().fold(0u64, |m, (i, &x)| m | (u64::from(x & 1)) << i))
            .collect();
        crate::codes::rref(&rows).len()
    }
}

/// `(ℓ, k)` with `Δ ≅ 2^ℓ × 4^k`, from the Smith form of the generator
/// lifts together with `4 Z^n`.
pub fn abelian_type(d: &Z4Code) -> (usize, usize) {
    let n = d.n;
    let mut rows: IntMat = d
        .generators
        .iter()
        .map(|g| g.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    for i in 0..n {
        let mut r = vec![BigInt::zero(); n];
        r[i] = BigInt::from(4);
        rows.push(r);
    }
    if n == 0 {
        return (0, 0);
    }
    let s = smith_form(&rows);
    let (mut l, mut k) = (0, 0);
    for dv in &s.diag {
        if dv.is_one() {
            k += 1;
        } else if *dv == BigInt::from(2) {
            l += 1;
        }
    }
    (l, k)
}

/// Human-readable `2^ℓ x 4^k`.
pub fn type_string(l: usize, k: usize) -> String {
    match (l, k) {
        (0, 0) => "1".into(),
        (0, k) => format!("4^{k}"),
        (l, 0) => format!("2^{l}"),
        (l, k) => format!("2^{l} x 4^{k}"),
    }
}

/// Image of `L/M` in `M*/M ≅ (Z/4)^n` via `v ↦ ((v, x_i) mod 4)_i`.
pub fn delta_code(l: &IntegralLattice, x: &LatticeFrame) -> Result<Z4Code> {
    let g = l.int_gram()?;
    let n = l.rank();
    let xm = x.matrix();
    let mut gens = Vec::with_capacity(n);
    for j in 0..n {
        let word: Vec<u8> = xm
            .iter()
            .map(|xi| {
                let ip: BigInt = xi.iter().zip(&g[j]).map(|(a, b)| a * b).sum();
                let r: BigInt = ((ip % 4) + 4) % 4;
                r.to_u8().expect("residue mod 4")
            })
            .collect();
        gens.push(word);
    }
    Z4Code::new(n, gens)
}

pub fn frame_from_marking(cl: &CodeLattice, m: &Marking) -> Result<LatticeFrame> {
    let n = cl.lattice.rank();
    if m.length() != n {
        return Err(Error::InvalidMarking(format!("marking of length {} for rank {n}", m.length())));
    }
    let mut vectors = Vec::with_capacity(n);
    for &(a, b) in m.pairs() {
        for sign in [1i64, -1] {
            // √2(e_a ± e_b) is (2e_a ± 2e_b)/√2
            let mut y = vec![BigInt::zero(); n];
            y[a] = BigInt::from(2);
            y[b] = BigInt::from(2 * sign);
            vectors.push(cl.coords_of_ambient(&y)?);
        }
    }
    LatticeFrame::new(&cl.lattice, vectors)
}

/// `W_X` (all monomials preserving `Δ`) and its diagonal part `D_X`.
#[derive(Debug, Clone)]
pub struct FrameStabilizer {
    pub wx_generators: Vec<MonomialMap>,
    pub wx_order: BigUint,
    pub dx: Vec<MonomialMap>,
    pub dx_order: BigUint,
}

pub fn frame_stabilizer_wx(l: &IntegralLattice, x: &LatticeFrame) -> Result<FrameStabilizer> {
    code_stabilizer(&delta_code(l, x)?, &Budget::from_env())
}

pub fn code_stabilizer(d: &Z4Code, budget: &Budget) -> Result<FrameStabilizer> {
    let n = d.n();
    if n > MAX_STABILIZER_N {
        return Err(Error::TooLarge(format!("monomial search on {n} coordinates")));
    }
    let p = Packing::new(n, 4)?;
    let gens: Vec<u64> = d.generators().iter().map(|g| p.pack(g)).collect();
    let words = span_words(&p, &gens, 1 << 20)?;
    let search = CodeAutSearch::new(p, words, gens, true, budget);
    let group = search.run()?;
    let dx = search.diagonal_elements();
    Ok(FrameStabilizer {
        wx_generators: group.generators,
        wx_order: group.order,
        dx_order: BigUint::from(dx.len()),
        dx,
    })
}

/// The invariants of `G ∩ N` attached to a frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameInvariants {
    pub n: usize,
    pub l: usize,
    pub k: usize,
    pub e: usize,
    pub wx_order: BigUint,
    pub dx_order: BigUint,
    pub gd_order: BigUint,
    /// Computed type of `(½M + L*)/L*`.
    pub gd_type: Vec<BigInt>,
    pub gc_order: BigUint,
    /// Computed type of `(⅛M + L*)/L*`.
    pub gcapt_type: Vec<BigInt>,
    /// `2^{n−ℓ−k} × 4^ℓ × 8^k`.
    pub gcapt_formula: Vec<BigInt>,
    pub gcapt_order: BigUint,
    pub g_over_gc_order: BigUint,
    /// Full `|G|`, known for E8 frames only.
    pub g_order: Option<BigUint>,
}

impl FrameInvariants {
    pub fn delta_type(&self) -> String {
        type_string(self.l, self.k)
    }
}

pub fn gcapn_invariants(l: &IntegralLattice, x: &LatticeFrame) -> Result<FrameInvariants> {
    let stab = frame_stabilizer_wx(l, x)?;
    gcapn_invariants_with(l, x, &stab)
}

/// Elementary divisors of `(M/m + L*)/L*`.
pub fn torus_quotient_type(l: &IntegralLattice, x: &LatticeFrame, m: i64) -> Result<Vec<BigInt>> {
    let dual = rat_inverse(&l.gram()).ok_or(Error::Singular)?;
    let inv_m = BigRational::new(BigInt::one(), BigInt::from(m));
    let big: Vec<Vec<BigRational>> = x.vectors().iter().map(|v| v.scale(&inv_m).coords).collect();
    quotient_type(&big, &dual)
}

pub fn gcapn_invariants_with(l: &IntegralLattice, x: &LatticeFrame, stab: &FrameStabilizer) -> Result<FrameInvariants> {
    let n = x.n();
    let (dl, dk) = abelian_type(&delta_code(l, x)?);
    let e = log2_exact(&stab.dx_order)
        .ok_or_else(|| Error::InvalidFrame(format!("|D_X| = {} is not a power of 2", stab.dx_order)))?;
    let gd_type = torus_quotient_type(l, x, 2)?;
    let gcapt_type = torus_quotient_type(l, x, 8)?;
    let mut gcapt_formula = Vec::new();
    gcapt_formula.extend(std::iter::repeat(BigInt::from(2)).take(n.saturating_sub(dl + dk)));
    gcapt_formula.extend(std::iter::repeat(BigInt::from(4)).take(dl));
    gcapt_formula.extend(std::iter::repeat(BigInt::from(8)).take(dk));
    let prod = |v: &[BigInt]| -> BigUint { v.iter().map(|d| d.to_biguint().expect("positive")).product() };
    let g_over_gc_order = (BigUint::one() << n) * &stab.wx_order / &stab.dx_order;
    let gc_order = BigUint::one() << (dl + 2 * dk + e);
    let g_order = if l.rank() == 8 && l.abs_det()? == BigInt::one() && l.is_even() && l.is_positive_definite() {
        Some(frame_group_order_from(dk, &gc_order)?)
    } else {
        None
    };
    Ok(FrameInvariants {
        n,
        l: dl,
        k: dk,
        e,
        wx_order: stab.wx_order.clone(),
        dx_order: stab.dx_order.clone(),
        gd_order: prod(&gd_type),
        gd_type,
        gc_order,
        gcapt_order: prod(&gcapt_type),
        gcapt_type,
        gcapt_formula,
        g_over_gc_order,
        g_order,
    })
}

fn log2_exact(x: &BigUint) -> Option<usize> {
    let b = x.bits();
    (b > 0 && *x == BigUint::one() << (b - 1)).then(|| (b - 1) as usize)
}

fn factorial(n: u64) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

/// `|AGL(m, 2)| = 2^m ∏_{i<m} (2^m − 2^i)`.
pub fn agl_order(m: u32) -> BigUint {
    let two_m = BigUint::one() << m;
    (0..m).fold(two_m.clone(), |acc, i| acc * (&two_m - (BigUint::one() << i)))
}

/// `|GL(m, 2)|`.
pub fn gl2_order(m: u32) -> BigUint {
    let two_m = BigUint::one() << m;
    (0..m).fold(BigUint::one(), |acc, i| acc * (&two_m - (BigUint::one() << i)))
}

fn check_k(k: usize) -> Result<()> {
    if (1..=5).contains(&k) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "k",
            value: k as i64,
            range: "1..=5",
        })
    }
}

/// `|Sym_d ≀ AGL(k−1, 2)| = (d!)^{2^{k−1}} |AGL(k−1, 2)|` with `d = 2^{5−k}`.
pub fn order_sym_wr_agl(k: usize) -> Result<BigUint> {
    check_k(k)?;
    let d = 1u64 << (5 - k);
    let copies = 1u32 << (k - 1);
    Ok(factorial(d).pow(copies) * agl_order(k as u32 - 1))
}

fn frame_group_order_from(k: usize, gc: &BigUint) -> Result<BigUint> {
    Ok(gc * order_sym_wr_agl(k)?)
}

/// `|G_C|` for the frames of E8 with `Δ ≅ 2^{8−2k} × 4^k`, `k ≤ 4`,
/// computed from a searched frame; `2^5` for `k = 5`.
pub fn gc_order(k: usize) -> Result<BigUint> {
    check_k(k)?;
    if k == 5 {
        return Ok(BigUint::from(32u32));
    }
    static CACHE: OnceLock<Vec<BigUint>> = OnceLock::new();
    if let Some(v) = CACHE.get() {
        return Ok(v[k - 1].clone());
    }
    let e8 = e8_code_lattice().lattice;
    let budget = Budget::from_env();
    let mut orders = Vec::new();
    for kk in 1..=4 {
        let x = find_frame_of_type(&e8, (8 - 2 * kk, kk), &budget)?
            .ok_or_else(|| Error::InvalidFrame(format!("no E8 frame with k = {kk}")))?;
        let stab = code_stabilizer(&delta_code(&e8, &x)?, &budget)?;
        let e = log2_exact(&stab.dx_order).unwrap_or(0);
        orders.push(BigUint::one() << (8 - 2 * kk + 2 * kk + e));
    }
    let v = CACHE.get_or_init(|| orders);
    Ok(v[k - 1].clone())
}

/// `|G| = |G_C| · |Sym_d ≀ AGL(k−1, 2)|`.
pub fn frame_group_order(k: usize) -> Result<BigUint> {
    frame_group_order_from(k, &gc_order(k)?)
}

/// Norm-4 sign-pair representatives and the frames among them, as index
/// lists into `pairs`.
#[derive(Debug, Clone)]
pub struct FrameCensus {
    pub rank: usize,
    pub pairs: Vec<Vec<i64>>,
    pub frames: Vec<Vec<u16>>,
}

impl FrameCensus {
    pub fn frame(&self, l: &IntegralLattice, idx: usize) -> Result<LatticeFrame> {
        let vectors = self.frames[idx]
            .iter()
            .map(|&p| LatticeVector::from_ints(&self.pairs[p as usize]))
            .collect();
        LatticeFrame::new(l, vectors)
    }
}

/// Sign-pair representatives (first nonzero coordinate positive) of the
/// norm-4 vectors, with the orthogonality graph as bitsets.
fn norm4_graph(l: &IntegralLattice) -> Result<(Vec<Vec<i64>>, Vec<Vec<u64>>)> {
    if !l.is_even() {
        return Err(Error::NotEven);
    }
    let g: Vec<Vec<i64>> = l
        .int_gram()?
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().ok_or_else(|| Error::TooLarge("Gram entry".into()))).collect())
        .collect::<Result<_>>()?;
    let vs = short_vectors(l, &BigRational::from_integer(4.into()))?;
    let mut pairs: Vec<Vec<i64>> = Vec::new();
    for v in vs {
        let c = v.to_i64().ok_or_else(|| Error::TooLarge("vector coordinate".into()))?;
        if c.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0) {
            pairs.push(c);
        }
    }
    pairs.sort();
    if pairs.len() > u16::MAX as usize {
        return Err(Error::TooLarge(format!("{} norm-4 pairs", pairs.len())));
    }
    let n = l.rank();
    let gv: Vec<Vec<i64>> = pairs
        .iter()
        .map(|v| (0..n).map(|j| (0..n).map(|i| v[i] * g[i][j]).sum()).collect())
        .collect();
    let words = pairs.len().div_ceil(64);
    let mut adj = vec![vec![0u64; words]; pairs.len()];
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            let ip: i64 = gv[i].iter().zip(&pairs[j]).map(|(a, b)| a * b).sum();
            if ip == 0 {
                adj[i][j / 64] |= 1 << (j % 64);
                adj[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    Ok((pairs, adj))
}

fn above(words: usize, j: usize) -> Vec<u64> {
    let mut m = vec![0u64; words];
    for (w, slot) in m.iter_mut().enumerate() {
        if (w + 1) * 64 <= j + 1 {
            continue;
        }
        *slot = if w * 64 > j { u64::MAX } else { u64::MAX << (j % 64) << 1 };
    }
    m
}

/// Visits every clique of size `need` extending `cur` inside `cand`
/// (indices increasing). `visit` returning `true` stops the search.
fn cliques<F: FnMut(&[u16]) -> bool>(
    adj: &[Vec<u64>],
    cand: &[u64],
    need: usize,
    cur: &mut Vec<u16>,
    ticker: &mut Ticker,
    visit: &mut F,
) -> Result<bool> {
    ticker.tick()?;
    if need == 0 {
        return Ok(visit(cur));
    }
    if cand.iter().map(|w| w.count_ones() as usize).sum::<usize>() < need {
        return Ok(false);
    }
    let words = cand.len();
    for w in 0..words {
        let mut bits = cand[w];
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let j = w * 64 + b;
            let mask = above(words, j);
            let next: Vec<u64> = (0..words).map(|t| cand[t] & adj[j][t] & mask[t]).collect();
            cur.push(j as u16);
            let stop = cliques(adj, &next, need - 1, cur, ticker, visit)?;
            cur.pop();
            if stop {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// All frames of `l` (exhaustive clique search, no symmetry reduction).
pub fn frame_census(l: &IntegralLattice, budget: &Budget) -> Result<FrameCensus> {
    let (pairs, adj) = norm4_graph(l)?;
    let n = l.rank();
    let words = pairs.len().div_ceil(64);
    let frames: Vec<Vec<Vec<u16>>> = (0..pairs.len())
        .into_par_iter()
        .map(|i| {
            let mask = above(words, i);
            let cand: Vec<u64> = (0..words).map(|t| adj[i][t] & mask[t]).collect();
            let mut out = Vec::new();
            let mut cur = vec![i as u16];
            let mut ticker = Ticker::new(budget);
            cliques(&adj, &cand, n.saturating_sub(1), &mut cur, &mut ticker, &mut |c| {
                out.push(c.to_vec());
                false
            })?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let frames = if n == 0 { Vec::new() } else { frames.into_iter().flatten().collect() };
    Ok(FrameCensus { rank: n, pairs, frames })
}

pub fn find_frames(l: &IntegralLattice) -> Result<Vec<LatticeFrame>> {
    let c = frame_census(l, &Budget::from_env())?;
    (0..c.frames.len()).map(|i| c.frame(l, i)).collect()
}

/// `k` (the 4-rank of `Δ`) for a frame given as integer rows: the F2 rank
/// of `X G mod 2`.
fn frame_k(g: &[Vec<i64>], rows: &[&Vec<i64>]) -> usize {
    let n = g.len();
    let masks: Vec<u64> = (0..n)
        .map(|j| {
            rows.iter().enumerate().fold(0u64, |m, (i, x)| {
                let ip: i64 = (0..n).map(|t| x[t] * g[t][j]).sum();
                m | ((ip.rem_euclid(2) as u64) << i)
            })
        })
        .collect();
    crate::codes::rref(&masks).len()
}

/// `ℓ` from `|Δ|² det(L) = 4^n`.
fn frame_l(l: &IntegralLattice, k: usize) -> Result<usize> {
    let det = l.abs_det()?;
    let n = l.rank();
    let sq = num_integer::Roots::sqrt(&det);
    if &sq * &sq != det {
        return Err(Error::InvalidFrame("determinant is not a square".into()));
    }
    let bits = sq.bits() as usize - 1;
    if sq != BigInt::one() << bits || n < bits + 2 * k {
        return Err(Error::InvalidFrame("determinant is not a power of 4".into()));
    }
    Ok(n - bits - 2 * k)
}

/// First frame (in clique order) with `Δ ≅ 2^ℓ × 4^k`.
pub fn find_frame_of_type(l: &IntegralLattice, lk: (usize, usize), budget: &Budget) -> Result<Option<LatticeFrame>> {
    let (pairs, adj) = norm4_graph(l)?;
    let n = l.rank();
    let g: Vec<Vec<i64>> = l
        .int_gram()?
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().unwrap_or(0)).collect())
        .collect();
    let words = pairs.len().div_ceil(64);
    let full: Vec<u64> = (0..words)
        .map(|w| {
            let lo = w * 64;
            let hi = (lo + 64).min(pairs.len());
            if hi - lo == 64 { u64::MAX } else { (1u64 << (hi - lo)) - 1 }
        })
        .collect();
    let mut found: Option<Vec<u16>> = None;
    let mut ticker = Ticker::new(budget);
    let mut err = None;
    cliques(&adj, &full, n, &mut Vec::new(), &mut ticker, &mut |c| {
        let rows: Vec<&Vec<i64>> = c.iter().map(|&p| &pairs[p as usize]).collect();
        let k = frame_k(&g, &rows);
        match frame_l(l, k) {
            Ok(ll) if (ll, k) == lk => {
                found = Some(c.to_vec());
                true
            }
            Ok(_) => false,
            Err(e) => {
                err = Some(e);
                true
            }
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    found
        .map(|c| LatticeFrame::new(l, c.iter().map(|&p| LatticeVector::from_ints(&pairs[p as usize])).collect()))
        .transpose()
}

/// One row of the E8 frame table.
#[derive(Debug, Clone)]
pub struct E8FrameClass {
    pub name: &'static str,
    pub l: usize,
    pub k: usize,
    pub count: u64,
    pub wx_order: BigUint,
    pub dx_order: BigUint,
    pub representative: LatticeFrame,
    /// Frames of the class whose stabilizer orders were recomputed.
    pub sampled: usize,
}

#[derive(Debug, Clone)]
pub struct E8Classification {
    pub total: u64,
    pub classes: Vec<E8FrameClass>,
    pub weyl_order: BigUint,
    /// Orbits of Virasoro frames: the four lattice classes plus one `k = 5`
    /// orbit with no lattice frame in this model.
    pub vf_orbits: usize,
}

pub fn class_name(l: usize, k: usize) -> &'static str {
    match (l, k) {
        (6, 1) => "K8",
        (4, 2) => "K8'",
        (2, 3) => "L8",
        (0, 4) => "O8",
        _ => "?",
    }
}

pub fn classify_e8_frames() -> Result<E8Classification> {
    classify_e8_frames_with(&Budget::from_env(), 3)
}

/// Census of all E8 frames grouped by `(ℓ, k)`, with `W_X`, `D_X` from a
/// representative and `samples` further random members of each class.
pub fn classify_e8_frames_with(budget: &Budget, samples: usize) -> Result<E8Classification> {
    let e8 = e8_code_lattice().lattice;
    let census = frame_census(&e8, budget)?;
    let g: Vec<Vec<i64>> = e8
        .int_gram()?
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().unwrap_or(0)).collect())
        .collect();
    let ks: Vec<usize> = census
        .frames
        .par_iter()
        .map(|f| {
            let rows: Vec<&Vec<i64>> = f.iter().map(|&p| &census.pairs[p as usize]).collect();
            frame_k(&g, &rows)
        })
        .collect();
    let mut members: std::collections::BTreeMap<(usize, usize), Vec<usize>> = Default::default();
    for (i, &k) in ks.iter().enumerate() {
        let l = frame_l(&e8, k)?;
        members.entry((l, k)).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut classes = Vec::new();
    for ((l, k), idx) in members.iter().rev() {
        let rep = census.frame(&e8, idx[0])?;
        let d = delta_code(&e8, &rep)?;
        if abelian_type(&d) != (*l, *k) {
            return Err(Error::InvalidFrame("fast type disagrees with Smith form".into()));
        }
        let stab = code_stabilizer(&d, budget)?;
        let picks: Vec<usize> = idx.choose_multiple(&mut rng, samples).copied().collect();
        for &i in &picks {
            let f = census.frame(&e8, i)?;
            let s = code_stabilizer(&delta_code(&e8, &f)?, budget)?;
            if s.wx_order != stab.wx_order || s.dx_order != stab.dx_order {
                return Err(Error::InvalidFrame(format!("stabilizer orders vary inside class ({l},{k})")));
            }
        }
        classes.push(E8FrameClass {
            name: class_name(*l, *k),
            l: *l,
            k: *k,
            count: idx.len() as u64,
            wx_order: stab.wx_order,
            dx_order: stab.dx_order,
            representative: rep,
            sampled: picks.len(),
        });
    }
    Ok(E8Classification {
        total: census.frames.len() as u64,
        classes,
        weyl_order: BigUint::from(WEYL_E8_ORDER),
        vf_orbits: 5,
    })
}

/// A frame of E8 obtained from a marking of `H8`, labelled by its class.
#[derive(Debug, Clone)]
pub struct MarkedFrame {
    pub label: &'static str,
    pub marking: Marking,
    pub frame: LatticeFrame,
    pub l: usize,
    pub k: usize,
}

/// Frames from one marking per `Aut(H8)`-orbit, ordered by `k` and
/// labelled `α, β, γ`.
pub fn e8_marked_frames() -> Result<Vec<MarkedFrame>> {
    let h8 = hamming_code(8)?;
    let cl = e8_code_lattice();
    let mut out = Vec::new();
    for o in classify_markings(&h8)? {
        let frame = frame_from_marking(&cl, &o.representative)?;
        let (l, k) = abelian_type(&delta_code(&cl.lattice, &frame)?);
        out.push(MarkedFrame {
            label: "",
            marking: o.representative,
            frame,
            l,
            k,
        });
    }
    out.sort_by_key(|m| m.k);
    for (m, label) in out.iter_mut().zip(["alpha", "beta", "gamma"]) {
        m.label = label;
    }
    Ok(out)
}

/// The four E8 table frames: α, β, γ from markings and a searched `4^4`
/// frame.
pub fn e8_table_frames(budget: &Budget) -> Result<Vec<(&'static str, LatticeFrame)>> {
    let mut out: Vec<(&'static str, LatticeFrame)> = e8_marked_frames()?
        .into_iter()
        .map(|m| (class_name(m.l, m.k), m.frame))
        .collect();
    let e8 = e8_code_lattice().lattice;
    let o8 = find_frame_of_type(&e8, (0, 4), budget)?.ok_or_else(|| Error::InvalidFrame("no 4^4 frame".into()))?;
    out.push(("O8", o8));
    Ok(out)
}

/// Random orientation and order of the same frame.
pub fn shuffle_frame(x: &LatticeFrame, seed: u64) -> LatticeFrame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..x.n()).collect();
    perm.shuffle(&mut rng);
    let signs: Vec<i8> = (0..x.n()).map(|_| if rand::Rng::gen_bool(&mut rng, 0.5) { -1 } else { 1 }).collect();
    x.reoriented(&perm, &signs)
}
