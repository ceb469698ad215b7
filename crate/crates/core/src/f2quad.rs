//! Quadratic spaces of maximal Witt index over F2, the set Σ of
//! n-dimensional totally isotropic subspaces on which Q is not identically
//! zero, and the orbits of the parabolic `P = Stab(J)` on Σ.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codes::rref;
use crate::error::{Error, Result};
use crate::frame::gl2_order;

/// Largest `n` supported (vectors are packed into `u32`).
pub const MAX_N: usize = 16;

/// Largest `n` for exhaustive enumeration of Σ.
pub const MAX_EXHAUSTIVE_N: usize = 5;

fn parity(x: u32) -> bool {
    x.count_ones() & 1 == 1
}

fn span_rref(vs: &[u32]) -> Vec<u32> {
    rref(&vs.iter().map(|&v| u64::from(v)).collect::<Vec<_>>())
        .into_iter()
        .map(|v| v as u32)
        .collect()
}

/// `W = F2^{2n}` with `Q(v) = v·d + Σ_{i<j} B_ij v_i v_j`; bits `0..n`
/// span `J`, bits `n..2n` span `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadSpaceF2 {
    n: usize,
    upper: Vec<u32>,
    diag: u32,
    polar: Vec<u32>,
    j: Vec<u32>,
    k: Vec<u32>,
}

/// `Q = Σ x_i y_i` on `F2^{2n}`.
pub fn hyperbolic_space(n: usize) -> Result<QuadSpaceF2> {
    if !(1..=MAX_N).contains(&n) {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as i64,
            range: "1..=16",
        });
    }
    let mut upper = vec![0u32; 2 * n];
    for (i, row) in upper.iter_mut().enumerate().take(n) {
        *row = 1 << (n + i);
    }
    let mut polar = vec![0u32; 2 * n];
    for i in 0..n {
        polar[i] = 1 << (n + i);
        polar[n + i] = 1 << i;
    }
    Ok(QuadSpaceF2 {
        n,
        upper,
        diag: 0,
        polar,
        j: (0..n).map(|i| 1 << i).collect(),
        k: (0..n).map(|i| 1 << (n + i)).collect(),
    })
}

impl QuadSpaceF2 {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn j_basis(&self) -> &[u32] {
        &self.j
    }

    pub fn k_basis(&self) -> &[u32] {
        &self.k
    }

    pub fn q(&self, v: u32) -> bool {
        let mut acc = parity(v & self.diag);
        let mut bits = v;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            acc ^= parity(self.upper[i] & v);
        }
        acc
    }

    /// Mask `m` with `(u, v) = parity(m & v)`.
    pub fn polar_mask(&self, u: u32) -> u32 {
        let mut m = 0;
        let mut bits = u;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            m ^= self.polar[i];
        }
        m
    }

    pub fn bilinear(&self, u: u32, v: u32) -> bool {
        parity(self.polar_mask(u) & v)
    }

    /// Number of `v` with `Q(v) = 1`, by enumeration.
    pub fn nonsingular_count(&self) -> Result<u64> {
        if self.n > 12 {
            return Err(Error::TooLarge(format!("enumeration of F2^{}", 2 * self.n)));
        }
        Ok((0..1u32 << (2 * self.n)).filter(|&v| self.q(v)).count() as u64)
    }
}

/// `2^{2n−1} − 2^{n−1}`.
pub fn nonsingular_count_formula(n: usize) -> BigUint {
    (BigUint::one() << (2 * n - 1)) - (BigUint::one() << (n - 1))
}

/// An element of Σ, stored as a reduced basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SigmaMember {
    basis: Vec<u32>,
}

impl SigmaMember {
    pub fn new(w: &QuadSpaceF2, vectors: &[u32]) -> Result<Self> {
        let mask = if w.dim() == 32 { u32::MAX } else { (1u32 << w.dim()) - 1 };
        if vectors.iter().any(|&v| v & !mask != 0) {
            return Err(Error::NotSigma("vector outside the space".into()));
        }
        let basis = span_rref(vectors);
        if basis.len() != w.n {
            return Err(Error::NotSigma(format!("dimension {} != {}", basis.len(), w.n)));
        }
        for (i, &a) in basis.iter().enumerate() {
            for &b in &basis[i..] {
                if w.bilinear(a, b) {
                    return Err(Error::NotSigma("not totally isotropic".into()));
                }
            }
        }
        if !basis.iter().any(|&a| w.q(a)) {
            return Err(Error::NotSigma("totally singular".into()));
        }
        Ok(SigmaMember { basis })
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    /// `{a ∈ A : Q(a) = 0}`, a hyperplane of `A`.
    pub fn singular_part(&self, w: &QuadSpaceF2) -> Vec<u32> {
        let ns = *self.basis.iter().find(|&&a| w.q(a)).expect("member of Σ");
        let adjusted: Vec<u32> = self
            .basis
            .iter()
            .filter(|&&a| a != ns)
            .map(|&a| if w.q(a) { a ^ ns } else { a })
            .collect();
        span_rref(&adjusted)
    }

    /// `A ∩ J`.
    pub fn j_part(&self, w: &QuadSpaceF2) -> Vec<u32> {
        intersect(&self.basis, &w.j)
    }
}

/// Basis of `span(a) ∩ span(b)` (Zassenhaus).
fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let rows: Vec<u64> = a
        .iter()
        .map(|&v| u64::from(v) | u64::from(v) << 32)
        .chain(b.iter().map(|&v| u64::from(v)))
        .collect();
    let out: Vec<u32> = rref(&rows)
        .into_iter()
        .filter(|&r| r as u32 == 0)
        .map(|r| (r >> 32) as u32)
        .collect();
    span_rref(&out)
}

/// `dim(A ∩ J)`.
pub fn j_indicator(w: &QuadSpaceF2, a: &SigmaMember) -> usize {
    a.j_part(w).len()
}

/// `Fv + (J ∩ v^⊥)` for nonsingular `v`.
pub fn sigma_from_vector(w: &QuadSpaceF2, v: u32) -> Result<SigmaMember> {
    if !w.q(v) {
        return Err(Error::NotSigma(format!("{v:#x} is singular")));
    }
    let m = w.polar_mask(v);
    let mut perp = Vec::new();
    let mut odd = None;
    for &e in &w.j {
        if parity(m & e) {
            match odd {
                None => odd = Some(e),
                Some(o) => perp.push(e ^ o),
            }
        } else {
            perp.push(e);
        }
    }
    perp.push(v);
    SigmaMember::new(w, &perp)
}

/// A linear map of `W` given by the images of the standard basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct F2Map {
    images: Vec<u32>,
}

impl F2Map {
    pub fn identity(dim: usize) -> Self {
        F2Map {
            images: (0..dim).map(|i| 1 << i).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Self {
        F2Map { images }
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, v: u32) -> u32 {
        let mut out = 0;
        let mut bits = v;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            out ^= self.images[i];
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &F2Map) -> F2Map {
        F2Map {
            images: other.images.iter().map(|&v| self.apply(v)).collect(),
        }
    }

    pub fn inverse(&self) -> Option<F2Map> {
        let dim = self.images.len();
        // rows (image, preimage); eliminate images to unit vectors
        let mut rows: Vec<(u32, u32)> = self.images.iter().enumerate().map(|(i, &v)| (v, 1 << i)).collect();
        for col in 0..dim {
            let bit = 1u32 << col;
            let p = (col..dim).find(|&r| rows[r].0 & bit != 0)?;
            rows.swap(col, p);
            let (pv, pt) = rows[col];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != col && row.0 & bit != 0 {
                    row.0 ^= pv;
                    row.1 ^= pt;
                }
            }
        }
        Some(F2Map {
            images: rows.into_iter().map(|(_, t)| t).collect(),
        })
    }

    pub fn is_invertible(&self) -> bool {
        span_rref(&self.images).len() == self.images.len()
    }

    pub fn map_subspace(&self, basis: &[u32]) -> Vec<u32> {
        span_rref(&basis.iter().map(|&v| self.apply(v)).collect::<Vec<_>>())
    }

    pub fn map_sigma(&self, a: &SigmaMember) -> SigmaMember {
        SigmaMember {
            basis: self.map_subspace(&a.basis),
        }
    }

    /// `Q(g v) = Q(v)` on the basis and `(g e_i, g e_j) = (e_i, e_j)`.
    pub fn preserves_form(&self, w: &QuadSpaceF2) -> bool {
        let d = w.dim();
        (0..d).all(|i| {
            w.q(self.images[i]) == w.q(1 << i)
                && (0..i).all(|j| w.bilinear(self.images[i], self.images[j]) == w.bilinear(1 << i, 1 << j))
        }) && self.is_invertible()
    }

    pub fn fixes_j(&self, w: &QuadSpaceF2) -> bool {
        self.map_subspace(&w.j) == span_rref(&w.j)
    }
}

/// Generators of `P = Stab(J)` in the hyperbolic space: transvections of
/// `GL(J)` with their contragredient on `K`, and the alternating shears
/// `f_a ↦ f_a + e_b`, `f_b ↦ f_b + e_a`.
pub fn parabolic_generators(w: &QuadSpaceF2) -> Vec<F2Map> {
    let n = w.n;
    let mut gens = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let mut g = F2Map::identity(2 * n);
            g.images[b] = (1 << b) | (1 << a);
            g.images[n + a] = (1 << (n + a)) | (1 << (n + b));
            gens.push(g);
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            let mut g = F2Map::identity(2 * n);
            g.images[n + a] = (1 << (n + a)) | (1 << b);
            g.images[n + b] = (1 << (n + b)) | (1 << a);
            gens.push(g);
        }
    }
    gens
}

/// `|P| = 2^{n(n−1)/2} |GL(n, 2)|`.
pub fn parabolic_order(n: usize) -> BigUint {
    (BigUint::one() << (n * (n - 1) / 2)) * gl2_order(n as u32)
}

/// Every element of `P`, as `[[A, AZ], [0, A^{-T}]]` with `Z` alternating.
pub fn parabolic_elements(w: &QuadSpaceF2) -> Result<Vec<F2Map>> {
    let n = w.n;
    if n > 3 {
        return Err(Error::TooLarge(format!("listing P for n = {n}")));
    }
    let mut out = Vec::new();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    for bits in 0u32..1 << (n * n) {
        // column c of A as an n-bit mask
        let cols: Vec<u32> = (0..n).map(|c| (bits >> (c * n)) & ((1 << n) - 1)).collect();
        let a = F2Map::from_images(cols.clone());
        let Some(ainv) = a.inverse() else { continue };
        // A^{-T}: column c is row c of A^{-1}
        let ainv_t: Vec<u32> = (0..n)
            .map(|c| (0..n).filter(|&r| ainv.images[r] >> c & 1 == 1).fold(0, |m, r| m | 1 << r))
            .collect();
        for zbits in 0u32..1 << pairs.len() {
            let mut z = vec![0u32; n];
            for (t, &(p, q)) in pairs.iter().enumerate() {
                if zbits >> t & 1 == 1 {
                    z[p] |= 1 << q;
                    z[q] |= 1 << p;
                }
            }
            let mut images = vec![0u32; 2 * n];
            for c in 0..n {
                images[c] = cols[c];
                images[n + c] = a.apply(z[c]) | (ainv_t[c] << n);
            }
            out.push(F2Map::from_images(images));
        }
    }
    Ok(out)
}

/// Members of Σ with a given indicator: `[n, j]_2 (2^{n−j} − 1) 2^{(n−j)(n−j−1)/2}`.
pub fn sigma_count_formula(n: usize, j: usize) -> BigUint {
    let m = n - j;
    gaussian_binomial(n, j) * ((BigUint::one() << m) - 1u32) * (BigUint::one() << (m * (m - 1) / 2))
}

pub fn sigma_total_formula(n: usize) -> BigUint {
    (0..n).map(|j| sigma_count_formula(n, j)).sum()
}

fn gaussian_binomial(n: usize, k: usize) -> BigUint {
    gl2_order(n as u32) / (gl2_order(k as u32) * gl2_order((n - k) as u32) * (BigUint::one() << (k * (n - k))))
}

fn check_exhaustive(n: usize) -> Result<()> {
    if n > MAX_EXHAUSTIVE_N {
        Err(Error::OutOfRange {
            name: "n",
            value: n as i64,
            range: "1..=5 (exhaustive)",
        })
    } else {
        Ok(())
    }
}

/// All members of Σ, by enumerating reduced echelon bases row by row with
/// isotropy pruning.
pub fn enumerate_sigma(w: &QuadSpaceF2) -> Result<Vec<SigmaMember>> {
    let n = w.n;
    check_exhaustive(n)?;
    let dim = 2 * n;
    let pivot_sets: Vec<u32> = (0u32..1 << dim).filter(|p| p.count_ones() as usize == n).collect();
    let mut out: Vec<SigmaMember> = pivot_sets
        .par_iter()
        .flat_map_iter(|&piv| {
            let pivots: Vec<usize> = (0..dim).filter(|&i| piv >> i & 1 == 1).collect();
            let mut found = Vec::new();
            let mut rows = Vec::with_capacity(n);
            echelon_dfs(w, piv, &pivots, &mut rows, &mut found);
            found
        })
        .collect();
    out.sort();
    Ok(out)
}

fn echelon_dfs(w: &QuadSpaceF2, piv: u32, pivots: &[usize], rows: &mut Vec<u32>, out: &mut Vec<SigmaMember>) {
    let r = rows.len();
    if r == pivots.len() {
        if rows.iter().any(|&a| w.q(a)) {
            out.push(SigmaMember { basis: span_rref(rows) });
        }
        return;
    }
    let p = pivots[r];
    let dim = w.dim();
    let free: Vec<usize> = (p + 1..dim).filter(|&i| piv >> i & 1 == 0).collect();
    for m in 0u32..1 << free.len() {
        let mut v = 1u32 << p;
        for (t, &i) in free.iter().enumerate() {
            if m >> t & 1 == 1 {
                v |= 1 << i;
            }
        }
        if w.bilinear(v, v) || rows.iter().any(|&u| w.bilinear(u, v)) {
            continue;
        }
        rows.push(v);
        echelon_dfs(w, piv, pivots, rows, out);
        rows.pop();
    }
}

/// Constructive members: `Fv + (J ∩ v^⊥)` for every nonsingular `v`, plus
/// images under `samples` random words in the generators of `P`.
pub fn constructive_sigma(w: &QuadSpaceF2, samples: usize, seed: u64) -> Result<Vec<SigmaMember>> {
    if w.n > 12 {
        return Err(Error::TooLarge(format!("enumeration of F2^{}", w.dim())));
    }
    let mut set: HashSet<SigmaMember> = HashSet::new();
    for v in 0..1u32 << w.dim() {
        if w.q(v) {
            set.insert(sigma_from_vector(w, v)?);
        }
    }
    let gens = parabolic_generators(w);
    let base: Vec<SigmaMember> = set.iter().cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut a = base[rng.gen_range(0..base.len())].clone();
        for _ in 0..2 * w.dim() {
            a = gens[rng.gen_range(0..gens.len())].map_sigma(&a);
        }
        set.insert(a);
    }
    let mut out: Vec<SigmaMember> = set.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Hyperbolic basis `(e'_i, f'_i)` with `e'` spanning `J` and
/// `A = span(e'_1..e'_j, f'_{j+1}..f'_{n−1}, e'_n + f'_n)`, as the map
/// sending the standard basis to it.
fn adapted_map(w: &QuadSpaceF2, a: &SigmaMember) -> F2Map {
    let n = w.n;
    let s = a.j_part(w);
    let j = s.len();
    let a0 = a.singular_part(w);
    let t = complement(&a0, &s);
    let v = *a.basis.iter().find(|&&x| w.q(x)).expect("member of Σ");
    // e'_{j+1..n} ∈ J dual to (t_{j+1}, ..., t_{n−1}, v), vanishing on S
    let mut targets: Vec<u32> = t.clone();
    targets.push(v);
    let constraints: Vec<u32> = targets.iter().map(|&x| w.polar_mask(x)).collect();
    let mut e = s.clone();
    for idx in 0..targets.len() {
        let rhs: Vec<bool> = (0..targets.len()).map(|k| k == idx).collect();
        let x = solve_in(&w.j, &constraints, &rhs).expect("pairing J × W/J is perfect");
        e.push(x);
    }
    let mut f = vec![0u32; n];
    for (k, &tk) in t.iter().enumerate() {
        f[j + k] = tk;
    }
    f[n - 1] = v ^ e[n - 1];
    // f'_1..f'_j: dual to e', orthogonal to the others, singular
    let emasks: Vec<u32> = e.iter().map(|&x| w.polar_mask(x)).collect();
    let full: Vec<u32> = (0..w.dim()).map(|i| 1 << i).collect();
    for idx in 0..j {
        let rhs: Vec<bool> = (0..n).map(|k| k == idx).collect();
        let mut h = solve_in(&full, &emasks, &rhs).expect("pairing J × W/J is perfect");
        for k in j..n {
            if w.bilinear(h, f[k]) {
                h ^= e[k];
            }
        }
        for b in 0..idx {
            if w.bilinear(h, f[b]) {
                h ^= e[b];
            }
        }
        if w.q(h) {
            h ^= e[idx];
        }
        f[idx] = h;
    }
    let mut images = e;
    images.extend(f);
    F2Map::from_images(images)
}

/// Basis of a complement of `span(sub)` in `span(sup)`.
fn complement(sup: &[u32], sub: &[u32]) -> Vec<u32> {
    let mut cur = span_rref(sub);
    let mut out = Vec::new();
    for &x in sup {
        let mut next = cur.clone();
        next.push(x);
        let next = span_rref(&next);
        if next.len() > cur.len() {
            out.push(x);
            cur = next;
        }
    }
    out
}

/// Some `x ∈ span(space)` with `parity(c_k & x) = rhs_k`.
fn solve_in(space: &[u32], constraints: &[u32], rhs: &[bool]) -> Option<u32> {
    let basis = span_rref(space);
    // unknown coefficients over `basis`; row k: Σ_i c_k(b_i) λ_i = rhs_k
    let d = basis.len();
    let mut rows: Vec<(u64, bool)> = constraints
        .iter()
        .zip(rhs)
        .map(|(&c, &r)| {
            let mask = (0..d).filter(|&i| parity(c & basis[i])).fold(0u64, |m, i| m | 1 << i);
            (mask, r)
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..d {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r].0 >> col & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let (pm, pr) = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.0 >> col & 1 == 1 {
                row.0 ^= pm;
                row.1 ^= pr;
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|r| r.1) {
        return None;
    }
    let mut x = 0u32;
    for (r, &col) in pivot_cols.iter().enumerate() {
        if rows[r].1 {
            x ^= basis[col];
        }
    }
    Some(x)
}

/// Either an element of `P` mapping `a` to `b`, or the differing
/// indicators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitWitness {
    Isometry(F2Map),
    Refutation(usize, usize),
}

pub fn same_orbit_witness(w: &QuadSpaceF2, a: &SigmaMember, b: &SigmaMember) -> OrbitWitness {
    if a == b {
        return OrbitWitness::Isometry(F2Map::identity(w.dim()));
    }
    let (ja, jb) = (j_indicator(w, a), j_indicator(w, b));
    if ja != jb {
        return OrbitWitness::Refutation(ja, jb);
    }
    let ga = adapted_map(w, a);
    let gb = adapted_map(w, b);
    let g = gb.compose(&ga.inverse().expect("hyperbolic basis"));
    OrbitWitness::Isometry(g)
}

/// `g` preserves `Q`, fixes `J` and maps `a` to `b`.
pub fn verify_witness(w: &QuadSpaceF2, g: &F2Map, a: &SigmaMember, b: &SigmaMember) -> bool {
    g.preserves_form(w) && g.fixes_j(w) && g.map_sigma(a) == *b
}

/// `"GL(j,2) x GL(n−j−1,2)"`, omitting trivial factors.
pub fn levi_description(n: usize, j: usize) -> String {
    let parts: Vec<String> = [j, n - j - 1]
        .iter()
        .filter(|&&m| m > 1)
        .map(|m| format!("GL({m},2)"))
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" x ")
    }
}

/// `|GL(j,2)| |GL(n−j−1,2)|`.
pub fn levi_order(n: usize, j: usize) -> BigUint {
    gl2_order(j as u32) * gl2_order((n - j - 1) as u32)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerStructure {
    pub j: usize,
    pub h_order: BigUint,
    pub u_order: BigUint,
    pub levi: String,
    pub levi_order: BigUint,
    /// `H` was obtained by filtering every element of `P`.
    pub exhaustive: bool,
}

/// Stabilizer `H` of `a` in `P` and its unipotent radical `U`, the
/// elements acting trivially on `A ∩ J` and on `A_0 / (A ∩ J)`.
pub fn stabilizer_structure(w: &QuadSpaceF2, a: &SigmaMember) -> Result<StabilizerStructure> {
    let n = w.n;
    check_exhaustive(n)?;
    let j = j_indicator(w, a);
    let levi_order = levi_order(n, j);
    if n <= 3 {
        let s = a.j_part(w);
        let a0 = a.singular_part(w);
        let elems = parabolic_elements(w)?;
        let h: Vec<&F2Map> = elems.iter().filter(|g| g.map_sigma(a) == *a).collect();
        let u = h
            .iter()
            .filter(|g| {
                s.iter().all(|&x| g.apply(x) == x)
                    && a0.iter().all(|&x| {
                        let mut span = s.clone();
                        span.push(g.apply(x) ^ x);
                        span_rref(&span).len() == s.len()
                    })
            })
            .count();
        return Ok(StabilizerStructure {
            j,
            h_order: BigUint::from(h.len()),
            u_order: BigUint::from(u),
            levi: levi_description(n, j),
            levi_order,
            exhaustive: true,
        });
    }
    let h_order = parabolic_order(n) / sigma_count_formula(n, j);
    Ok(StabilizerStructure {
        j,
        u_order: &h_order / &levi_order,
        h_order,
        levi: levi_description(n, j),
        levi_order,
        exhaustive: false,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRow {
    pub j: usize,
    pub size: BigUint,
    pub h_order: BigUint,
    pub u_order: BigUint,
    pub levi: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCensus {
    pub n: usize,
    pub parabolic_order: BigUint,
    pub sigma_size: BigUint,
    pub rows: Vec<OrbitRow>,
    pub exhaustive: bool,
    /// Exhaustive mode: every orbit is exactly one indicator class.
    pub orbits_match_indicator: Option<bool>,
}

/// Orbits of `P` on Σ. Exhaustive mode computes them by union-find under
/// the generators of `P`; otherwise sizes come from `|P| / |H_j|`.
pub fn orbit_census(n: usize, exhaustive: bool) -> Result<OrbitCensus> {
    let w = hyperbolic_space(n)?;
    let p_order = parabolic_order(n);
    if !exhaustive {
        let rows = (0..n)
            .map(|j| {
                let size = sigma_count_formula(n, j);
                let h = &p_order / &size;
                OrbitRow {
                    j,
                    u_order: &h / levi_order(n, j),
                    h_order: h,
                    size,
                    levi: levi_description(n, j),
                }
            })
            .collect();
        return Ok(OrbitCensus {
            n,
            sigma_size: sigma_total_formula(n),
            parabolic_order: p_order,
            rows,
            exhaustive: false,
            orbits_match_indicator: None,
        });
    }
    let sigma = enumerate_sigma(&w)?;
    let index: HashMap<&SigmaMember, usize> = sigma.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut parent: Vec<usize> = (0..sigma.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for g in parabolic_generators(&w) {
        for (i, a) in sigma.iter().enumerate() {
            let b = index[&g.map_sigma(a)];
            let (ri, rb) = (find(&mut parent, i), find(&mut parent, b));
            if ri != rb {
                parent[ri] = rb;
            }
        }
    }
    let mut orbit_of: HashMap<usize, (usize, usize, bool)> = HashMap::new();
    for (i, a) in sigma.iter().enumerate() {
        let r = find(&mut parent, i);
        let j = j_indicator(&w, a);
        let e = orbit_of.entry(r).or_insert((j, 0, true));
        e.1 += 1;
        e.2 &= e.0 == j;
    }
    let mut rows: Vec<OrbitRow> = orbit_of
        .values()
        .map(|&(j, size, _)| {
            let size = BigUint::from(size);
            let h = &p_order / &size;
            OrbitRow {
                j,
                u_order: &h / levi_order(n, j),
                h_order: h,
                size,
                levi: levi_description(n, j),
            }
        })
        .collect();
    rows.sort_by_key(|r| r.j);
    let distinct_j: HashSet<usize> = rows.iter().map(|r| r.j).collect();
    let matches = orbit_of.values().all(|o| o.2) && distinct_j.len() == rows.len();
    Ok(OrbitCensus {
        n,
        sigma_size: BigUint::from(sigma.len()),
        parabolic_order: p_order,
        rows,
        exhaustive: true,
        orbits_match_indicator: Some(matches),
    })
}

impl OrbitCensus {
    pub fn orbit_count(&self) -> usize {
        self.rows.len()
    }

    pub fn u_order(&self, j: usize) -> Option<&BigUint> {
        self.rows.iter().find(|r| r.j == j).map(|r| &r.u_order)
    }

    /// `log2 |U_j|` when `|U_j|` is a power of two.
    pub fn u_log2(&self, j: usize) -> Option<u64> {
        let u = self.u_order(j)?;
        (u.count_ones() == 1).then(|| u.trailing_zeros().unwrap_or(0))
    }
}

/// Sum of orbit sizes.
pub fn census_total(c: &OrbitCensus) -> BigUint {
    c.rows.iter().map(|r| r.size.clone()).sum()
}

/// `|Σ|` as a machine integer, when it fits.
pub fn sigma_total_u64(n: usize) -> Option<u64> {
    sigma_total_formula(n).to_u64()
}
