//! Signed coordinate permutations and a stabilizer-chain backtrack that
//! finds the full monomial automorphism group of a code over Z/2 or Z/4.
//!
//! Words are packed `u64`s with one bit (Z/2) or two bits (Z/4) per
//! coordinate. The search walks the base `0, 1, ..., n-1`; at each level it
//! looks for one group element per new orbit point, so the number of
//! individual searches is at most `n * 2n` regardless of the group order.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::One;

use crate::budget::{Budget, Ticker};
use crate::error::{Error, Result};

/// A signed permutation of `n` coordinates: coordinate `i` is sent to
/// `perm[i]` and multiplied by `signs[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialMap {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl MonomialMap {
    pub fn identity(n: usize) -> Self {
        MonomialMap {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    pub fn from_parts(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = perm.len();
        if signs.len() != n || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Dimension("monomial signs must be +-1".into()));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Dimension("monomial permutation is not bijective".into()));
            }
        }
        Ok(MonomialMap { perm, signs })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn is_diagonal(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &MonomialMap) -> MonomialMap {
        let n = self.len();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            let j = other.perm[i];
            perm[i] = self.perm[j];
            signs[i] = other.signs[i] * self.signs[j];
        }
        MonomialMap { perm, signs }
    }

    pub fn inverse(&self) -> MonomialMap {
        let n = self.len();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        MonomialMap { perm, signs }
    }

    /// Image of a vector over Z/q given as residues.
    pub fn apply(&self, v: &[u8], q: u8) -> Vec<u8> {
        let mut out = vec![0u8; v.len()];
        for (i, &x) in v.iter().enumerate() {
            out[self.perm[i]] = mul_sign(x, self.signs[i], q);
        }
        out
    }

    /// Action on signed points encoded as `2*coord + (sign == -1)`.
    pub(crate) fn apply_point(&self, p: usize) -> usize {
        let (c, neg) = (p / 2, p % 2 == 1);
        let s = self.signs[c];
        let neg_out = neg != (s == -1);
        2 * self.perm[c] + usize::from(neg_out)
    }
}

#[inline]
fn mul_sign(x: u8, s: i8, q: u8) -> u8 {
    if s == 1 || x == 0 {
        x
    } else {
        q - x
    }
}

/// Packed word layout over Z/q for `q` in {2, 4}.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Packing {
    pub n: usize,
    pub q: u8,
    bits: u32,
}

impl Packing {
    pub fn new(n: usize, q: u8) -> Result<Self> {
        let bits = match q {
            2 => 1,
            4 => 2,
            _ => return Err(Error::Dimension(format!("unsupported modulus {q}"))),
        };
        if n * bits as usize > 64 {
            return Err(Error::TooLarge(format!("length {n} over Z/{q}")));
        }
        Ok(Packing { n, q, bits })
    }

    #[inline]
    pub fn get(&self, w: u64, i: usize) -> u8 {
        ((w >> (i as u32 * self.bits)) & ((1 << self.bits) - 1)) as u8
    }

    #[inline]
    pub fn set(&self, w: u64, i: usize, v: u8) -> u64 {
        let sh = i as u32 * self.bits;
        let mask = ((1u64 << self.bits) - 1) << sh;
        (w & !mask) | ((v as u64) << sh)
    }

    #[inline]
    pub fn coord_mask(&self, i: usize) -> u64 {
        ((1u64 << self.bits) - 1) << (i as u32 * self.bits)
    }

    pub fn pack(&self, v: &[u8]) -> u64 {
        v.iter().enumerate().fold(0, |w, (i, &x)| self.set(w, i, x % self.q))
    }

    pub fn unpack(&self, w: u64) -> Vec<u8> {
        (0..self.n).map(|i| self.get(w, i)).collect()
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.q == 2 {
            return a ^ b;
        }
        (0..self.n).fold(0, |w, i| {
            self.set(w, i, (self.get(a, i) + self.get(b, i)) % self.q)
        })
    }

    pub fn apply(&self, m: &MonomialMap, w: u64) -> u64 {
        let mut out = 0;
        for i in 0..self.n {
            let x = self.get(w, i);
            if x != 0 {
                out = self.set(out, m.perm[i], mul_sign(x, m.signs[i], self.q));
            }
        }
        out
    }
}

/// Enumerates the subgroup of (Z/q)^n generated by `gens`.
pub(crate) fn span_words(p: &Packing, gens: &[u64], cap: usize) -> Result<Vec<u64>> {
    let mut seen: HashSet<u64> = HashSet::new();
    seen.insert(0);
    let mut queue = VecDeque::from([0u64]);
    let mut out = vec![0u64];
    while let Some(w) = queue.pop_front() {
        for &g in gens {
            let s = p.add(w, g);
            if seen.insert(s) {
                if seen.len() > cap {
                    return Err(Error::TooLarge(format!("code with more than {cap} words")));
                }
                out.push(s);
                queue.push_back(s);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct MonomialGroup {
    pub generators: Vec<MonomialMap>,
    pub order: BigUint,
}

/// Backtracking search for all signed permutations preserving a code.
pub(crate) struct CodeAutSearch<'a> {
    p: Packing,
    words: Vec<u64>,
    members: HashSet<u64>,
    gens: Vec<u64>,
    // per coordinate value histogram
    hist1: Vec<[u32; 4]>,
    // per ordered pair (i, j) joint histogram, index a * 4 + b
    hist2: Vec<[u32; 16]>,
    signed: bool,
    budget: &'a Budget,
}

impl<'a> CodeAutSearch<'a> {
    /// `signed = false` restricts to plain permutations (always the case
    /// for q = 2, where -1 = 1).
    pub fn new(p: Packing, words: Vec<u64>, gens: Vec<u64>, signed: bool, budget: &'a Budget) -> Self {
        let n = p.n;
        let mut hist1 = vec![[0u32; 4]; n];
        let mut hist2 = vec![[0u32; 16]; n * n];
        for &w in &words {
            let vals: Vec<u8> = p.unpack(w);
            for i in 0..n {
                hist1[i][vals[i] as usize] += 1;
                for j in 0..n {
                    hist2[i * n + j][vals[i] as usize * 4 + vals[j] as usize] += 1;
                }
            }
        }
        let members = words.iter().copied().collect();
        CodeAutSearch {
            signed: signed && p.q > 2,
            p,
            words,
            members,
            gens,
            hist1,
            hist2,
            budget,
        }
    }

    fn signs(&self) -> &'static [i8] {
        if self.signed {
            &[1, -1]
        } else {
            &[1]
        }
    }

    pub fn run(&self) -> Result<MonomialGroup> {
        let n = self.p.n;
        let mut gens: Vec<MonomialMap> = Vec::new();
        let mut order = BigUint::one();
        let mut ticker = Ticker::new(self.budget);
        for level in (0..n).rev() {
            let mut orbit = point_orbit(&gens, 2 * level, 2 * n);
            for target in level..n {
                for &s in self.signs() {
                    let pt = 2 * target + usize::from(s == -1);
                    if orbit.contains(&pt) {
                        continue;
                    }
                    if let Some(g) = self.find(level, target, s, &mut ticker)? {
                        gens.push(g);
                        orbit = point_orbit(&gens, 2 * level, 2 * n);
                    }
                }
            }
            order *= BigUint::from(orbit.len());
        }
        Ok(MonomialGroup {
            generators: gens,
            order,
        })
    }

    /// All sign-only elements (the diagonal subgroup).
    pub fn diagonal_elements(&self) -> Vec<MonomialMap> {
        let n = self.p.n;
        (0u64..(1 << n))
            .filter_map(|mask| {
                let m = MonomialMap {
                    perm: (0..n).collect(),
                    signs: (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect(),
                };
                self.preserves(&m).then_some(m)
            })
            .collect()
    }

    pub fn preserves(&self, m: &MonomialMap) -> bool {
        self.gens.iter().all(|&g| self.members.contains(&self.p.apply(m, g)))
    }

    /// An element fixing coordinates `0..level` (with sign +1) and sending
    /// coordinate `level` to `target` with sign `s`.
    fn find(&self, level: usize, target: usize, s: i8, ticker: &mut Ticker) -> Result<Option<MonomialMap>> {
        let n = self.p.n;
        let mut perm = vec![usize::MAX; n];
        let mut signs = vec![1i8; n];
        let mut used = vec![false; n];
        for i in 0..level {
            perm[i] = i;
            used[i] = true;
        }
        if !self.consistent(&perm, &signs, level, target, s) {
            return Ok(None);
        }
        perm[level] = target;
        signs[level] = s;
        used[target] = true;
        if self.dfs(level + 1, &mut perm, &mut signs, &mut used, ticker)? {
            Ok(Some(MonomialMap { perm, signs }))
        } else {
            Ok(None)
        }
    }

    fn dfs(
        &self,
        src: usize,
        perm: &mut Vec<usize>,
        signs: &mut Vec<i8>,
        used: &mut Vec<bool>,
        ticker: &mut Ticker,
    ) -> Result<bool> {
        ticker.tick()?;
        let n = self.p.n;
        if src == n {
            let m = MonomialMap {
                perm: perm.clone(),
                signs: signs.clone(),
            };
            return Ok(self.preserves(&m));
        }
        for t in 0..n {
            if used[t] {
                continue;
            }
            for &s in self.signs() {
                if !self.consistent(perm, signs, src, t, s) {
                    continue;
                }
                perm[src] = t;
                signs[src] = s;
                used[t] = true;
                if self.dfs(src + 1, perm, signs, used, ticker)? {
                    return Ok(true);
                }
                used[t] = false;
                perm[src] = usize::MAX;
                signs[src] = 1;
            }
        }
        Ok(false)
    }

    /// Necessary conditions for extending the partial map on `0..src` by
    /// `src -> (t, s)`.
    fn consistent(&self, perm: &[usize], signs: &[i8], src: usize, t: usize, s: i8) -> bool {
        let n = self.p.n;
        let q = self.p.q;
        let h_src = &self.hist1[src];
        let h_t = &self.hist1[t];
        for a in 0..q {
            if h_src[a as usize] != h_t[mul_sign(a, s, q) as usize] {
                return false;
            }
        }
        for j in 0..src {
            let (tj, sj) = (perm[j], signs[j]);
            let hs = &self.hist2[src * n + j];
            let ht = &self.hist2[t * n + tj];
            for a in 0..q {
                for b in 0..q {
                    let ia = (a as usize) * 4 + b as usize;
                    let ib = (mul_sign(a, s, q) as usize) * 4 + mul_sign(b, sj, q) as usize;
                    if hs[ia] != ht[ib] {
                        return false;
                    }
                }
            }
        }
        // projections of generator images onto the assigned targets
        let mut mask = self.p.coord_mask(t);
        for j in 0..src {
            mask |= self.p.coord_mask(perm[j]);
        }
        for &g in &self.gens {
            let mut img = 0u64;
            for j in 0..src {
                let x = self.p.get(g, j);
                if x != 0 {
                    img = self.p.set(img, perm[j], mul_sign(x, signs[j], q));
                }
            }
            let x = self.p.get(g, src);
            if x != 0 {
                img = self.p.set(img, t, mul_sign(x, s, q));
            }
            if !self.words.iter().any(|&w| w & mask == img) {
                return false;
            }
        }
        true
    }
}

/// Orbit of a signed point under the generated group.
pub(crate) fn point_orbit(gens: &[MonomialMap], start: usize, npoints: usize) -> HashSet<usize> {
    let mut seen = HashSet::new();
    seen.insert(start);
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let im = g.apply_point(p);
            debug_assert!(im < npoints);
            if seen.insert(im) {
                queue.push_back(im);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_inverse() {
        let a = MonomialMap::from_parts(vec![1, 2, 0], vec![1, -1, 1]).unwrap();
        let b = MonomialMap::from_parts(vec![2, 0, 1], vec![-1, 1, 1]).unwrap();
        let v = vec![1u8, 2, 3];
        let ab = a.compose(&b);
        assert_eq!(ab.apply(&v, 4), a.apply(&b.apply(&v, 4), 4));
        assert_eq!(a.compose(&a.inverse()), MonomialMap::identity(3));
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(MonomialMap::from_parts(vec![0, 0], vec![1, 1]).is_err());
        assert!(MonomialMap::from_parts(vec![0, 1], vec![1, 2]).is_err());
    }

    #[test]
    fn zero_code_has_full_monomial_group() {
        let p = Packing::new(4, 4).unwrap();
        let budget = Budget::unlimited();
        let g = CodeAutSearch::new(p, vec![0], vec![], true, &budget).run().unwrap();
        // 2^4 * 4!
        assert_eq!(g.order, BigUint::from(384u32));
    }

    #[test]
    fn packing_roundtrip() {
        let p = Packing::new(5, 4).unwrap();
        let v = vec![0u8, 1, 2, 3, 1];
        assert_eq!(p.unpack(p.pack(&v)), v);
        let m = MonomialMap::from_parts(vec![4, 3, 2, 1, 0], vec![-1, -1, 1, 1, -1]).unwrap();
        assert_eq!(p.unpack(p.apply(&m, p.pack(&v))), m.apply(&v, 4));
    }
}
