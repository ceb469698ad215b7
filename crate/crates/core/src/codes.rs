//! Binary linear codes: Hamming and Reed-Muller families, duals, the
//! frame codes `D_k`, coordinate automorphisms and markings.
//!
//! Words are `u64` bit vectors; bit `i` is coordinate `i` (0-based), and
//! the textual form lists coordinate 0 first.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::monomial::{CodeAutSearch, MonomialMap, Packing};

pub const MAX_LENGTH: usize = 64;

/// Row space of a list of bit vectors, kept in reduced row echelon form
/// (pivot = lowest set coordinate) so that `==` is code equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryCode {
    length: usize,
    rows: Vec<u64>,
}

impl BinaryCode {
    pub fn new(length: usize, generators: &[u64]) -> Result<Self> {
        if length == 0 || length > MAX_LENGTH {
            return Err(Error::OutOfRange {
                name: "length",
                value: length as i64,
                range: "1..=64",
            });
        }
        let mask = full_mask(length);
        if generators.iter().any(|&g| g & !mask != 0) {
            return Err(Error::Dimension("generator longer than code length".into()));
        }
        Ok(BinaryCode {
            length,
            rows: rref(generators),
        })
    }

    pub fn zero(length: usize) -> Result<Self> {
        BinaryCode::new(length, &[])
    }

    pub fn full(length: usize) -> Result<Self> {
        let gens: Vec<u64> = (0..length).map(|i| 1u64 << i).collect();
        BinaryCode::new(length, &gens)
    }

    /// Parses a word written as 0/1 characters, coordinate 0 first.
    pub fn word_from_str(s: &str) -> Option<u64> {
        if s.len() > MAX_LENGTH {
            return None;
        }
        s.chars().enumerate().try_fold(0u64, |w, (i, c)| match c {
            '0' => Some(w),
            '1' => Some(w | 1 << i),
            _ => None,
        })
    }

    pub fn word_to_string(&self, w: u64) -> String {
        (0..self.length).map(|i| if w >> i & 1 == 1 { '1' } else { '0' }).collect()
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Canonical generator rows.
    pub fn generators(&self) -> &[u64] {
        &self.rows
    }

    pub fn contains(&self, w: u64) -> bool {
        let mut r = w;
        for &row in &self.rows {
            let p = row.trailing_zeros();
            if r >> p & 1 == 1 {
                r ^= row;
            }
        }
        r == 0
    }

    /// All `2^dim` codewords (dimension capped at 24).
    pub fn codewords(&self) -> Result<Vec<u64>> {
        if self.dim() > 24 {
            return Err(Error::TooLarge(format!("code of dimension {}", self.dim())));
        }
        let mut words = Vec::with_capacity(1 << self.dim());
        for mask in 0u64..(1 << self.dim()) {
            let w = self
                .rows
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(0, |acc, (_, &r)| acc ^ r);
            words.push(w);
        }
        Ok(words)
    }

    /// Coefficient `i` counts codewords of weight `i`.
    pub fn weight_enumerator(&self) -> Result<Vec<u64>> {
        let mut counts = vec![0u64; self.length + 1];
        for w in self.codewords()? {
            counts[w.count_ones() as usize] += 1;
        }
        Ok(counts)
    }

    pub fn is_doubly_even(&self) -> bool {
        // generators doubly even and pairwise even-overlapping
        self.rows.iter().all(|r| r.count_ones() % 4 == 0)
            && self
                .rows
                .iter()
                .enumerate()
                .all(|(i, a)| self.rows[i + 1..].iter().all(|b| (a & b).count_ones() % 2 == 0))
    }

    pub fn is_self_dual(&self) -> bool {
        dual_code(self) == *self
    }

    pub fn permute(&self, p: &Permutation) -> BinaryCode {
        let rows: Vec<u64> = self.rows.iter().map(|&r| p.apply_word(r)).collect();
        BinaryCode {
            length: self.length,
            rows: rref(&rows),
        }
    }
}

impl fmt::Display for BinaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.length, self.dim())?;
        for &r in &self.rows {
            writeln!(f, "{}", self.word_to_string(r))?;
        }
        Ok(())
    }
}

fn full_mask(length: usize) -> u64 {
    if length == 64 {
        u64::MAX
    } else {
        (1u64 << length) - 1
    }
}

pub(crate) fn rref(gens: &[u64]) -> Vec<u64> {
    let mut rows: Vec<u64> = gens.iter().copied().filter(|&g| g != 0).collect();
    let mut out: Vec<u64> = Vec::new();
    for bit in 0..64 {
        let Some(pos) = rows.iter().position(|&r| r >> bit & 1 == 1) else {
            continue;
        };
        let pivot = rows.swap_remove(pos);
        for r in rows.iter_mut() {
            if *r >> bit & 1 == 1 {
                *r ^= pivot;
            }
        }
        for r in out.iter_mut() {
            if *r >> bit & 1 == 1 {
                *r ^= pivot;
            }
        }
        out.push(pivot);
        rows.retain(|&r| r != 0);
    }
    out
}

/// Orthogonal complement under the standard dot product.
pub fn dual_code(c: &BinaryCode) -> BinaryCode {
    let pivots: Vec<u32> = c.rows.iter().map(|r| r.trailing_zeros()).collect();
    let mut gens = Vec::new();
    for f in 0..c.length as u32 {
        if pivots.contains(&f) {
            continue;
        }
        let mut v = 1u64 << f;
        for (row, &p) in c.rows.iter().zip(&pivots) {
            if row >> f & 1 == 1 {
                v |= 1 << p;
            }
        }
        gens.push(v);
    }
    BinaryCode {
        length: c.length,
        rows: rref(&gens),
    }
}

/// Extended Hamming `[8,4,4]` for length 8; for length 16 the pinned
/// first-order Reed-Muller code listed in `data/h16.code`.
pub fn hamming_code(length: usize) -> Result<BinaryCode> {
    match length {
        // coordinate i <-> point of F2^3 with binary digits of i
        8 => BinaryCode::new(8, &[0xFF, 0xAA, 0xCC, 0xF0]),
        16 => crate::io::parse_code(include_str!("../data/h16.code")),
        other => Err(Error::UnsupportedLength(other)),
    }
}

/// Words `1^16, 1^8 0^8, (1^4 0^4)^2, (1100)^4, (10)^8` in this order.
pub const D_CODE_WORDS: [&str; 5] = [
    "1111111111111111",
    "1111111100000000",
    "1111000011110000",
    "1100110011001100",
    "1010101010101010",
];

/// The length-16 code spanned by the first `k` words of [`D_CODE_WORDS`].
pub fn d_code(k: usize) -> Result<BinaryCode> {
    if !(1..=5).contains(&k) {
        return Err(Error::OutOfRange {
            name: "k",
            value: k as i64,
            range: "1..=5",
        });
    }
    let gens: Vec<u64> = D_CODE_WORDS[..k]
        .iter()
        .map(|s| BinaryCode::word_from_str(s).expect("static word"))
        .collect();
    BinaryCode::new(16, &gens)
}

/// Basis words of `d_code(k)` in list order (not RREF).
pub fn d_code_basis(k: usize) -> Result<Vec<u64>> {
    d_code(k)?;
    Ok(D_CODE_WORDS[..k]
        .iter()
        .map(|s| BinaryCode::word_from_str(s).expect("static word"))
        .collect())
}

/// Coordinate permutation: coordinate `i` goes to `images[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &p in &images {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Dimension("permutation is not bijective".into()));
            }
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &p) in self.images.iter().enumerate() {
            inv[p] = i;
        }
        Permutation { images: inv }
    }

    pub fn apply_word(&self, w: u64) -> u64 {
        let mut out = 0;
        for (i, &p) in self.images.iter().enumerate() {
            if w >> i & 1 == 1 {
                out |= 1 << p;
            }
        }
        out
    }

    fn from_monomial(m: &MonomialMap) -> Self {
        Permutation {
            images: m.perm.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CodeAutomorphisms {
    pub generators: Vec<Permutation>,
    pub order: BigUint,
}

pub fn code_automorphisms(c: &BinaryCode) -> Result<CodeAutomorphisms> {
    code_automorphisms_with_budget(c, &Budget::from_env())
}

/// Generators and order of the coordinate-permutation stabilizer of `c`.
///
/// Searches on whichever of `c`, `c^⊥` has fewer words; both have the same
/// automorphism group.
pub fn code_automorphisms_with_budget(c: &BinaryCode, budget: &Budget) -> Result<CodeAutomorphisms> {
    if c.length() > 16 {
        return Err(Error::TooLarge(format!("code length {}", c.length())));
    }
    let dual = dual_code(c);
    let small = if dual.dim() < c.dim() { &dual } else { c };
    let p = Packing::new(small.length(), 2)?;
    let words = small.codewords()?;
    let search = CodeAutSearch::new(p, words, small.generators().to_vec(), false, budget);
    let group = search.run()?;
    Ok(CodeAutomorphisms {
        generators: group.generators.iter().map(Permutation::from_monomial).collect(),
        order: group.order,
    })
}

/// Plain enumeration over all `length!` permutations; lengths up to 8.
pub fn automorphism_order_brute_force(c: &BinaryCode) -> Result<u64> {
    let n = c.length();
    if n > 8 {
        return Err(Error::TooLarge(format!("brute force over {n}! permutations")));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0u64;
    let mut check = |perm: &[usize]| {
        let p = Permutation { images: perm.to_vec() };
        if c.generators().iter().all(|&g| c.contains(p.apply_word(g))) {
            count += 1;
        }
    };
    // Heap's algorithm
    let mut stack = vec![0usize; n];
    check(&perm);
    let mut i = 0;
    while i < n {
        if stack[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(stack[i], i);
            }
            check(&perm);
            stack[i] += 1;
            i = 0;
        } else {
            stack[i] = 0;
            i += 1;
        }
    }
    Ok(count)
}

/// Partition of the coordinates into unordered pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Marking {
    pairs: Vec<(usize, usize)>,
}

impl Marking {
    pub fn new(length: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if length % 2 != 0 {
            return Err(Error::InvalidMarking(format!("odd length {length}")));
        }
        if pairs.len() != length / 2 {
            return Err(Error::InvalidMarking(format!(
                "{} pairs for length {length}",
                pairs.len()
            )));
        }
        let mut seen = vec![false; length];
        for &(a, b) in pairs {
            for x in [a, b] {
                if x >= length || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidMarking(format!("coordinate {x} repeated or out of range")));
                }
            }
        }
        Ok(Marking::canonical(pairs))
    }

    /// `{(0,1), (2,3), ...}`.
    pub fn standard(length: usize) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = (0..length / 2).map(|i| (2 * i, 2 * i + 1)).collect();
        Marking::new(length, &pairs)
    }

    fn canonical(pairs: &[(usize, usize)]) -> Self {
        let mut v: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        v.sort_unstable();
        Marking { pairs: v }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn length(&self) -> usize {
        2 * self.pairs.len()
    }

    pub fn permute(&self, p: &Permutation) -> Marking {
        let pairs: Vec<(usize, usize)> = self
            .pairs
            .iter()
            .map(|&(a, b)| (p.images[a], p.images[b]))
            .collect();
        Marking::canonical(&pairs)
    }

    /// Partner table packed 4 bits per coordinate (length <= 16).
    fn key(&self) -> u64 {
        self.pairs.iter().fold(0, |k, &(a, b)| k | (b as u64) << (4 * a) | (a as u64) << (4 * b))
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// All perfect matchings of `0..length`.
pub fn all_markings(length: usize) -> Result<Vec<Marking>> {
    if length % 2 != 0 || length > 16 {
        return Err(Error::OutOfRange {
            name: "length",
            value: length as i64,
            range: "even, <= 16",
        });
    }
    fn rec(free: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Marking>) {
        if free.is_empty() {
            out.push(Marking::canonical(cur));
            return;
        }
        let a = free.remove(0);
        for idx in 0..free.len() {
            let b = free.remove(idx);
            cur.push((a, b));
            rec(free, cur, out);
            cur.pop();
            free.insert(idx, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    rec(&mut (0..length).collect(), &mut Vec::new(), &mut out);
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct MarkingOrbit {
    pub representative: Marking,
    pub size: u64,
}

/// Orbits of `Aut(c)` on all markings of `c`'s coordinates, largest
/// representative-first ordering by representative.
pub fn classify_markings(c: &BinaryCode) -> Result<Vec<MarkingOrbit>> {
    let aut = code_automorphisms(c)?;
    classify_markings_under(c.length(), &aut.generators)
}

pub fn classify_markings_under(length: usize, gens: &[Permutation]) -> Result<Vec<MarkingOrbit>> {
    let all = all_markings(length)?;
    let index: HashMap<u64, usize> = all.iter().enumerate().map(|(i, m)| (m.key(), i)).collect();
    let mut parent: Vec<usize> = (0..all.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for g in gens {
        for (i, m) in all.iter().enumerate() {
            let j = index[&m.permute(g).key()];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut sizes: HashMap<usize, u64> = HashMap::new();
    for i in 0..all.len() {
        *sizes.entry(find(&mut parent, i)).or_default() += 1;
    }
    let mut orbits: Vec<MarkingOrbit> = sizes
        .into_iter()
        .map(|(root, size)| MarkingOrbit {
            representative: all[root].clone(),
            size,
        })
        .collect();
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(orbits)
}

/// `(2m - 1)!!` for `length = 2m`.
pub fn marking_count(length: usize) -> BigUint {
    (1..length).step_by(2).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> u64 {
        BinaryCode::word_from_str(s).unwrap()
    }

    #[test]
    fn hamming_8_parameters() {
        let h = hamming_code(8).unwrap();
        assert_eq!(h.dim(), 4);
        assert_eq!(h.codewords().unwrap().len(), 16);
        assert!(h.is_doubly_even());
        assert!(h.is_self_dual());
    }

    #[test]
    fn hamming_weight_enumerator_by_enumeration() {
        // independent count over all 256 words of F2^8 tested for membership
        let h = hamming_code(8).unwrap();
        let mut counts = [0u64; 9];
        for word in 0u64..256 {
            if h.contains(word) {
                counts[word.count_ones() as usize] += 1;
            }
        }
        assert_eq!(counts, [1, 0, 0, 0, 14, 0, 0, 0, 1]);
        assert_eq!(h.weight_enumerator().unwrap(), counts.to_vec());
    }

    #[test]
    fn unsupported_hamming_length() {
        assert_eq!(hamming_code(12), Err(Error::UnsupportedLength(12)));
    }

    #[test]
    fn h16_is_reed_muller_and_matches_d5() {
        let h = hamming_code(16).unwrap();
        assert_eq!(h.dim(), 5);
        assert_eq!(h, d_code(5).unwrap());
        assert!(h.is_doubly_even());
    }

    #[test]
    fn dual_examples() {
        let full = BinaryCode::full(8).unwrap();
        assert_eq!(dual_code(&full).dim(), 0);
        assert_eq!(dual_code(&d_code(2).unwrap()).dim(), 14);
        let h = hamming_code(8).unwrap();
        assert_eq!(dual_code(&h), h);
    }

    #[test]
    fn dual_is_orthogonal() {
        let c = d_code(3).unwrap();
        let d = dual_code(&c);
        for &a in c.generators() {
            for &b in d.generators() {
                assert_eq!((a & b).count_ones() % 2, 0);
            }
        }
    }

    #[test]
    fn d_code_examples() {
        let d1 = d_code(1).unwrap();
        assert_eq!(d1.codewords().unwrap().len(), 2);
        assert!(d1.contains(w("1111111111111111")));
        let e3 = d_code(3).unwrap().weight_enumerator().unwrap();
        assert_eq!((e3[0], e3[8], e3[16]), (1, 6, 1));
        assert_eq!(e3.iter().sum::<u64>(), 8);
        let e5 = d_code(5).unwrap().weight_enumerator().unwrap();
        assert_eq!((e5[0], e5[8], e5[16]), (1, 30, 1));
        assert!(d_code(0).is_err() && d_code(6).is_err());
    }

    #[test]
    fn d_code_weight_profile_every_k() {
        for k in 1..=5 {
            let e = d_code(k).unwrap().weight_enumerator().unwrap();
            assert_eq!(e[8], (1 << k) - 2, "k = {k}");
            assert_eq!(e[0] + e[8] + e[16], 1 << k);
        }
    }

    #[test]
    fn h8_automorphisms_match_brute_force() {
        let h = hamming_code(8).unwrap();
        let brute = automorphism_order_brute_force(&h).unwrap();
        assert_eq!(brute, 1344);
        let aut = code_automorphisms(&h).unwrap();
        assert_eq!(aut.order, BigUint::from(brute));
        for g in &aut.generators {
            assert_eq!(h.permute(g), h);
        }
    }

    #[test]
    fn d1_has_full_symmetric_group() {
        let aut = code_automorphisms(&d_code(1).unwrap()).unwrap();
        let fact16: BigUint = (1u32..=16).map(BigUint::from).product();
        assert_eq!(aut.order, fact16);
    }

    #[test]
    fn markings_of_zero_code_length_two() {
        let z = BinaryCode::zero(2).unwrap();
        let orbits = classify_markings(&z).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].size, 1);
    }

    #[test]
    fn markings_of_h8() {
        let h = hamming_code(8).unwrap();
        let orbits = classify_markings(&h).unwrap();
        assert_eq!(orbits.len(), 3);
        assert_eq!(orbits.iter().map(|o| o.size).sum::<u64>(), 105);
        for o in &orbits {
            assert_eq!(1344 % o.size, 0);
        }
        assert_eq!(marking_count(8), BigUint::from(105u32));
    }

    #[test]
    fn marking_validation() {
        assert!(Marking::new(4, &[(0, 1), (1, 2)]).is_err());
        assert!(Marking::new(3, &[(0, 1)]).is_err());
        assert!(Marking::new(4, &[(0, 1)]).is_err());
        let m = Marking::new(4, &[(3, 2), (1, 0)]).unwrap();
        assert_eq!(m.pairs(), &[(0, 1), (2, 3)]);
    }
}
