use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use vftk_core::codes::{dual_code, BinaryCode, Permutation};
use vftk_core::f2quad::{
    constructive_sigma, hyperbolic_space, j_indicator, parabolic_generators, same_orbit_witness, verify_witness,
    OrbitWitness,
};
use vftk_core::frame::{abelian_type, delta_code, e8_marked_frames, shuffle_frame};
use vftk_core::hat::HatGroup;
use vftk_core::io::{format_code, format_gram, parse_code, parse_gram, parse_vectors};
use vftk_core::lattice::{discriminant_group, e8_code_lattice, short_vectors, IntegralLattice, LatticeVector};
use vftk_core::linalg::{determinant, int_mat, mat_mul, smith_form, transpose};
use vftk_core::monomial::MonomialMap;
use vftk_core::unimodular::{overlattice_from_isotropic, sum_two_squares_mod, IsotropicSubgroup};

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, cols), rows)
}

/// Positive definite Gram matrices `B Bᵀ`, optionally even.
fn definite_gram(max_rank: usize, even: bool) -> impl Strategy<Value = IntegralLattice> {
    (1..=max_rank)
        .prop_flat_map(|n| small_matrix(n, n))
        .prop_filter_map("singular", move |mut b| {
            if even {
                for row in b.iter_mut() {
                    if row.iter().sum::<i64>() % 2 != 0 {
                        row[0] += 1;
                    }
                }
            }
            let bm = int_mat(&b);
            IntegralLattice::new(mat_mul(&bm, &transpose(&bm))).ok()
        })
}

fn monomial(n: usize) -> impl Strategy<Value = MonomialMap> {
    (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(prop::bool::ANY, n))
        .prop_map(|(p, s)| MonomialMap::from_parts(p, s.iter().map(|&b| if b { -1 } else { 1 }).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_a_diagonalization(a in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| small_matrix(r, c))) {
        let m = int_mat(&a);
        let s = smith_form(&m);
        let d = mat_mul(&mat_mul(&s.left, &m), &s.right);
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let want = if i == j { s.diag[i].clone() } else { BigInt::zero() };
                prop_assert_eq!(x, &want);
            }
        }
        prop_assert!(determinant(&s.left).abs().is_one());
        prop_assert!(determinant(&s.right).abs().is_one());
        for w in s.diag.windows(2) {
            if !w[1].is_zero() {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
        }
    }

    #[test]
    fn dual_of_dual(len in 1usize..14, gens in prop::collection::vec(any::<u64>(), 0..6)) {
        let mask = (1u64 << len) - 1;
        let gens: Vec<u64> = gens.iter().map(|g| g & mask).collect();
        let c = BinaryCode::new(len, &gens).unwrap();
        let d = dual_code(&c);
        prop_assert_eq!(c.dim() + d.dim(), len);
        prop_assert_eq!(dual_code(&d), c.clone());
        for &x in c.generators() {
            for &y in d.generators() {
                prop_assert_eq!((x & y).count_ones() % 2, 0);
            }
        }
    }

    #[test]
    fn permuting_preserves_weights(len in 2usize..10, gens in prop::collection::vec(any::<u64>(), 1..4), seed in any::<u64>()) {
        let mask = (1u64 << len) - 1;
        let gens: Vec<u64> = gens.iter().map(|g| g & mask).collect();
        let c = BinaryCode::new(len, &gens).unwrap();
        let mut images: Vec<usize> = (0..len).collect();
        let mut s = seed;
        for i in (1..len).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            images.swap(i, (s >> 33) as usize % (i + 1));
        }
        let p = Permutation::new(images).unwrap();
        let pc = c.permute(&p);
        prop_assert_eq!(pc.weight_enumerator().unwrap(), c.weight_enumerator().unwrap());
        prop_assert_eq!(pc.permute(&p.inverse()), c);
    }

    #[test]
    fn monomial_inverse(m in (1usize..8).prop_flat_map(monomial)) {
        let n = m.len();
        prop_assert_eq!(m.compose(&m.inverse()), MonomialMap::identity(n));
        prop_assert_eq!(m.inverse().compose(&m), MonomialMap::identity(n));
    }

    #[test]
    fn short_vectors_match_box_search(l in definite_gram(3, false)) {
        let g = l.int_gram().unwrap();
        let n = l.rank();
        // every box vector of the target norm must be enumerated
        let norm = BigRational::from_integer(g[0][0].clone());
        let found = short_vectors(&l, &norm).unwrap();
        for v in &found {
            prop_assert_eq!(l.norm(v), norm.clone());
        }
        let mut count = 0;
        let r = 4i64;
        let mut x = vec![-r; n];
        loop {
            let v = LatticeVector::from_ints(&x);
            if l.norm(&v) == norm {
                count += 1;
                prop_assert!(found.contains(&v));
            }
            let mut i = 0;
            while i < n && x[i] == r {
                x[i] = -r;
                i += 1;
            }
            if i == n { break; }
            x[i] += 1;
        }
        prop_assert!(count <= found.len());
    }

    #[test]
    fn discriminant_order_is_determinant(l in definite_gram(4, false)) {
        let d = discriminant_group(&l).unwrap();
        prop_assert_eq!(d.order(), l.abs_det().unwrap());
        for (i, g) in d.generators.iter().enumerate() {
            prop_assert!(l.in_dual(g));
            let mut coeffs = vec![BigInt::zero(); d.orders.len()];
            coeffs[i] = BigInt::one();
            prop_assert_eq!(d.class_of(g).unwrap(), coeffs);
        }
    }

    #[test]
    fn hat_relations_on_even_lattices(l in definite_gram(4, true), x in prop::collection::vec(-3i64..=3, 4), y in prop::collection::vec(-3i64..=3, 4), z in prop::collection::vec(-3i64..=3, 4)) {
        let n = l.rank();
        let hat = HatGroup::new(&l).unwrap();
        prop_assert!(hat.relations_hold(&x[..n], &y[..n], &z[..n]));
    }

    #[test]
    fn gram_roundtrip(l in definite_gram(5, false)) {
        prop_assert_eq!(parse_gram(&format_gram(&l)).unwrap(), l);
    }

    #[test]
    fn code_roundtrip(len in 1usize..20, gens in prop::collection::vec(any::<u64>(), 0..5)) {
        let mask = (1u64 << len) - 1;
        let gens: Vec<u64> = gens.iter().map(|g| g & mask).collect();
        let c = BinaryCode::new(len, &gens).unwrap();
        prop_assert_eq!(parse_code(&format_code(&c)).unwrap(), c);
    }

    #[test]
    fn parsers_never_panic(s in "\\PC{0,200}") {
        let _ = parse_gram(&s);
        let _ = parse_code(&s);
        let _ = parse_vectors(&s);
        let _ = vftk_core::io::parse_frame(&s);
    }

    #[test]
    fn two_squares_congruence(idx in 0usize..14, r in 1u32..6) {
        let primes = [3i64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
        let p = primes[idx];
        let (a, b) = sum_two_squares_mod(p, r).unwrap();
        let m = i128::from(p).pow(r);
        prop_assert_eq!((i128::from(a).pow(2) + i128::from(b).pow(2) + 1) % m, 0);
    }

    #[test]
    fn glue_index_relation(l in definite_gram(3, true)) {
        // gluing L ⊥ L(−1) along the diagonal divides the determinant by |A|²
        let d = discriminant_group(&l).unwrap();
        let base = l.orthogonal_sum(&l.rescaled(-1).unwrap());
        let gens = d.generators.iter().map(|g| {
            let mut c = g.coords.clone();
            c.extend(g.coords.iter().cloned());
            LatticeVector::new(c)
        }).collect();
        let ov = overlattice_from_isotropic(&base, &IsotropicSubgroup { generators: gens }).unwrap();
        let idx = ov.index();
        prop_assert_eq!(ov.result.abs_det().unwrap() * &idx * &idx, base.abs_det().unwrap());
        prop_assert_eq!(ov.result.abs_det().unwrap(), BigInt::one());
    }

    #[test]
    fn delta_type_ignores_orientation(which in 0usize..3, seed in any::<u64>()) {
        let e8 = e8_code_lattice().lattice;
        let frames = e8_marked_frames().unwrap();
        let x = &frames[which].frame;
        let y = shuffle_frame(x, seed);
        prop_assert_eq!(abelian_type(&delta_code(&e8, x).unwrap()), abelian_type(&delta_code(&e8, &y).unwrap()));
    }

    #[test]
    fn parabolic_preserves_indicator(n in 2usize..5, choice in any::<u64>(), word in prop::collection::vec(any::<u16>(), 1..12)) {
        let w = hyperbolic_space(n).unwrap();
        let sigma = constructive_sigma(&w, 0, 0).unwrap();
        let a = &sigma[(choice % sigma.len() as u64) as usize];
        let gens = parabolic_generators(&w);
        let mut b = a.clone();
        for &t in &word {
            b = gens[t as usize % gens.len()].map_sigma(&b);
        }
        prop_assert_eq!(j_indicator(&w, &b), j_indicator(&w, a));
        match same_orbit_witness(&w, a, &b) {
            OrbitWitness::Isometry(g) => prop_assert!(verify_witness(&w, &g, a, &b)),
            OrbitWitness::Refutation(..) => prop_assert!(false, "same orbit refuted"),
        }
    }
}
