//! Acceptance suite. Each test prints one `PASS`/`FAIL` line for its
//! criterion and then asserts it.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vftk_core::budget::Budget;
use vftk_core::codes::{classify_markings, code_automorphisms, hamming_code, marking_count};
use vftk_core::f2quad::{
    enumerate_sigma, hyperbolic_space, orbit_census, same_orbit_witness, verify_witness, OrbitWitness,
};
use vftk_core::frame::{
    agl_order, classify_e8_frames, e8_table_frames, frame_group_order, gc_order, gcapn_invariants,
    gl2_order, order_sym_wr_agl, WEYL_E8_ORDER,
};
use vftk_core::hat::{
    all_lifts, basis_samples, involution_class, is_hat_homomorphism, is_kernel_element, miyamoto_involutions,
    torus_stabilizer_type, HatGroup,
};
use vftk_core::lattice::{a_lattice, e8_code_lattice, e8_lattice, IntegralLattice};
use vftk_core::linalg::{int_mat, mat_mul, transpose};
use vftk_core::unimodular::{
    hyperbolic_unimodularize, lattice_automorphisms, preg4_twist, strong_extension_check, sum_four_squares_mod,
    sum_two_squares_mod, unimodularize,
};

fn report(n: u32, what: &str, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("{status} criterion {n}: {what} ({detail})");
    assert!(pass, "criterion {n} failed: {detail}");
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn pow2(e: u32) -> BigUint {
    BigUint::one() << e
}

fn fact(n: u64) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

#[test]
fn criterion_01_frame_table() {
    let start = Instant::now();
    let frames = e8_table_frames(&Budget::from_env()).unwrap();
    let e8 = e8_code_lattice().lattice;
    let expected = [
        ("K8", "2^6 x 4^1", pow2(7), pow2(7) * fact(8)),
        ("K8'", "2^4 x 4^2", pow2(6), pow2(6) * big(1152)),
        ("L8", "2^2 x 4^3", pow2(4), pow2(4) * big(384)),
        ("O8", "4^4", big(2), big(2688)),
    ];
    let mut ok = frames.len() == 4;
    let mut rows = Vec::new();
    for ((name, x), (ename, etype, edx, ewx)) in frames.iter().zip(&expected) {
        let inv = gcapn_invariants(&e8, x).unwrap();
        rows.push(format!("{name}: {} |D_X|={} |W_X|={}", inv.delta_type(), inv.dx_order, inv.wx_order));
        ok &= name == ename && inv.delta_type() == *etype && inv.dx_order == *edx && inv.wx_order == *ewx;
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(60);
    report(1, "E8 frame sublattice table", ok, &format!("{}; {:.1?}", rows.join("; "), elapsed));
}

#[test]
fn criterion_02_structure_table() {
    let frames = e8_table_frames(&Budget::from_env()).unwrap();
    let e8 = e8_code_lattice().lattice;
    let expected_gc = [pow2(15), pow2(14), pow2(12), pow2(9)];
    let expected_quot = [fact(8), big(1152), big(384), big(1344)];
    let mut ok = true;
    let mut rows = Vec::new();
    for (k, ((_, x), (gc, q))) in (1..=4).zip(frames.iter().zip(expected_gc.iter().zip(&expected_quot))) {
        let inv = gcapn_invariants(&e8, x).unwrap();
        let formula_gc = pow2((inv.l + 2 * inv.k + inv.e) as u32);
        let wreath = pow2(8) * q;
        let smith_ok = inv.gcapt_type == inv.gcapt_formula;
        let gcapt_order_ok = inv.gcapt_order == pow2((inv.n - inv.l - inv.k + 2 * inv.l + 3 * inv.k) as u32);
        ok &= inv.k == k
            && inv.gc_order == *gc
            && formula_gc == *gc
            && gc_order(k).unwrap() == *gc
            && inv.g_over_gc_order == wreath
            && smith_ok
            && gcapt_order_ok;
        rows.push(format!("k={k} |G_C|={} |(G∩N)/G_C|={}", inv.gc_order, inv.g_over_gc_order));
    }
    report(2, "structure of G ∩ N", ok, &rows.join("; "));
}

#[test]
fn criterion_03_e8_census() {
    let start = Instant::now();
    let c = classify_e8_frames().unwrap();
    let sizes: Vec<u64> = c.classes.iter().map(|cl| cl.count).collect();
    let mut ok = c.total == 382_185 && c.classes.len() == 4;
    let mut sorted = sizes.clone();
    sorted.sort_unstable();
    ok &= sorted == [135, 9450, 113_400, 259_200];
    for cl in &c.classes {
        ok &= big(cl.count) * &cl.wx_order == big(WEYL_E8_ORDER);
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(600);
    report(3, "E8 frame census", ok, &format!("sizes {sizes:?}, total {}; {:.1?}", c.total, elapsed));
}

#[test]
fn criterion_04_stabilizer_orders() {
    let mut ok = true;
    for k in 1..=5 {
        ok &= frame_group_order(k).unwrap() == gc_order(k).unwrap() * order_sym_wr_agl(k).unwrap();
    }
    let k5 = frame_group_order(5).unwrap();
    ok &= k5 == pow2(9) * big(20160);
    ok &= k5 == pow2(5) * agl_order(4);
    ok &= k5 == pow2(8) * big(2) * gl2_order(4);
    ok &= frame_group_order(1).unwrap() == pow2(15) * fact(16);
    report(4, "frame stabilizer orders", ok, &format!("|G(5)| = {k5}"));
}

#[test]
fn criterion_05_two_b_purity() {
    let mut ok = true;
    let mut checked = 0;
    for k in 1..=5 {
        for chi in 1u32..1 << k {
            let c = involution_class(k, chi).unwrap();
            ok &= c.minus_dim == 128 && c.total_dim == 248 && c.class == "2B";
            checked += 1;
        }
    }
    report(5, "2B-purity", ok, &format!("{checked} characters"));
}

#[test]
fn criterion_06_miyamoto_count() {
    let mut ok = true;
    let mut counts = Vec::new();
    for k in 1..=5 {
        let m = miyamoto_involutions(k).unwrap();
        ok &= m.distinct.len() == 1 << (k - 1) && m.is_affine_coset;
        counts.push(m.distinct.len());
    }
    report(6, "Miyamoto involutions", ok, &format!("counts {counts:?}"));
}

#[test]
fn criterion_07_markings() {
    let start = Instant::now();
    let h8 = hamming_code(8).unwrap();
    let orbits = classify_markings(&h8).unwrap();
    let total: u64 = orbits.iter().map(|o| o.size).sum();
    let aut = code_automorphisms(&h8).unwrap();
    let elapsed = start.elapsed();
    let ok = orbits.len() == 3
        && total == 105
        && marking_count(8) == big(105)
        && aut.order == big(1344)
        && elapsed < Duration::from_secs(10);
    let sizes: Vec<u64> = orbits.iter().map(|o| o.size).collect();
    report(7, "H8 markings", ok, &format!("orbit sizes {sizes:?}, |Aut| = {}; {elapsed:.1?}", aut.order));
}

#[test]
fn criterion_08_unimodularization() {
    let start = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, l) in [("A1", a_lattice(1)), ("A2", a_lattice(2))] {
        let u = unimodularize(&l).unwrap();
        let m = u.lattice();
        let roots = m.root_count().unwrap();
        ok &= m.rank() == 8 && m.is_even() && m.abs_det().unwrap() == BigInt::one();
        ok &= u.is_positive_definite() && roots == 240 && u.is_primitive().unwrap();
        let aut = lattice_automorphisms(&l, 10_000, &Budget::from_env()).unwrap();
        let verdicts = strong_extension_check(&u, &aut.generators).unwrap();
        ok &= aut.complete && verdicts.iter().all(|v| v.extends);
        notes.push(format!("{name}: {roots} roots, {} generators extend", verdicts.len()));
    }
    let t = preg4_twist(&a_lattice(1), 3).unwrap();
    ok &= t.lattice().abs_det().unwrap() == BigInt::from(3) && t.lattice().is_even();
    for l in [a_lattice(1), a_lattice(2), e8_lattice()] {
        let h = hyperbolic_unimodularize(&l).unwrap();
        ok &= h.lattice().is_even() && h.lattice().abs_det().unwrap() == BigInt::one() && h.is_primitive().unwrap();
        ok &= h.lattice().rank() <= 2 * l.rank() + 2;
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(30);
    report(8, "unimodularization", ok, &format!("{}; {elapsed:.1?}", notes.join("; ")));
}

fn is_odd_prime(p: i64) -> bool {
    p > 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

#[test]
fn criterion_09_sums_of_squares() {
    let mut ok = true;
    let mut cases = 0;
    for p in (3..=50).filter(|&p| is_odd_prime(p)) {
        for r in 1..=6u32 {
            let m = p.pow(r);
            let (a, b) = sum_two_squares_mod(p, r).unwrap();
            let (a2, b2, m2) = (i128::from(a), i128::from(b), i128::from(m));
            ok &= (a2 * a2 + b2 * b2 + 1).rem_euclid(m2) == 0;
            if m <= 2500 {
                // brute-force residue search: a solution exists and ours is one
                let sols: BTreeSet<(i64, i64)> = (0..m)
                    .flat_map(|x| (0..m).map(move |y| (x, y)))
                    .filter(|&(x, y)| (x * x + y * y + 1) % m == 0)
                    .collect();
                ok &= sols.contains(&(a.rem_euclid(m), b.rem_euclid(m)));
            }
            cases += 1;
        }
    }
    for r in 1..=8u32 {
        let m = 1i64 << r;
        let (a, b, c, d) = sum_four_squares_mod(r).unwrap();
        ok &= (a * a + b * b + c * c + d * d + 1).rem_euclid(m) == 0;
        // brute-force search over all representations of 2^r - 1
        let bound = (m as f64).sqrt() as i64 + 1;
        let reps: BTreeSet<(i64, i64, i64, i64)> = (0..=bound)
            .flat_map(|x| (0..=bound).flat_map(move |y| (0..=bound).flat_map(move |z| (0..=bound).map(move |w| (x, y, z, w)))))
            .filter(|&(x, y, z, w)| x * x + y * y + z * z + w * w == m - 1)
            .collect();
        ok &= reps.contains(&(a, b, c, d));
        cases += 1;
    }
    report(9, "sums of squares", ok, &format!("{cases} cases"));
}

#[test]
fn criterion_10_parabolic_orbits() {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in 1..=3 {
        let c = orbit_census(n, true).unwrap();
        ok &= c.orbit_count() == n && c.orbits_match_indicator == Some(true);
        let w = hyperbolic_space(n).unwrap();
        let sigma = enumerate_sigma(&w).unwrap();
        let mut witnesses = 0;
        for a in &sigma {
            for b in &sigma {
                match same_orbit_witness(&w, a, b) {
                    OrbitWitness::Isometry(g) => {
                        ok &= verify_witness(&w, &g, a, b);
                        witnesses += 1;
                    }
                    OrbitWitness::Refutation(x, y) => ok &= x != y,
                }
            }
        }
        notes.push(format!("n={n}: {} orbits, {witnesses} witnesses", c.orbit_count()));
    }
    let start = Instant::now();
    let c5 = orbit_census(5, false).unwrap();
    let ns = hyperbolic_space(5).unwrap().nonsingular_count().unwrap();
    let elapsed = start.elapsed();
    ok &= c5.orbit_count() == 5 && c5.u_log2(0) == Some(4) && c5.u_log2(4) == Some(14) && ns == 496;
    ok &= elapsed < Duration::from_secs(60);
    notes.push(format!("n=5: {} orbits, {ns} nonsingular; {elapsed:.1?}", c5.orbit_count()));
    report(10, "parabolic orbits on Σ", ok, &notes.join("; "));
}

fn random_even_lattice(rng: &mut ChaCha8Rng) -> IntegralLattice {
    loop {
        let r = rng.gen_range(1..=4);
        // rows with even coordinate sum span an even lattice
        let b: Vec<Vec<i64>> = (0..r)
            .map(|_| {
                let mut row: Vec<i64> = (0..r).map(|_| rng.gen_range(-2..=2)).collect();
                if row.iter().sum::<i64>() % 2 != 0 {
                    row[0] += 1;
                }
                row
            })
            .collect();
        let bm = int_mat(&b);
        let g = mat_mul(&bm, &transpose(&bm));
        if let Ok(l) = IntegralLattice::new(g) {
            return l;
        }
    }
}

#[test]
fn criterion_11_hat_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut lattices = vec![e8_lattice()];
    for _ in 0..3 {
        lattices.push(random_even_lattice(&mut rng));
    }
    let mut ok = true;
    let mut notes = Vec::new();
    for l in &lattices {
        let n = l.rank();
        let hat = HatGroup::new(l).unwrap();
        let samples = basis_samples(n);
        for x in &samples {
            for y in &samples {
                for z in samples.iter().take(n) {
                    ok &= hat.relations_hold(x, y, z);
                }
            }
        }
        let pairs: Vec<(Vec<i64>, Vec<i64>)> =
            samples.iter().flat_map(|x| samples.iter().map(move |y| (x.clone(), y.clone()))).collect();
        let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        let lifts = all_lifts(&hat, &id).unwrap();
        ok &= lifts.len() == 1 << n;
        ok &= lifts.iter().all(|phi| is_kernel_element(phi, &pairs) && is_hat_homomorphism(&hat, phi, &pairs));
        let distinct: BTreeSet<Vec<i8>> = lifts.iter().map(|p| p.mu.clone()).collect();
        ok &= distinct.len() == 1 << n;
        notes.push(format!("rank {n}: {} lifts", lifts.len()));
    }
    let e8 = e8_code_lattice().lattice;
    for (name, x) in e8_table_frames(&Budget::from_env()).unwrap() {
        let inv = gcapn_invariants(&e8, &x).unwrap();
        let t = torus_stabilizer_type(&e8, &x).unwrap();
        ok &= t == inv.gcapt_formula;
        notes.push(format!("{name}: torus type {t:?}"));
    }
    report(11, "hat-group relations and torus types", ok, &notes.join("; "));
}
