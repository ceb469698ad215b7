use num_bigint::{BigInt, BigUint};
use num_traits::One;

use vftk_core::budget::Budget;
use vftk_core::codes::{d_code, hamming_code};
use vftk_core::f2quad::{census_total, orbit_census};
use vftk_core::frame::{abelian_type, delta_code, e8_marked_frames, e8_table_frames, frame_stabilizer_wx, LatticeFrame};
use vftk_core::hat::wtilde_frame_stabilizer;
use vftk_core::io::{format_frame, format_gram, parse_frame, parse_gram};
use vftk_core::lattice::{a_lattice, e8_code_lattice, lattice_from_code};
use vftk_core::unimodular::{
    dirichlet_prime, lattice_automorphisms, preg4_twist, signature, strong_extension_check, unimodularize,
};

#[test]
fn construction_a_of_h8_through_text() {
    let l = lattice_from_code(&hamming_code(8).unwrap());
    let back = parse_gram(&format_gram(&l)).unwrap();
    assert_eq!(back, l);
    assert!(back.is_even());
    assert_eq!(back.abs_det().unwrap(), BigInt::one());
    assert_eq!(back.root_count().unwrap(), 240);
}

#[test]
fn d_code_lattices_are_even() {
    for k in 1..=5 {
        let l = lattice_from_code(&d_code(k).unwrap());
        assert!(l.is_even());
        assert_eq!(l.abs_det().unwrap(), BigInt::from(2).pow(16 - 2 * k as u32));
    }
}

#[test]
fn frame_file_roundtrip_keeps_delta_type() {
    let e8 = e8_code_lattice().lattice;
    for m in e8_marked_frames().unwrap() {
        let text = format_frame(m.frame.vectors());
        let x = LatticeFrame::new(&e8, parse_frame(&text).unwrap()).unwrap();
        assert_eq!(abelian_type(&delta_code(&e8, &x).unwrap()), (m.l, m.k));
    }
}

#[test]
fn wtilde_orders_on_table_frames() {
    let e8 = e8_code_lattice().lattice;
    for (_, x) in e8_table_frames(&Budget::unlimited()).unwrap() {
        let stab = frame_stabilizer_wx(&e8, &x).unwrap();
        let w = wtilde_frame_stabilizer(&e8, &x, &stab).unwrap();
        assert_eq!(w.pairwise_order, BigUint::from(256u32) * &stab.dx_order);
        assert_eq!(w.setwise_order, BigUint::from(256u32) * &stab.wx_order);
        assert!(w.lifts_checked > 0);
    }
}

#[test]
fn a3_unimodularizes_in_rank_24() {
    let a3 = a_lattice(3);
    let u = unimodularize(&a3).unwrap();
    let m = u.lattice();
    assert_eq!(m.rank(), 24);
    assert!(m.is_even());
    assert_eq!(m.abs_det().unwrap(), BigInt::one());
    assert!(u.is_primitive().unwrap());
    let aut = lattice_automorphisms(&a3, 1000, &Budget::unlimited()).unwrap();
    assert_eq!(aut.order, Some(48));
    assert!(strong_extension_check(&u, &aut.generators).unwrap().iter().all(|v| v.extends));
}

#[test]
fn twist_by_dirichlet_prime() {
    let a2 = a_lattice(2);
    let s = dirichlet_prime(&a2, 20).unwrap();
    assert_eq!(s, 23);
    let t = preg4_twist(&a2, s).unwrap();
    assert_eq!(t.lattice().abs_det().unwrap(), BigInt::from(s * s));
    assert_eq!(signature(t.lattice()), (4, 0));
    assert!(t.is_primitive().unwrap());
}

#[test]
fn census_n4_exhaustive_matches_closed_form() {
    let a = orbit_census(4, true).unwrap();
    let b = orbit_census(4, false).unwrap();
    assert_eq!(a.rows, b.rows);
    assert_eq!(a.orbits_match_indicator, Some(true));
    assert_eq!(census_total(&a), a.sigma_size);
}

#[test]
#[ignore = "exhaustive enumeration of Σ for n = 5"]
fn census_n5_exhaustive_matches_closed_form() {
    let a = orbit_census(5, true).unwrap();
    let b = orbit_census(5, false).unwrap();
    assert_eq!(a.rows, b.rows);
    assert_eq!(a.sigma_size, BigUint::from(71145u32));
}
