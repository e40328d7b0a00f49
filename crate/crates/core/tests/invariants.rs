//! Cross-module properties: the field, branches, the space model and the
//! group action agree with each other on random inputs.

use asm_core::aut::{self, PlaneAut};
use asm_core::classic::{hyperosculating_conic, osculation_order};
use asm_core::curve::{AffinePoint, CurveParams};
use asm_core::ff::{Subfield, TowerField};
use asm_core::model::{self, BranchSource};
use asm_core::symbolic::{substitute_branch, Series};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params(which: usize) -> CurveParams {
    let (p, e) = [(2, 1), (3, 1), (2, 2), (5, 1)][which % 4];
    CurveParams::with_c_one(p, e).unwrap()
}

fn random_point(c: &CurveParams, seed: u64, level: Subfield) -> AffinePoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    c.sample_points(level, 1, &mut rng)[0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frobenius_is_a_field_automorphism(which in 0usize..4, a in 0u32..10_000, b in 0u32..10_000) {
        let c = params(which);
        let f = c.field();
        let n = f.size() as u32;
        let (x, y) = (f.from_index(a % n).unwrap(), f.from_index(b % n).unwrap());
        prop_assert_eq!(f.frobenius(f.mul(x, y), 1), f.mul(f.frobenius(x, 1), f.frobenius(y, 1)));
        prop_assert_eq!(f.frobenius(f.add(x, y), 2), f.add(f.frobenius(x, 2), f.frobenius(y, 2)));
        prop_assert_eq!(f.frobenius(x, 4), x);
        prop_assert!(f.is_in(f.trace_q(f.frobenius(x, 2)), Subfield::Fq4));
    }

    #[test]
    fn lifted_branch_lies_on_curve(which in 0usize..4, seed in any::<u64>()) {
        let c = params(which);
        let f = c.field();
        let pt = random_point(&c, seed, Subfield::Fq4);
        let n = 3 * c.q() as usize;
        let b = c.affine_branch(&pt, n).unwrap();
        let r = substitute_branch(c.affine_polynomial(), &[b.x.clone(), b.y.clone()], f).unwrap();
        prop_assert_eq!(r.valuation(), None);
        prop_assert!(b.low_index.iter().all(|x| x.agrees));
    }

    #[test]
    fn conic_passes_through_point_with_order_at_least_q(which in 1usize..4, seed in any::<u64>()) {
        let c = params(which);
        let pt = random_point(&c, seed, Subfield::Fq4);
        let conic = hyperosculating_conic(&c, &pt).unwrap();
        prop_assert!(conic.evaluate(&c, &pt).is_zero());
        let rec = osculation_order(&c, &pt, c.q() as usize + 3).unwrap();
        prop_assert!(rec.dichotomy_holds(c.q()));
    }

    #[test]
    fn induced_matrix_intertwines_tau(which in 0usize..4, i in any::<usize>(), seed in any::<u64>()) {
        let c = params(which);
        let f = c.field();
        let g = aut::group_elements(&c).unwrap();
        let h = g[i % g.len()];
        let pt = random_point(&c, seed, Subfield::Fq4);
        let m = model::induced_space_matrix(&h, f);
        let lhs = m.apply(&model::tau_point(&c, &pt).unwrap(), f);
        let rhs = model::tau_point(&c, &h.apply(&pt, f)).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(aut::symbolic_invariance(&c, &h));
    }

    #[test]
    fn matrices_form_a_representation(which in 0usize..4, i in any::<usize>(), j in any::<usize>()) {
        let c = params(which);
        let f = c.field();
        let g = aut::group_elements(&c).unwrap();
        let (a, b) = (g[i % g.len()], g[j % g.len()]);
        let mab = model::induced_space_matrix(&a.compose(&b, f), f);
        let ma_mb = model::induced_space_matrix(&a, f).mul(&model::induced_space_matrix(&b, f), f);
        prop_assert!(mab.projectively_equal(&ma_mb, f));
    }

    #[test]
    fn order_sequences_are_group_invariant(which in 1usize..4, i in any::<usize>(), seed in any::<u64>()) {
        let c = params(which);
        let f = c.field();
        let g = aut::group_elements(&c).unwrap();
        let h = g[i % g.len()];
        let pt = random_point(&c, seed, Subfield::Fq4);
        let n = 3 * c.q() as usize;
        let before = model::order_sequence_at(&c, BranchSource::Affine(pt), n).unwrap();
        let after = model::order_sequence_at(&c, BranchSource::Affine(h.apply(&pt, f)), n).unwrap();
        prop_assert_eq!(before, after);
    }
}

#[test]
fn place_action_matches_matrices_on_infinity() {
    let c = CurveParams::with_c_one(3, 2).unwrap();
    let f = c.field();
    for h in aut::group_elements(&c).unwrap().iter().step_by(7) {
        let m = model::induced_space_matrix(h, f);
        for pl in c.infinite_places() {
            assert_eq!(
                m.apply(&model::tau_place(&pl, f), f),
                model::tau_place(&h.apply_place(&pl, f), f)
            );
        }
    }
}

#[test]
fn xi_swaps_branches_at_infinity() {
    let c = CurveParams::with_c_one(5, 1).unwrap();
    let f = c.field();
    let xi = PlaneAut::xi();
    let places = c.infinite_places();
    let q = c.q() as usize;
    for (a, b) in places[..q].iter().zip(&places[q..]) {
        assert_eq!(xi.apply_place(a, f), *b);
        let ba = c.infinite_branch(a, 8).unwrap();
        let bb = c.infinite_branch(b, 8).unwrap();
        assert_eq!(ba[0], bb[1]);
        assert_eq!(ba[1], bb[0]);
    }
}

#[test]
fn general_constant_outside_fq() {
    let f = TowerField::build(3, 1).unwrap();
    let g = f.generator();
    let c = CurveParams::new(f.clone(), g).unwrap();
    assert!(!c.c_in(Subfield::Fq2));
    assert!(c.enumerate_points(Subfield::Fq2).unwrap().is_empty());
    let pt = random_point(&c, 5, Subfield::Fq4);
    let y = asm_core::symbolic::hensel_branch(&c, pt.u, pt.v, 9).unwrap();
    let x = Series::constant(pt.u, 9).add(&Series::t(9), &f);
    let r = substitute_branch(c.affine_polynomial(), &[x, y], &f).unwrap();
    assert_eq!(r.valuation(), None);
    assert!(aut::group_elements(&c).unwrap().iter().all(|h| aut::symbolic_invariance(&c, h)));
}
