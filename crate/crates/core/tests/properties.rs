//! Randomized cross-validation of the structural invariants: independent
//! oracles against fast paths, dualization functoriality, and generator
//! sanity.

use fidl_lab::frame::{
    canonical_frame, complex_module, compose_fi_morphisms, dual_of_hom, identity_fi_morphism,
    urquhart_check, validate_frame,
};
use fidl_lab::gen::{
    gen_module_mixed, instance_rng, random_distributive_lattice, random_frame, random_poset,
};
use fidl_lab::lattice::{increasing_sets, lattice_product, product_decode};
use fidl_lab::module::{product_module, validate_module};
use fidl_lab::morphism::{compose_homs, validate_hom};
use fidl_lab::subset::Subset;
use fidl_lab::Budget;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn upset_enumeration_matches_subset_scan(seed in 0u64..1000, n in 0usize..7) {
        let mut rng = instance_rng(seed, 0);
        let p = random_poset(&mut rng, n);
        let fast: Vec<Subset> = p.increasing_subsets_capped(usize::MAX).unwrap();
        let mut slow = Vec::new();
        for bits in 0..(1u64 << n) {
            let s = Subset::from_bits(n, bits);
            if p.is_increasing(&s) {
                slow.push(s);
            }
        }
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn spectrum_fast_path_matches_brute_force(seed in 0u64..1000) {
        let mut rng = instance_rng(seed, 1);
        let l = random_distributive_lattice(&mut rng, 10);
        let brute = l.spectrum_brute_force();
        let fast = l.spectrum_join_irreducible();
        prop_assert_eq!(brute.primes(), fast.primes());
    }

    #[test]
    fn representation_map_is_an_isomorphism_of_lattices(seed in 0u64..1000) {
        let mut rng = instance_rng(seed, 2);
        let l = random_distributive_lattice(&mut rng, 10);
        let s = l.spectrum();
        let ups = increasing_sets(s.order());
        prop_assert_eq!(l.len(), ups.len());
        for a in 0..l.len() {
            for b in 0..l.len() {
                prop_assert_eq!(l.beta(&s, l.join(a, b)), l.beta(&s, a).union(&l.beta(&s, b)));
                prop_assert_eq!(
                    l.beta(&s, l.meet(a, b)),
                    l.beta(&s, a).intersection(&l.beta(&s, b))
                );
            }
        }
    }

    #[test]
    fn congruences_match_spectrum_subsets(seed in 0u64..500) {
        let mut rng = instance_rng(seed, 3);
        let l = random_distributive_lattice(&mut rng, 6);
        let s = l.spectrum();
        let brute = l.congruences_brute_force();
        let mut via_spectrum = Vec::new();
        for bits in 0..(1u64 << s.len()) {
            via_spectrum.push(l.theta_from_closed(&s, &Subset::from_bits(s.len(), bits)));
        }
        via_spectrum.sort();
        via_spectrum.dedup();
        let mut brute_sorted = brute;
        brute_sorted.sort();
        prop_assert_eq!(via_spectrum, brute_sorted);
    }

    #[test]
    fn random_frames_dualize_soundly(seed in 0u64..200) {
        let mut rng = instance_rng(seed, 4);
        let f = random_frame(&mut rng, 4, 3);
        let cm = complex_module(&f, 4096).unwrap();
        // Revalidation of the raw tables.
        prop_assert!(validate_module(
            cm.module.lattice_a().clone(),
            cm.module.lattice_b().clone(),
            &cm.module.fusion_rows(),
            &cm.module.implication_rows(),
        )
        .is_ok());
        let report = urquhart_check(&f, 4096).unwrap();
        prop_assert!(report.all_pass());
    }
}

#[test]
fn product_projections_reproduce_factors() {
    let budget = Budget::default();
    for seed in 0..12u64 {
        let a = gen_module_mixed(seed, 0, 4, 3, &budget);
        let b = gen_module_mixed(seed, 1, 3, 3, &budget);
        let factors = [a, b];
        let (p, projs) = product_module(&factors, budget.lattice_max).unwrap();
        let sizes_a = [factors[0].size_a(), factors[1].size_a()];
        let sizes_b = [factors[0].size_b(), factors[1].size_b()];
        for x in 0..p.size_a() {
            for bi in 0..p.size_b() {
                let dx = product_decode(&sizes_a, x);
                let db = product_decode(&sizes_b, bi);
                let df = product_decode(&sizes_a, p.fusion(x, bi));
                for (k, f) in factors.iter().enumerate() {
                    assert_eq!(df[k], f.fusion(dx[k], db[k]));
                    assert_eq!(projs[k].alpha()[x], dx[k]);
                }
            }
        }
    }
}

#[test]
fn lattice_product_agrees_with_order_derivation() {
    let mut rng = instance_rng(11, 5);
    for _ in 0..6 {
        let a = random_distributive_lattice(&mut rng, 5);
        let b = random_distributive_lattice(&mut rng, 4);
        let fast = lattice_product(&[&a, &b]);
        let derived = fidl_lab::lattice::FiniteLattice::from_poset(fast.poset().clone()).unwrap();
        assert!(fast.equal_structure(&derived));
    }
}

#[test]
fn dualization_reverses_composition_and_preserves_identities() {
    let budget = Budget::default();
    for seed in 0..10u64 {
        let m = gen_module_mixed(seed, 2, 5, 4, &budget);
        // Identity dualizes to the identity.
        let id = fidl_lab::morphism::identity_hom(&m);
        let dual_id = dual_of_hom(&id);
        let expected = identity_fi_morphism(dual_id.source());
        assert_eq!(dual_id.g(), expected.g());
        assert_eq!(dual_id.h(), expected.h());

        // A composable pair: diagonal then projection.
        let (p, projs) = product_module(&[m.clone(), m.clone()], budget.lattice_max).unwrap();
        let sa = [m.size_a(), m.size_a()];
        let sb = [m.size_b(), m.size_b()];
        let alpha: Vec<usize> = (0..m.size_a())
            .map(|x| fidl_lab::lattice::product_encode(&sa, &[x, x]))
            .collect();
        let gamma: Vec<usize> = (0..m.size_b())
            .map(|x| fidl_lab::lattice::product_encode(&sb, &[x, x]))
            .collect();
        let diag = validate_hom(&m, &p, alpha, gamma).unwrap();
        let composed = compose_homs(&diag, &projs[0]).unwrap();

        let dual_diag = dual_of_hom(&diag);
        let dual_proj = dual_of_hom(&projs[0]);
        let dual_composed = dual_of_hom(&composed);
        // Contravariance: the dual of (proj . diag) is dual(diag) . dual(proj).
        let reversed = compose_fi_morphisms(&dual_proj, &dual_diag).unwrap();
        assert_eq!(dual_composed.g(), reversed.g());
        assert_eq!(dual_composed.h(), reversed.h());
    }
}

#[test]
fn canonical_frames_pass_the_space_conditions() {
    let budget = Budget::default();
    for seed in 0..10u64 {
        let m = gen_module_mixed(seed, 3, 6, 4, &budget);
        let dual = canonical_frame(&m);
        let report = urquhart_check(dual.frame(), budget.lattice_max).unwrap();
        assert!(report.all_pass(), "seed {seed}: {report:?}");
        // Canonical frames revalidate from their triples.
        assert!(validate_frame(
            dual.frame().x().clone(),
            dual.frame().y().clone(),
            &dual.frame().r().triples(),
            &dual.frame().t().triples(),
        )
        .is_ok());
    }
}

#[test]
fn mixed_corpus_is_diverse() {
    let budget = Budget::default();
    let sizes_a: std::collections::BTreeSet<usize> = (0..40)
        .map(|i| gen_module_mixed(17, i, 8, 6, &budget).size_a())
        .collect();
    let sizes_b: std::collections::BTreeSet<usize> = (0..40)
        .map(|i| gen_module_mixed(17, i, 8, 6, &budget).size_b())
        .collect();
    assert!(sizes_a.len() >= 3, "A sizes {sizes_a:?}");
    assert!(sizes_b.len() >= 2, "B sizes {sizes_b:?}");
}
