mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sullivan::catalog;
use sullivan::cohomology::Cohomology;
use sullivan::cyclic::{self, classify_cyclic, gottlieb_rank, obstruction_battery, Overall};
use sullivan::homotopy::{decide_homotopic, kill_odd, verify_homotopy, Decision, DEFAULT_T_CAP};
use sullivan::ratlin::member;
use sullivan::text::Workspace;
use sullivan::{q, Model, ModelMap, Polynomial};

fn models() -> Vec<Model> {
    catalog::all_models()
}

fn window(m: &Model, cap: u32) -> u32 {
    m.bound().map_or(cap, |b| b.min(cap))
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn basis_sizes_match_the_generating_function(idx in 0usize..64, n in 0u32..13) {
        let ms = models();
        let m = &ms[idx % ms.len()];
        prop_assume!(n <= window(m, 12));
        let degrees: Vec<u32> = m.generators().iter().map(|g| g.degree).collect();
        let basis = m.algebra().basis(n).unwrap();
        prop_assert_eq!(basis.len(), common::basis_count(&degrees, n as usize));
    }

    #[test]
    fn d_is_a_derivation(idx in 0usize..64, p in 1u32..7, r in 1u32..7, seed in any::<u64>()) {
        let ms = models();
        let m = &ms[idx % ms.len()];
        prop_assume!(p + r < window(m, 12));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::random_element(m, p, 3, &mut rng);
        let b = common::random_element(m, r, 3, &mut rng);
        let lhs = m.apply_d(&m.mul(&a, &b)).unwrap();
        let sign = if p % 2 == 0 { q(1, 1) } else { q(-1, 1) };
        let rhs = &m.mul(&m.apply_d(&a).unwrap(), &b) + &m.mul(&a, &m.apply_d(&b).unwrap()).scale(&sign);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_squares_to_zero_on_random_elements(idx in 0usize..64, n in 1u32..9, seed in any::<u64>()) {
        let ms = models();
        let m = &ms[idx % ms.len()];
        prop_assume!(n + 2 <= window(m, 12));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::random_element(m, n, 4, &mut rng);
        prop_assert!(m.apply_d(&m.apply_d(&a).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn polynomials_survive_format_and_parse(idx in 0usize..64, n in 0u32..10, seed in any::<u64>()) {
        let ms = models();
        let m = &ms[idx % ms.len()];
        prop_assume!(n <= window(m, 12));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = common::random_element(m, n, 4, &mut rng);
        a = a.scale(&common::nonzero_rational(&mut rng));
        prop_assert_eq!(m.parse(&m.format(&a)).unwrap(), a);
    }

    #[test]
    fn products_sit_inside_cohomology(idx in 0usize..64, n in 1u32..9) {
        let ms = models();
        let m = &ms[idx % ms.len()];
        prop_assume!(n <= window(m, 10));
        let c = Cohomology::new(m);
        let dim = c.dim(n).unwrap();
        let products = c.h_plus_squared(n).unwrap();
        prop_assert!(products.len() <= dim);
        prop_assert!(products.iter().all(|v| v.len() == dim));
    }

    #[test]
    fn kill_odd_ends_at_zero(n in prop::sample::select(vec![3u32, 5, 7]), seed in any::<u64>()) {
        let targets = [catalog::s2xs2(), catalog::cp2(), catalog::su3_t(), catalog::sphere(4)];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Arc::new(targets[rng.gen_range(0..targets.len())].clone());
        let eta = common::random_element(&a, n - 1, 3, &mut rng);
        let image = a.apply_d(&eta).unwrap();
        let e = common::free_sphere(n);
        let f = ModelMap::from_polys(&e, &a, &[("e", image)]).unwrap();
        let h = kill_odd(&f, &[("e", eta)]).unwrap();
        let (start, end) = h.endpoints();
        prop_assert_eq!(start.images(), f.images());
        prop_assert!(end.is_zero());
        prop_assert!(verify_homotopy(&h, &f, &end));
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn tensor_is_associative_and_obeys_kunneth(i in 0usize..64, j in 0usize..64, k in 0usize..64) {
        let small = [catalog::sphere(2), catalog::sphere(3), catalog::cp2(), catalog::kq(3), catalog::sphere(4)];
        let (a, b, c) = (&small[i % 5], &small[j % 5], &small[k % 5]);
        let left = Model::tensor(&Model::tensor(a, b).0, c).0;
        let right = Model::tensor(a, &Model::tensor(b, c).0).0;
        let betti = |m: &Model| (0..10).map(|n| Cohomology::new(m).dim(n).unwrap()).collect::<Vec<_>>();
        for n in 0..10 {
            prop_assert_eq!(left.algebra().basis(n).unwrap().len(), right.algebra().basis(n).unwrap().len());
        }
        prop_assert_eq!(betti(&left), betti(&right));
        let ab = Model::tensor(a, b).0;
        prop_assert_eq!(betti(&ab), common::kunneth(&betti(a), &betti(b)));
    }

    #[test]
    fn induced_maps_are_functorial(n in 2u32..8, seed in any::<u64>()) {
        // S4 -> S7 -> X with a random cocycle for e
        let targets = [catalog::s3xs4(), catalog::su3_t(), catalog::sphere(7), catalog::s2xs2()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = Arc::new(targets[rng.gen_range(0..targets.len())].clone());
        let mut c = common::random_boundary(&x, 7, &mut rng);
        for rep in common::known_classes(x.name(), 7).unwrap_or_default() {
            c.add_assign_scaled(&x.parse(rep).unwrap(), &q(rng.gen_range(-2i64..=2), 1));
        }
        if x.name() == "S7" {
            c.add_assign_scaled(&x.gen("e").unwrap(), &q(rng.gen_range(-2i64..=2), 1));
        }
        let f = catalog::hopf_map();
        let g = ModelMap::from_polys(f.target(), &x, &[("e", c)]).unwrap();
        let gf = ModelMap::compose(&g, &f).unwrap();
        prop_assert_eq!(gf.induced_h(n).unwrap(), g.induced_h(n).unwrap().mul(&f.induced_h(n).unwrap()).unwrap());
        prop_assert_eq!(gf.induced_q(n).unwrap(), g.induced_q(n).unwrap().mul(&f.induced_q(n).unwrap()).unwrap());
    }

    #[test]
    fn cohomology_map_is_substitution_on_representatives(seed in 0u64..1000) {
        let f = common::random_s4_map(seed);
        let src = Cohomology::new(f.source());
        let tgt = Cohomology::new(f.target());
        for n in [4u32, 7] {
            let m = f.induced_h(n).unwrap();
            for (j, rep) in src.betti(n).unwrap().representatives.iter().enumerate() {
                let image = f.apply(rep).unwrap();
                if f.image_in_cycles() {
                    prop_assert!(f.target().apply_d(&image).unwrap().is_zero());
                }
                prop_assert_eq!(tgt.class_of(n, &image).unwrap(), m.column(j));
            }
        }
    }

    #[test]
    fn battery_passing_maps_vanish_on_even_indecomposables(seed in 0u64..1000) {
        let f = common::random_s4_map(seed);
        let r = obstruction_battery(&f, None).unwrap();
        prop_assume!(r.overall == Overall::CyclicPossible);
        for n in (2..=8).step_by(2) {
            prop_assert!(f.induced_q(n).unwrap().is_zero());
        }
    }

    #[test]
    fn homotopy_decision_is_reflexive_and_symmetric(n in 2u32..8, seed in any::<u64>()) {
        let targets = [catalog::sphere(4), catalog::cp2(), catalog::s3xs4(), catalog::su3_t(), catalog::s2xs2()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = Arc::new(targets[rng.gen_range(0..targets.len())].clone());
        let e = common::free_sphere(n);
        let mut cocycle = || {
            let mut c = common::random_boundary(&t, n, &mut rng);
            for rep in common::known_classes(t.name(), n).unwrap_or_default() {
                c.add_assign_scaled(&t.parse(rep).unwrap(), &q(rng.gen_range(-1i64..=1), 1));
            }
            ModelMap::from_polys(&e, &t, &[("e", c)]).unwrap()
        };
        let f = cocycle();
        let g = cocycle();
        prop_assert!(matches!(decide_homotopic(&f, &f, DEFAULT_T_CAP), Decision::Homotopic(_)));
        let fg = decide_homotopic(&f, &g, DEFAULT_T_CAP);
        let gf = decide_homotopic(&g, &f, DEFAULT_T_CAP);
        prop_assert_eq!(fg.label(), gf.label());
        if let Decision::Homotopic(h) = fg {
            prop_assert!(verify_homotopy(&h, &f, &g));
        }
    }
}

#[test]
fn cup_length_is_at_most_cat0() {
    for m in models() {
        let Some(cat0) = m.cat0_bound() else { continue };
        let cup = Cohomology::new(&m).cup_length(window(&m, 12)).unwrap();
        assert!(cup <= cat0, "{}: cup length {cup} > cat0 {cat0}", m.name());
    }
}

#[test]
fn workspace_round_trips_through_text() {
    let ws = catalog::workspace();
    let again = Workspace::parse(&ws.print()).unwrap();
    assert!(again == ws);
    assert_eq!(again.print(), ws.print());
}

#[test]
fn classified_witnesses_verify_and_images_are_gottlieb() {
    for (a, x, dim) in catalog::classification_manifest() {
        let c = classify_cyclic(&Arc::new(a), &Arc::new(x)).unwrap();
        assert_eq!(c.dimension, dim, "{} -> {}", c.source, c.target);
        for r in &c.representatives {
            assert!(cyclic::affiliated_verify(&r.map, &r.witness).is_verified());
            let src = r.map.source();
            for n in (3..=src.algebra().max_generator_degree()).step_by(2) {
                if !src.is_complete() && n > src.bound().unwrap() {
                    continue;
                }
                let g = gottlieb_rank(src, n).unwrap();
                let qn = r.map.induced_q(n).unwrap();
                for i in 0..qn.rows() {
                    assert!(member(&g.functionals, qn.row(i)), "{}: degree {n}", r.map.name());
                }
            }
        }
    }
}

#[test]
fn random_s4_maps_satisfy_dy_eq_x_squared() {
    for seed in 0..20 {
        let f = common::random_s4_map(seed);
        let y: &Polynomial = f.image_of("y").unwrap();
        let x = f.image_of("x").unwrap();
        assert_eq!(f.target().apply_d(y).unwrap(), f.target().mul(x, x));
    }
}
