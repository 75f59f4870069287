mod common;

use num::BigRational;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use qpcf::lamination::{incidence_cycle, pullback_lamination, Lamination};
use qpcf::mating::{lamination_of, mateability, HubbardTree, Outcome};
use qpcf::poly::Poly;
use qpcf::treedyn::{dual_lamination, solve_eigen_md, spectral_radius_rational, EdgeMatrices};
use qpcf::treesphere::{local_degree, SphereMap, SpherePoint};

use common::{charpoly, lam_oracle, nullspace, polymult, trees};

fn tree_lamination(name: &str) -> Lamination {
    let (_, t) = trees::all().into_iter().find(|(n, _)| n == name).unwrap();
    lamination_of(&HubbardTree::new(t).unwrap(), 0).unwrap()
}

fn quadratic_fixtures() -> Vec<(String, Lamination)> {
    trees::all()
        .into_iter()
        .filter(|(_, t)| t.degree() == 2)
        .map(|(n, t)| (n, lamination_of(&HubbardTree::new(t).unwrap(), 0).unwrap()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn parallel_test_matches_brute_force(seed in any::<u64>(), mirror in any::<bool>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let plus = lam_oracle::random_lamination(&mut rng, 10, 64, None);
        let minus = lam_oracle::random_lamination(&mut rng, 10, 64, mirror.then_some(&plus));
        let fast = incidence_cycle(&plus, &minus);
        prop_assert_eq!(fast.is_some(), lam_oracle::brute_force_parallel(&plus, &minus));
        if let Some(c) = fast {
            prop_assert!(c.validate(&plus, &minus));
            // The same loop, read from the other side.
            prop_assert!(c.swapped().validate(&minus, &plus));
            prop_assert!(incidence_cycle(&minus, &plus).is_some());
        }
    }

    #[test]
    fn spectral_radius_matches_characteristic_root(
        n in 1usize..=4,
        entries in prop::collection::vec((0i64..6, 1i64..5), 16),
    ) {
        let a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| { let (p, q) = entries[i * 4 + j]; BigRational::new(p.into(), q.into()) }).collect())
            .collect();
        let got = spectral_radius_rational(&a).unwrap();
        let want = charpoly::largest_real_root(&a, 1e-14);
        prop_assert!((got - want).abs() <= 1e-8, "{} vs {}", got, want);
    }

    #[test]
    fn eigen_solver_matches_support_enumeration(
        n in 1usize..=4,
        bits in prop::collection::vec(any::<bool>(), 16),
        d in prop::collection::vec(1u32..=3, 4),
    ) {
        let m: Vec<Vec<u8>> = (0..n).map(|i| (0..n).map(|j| u8::from(bits[i * 4 + j])).collect()).collect();
        let d = d[..n].to_vec();
        let e = EdgeMatrices::new(m.clone(), d.clone()).unwrap();
        let got = solve_eigen_md(&e);
        prop_assert_eq!(got.is_some(), nullspace::nonnegative_eigenvector(&m, &d).is_some());
    }

    #[test]
    fn winding_matches_exact_multiplicity(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (c, roots) = polymult::random_fixture(&mut rng);
        let p = polymult::expand(&c, &roots);
        let r = SphereMap::polynomial(Poly::new(p.iter().map(polymult::to_f64).collect())).unwrap();
        for (x, m) in &roots {
            let got = local_degree(&r, &SpherePoint::Finite(polymult::to_f64(x)), &[]).unwrap();
            prop_assert_eq!(got as usize, polymult::local_degree(&p, x));
            prop_assert!(got as usize >= *m);
        }
    }
}

#[test]
fn pulled_back_laminations_are_forward_invariant() {
    for (name, l) in quadratic_fixtures() {
        let deep = pullback_lamination(&l, l.portrait().unwrap(), 4).unwrap();
        for leaf in deep.leaves() {
            if let Some(image) = leaf.image(2) {
                assert!(deep.contains(&image), "{name}: image of {leaf:?} missing");
            }
        }
    }
}

#[test]
fn dual_laminations_are_invariant() {
    for (name, t) in trees::all() {
        let l = dual_lamination(&t).unwrap().lamination(0).unwrap();
        for leaf in l.leaves() {
            if let Some(image) = leaf.image(t.degree()) {
                assert!(l.contains(&image), "{name}: image of {leaf:?} missing");
            }
        }
    }
}

#[test]
fn mateability_is_symmetric() {
    let fixtures = quadratic_fixtures();
    for (a, la) in &fixtures {
        for (b, lb) in &fixtures {
            let ab = mateability(la, lb, 8).unwrap();
            let ba = mateability(lb, la, 8).unwrap();
            assert_eq!(ab.outcome, ba.outcome, "{a} / {b}");
        }
    }
}

#[test]
fn parallel_cycles_persist_under_pullback() {
    let fixtures = quadratic_fixtures();
    for (a, la) in &fixtures {
        for (b, lb) in &fixtures {
            let mut seen = false;
            for k in 0..=4 {
                let pa = pullback_lamination(la, la.portrait().unwrap(), k).unwrap();
                let pb = pullback_lamination(lb, lb.portrait().unwrap(), k).unwrap();
                let now = incidence_cycle(&pa, &pb).is_some();
                assert!(now || !seen, "{a} / {b}: cycle lost at depth {k}");
                seen = now;
            }
        }
    }
}

#[test]
fn rabbit_pairs() {
    let rabbit = tree_lamination("1/3 star");
    let corabbit = tree_lamination("2/3 star");
    assert_eq!(mateability(&rabbit, &corabbit, 8).unwrap().outcome, Outcome::Obstructed);
    assert_eq!(mateability(&rabbit, &rabbit, 8).unwrap().outcome, Outcome::Mateable);
    assert_eq!(mateability(&rabbit, &tree_lamination("basilica"), 8).unwrap().outcome, Outcome::Mateable);
}
