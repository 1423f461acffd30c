use std::f64::consts::PI;

use approx::assert_relative_eq;
use lgq::geometry::transform;
use lgq::linalg::inertia;
use lgq::oracles;
use lgq::spectral::{eigenfunction_at, null_vector, null_vectors};
use lgq::{discretize, find_eigenvalues, DiscretizedGraph, GraphSpec, LambdaSystem, Point, Resolution, SolverOptions};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn ring(gamma: f64, n: usize) -> LambdaSystem {
    LambdaSystem::new(discretize(&GraphSpec::Ring { radius: 10.0, cut_angle: 0.0 }, gamma, Resolution::Count(n)).unwrap())
        .unwrap()
}

#[test]
fn sorted_eigenvalues_increase_with_kappa() {
    let sys = LambdaSystem::new(
        discretize(&GraphSpec::two_arm_star(1.2, 5.0, 7.0), 1.0, Resolution::Spacing(0.2)).unwrap(),
    )
    .unwrap();
    let mut prev = sys.eigenvalues(0.05).unwrap();
    for k in 1..40 {
        let next = sys.eigenvalues(0.05 * 1.1f64.powi(k)).unwrap();
        assert!(prev.iter().zip(&next).all(|(a, b)| b > a));
        prev = next;
    }
}

#[test]
fn inertia_agrees_with_an_independent_eigensolver() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for _ in 0..20 {
        let n = 20;
        let a = nalgebra::DMatrix::<f64>::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let sym = (&a + a.transpose()) * 0.5;
        let eig = sym.clone().symmetric_eigen().eigenvalues;
        let neg = eig.iter().filter(|&&v| v < 0.0).count();
        let m = faer::Mat::<f64>::from_fn(n, n, |i, j| sym[(i, j)]);
        let inert = inertia(m.as_ref()).unwrap();
        assert_eq!((inert.negative, inert.positive, inert.zero), (neg, n - neg, 0));
    }
}

#[test]
fn ring_ground_state_is_uniform() {
    let sys = ring(1.0, 200);
    let s = find_eigenvalues(&sys, &SolverOptions::default().energy_window(-0.5, -0.05)).unwrap();
    let c = null_vector(&sys, s.levels[0].energy, 1e-8).unwrap();
    let mean = c.iter().sum::<f64>() / c.len() as f64;
    assert!(c.iter().all(|v| (v - mean).abs() <= 1e-8));
}

#[test]
fn ring_l3_doublet_has_six_nodes() {
    let sys = ring(5.0, 100);
    // levels are ordered by angular momentum
    let s = find_eigenvalues(&sys, &SolverOptions::default()).unwrap();
    let level = &s.levels[3];
    assert_eq!(level.multiplicity, 2);
    assert!(oracles::ring_exact(10.0, 5.0, 3, 1e-12).unwrap().unwrap().energy < level.energy);
    for c in null_vectors(&sys, level.energy, 2, 1e-8).unwrap() {
        let changes = (0..c.len()).filter(|&i| c[i] * c[(i + 1) % c.len()] < 0.0).count();
        assert_eq!(changes, 6);
    }
}

#[test]
fn eigenfunction_decays_like_k0_far_away() {
    let sys = ring(1.0, 200);
    let s = find_eigenvalues(&sys, &SolverOptions::default().energy_window(-0.5, -0.05)).unwrap();
    let kappa = s.levels[0].kappa;
    let c = null_vector(&sys, s.levels[0].energy, 1e-8).unwrap();
    let at = |r: f64| eigenfunction_at(&sys, &c, kappa, Point::polar(r, 0.3)).abs();
    let values: Vec<f64> = (0..8).map(|k| at(12.0 + 4.0 * k as f64)).collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]));
    // logarithmic slope tends to −κ
    let slope = (at(80.0).ln() - at(60.0).ln()) / 20.0;
    assert_relative_eq!(slope, -kappa, max_relative = 0.05);
}

#[test]
fn solver_matches_single_point_closed_form() {
    for alpha in [0.05, 0.2, 1.0] {
        let g = DiscretizedGraph::from_points(vec![Point::new(1.0, -2.0)], alpha, 1.0).unwrap();
        let s = find_eigenvalues(&LambdaSystem::new(g).unwrap(), &SolverOptions::default()).unwrap();
        assert_relative_eq!(
            s.levels[0].energy,
            lgq::spectral::single_center_energy(alpha),
            max_relative = 1e-10
        );
    }
}

fn star_graph(beta: f64, l1: f64, l2: f64) -> DiscretizedGraph {
    discretize(&GraphSpec::two_arm_star(beta, l1, l2), 1.0, Resolution::Spacing(0.5)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn spectrum_is_euclidean_invariant(
        beta in 0.5f64..3.0, l1 in 2.0f64..5.0, rot in -PI..PI, dx in -20.0f64..20.0, dy in -20.0f64..20.0,
    ) {
        let g = star_graph(beta, l1, 3.0);
        let opts = SolverOptions::default();
        let a = find_eigenvalues(&LambdaSystem::new(g.clone()).unwrap(), &opts).unwrap().energies_with_multiplicity();
        let b = find_eigenvalues(&LambdaSystem::new(transform(&g, rot, (dx, dy))).unwrap(), &opts)
            .unwrap()
            .energies_with_multiplicity();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!(((x - y) / x).abs() <= 1e-10);
        }
    }

    #[test]
    fn scaling_maps_the_spectrum(beta in 0.5f64..3.0, s in 0.5f64..2.0) {
        let sys = LambdaSystem::new(star_graph(beta, 4.0, 3.0)).unwrap();
        let r = lgq::spectral::scaled_spectrum_check(&sys, s, &SolverOptions::default()).unwrap();
        prop_assert!(r.max_relative_mismatch <= 1e-9);
    }

    #[test]
    fn lambda_is_symmetric(beta in 0.3f64..3.0, kappa in 0.05f64..5.0) {
        let m = LambdaSystem::new(star_graph(beta, 3.0, 2.0)).unwrap().assemble(kappa).unwrap();
        for i in 0..m.nrows() {
            for j in 0..i {
                prop_assert_eq!(m[(i, j)], m[(j, i)]);
            }
        }
    }
}
