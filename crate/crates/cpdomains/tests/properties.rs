//! Property-based invariants over randomized inputs. Each case derives
//! its data from a proptest-chosen seed through the crate's own seeded
//! generators, so shrinking stays meaningful.

use cpdomains::cpmaps::{CPMap, Normalization};
use cpdomains::domains::{mult_domain_def, ternary_domain_def};
use cpdomains::numerics::{
    C64, Mat, OperatorSubspace, Tolerances, hermitian_eig, subspace_compare,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn random_mat(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat {
    let mut m = Mat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
    }
    m
}

fn random_map(seed: u64, n: usize, h: usize) -> CPMap {
    let rank = 1 + (seed as usize) % (n * h);
    let norm = match seed % 3 {
        0 => Normalization::Raw,
        1 => Normalization::Contractive,
        _ => Normalization::UnitalIfPossible,
    };
    CPMap::random(n, h, rank, norm, seed, &tol()).unwrap().map
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The span of a generating family is invariant under invertible
    /// recombination of the generators.
    #[test]
    fn span_invariant_under_recombination(seed in any::<u64>(), n in 2usize..4) {
        let t = tol();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<Mat> = (0..3).map(|_| random_mat(&mut rng, n, n)).collect();
        let s1 = OperatorSubspace::span(n, n, &gens, &t).unwrap();

        // Mix: g0+g1, 2*g1, g2 - g0 (an invertible change of generators).
        let mixed = vec![
            &gens[0] + &gens[1],
            gens[1].scale(C64::new(2.0, 0.0)),
            &gens[2] - &gens[0],
        ];
        let s2 = OperatorSubspace::span(n, n, &mixed, &t).unwrap();
        let cmp = subspace_compare(&s1, &s2, &t).unwrap();
        prop_assert!(cmp.equal, "angle {}", cmp.max_angle_sine);
    }

    /// Choi -> action -> Choi is the identity.
    #[test]
    fn choi_action_round_trip(seed in any::<u64>(), n in 1usize..4, h in 1usize..4) {
        let t = tol();
        let phi = random_map(seed, n, h);
        let images: Vec<Mat> = (0..n * n).map(|ij| phi.unit_image(ij / n, ij % n)).collect();
        let back = CPMap::from_action(n, h, &images, &t).unwrap();
        prop_assert!((phi.choi() - back.choi()).frob_norm() < 1e-12);
    }

    /// The eigendecomposition reconstructs the matrix and its columns
    /// are orthonormal, at machine precision.
    #[test]
    fn hermitian_eig_reconstructs(seed in any::<u64>(), n in 1usize..8) {
        let t = tol();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_mat(&mut rng, n, n);
        let herm = &a + &a.adjoint();
        let (vals, vecs) = hermitian_eig(&herm, &t).unwrap();
        let mut diag = Mat::zeros(n, n);
        for (i, &v) in vals.iter().enumerate() {
            diag[(i, i)] = C64::new(v, 0.0);
        }
        let rec = &(&vecs * &diag) * &vecs.adjoint();
        let scale = herm.frob_norm().max(1.0);
        prop_assert!((&herm - &rec).frob_norm() < 1e-13 * scale);
        prop_assert!((&(&vecs.adjoint() * &vecs) - &Mat::identity(n)).frob_norm() < 1e-13);
        for w in vals.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }

    /// The minimal dilation's Kraus family reproduces the map.
    #[test]
    fn kraus_family_reconstructs_the_map(seed in any::<u64>(), n in 1usize..4, h in 1usize..4) {
        let t = tol();
        let phi = random_map(seed, n, h);
        let d = phi.minimal_stinespring(&t).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xABCD);
        let a = random_mat(&mut rng, n, n);
        let mut sum = Mat::zeros(h, h);
        for k in &d.kraus {
            sum = &sum + &(&(k * &a) * &k.adjoint());
        }
        let direct = phi.apply(&a).unwrap();
        prop_assert!((&sum - &direct).frob_norm() < 1e-10 * (1.0 + direct.frob_norm()));
    }

    /// The ternary domain always sits inside the multiplicative domain.
    #[test]
    fn ternary_inside_multiplicative(seed in any::<u64>(), n in 1usize..4, h in 1usize..4) {
        let t = tol();
        let phi = random_map(seed, n, h);
        let m = mult_domain_def(&phi, &t).unwrap().subspace;
        let td = ternary_domain_def(&phi, &t).unwrap().subspace;
        for b in td.basis() {
            prop_assert!(m.contains_element(b, &t));
        }
    }
}
