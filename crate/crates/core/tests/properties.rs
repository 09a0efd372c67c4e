use proptest::prelude::*;

use qiham_core::evolution::{init_hamiltonian, partial_trace_a, step, FeasibilityMask};
use qiham_core::measurement::{qtv, qtv_spectral};
use qiham_core::numkernel::{
    eig_hermitian, gaussian_state, haar_unitary, is_irreducible, spectral_radius, two_norm,
};
use qiham_core::qig::{best_response, nash_check, Allocation, Objective};
use qiham_core::quantum_state::{
    coherence, density_matrix, entanglement_entropy, evaluate_state, purity, torus_coordinates,
    torus_minor_radius, DensityMatrix, SuperpositionState,
};
use qiham_core::{Complex64, ComplexMatrix, RandomStream};

fn random_hermitian(n: usize, s: &mut RandomStream) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(n, n, |_, _| s.complex_normal()).unwrap();
    a.linear_combination(0.5, &a.adjoint(), 0.5).unwrap()
}

fn random_weights(k: usize, s: &mut RandomStream) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| 0.05 + s.uniform()).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

fn random_density(n: usize, rank: usize, s: &mut RandomStream) -> DensityMatrix {
    let w = random_weights(rank, s);
    let mut rho = ComplexMatrix::zeros(n, n).unwrap();
    for wk in w {
        let v = gaussian_state(n, s).unwrap();
        rho = rho.linear_combination(1.0, &v.outer(&v), wk).unwrap();
    }
    DensityMatrix::new(rho).unwrap()
}

// Warshall transitive closure of the adjacency relation.
fn closure_irreducible(bits: &[bool], n: usize) -> bool {
    let mut reach = bits.to_vec();
    for i in 0..n {
        reach[i * n + i] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i * n + k] && reach[k * n + j] {
                    reach[i * n + j] = true;
                }
            }
        }
    }
    n == 1 || reach.iter().all(|&r| r)
}

#[test]
fn irreducibility_matches_closure_exhaustively() {
    for n in 1..=3usize {
        for pattern in 0u32..(1 << (n * n)) {
            let bits: Vec<bool> = (0..n * n).map(|k| pattern >> k & 1 == 1).collect();
            let m = ComplexMatrix::from_fn(n, n, |i, j| {
                Complex64::new(if bits[i * n + j] { 1.0 } else { 0.0 }, 0.0)
            })
            .unwrap();
            assert_eq!(
                is_irreducible(&m).unwrap(),
                closure_irreducible(&bits, n),
                "n = {n}, pattern = {pattern:#b}"
            );
        }
    }
}

#[test]
fn haar_is_unitary_for_small_dims() {
    let mut s = RandomStream::new(2024, 0);
    for dim in 1..=32 {
        assert!(
            haar_unitary(dim, &mut s).unwrap().is_unitary(1e-10),
            "dim {dim}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn hermitian_eigen_reconstructs(seed in any::<u64>(), n in 1usize..=16) {
        let h = random_hermitian(n, &mut RandomStream::new(seed, 0));
        let e = eig_hermitian(&h).unwrap();
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(e.reconstruct().max_abs_diff(&h).unwrap() <= 1e-9);
    }

    #[test]
    fn two_norm_dominates_spectral_radius(seed in any::<u64>(), n in 1usize..=12) {
        let mut s = RandomStream::new(seed, 1);
        let m = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(s.uniform(), 0.0)).unwrap();
        prop_assert!(two_norm(&m).unwrap() + 1e-10 >= spectral_radius(&m).unwrap());

        let psd = m.adjoint().matmul(&m).unwrap();
        let gap = two_norm(&psd).unwrap() - spectral_radius(&psd).unwrap();
        prop_assert!(gap.abs() <= 1e-10 * two_norm(&psd).unwrap().max(1.0));
    }

    #[test]
    fn superposition_stays_normalized(seed in any::<u64>(), k in 1usize..=7, t in -1e3f64..1e3) {
        let mut s = RandomStream::new(seed, 2);
        let n = k + s.index(3);
        let u = haar_unitary(n, &mut s).unwrap();
        let basis = ComplexMatrix::from_fn(n, k, |i, j| u[(i, j)]).unwrap();
        let energies = (0..k).map(|_| 10.0 * s.uniform()).collect();
        let state = SuperpositionState::new(random_weights(k, &mut s), energies, basis).unwrap();
        prop_assert!((evaluate_state(&state, t).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pure_iff_zero_entropy(
        diag in proptest::collection::vec(0.0f64..1.0, 1..6),
        spike in 0usize..6,
        pure in any::<bool>(),
    ) {
        let n = diag.len();
        let values: Vec<f64> = if pure {
            (0..n).map(|i| if i == spike % n { 1.0 } else { 0.0 }).collect()
        } else {
            let total: f64 = diag.iter().sum::<f64>() + 1e-3;
            diag.iter().map(|d| (d + 1e-3 / n as f64) / total).collect()
        };
        let rho = DensityMatrix::new(ComplexMatrix::diag_real(&values).unwrap()).unwrap();
        let s = entanglement_entropy(&rho);
        let p = purity(&rho);
        prop_assert_eq!(s <= 1e-9, p >= 1.0 - 1e-9);
        prop_assert!(p <= 1.0 + 1e-12 && p >= 1.0 / n as f64 - 1e-12);
        prop_assert!(s >= 0.0 && s <= (n as f64).ln() + 1e-12);
    }

    #[test]
    fn two_state_coherence_is_time_invariant(l1 in 0.01f64..0.99, e1 in 0.0f64..10.0, t in 0.0f64..1e3) {
        let state = SuperpositionState::in_standard_basis(vec![1.0 - l1, l1], vec![0.0, e1], 2).unwrap();
        let c = coherence(density_matrix(&state, t).matrix()).unwrap();
        prop_assert!((c - 2.0 * ((1.0 - l1) * l1).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn torus_points_satisfy_implicit_equation(
        l0 in 0.0f64..=1.0, e0 in -5.0f64..5.0, e1 in -5.0f64..5.0, t in 0.0f64..100.0,
    ) {
        let p = torus_coordinates(l0, 1.0 - l0, e0, e1, t).unwrap();
        let r = torus_minor_radius(l0, 1.0 - l0);
        prop_assert!((p.implicit(1.0) - r * r).abs() < 1e-10);
    }

    #[test]
    fn commensurate_energies_are_periodic(seed in any::<u64>(), k in 1usize..=6, omega in 0.1f64..3.0, t in 0.0f64..20.0) {
        let mut s = RandomStream::new(seed, 3);
        let energies = (0..k).map(|j| j as f64 * omega).collect();
        let state = SuperpositionState::in_standard_basis(random_weights(k, &mut s), energies, k).unwrap();
        let period = 2.0 * std::f64::consts::PI / omega;
        let a = evaluate_state(&state, t);
        let b = evaluate_state(&state, t + period);
        let diff = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(diff < 1e-9);
    }

    #[test]
    fn qtv_bounded_and_spectral(seed in any::<u64>(), n in 1usize..=8) {
        let mut s = RandomStream::new(seed, 4);
        let h = random_hermitian(n, &mut s);
        let psi = gaussian_state(n, &mut s).unwrap();
        let q = qtv(&psi, &h).unwrap();
        let e = eig_hermitian(&h).unwrap();
        let max_abs = e.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
        prop_assert!(q.re <= max_abs + 1e-9);
        prop_assert!(q.im.abs() < 1e-12);

        // In the eigenbasis the expectation is a weighted sum of eigenvalues.
        let projected: Vec<f64> = (0..n)
            .map(|k| e.vectors.column(k).inner(&psi).unwrap().norm_sqr())
            .collect();
        let signed: f64 = projected.iter().zip(&e.values).map(|(w, v)| w * v).sum();
        prop_assert!((q.re - signed).abs() < 1e-9);
        if e.values.iter().all(|&v| v >= 0.0) {
            prop_assert!((q.re - qtv_spectral(&projected, &e.values).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn partial_trace_matches_brute_force(seed in any::<u64>(), n in 1usize..=4, d in 1usize..=4) {
        let mut s = RandomStream::new(seed, 5);
        let psi = gaussian_state(n * d, &mut s).unwrap();
        let rho = partial_trace_a(&psi, n, d).unwrap();
        let full = psi.outer(&psi);
        for i in 0..n {
            for k in 0..n {
                let brute: Complex64 = (0..d).map(|j| full[(i * d + j, k * d + j)]).sum();
                prop_assert!((rho.matrix()[(i, k)] - brute).norm() <= 1e-12);
            }
        }
        prop_assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn masked_step_laws(
        seed in any::<u64>(),
        n in 1usize..=6,
        eta in 0.0f64..1.0,
        decay in 0.0f64..=1.0,
        steps in 1usize..20,
    ) {
        let mut s = RandomStream::new(seed, 6);
        let mut rows: Vec<Vec<u8>> = (0..n)
            .map(|_| (0..n).map(|_| u8::from(s.uniform() < 0.5)).collect())
            .collect();
        rows[0][0] = 1;
        let mask = FeasibilityMask::from_rows(&rows).unwrap();
        let mut h = init_hamiltonian(&mask).unwrap();
        for _ in 0..steps {
            let rho = random_density(n, 1 + s.index(n), &mut s);
            let expected = (1.0 - decay) * h.trace()
                + eta * (0..n).filter(|&i| mask.allows(i, i)).map(|i| rho.matrix()[(i, i)].re).sum::<f64>();
            h = step(&h, &rho, eta, decay).unwrap();
            prop_assert!((h.trace() - expected).abs() < 1e-12);
            for i in 0..n {
                for j in 0..n {
                    let v = h.matrix()[(i, j)];
                    prop_assert!(v.re >= 0.0 && v.im == 0.0);
                    if !mask.allows(i, j) {
                        prop_assert_eq!(v.re, 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn allocations_stay_on_simplex(seed in any::<u64>(), k in 1usize..=6, g in 0.0f64..=1.0) {
        let mut s = RandomStream::new(seed, 7);
        let mut w = random_weights(k, &mut s);
        if s.uniform() < 0.3 {
            w = (0..k).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect();
        }
        let a = Allocation::new(w).unwrap();
        let (b, _) = a.with_component(s.index(k), g).unwrap();
        prop_assert!(b.values().iter().all(|&v| v >= 0.0));
        prop_assert!((b.values().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn best_response_and_nash_agree(seed in any::<u64>(), k in 1usize..=4, grid in 2usize..=21) {
        let mut s = RandomStream::new(seed, 8);
        // Agent l scores a random smooth function of the whole allocation.
        let coeffs: Vec<Vec<f64>> = (0..k)
            .map(|_| (0..k).map(|_| s.uniform() * 2.0 - 1.0).collect())
            .collect();
        let make = |c: Vec<f64>| {
            move |a: &Allocation| -> f64 {
                a.values().iter().zip(&c).map(|(v, ci)| ci * v - 0.5 * v * v).sum()
            }
        };
        let alloc = Allocation::new(random_weights(k, &mut s)).unwrap();
        let eps = 1e-3;

        for (l, c) in coeffs.iter().enumerate() {
            let mut f = make(c.clone());
            let before = f(&alloc);
            let r = best_response(l, &alloc, &mut f, grid).unwrap();
            prop_assert!(r.value >= before - 1e-12);
            prop_assert!((r.allocation.values().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }

        let mut objectives: Vec<Objective> =
            coeffs.iter().map(|c| Box::new(make(c.clone())) as Objective).collect();
        if nash_check(&alloc, &mut objectives, eps, grid).unwrap() {
            for (l, c) in coeffs.iter().enumerate() {
                let mut f = make(c.clone());
                let before = f(&alloc);
                let r = best_response(l, &alloc, &mut f, grid).unwrap();
                prop_assert!(r.value - before <= eps);
            }
        }
    }
}
