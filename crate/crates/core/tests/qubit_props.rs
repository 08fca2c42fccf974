//! Property checks of the dense linear-algebra layer against independent
//! oracles: full Kronecker contractions, brute-force moment sums, and the
//! entropy orderings.

use isoqubits::entropy::{collision_entropy, min_entropy, shannon_entropy};
use isoqubits::oracle::{dense_outcome_expectation, random_product_state, random_qubit_state};
use isoqubits::qubit::{
    alpha_state, fourth_moment_avg, fourth_moment_closed_form, gram_matrix, holevo_chi,
    product_expectation, reduced_density, ConjugateCode, DistributionTable, OutcomeRecord,
    ProductState,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn random_outcome_record(n: usize, max_ops: usize, rng: &mut ChaCha12Rng) -> OutcomeRecord {
    let count = rng.random_range(0..=max_ops.min(n));
    let mut qubits: Vec<usize> = (0..n).collect();
    let mut ops = Vec::new();
    for _ in 0..count {
        let slot = rng.random_range(0..qubits.len());
        let q = qubits.remove(slot);
        // a random rank-1 operator of norm <= 1
        let weight: f64 = rng.random();
        let proj = random_qubit_state(rng).projector();
        ops.push((q, proj.scale(weight)));
    }
    OutcomeRecord::new(ops).unwrap()
}

#[test]
fn product_expectation_matches_dense_oracle() {
    let mut rng = ChaCha12Rng::seed_from_u64(2024);
    for trial in 0..1000 {
        let n = rng.random_range(1..=4);
        let state = random_product_state(n, &mut rng);
        let outcome = random_outcome_record(n, n, &mut rng);
        let fast = product_expectation(&state, &outcome).unwrap();
        let dense = dense_outcome_expectation(&state, &outcome);
        assert!(
            (fast - dense).abs() < 1e-10,
            "trial {trial}: fast {fast} vs dense {dense}"
        );
    }
}

#[test]
fn gram_matrix_is_psd_with_unit_diagonal() {
    let mut rng = ChaCha12Rng::seed_from_u64(7);
    for _ in 0..50 {
        let n = rng.random_range(1..=5);
        let states: Vec<ProductState> = (0..4).map(|_| random_product_state(n, &mut rng)).collect();
        let g = gram_matrix(&states).unwrap();
        assert!(g.min_eigenvalue() >= -1e-10);
        for i in 0..g.dim() {
            assert!((g.matrix()[(i, i)].re - 1.0).abs() < 1e-12);
            assert!(g.matrix()[(i, i)].im.abs() < 1e-12);
        }
    }
}

#[test]
fn reduced_density_is_hermitian_psd_trace_one() {
    let mut rng = ChaCha12Rng::seed_from_u64(8);
    for _ in 0..50 {
        let n = rng.random_range(2..=5);
        let count = rng.random_range(1..=6);
        let states: Vec<ProductState> = (0..count)
            .map(|_| random_product_state(n, &mut rng))
            .collect();
        let raw: Vec<f64> = (0..count).map(|_| rng.random::<f64>() + 1e-3).collect();
        let total: f64 = raw.iter().sum();
        let weights = DistributionTable::new(
            raw.iter().enumerate().map(|(i, w)| (i, w / total)).collect(),
        )
        .unwrap();
        let take = rng.random_range(1..=n);
        let subset: Vec<usize> = (0..take).collect();
        let rho = reduced_density(&states, &weights, &subset).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-10);
        assert!(rho.is_psd());
    }
}

#[test]
fn fourth_moment_brute_force_equals_closed_form_and_caps() {
    let mut rng = ChaCha12Rng::seed_from_u64(9);
    for _ in 0..10_000 {
        let psi = random_qubit_state(&mut rng);
        let brute = fourth_moment_avg(&psi);
        let closed = fourth_moment_closed_form(&psi);
        assert!((brute - closed).abs() < 1e-12);
        assert!(brute <= 0.375 + 1e-12);
    }
}

#[test]
fn holevo_chi_is_bounded_by_subset_size() {
    let mut rng = ChaCha12Rng::seed_from_u64(10);
    for _ in 0..30 {
        let n = rng.random_range(1..=4);
        let count = 1usize << rng.random_range(1..=3);
        let states: Vec<ProductState> = (0..count)
            .map(|_| random_product_state(n, &mut rng))
            .collect();
        let prior = DistributionTable::uniform((0..count).collect()).unwrap();
        let take = rng.random_range(1..=n);
        let subset: Vec<usize> = (0..take).collect();
        let chi = holevo_chi(&states, &prior, &subset).unwrap();
        assert!(chi >= -1e-9);
        assert!(chi <= take as f64 + 1e-9);
    }
}

#[test]
fn alpha_products_give_expected_overlaps() {
    // mean of |<alpha_c|alpha_c'>|^2 over independent uniform codes is 1/2
    let mut acc = 0.0;
    for a in ConjugateCode::ALL {
        for b in ConjugateCode::ALL {
            acc += alpha_state(a).inner(&alpha_state(b)).norm_sqr();
        }
    }
    assert!((acc / 16.0 - 0.5).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn entropy_ordering_holds(raw in proptest::collection::vec(1e-6..1.0f64, 1..20)) {
        let total: f64 = raw.iter().sum();
        let dist = DistributionTable::new(
            raw.iter().enumerate().map(|(i, w)| (i, w / total)).collect(),
        ).unwrap();
        let h = shannon_entropy(&dist);
        let h2 = collision_entropy(&dist);
        let hmin = min_entropy(&dist);
        prop_assert!(hmin <= h2 + 1e-9);
        prop_assert!(h2 <= h + 1e-9);
    }

    #[test]
    fn mutual_information_respects_marginal_bounds(
        raw in proptest::collection::vec(1e-6..1.0f64, 1..25),
    ) {
        let total: f64 = raw.iter().sum();
        let entries: Vec<((usize, usize), f64)> = raw
            .iter()
            .enumerate()
            .map(|(i, w)| (((i % 5), (i / 5)), w / total))
            .collect();
        let joint = DistributionTable::aggregated(entries.clone()).unwrap();
        let info = isoqubits::entropy::mutual_information(&joint);
        let a = DistributionTable::aggregated(
            entries.iter().map(|((x, _), p)| (*x, *p)).collect(),
        )
        .unwrap();
        let b = DistributionTable::aggregated(
            entries.iter().map(|((_, y), p)| (*y, *p)).collect(),
        )
        .unwrap();
        prop_assert!(info >= -1e-9);
        prop_assert!(info <= shannon_entropy(&a).min(shannon_entropy(&b)) + 1e-9);
    }

    #[test]
    fn distribution_round_trips_through_aggregation(raw in proptest::collection::vec(1e-6..1.0f64, 1..12)) {
        let total: f64 = raw.iter().sum();
        let entries: Vec<(usize, f64)> = raw.iter().enumerate().map(|(i, w)| (i, w / total)).collect();
        let direct = DistributionTable::new(entries.clone()).unwrap();
        let aggregated = DistributionTable::aggregated(entries).unwrap();
        prop_assert_eq!(direct.entries(), aggregated.entries());
    }
}
