//! Laws of strategy execution and search: agreement with the dense
//! sequential-collapse oracle, metric axioms of the strategy distance,
//! data processing under the rank-1 refinement, discretization cost, and
//! greedy versus exhaustive search.

use isoqubits::entropy::{discretization_penalty, mutual_information};
use isoqubits::locc::{
    build_net_2outcome, enumerate_strategies, execute_strategy, greedy_strategy,
    joint_distribution, project_to_net, rank1_reduce, refined_joint_distribution,
    strategy_distance, GeneralPovm, GeneralStrategyTree, Rank1Povm, StrategyTree, Tree,
};
use isoqubits::oracle::{
    random_product_state, random_projective_strategy, random_qubit_state,
    sequential_collapse_distribution,
};
use isoqubits::qubit::{alpha_state, ConjugateCode, DistributionTable, ProductState, QubitOperator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

#[test]
fn execute_matches_sequential_collapse_oracle() {
    let mut rng = ChaCha12Rng::seed_from_u64(101);
    for _ in 0..100 {
        let n = 3;
        let depth = rng.random_range(1..=n);
        let state = random_product_state(n, &mut rng);
        let tree = random_projective_strategy(n, depth, &mut rng);
        let fast = execute_strategy(&tree, &state).unwrap();
        let oracle = sequential_collapse_distribution(&tree, &state);
        assert_eq!(fast.len(), oracle.len());
        for ((za, pa), (zb, pb)) in fast.entries().iter().zip(&oracle) {
            assert_eq!(za, zb);
            assert!((pa - pb).abs() < 1e-10, "path {za:?}: {pa} vs {pb}");
        }
    }
}

#[test]
fn joint_distribution_matches_hand_enumeration_on_two_qubits() {
    // 2-qubit ensemble, computational measurements on both qubits: the
    // outcome law factorizes per qubit into deterministic rows (|0>,|1>)
    // and fair-coin rows (|+>,|->). Build the joint by hand from that
    // table and compare.
    let codes = [
        [ConjugateCode::Zero, ConjugateCode::Plus],
        [ConjugateCode::Minus, ConjugateCode::One],
        [ConjugateCode::Plus, ConjugateCode::Plus],
        [ConjugateCode::One, ConjugateCode::Zero],
    ];
    let family: Vec<ProductState> = codes
        .iter()
        .map(|row| ProductState::new(row.iter().map(|&c| alpha_state(c)).collect()).unwrap())
        .collect();
    let prior = DistributionTable::uniform((0..4).collect()).unwrap();
    let m = Rank1Povm::computational();
    let tree = isoqubits::locc::nonadaptive_strategy(&[(0, m.clone()), (1, m)]);
    let joint = joint_distribution(&tree, &family, &prior).unwrap();

    let per_qubit = |c: ConjugateCode, bit: u8| -> f64 {
        match c {
            ConjugateCode::Zero => {
                if bit == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            ConjugateCode::One => {
                if bit == 1 {
                    1.0
                } else {
                    0.0
                }
            }
            _ => 0.5,
        }
    };
    let mut hand = Vec::new();
    for (u, row) in codes.iter().enumerate() {
        for z0 in 0..2u8 {
            for z1 in 0..2u8 {
                let p = 0.25 * per_qubit(row[0], z0) * per_qubit(row[1], z1);
                hand.push(((u, vec![z0, z1]), p));
            }
        }
    }
    let hand = DistributionTable::new(hand).unwrap();
    assert_eq!(joint.entries().len(), hand.entries().len());
    for (a, b) in joint.entries().iter().zip(hand.entries()) {
        assert_eq!(a.0, b.0);
        assert!((a.1 - b.1).abs() < 1e-12);
    }
    let info = mutual_information(&joint);
    let info_hand = mutual_information(&hand);
    assert!((info - info_hand).abs() < 1e-12);
}

#[test]
fn strategy_distance_satisfies_metric_axioms() {
    let mut rng = ChaCha12Rng::seed_from_u64(55);
    let nb = 3;
    // sample from a small pool so prefix collisions actually happen
    let pool: Vec<StrategyTree> = (0..12)
        .map(|_| random_projective_strategy(4, nb, &mut rng))
        .collect();
    for _ in 0..1000 {
        let a = &pool[rng.random_range(0..pool.len())];
        let b = &pool[rng.random_range(0..pool.len())];
        let c = &pool[rng.random_range(0..pool.len())];
        let dab = strategy_distance(a, b, nb).unwrap();
        let dba = strategy_distance(b, a, nb).unwrap();
        assert!((dab - dba).abs() < 1e-15, "symmetry");
        let dac = strategy_distance(a, c, nb).unwrap();
        let dcb = strategy_distance(c, b, nb).unwrap();
        assert!(dab <= dac + dcb + 1e-12, "triangle inequality");
        if std::ptr::eq(a, b) {
            assert_eq!(dab, 0.0);
        }
    }
}

/// Builds a random strategy over noisy (rank-2) POVMs: each node mixes a
/// random projective pair with identity weight.
fn random_noisy_strategy(n: usize, depth: usize, rng: &mut ChaCha12Rng) -> GeneralStrategyTree {
    fn build(avail: &mut Vec<usize>, depth: usize, rng: &mut ChaCha12Rng) -> GeneralStrategyTree {
        if depth == 0 {
            return Tree::Leaf;
        }
        let slot = rng.random_range(0..avail.len());
        let qubit = avail.remove(slot);
        let p = random_qubit_state(rng).projector();
        let lam: f64 = rng.random::<f64>() * 0.5;
        // {lam I + (1-2 lam) P, remainder}: both elements generally rank 2
        let first = QubitOperator::identity().scale(lam) + p.scale(1.0 - 2.0 * lam);
        let second = QubitOperator::identity() - first;
        let povm = GeneralPovm::new(vec![first, second]).unwrap();
        let children = (0..2).map(|_| build(avail, depth - 1, rng)).collect();
        avail.insert(slot, qubit);
        Tree::Node {
            qubit,
            measurement: povm,
            children,
        }
    }
    let mut avail: Vec<usize> = (0..n).collect();
    build(&mut avail, depth, rng)
}

#[test]
fn refinement_coarse_grains_back_and_gains_information() {
    let mut rng = ChaCha12Rng::seed_from_u64(303);
    for _ in 0..40 {
        let n = 3;
        let family: Vec<ProductState> =
            (0..4).map(|_| random_product_state(n, &mut rng)).collect();
        let prior = DistributionTable::uniform((0..4).collect()).unwrap();
        let tree = random_noisy_strategy(n, n, &mut rng);
        let original = joint_distribution(&tree, &family, &prior).unwrap();
        let game = refined_joint_distribution(&tree, &family, &prior).unwrap();
        // coarse-graining reproduces the original joint exactly
        let mut orig: std::collections::HashMap<(usize, Vec<u8>), f64> =
            std::collections::HashMap::new();
        for (label, p) in original.entries() {
            *orig.entry(label.clone()).or_insert(0.0) += *p;
        }
        for (label, p) in game.coarse.entries() {
            let reference = orig.get(label).copied().unwrap_or(0.0);
            assert!(
                (p - reference).abs() < 1e-10,
                "coarse mismatch at {label:?}: {p} vs {reference}"
            );
        }
        // data processing: the refinement can only gain information
        let info_original = mutual_information(&original);
        let info_refined = mutual_information(&game.refined);
        assert!(info_refined >= info_original - 1e-10);
    }
}

#[test]
fn refinement_preserves_distribution_through_rank1_reduce() {
    // direct check of the POVM-level contract on random states
    let mut rng = ChaCha12Rng::seed_from_u64(404);
    for _ in 0..200 {
        let p = random_qubit_state(&mut rng).projector();
        let lam: f64 = rng.random::<f64>() * 0.5;
        let first = QubitOperator::identity().scale(lam) + p.scale(1.0 - 2.0 * lam);
        let second = QubitOperator::identity() - first;
        let povm = GeneralPovm::new(vec![first, second]).unwrap();
        let refined = rank1_reduce(&povm).unwrap();
        let psi = random_qubit_state(&mut rng);
        for (source, original) in [first, second].iter().enumerate() {
            let direct = psi.expectation(original);
            let coarse: f64 = refined
                .pieces
                .iter()
                .filter(|piece| piece.source == source)
                .map(|piece| psi.expectation(&piece.operator))
                .sum();
            assert!((direct - coarse).abs() < 1e-10);
        }
    }
}

#[test]
fn discretization_penalty_bounds_information_shift() {
    // random 2-qubit games, eps = 0.05: replacing every measurement by its
    // nearest net member shifts I(Z;U) by at most the closed-form penalty
    let eps = 0.05;
    let net = build_net_2outcome(eps).unwrap();
    let q = 2;
    let n = 2;
    let penalty = discretization_penalty(q, n, eps).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(909);
    let mut worst: f64 = 0.0;
    for _ in 0..30 {
        let family: Vec<ProductState> =
            (0..4).map(|_| random_product_state(n, &mut rng)).collect();
        let prior = DistributionTable::uniform((0..4).collect()).unwrap();
        let tree = random_projective_strategy(n, n, &mut rng);
        let replaced = project_to_net(&tree, &net).unwrap();
        let info = mutual_information(&joint_distribution(&tree, &family, &prior).unwrap());
        let info_net =
            mutual_information(&joint_distribution(&replaced, &family, &prior).unwrap());
        worst = worst.max((info - info_net).abs());
    }
    assert!(
        worst <= penalty,
        "worst shift {worst} over penalty {penalty}"
    );
}

#[test]
fn greedy_never_beats_exhaustive_on_two_qubits() {
    let eps = 0.35;
    let net = build_net_2outcome(eps).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(1212);
    for _ in 0..5 {
        let family: Vec<ProductState> =
            (0..4).map(|_| random_product_state(2, &mut rng)).collect();
        let prior = DistributionTable::uniform((0..4).collect()).unwrap();
        let greedy = greedy_strategy(&family, &prior, &net).unwrap();
        let greedy_info =
            mutual_information(&joint_distribution(&greedy, &family, &prior).unwrap());
        let mut best: f64 = 0.0;
        for tree in enumerate_strategies(2, &net, 2, 1_000_000).unwrap() {
            let info = mutual_information(&joint_distribution(&tree, &family, &prior).unwrap());
            best = best.max(info);
        }
        assert!(
            greedy_info <= best + 1e-9,
            "greedy {greedy_info} beat exhaustive {best}"
        );
    }
}
