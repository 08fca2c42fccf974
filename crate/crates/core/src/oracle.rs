//! Independent reference implementations used to cross-check the fast
//! computation paths, plus randomized instance generators.
//!
//! Everything here deliberately avoids the per-qubit product shortcuts of
//! the main modules: expectations go through dense Kronecker products,
//! strategy execution goes through explicit post-measurement collapse of a
//! full state vector, and decoding re-derives distances from scratch. The
//! property suites compare the two routes.

use crate::codes::{hamming_distance, RandomCode};
use crate::hiding::HidingEnsemble;
use crate::locc::{Measurement, Rank1Povm, StrategyTree, Tree};
use crate::qubit::{
    alpha_state, eig2, ConjugateCode, OutcomeRecord, ProductState, QubitOperator,
    SingleQubitState,
};
use nalgebra::{DMatrix, DVector, Vector2};
use num_complex::Complex64;
use rand::Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Kronecker product of a list of 2x2 operators (first factor = qubit 0,
/// most significant).
fn kron_all(ops: &[QubitOperator]) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for op in ops {
        let dim = m.nrows();
        let mut next = DMatrix::from_element(dim * 2, dim * 2, c(0.0, 0.0));
        for i in 0..dim {
            for j in 0..dim {
                for a in 0..2 {
                    for b in 0..2 {
                        next[(2 * i + a, 2 * j + b)] = m[(i, j)] * op[(a, b)];
                    }
                }
            }
        }
        m = next;
    }
    m
}

/// <Psi| (tensor of per-qubit operators, identity elsewhere) |Psi> computed
/// with a full 2^n contraction.
pub fn dense_outcome_expectation(state: &ProductState, outcome: &OutcomeRecord) -> f64 {
    let n = state.len();
    let mut ops = vec![QubitOperator::identity(); n];
    for (q, m) in outcome.ops() {
        ops[*q] = *m;
    }
    let full = kron_all(&ops);
    let psi = state.dense().expect("dense cap respected by caller");
    (psi.adjoint() * full * psi)[(0, 0)].re
}

/// Executes a strategy by explicit sequential collapse of the dense state
/// vector: at each node the measured qubit's Kraus operator sqrt(M) is
/// applied and the state renormalized. Returns (outcome string, probability)
/// for every leaf path.
pub fn sequential_collapse_distribution(
    tree: &StrategyTree,
    state: &ProductState,
) -> Vec<(Vec<u8>, f64)> {
    let n = state.len();
    let psi = state.dense().expect("dense cap respected by caller");
    let mut out = Vec::new();
    collapse_walk(tree, n, &psi, 1.0, &mut Vec::new(), &mut out);
    out
}

fn collapse_walk(
    tree: &StrategyTree,
    n: usize,
    psi: &DVector<Complex64>,
    prob: f64,
    path: &mut Vec<u8>,
    out: &mut Vec<(Vec<u8>, f64)>,
) {
    match tree {
        Tree::Leaf => out.push((path.clone(), prob)),
        Tree::Node {
            qubit,
            measurement,
            children,
        } => {
            for (i, (m, child)) in measurement.elements().iter().zip(children).enumerate() {
                // Kraus operator sqrt(M) on the measured qubit.
                let ((hi, vh), (lo, vl)) = eig2(m);
                let sqrt_m = (vh * vh.adjoint()).scale(hi.max(0.0).sqrt())
                    + (vl * vl.adjoint()).scale(lo.max(0.0).sqrt());
                let mut ops = vec![QubitOperator::identity(); n];
                ops[*qubit] = sqrt_m;
                let full = kron_all(&ops);
                let collapsed = &full * psi;
                let p = collapsed.norm_squared();
                path.push(i as u8);
                if p > 1e-300 {
                    let renorm = collapsed.scale(1.0 / p.sqrt());
                    collapse_walk(child, n, &renorm, prob * p, path, out);
                } else {
                    // dead branch: keep emitting labels with zero mass
                    collapse_walk(child, n, psi, 0.0, path, out);
                }
                path.pop();
            }
        }
    }
}

/// Optimal two-state discrimination success probability for equiprobable
/// pure states: (1 + sqrt(1 - |<a|b>|^2)) / 2.
pub fn helstrom_two_pure(a: &ProductState, b: &ProductState) -> f64 {
    let overlap = a.inner(b).expect("equal lengths").norm_sqr();
    0.5 * (1.0 + (1.0 - overlap).sqrt())
}

/// H(Z|U) of the all-computational-basis strategy on a hiding ensemble,
/// from the per-qubit table: cells coding |0> or |1> give a deterministic
/// outcome, cells coding |+> or |-> give a uniform bit. So H(Z|U=u) is the
/// count of Hadamard-basis cells in row u.
pub fn computational_conditional_entropy(ensemble: &HidingEnsemble) -> f64 {
    let rows = 1usize << ensemble.nb();
    let mut total = 0usize;
    for u in 0..rows {
        total += ensemble
            .row(u as u64)
            .expect("row index in range")
            .iter()
            .filter(|code| matches!(code, ConjugateCode::Plus | ConjugateCode::Minus))
            .count();
    }
    total as f64 / rows as f64
}

/// Independent re-implementation of bounded-distance decoding: scans
/// messages in ascending order and returns the first whose codeword lies
/// within floor(r) of z.
pub fn exhaustive_bounded_decode(code: &RandomCode, z: &[u8], r: f64) -> Option<u64> {
    if r < 0.0 {
        return None;
    }
    let radius = r.floor() as usize;
    (0..code.rows() as u64).find(|&msg| {
        let cw = code.codeword(msg).expect("message in range");
        hamming_distance(cw, z) <= radius
    })
}

/// Exact per-qubit information of the computational-basis leak measurement
/// about a uniform conjugate-code cell, by four-case enumeration:
/// I = H(Z) - H(Z|code) = 1 - 1/2.
pub fn per_qubit_leak_information() -> f64 {
    // outcome distribution per code: |0> -> (1,0); |1> -> (0,1);
    // |+>,|-> -> (1/2,1/2)
    let cases: [[f64; 2]; 4] = [[1.0, 0.0], [0.5, 0.5], [0.5, 0.5], [0.0, 1.0]];
    let mut pz = [0.0f64; 2];
    let mut h_cond = 0.0;
    for dist in cases {
        for (z, p) in dist.iter().enumerate() {
            pz[z] += 0.25 * p;
            h_cond += 0.25 * crate::entropy::eta(*p);
        }
    }
    let h_z: f64 = pz.iter().copied().map(crate::entropy::eta).sum();
    h_z - h_cond
}

// ---------------------------------------------------------------------------
// Randomized instance generators
// ---------------------------------------------------------------------------

fn gaussian(rng: &mut impl Rng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Haar-random single-qubit pure state.
pub fn random_qubit_state(rng: &mut impl Rng) -> SingleQubitState {
    loop {
        let v = Vector2::new(
            c(gaussian(rng), gaussian(rng)),
            c(gaussian(rng), gaussian(rng)),
        );
        let norm = v.norm();
        if norm > 1e-6 {
            let v = v.scale(1.0 / norm);
            return SingleQubitState::new(v[0], v[1]).expect("normalized");
        }
    }
}

/// Product of independent Haar-random qubits.
pub fn random_product_state(n: usize, rng: &mut impl Rng) -> ProductState {
    ProductState::new((0..n).map(|_| random_qubit_state(rng)).collect())
        .expect("n >= 1")
}

/// Product state with each qubit drawn uniformly from the four
/// conjugate-coding states.
pub fn random_alpha_product(n: usize, rng: &mut impl Rng) -> ProductState {
    ProductState::new(
        (0..n)
            .map(|_| alpha_state(ConjugateCode::from_index(rng.random_range(0..4))))
            .collect(),
    )
    .expect("n >= 1")
}

/// Haar-random 2-outcome projective measurement {P, I-P}.
pub fn random_projective_povm(rng: &mut impl Rng) -> Rank1Povm {
    let psi = random_qubit_state(rng);
    let p = psi.projector();
    Rank1Povm::new(vec![p, QubitOperator::identity() - p]).expect("projective pair is complete")
}

/// Random q-outcome rank-1 POVM: q random rank-1 operators conjugated by
/// the inverse square root of their sum.
pub fn random_rank1_povm(q: usize, rng: &mut impl Rng) -> Rank1Povm {
    loop {
        let vs: Vec<Vector2<Complex64>> = (0..q)
            .map(|_| {
                Vector2::new(
                    c(gaussian(rng), gaussian(rng)),
                    c(gaussian(rng), gaussian(rng)),
                )
            })
            .collect();
        let mut total = QubitOperator::zeros();
        for v in &vs {
            total += v * v.adjoint();
        }
        let ((t1, u1), (t2, u2)) = eig2(&total);
        if t2 < 1e-3 {
            continue;
        }
        let inv_sqrt = (u1 * u1.adjoint()).scale(1.0 / t1.sqrt())
            + (u2 * u2.adjoint()).scale(1.0 / t2.sqrt());
        let outcomes: Vec<QubitOperator> = vs
            .iter()
            .map(|v| {
                let m = inv_sqrt * (v * v.adjoint()) * inv_sqrt;
                (m + m.adjoint()).scale(0.5)
            })
            .collect();
        if let Ok(povm) = Rank1Povm::new(outcomes) {
            return povm;
        }
    }
}

/// Random adaptive strategy of the given depth: every node measures a fresh
/// uniformly chosen qubit in a Haar-random projective basis.
pub fn random_projective_strategy(
    n: usize,
    depth: usize,
    rng: &mut impl Rng,
) -> StrategyTree {
    assert!(depth <= n, "one-pass strategies cannot exceed n steps");
    fn build(avail: &mut Vec<usize>, depth: usize, rng: &mut impl Rng) -> StrategyTree {
        if depth == 0 {
            return Tree::Leaf;
        }
        let slot = rng.random_range(0..avail.len());
        let qubit = avail.remove(slot);
        let povm = random_projective_povm(rng);
        let children = (0..povm.outcome_count())
            .map(|_| build(avail, depth - 1, rng))
            .collect();
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
