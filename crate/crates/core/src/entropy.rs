//! Information measures and the closed-form bounds applied to them.
//!
//! All entropies are in bits (base-2 logarithms). Probabilities below 1e-15
//! contribute zero to entropy sums, matching the continuous extension of
//! eta(x) = -x lg x at zero.

use crate::qubit::{
    eig2_values, hermiticity_defect2, DistributionTable, QubitOperator, EIGEN_CUTOFF,
};
use std::collections::HashMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::hash::Hash;
use thiserror::Error;

/// Probabilities below this contribute zero to entropy sums.
const ENTROPY_FLOOR: f64 = 1e-15;

#[derive(Debug, Error)]
pub enum EntropyError {
    #[error("binary entropy derivative undefined at p = {0}")]
    DomainError(f64),
    #[error("epsilon {eps} exceeds the admissible 1/(q n e) = {limit}")]
    EpsilonTooLarge { eps: f64, limit: f64 },
    #[error("precondition violated: 2 sqrt(eps) + 2^-nb = {0} > 1/e")]
    PreconditionViolated(f64),
    #[error("operator is not a rank-1 state (eigenvalues {0:.3e}, {1:.3e})")]
    NotRank1(f64, f64),
}

/// -x lg x with eta(0) = 0.
pub fn eta(x: f64) -> f64 {
    debug_assert!((-1e-12..=1.0 + 1e-12).contains(&x));
    if x < ENTROPY_FLOOR {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Shannon entropy in bits.
pub fn shannon_entropy<L>(dist: &DistributionTable<L>) -> f64 {
    dist.probabilities().map(eta).sum()
}

/// Renyi collision entropy -lg sum p^2 in bits.
pub fn collision_entropy<L>(dist: &DistributionTable<L>) -> f64 {
    -dist.probabilities().map(|p| p * p).sum::<f64>().log2()
}

/// Min-entropy -lg max p in bits.
pub fn min_entropy<L>(dist: &DistributionTable<L>) -> f64 {
    -dist.probabilities().fold(0.0_f64, f64::max).log2()
}

/// Mutual information I(A;B) = H(A) + H(B) - H(A,B) of a joint table, in
/// bits. Labels that repeat are merged when forming the marginals.
pub fn mutual_information<A, B>(joint: &DistributionTable<(A, B)>) -> f64
where
    A: Eq + Hash + Clone,
    B: Eq + Hash + Clone,
{
    let mut pa: HashMap<A, f64> = HashMap::new();
    let mut pb: HashMap<B, f64> = HashMap::new();
    let mut h_joint = 0.0;
    for ((a, b), p) in joint.entries() {
        *pa.entry(a.clone()).or_insert(0.0) += *p;
        *pb.entry(b.clone()).or_insert(0.0) += *p;
        h_joint += eta(*p);
    }
    let h_a: f64 = pa.values().copied().map(eta).sum();
    let h_b: f64 = pb.values().copied().map(eta).sum();
    h_a + h_b - h_joint
}

/// Shannon/collision/min entropy of one distribution, with the smoothing
/// parameter the caller associates with it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub shannon: f64,
    pub collision: f64,
    pub min_entropy: f64,
    /// Smoothing parameter epsilon carried alongside the entropies.
    pub smoothing_eps: f64,
}

impl EntropyReport {
    pub fn from_distribution<L>(dist: &DistributionTable<L>, smoothing_eps: f64) -> Self {
        EntropyReport {
            shannon: shannon_entropy(dist),
            collision: collision_entropy(dist),
            min_entropy: min_entropy(dist),
            smoothing_eps,
        }
    }

    /// Conditional entropies of X given Z from a joint table over (X, Z):
    /// H(X|Z), the collision entropy -lg E_z[sum_x p(x|z)^2], and the
    /// min-entropy -lg E_z[max_x p(x|z)] (guessing-probability form). These
    /// satisfy min <= collision <= shannon.
    pub fn conditional<X, Z>(joint: &DistributionTable<(X, Z)>, smoothing_eps: f64) -> Self
    where
        X: Eq + Hash + Clone,
        Z: Eq + Hash + Clone,
    {
        let mut by_z: HashMap<Z, Vec<f64>> = HashMap::new();
        for ((_, z), p) in joint.entries() {
            by_z.entry(z.clone()).or_default().push(*p);
        }
        let mut h_cond = 0.0;
        let mut collision_prob = 0.0;
        let mut guess_prob = 0.0;
        for probs in by_z.values() {
            let pz: f64 = probs.iter().sum();
            if pz < ENTROPY_FLOOR {
                continue;
            }
            let mut h_z = 0.0;
            let mut col = 0.0;
            let mut max_p: f64 = 0.0;
            for &p in probs {
                let cond = p / pz;
                h_z += eta(cond);
                col += cond * cond;
                max_p = max_p.max(cond);
            }
            h_cond += pz * h_z;
            collision_prob += pz * col;
            guess_prob += pz * max_p;
        }
        EntropyReport {
            shannon: h_cond,
            collision: -collision_prob.log2(),
            min_entropy: -guess_prob.log2(),
            smoothing_eps,
        }
    }
}

/// The Markov-inequality lower bound on smoothed min-entropy: for any
/// theta >= 0, taking epsilon = 2^-theta gives H_inf^eps >= H_2 - theta.
/// Returns (epsilon, bound).
pub fn smoothed_minentropy_lower_bound(h2: f64, theta: f64) -> (f64, f64) {
    assert!(theta >= 0.0, "smoothing exponent must be nonnegative");
    (2f64.powf(-theta), h2 - theta)
}

/// Binary entropy h(p) = -p lg p - (1-p) lg(1-p).
pub fn binary_entropy(p: f64) -> f64 {
    assert!((-1e-12..=1.0 + 1e-12).contains(&p), "p outside [0,1]");
    eta(p.clamp(0.0, 1.0)) + eta(1.0 - p.clamp(0.0, 1.0))
}

/// h'(p) = lg((1-p)/p); undefined at the endpoints.
pub fn binary_entropy_derivative(p: f64) -> Result<f64, EntropyError> {
    if p <= 0.0 || p >= 1.0 {
        return Err(EntropyError::DomainError(p));
    }
    Ok(((1.0 - p) / p).log2())
}

/// Information cost of replacing every measurement of a q-outcome, n-step
/// strategy by its best net approximation at resolution epsilon:
/// 2 q n^2 eps + 2 eta(q n eps). Requires eps <= 1/(q n e).
pub fn discretization_penalty(q: usize, n: usize, epsilon: f64) -> Result<f64, EntropyError> {
    let qn = (q * n) as f64;
    let limit = 1.0 / (qn * std::f64::consts::E);
    if epsilon > limit || epsilon <= 0.0 {
        return Err(EntropyError::EpsilonTooLarge {
            eps: epsilon,
            limit,
        });
    }
    Ok(2.0 * qn * n as f64 * epsilon + 2.0 * eta(qn * epsilon))
}

/// Lower bound on mutual information implied by a discrimination success
/// probability of 1 - eps over 2^nb messages: (1 - 5 sqrt(eps)) nb -
/// eta(2 sqrt(eps)). Requires 2 sqrt(eps) + 2^-nb <= 1/e.
pub fn success_to_info_bound(eps: f64, nb: usize) -> Result<f64, EntropyError> {
    assert!(
        (0.0..=1.0).contains(&eps),
        "failure probability outside [0,1]"
    );
    let check = 2.0 * eps.sqrt() + 2f64.powi(-(nb as i32));
    if check > 1.0 / std::f64::consts::E {
        return Err(EntropyError::PreconditionViolated(check));
    }
    let s = eps.sqrt();
    Ok((1.0 - 5.0 * s) * nb as f64 - eta(2.0 * s))
}

/// Sum of the outcome entropies of measuring a rank-1 state in the
/// computational and in the Hadamard basis. The two bases are mutually
/// unbiased, so the sum is at least 1 bit for every input.
pub fn uncertainty_check(projector: &QubitOperator) -> Result<f64, EntropyError> {
    let herm = hermiticity_defect2(projector);
    let (hi, lo) = eig2_values(projector);
    if herm > EIGEN_CUTOFF || lo.abs() > EIGEN_CUTOFF || hi <= EIGEN_CUTOFF {
        return Err(EntropyError::NotRank1(hi, lo));
    }
    // Normalize to a state; the trace equals the top eigenvalue for rank 1.
    let tr = (projector[(0, 0)] + projector[(1, 1)]).re;
    let p_comp = (projector[(0, 0)].re / tr).clamp(0.0, 1.0);
    let p_had = {
        let s = FRAC_1_SQRT_2;
        // <+|M|+> / tr
        let v = projector[(0, 0)] + projector[(0, 1)] + projector[(1, 0)] + projector[(1, 1)];
        (v.re * s * s / tr).clamp(0.0, 1.0)
    };
    Ok(binary_entropy(p_comp) + binary_entropy(p_had))
}

// ---------------------------------------------------------------------------
// Chain decompositions of game joints
// ---------------------------------------------------------------------------

/// I(U; Z_{1..m}) from a joint law over (index, outcome string).
pub fn prefix_information(joint: &DistributionTable<(usize, Vec<u8>)>, m: usize) -> f64 {
    let truncated: Vec<((usize, Vec<u8>), f64)> = joint
        .entries()
        .iter()
        .map(|((u, z), p)| ((*u, z[..m.min(z.len())].to_vec()), *p))
        .collect();
    let table = DistributionTable::aggregated(truncated)
        .expect("truncation preserves a valid distribution");
    mutual_information(&table)
}

/// I(U; Z_{start+1..start+len} | Z_{1..start}) from a joint law over
/// (index, outcome string), by the chain rule on prefixes.
pub fn segment_information(
    joint: &DistributionTable<(usize, Vec<u8>)>,
    start: usize,
    len: usize,
) -> f64 {
    prefix_information(joint, start + len) - prefix_information(joint, start)
}
