//! Random product-state ensembles for data hiding, the pretty good
//! measurement that reads them out globally, and the collision-entropy
//! quantities that bound what tensor-outcome adversaries learn.
//!
//! An ensemble maps each of 2^nb messages to an n-cell string of conjugate
//! codes, each cell drawn independently and uniformly from the four
//! single-qubit states |0>, |+>, |->, |1>.

use crate::entropy::mutual_information;
use crate::locc::{joint_distribution, LoccError, StrategyTree};
use crate::qubit::{
    gram_matrix, product_expectation, ConjugateCode, DistributionTable, HermitianOp,
    OutcomeRecord, ProductState, QubitError, EIGEN_CUTOFF, MAX_DENSE_QUBITS,
};
use crate::qubit::alpha_state;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::io::{BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HidingError {
    #[error("{field} = {value} exceeds the cap of {max}")]
    TooLarge {
        field: &'static str,
        value: usize,
        max: usize,
    },
    #[error("message index {index} out of range for nb = {nb}")]
    IndexOutOfRange { index: u64, nb: usize },
    #[error("outcome has probability {0:.3e}; posterior undefined")]
    UnobservableOutcome(f64),
    #[error(transparent)]
    Qubit(#[from] QubitError),
    #[error(transparent)]
    Locc(#[from] LoccError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// The hiding map: 2^nb rows of n conjugate codes, deterministic in the
/// sampling seed.
#[derive(Debug, Clone, PartialEq)]
pub struct HidingEnsemble {
    nb: usize,
    n: usize,
    seed: u64,
    table: Vec<ConjugateCode>,
}

impl HidingEnsemble {
    pub fn nb(&self) -> usize {
        self.nb
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rows(&self) -> usize {
        1usize << self.nb
    }

    pub fn row(&self, u: u64) -> Result<&[ConjugateCode], HidingError> {
        if u >= (1u64 << self.nb) {
            return Err(HidingError::IndexOutOfRange {
                index: u,
                nb: self.nb,
            });
        }
        let start = u as usize * self.n;
        Ok(&self.table[start..start + self.n])
    }

    /// All 2^nb encoded states, in message order.
    pub fn all_states(&self) -> Vec<ProductState> {
        (0..self.rows() as u64)
            .map(|u| encode_hiding(self, u).expect("indices in range"))
            .collect()
    }
}

/// Samples an ensemble with every cell independent and uniform over the
/// four codes.
pub fn sample_ensemble(nb: usize, n: usize, seed: u64) -> Result<HidingEnsemble, HidingError> {
    if nb > MAX_DENSE_QUBITS {
        return Err(HidingError::TooLarge {
            field: "nb",
            value: nb,
            max: MAX_DENSE_QUBITS,
        });
    }
    if n > MAX_DENSE_QUBITS {
        return Err(HidingError::TooLarge {
            field: "n",
            value: n,
            max: MAX_DENSE_QUBITS,
        });
    }
    let rows = 1usize << nb;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let table = (0..rows * n)
        .map(|_| ConjugateCode::from_index(rng.random_range(0..4)))
        .collect();
    Ok(HidingEnsemble {
        nb,
        n,
        seed,
        table,
    })
}

/// The product state encoding message u.
pub fn encode_hiding(e: &HidingEnsemble, u: u64) -> Result<ProductState, HidingError> {
    let row = e.row(u)?;
    Ok(ProductState::new(row.iter().map(|&c| alpha_state(c)).collect())?)
}

// ---------------------------------------------------------------------------
// Pretty good measurement
// ---------------------------------------------------------------------------

/// The square-root measurement elements for a uniform ensemble of pure
/// states: |M(z)><M(z)| with |M(z)> = rho^{-1/2} |psi_z> / sqrt(N), where
/// rho is the uniform mixture and rho^{-1/2} acts on its support. The
/// elements sum to the projector onto the support of rho.
pub fn pgm_build(states: &[ProductState]) -> Result<Vec<HermitianOp>, HidingError> {
    if states.is_empty() {
        return Err(HidingError::Qubit(QubitError::EmptyInput("pgm of no states")));
    }
    let n = states[0].len();
    if n > MAX_DENSE_QUBITS {
        return Err(HidingError::TooLarge {
            field: "n",
            value: n,
            max: MAX_DENSE_QUBITS,
        });
    }
    let count = states.len() as f64;
    let dim = 1usize << n;
    let mut rho = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    let vectors: Vec<_> = states
        .iter()
        .map(|s| s.dense())
        .collect::<Result<_, _>>()?;
    for v in &vectors {
        rho += (v * v.adjoint()).scale(1.0 / count);
    }
    let rho = HermitianOp::new(rho)?;
    let inv_sqrt = rho.inv_sqrt_on_support();
    let mut elements = Vec::with_capacity(states.len());
    for v in &vectors {
        let w = inv_sqrt.matrix() * v;
        let m = (&w * w.adjoint()).scale(1.0 / count);
        elements.push(HermitianOp::new(m)?);
    }
    Ok(elements)
}

/// Exact success statistics of the pretty good measurement on an ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PgmSuccess {
    /// Exact Pr[measurement output = message].
    pub probability: f64,
    /// 1 - 2 * 2^(-nb/2) ||G - I||_F, the Gram-matrix lower bound.
    pub gram_lower_bound: f64,
    /// ||G - I||_F itself.
    pub gram_frobenius: f64,
}

fn gram_sqrt(e: &HidingEnsemble) -> Result<(HermitianOp, DMatrix<Complex64>), HidingError> {
    let states = e.all_states();
    let gram = gram_matrix(&states)?;
    let se = gram.matrix().clone().symmetric_eigen();
    let clipped = se.eigenvalues.map(|x| {
        let x = if x < EIGEN_CUTOFF { 0.0 } else { x };
        Complex64::new(x.sqrt(), 0.0)
    });
    let d = DMatrix::from_diagonal(&clipped);
    let sqrt = &se.eigenvectors * d * se.eigenvectors.adjoint();
    Ok((gram, sqrt))
}

/// Success probability of the pretty good measurement, computed on the
/// 2^nb-dimensional Gram matrix instead of 2^n-dimensional operators:
/// the orthonormalized ensemble has transition amplitudes sqrt(G), so
/// Pr[Z = U] is the mean squared diagonal of sqrt(G).
pub fn pgm_success(e: &HidingEnsemble) -> Result<PgmSuccess, HidingError> {
    let (gram, sqrt) = gram_sqrt(e)?;
    let count = (1usize << e.nb()) as f64;
    let mut success = 0.0;
    for u in 0..sqrt.nrows() {
        success += sqrt[(u, u)].re.powi(2) / count;
    }
    let fro = gram.frobenius_distance_to_identity();
    Ok(PgmSuccess {
        probability: success,
        gram_lower_bound: 1.0 - 2.0 * fro / count.sqrt(),
        gram_frobenius: fro,
    })
}

/// Exact joint law (message, measurement output) of the pretty good
/// measurement under a uniform message: Pr[u, z] = |sqrt(G)_{z u}|^2 / 2^nb.
pub fn pgm_joint_law(e: &HidingEnsemble) -> Result<DistributionTable<(usize, usize)>, HidingError> {
    let (_, sqrt) = gram_sqrt(e)?;
    let count = sqrt.nrows();
    let mut entries = Vec::with_capacity(count * count);
    for u in 0..count {
        for z in 0..count {
            entries.push(((u, z), sqrt[(z, u)].norm_sqr() / count as f64));
        }
    }
    Ok(DistributionTable::new(entries)?)
}

/// Exact mutual information I(Z; U) of a one-pass strategy against the
/// uniform ensemble.
pub fn discrimination_game(
    e: &HidingEnsemble,
    strategy: &StrategyTree,
) -> Result<f64, HidingError> {
    let states = e.all_states();
    let prior = DistributionTable::uniform((0..states.len()).collect())?;
    let joint = joint_distribution(strategy, &states, &prior)?;
    Ok(mutual_information(&joint))
}

// ---------------------------------------------------------------------------
// Conditional collision entropy
// ---------------------------------------------------------------------------

/// Collision entropy of the message posterior, with the residual of the
/// cross-check identity between the two computation routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionEntropy {
    /// H_2 of the posterior in bits.
    pub bits: f64,
    /// |posterior-route collision probability - likelihood-route value|.
    pub identity_residual: f64,
}

/// H_2(U | M_A) for a tensor measurement outcome, computed from the exact
/// posterior, and cross-checked against the likelihood decomposition
/// Pr[M_A]^{-2} 4^{-nb} (Tr M_A)^2 F with F the normalized squared
/// likelihood sum.
pub fn conditional_collision(
    e: &HidingEnsemble,
    outcome: &OutcomeRecord,
) -> Result<CollisionEntropy, HidingError> {
    let rows = e.rows();
    let mut likelihoods = Vec::with_capacity(rows);
    for u in 0..rows as u64 {
        let state = encode_hiding(e, u)?;
        likelihoods.push(product_expectation(&state, outcome)?);
    }
    collision_from_likelihoods(&likelihoods, outcome.trace())
}

pub(crate) fn collision_from_likelihoods(
    likelihoods: &[f64],
    outcome_trace: f64,
) -> Result<CollisionEntropy, HidingError> {
    let count = likelihoods.len() as f64;
    // Route 1: normalize to the posterior, then sum squares.
    let pr_outcome: f64 = likelihoods.iter().sum::<f64>() / count;
    if pr_outcome < 1e-300 {
        return Err(HidingError::UnobservableOutcome(pr_outcome));
    }
    let mut collision_posterior = 0.0;
    for &l in likelihoods {
        let post = (l / count) / pr_outcome;
        collision_posterior += post * post;
    }
    // Route 2: sum squared likelihoods normalized by the outcome trace,
    // then restore the trace factors.
    let trace2 = outcome_trace * outcome_trace;
    let f_normalized: f64 = likelihoods.iter().map(|l| l * l / trace2).sum();
    let collision_likelihood =
        f_normalized * trace2 / (count * count * pr_outcome * pr_outcome);
    Ok(CollisionEntropy {
        bits: -collision_posterior.log2(),
        identity_residual: (collision_posterior - collision_likelihood).abs(),
    })
}

// ---------------------------------------------------------------------------
// Ensemble files: header "nb n seed", rows of n two-bit codes.
// ---------------------------------------------------------------------------

pub fn write_ensemble(e: &HidingEnsemble, w: &mut impl Write) -> Result<(), HidingError> {
    writeln!(w, "{} {} {}", e.nb, e.n, e.seed)?;
    for u in 0..e.rows() as u64 {
        let labels: Vec<&str> = e.row(u)?.iter().map(|c| c.label()).collect();
        writeln!(w, "{}", labels.join(" "))?;
    }
    Ok(())
}

pub fn read_ensemble(r: &mut impl BufRead) -> Result<HidingEnsemble, HidingError> {
    let mut lines = r.lines();
    let header = lines.next().ok_or(HidingError::Parse {
        line: 1,
        msg: "missing header".into(),
    })??;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(HidingError::Parse {
            line: 1,
            msg: "header must be 'nb n seed'".into(),
        });
    }
    let nb: usize = parts[0].parse().map_err(|_| HidingError::Parse {
        line: 1,
        msg: "bad nb".into(),
    })?;
    let n: usize = parts[1].parse().map_err(|_| HidingError::Parse {
        line: 1,
        msg: "bad n".into(),
    })?;
    let seed: u64 = parts[2].parse().map_err(|_| HidingError::Parse {
        line: 1,
        msg: "bad seed".into(),
    })?;
    let rows = 1usize << nb;
    let mut table = Vec::with_capacity(rows * n);
    for (i, line) in lines.enumerate() {
        let line = line?;
        let codes: Vec<&str> = line.split_whitespace().collect();
        if codes.len() != n {
            return Err(HidingError::Parse {
                line: i + 2,
                msg: format!("expected {n} codes, got {}", codes.len()),
            });
        }
        for c in codes {
            table.push(ConjugateCode::from_label(c).ok_or(HidingError::Parse {
                line: i + 2,
                msg: format!("bad code {c:?}"),
            })?);
        }
    }
    if table.len() != rows * n {
        return Err(HidingError::Parse {
            line: rows + 1,
            msg: format!("expected {rows} rows"),
        });
    }
    Ok(HidingEnsemble {
        nb,
        n,
        seed,
        table,
    })
}
