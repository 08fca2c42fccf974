//! Exact linear algebra for single qubits, product states, Gram matrices,
//! and reduced density operators at dimensions up to 2^14.
//!
//! All operations are pure functions of their inputs; every value is
//! immutable after construction and safe to share across workers.

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;
use thiserror::Error;

/// Entrywise tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues with absolute value below this are treated as zero everywhere:
/// PSD checks, entropies of density matrices, and pseudo-inverse square roots.
pub const EIGEN_CUTOFF: f64 = 1e-10;
/// Probabilities within this distance of [0,1] are clamped to the boundary;
/// larger violations are reported as errors rather than silently fixed.
pub const PROB_CLAMP_TOL: f64 = 1e-12;
/// Tolerance on the total mass of a distribution.
pub const DIST_SUM_TOL: f64 = 1e-9;
/// Hard cap on the number of qubits in any dense 2^n-dimensional operation.
pub const MAX_DENSE_QUBITS: usize = 14;
/// Entrywise tolerance for structural equality of measurements and trees.
pub const STRUCTURAL_EQ_TOL: f64 = 1e-12;

/// A 2x2 complex operator acting on a single qubit.
pub type QubitOperator = Matrix2<Complex64>;

#[derive(Debug, Error)]
pub enum QubitError {
    #[error("state is not normalized: |amp0|^2 + |amp1|^2 = {0}")]
    NotNormalized(f64),
    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("dimension {0} is not a power of two")]
    InvalidDimension(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} qubits exceed the dense cap of {MAX_DENSE_QUBITS}")]
    DimensionTooLarge(usize),
    #[error("qubit index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("probability {0} outside [0,1] beyond clamping tolerance")]
    ProbabilityViolation(f64),
    #[error("probabilities sum to {0}, not 1")]
    InvalidDistribution(f64),
    #[error("operator is not PSD with rank <= 1 (eigenvalues {0:.3e}, {1:.3e})")]
    NotRankOne(f64, f64),
    #[error("operator norm {0} exceeds 1")]
    NormTooLarge(f64),
    #[error("duplicate qubit index {0} in outcome record")]
    DuplicateQubit(usize),
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Clamps a computed probability into [0,1], rejecting anything that is off
/// by more than [`PROB_CLAMP_TOL`].
pub fn clamp_probability(p: f64) -> Result<f64, QubitError> {
    if !(-PROB_CLAMP_TOL..=1.0 + PROB_CLAMP_TOL).contains(&p) {
        return Err(QubitError::ProbabilityViolation(p));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Clamp for single-operator expectations. Measurement operators are valid
/// up to norm 1 + 1e-10, so the rejection gate here is wider than the
/// distribution-level [`clamp_probability`].
pub fn clamp_expectation(p: f64) -> Result<f64, QubitError> {
    if !(-1e-9..=1.0 + 1e-9).contains(&p) {
        return Err(QubitError::ProbabilityViolation(p));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// The two-bit cell code selecting one of the four conjugate-coding states.
///
/// The first bit is the computational-basis payload, the second the
/// Hadamard-basis payload; `Zero`/`One` carry a definite computational bit
/// while `Plus`/`Minus` carry a definite Hadamard bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConjugateCode {
    /// Code 00, state |0>.
    Zero = 0,
    /// Code 01, state |+>.
    Plus = 1,
    /// Code 10, state |->.
    Minus = 2,
    /// Code 11, state |1>.
    One = 3,
}

impl ConjugateCode {
    pub const ALL: [ConjugateCode; 4] = [
        ConjugateCode::Zero,
        ConjugateCode::Plus,
        ConjugateCode::Minus,
        ConjugateCode::One,
    ];

    /// Builds the code from its computational bit and Hadamard bit.
    pub fn from_bits(comp: u8, had: u8) -> ConjugateCode {
        match (comp & 1, had & 1) {
            (0, 0) => ConjugateCode::Zero,
            (0, 1) => ConjugateCode::Plus,
            (1, 0) => ConjugateCode::Minus,
            _ => ConjugateCode::One,
        }
    }

    pub fn from_index(idx: usize) -> ConjugateCode {
        Self::ALL[idx & 3]
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// (computational bit, Hadamard bit)
    pub fn bits(self) -> (u8, u8) {
        let i = self as u8;
        (i >> 1, i & 1)
    }

    pub fn label(self) -> &'static str {
        match self {
            ConjugateCode::Zero => "00",
            ConjugateCode::Plus => "01",
            ConjugateCode::Minus => "10",
            ConjugateCode::One => "11",
        }
    }

    pub fn from_label(s: &str) -> Option<ConjugateCode> {
        match s {
            "00" => Some(ConjugateCode::Zero),
            "01" => Some(ConjugateCode::Plus),
            "10" => Some(ConjugateCode::Minus),
            "11" => Some(ConjugateCode::One),
            _ => None,
        }
    }
}

/// A normalized single-qubit pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitState {
    amp0: Complex64,
    amp1: Complex64,
}

impl SingleQubitState {
    /// Normalization is enforced to 1e-12.
    pub fn new(amp0: Complex64, amp1: Complex64) -> Result<Self, QubitError> {
        let norm2 = amp0.norm_sqr() + amp1.norm_sqr();
        if (norm2 - 1.0).abs() > 1e-12 {
            return Err(QubitError::NotNormalized(norm2));
        }
        Ok(SingleQubitState { amp0, amp1 })
    }

    pub fn from_real(a0: f64, a1: f64) -> Result<Self, QubitError> {
        Self::new(c(a0, 0.0), c(a1, 0.0))
    }

    pub fn amp0(&self) -> Complex64 {
        self.amp0
    }

    pub fn amp1(&self) -> Complex64 {
        self.amp1
    }

    pub fn vector(&self) -> Vector2<Complex64> {
        Vector2::new(self.amp0, self.amp1)
    }

    /// <self|other>
    pub fn inner(&self, other: &SingleQubitState) -> Complex64 {
        self.amp0.conj() * other.amp0 + self.amp1.conj() * other.amp1
    }

    /// <psi|M|psi> for a Hermitian M; the imaginary part is discarded as
    /// rounding noise.
    pub fn expectation(&self, op: &QubitOperator) -> f64 {
        let v = self.vector();
        (v.adjoint() * op * v)[(0, 0)].re
    }

    /// The rank-1 projector onto this state.
    pub fn projector(&self) -> QubitOperator {
        let v = self.vector();
        v * v.adjoint()
    }
}

/// One of the four conjugate-coding states |0>, |+>, |->, |1>.
pub fn alpha_state(code: ConjugateCode) -> SingleQubitState {
    let s = FRAC_1_SQRT_2;
    match code {
        ConjugateCode::Zero => SingleQubitState::from_real(1.0, 0.0),
        ConjugateCode::Plus => SingleQubitState::from_real(s, s),
        ConjugateCode::Minus => SingleQubitState::from_real(s, -s),
        ConjugateCode::One => SingleQubitState::from_real(0.0, 1.0),
    }
    .expect("alpha states are normalized by construction")
}

/// cos(phi)|0> + sin(phi)|1>.
pub fn beta_state(phi: f64) -> SingleQubitState {
    SingleQubitState::from_real(phi.cos(), phi.sin())
        .expect("beta states are normalized by construction")
}

/// An n-qubit pure state stored as a sequence of normalized single-qubit
/// amplitude pairs. Length is at least one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    qubits: Vec<SingleQubitState>,
}

impl ProductState {
    pub fn new(qubits: Vec<SingleQubitState>) -> Result<Self, QubitError> {
        if qubits.is_empty() {
            return Err(QubitError::EmptyInput("product state needs >= 1 qubit"));
        }
        Ok(ProductState { qubits })
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn qubit(&self, i: usize) -> Result<&SingleQubitState, QubitError> {
        self.qubits.get(i).ok_or(QubitError::IndexOutOfRange {
            index: i,
            n: self.qubits.len(),
        })
    }

    pub fn qubits(&self) -> &[SingleQubitState] {
        &self.qubits
    }

    /// <self|other>, the product of per-qubit inner products.
    pub fn inner(&self, other: &ProductState) -> Result<Complex64, QubitError> {
        if self.len() != other.len() {
            return Err(QubitError::DimensionMismatch(format!(
                "product states of length {} and {}",
                self.len(),
                other.len()
            )));
        }
        let mut acc = c(1.0, 0.0);
        for (a, b) in self.qubits.iter().zip(other.qubits.iter()) {
            acc *= a.inner(b);
        }
        Ok(acc)
    }

    /// Dense amplitude vector of the qubits listed in `subset` (ascending),
    /// with qubit order preserved; dimension 2^|subset|.
    pub fn dense_subset(&self, subset: &[usize]) -> Result<DVector<Complex64>, QubitError> {
        check_subset(subset, self.len())?;
        if subset.len() > MAX_DENSE_QUBITS {
            return Err(QubitError::DimensionTooLarge(subset.len()));
        }
        let mut v = DVector::from_element(1, c(1.0, 0.0));
        for &q in subset {
            let s = &self.qubits[q];
            let mut next = DVector::from_element(v.len() * 2, c(0.0, 0.0));
            for (i, amp) in v.iter().enumerate() {
                next[2 * i] = amp * s.amp0;
                next[2 * i + 1] = amp * s.amp1;
            }
            v = next;
        }
        Ok(v)
    }

    /// Dense amplitude vector over all qubits.
    pub fn dense(&self) -> Result<DVector<Complex64>, QubitError> {
        let all: Vec<usize> = (0..self.len()).collect();
        self.dense_subset(&all)
    }
}

fn check_subset(subset: &[usize], n: usize) -> Result<(), QubitError> {
    let mut seen = vec![false; n];
    let mut last: Option<usize> = None;
    for &q in subset {
        if q >= n {
            return Err(QubitError::IndexOutOfRange { index: q, n });
        }
        if seen[q] {
            return Err(QubitError::DuplicateQubit(q));
        }
        seen[q] = true;
        if let Some(p) = last {
            if q < p {
                return Err(QubitError::DimensionMismatch(
                    "subset indices must be ascending".into(),
                ));
            }
        }
        last = Some(q);
    }
    Ok(())
}

/// A measurement outcome over a subset of qubits: one PSD rank-<=1 operator
/// of norm at most 1 per measured qubit. The empty record is the trivial
/// outcome observed with probability 1.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeRecord {
    ops: Vec<(usize, QubitOperator)>,
}

impl OutcomeRecord {
    pub fn new(mut ops: Vec<(usize, QubitOperator)>) -> Result<Self, QubitError> {
        ops.sort_by_key(|(q, _)| *q);
        for w in ops.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(QubitError::DuplicateQubit(w[0].0));
            }
        }
        for (_, m) in &ops {
            let herm = hermiticity_defect2(m);
            if herm > HERMITIAN_TOL {
                return Err(QubitError::NotHermitian(herm));
            }
            let (hi, lo) = eig2_values(m);
            // PSD and rank <= 1 together pin the second eigenvalue to zero.
            if lo.abs() >= EIGEN_CUTOFF {
                return Err(QubitError::NotRankOne(hi, lo));
            }
            if hi > 1.0 + 1e-10 {
                return Err(QubitError::NormTooLarge(hi));
            }
        }
        Ok(OutcomeRecord { ops })
    }

    pub fn empty() -> Self {
        OutcomeRecord { ops: Vec::new() }
    }

    pub fn ops(&self) -> &[(usize, QubitOperator)] {
        &self.ops
    }

    pub fn qubits(&self) -> Vec<usize> {
        self.ops.iter().map(|(q, _)| *q).collect()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Product of the per-qubit traces (1 for the empty record).
    pub fn trace(&self) -> f64 {
        self.ops
            .iter()
            .map(|(_, m)| (m[(0, 0)] + m[(1, 1)]).re)
            .product()
    }
}

/// prod_{a in A} <psi_a|M_a|psi_a>, the probability of observing the tensor
/// outcome on a product state. Equals the full-dimensional Tr(M_A rho_A).
pub fn product_expectation(
    state: &ProductState,
    outcome: &OutcomeRecord,
) -> Result<f64, QubitError> {
    let mut acc = 1.0;
    for (q, m) in outcome.ops() {
        let psi = state.qubit(*q)?;
        acc *= clamp_expectation(psi.expectation(m))?;
    }
    Ok(acc)
}

/// A finite probability distribution with explicit support labels.
///
/// Probabilities are clamped to [0,1] at construction when within 1e-12 of
/// the boundary; the total mass must be 1 within 1e-9.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionTable<L> {
    entries: Vec<(L, f64)>,
}

impl<L> DistributionTable<L> {
    pub fn new(entries: Vec<(L, f64)>) -> Result<Self, QubitError> {
        let mut clamped = Vec::with_capacity(entries.len());
        let mut sum = 0.0;
        for (label, p) in entries {
            let p = clamp_probability(p)?;
            sum += p;
            clamped.push((label, p));
        }
        if (sum - 1.0).abs() > DIST_SUM_TOL {
            return Err(QubitError::InvalidDistribution(sum));
        }
        Ok(DistributionTable { entries: clamped })
    }

    pub fn uniform(labels: Vec<L>) -> Result<Self, QubitError> {
        if labels.is_empty() {
            return Err(QubitError::EmptyInput("distribution support"));
        }
        let p = 1.0 / labels.len() as f64;
        Self::new(labels.into_iter().map(|l| (l, p)).collect())
    }

    pub fn point_mass(label: L) -> Self {
        DistributionTable {
            entries: vec![(label, 1.0)],
        }
    }

    pub fn entries(&self) -> &[(L, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|(_, p)| *p)
    }

    pub fn map_labels<M>(self, f: impl FnMut(L) -> M) -> DistributionTable<M> {
        let mut f = f;
        DistributionTable {
            entries: self
                .entries
                .into_iter()
                .map(|(l, p)| (f(l), p))
                .collect(),
        }
    }
}

impl<L: Eq + std::hash::Hash + Clone> DistributionTable<L> {
    /// Builds a table from entries that may repeat labels, merging duplicates.
    /// First-occurrence order is preserved.
    pub fn aggregated(entries: Vec<(L, f64)>) -> Result<Self, QubitError> {
        let mut index: std::collections::HashMap<L, usize> = std::collections::HashMap::new();
        let mut merged: Vec<(L, f64)> = Vec::new();
        for (label, p) in entries {
            match index.get(&label) {
                Some(&i) => merged[i].1 += p,
                None => {
                    index.insert(label.clone(), merged.len());
                    merged.push((label, p));
                }
            }
        }
        Self::new(merged)
    }

    pub fn probability_of(&self, label: &L) -> f64 {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, p)| *p)
            .unwrap_or(0.0)
    }
}

/// A dense Hermitian operator on a power-of-two dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOp {
    mat: DMatrix<Complex64>,
}

impl HermitianOp {
    /// The input must be square with power-of-two dimension and equal to its
    /// conjugate transpose entrywise within 1e-10; the stored matrix is the
    /// Hermitian average (M + M^dag)/2.
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self, QubitError> {
        if mat.nrows() != mat.ncols() {
            return Err(QubitError::DimensionMismatch(format!(
                "{}x{} is not square",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let dim = mat.nrows();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(QubitError::InvalidDimension(dim));
        }
        let mut defect: f64 = 0.0;
        for i in 0..dim {
            for j in i..dim {
                defect = defect.max((mat[(i, j)] - mat[(j, i)].conj()).norm());
            }
        }
        if defect > HERMITIAN_TOL {
            return Err(QubitError::NotHermitian(defect));
        }
        let herm = (&mat + mat.adjoint()).scale(0.5);
        Ok(HermitianOp { mat: herm })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.mat
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// PSD within the uniform eigenvalue cutoff.
    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue() >= -EIGEN_CUTOFF
    }

    /// ||M - I||_F
    pub fn frobenius_distance_to_identity(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let target = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
                acc += (self.mat[(i, j)] - target).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Applies `f` to each eigenvalue (after zeroing those below the cutoff)
    /// and reassembles the operator.
    fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> HermitianOp {
        let se = self.mat.clone().symmetric_eigen();
        let mapped = se.eigenvalues.map(|x| {
            let x = if x.abs() < EIGEN_CUTOFF { 0.0 } else { x };
            c(f(x), 0.0)
        });
        let d = DMatrix::from_diagonal(&mapped);
        let m = &se.eigenvectors * d * se.eigenvectors.adjoint();
        let herm = (&m + m.adjoint()).scale(0.5);
        HermitianOp { mat: herm }
    }

    /// Square root with negative rounding noise clipped to zero.
    pub fn sqrt_psd(&self) -> HermitianOp {
        self.map_spectrum(|x| if x > 0.0 { x.sqrt() } else { 0.0 })
    }

    /// lambda^{-1/2} on the support (eigenvalues >= cutoff), zero elsewhere.
    pub fn inv_sqrt_on_support(&self) -> HermitianOp {
        self.map_spectrum(|x| if x > 0.0 { 1.0 / x.sqrt() } else { 0.0 })
    }

    /// Projector onto the support.
    pub fn support_projector(&self) -> HermitianOp {
        self.map_spectrum(|x| if x > 0.0 { 1.0 } else { 0.0 })
    }

    /// Von Neumann entropy in bits; eigenvalues below the cutoff contribute
    /// zero.
    pub fn von_neumann_entropy_bits(&self) -> f64 {
        self.eigenvalues()
            .into_iter()
            .filter(|&x| x >= EIGEN_CUTOFF)
            .map(|x| -x * x.log2())
            .sum()
    }
}

/// Gram matrix G_{uv} = <state_u|state_v>, computed as products of per-qubit
/// inner products. The number of states must be a power of two so the result
/// is a valid [`HermitianOp`].
pub fn gram_matrix(states: &[ProductState]) -> Result<HermitianOp, QubitError> {
    if states.is_empty() {
        return Err(QubitError::EmptyInput("gram matrix of no states"));
    }
    let n = states[0].len();
    for s in states {
        if s.len() != n {
            return Err(QubitError::DimensionMismatch(
                "states of unequal length".into(),
            ));
        }
    }
    let d = states.len();
    let mut g = DMatrix::from_element(d, d, c(0.0, 0.0));
    for u in 0..d {
        g[(u, u)] = c(1.0, 0.0);
        for v in (u + 1)..d {
            let x = states[u].inner(&states[v])?;
            g[(u, v)] = x;
            g[(v, u)] = x.conj();
        }
    }
    HermitianOp::new(g)
}

/// Reduced density operator of a weighted mixture of product states on the
/// given qubit subset (ascending indices). Tracing out the complement of a
/// pure product state leaves the product over the kept qubits, so the result
/// is an exact convex combination of rank-1 projectors.
pub fn reduced_density(
    states: &[ProductState],
    weights: &DistributionTable<usize>,
    subset: &[usize],
) -> Result<HermitianOp, QubitError> {
    if states.is_empty() {
        return Err(QubitError::EmptyInput("reduced density of no states"));
    }
    if weights.len() != states.len() {
        return Err(QubitError::DimensionMismatch(format!(
            "{} weights for {} states",
            weights.len(),
            states.len()
        )));
    }
    if subset.is_empty() {
        return Err(QubitError::EmptyInput("empty qubit subset"));
    }
    if subset.len() > MAX_DENSE_QUBITS {
        return Err(QubitError::DimensionTooLarge(subset.len()));
    }
    let dim = 1usize << subset.len();
    let mut rho = DMatrix::from_element(dim, dim, c(0.0, 0.0));
    for (label, p) in weights.entries() {
        let state = states.get(*label).ok_or(QubitError::IndexOutOfRange {
            index: *label,
            n: states.len(),
        })?;
        if *p == 0.0 {
            continue;
        }
        let v = state.dense_subset(subset)?;
        rho += (&v * v.adjoint()).scale(*p);
    }
    HermitianOp::new(rho)
}

/// Average fourth moment of overlaps with the four conjugate-coding states:
/// (1/4) sum_alpha |<psi|alpha>|^4, evaluated by direct summation.
pub fn fourth_moment_avg(psi: &SingleQubitState) -> f64 {
    ConjugateCode::ALL
        .iter()
        .map(|&code| {
            let a = alpha_state(code);
            a.inner(psi).norm_sqr().powi(2)
        })
        .sum::<f64>()
        / 4.0
}

/// Closed form of [`fourth_moment_avg`]: (1/8)(2 + |amp0^2 + amp1^2|^2).
pub fn fourth_moment_closed_form(psi: &SingleQubitState) -> f64 {
    let z = psi.amp0() * psi.amp0() + psi.amp1() * psi.amp1();
    (2.0 + z.norm_sqr()) / 8.0
}

/// Holevo information chi = S(sum_u p_u rho_u) - sum_u p_u S(rho_u) in bits,
/// for the reduced states on `subset`. Because the inputs are pure product
/// states, each individual reduced state is pure and the second term
/// vanishes identically.
pub fn holevo_chi(
    states: &[ProductState],
    prior: &DistributionTable<usize>,
    subset: &[usize],
) -> Result<f64, QubitError> {
    let mixture = reduced_density(states, prior, subset)?;
    Ok(mixture.von_neumann_entropy_bits())
}

// ---------------------------------------------------------------------------
// 2x2 Hermitian helpers (closed-form eigensystem)
// ---------------------------------------------------------------------------

/// Entrywise Hermiticity defect of a 2x2 operator.
pub fn hermiticity_defect2(m: &QubitOperator) -> f64 {
    let d0 = m[(0, 0)].im.abs();
    let d1 = m[(1, 1)].im.abs();
    let off = (m[(0, 1)] - m[(1, 0)].conj()).norm();
    d0.max(d1).max(off)
}

/// Eigenvalues of a 2x2 Hermitian operator, (larger, smaller).
pub fn eig2_values(m: &QubitOperator) -> (f64, f64) {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let mean = 0.5 * (a + d);
    let disc = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    (mean + disc, mean - disc)
}

/// Full eigensystem of a 2x2 Hermitian operator: eigenvalues in descending
/// order with orthonormal eigenvectors.
pub fn eig2(m: &QubitOperator) -> ((f64, Vector2<Complex64>), (f64, Vector2<Complex64>)) {
    let (hi, lo) = eig2_values(m);
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let v_hi = if b.norm() > 1e-300 {
        Vector2::new(b, c(hi - a, 0.0))
    } else if a >= d {
        Vector2::new(c(1.0, 0.0), c(0.0, 0.0))
    } else {
        Vector2::new(c(0.0, 0.0), c(1.0, 0.0))
    };
    let v_hi = v_hi.scale(1.0 / v_hi.norm());
    // Orthogonal complement in C^2.
    let v_lo = Vector2::new(-v_hi[1].conj(), v_hi[0].conj());
    debug_assert!((hi - lo).abs() < 1e-12 || {
        let r = m * v_hi - v_hi.scale(hi);
        r.norm() < 1e-8
    });
    ((hi, v_hi), (lo, v_lo))
}

/// Operator norm of a 2x2 Hermitian operator.
pub fn op2_norm(m: &QubitOperator) -> f64 {
    let (hi, lo) = eig2_values(m);
    hi.abs().max(lo.abs())
}

/// Rank-1 projector |v><v| from a unit vector.
pub fn projector_from(v: &Vector2<Complex64>) -> QubitOperator {
    v * v.adjoint()
}
