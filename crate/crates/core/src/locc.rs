//! Representation, discretization, execution, and search of one-pass
//! adaptive LOCC measurement strategies in the isolated-qubits model.
//!
//! A strategy is a decision tree: each node picks an unmeasured qubit and a
//! single-qubit POVM, and branches on the observed outcome. Because every
//! qubit is measured at most once and the states are products, the
//! probability of a leaf path is the product of per-step single-qubit
//! expectations; no global state vector is needed for execution.
//!
//! Strategy spaces are discretized by finite measurement nets. The 2-outcome
//! net places rank-1 projectors on a deterministic Fibonacci-spiral covering
//! of the Bloch sphere; the operator-norm distance between two rank-1
//! projectors equals half the Euclidean chord between their Bloch points, so
//! a chord-radius 2*eps covering of the sphere is an eps-net in the metric
//! used here (max over outcomes of operator-norm distance).

use crate::qubit::{
    clamp_expectation, eig2, eig2_values, hermiticity_defect2, op2_norm, DistributionTable,
    OutcomeRecord, ProductState, QubitError, QubitOperator, EIGEN_CUTOFF, HERMITIAN_TOL,
    STRUCTURAL_EQ_TOL,
};

use num_complex::Complex64;
use std::io::{BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoccError {
    #[error("epsilon {0} outside (0, 1]")]
    InvalidEpsilon(f64),
    #[error("outcome count q = {0} must be at least 2")]
    InvalidQ(usize),
    #[error("not a POVM: {0}")]
    NotAPovm(String),
    #[error("strategy trees have depths {0} and {1}, expected both = {2}")]
    DepthMismatch(usize, usize, usize),
    #[error("tree is not a valid 1-pass strategy: {0}")]
    InvalidTree(String),
    #[error("enumeration would produce {} trees, over the cap of {cap}",
            count.map(|c| c.to_string()).unwrap_or_else(|| "more than u128::MAX".into()))]
    CapExceeded { count: Option<u128>, cap: u128 },
    #[error(transparent)]
    Qubit(#[from] QubitError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Anything usable as a node measurement: a finite list of 2x2 POVM
/// elements.
pub trait Measurement {
    fn elements(&self) -> &[QubitOperator];

    fn outcome_count(&self) -> usize {
        self.elements().len()
    }
}

/// A single-qubit POVM whose elements all have numerical rank at most one.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank1Povm {
    outcomes: Vec<QubitOperator>,
}

impl Rank1Povm {
    /// Validates completeness (sum = identity within 1e-10) and per-element
    /// PSD rank <= 1 (second eigenvalue below 1e-10 in magnitude).
    pub fn new(outcomes: Vec<QubitOperator>) -> Result<Self, LoccError> {
        if outcomes.len() < 2 {
            return Err(LoccError::NotAPovm(format!(
                "{} outcomes, need at least 2",
                outcomes.len()
            )));
        }
        let mut sum = QubitOperator::zeros();
        for (i, m) in outcomes.iter().enumerate() {
            let h = hermiticity_defect2(m);
            if h > HERMITIAN_TOL {
                return Err(LoccError::NotAPovm(format!(
                    "element {i} not Hermitian (defect {h:.3e})"
                )));
            }
            let (_, lo) = eig2_values(m);
            if lo.abs() > EIGEN_CUTOFF {
                return Err(LoccError::NotAPovm(format!(
                    "element {i} has second eigenvalue {lo:.3e}"
                )));
            }
            sum += m;
        }
        let defect = op2_norm(&(sum - QubitOperator::identity()));
        if defect > 1e-10 {
            return Err(LoccError::NotAPovm(format!(
                "completeness defect {defect:.3e}"
            )));
        }
        Ok(Rank1Povm { outcomes })
    }

    /// The projective measurement {P, I-P} at a Bloch-sphere point.
    pub fn projective(bloch: [f64; 3]) -> Rank1Povm {
        let p = bloch_projector(bloch);
        let q = bloch_projector([-bloch[0], -bloch[1], -bloch[2]]);
        Rank1Povm { outcomes: vec![p, q] }
    }

    /// The computational-basis measurement {|0><0|, |1><1|}.
    pub fn computational() -> Rank1Povm {
        Rank1Povm::projective([0.0, 0.0, 1.0])
    }

    /// The projective measurement onto {|psi>, |psi_perp>} for a state with
    /// real amplitudes (cos phi, sin phi).
    pub fn basis_at_angle(phi: f64) -> Rank1Povm {
        // Bloch vector of cos(phi)|0> + sin(phi)|1>
        Rank1Povm::projective([(2.0 * phi).sin(), 0.0, (2.0 * phi).cos()])
    }
}

impl Measurement for Rank1Povm {
    fn elements(&self) -> &[QubitOperator] {
        &self.outcomes
    }
}

/// A single-qubit POVM with arbitrary PSD elements (used as the input of
/// the rank-1 refinement).
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralPovm {
    outcomes: Vec<QubitOperator>,
}

impl GeneralPovm {
    pub fn new(outcomes: Vec<QubitOperator>) -> Result<Self, LoccError> {
        if outcomes.is_empty() {
            return Err(LoccError::NotAPovm("no outcomes".into()));
        }
        let mut sum = QubitOperator::zeros();
        for (i, m) in outcomes.iter().enumerate() {
            let h = hermiticity_defect2(m);
            if h > HERMITIAN_TOL {
                return Err(LoccError::NotAPovm(format!(
                    "element {i} not Hermitian (defect {h:.3e})"
                )));
            }
            let (_, lo) = eig2_values(m);
            if lo < -EIGEN_CUTOFF {
                return Err(LoccError::NotAPovm(format!(
                    "element {i} has negative eigenvalue {lo:.3e}"
                )));
            }
            sum += m;
        }
        let defect = op2_norm(&(sum - QubitOperator::identity()));
        if defect > 1e-10 {
            return Err(LoccError::NotAPovm(format!(
                "completeness defect {defect:.3e}"
            )));
        }
        Ok(GeneralPovm { outcomes })
    }
}

impl Measurement for GeneralPovm {
    fn elements(&self) -> &[QubitOperator] {
        &self.outcomes
    }
}

/// Distance between two measurements in the metric used throughout: the
/// maximum over outcomes of the operator-norm distance. `None` when the
/// outcome counts differ.
pub fn povm_distance(a: &impl Measurement, b: &impl Measurement) -> Option<f64> {
    if a.outcome_count() != b.outcome_count() {
        return None;
    }
    Some(
        a.elements()
            .iter()
            .zip(b.elements())
            .map(|(x, y)| op2_norm(&(x - y)))
            .fold(0.0, f64::max),
    )
}

// ---------------------------------------------------------------------------
// Measurement nets
// ---------------------------------------------------------------------------

/// Calibrated bound on the chord covering radius of the Fibonacci lattice
/// with N points: radius <= FIB_COVER / sqrt(N). Verified by the sampling
/// coverage tests.
const FIB_COVER: f64 = 3.2;

/// Documented cardinality constant for the 2-outcome net: |L| <= NET2_C /
/// eps^2 for all eps in (0, 1].
pub const NET2_C: f64 = 4.0;

/// Documented cardinality constant for the q-outcome net: |L| <= (NETQ_C /
/// eps)^(3q).
pub const NETQ_C: f64 = 3.0;

/// Grid refinement divisor for the q-outcome net: weight step and projector
/// radius are eps / NETQ_DIVISOR.
const NETQ_DIVISOR: f64 = 4.0;

/// A finite eps-covering of a space of single-qubit rank-1 POVMs.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementNet {
    pub epsilon: f64,
    pub q: usize,
    pub members: Vec<Rank1Povm>,
}

impl MeasurementNet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// eps * |L|^(1/(3q)), the constant this net actually achieves in the
    /// documented q-outcome cardinality bound.
    pub fn achieved_qoutcome_constant(&self) -> f64 {
        self.epsilon * (self.members.len() as f64).powf(1.0 / (3.0 * self.q as f64))
    }

    /// Index and distance of the nearest member with matching outcome count.
    pub fn nearest_member(&self, m: &impl Measurement) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, cand) in self.members.iter().enumerate() {
            if let Some(d) = povm_distance(cand, m) {
                if best.map(|(_, bd)| d < bd).unwrap_or(true) {
                    best = Some((i, d));
                }
            }
        }
        best
    }
}

fn bloch_projector(p: [f64; 3]) -> QubitOperator {
    let c = Complex64::new;
    QubitOperator::new(
        c(0.5 * (1.0 + p[2]), 0.0),
        c(0.5 * p[0], -0.5 * p[1]),
        c(0.5 * p[0], 0.5 * p[1]),
        c(0.5 * (1.0 - p[2]), 0.0),
    )
}

/// Deterministic Fibonacci-spiral points on the unit sphere.
pub fn fibonacci_sphere(count: usize) -> Vec<[f64; 3]> {
    let golden = (1.0 + 5.0_f64.sqrt()) / 2.0;
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = 2.0 * std::f64::consts::PI * (i as f64 / golden);
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// Number of lattice points needed for a chord covering radius of `chord`.
fn fib_points_for_chord(chord: f64) -> usize {
    ((FIB_COVER / chord).powi(2)).ceil().max(1.0) as usize
}

/// Builds an eps-net of 2-outcome rank-1 projective measurements. The first
/// member is always the computational basis; the rest come from the
/// Fibonacci lattice sized so that every projective measurement is within
/// eps of some member in operator norm.
pub fn build_net_2outcome(epsilon: f64) -> Result<MeasurementNet, LoccError> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(LoccError::InvalidEpsilon(epsilon));
    }
    // operator-norm radius eps <=> chord radius 2 eps on the Bloch sphere
    let count = fib_points_for_chord(2.0 * epsilon);
    let mut members = vec![Rank1Povm::computational()];
    members.extend(fibonacci_sphere(count).into_iter().map(Rank1Povm::projective));
    Ok(MeasurementNet {
        epsilon,
        q: 2,
        members,
    })
}

/// Builds an eps-net of q-outcome rank-1 POVMs.
///
/// For q = 2 every rank-1 POVM is projective, so the projective net is
/// returned unchanged. For q >= 3 the first q-1 elements range over a
/// (weight grid) x (projector net) product; the last element is seeded with
/// the positive part of the residual I - sum, and the whole tuple is then
/// conjugated by T^{-1/2} (T the completed sum) so completeness is exact.
/// Tuples whose completion moves any element by more than eps/2 are
/// discarded.
pub fn build_net_qoutcome(q: usize, epsilon: f64) -> Result<MeasurementNet, LoccError> {
    if q < 2 {
        return Err(LoccError::InvalidQ(q));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(LoccError::InvalidEpsilon(epsilon));
    }
    if q == 2 {
        let mut net = build_net_2outcome(epsilon)?;
        net.q = 2;
        return Ok(net);
    }
    let step = epsilon / NETQ_DIVISOR;
    let weight_count = (1.0 / step).ceil() as usize + 1;
    let weights: Vec<f64> = (0..weight_count)
        .map(|i| i as f64 / (weight_count - 1) as f64)
        .collect();
    let projector_count = fib_points_for_chord(2.0 * step);
    let projectors: Vec<QubitOperator> = fibonacci_sphere(projector_count)
        .into_iter()
        .map(bloch_projector)
        .collect();

    // Slot options: the canonical zero element plus every positive-weight
    // scaled projector.
    let mut options: Vec<QubitOperator> = vec![QubitOperator::zeros()];
    for &w in weights.iter().skip(1) {
        for p in &projectors {
            options.push(p.scale(w));
        }
    }

    let slack = epsilon / 4.0 + 1e-9;
    let mut members = Vec::new();
    let mut stack: Vec<QubitOperator> = Vec::with_capacity(q - 1);
    fill_slots(
        &options,
        q,
        epsilon,
        slack,
        &mut stack,
        &QubitOperator::zeros(),
        &mut members,
    );
    Ok(MeasurementNet {
        epsilon,
        q,
        members,
    })
}

fn fill_slots(
    options: &[QubitOperator],
    q: usize,
    epsilon: f64,
    slack: f64,
    stack: &mut Vec<QubitOperator>,
    partial: &QubitOperator,
    members: &mut Vec<Rank1Povm>,
) {
    if stack.len() == q - 1 {
        if let Some(povm) = complete_tuple(stack, partial, epsilon) {
            members.push(povm);
        }
        return;
    }
    let remaining = (q - 1 - stack.len()) as f64;
    for opt in options {
        let next = partial + opt;
        let (hi, _) = eig2_values(&next);
        if hi > 1.0 + slack {
            continue;
        }
        let tr = (next[(0, 0)] + next[(1, 1)]).re;
        if tr > 2.0 + slack {
            continue;
        }
        // The missing elements have operator norm at most 1 each, so their
        // traces sum to at most remaining + 1 (bounding the final slot by 2).
        if 2.0 - tr > remaining + 1.0 + slack {
            continue;
        }
        stack.push(*opt);
        fill_slots(options, q, epsilon, slack, stack, &next, members);
        stack.pop();
    }
}

fn complete_tuple(
    slots: &[QubitOperator],
    partial: &QubitOperator,
    epsilon: f64,
) -> Option<Rank1Povm> {
    let residual = QubitOperator::identity() - partial;
    let ((hi, v_hi), (lo, _)) = eig2(&residual);
    // The residual must already be close to a rank-1 PSD operator.
    if lo.abs() > 0.75 * epsilon + 1e-9 || hi < -1e-9 || hi > 1.0 + 0.75 * epsilon {
        return None;
    }
    let last = (v_hi * v_hi.adjoint()).scale(hi.max(0.0));
    let total = partial + last;
    // Conjugate by T^{-1/2} for exact completeness.
    let ((t1, u1), (t2, u2)) = eig2(&total);
    if t2 < 0.25 {
        return None;
    }
    let inv_sqrt = (u1 * u1.adjoint()).scale(1.0 / t1.sqrt())
        + (u2 * u2.adjoint()).scale(1.0 / t2.sqrt());
    let mut outcomes = Vec::with_capacity(slots.len() + 1);
    let mut shift: f64 = 0.0;
    for a in slots.iter().chain(std::iter::once(&last)) {
        let m = inv_sqrt * a * inv_sqrt;
        let m = (m + m.adjoint()).scale(0.5);
        shift = shift.max(op2_norm(&(m - a)));
        outcomes.push(m);
    }
    // Also count the distance from the exact residual to the seeded last
    // element: the completion must stay within eps/2 overall.
    shift = shift.max(op2_norm(&(last - residual)));
    if shift > epsilon / 2.0 {
        return None;
    }
    Rank1Povm::new(outcomes).ok()
}

// ---------------------------------------------------------------------------
// Rank-1 refinement of general POVMs
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PieceKind {
    /// alpha * I with the stored alpha.
    ScaledIdentity(f64),
    RankOne,
}

/// One outcome of the refined measurement, remembering which original
/// outcome it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedPiece {
    pub operator: QubitOperator,
    pub source: usize,
    pub kind: PieceKind,
}

/// The randomized refinement of a general POVM: each rank-2 element M is
/// split into its smaller eigenvalue times the identity plus a rank-1
/// remainder. Coarse-graining the pieces by `source` reproduces the
/// original outcome distribution on every state.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedPovm {
    pub pieces: Vec<RefinedPiece>,
}

pub fn rank1_reduce(povm: &GeneralPovm) -> Result<RefinedPovm, LoccError> {
    let mut pieces = Vec::new();
    for (source, m) in povm.elements().iter().enumerate() {
        let ((hi, v_hi), (lo, _)) = eig2(m);
        let alpha = lo.max(0.0);
        let beta = hi - alpha;
        let mut emitted = false;
        if alpha > EIGEN_CUTOFF {
            pieces.push(RefinedPiece {
                operator: QubitOperator::identity().scale(alpha),
                source,
                kind: PieceKind::ScaledIdentity(alpha),
            });
            emitted = true;
        }
        if beta > EIGEN_CUTOFF {
            pieces.push(RefinedPiece {
                operator: (v_hi * v_hi.adjoint()).scale(beta),
                source,
                kind: PieceKind::RankOne,
            });
            emitted = true;
        }
        if !emitted {
            // zero element: keep a placeholder so the source stays mapped
            pieces.push(RefinedPiece {
                operator: QubitOperator::zeros(),
                source,
                kind: PieceKind::RankOne,
            });
        }
    }
    Ok(RefinedPovm { pieces })
}

// ---------------------------------------------------------------------------
// Strategy trees
// ---------------------------------------------------------------------------

/// A one-pass adaptive strategy: a decision tree whose nodes choose a qubit
/// and a measurement and branch on the outcome. No qubit index repeats along
/// any root-to-leaf path.
#[derive(Debug, Clone, PartialEq)]
pub enum Tree<M> {
    Leaf,
    Node {
        qubit: usize,
        measurement: M,
        children: Vec<Tree<M>>,
    },
}

/// The normal form used everywhere: rank-1 measurements only.
pub type StrategyTree = Tree<Rank1Povm>;
/// Strategies over arbitrary POVMs, the input side of the rank-1 reduction.
pub type GeneralStrategyTree = Tree<GeneralPovm>;

impl<M: Measurement> Tree<M> {
    pub fn node(qubit: usize, measurement: M, children: Vec<Tree<M>>) -> Result<Self, LoccError> {
        if children.len() != measurement.outcome_count() {
            return Err(LoccError::InvalidTree(format!(
                "{} children for a {}-outcome measurement",
                children.len(),
                measurement.outcome_count()
            )));
        }
        Ok(Tree::Node {
            qubit,
            measurement,
            children,
        })
    }

    /// Checks qubit bounds, per-node child counts, and the one-pass property
    /// (no qubit repeats along any path).
    pub fn validate(&self, n: usize) -> Result<(), LoccError> {
        fn walk<M: Measurement>(t: &Tree<M>, n: usize, used: &mut Vec<bool>) -> Result<(), LoccError> {
            match t {
                Tree::Leaf => Ok(()),
                Tree::Node {
                    qubit,
                    measurement,
                    children,
                } => {
                    if *qubit >= n {
                        return Err(LoccError::Qubit(QubitError::IndexOutOfRange {
                            index: *qubit,
                            n,
                        }));
                    }
                    if used[*qubit] {
                        return Err(LoccError::InvalidTree(format!(
                            "qubit {qubit} measured twice along a path"
                        )));
                    }
                    if children.len() != measurement.outcome_count() {
                        return Err(LoccError::InvalidTree(
                            "child count differs from outcome count".into(),
                        ));
                    }
                    used[*qubit] = true;
                    for c in children {
                        walk(c, n, used)?;
                    }
                    used[*qubit] = false;
                    Ok(())
                }
            }
        }
        let mut used = vec![false; n];
        walk(self, n, &mut used)
    }

    /// Depth when all leaves sit at the same level, `None` for ragged trees.
    pub fn uniform_depth(&self) -> Option<usize> {
        match self {
            Tree::Leaf => Some(0),
            Tree::Node { children, .. } => {
                let first = children.first()?.uniform_depth()?;
                for c in &children[1..] {
                    if c.uniform_depth()? != first {
                        return None;
                    }
                }
                Some(first + 1)
            }
        }
    }

    /// Structural equality: same shape, same qubit choices, and all
    /// measurement elements entrywise within `tol`.
    pub fn structurally_equal(&self, other: &Tree<M>, tol: f64) -> bool {
        match (self, other) {
            (Tree::Leaf, Tree::Leaf) => true,
            (
                Tree::Node {
                    qubit: qa,
                    measurement: ma,
                    children: ca,
                },
                Tree::Node {
                    qubit: qb,
                    measurement: mb,
                    children: cb,
                },
            ) => {
                qa == qb
                    && elements_equal(ma, mb, tol)
                    && ca.len() == cb.len()
                    && ca
                        .iter()
                        .zip(cb)
                        .all(|(x, y)| x.structurally_equal(y, tol))
            }
            _ => false,
        }
    }

    /// The number of initial steps on which the two strategies behave
    /// identically: the largest l such that the depth-l truncations agree
    /// structurally.
    pub fn prefix_agreement(&self, other: &Tree<M>) -> usize {
        match (self, other) {
            (
                Tree::Node {
                    qubit: qa,
                    measurement: ma,
                    children: ca,
                },
                Tree::Node {
                    qubit: qb,
                    measurement: mb,
                    children: cb,
                },
            ) => {
                if qa != qb || !elements_equal(ma, mb, STRUCTURAL_EQ_TOL) || ca.len() != cb.len() {
                    return 0;
                }
                1 + ca
                    .iter()
                    .zip(cb)
                    .map(|(x, y)| x.prefix_agreement(y))
                    .min()
                    .unwrap_or(0)
            }
            _ => 0,
        }
    }
}

fn elements_equal(a: &impl Measurement, b: &impl Measurement, tol: f64) -> bool {
    if a.outcome_count() != b.outcome_count() {
        return false;
    }
    a.elements().iter().zip(b.elements()).all(|(x, y)| {
        (0..2).all(|i| (0..2).all(|j| (x[(i, j)] - y[(i, j)]).norm() <= tol))
    })
}

/// A non-adaptive strategy measuring the listed (qubit, measurement) steps
/// in order on every branch. The explicit tree is exponential in the number
/// of steps; use only at desk scale.
pub fn nonadaptive_strategy(steps: &[(usize, Rank1Povm)]) -> StrategyTree {
    match steps.split_first() {
        None => Tree::Leaf,
        Some(((qubit, m), rest)) => {
            let child = nonadaptive_strategy(rest);
            let children = vec![child; m.outcome_count()];
            Tree::Node {
                qubit: *qubit,
                measurement: m.clone(),
                children,
            }
        }
    }
}

/// sqrt(2) * 2^(-nb/2) * (nb - l), where l is the longest identical prefix
/// of the two depth-nb strategies.
pub fn strategy_distance(
    a: &StrategyTree,
    b: &StrategyTree,
    nb: usize,
) -> Result<f64, LoccError> {
    let da = a
        .uniform_depth()
        .ok_or_else(|| LoccError::InvalidTree("ragged tree".into()))?;
    let db = b
        .uniform_depth()
        .ok_or_else(|| LoccError::InvalidTree("ragged tree".into()))?;
    if da != nb || db != nb {
        return Err(LoccError::DepthMismatch(da, db, nb));
    }
    let l = a.prefix_agreement(b);
    Ok(std::f64::consts::SQRT_2 * 2f64.powf(-(nb as f64) / 2.0) * (nb - l) as f64)
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

/// Exact outcome distribution of running the strategy on a product state.
/// Every leaf path appears, including zero-probability ones.
pub fn execute_strategy<M: Measurement>(
    tree: &Tree<M>,
    state: &ProductState,
) -> Result<DistributionTable<Vec<u8>>, LoccError> {
    tree.validate(state.len())?;
    let mut entries = Vec::new();
    walk_paths(tree, state, 1.0, &mut Vec::new(), &mut entries)?;
    Ok(DistributionTable::new(entries)?)
}

fn walk_paths<M: Measurement>(
    tree: &Tree<M>,
    state: &ProductState,
    prob: f64,
    path: &mut Vec<u8>,
    out: &mut Vec<(Vec<u8>, f64)>,
) -> Result<(), LoccError> {
    match tree {
        Tree::Leaf => {
            out.push((path.clone(), prob));
            Ok(())
        }
        Tree::Node {
            qubit,
            measurement,
            children,
        } => {
            let psi = state.qubit(*qubit)?;
            for (i, (m, child)) in measurement.elements().iter().zip(children).enumerate() {
                let p = clamp_expectation(psi.expectation(m))?;
                path.push(i as u8);
                walk_paths(child, state, prob * p, path, out)?;
                path.pop();
            }
            Ok(())
        }
    }
}

/// Joint law Pr[u, z] = prior(u) * Pr[z | state_u] of the discrimination
/// game.
pub fn joint_distribution<M: Measurement>(
    tree: &Tree<M>,
    family: &[ProductState],
    prior: &DistributionTable<usize>,
) -> Result<DistributionTable<(usize, Vec<u8>)>, LoccError> {
    if family.is_empty() {
        return Err(LoccError::Qubit(QubitError::EmptyInput("state family")));
    }
    let mut entries = Vec::new();
    for (u, p_u) in prior.entries() {
        let state = family.get(*u).ok_or(QubitError::IndexOutOfRange {
            index: *u,
            n: family.len(),
        })?;
        let cond = execute_strategy(tree, state)?;
        for (z, p) in cond.entries() {
            entries.push(((*u, z.clone()), p_u * p));
        }
    }
    Ok(DistributionTable::new(entries)?)
}

/// The joint law of the refined strategy (every node measurement replaced by
/// its rank-1 reduction) together with its coarse-graining back to the
/// original outcome alphabet.
pub struct RefinedGameLaw {
    pub refined: DistributionTable<(usize, Vec<u8>)>,
    pub coarse: DistributionTable<(usize, Vec<u8>)>,
}

pub fn refined_joint_distribution(
    tree: &GeneralStrategyTree,
    family: &[ProductState],
    prior: &DistributionTable<usize>,
) -> Result<RefinedGameLaw, LoccError> {
    if family.is_empty() {
        return Err(LoccError::Qubit(QubitError::EmptyInput("state family")));
    }
    let mut refined = Vec::new();
    let mut coarse = Vec::new();
    for (u, p_u) in prior.entries() {
        let state = family.get(*u).ok_or(QubitError::IndexOutOfRange {
            index: *u,
            n: family.len(),
        })?;
        tree.validate(state.len())?;
        walk_refined(
            tree,
            state,
            *u,
            *p_u,
            &mut Vec::new(),
            &mut Vec::new(),
            &mut refined,
            &mut coarse,
        )?;
    }
    Ok(RefinedGameLaw {
        refined: DistributionTable::new(refined)?,
        coarse: DistributionTable::aggregated(coarse)?,
    })
}

#[allow(clippy::too_many_arguments)]
fn walk_refined(
    tree: &GeneralStrategyTree,
    state: &ProductState,
    u: usize,
    prob: f64,
    fine_path: &mut Vec<u8>,
    coarse_path: &mut Vec<u8>,
    refined: &mut Vec<((usize, Vec<u8>), f64)>,
    coarse: &mut Vec<((usize, Vec<u8>), f64)>,
) -> Result<(), LoccError> {
    match tree {
        Tree::Leaf => {
            refined.push(((u, fine_path.clone()), prob));
            coarse.push(((u, coarse_path.clone()), prob));
            Ok(())
        }
        Tree::Node {
            qubit,
            measurement,
            children,
        } => {
            let psi = state.qubit(*qubit)?;
            let pieces = rank1_reduce(measurement)?;
            for (i, piece) in pieces.pieces.iter().enumerate() {
                let p = clamp_expectation(psi.expectation(&piece.operator))?;
                fine_path.push(i as u8);
                coarse_path.push(piece.source as u8);
                walk_refined(
                    &children[piece.source],
                    state,
                    u,
                    prob * p,
                    fine_path,
                    coarse_path,
                    refined,
                    coarse,
                )?;
                fine_path.pop();
                coarse_path.pop();
            }
            Ok(())
        }
    }
}

/// Replaces every measurement in the tree by its nearest net member
/// (matching outcome count), keeping qubit choices and shape.
pub fn project_to_net(tree: &StrategyTree, net: &MeasurementNet) -> Result<StrategyTree, LoccError> {
    match tree {
        Tree::Leaf => Ok(Tree::Leaf),
        Tree::Node {
            qubit,
            measurement,
            children,
        } => {
            let (idx, _) = net.nearest_member(measurement).ok_or_else(|| {
                LoccError::InvalidTree("no net member with matching outcome count".into())
            })?;
            let kids = children
                .iter()
                .map(|c| project_to_net(c, net))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Tree::Node {
                qubit: *qubit,
                measurement: net.members[idx].clone(),
                children: kids,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// Number of one-pass depth-`depth` trees over `n` qubits with `net_size`
/// measurement choices of `q` outcomes each; `None` on u128 overflow.
pub fn count_strategies(n: usize, net_size: usize, q: usize, depth: usize) -> Option<u128> {
    if depth > n {
        return Some(0);
    }
    // f(d, s) = s * m * f(d-1, s-1)^q, f(0, _) = 1
    let mut f: u128 = 1;
    for d in 1..=depth {
        let s = (n - depth + d) as u128;
        let base = f.checked_pow(q as u32)?;
        f = base
            .checked_mul(s)?
            .checked_mul(net_size as u128)?;
    }
    Some(f)
}

/// Streams every one-pass tree of the given depth over (qubit, net member)
/// choices, each exactly once, in depth-first order with qubit index
/// ascending and net index ascending. Random access by index keeps
/// partitioned evaluation deterministic.
pub struct StrategyEnumeration<'a> {
    net: &'a MeasurementNet,
    n: usize,
    depth: usize,
    count: u128,
    next: u128,
    end: u128,
}

pub fn enumerate_strategies<'a>(
    n: usize,
    net: &'a MeasurementNet,
    depth: usize,
    cap: u128,
) -> Result<StrategyEnumeration<'a>, LoccError> {
    if depth > n {
        return Err(LoccError::InvalidTree(format!(
            "depth {depth} exceeds {n} qubits"
        )));
    }
    let count = count_strategies(n, net.len(), net.q, depth);
    match count {
        Some(c) if c <= cap => Ok(StrategyEnumeration {
            net,
            n,
            depth,
            count: c,
            next: 0,
            end: c,
        }),
        other => Err(LoccError::CapExceeded { count: other, cap }),
    }
}

impl<'a> StrategyEnumeration<'a> {
    pub fn total(&self) -> u128 {
        self.count
    }

    /// Restricts the stream to indices [from, to); used to partition work.
    pub fn slice(mut self, from: u128, to: u128) -> Self {
        self.next = from.min(self.count);
        self.end = to.min(self.count);
        self
    }

    fn decode(&self, mut index: u128) -> StrategyTree {
        fn build(
            index: &mut u128,
            avail: &mut Vec<usize>,
            depth: usize,
            net: &MeasurementNet,
        ) -> StrategyTree {
            if depth == 0 {
                return Tree::Leaf;
            }
            let block = subtree_count(avail.len() - 1, net.len(), net.q, depth - 1);
            let per_root = block.pow(net.q as u32);
            let option = (*index / per_root) as usize;
            *index %= per_root;
            let qubit_slot = option / net.len();
            let member = option % net.len();
            let qubit = avail.remove(qubit_slot);
            let mut children = Vec::with_capacity(net.q);
            for i in 0..net.q {
                let exp = (net.q - 1 - i) as u32;
                let digit_base = block.pow(exp);
                let mut child_index = *index / digit_base;
                *index %= digit_base;
                children.push(build(&mut child_index, avail, depth - 1, net));
            }
            avail.insert(qubit_slot, qubit);
            Tree::Node {
                qubit,
                measurement: net.members[member].clone(),
                children,
            }
        }
        let mut avail: Vec<usize> = (0..self.n).collect();
        build(&mut index, &mut avail, self.depth, self.net)
    }
}

/// f(depth, s): one-pass trees of given depth over a pool of s qubits.
fn subtree_count(s: usize, net_size: usize, q: usize, depth: usize) -> u128 {
    let mut f: u128 = 1;
    for d in 1..=depth {
        let pool = (s - depth + d) as u128;
        f = f.pow(q as u32) * pool * net_size as u128;
    }
    f
}

impl<'a> Iterator for StrategyEnumeration<'a> {
    type Item = StrategyTree;

    fn next(&mut self) -> Option<StrategyTree> {
        if self.next >= self.end {
            return None;
        }
        let tree = self.decode(self.next);
        self.next += 1;
        Some(tree)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

// ---------------------------------------------------------------------------
// Greedy search
// ---------------------------------------------------------------------------

/// Builds a full-depth strategy by locally maximizing the one-step mutual
/// information gain at each node, given the posterior conditioned on the
/// outcomes so far. Ties break toward the lowest qubit index, then the
/// lowest net-member index, so the output is deterministic. Branches of
/// probability zero inherit the parent posterior.
pub fn greedy_strategy(
    family: &[ProductState],
    prior: &DistributionTable<usize>,
    net: &MeasurementNet,
) -> Result<StrategyTree, LoccError> {
    if family.is_empty() {
        return Err(LoccError::Qubit(QubitError::EmptyInput("state family")));
    }
    let n = family[0].len();
    for s in family {
        if s.len() != n {
            return Err(LoccError::Qubit(QubitError::DimensionMismatch(
                "states of unequal length".into(),
            )));
        }
    }
    let mut posterior = vec![0.0; family.len()];
    for (u, p) in prior.entries() {
        if *u >= family.len() {
            return Err(LoccError::Qubit(QubitError::IndexOutOfRange {
                index: *u,
                n: family.len(),
            }));
        }
        posterior[*u] += *p;
    }
    let mut avail: Vec<usize> = (0..n).collect();
    Ok(greedy_node(family, &posterior, &mut avail, net))
}

fn greedy_node(
    family: &[ProductState],
    posterior: &[f64],
    avail: &mut Vec<usize>,
    net: &MeasurementNet,
) -> StrategyTree {
    if avail.is_empty() {
        return Tree::Leaf;
    }
    let mut best: Option<(usize, usize, f64)> = None; // (slot, member, gain)
    for (slot, &qubit) in avail.iter().enumerate() {
        for (mi, member) in net.members.iter().enumerate() {
            let gain = one_step_information(family, posterior, qubit, member);
            if best.map(|(_, _, g)| gain > g).unwrap_or(true) {
                best = Some((slot, mi, gain));
            }
        }
    }
    let (slot, member_idx, _) = best.expect("net is nonempty");
    let member = net.members[member_idx].clone();
    let qubit = avail.remove(slot);
    let mut children = Vec::with_capacity(member.outcome_count());
    for m in member.elements() {
        let mut branch: Vec<f64> = family
            .iter()
            .zip(posterior)
            .map(|(state, p)| p * state.qubits()[qubit].expectation(m).max(0.0))
            .collect();
        let mass: f64 = branch.iter().sum();
        if mass > 1e-15 {
            for b in branch.iter_mut() {
                *b /= mass;
            }
        } else {
            branch.copy_from_slice(posterior);
        }
        children.push(greedy_node(family, &branch, avail, net));
    }
    avail.insert(slot, qubit);
    Tree::Node {
        qubit,
        measurement: member,
        children,
    }
}

/// I(outcome; U) for a single measurement of one qubit under the current
/// posterior.
fn one_step_information(
    family: &[ProductState],
    posterior: &[f64],
    qubit: usize,
    member: &Rank1Povm,
) -> f64 {
    let eta = crate::entropy::eta;
    let mut h_u = 0.0;
    for &p in posterior {
        h_u += eta(p);
    }
    let mut h_joint = 0.0;
    let mut h_z = 0.0;
    for m in member.elements() {
        let mut pz = 0.0;
        for (state, &p) in family.iter().zip(posterior) {
            if p <= 0.0 {
                continue;
            }
            let w = p * state.qubits()[qubit].expectation(m).max(0.0);
            h_joint += eta(w);
            pz += w;
        }
        h_z += eta(pz);
    }
    h_u + h_z - h_joint
}

// ---------------------------------------------------------------------------
// Outcome enumeration
// ---------------------------------------------------------------------------

/// The distinct outcome operators appearing across all members of a net,
/// deduplicated entrywise at 1e-9.
pub fn distinct_net_elements(net: &MeasurementNet) -> Vec<QubitOperator> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for member in &net.members {
        for m in member.elements() {
            let key: Vec<i64> = [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
                .iter()
                .flat_map(|z| [(z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64])
                .collect();
            if seen.insert(key) {
                out.push(*m);
            }
        }
    }
    out
}

/// Iterates every tensor outcome assigning one of `elements` to each qubit
/// of `subset`.
pub fn enumerate_outcome_records<'a>(
    elements: &'a [QubitOperator],
    subset: &'a [usize],
) -> impl Iterator<Item = OutcomeRecord> + 'a {
    let base = elements.len();
    let total: usize = base.checked_pow(subset.len() as u32).unwrap_or(0);
    (0..total).map(move |mut idx| {
        let ops: Vec<(usize, QubitOperator)> = subset
            .iter()
            .map(|&qubit| {
                let pick = idx % base;
                idx /= base;
                (qubit, elements[pick])
            })
            .collect();
        OutcomeRecord::new(ops).expect("net elements satisfy the outcome invariants")
    })
}

// ---------------------------------------------------------------------------
// Net serialization
// ---------------------------------------------------------------------------

fn fmt_f64(x: f64) -> String {
    // Shortest representation that round-trips exactly.
    format!("{x}")
}

/// Writes the net as structured text: q, epsilon, member count, then each
/// member as q matrices of two [[re,im],[re,im]] rows. Round-trips
/// bit-exactly.
pub fn write_net(net: &MeasurementNet, w: &mut impl Write) -> Result<(), LoccError> {
    writeln!(w, "q {}", net.q)?;
    writeln!(w, "epsilon {}", fmt_f64(net.epsilon))?;
    writeln!(w, "members {}", net.members.len())?;
    for member in &net.members {
        writeln!(w, "member")?;
        for m in member.elements() {
            for row in 0..2 {
                writeln!(
                    w,
                    "[[{},{}],[{},{}]]",
                    fmt_f64(m[(row, 0)].re),
                    fmt_f64(m[(row, 0)].im),
                    fmt_f64(m[(row, 1)].re),
                    fmt_f64(m[(row, 1)].im)
                )?;
            }
        }
    }
    Ok(())
}

fn parse_row(line: &str, lineno: usize) -> Result<[Complex64; 2], LoccError> {
    let inner = line
        .trim()
        .strip_prefix("[[")
        .and_then(|s| s.strip_suffix("]]"))
        .ok_or_else(|| LoccError::Parse {
            line: lineno,
            msg: "expected [[re,im],[re,im]]".into(),
        })?;
    let parts: Vec<&str> = inner.split("],[").collect();
    if parts.len() != 2 {
        return Err(LoccError::Parse {
            line: lineno,
            msg: "expected two complex entries".into(),
        });
    }
    let mut out = [Complex64::new(0.0, 0.0); 2];
    for (i, p) in parts.iter().enumerate() {
        let nums: Vec<&str> = p.split(',').collect();
        if nums.len() != 2 {
            return Err(LoccError::Parse {
                line: lineno,
                msg: "complex entry needs re,im".into(),
            });
        }
        let re: f64 = nums[0].parse().map_err(|_| LoccError::Parse {
            line: lineno,
            msg: format!("bad float {:?}", nums[0]),
        })?;
        let im: f64 = nums[1].parse().map_err(|_| LoccError::Parse {
            line: lineno,
            msg: format!("bad float {:?}", nums[1]),
        })?;
        out[i] = Complex64::new(re, im);
    }
    Ok(out)
}

/// Reads a net written by [`write_net`].
pub fn read_net(r: &mut impl BufRead) -> Result<MeasurementNet, LoccError> {
    fn take(lines: &[String], pos: &mut usize, prefix: &str) -> Result<String, LoccError> {
        let line = lines.get(*pos).ok_or(LoccError::Parse {
            line: *pos + 1,
            msg: "unexpected end of file".into(),
        })?;
        *pos += 1;
        line.strip_prefix(prefix)
            .map(|s| s.trim().to_string())
            .ok_or_else(|| LoccError::Parse {
                line: *pos,
                msg: format!("expected {prefix:?}"),
            })
    }
    let lines: Vec<String> = r.lines().collect::<Result<_, _>>()?;
    let mut pos = 0usize;
    let q: usize = take(&lines, &mut pos, "q ")?
        .parse()
        .map_err(|_| LoccError::Parse {
            line: 1,
            msg: "bad q".into(),
        })?;
    let epsilon: f64 = take(&lines, &mut pos, "epsilon ")?
        .parse()
        .map_err(|_| LoccError::Parse {
            line: 2,
            msg: "bad epsilon".into(),
        })?;
    let count: usize = take(&lines, &mut pos, "members ")?
        .parse()
        .map_err(|_| LoccError::Parse {
            line: 3,
            msg: "bad member count".into(),
        })?;
    let mut members = Vec::with_capacity(count);
    for _ in 0..count {
        take(&lines, &mut pos, "member")?;
        let mut outcomes = Vec::with_capacity(q);
        for _ in 0..q {
            let r0 = parse_row(take(&lines, &mut pos, "")?.as_str(), pos)?;
            let r1 = parse_row(take(&lines, &mut pos, "")?.as_str(), pos)?;
            outcomes.push(QubitOperator::new(r0[0], r0[1], r1[0], r1[1]));
        }
        members.push(Rank1Povm::new(outcomes)?);
    }
    Ok(MeasurementNet {
        epsilon,
        q,
        members,
    })
}
