//! Exact desk-scale simulation of information hiding in the isolated-qubits
//! model: product states over individually addressable qubits, one-pass LOCC
//! measurement strategies, conjugate-coded one-time memories, and the entropy
//! accounting used to quantify what an adversary can and cannot extract.
//!
//! Everything is computed with dense complex linear algebra at dimensions up
//! to 2^14, so every quantity here is exact up to floating-point rounding;
//! there are no truncations or variational approximations. Randomized
//! constructions (ensembles, codes) are deterministic functions of a 64-bit
//! seed.
//!
//! Module map:
//! - [`qubit`]: single-qubit states, product states, Hermitian operators,
//!   distribution tables, and the dense reductions built from them.
//! - [`locc`]: rank-1 POVMs, measurement nets, and one-pass adaptive
//!   strategy trees (construction, execution, discretization, enumeration).
//! - [`entropy`]: Shannon/collision/min entropies and the closed-form bounds
//!   relating them.
//! - [`codes`]: random binary codes, the induced symmetric channel, and
//!   bounded-distance / nearest-codeword decoding.
//! - [`hiding`]: the random product-state ensemble, the pretty good
//!   measurement, and the discrimination game.
//! - [`otm`]: conjugate-coded one-time memory devices, honest recovery,
//!   the computational-basis leak, and information decompositions.
//! - [`oracle`]: independent reference implementations used to cross-check
//!   the fast paths, plus randomized instance generators.

pub mod codes;
pub mod entropy;
pub mod hiding;
pub mod locc;
pub mod oracle;
pub mod otm;
pub mod qubit;
