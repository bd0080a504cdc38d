//! Tabular dynamic programming with Tsallis entropy and Tsallis KL
//! regularization.
//!
//! The crate is organized around the deformed-logarithm calculus:
//!
//! - [`qmath`] — q-logarithm, q-exponential, Tsallis entropy, Tsallis KL
//!   divergence, and the algebraic identities relating them.
//! - [`policy`] — regularized greedy policies built from Q-value rows:
//!   softmax, exact sparsemax, first-order approximate policies for general
//!   entropic index, and the Tsallis-KL greedy step.
//! - [`mdp`] — finite MDPs, Bellman operators, regularized backups, exact
//!   policy evaluation, and the JSON file format.
//! - [`solvers`] — the value-iteration family: regularized VI, MVI(q),
//!   Tsallis-VI, MVI, CVI, and the naive deformed-logarithm substitution
//!   baseline, each producing a per-iteration trace.
//! - [`oracles`] — slow, independent reference implementations (simplex
//!   maximization, support enumeration, scalar identity checks) used to
//!   validate the closed forms above.
//! - [`envs`] — seeded generators for benchmark MDPs (chain, gridworld,
//!   cliff, random).
//!
//! Everything is plain `f64` and dense `Vec` storage; the intended scale is
//! small enough that exactness and auditability beat throughput.

pub mod envs;
pub mod error;
pub mod mdp;
pub mod oracles;
pub mod policy;
pub mod qmath;
pub mod solvers;

pub use error::Error;
pub use mdp::{PolicyTable, QTable, TabularMdp};
pub use qmath::{EntropicIndex, ProbVector};
pub use solvers::{Algorithm, IterationTrace, SolverConfig, SolverOutput};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
