//! Independent reference implementations.
//!
//! Everything here is deliberately slow and simple: exhaustive enumeration,
//! generic ascent, explicit subset sums. These are the arbiters the closed
//! forms in [`crate::policy`] and the recursions in [`crate::solvers`] are
//! tested against, so they must not share code with the paths they check.

use rand_core::{RngCore, SeedableRng};

use crate::error::Error;
use crate::mdp::QTable;
use crate::policy::{softmax_policy, sorted_desc_indices, SupportSet};
use crate::qmath::{q_exp_unchecked, q_exp_unclipped, EntropicIndex, ProbVector};
use crate::Result;

/// A concave objective on the probability simplex with an analytic gradient.
pub trait SimplexObjective {
    fn value(&self, pi: &[f64]) -> f64;
    fn gradient(&self, pi: &[f64], out: &mut [f64]);
}

/// Result of [`simplex_maximize`].
#[derive(Debug, Clone)]
pub struct SimplexOptResult {
    pub argmax: ProbVector,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

const MAX_ASCENT_ITERS: usize = 50_000;

/// Maximize a concave objective over the probability simplex by
/// exponentiated-gradient ascent with backtracking.
///
/// Convergence is declared when the linearization gap
/// `max_a g(a) - <pi, g>` drops below `tol`; for a concave objective this
/// gap bounds the suboptimality. The returned point is additionally
/// certified against 20 seeded random vertex-mixture perturbations, none of
/// which may improve the objective by more than `tol`. Non-convergence is an
/// error, never a silent result.
pub fn simplex_maximize(
    objective: &dyn SimplexObjective,
    dim: usize,
    tol: f64,
) -> Result<SimplexOptResult> {
    if dim == 0 {
        return Err(Error::domain("simplex_maximize", "dimension must be positive"));
    }
    let mut pi = vec![1.0 / dim as f64; dim];
    let mut grad = vec![0.0; dim];
    let mut value = objective.value(&pi);
    let mut step = 1.0;
    let mut iterations = 0;
    let mut gap = f64::INFINITY;

    while iterations < MAX_ASCENT_ITERS {
        iterations += 1;
        objective.gradient(&pi, &mut grad);
        let expected: f64 = pi.iter().zip(&grad).map(|(p, g)| p * g).sum();
        gap = grad.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - expected;
        if gap < tol {
            break;
        }

        // Multiplicative update pi <- pi exp(step * g) / Z, with the
        // exponent recentered for overflow safety and the step backtracked
        // until the objective does not decrease.
        let mut accepted = false;
        for _ in 0..80 {
            let m = grad.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut candidate: Vec<f64> = pi
                .iter()
                .zip(&grad)
                .map(|(&p, &g)| p * (step * (g - m)).exp())
                .collect();
            let z: f64 = candidate.iter().sum();
            if z > 0.0 && z.is_finite() {
                for c in &mut candidate {
                    *c /= z;
                }
                let cand_value = objective.value(&candidate);
                if cand_value >= value {
                    pi = candidate;
                    value = cand_value;
                    step *= 1.5;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
            if step < 1e-18 {
                break;
            }
        }
        if !accepted {
            break;
        }
    }

    let converged = gap < tol;
    if !converged {
        return Err(Error::OptimizerNonConvergence { iterations, residual: gap, tol });
    }

    // Perturbation certificate: mixing toward any vertex must not help.
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x7ab1e5);
    for _ in 0..20 {
        let vertex = (rng.next_u64() % dim as u64) as usize;
        let eps = 1e-4 * (1.0 + (rng.next_u64() % 9) as f64);
        let mut perturbed: Vec<f64> = pi.iter().map(|&p| (1.0 - eps) * p).collect();
        perturbed[vertex] += eps;
        let pv = objective.value(&perturbed);
        if pv > value + tol {
            return Err(Error::OptimizerNonConvergence {
                iterations,
                residual: pv - value,
                tol,
            });
        }
    }

    Ok(SimplexOptResult {
        argmax: ProbVector::normalized(pi)?,
        objective: value,
        iterations,
        converged,
    })
}

/// Sparsemax by exhaustive support enumeration: for every candidate support
/// size over the descending sort, compute the induced normalization and
/// policy, and demand exactly one feasible candidate (all retained actions
/// strictly positive, all excluded actions at or below zero).
pub fn sparsemax_by_enumeration(row: &[f64], tau: f64) -> Result<(ProbVector, SupportSet)> {
    if row.len() > 20 {
        return Err(Error::domain(
            "sparsemax_by_enumeration",
            format!("enumeration is limited to 20 actions, got {}", row.len()),
        ));
    }
    if !(tau > 0.0) {
        return Err(Error::domain("sparsemax_by_enumeration", "tau must be > 0"));
    }
    let order = sorted_desc_indices(row);
    let t: Vec<f64> = order.iter().map(|&a| row[a] / (2.0 * tau)).collect();

    let mut feasible: Vec<(usize, f64)> = Vec::new();
    for size in 1..=t.len() {
        let psi = (t[..size].iter().sum::<f64>() - 1.0) / size as f64;
        let included_ok = t[..size].iter().all(|&v| v - psi > 0.0);
        let excluded_ok = t[size..].iter().all(|&v| v - psi <= 0.0);
        if included_ok && excluded_ok {
            feasible.push((size, psi));
        }
    }
    if feasible.len() != 1 {
        return Err(Error::CrossCheck {
            op: "sparsemax_by_enumeration",
            msg: format!(
                "expected exactly one feasible support, found {} for row {row:?} at tau {tau}",
                feasible.len()
            ),
        });
    }
    let (size, psi) = feasible[0];
    let mut weights = vec![0.0; row.len()];
    for j in 0..size {
        weights[order[j]] = t[j] - psi;
    }
    let pi = ProbVector::new(weights.clone()).or_else(|_| ProbVector::normalized(weights))?;
    let support = SupportSet {
        indices: order[..size].to_vec(),
        sorted_values: order[..size].iter().map(|&a| row[a]).collect(),
    };
    Ok((pi, support))
}

/// Closed-form oracle for KL-to-previous regularized iteration: after k
/// updates the policy is the softmax of the accumulated action values,
/// `softmax(tau^-1 sum_j Q_j)`.
pub fn kl_average_policy(q_history: &[QTable], tau: f64, state: usize) -> Result<ProbVector> {
    let first = q_history
        .first()
        .ok_or_else(|| Error::domain("kl_average_policy", "empty Q history"))?;
    let mut acc = vec![0.0; first.n_actions()];
    for q in q_history {
        for (a, slot) in acc.iter_mut().enumerate() {
            *slot += q.get(state, a);
        }
    }
    softmax_policy(&acc, tau)
}

/// Telescoped weighted-average identity of the q-exponential:
///
/// ```text
/// exp_q(sum_i Q_i) = exp_q(Q_1) * prod_{j>=2} exp_q(Q_j / (1 + (q-1) sum_{i<j} Q_i))
/// ```
///
/// Returns the absolute difference of the two sides. Every prefix must stay
/// on the unclipped branch.
pub fn weighted_average_identity_check(q_values: &[f64], q: EntropicIndex) -> Result<f64> {
    let qv = q.finite_value().ok_or(Error::UnsupportedIndex {
        op: "weighted_average_identity_check",
        q: "inf".into(),
    })?;
    if qv == 1.0 {
        return Err(Error::precondition(
            "weighted_average_identity_check",
            "q must differ from 1 (at q = 1 the identity is plain exponent addition)",
        ));
    }
    if q_values.is_empty() {
        return Err(Error::domain("weighted_average_identity_check", "empty value list"));
    }
    let mut prefix = 0.0;
    for (i, &v) in q_values.iter().enumerate() {
        prefix += v;
        if !q_exp_unclipped(prefix, qv) {
            return Err(Error::precondition(
                "weighted_average_identity_check",
                format!("prefix sum through index {i} leaves the unclipped branch"),
            ));
        }
    }

    let total: f64 = q_values.iter().sum();
    let lhs = q_exp_unchecked(total, qv);

    let mut rhs = q_exp_unchecked(q_values[0], qv);
    let mut before = q_values[0];
    for &v in &q_values[1..] {
        rhs *= q_exp_unchecked(v / (1.0 + (qv - 1.0) * before), qv);
        before += v;
    }
    Ok((lhs - rhs).abs())
}

/// Product-expansion identity of the q-exponential: the (q-1)-th power of
/// the product `prod_j exp_q(Q_j)` equals the same power of `exp_q(sum Q_j)`
/// plus interaction terms `(q-1)^j` times the elementary symmetric sums of
/// the values, here evaluated by explicit subset enumeration (k <= 6).
///
/// Returns the signed defect between the two sides.
pub fn product_expansion_defect(q_values: &[f64], q: EntropicIndex) -> Result<f64> {
    let qv = q.finite_value().ok_or(Error::UnsupportedIndex {
        op: "product_expansion_defect",
        q: "inf".into(),
    })?;
    if qv == 1.0 {
        return Err(Error::precondition(
            "product_expansion_defect",
            "q must differ from 1",
        ));
    }
    let k = q_values.len();
    if k == 0 || k > 6 {
        return Err(Error::domain(
            "product_expansion_defect",
            format!("subset enumeration supports 1..=6 values, got {k}"),
        ));
    }
    for (i, &v) in q_values.iter().enumerate() {
        if !q_exp_unclipped(v, qv) {
            return Err(Error::precondition(
                "product_expansion_defect",
                format!("value {i} lies on the clipped branch"),
            ));
        }
    }
    let total: f64 = q_values.iter().sum();
    if !q_exp_unclipped(total, qv) {
        return Err(Error::precondition(
            "product_expansion_defect",
            "the value sum lies on the clipped branch",
        ));
    }

    let qm1 = qv - 1.0;
    let product: f64 = q_values.iter().map(|&v| q_exp_unchecked(v, qv)).product();
    let lhs = product.powf(qm1);

    // Interaction terms: for each subset size j >= 2, the sum over strictly
    // increasing index tuples of the value products, compensated because the
    // subset count grows combinatorially.
    let mut rhs = q_exp_unchecked(total, qv).powf(qm1);
    for j in 2..=k {
        let mut sum = KahanSum::default();
        enumerate_products(q_values, j, 0, 1.0, &mut sum);
        rhs += qm1.powi(j as i32) * sum.value();
    }
    Ok(lhs - rhs)
}

fn enumerate_products(values: &[f64], remaining: usize, start: usize, acc: f64, sum: &mut KahanSum) {
    if remaining == 0 {
        sum.add(acc);
        return;
    }
    for i in start..=values.len().saturating_sub(remaining) {
        enumerate_products(values, remaining - 1, i + 1, acc * values[i], sum);
    }
}

/// Compensated (Kahan) accumulator.
#[derive(Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, v: f64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}
