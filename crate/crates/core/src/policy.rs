//! Regularized greedy policies over a single row of Q-values.
//!
//! Each constructor maps a slice of action values to a distribution:
//!
//! - [`softmax_policy`] — Shannon-entropy regularization (q = 1).
//! - [`sparsemax_policy`] — exact closed form for q = 2; zeroes out the
//!   lowest-valued actions and divides the shifted values among the rest.
//! - [`taylor_policy`] — first-order approximation for general finite q,
//!   where the normalization has no closed form.
//! - [`greedy_policy`] — the q = inf limit (no regularization).
//! - [`tkl_greedy_policy`] — the Tsallis-KL regularized greedy step toward a
//!   prior policy, solved numerically on the simplex.
//!
//! All constructors are pure and deterministic: descending value ties break
//! toward the lower action index.

use crate::error::Error;
use crate::oracles::{simplex_maximize, SimplexObjective};
use crate::qmath::{
    self, q_log_unchecked, tsallis_kl, EntropicIndex, IndexClass, ProbVector, SUPPORT_EPS,
};
use crate::Result;

/// The set of actions retained by a sparsemax-family policy, in descending
/// value order.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSet {
    /// Action indices, ordered by descending Q-value (ties by ascending index).
    pub indices: Vec<usize>,
    /// The Q-values at those indices, descending.
    pub sorted_values: Vec<f64>,
}

impl SupportSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Set-wise equality, ignoring order.
    pub fn same_actions(&self, other: &SupportSet) -> bool {
        let mut a = self.indices.clone();
        let mut b = other.indices.clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }
}

/// Parameters of a Tsallis-family policy.
#[derive(Debug, Clone, Copy)]
pub struct PolicySpec {
    pub q: EntropicIndex,
    /// Regularization coefficient, > 0.
    pub tau: f64,
    /// Scale parameter of the approximate (Taylor) policy family.
    pub p: f64,
}

impl PolicySpec {
    pub fn new(q: EntropicIndex, tau: f64, p: f64) -> Result<PolicySpec> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::domain("PolicySpec", format!("tau must be > 0, got {tau}")));
        }
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::domain("PolicySpec", format!("p must be > 0, got {p}")));
        }
        Ok(PolicySpec { q, tau, p })
    }

    /// Default scale parameter p = 1/2.
    pub fn with_default_p(q: EntropicIndex, tau: f64) -> Result<PolicySpec> {
        PolicySpec::new(q, tau, 0.5)
    }
}

/// Overflow-safe log-sum-exp.
pub fn logsumexp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.iter().map(|&x| (x - m).exp()).sum::<f64>().ln()
}

/// Action indices sorted by descending value, ties toward the lower index.
pub fn sorted_desc_indices(row: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| {
        row[b]
            .partial_cmp(&row[a])
            .expect("Q-values must be comparable (no NaN)")
            .then(a.cmp(&b))
    });
    order
}

/// Boltzmann policy `pi(a) = exp(Q(a)/tau) / Z`.
pub fn softmax_policy(row: &[f64], tau: f64) -> Result<ProbVector> {
    if !(tau > 0.0) {
        return Err(Error::domain("softmax_policy", format!("tau must be > 0, got {tau}")));
    }
    let scaled: Vec<f64> = row.iter().map(|&v| v / tau).collect();
    let lse = logsumexp(&scaled);
    let weights: Vec<f64> = scaled.iter().map(|&v| (v - lse).exp()).collect();
    ProbVector::normalized(weights)
}

/// Which comparison the sparsemax support rule uses at the boundary.
///
/// The closed form requires the strict rule; the non-strict variant admits
/// boundary actions that then carry exactly zero probability. It exists so
/// the verification suite can inject a detectable fault and prove the
/// support cross-checks are alive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportBoundary {
    Strict,
    NonStrict,
}

/// Sparsemax policy: the exact maximizer of `<pi, Q> + tau * S_2(pi)`.
///
/// With `t(a) = Q(a)/(2 tau)` and `S` the largest prefix of the descending
/// sort satisfying `1 + i t(a_(i)) > sum_{j<=i} t(a_(j))`, the policy is
/// `pi(a) = [t(a) - psi]_+` with `psi = (sum_{a in S} t(a) - 1)/|S|`.
/// Excluded actions receive exactly zero.
pub fn sparsemax_policy(row: &[f64], tau: f64) -> Result<(ProbVector, SupportSet, f64)> {
    sparsemax_policy_with_boundary(row, tau, SupportBoundary::Strict)
}

/// [`sparsemax_policy`] with an explicit boundary rule; see [`SupportBoundary`].
pub fn sparsemax_policy_with_boundary(
    row: &[f64],
    tau: f64,
    boundary: SupportBoundary,
) -> Result<(ProbVector, SupportSet, f64)> {
    if !(tau > 0.0) {
        return Err(Error::domain("sparsemax_policy", format!("tau must be > 0, got {tau}")));
    }
    if row.is_empty() {
        return Err(Error::domain("sparsemax_policy", "empty action row"));
    }
    let order = sorted_desc_indices(row);
    let t: Vec<f64> = order.iter().map(|&a| row[a] / (2.0 * tau)).collect();

    let mut support_size = 1;
    let mut cumsum = t[0];
    for i in 2..=t.len() {
        cumsum += t[i - 1];
        let lhs = 1.0 + i as f64 * t[i - 1];
        let keep = match boundary {
            SupportBoundary::Strict => lhs > cumsum,
            SupportBoundary::NonStrict => lhs >= cumsum,
        };
        if keep {
            support_size = i;
        }
    }

    let support_sum: f64 = t[..support_size].iter().sum();
    let psi = (support_sum - 1.0) / support_size as f64;

    let mut weights = vec![0.0; row.len()];
    for j in 0..support_size {
        weights[order[j]] = (t[j] - psi).max(0.0);
    }
    let pi = ProbVector::new(weights.clone()).or_else(|_| ProbVector::normalized(weights))?;

    let support = SupportSet {
        indices: order[..support_size].to_vec(),
        sorted_values: order[..support_size].iter().map(|&a| row[a]).collect(),
    };
    Ok((pi, support, psi))
}

/// Output of [`taylor_policy`].
#[derive(Debug, Clone)]
pub struct TaylorPolicy {
    pub pi: ProbVector,
    pub support: SupportSet,
    pub psi_tilde: f64,
    /// `|sum of clipped raw values - 1|` before the final renormalization;
    /// nonzero exactly when the linearization left the simplex.
    pub renormalization_defect: f64,
}

/// First-order approximate Tsallis policy for general finite q != 1.
///
/// With `t(a) = Q(a)/(q tau)` and `c = p - p/(q-1)`, the support is the
/// largest prefix with `p + i t(a_(i)) >= sum_{j<=i} t(a_(j)) + i c`
/// (extended across exact value ties so equal actions are treated equally),
/// the normalization is `psi~ = (sum_S t - p)/|S| + c`, and the raw policy
/// values `1 + ((t(a) - psi~)(q-1)/p - 1)/(q-1)` are clipped to [0, 1] and
/// renormalized.
pub fn taylor_policy(row: &[f64], spec: &PolicySpec) -> Result<TaylorPolicy> {
    let q = match spec.q.classify() {
        IndexClass::IsOne => {
            return Err(Error::UnsupportedIndex { op: "taylor_policy", q: "1".into() })
        }
        IndexClass::IsInfinity => {
            return Err(Error::UnsupportedIndex { op: "taylor_policy", q: "inf".into() })
        }
        IndexClass::IsTwo => 2.0,
        IndexClass::IsFinite(v) => v,
    };
    if row.is_empty() {
        return Err(Error::domain("taylor_policy", "empty action row"));
    }
    let (tau, p) = (spec.tau, spec.p);
    let order = sorted_desc_indices(row);
    let t: Vec<f64> = order.iter().map(|&a| row[a] / (q * tau)).collect();
    let c = p - p / (q - 1.0);

    let mut support_size = 1;
    let mut cumsum = t[0];
    for i in 2..=t.len() {
        cumsum += t[i - 1];
        if p + i as f64 * t[i - 1] >= cumsum + i as f64 * c {
            support_size = i;
        }
    }
    // The membership rule is not tie-monotone for q > 2, so a boundary that
    // splits a block of exactly equal values would treat equal actions
    // unequally. Extend across the tie block.
    while support_size < t.len() && t[support_size] == t[support_size - 1] {
        support_size += 1;
    }

    let support_sum: f64 = t[..support_size].iter().sum();
    let psi_tilde = (support_sum - p) / support_size as f64 + c;

    let mut weights = vec![0.0; row.len()];
    let mut clipped_sum = 0.0;
    for j in 0..support_size {
        let raw = 1.0 + ((t[j] - psi_tilde) * (q - 1.0) / p - 1.0) / (q - 1.0);
        let clipped = raw.clamp(0.0, 1.0);
        weights[order[j]] = clipped;
        clipped_sum += clipped;
    }
    let renormalization_defect = (clipped_sum - 1.0).abs();
    let pi = if clipped_sum > 0.0 {
        ProbVector::normalized(weights)?
    } else {
        ProbVector::one_hot(row.len(), order[0])
    };

    let support = SupportSet {
        indices: order[..support_size].to_vec(),
        sorted_values: order[..support_size].iter().map(|&a| row[a]).collect(),
    };
    Ok(TaylorPolicy { pi, support, psi_tilde, renormalization_defect })
}

/// Unregularized greedy policy: one-hot at the argmax, ties toward the
/// lowest index.
pub fn greedy_policy(row: &[f64]) -> ProbVector {
    assert!(!row.is_empty(), "greedy_policy on empty row");
    ProbVector::one_hot(row.len(), qmath::argmax_index(row))
}

/// The regularized greedy policy for a [`PolicySpec`]: softmax at q = 1,
/// sparsemax at q = 2, greedy at q = inf, Taylor policy otherwise.
pub fn tsallis_greedy_policy(row: &[f64], spec: &PolicySpec) -> Result<ProbVector> {
    match spec.q.classify() {
        IndexClass::IsOne => softmax_policy(row, spec.tau),
        IndexClass::IsTwo => Ok(sparsemax_policy(row, spec.tau)?.0),
        IndexClass::IsInfinity => Ok(greedy_policy(row)),
        IndexClass::IsFinite(_) => Ok(taylor_policy(row, spec)?.pi),
    }
}

/// Exact maximizer of `<pi, Q> - tau * D_2(pi || prior)` restricted to the
/// prior's support: `pi(a) = prior(a) [(Q(a) - lambda)/(2 tau)]_+` with the
/// threshold `lambda` fixed by the unit-sum constraint.
pub fn tkl_greedy_closed_form_q2(row: &[f64], prior: &ProbVector, tau: f64) -> Result<ProbVector> {
    if row.len() != prior.len() {
        return Err(Error::shape(
            "tkl_greedy_closed_form_q2",
            format!("{}", prior.len()),
            format!("{}", row.len()),
        ));
    }
    let mut candidates: Vec<usize> = (0..row.len())
        .filter(|&a| prior.get(a) > SUPPORT_EPS)
        .collect();
    if candidates.is_empty() {
        return Err(Error::domain("tkl_greedy_closed_form_q2", "prior has empty support"));
    }
    candidates.sort_by(|&a, &b| {
        row[b]
            .partial_cmp(&row[a])
            .expect("Q-values must be comparable (no NaN)")
            .then(a.cmp(&b))
    });

    // Grow the support while the incoming action clears the threshold.
    let mut mass = 0.0;
    let mut weighted_q = 0.0;
    let mut lambda = f64::NEG_INFINITY;
    let mut size = 0;
    for (i, &a) in candidates.iter().enumerate() {
        let mass_next = mass + prior.get(a);
        let weighted_next = weighted_q + prior.get(a) * row[a];
        let lambda_next = (weighted_next - 2.0 * tau) / mass_next;
        if i == 0 || row[a] > lambda_next {
            mass = mass_next;
            weighted_q = weighted_next;
            lambda = lambda_next;
            size = i + 1;
        } else {
            break;
        }
    }

    let mut weights = vec![0.0; row.len()];
    for &a in &candidates[..size] {
        weights[a] = prior.get(a) * ((row[a] - lambda) / (2.0 * tau)).max(0.0);
    }
    ProbVector::normalized(weights)
}

/// Greedy step of Tsallis-KL regularized iteration: maximizes
/// `<pi, Q> - tau * D_q(pi || prior)` over the simplex, restricted to the
/// prior's support (off-support actions have infinite divergence).
///
/// The maximizer is found numerically by exponentiated-gradient ascent; for
/// q = 2 the closed-form candidate is computed as well and the two must
/// agree within 1e-6 total variation.
pub fn tkl_greedy_policy(
    row: &[f64],
    prior: &ProbVector,
    tau: f64,
    q: EntropicIndex,
) -> Result<ProbVector> {
    let qv = q
        .finite_value()
        .ok_or(Error::UnsupportedIndex { op: "tkl_greedy_policy", q: "inf".into() })?;
    if !(tau > 0.0) {
        return Err(Error::domain("tkl_greedy_policy", format!("tau must be > 0, got {tau}")));
    }
    if row.len() != prior.len() {
        return Err(Error::shape(
            "tkl_greedy_policy",
            format!("{}", prior.len()),
            format!("{}", row.len()),
        ));
    }

    let support: Vec<usize> = (0..row.len())
        .filter(|&a| prior.get(a) > SUPPORT_EPS)
        .collect();
    if support.is_empty() {
        return Err(Error::domain("tkl_greedy_policy", "prior has empty support"));
    }
    let sub_q: Vec<f64> = support.iter().map(|&a| row[a]).collect();
    let sub_mu: Vec<f64> = support.iter().map(|&a| prior.get(a)).collect();

    let objective = TklObjective { q: qv, tau, values: &sub_q, prior: &sub_mu };
    let result = simplex_maximize(&objective, sub_q.len(), 1e-8)?;

    let mut weights = vec![0.0; row.len()];
    for (j, &a) in support.iter().enumerate() {
        weights[a] = result.argmax.get(j);
    }
    let pi = ProbVector::normalized(weights)?;

    if q.classify() == IndexClass::IsTwo {
        let candidate = tkl_greedy_closed_form_q2(row, prior, tau)?;
        let tv = pi.total_variation(&candidate);
        if tv > 1e-6 {
            return Err(Error::CrossCheck {
                op: "tkl_greedy_policy",
                msg: format!(
                    "optimizer and closed form disagree by {tv:.3e} total variation (tol 1e-6)"
                ),
            });
        }
    }
    Ok(pi)
}

/// `<pi, Q> - tau D_q(pi || mu)` with its gradient, on the restricted simplex.
struct TklObjective<'a> {
    q: f64,
    tau: f64,
    values: &'a [f64],
    prior: &'a [f64],
}

impl SimplexObjective for TklObjective<'_> {
    fn value(&self, pi: &[f64]) -> f64 {
        let mut obj = 0.0;
        for ((&p, &qv), &mu) in pi.iter().zip(self.values).zip(self.prior) {
            obj += p * qv;
            if p > 0.0 {
                obj -= self.tau * p * q_log_unchecked(p / mu, self.q);
            }
        }
        obj
    }

    fn gradient(&self, pi: &[f64], out: &mut [f64]) {
        // d/dp [p ln_q(p/mu)] = ln_q(p/mu) + (p/mu)^(q-1)
        for (i, ((&p, &qv), &mu)) in pi.iter().zip(self.values).zip(self.prior).enumerate() {
            let ratio = (p / mu).max(1e-300);
            let lq = q_log_unchecked(ratio, self.q);
            let pow = if self.q == 1.0 { 1.0 } else { (self.q - 1.0) * lq + 1.0 };
            out[i] = qv - self.tau * (lq + pow);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn softmax_reference_cases() {
        let pi = softmax_policy(&[3.0, 3.0, 3.0], 0.7).unwrap();
        assert_close(pi.weights(), &[1.0 / 3.0; 3], 1e-15);

        let e = std::f64::consts::E;
        let pi = softmax_policy(&[1.0, 0.0], 1.0).unwrap();
        assert_close(pi.weights(), &[e / (e + 1.0), 1.0 / (e + 1.0)], 1e-15);

        // Overflow safety.
        let pi = softmax_policy(&[1e6, 0.0], 1e-3).unwrap();
        assert!(pi.get(0) > 0.999_999);
    }

    #[test]
    fn sparsemax_reference_cases() {
        let (pi, support, psi) = sparsemax_policy(&[3.0, 1.0, 0.0], 1.0).unwrap();
        assert_eq!(pi.weights(), &[1.0, 0.0, 0.0]);
        assert_eq!(support.indices, vec![0]);
        assert_eq!(psi, 0.5);

        let (pi, support, _) = sparsemax_policy(&[2.0, 2.0, 2.0, 2.0], 1.0).unwrap();
        assert_close(pi.weights(), &[0.25; 4], 1e-15);
        assert_eq!(support.len(), 4);
    }

    #[test]
    fn sparsemax_translation_invariance() {
        let row = [0.3, -1.2, 2.5, 0.8];
        let shifted: Vec<f64> = row.iter().map(|v| v + 17.25).collect();
        let (a, sa, _) = sparsemax_policy(&row, 0.7).unwrap();
        let (b, sb, _) = sparsemax_policy(&shifted, 0.7).unwrap();
        assert!(sa.same_actions(&sb));
        assert_close(a.weights(), b.weights(), 1e-10);
    }

    #[test]
    fn sparsemax_small_tau_concentrates() {
        let (pi, support, _) = sparsemax_policy(&[0.4, 0.9, 0.1], 1e-6).unwrap();
        assert_eq!(support.indices, vec![1]);
        assert_eq!(pi.weights(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn greedy_reference_cases() {
        assert_eq!(greedy_policy(&[1.0, 2.0, 3.0]).weights(), &[0.0, 0.0, 1.0]);
        // Tie breaks toward the lowest index.
        assert_eq!(greedy_policy(&[5.0, 5.0, 1.0]).weights(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn taylor_constant_row_is_uniform() {
        for qv in [1.5, 2.0, 3.0, 5.0] {
            let spec = PolicySpec::with_default_p(EntropicIndex::new(qv).unwrap(), 1.0).unwrap();
            let out = taylor_policy(&[1.0, 1.0, 1.0, 1.0], &spec).unwrap();
            assert_close(out.pi.weights(), &[0.25; 4], 1e-12);
            assert_eq!(out.support.len(), 4);
        }
    }

    #[test]
    fn taylor_q2_unit_p_equals_sparsemax() {
        let rows: [&[f64]; 3] = [&[2.0, 1.0, 0.0], &[0.5, 0.4, -1.0, 0.45], &[-3.0, 2.0]];
        for row in rows {
            for tau in [0.5, 1.0, 4.0] {
                let spec = PolicySpec::new(EntropicIndex::TWO, tau, 1.0).unwrap();
                let out = taylor_policy(row, &spec).unwrap();
                let (sp, ssup, _) = sparsemax_policy(row, tau).unwrap();
                assert!(out.support.same_actions(&ssup));
                assert_close(out.pi.weights(), sp.weights(), 1e-12);
            }
        }
    }

    #[test]
    fn taylor_rejects_degenerate_indices() {
        let spec = PolicySpec::with_default_p(EntropicIndex::ONE, 1.0).unwrap();
        assert!(taylor_policy(&[1.0, 0.0], &spec).is_err());
        let spec = PolicySpec::with_default_p(EntropicIndex::INFINITY, 1.0).unwrap();
        assert!(taylor_policy(&[1.0, 0.0], &spec).is_err());
    }

    #[test]
    fn tkl_closed_form_q2_reference() {
        // Q = [1, 0], prior = [0.9, 0.1], tau = 1:
        // full support: lambda = (0.9 - 2)/1 = -1.1;
        // pi = [0.9*(1+1.1)/2, 0.1*(0+1.1)/2] = [0.945, 0.055].
        let prior = ProbVector::new(vec![0.9, 0.1]).unwrap();
        let pi = tkl_greedy_closed_form_q2(&[1.0, 0.0], &prior, 1.0).unwrap();
        assert_close(pi.weights(), &[0.945, 0.055], 1e-12);
    }

    #[test]
    fn tkl_large_tau_returns_prior() {
        let prior = ProbVector::new(vec![0.6, 0.3, 0.1]).unwrap();
        let pi = tkl_greedy_policy(&[1.0, -2.0, 0.3], &prior, 1e6, EntropicIndex::TWO).unwrap();
        assert!(pi.total_variation(&prior) < 1e-4);
    }

    #[test]
    fn tkl_restricts_to_prior_support() {
        let prior = ProbVector::new(vec![0.5, 0.5, 0.0]).unwrap();
        let pi = tkl_greedy_policy(&[0.0, 0.0, 100.0], &prior, 1.0, EntropicIndex::TWO).unwrap();
        assert_eq!(pi.get(2), 0.0);
    }
}
