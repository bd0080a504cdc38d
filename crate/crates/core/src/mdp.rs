//! Finite MDPs and the (regularized) Bellman operators.
//!
//! Storage is dense and row-major throughout: `transition[s][a][s']`,
//! `reward[s][a]`. A [`TabularMdp`] is immutable after construction and can
//! be shared freely across threads.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::qmath::{ProbVector, PROB_SUM_TOL};
use crate::Result;

/// Row-sum tolerance accepted (and repaired) when loading MDP files.
pub const FILE_PROB_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

/// A dense action-value table, `n_states x n_actions`.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    n_states: usize,
    n_actions: usize,
    values: Vec<f64>,
}

impl QTable {
    pub fn zeros(n_states: usize, n_actions: usize) -> QTable {
        QTable { n_states, n_actions, values: vec![0.0; n_states * n_actions] }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<QTable> {
        let n_states = rows.len();
        if n_states == 0 {
            return Err(Error::Invariant("QTable needs at least one state".into()));
        }
        let n_actions = rows[0].len();
        let mut values = Vec::with_capacity(n_states * n_actions);
        for (s, row) in rows.into_iter().enumerate() {
            if row.len() != n_actions {
                return Err(Error::shape(
                    "QTable::from_rows",
                    format!("{n_actions} actions"),
                    format!("{} in state {s}", row.len()),
                ));
            }
            values.extend(row);
        }
        let q = QTable { n_states, n_actions, values };
        q.check_finite()?;
        Ok(q)
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn get(&self, s: usize, a: usize) -> f64 {
        self.values[s * self.n_actions + a]
    }

    pub fn set(&mut self, s: usize, a: usize, v: f64) {
        self.values[s * self.n_actions + a] = v;
    }

    pub fn row(&self, s: usize) -> &[f64] {
        &self.values[s * self.n_actions..(s + 1) * self.n_actions]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn sup_norm_diff(&self, other: &QTable) -> f64 {
        assert_eq!(self.values.len(), other.values.len(), "QTable shape mismatch");
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    fn check_finite(&self) -> Result<()> {
        for (i, &v) in self.values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::Invariant(format!(
                    "QTable entry (s={}, a={}) is {v}",
                    i / self.n_actions,
                    i % self.n_actions
                )));
            }
        }
        Ok(())
    }
}

/// One distribution over actions per state.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyTable {
    rows: Vec<ProbVector>,
}

impl PolicyTable {
    pub fn new(rows: Vec<ProbVector>) -> Result<PolicyTable> {
        if rows.is_empty() {
            return Err(Error::Invariant("PolicyTable needs at least one state".into()));
        }
        let n = rows[0].len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Invariant("PolicyTable rows have mixed lengths".into()));
        }
        Ok(PolicyTable { rows })
    }

    pub fn uniform(n_states: usize, n_actions: usize) -> PolicyTable {
        PolicyTable { rows: vec![ProbVector::uniform(n_actions); n_states] }
    }

    pub fn n_states(&self) -> usize {
        self.rows.len()
    }

    pub fn n_actions(&self) -> usize {
        self.rows[0].len()
    }

    pub fn row(&self, s: usize) -> &ProbVector {
        &self.rows[s]
    }

    pub fn rows(&self) -> &[ProbVector] {
        &self.rows
    }

    /// Mean over states of the total-variation distance between rows.
    pub fn mean_total_variation(&self, other: &PolicyTable) -> f64 {
        assert_eq!(self.n_states(), other.n_states(), "PolicyTable shape mismatch");
        let sum: f64 = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.total_variation(b))
            .sum();
        sum / self.n_states() as f64
    }

    /// Largest per-state total-variation distance.
    pub fn max_total_variation(&self, other: &PolicyTable) -> f64 {
        self.rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.total_variation(b))
            .fold(0.0, f64::max)
    }
}

// ---------------------------------------------------------------------------
// TabularMdp
// ---------------------------------------------------------------------------

/// A finite discounted MDP with dense transition and reward tables.
#[derive(Debug, Clone)]
pub struct TabularMdp {
    n_states: usize,
    n_actions: usize,
    /// `transition[s * A * S + a * S + s']`, each `[s][a]` row stochastic.
    transition: Vec<f64>,
    /// `reward[s * A + a]`, all finite.
    reward: Vec<f64>,
    gamma: f64,
    initial_dist: ProbVector,
    /// Free-form provenance (generator name, seed, ...); carried through the
    /// file format untouched.
    meta: serde_json::Value,
}

impl TabularMdp {
    pub fn new(
        n_states: usize,
        n_actions: usize,
        transition: Vec<f64>,
        reward: Vec<f64>,
        gamma: f64,
        initial_dist: ProbVector,
        meta: serde_json::Value,
    ) -> Result<TabularMdp> {
        if n_states == 0 || n_actions == 0 {
            return Err(Error::Invariant("MDP needs at least one state and action".into()));
        }
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::Invariant(format!("gamma must lie strictly in (0,1), got {gamma}")));
        }
        if transition.len() != n_states * n_actions * n_states {
            return Err(Error::shape(
                "TabularMdp::new",
                format!("{} transition entries", n_states * n_actions * n_states),
                format!("{}", transition.len()),
            ));
        }
        if reward.len() != n_states * n_actions {
            return Err(Error::shape(
                "TabularMdp::new",
                format!("{} reward entries", n_states * n_actions),
                format!("{}", reward.len()),
            ));
        }
        if initial_dist.len() != n_states {
            return Err(Error::shape(
                "TabularMdp::new",
                format!("initial distribution over {n_states} states"),
                format!("{}", initial_dist.len()),
            ));
        }
        for (i, &r) in reward.iter().enumerate() {
            if !r.is_finite() {
                return Err(Error::Invariant(format!(
                    "reward (s={}, a={}) is {r}",
                    i / n_actions,
                    i % n_actions
                )));
            }
        }
        let mdp = TabularMdp { n_states, n_actions, transition, reward, gamma, initial_dist, meta };
        for s in 0..n_states {
            for a in 0..n_actions {
                let row = mdp.transition_row(s, a);
                let mut sum = 0.0;
                for (sp, &p) in row.iter().enumerate() {
                    if !p.is_finite() || p < 0.0 {
                        return Err(Error::Invariant(format!(
                            "transition (s={s}, a={a}, s'={sp}) is {p}"
                        )));
                    }
                    sum += p;
                }
                if (sum - 1.0).abs() > PROB_SUM_TOL {
                    return Err(Error::Invariant(format!(
                        "transition row (s={s}, a={a}) sums to {sum}"
                    )));
                }
            }
        }
        Ok(mdp)
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn initial_dist(&self) -> &ProbVector {
        &self.initial_dist
    }

    pub fn meta(&self) -> &serde_json::Value {
        &self.meta
    }

    pub fn reward(&self, s: usize, a: usize) -> f64 {
        self.reward[s * self.n_actions + a]
    }

    pub fn max_abs_reward(&self) -> f64 {
        self.reward.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    pub fn transition_row(&self, s: usize, a: usize) -> &[f64] {
        let base = (s * self.n_actions + a) * self.n_states;
        &self.transition[base..base + self.n_states]
    }

    // -- Bellman operators --------------------------------------------------

    /// Expectation operator: `(T_pi Q)(s,a) = r(s,a) + gamma *
    /// sum_{s'} P(s'|s,a) sum_{a'} pi(a'|s') Q(s',a')`.
    pub fn bellman_expectation(&self, q: &QTable, pi: &PolicyTable) -> Result<QTable> {
        self.check_q_shape("bellman_expectation", q)?;
        self.check_pi_shape("bellman_expectation", pi)?;
        let v = state_values(q, pi);
        Ok(self.backup_from_state_values(&v))
    }

    /// Optimality operator: `(T* Q)(s,a) = r(s,a) + gamma *
    /// sum_{s'} P(s'|s,a) max_{a'} Q(s',a')`.
    pub fn bellman_optimality(&self, q: &QTable) -> Result<QTable> {
        self.check_q_shape("bellman_optimality", q)?;
        let v: Vec<f64> = (0..self.n_states)
            .map(|s| q.row(s).iter().cloned().fold(f64::NEG_INFINITY, f64::max))
            .collect();
        Ok(self.backup_from_state_values(&v))
    }

    /// Regularized expectation operator: the state value behind the
    /// transition is `<pi(.|s'), Q(s',.)> - omega(s')`, with `omega` a
    /// precomputed per-state regularizer value.
    pub fn regularized_backup(
        &self,
        q: &QTable,
        pi: &PolicyTable,
        omega_per_state: &[f64],
    ) -> Result<QTable> {
        self.check_q_shape("regularized_backup", q)?;
        self.check_pi_shape("regularized_backup", pi)?;
        if omega_per_state.len() != self.n_states {
            return Err(Error::shape(
                "regularized_backup",
                format!("{} omega entries", self.n_states),
                format!("{}", omega_per_state.len()),
            ));
        }
        let mut v = state_values(q, pi);
        for (s, omega) in v.iter_mut().zip(omega_per_state) {
            *s -= omega;
        }
        Ok(self.backup_from_state_values(&v))
    }

    /// Exact regularized policy evaluation: solves the linear fixed point
    /// `V = <pi, r> - omega + gamma M_pi V` directly (dense elimination with
    /// partial pivoting) and expands it to `Q = r + gamma P V`.
    pub fn exact_policy_value(&self, pi: &PolicyTable, omega_per_state: &[f64]) -> Result<QTable> {
        self.check_pi_shape("exact_policy_value", pi)?;
        if omega_per_state.len() != self.n_states {
            return Err(Error::shape(
                "exact_policy_value",
                format!("{} omega entries", self.n_states),
                format!("{}", omega_per_state.len()),
            ));
        }
        let n = self.n_states;
        // System matrix I - gamma * M, with M(s,s') the policy-averaged
        // transition kernel.
        let mut mat = vec![0.0; n * n];
        let mut rhs = vec![0.0; n];
        for s in 0..n {
            mat[s * n + s] = 1.0;
            let pi_row = pi.row(s);
            for a in 0..self.n_actions {
                let w = pi_row.get(a);
                if w == 0.0 {
                    continue;
                }
                rhs[s] += w * self.reward(s, a);
                for (sp, &p) in self.transition_row(s, a).iter().enumerate() {
                    mat[s * n + sp] -= self.gamma * w * p;
                }
            }
            rhs[s] -= omega_per_state[s];
        }
        let v = solve_dense(&mut mat, &mut rhs, n)?;
        Ok(self.backup_from_state_values(&v))
    }

    /// Exact, unregularized policy value weighted by the initial state
    /// distribution; the scalar figure of merit reported by sweeps.
    pub fn policy_value_at_initial(&self, pi: &PolicyTable) -> Result<f64> {
        let q = self.exact_policy_value(pi, &vec![0.0; self.n_states])?;
        let mut total = 0.0;
        for s in 0..self.n_states {
            let mut vs = 0.0;
            for a in 0..self.n_actions {
                vs += pi.row(s).get(a) * q.get(s, a);
            }
            total += self.initial_dist.get(s) * vs;
        }
        Ok(total)
    }

    fn backup_from_state_values(&self, v: &[f64]) -> QTable {
        let mut out = QTable::zeros(self.n_states, self.n_actions);
        for s in 0..self.n_states {
            for a in 0..self.n_actions {
                let mut exp = 0.0;
                for (sp, &p) in self.transition_row(s, a).iter().enumerate() {
                    if p != 0.0 {
                        exp += p * v[sp];
                    }
                }
                out.set(s, a, self.reward(s, a) + self.gamma * exp);
            }
        }
        out
    }

    fn check_q_shape(&self, op: &'static str, q: &QTable) -> Result<()> {
        if q.n_states() != self.n_states || q.n_actions() != self.n_actions {
            return Err(Error::shape(
                op,
                format!("{}x{}", self.n_states, self.n_actions),
                format!("{}x{}", q.n_states(), q.n_actions()),
            ));
        }
        Ok(())
    }

    fn check_pi_shape(&self, op: &'static str, pi: &PolicyTable) -> Result<()> {
        if pi.n_states() != self.n_states || pi.n_actions() != self.n_actions {
            return Err(Error::shape(
                op,
                format!("{}x{}", self.n_states, self.n_actions),
                format!("{}x{}", pi.n_states(), pi.n_actions()),
            ));
        }
        Ok(())
    }

    // -- File format ----------------------------------------------------------

    pub fn to_json(&self) -> Result<String> {
        let file = MdpFile::from(self);
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json_bytes(bytes: &[u8]) -> Result<TabularMdp> {
        let file: MdpFile = serde_json::from_slice(bytes)
            .map_err(|e| Error::parse(e.to_string(), "MDP file"))?;
        file.into_mdp()
    }

    pub fn to_file(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn from_file(path: impl AsRef<std::path::Path>) -> Result<TabularMdp> {
        let bytes = std::fs::read(&path)?;
        TabularMdp::from_json_bytes(&bytes)
    }
}

/// `V(s) = sum_a pi(a|s) Q(s,a)` for every state.
pub fn state_values(q: &QTable, pi: &PolicyTable) -> Vec<f64> {
    (0..q.n_states())
        .map(|s| {
            q.row(s)
                .iter()
                .zip(pi.row(s).weights())
                .map(|(&qv, &w)| w * qv)
                .sum()
        })
        .collect()
}

/// Gaussian elimination with partial pivoting; consumes its inputs.
fn solve_dense(mat: &mut [f64], rhs: &mut [f64], n: usize) -> Result<Vec<f64>> {
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_abs = mat[col * n + col].abs();
        for r in col + 1..n {
            let v = mat[r * n + col].abs();
            if v > pivot_abs {
                pivot_abs = v;
                pivot_row = r;
            }
        }
        if pivot_abs < 1e-12 {
            return Err(Error::Singular { pivot: mat[pivot_row * n + col], row: col });
        }
        if pivot_row != col {
            for k in 0..n {
                mat.swap(col * n + k, pivot_row * n + k);
            }
            rhs.swap(col, pivot_row);
        }
        let pivot = mat[col * n + col];
        for r in col + 1..n {
            let factor = mat[r * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            mat[r * n + col] = 0.0;
            for k in col + 1..n {
                mat[r * n + k] -= factor * mat[col * n + k];
            }
            rhs[r] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in row + 1..n {
            acc -= mat[row * n + k] * x[k];
        }
        x[row] = acc / mat[row * n + row];
    }
    Ok(x)
}

// ---------------------------------------------------------------------------
// File schema
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct MdpFile {
    n_states: usize,
    n_actions: usize,
    gamma: f64,
    initial_dist: Vec<f64>,
    reward: Vec<Vec<f64>>,
    transition: Vec<Vec<Vec<f64>>>,
    #[serde(default)]
    meta: serde_json::Value,
}

impl From<&TabularMdp> for MdpFile {
    fn from(m: &TabularMdp) -> MdpFile {
        MdpFile {
            n_states: m.n_states,
            n_actions: m.n_actions,
            gamma: m.gamma,
            initial_dist: m.initial_dist.weights().to_vec(),
            reward: (0..m.n_states)
                .map(|s| (0..m.n_actions).map(|a| m.reward(s, a)).collect())
                .collect(),
            transition: (0..m.n_states)
                .map(|s| {
                    (0..m.n_actions)
                        .map(|a| m.transition_row(s, a).to_vec())
                        .collect()
                })
                .collect(),
            meta: m.meta.clone(),
        }
    }
}

impl MdpFile {
    fn into_mdp(self) -> Result<TabularMdp> {
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::parse(
                format!("gamma must lie strictly in (0,1), got {}", self.gamma),
                "field gamma",
            ));
        }
        if self.n_states == 0 || self.n_actions == 0 {
            return Err(Error::parse("n_states and n_actions must be positive", "header"));
        }
        if self.reward.len() != self.n_states {
            return Err(Error::parse(
                format!("reward has {} rows, expected {}", self.reward.len(), self.n_states),
                "field reward",
            ));
        }
        if self.transition.len() != self.n_states {
            return Err(Error::parse(
                format!("transition has {} rows, expected {}", self.transition.len(), self.n_states),
                "field transition",
            ));
        }

        let initial = repair_distribution(self.initial_dist, "initial_dist")?;
        if initial.len() != self.n_states {
            return Err(Error::parse(
                format!("initial_dist has {} entries, expected {}", initial.len(), self.n_states),
                "field initial_dist",
            ));
        }

        let mut reward = Vec::with_capacity(self.n_states * self.n_actions);
        for (s, row) in self.reward.into_iter().enumerate() {
            if row.len() != self.n_actions {
                return Err(Error::parse(
                    format!("reward row for state {s} has {} entries", row.len()),
                    format!("state {s}"),
                ));
            }
            for (a, r) in row.into_iter().enumerate() {
                if !r.is_finite() {
                    return Err(Error::parse(
                        format!("reward is {r}"),
                        format!("state {s}, action {a}"),
                    ));
                }
                reward.push(r);
            }
        }

        let mut transition = Vec::with_capacity(self.n_states * self.n_actions * self.n_states);
        for (s, per_action) in self.transition.into_iter().enumerate() {
            if per_action.len() != self.n_actions {
                return Err(Error::parse(
                    format!("transition row for state {s} has {} actions", per_action.len()),
                    format!("state {s}"),
                ));
            }
            for (a, row) in per_action.into_iter().enumerate() {
                if row.len() != self.n_states {
                    return Err(Error::parse(
                        format!("transition distribution has {} entries", row.len()),
                        format!("state {s}, action {a}"),
                    ));
                }
                let repaired = repair_row(row, s, a)?;
                transition.extend(repaired);
            }
        }

        TabularMdp::new(
            self.n_states,
            self.n_actions,
            transition,
            reward,
            self.gamma,
            initial,
            self.meta,
        )
    }
}

/// Validate a probability row at file tolerance; renormalize only when the
/// drift exceeds the in-memory invariant so already-clean data round-trips
/// bit for bit.
fn repair_row(mut row: Vec<f64>, s: usize, a: usize) -> Result<Vec<f64>> {
    let mut sum = 0.0;
    for &p in &row {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::parse(
                format!("transition probability {p} out of range"),
                format!("state {s}, action {a}"),
            ));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > FILE_PROB_TOL {
        return Err(Error::parse(
            format!("transition row sums to {sum}, expected 1 within {FILE_PROB_TOL}"),
            format!("state {s}, action {a}"),
        ));
    }
    if (sum - 1.0).abs() > PROB_SUM_TOL {
        for p in &mut row {
            *p /= sum;
        }
    }
    Ok(row)
}

fn repair_distribution(row: Vec<f64>, field: &str) -> Result<ProbVector> {
    let mut sum = 0.0;
    for &p in &row {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::parse(format!("probability {p} out of range"), field.to_string()));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > FILE_PROB_TOL {
        return Err(Error::parse(
            format!("{field} sums to {sum}, expected 1 within {FILE_PROB_TOL}"),
            field.to_string(),
        ));
    }
    if (sum - 1.0).abs() > PROB_SUM_TOL {
        ProbVector::normalized(row)
    } else {
        ProbVector::new(row)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::greedy_policy;

    /// Single absorbing state, one action.
    fn single_state(r: f64, gamma: f64) -> TabularMdp {
        TabularMdp::new(
            1,
            1,
            vec![1.0],
            vec![r],
            gamma,
            ProbVector::one_hot(1, 0),
            serde_json::json!({}),
        )
        .unwrap()
    }

    /// Hand-checkable 2-state, 2-action MDP.
    fn two_state() -> TabularMdp {
        // Action 0 stays, action 1 swaps states; reward 1 for acting in
        // state 0, 0 in state 1.
        TabularMdp::new(
            2,
            2,
            vec![
                1.0, 0.0, // s0, a0
                0.0, 1.0, // s0, a1
                0.0, 1.0, // s1, a0
                1.0, 0.0, // s1, a1
            ],
            vec![1.0, 1.0, 0.0, 0.0],
            0.5,
            ProbVector::uniform(2),
            serde_json::json!({}),
        )
        .unwrap()
    }

    #[test]
    fn geometric_series_fixed_point() {
        let mdp = single_state(1.0, 0.9);
        let mut q = QTable::zeros(1, 1);
        for _ in 0..600 {
            q = mdp.bellman_optimality(&q).unwrap();
        }
        assert!((q.get(0, 0) - 10.0).abs() < 1e-9);
    }

    #[test]
    fn expectation_on_hand_mdp() {
        let mdp = two_state();
        let q = QTable::from_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let pi = PolicyTable::uniform(2, 2);
        let out = mdp.bellman_expectation(&q, &pi).unwrap();
        // V(s0) = 1.5, V(s1) = 3.5 under the uniform policy.
        assert_eq!(out.get(0, 0), 1.0 + 0.5 * 1.5);
        assert_eq!(out.get(0, 1), 1.0 + 0.5 * 3.5);
        assert_eq!(out.get(1, 0), 0.0 + 0.5 * 1.5);
        assert_eq!(out.get(1, 1), 0.0 + 0.5 * 3.5);
    }

    #[test]
    fn zero_reward_zero_q_is_fixed() {
        let mdp = two_state();
        let zero_r = TabularMdp::new(
            2,
            2,
            mdp.transition.clone(),
            vec![0.0; 4],
            0.5,
            ProbVector::uniform(2),
            serde_json::json!({}),
        )
        .unwrap();
        let q = QTable::zeros(2, 2);
        let out = zero_r.bellman_expectation(&q, &PolicyTable::uniform(2, 2)).unwrap();
        assert_eq!(out.values(), q.values());
    }

    #[test]
    fn optimality_equals_expectation_under_greedy() {
        let mdp = two_state();
        let q = QTable::from_rows(vec![vec![1.0, -2.0], vec![0.3, 0.9]]).unwrap();
        let greedy = PolicyTable::new(vec![
            greedy_policy(q.row(0)),
            greedy_policy(q.row(1)),
        ])
        .unwrap();
        let a = mdp.bellman_optimality(&q).unwrap();
        let b = mdp.bellman_expectation(&q, &greedy).unwrap();
        assert!(a.sup_norm_diff(&b) == 0.0);
    }

    #[test]
    fn regularized_backup_with_zero_omega_is_expectation() {
        let mdp = two_state();
        let q = QTable::from_rows(vec![vec![0.2, -0.4], vec![1.3, 2.2]]).unwrap();
        let pi = PolicyTable::uniform(2, 2);
        let a = mdp.bellman_expectation(&q, &pi).unwrap();
        let b = mdp.regularized_backup(&q, &pi, &[0.0, 0.0]).unwrap();
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn exact_policy_value_matches_iteration() {
        let mdp = two_state();
        let pi = PolicyTable::uniform(2, 2);
        let omega = [0.3, -0.1];
        let exact = mdp.exact_policy_value(&pi, &omega).unwrap();
        let mut q = QTable::zeros(2, 2);
        for _ in 0..200 {
            q = mdp.regularized_backup(&q, &pi, &omega).unwrap();
        }
        assert!(exact.sup_norm_diff(&q) < 1e-12);
        // Residual under its own backup.
        let back = mdp.regularized_backup(&exact, &pi, &omega).unwrap();
        assert!(back.sup_norm_diff(&exact) < 1e-10);
    }

    #[test]
    fn single_state_scalar_fixed_point() {
        let mdp = single_state(2.0, 0.9);
        let pi = PolicyTable::uniform(1, 1);
        let omega = [0.5];
        let q = mdp.exact_policy_value(&pi, &omega).unwrap();
        // V = (r - omega)/(1-gamma), Q = r + gamma V.
        let v = (2.0 - 0.5) / 0.1;
        assert!((q.get(0, 0) - (2.0 + 0.9 * v)).abs() < 1e-10);
    }

    #[test]
    fn contraction_property_spot_check() {
        let mdp = two_state();
        let pi = PolicyTable::uniform(2, 2);
        let q1 = QTable::from_rows(vec![vec![5.0, -1.0], vec![2.0, 0.0]]).unwrap();
        let q2 = QTable::from_rows(vec![vec![1.0, 1.5], vec![-2.0, 4.0]]).unwrap();
        let d_in = q1.sup_norm_diff(&q2);
        let d_out = mdp
            .bellman_expectation(&q1, &pi)
            .unwrap()
            .sup_norm_diff(&mdp.bellman_expectation(&q2, &pi).unwrap());
        assert!(d_out <= mdp.gamma() * d_in + 1e-12);
    }

    #[test]
    fn file_round_trip_is_bitwise() {
        let mdp = two_state();
        let json = mdp.to_json().unwrap();
        let back = TabularMdp::from_json_bytes(json.as_bytes()).unwrap();
        assert_eq!(back.transition, mdp.transition);
        assert_eq!(back.reward, mdp.reward);
        assert_eq!(back.gamma, mdp.gamma);
        assert_eq!(back.initial_dist.weights(), mdp.initial_dist.weights());
        // And the re-serialization is byte-identical.
        assert_eq!(back.to_json().unwrap(), json);
    }

    #[test]
    fn malformed_row_is_rejected_with_context() {
        let mdp = two_state();
        let mut json: serde_json::Value = serde_json::from_str(&mdp.to_json().unwrap()).unwrap();
        json["transition"][1][0] = serde_json::json!([0.45, 0.45]);
        let err = TabularMdp::from_json_bytes(json.to_string().as_bytes()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("state 1"), "unexpected message: {msg}");
        assert!(msg.contains("action 0"), "unexpected message: {msg}");
    }

    #[test]
    fn near_one_row_sums_are_repaired() {
        let mdp = two_state();
        let mut json: serde_json::Value = serde_json::from_str(&mdp.to_json().unwrap()).unwrap();
        json["transition"][0][0] = serde_json::json!([0.5000000001, 0.4999999998]);
        let back = TabularMdp::from_json_bytes(json.to_string().as_bytes()).unwrap();
        let row = back.transition_row(0, 0);
        assert!((row.iter().sum::<f64>() - 1.0).abs() <= PROB_SUM_TOL);
    }
}
