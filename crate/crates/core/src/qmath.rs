//! The deformed-logarithm calculus.
//!
//! For entropic index `q > 0` the q-logarithm and its inverse are
//!
//! ```text
//! ln_q(x)  = (x^(q-1) - 1) / (q - 1)          (x > 0)
//! exp_q(x) = [1 + (q-1) x]_+ ^ (1/(q-1))      ([.]_+ = max{., 0})
//! ```
//!
//! with `ln_1 = ln` and `exp_1 = exp` as exact branches. Tsallis entropy is
//! `S_q(p) = -<p, ln_q p>` and the Tsallis KL divergence is
//! `D_q(p||m) = <p, ln_q(p/m)>`. Unlike the natural logarithm, `ln_q` is
//! only pseudo-additive:
//!
//! ```text
//! ln_q(ab) = ln_q(a) + ln_q(b) + (q-1) ln_q(a) ln_q(b)
//! ```
//!
//! which is the reason the q = 1 algebra does not carry over verbatim to
//! q > 1. The defect functions at the bottom of this module evaluate both
//! sides of the pseudo-additivity and two-point product identities so tests
//! can confirm they hold to floating-point accuracy.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Tolerance for the row-sum invariant of [`ProbVector`].
pub const PROB_SUM_TOL: f64 = 1e-12;

/// Entries below this are treated as zero support when dividing by a prior.
pub const SUPPORT_EPS: f64 = 1e-15;

// ---------------------------------------------------------------------------
// EntropicIndex
// ---------------------------------------------------------------------------

/// The deformation parameter `q` of the Tsallis calculus: a positive real,
/// or the distinguished greedy limit `q = inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropicIndex(Repr);

#[derive(Debug, Clone, Copy, PartialEq)]
enum Repr {
    Finite(f64),
    Infinity,
}

/// Total classification of an [`EntropicIndex`]; the most specific variant
/// wins, so `q = 1` is `IsOne` (not `IsFinite(1.0)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IndexClass {
    IsOne,
    IsTwo,
    IsFinite(f64),
    IsInfinity,
}

impl EntropicIndex {
    /// Shannon / KL limit.
    pub const ONE: EntropicIndex = EntropicIndex(Repr::Finite(1.0));
    /// Sparsemax index.
    pub const TWO: EntropicIndex = EntropicIndex(Repr::Finite(2.0));
    /// Greedy limit: no regularization.
    pub const INFINITY: EntropicIndex = EntropicIndex(Repr::Infinity);

    /// A finite index; must be a positive finite real.
    pub fn new(q: f64) -> Result<EntropicIndex> {
        if !q.is_finite() || q <= 0.0 {
            return Err(Error::domain(
                "EntropicIndex::new",
                format!("q must satisfy q > 0 (or use EntropicIndex::INFINITY), got {q}"),
            ));
        }
        Ok(EntropicIndex(Repr::Finite(q)))
    }

    pub fn classify(self) -> IndexClass {
        match self.0 {
            Repr::Finite(q) if q == 1.0 => IndexClass::IsOne,
            Repr::Finite(q) if q == 2.0 => IndexClass::IsTwo,
            Repr::Finite(q) => IndexClass::IsFinite(q),
            Repr::Infinity => IndexClass::IsInfinity,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self.0, Repr::Infinity)
    }

    /// The finite value, if any.
    pub fn finite_value(self) -> Option<f64> {
        match self.0 {
            Repr::Finite(q) => Some(q),
            Repr::Infinity => None,
        }
    }

    fn finite_or_err(self, op: &'static str) -> Result<f64> {
        self.finite_value()
            .ok_or_else(|| Error::UnsupportedIndex { op, q: "inf".into() })
    }
}

impl std::fmt::Display for EntropicIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.0 {
            Repr::Finite(q) => write!(f, "{q}"),
            Repr::Infinity => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for EntropicIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<EntropicIndex> {
        match s.trim() {
            "inf" | "Inf" | "INF" | "infinity" => Ok(EntropicIndex::INFINITY),
            t => {
                let q: f64 = t.parse().map_err(|_| {
                    Error::parse(format!("not a valid entropic index: {s:?}"), "q")
                })?;
                EntropicIndex::new(q)
            }
        }
    }
}

impl Serialize for EntropicIndex {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            Repr::Finite(q) => ser.serialize_f64(q),
            Repr::Infinity => ser.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for EntropicIndex {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(de)? {
            Raw::Number(q) => EntropicIndex::new(q).map_err(serde::de::Error::custom),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

// ---------------------------------------------------------------------------
// ProbVector
// ---------------------------------------------------------------------------

/// A probability distribution over a finite set: nonnegative weights that
/// sum to one within [`PROB_SUM_TOL`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(weights: Vec<f64>) -> Result<ProbVector> {
        if weights.is_empty() {
            return Err(Error::Invariant("ProbVector must be nonempty".into()));
        }
        let mut sum = 0.0;
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::Invariant(format!(
                    "ProbVector entry {i} is {w}, must be finite and >= 0"
                )));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::Invariant(format!(
                "ProbVector sums to {sum}, must be 1 within {PROB_SUM_TOL}"
            )));
        }
        Ok(ProbVector(weights))
    }

    /// Normalize nonnegative weights with positive total mass.
    pub fn normalized(mut weights: Vec<f64>) -> Result<ProbVector> {
        let mut sum = 0.0;
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::Invariant(format!(
                    "weight {i} is {w}, must be finite and >= 0"
                )));
            }
            sum += w;
        }
        if sum <= 0.0 {
            return Err(Error::Invariant("cannot normalize zero total mass".into()));
        }
        for w in &mut weights {
            *w /= sum;
        }
        // One repair pass: dump any residual ulp-scale mass on the argmax.
        let resid: f64 = 1.0 - weights.iter().sum::<f64>();
        if resid != 0.0 {
            let argmax = argmax_index(&weights);
            weights[argmax] += resid;
            if weights[argmax] < 0.0 {
                weights[argmax] = 0.0;
            }
        }
        ProbVector::new(weights)
    }

    pub fn uniform(n: usize) -> ProbVector {
        assert!(n > 0, "uniform distribution needs at least one outcome");
        ProbVector(vec![1.0 / n as f64; n])
    }

    pub fn one_hot(n: usize, index: usize) -> ProbVector {
        assert!(index < n, "one-hot index out of range");
        let mut w = vec![0.0; n];
        w[index] = 1.0;
        ProbVector(w)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    /// Total variation distance, `0.5 * sum |p - q|`.
    pub fn total_variation(&self, other: &ProbVector) -> f64 {
        assert_eq!(self.len(), other.len(), "total variation on mismatched lengths");
        0.5 * self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }

    /// Indices with weight strictly above [`SUPPORT_EPS`].
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > SUPPORT_EPS)
            .map(|(i, _)| i)
            .collect()
    }
}

impl TryFrom<Vec<f64>> for ProbVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<ProbVector> {
        ProbVector::new(v)
    }
}

impl<'de> Deserialize<'de> for ProbVector {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<f64>::deserialize(de)?;
        ProbVector::new(raw).map_err(serde::de::Error::custom)
    }
}

impl std::ops::Index<usize> for ProbVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

pub(crate) fn argmax_index(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

// ---------------------------------------------------------------------------
// q-logarithm / q-exponential
// ---------------------------------------------------------------------------

/// The q-logarithm `ln_q(x) = (x^(q-1) - 1)/(q-1)`, with the exact `ln`
/// branch at q = 1 and the exact linear branch `x - 1` at q = 2.
///
/// Errors on `x <= 0` and on `q = inf`.
pub fn q_log(x: f64, q: EntropicIndex) -> Result<f64> {
    let qv = q.finite_or_err("q_log")?;
    if !(x > 0.0) {
        return Err(Error::domain("q_log", format!("x must be > 0, got {x}")));
    }
    Ok(q_log_unchecked(x, qv))
}

/// `q_log` without the domain checks; `x > 0` and finite `q > 0` assumed.
/// Exposed for the hot loops of the solver layer.
pub fn q_log_unchecked(x: f64, q: f64) -> f64 {
    if q == 1.0 {
        x.ln()
    } else if q == 2.0 {
        x - 1.0
    } else {
        // (x^(q-1) - 1)/(q-1) via expm1 so the q -> 1 neighborhood keeps
        // full precision instead of cancelling.
        ((q - 1.0) * x.ln()).exp_m1() / (q - 1.0)
    }
}

/// The q-exponential `exp_q(x) = [1 + (q-1)x]_+ ^ (1/(q-1))`, with the exact
/// `exp` branch at q = 1 and the exact clipped-linear branch at q = 2.
/// Returns 0 (not an error) on the clipped branch `1 + (q-1)x <= 0`.
///
/// Errors on `q = inf`.
pub fn q_exp(x: f64, q: EntropicIndex) -> Result<f64> {
    let qv = q.finite_or_err("q_exp")?;
    Ok(q_exp_unchecked(x, qv))
}

/// `q_exp` without the index check; finite `q > 0` assumed.
pub fn q_exp_unchecked(x: f64, q: f64) -> f64 {
    if q == 1.0 {
        x.exp()
    } else if q == 2.0 {
        (1.0 + x).max(0.0)
    } else {
        let qm1 = q - 1.0;
        let base = qm1 * x;
        if base <= -1.0 {
            // Clipped branch: for q > 1 this is an exact zero; for q < 1 the
            // exponent 1/(q-1) is negative and the limit is likewise 0.
            0.0
        } else {
            (base.ln_1p() / qm1).exp()
        }
    }
}

/// Whether `x` lies on the unclipped branch of `exp_q`.
pub fn q_exp_unclipped(x: f64, q: f64) -> bool {
    q == 1.0 || 1.0 + (q - 1.0) * x > 0.0
}

// ---------------------------------------------------------------------------
// Tsallis entropy and Tsallis KL divergence
// ---------------------------------------------------------------------------

/// Tsallis entropy `S_q(p) = -sum_a p(a) ln_q p(a)` with the continuity
/// convention `0 * ln_q 0 = 0`.
pub fn tsallis_entropy(p: &ProbVector, q: EntropicIndex) -> Result<f64> {
    let qv = q.finite_or_err("tsallis_entropy")?;
    let mut acc = 0.0;
    for &w in p.weights() {
        if w > 0.0 {
            acc -= w * q_log_unchecked(w, qv);
        }
    }
    Ok(acc)
}

/// Tsallis KL divergence `D_q(p||m) = sum_a p(a) ln_q(p(a)/m(a))`.
///
/// Measure conventions: terms with `p(a) = 0` contribute zero regardless of
/// `m(a)`; a term with `p(a) > 0` and `m(a) = 0` makes the divergence `+inf`.
pub fn tsallis_kl(p: &ProbVector, m: &ProbVector, q: EntropicIndex) -> Result<f64> {
    let qv = q.finite_or_err("tsallis_kl")?;
    if p.len() != m.len() {
        return Err(Error::shape(
            "tsallis_kl",
            format!("{}", p.len()),
            format!("{}", m.len()),
        ));
    }
    let mut acc = 0.0;
    for (&pw, &mw) in p.weights().iter().zip(m.weights()) {
        if pw == 0.0 {
            continue;
        }
        if mw == 0.0 {
            return Ok(f64::INFINITY);
        }
        acc += pw * q_log_unchecked(pw / mw, qv);
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Identity defects
// ---------------------------------------------------------------------------

/// Defect of the pseudo-additivity identity
/// `ln_q(ab) - [ln_q a + ln_q b + (q-1) ln_q a ln_q b]`.
///
/// Zero in exact arithmetic for all `a, b > 0` and finite q.
pub fn pseudo_additivity_defect(a: f64, b: f64, q: EntropicIndex) -> Result<f64> {
    let qv = q.finite_or_err("pseudo_additivity_defect")?;
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::domain(
            "pseudo_additivity_defect",
            format!("a and b must be > 0, got a={a}, b={b}"),
        ));
    }
    let la = q_log_unchecked(a, qv);
    let lb = q_log_unchecked(b, qv);
    let lhs = q_log_unchecked(a * b, qv);
    Ok(lhs - (la + lb + (qv - 1.0) * la * lb))
}

/// Defect of the two-point product identity
/// `(exp_q x * exp_q y)^(q-1) - [exp_q(x+y)^(q-1) + (q-1)^2 xy]`.
///
/// Requires the unclipped branch for `x`, `y`, and `x + y`; the identity is
/// an equality of the unclipped expressions and fails by construction as
/// soon as any factor is truncated at zero.
pub fn two_point_identity_defect(x: f64, y: f64, q: EntropicIndex) -> Result<f64> {
    let qv = q.finite_or_err("two_point_identity_defect")?;
    if qv == 1.0 {
        return Err(Error::precondition(
            "two_point_identity_defect",
            "q must differ from 1 (the identity degenerates to exp(x)exp(y) = exp(x+y))",
        ));
    }
    for (name, v) in [("x", x), ("y", y), ("x+y", x + y)] {
        if !q_exp_unclipped(v, qv) {
            return Err(Error::precondition(
                "two_point_identity_defect",
                format!("1 + (q-1)*{name} must be > 0, got {}", 1.0 + (qv - 1.0) * v),
            ));
        }
    }
    let qm1 = qv - 1.0;
    // exp_q(v)^(q-1) = 1 + (q-1) v on the unclipped branch.
    let lhs = (1.0 + qm1 * x) * (1.0 + qm1 * y);
    let rhs = (1.0 + qm1 * (x + y)) + qm1 * qm1 * x * y;
    Ok(lhs - rhs)
}

/// Tolerance rule for identity checks: absolute 1e-12 while the compared
/// magnitudes stay small, relative 1e-10 once powers blow the scale up.
pub fn identity_defect_ok(defect: f64, scale: f64) -> bool {
    let scale = scale.abs();
    if scale <= 10.0 {
        defect.abs() <= 1e-12
    } else {
        defect.abs() <= 1e-10 * scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: f64) -> EntropicIndex {
        EntropicIndex::new(v).unwrap()
    }

    #[test]
    fn q_log_fixed_points() {
        // ln_q(1) = 0 for every index.
        for qv in [0.3, 0.5, 1.0, 1.5, 2.0, 3.7, 10.0] {
            assert_eq!(q_log(1.0, q(qv)).unwrap(), 0.0);
        }
        // q = 2 reduces to x - 1.
        assert_eq!(q_log(3.0, EntropicIndex::TWO).unwrap(), 2.0);
        // Arbitrary-precision reference for q = 1.5:
        // 2 (sqrt(2.5) - 1) = 1.16227766016837933199889354...
        let expected = 2.0 * (2.5f64.sqrt() - 1.0);
        assert!((q_log(2.5, q(1.5)).unwrap() - expected).abs() < 1e-15);
        assert!((q_log(2.5, q(1.5)).unwrap() - 1.1622776601683795).abs() < 1e-15);
    }

    #[test]
    fn q_log_domain_errors() {
        assert!(matches!(q_log(0.0, q(1.5)), Err(Error::Domain { .. })));
        assert!(matches!(q_log(-1.0, EntropicIndex::ONE), Err(Error::Domain { .. })));
        assert!(matches!(
            q_log(1.0, EntropicIndex::INFINITY),
            Err(Error::UnsupportedIndex { .. })
        ));
    }

    #[test]
    fn q_exp_fixed_points_and_clipping() {
        for qv in [0.3, 0.5, 1.0, 1.5, 2.0, 3.7] {
            assert_eq!(q_exp(0.0, q(qv)).unwrap(), 1.0);
        }
        // q = 2 clipped branch.
        assert_eq!(q_exp(-2.0, EntropicIndex::TWO).unwrap(), 0.0);
        assert_eq!(q_exp(0.5, EntropicIndex::TWO).unwrap(), 1.5);
        // Generic clipped branch.
        assert_eq!(q_exp(-1.0, q(3.0)).unwrap(), 0.0);
        assert!(matches!(
            q_exp(0.0, EntropicIndex::INFINITY),
            Err(Error::UnsupportedIndex { .. })
        ));
    }

    #[test]
    fn inverse_pair_roundtrip() {
        // Deterministic grid standing in for the random sweep (the full
        // randomized suite lives in tests/qmath_props.rs).
        for &qv in &[0.25, 0.5, 0.9, 1.0, 1.1, 1.5, 2.0, 3.0, 5.0] {
            for i in 1..=100 {
                let x = 0.1 * i as f64;
                let back = q_exp_unchecked(q_log_unchecked(x, qv), qv);
                assert!(
                    (back - x).abs() <= 1e-10 * x.max(1.0),
                    "exp_q(ln_q({x})) = {back} at q = {qv}"
                );
            }
        }
    }

    #[test]
    fn entropy_reference_values() {
        let uniform = ProbVector::uniform(4);
        for qv in [0.5, 1.0, 1.5, 2.0, 3.0] {
            let s = tsallis_entropy(&uniform, q(qv)).unwrap();
            let bound = -q_log(0.25, q(qv)).unwrap();
            assert!((s - bound).abs() < 1e-14, "uniform entropy q={qv}");
        }
        let onehot = ProbVector::one_hot(4, 2);
        assert_eq!(tsallis_entropy(&onehot, q(1.7)).unwrap(), 0.0);
        // S_2([1/2, 1/2]) = 1 - sum p^2 = 1/2.
        let half = ProbVector::new(vec![0.5, 0.5]).unwrap();
        assert!((tsallis_entropy(&half, EntropicIndex::TWO).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn kl_reference_values() {
        let p = ProbVector::new(vec![0.5, 0.5]).unwrap();
        let m = ProbVector::new(vec![0.25, 0.75]).unwrap();
        // D_2(p||m) = sum p^2/m - 1 = (0.25/0.25 + 0.25/0.75) - 1 = 1/3.
        let d = tsallis_kl(&p, &m, EntropicIndex::TWO).unwrap();
        assert!((d - 1.0 / 3.0).abs() < 1e-14);
        // Self-divergence is zero.
        for qv in [0.5, 1.0, 2.0, 4.0] {
            assert!(tsallis_kl(&m, &m, q(qv)).unwrap().abs() < 1e-15);
        }
        // Support violation is +inf.
        let a = ProbVector::new(vec![1.0, 0.0]).unwrap();
        let b = ProbVector::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(tsallis_kl(&a, &b, EntropicIndex::TWO).unwrap(), f64::INFINITY);
        // Zero p-entries contribute nothing even against zero m-entries.
        assert_eq!(tsallis_kl(&a, &a, EntropicIndex::TWO).unwrap(), 0.0);
    }

    #[test]
    fn pseudo_additivity_hand_case() {
        // q = 2: ln_2(6) = 5 and 1 + 2 + 1*1*2 = 5.
        let d = pseudo_additivity_defect(2.0, 3.0, EntropicIndex::TWO).unwrap();
        assert_eq!(d, 0.0);
        // q = 1 is plain additivity of ln.
        let d1 = pseudo_additivity_defect(2.0, 3.0, EntropicIndex::ONE).unwrap();
        assert!(d1.abs() < 1e-15);
        assert!(matches!(
            pseudo_additivity_defect(-1.0, 2.0, q(1.5)),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn two_point_hand_case() {
        // q = 2, x = 1, y = 2: (2*3)^1 = 4 + 2.
        let d = two_point_identity_defect(1.0, 2.0, EntropicIndex::TWO).unwrap();
        assert_eq!(d, 0.0);
        // x = 0 collapses both sides.
        for qv in [1.5, 2.0, 3.0] {
            let d = two_point_identity_defect(0.0, 0.7, q(qv)).unwrap();
            assert!(d.abs() < 1e-14);
        }
        // Clipped inputs and clipped sums are rejected.
        assert!(matches!(
            two_point_identity_defect(-2.0, 0.0, EntropicIndex::TWO),
            Err(Error::Precondition { .. })
        ));
        assert!(matches!(
            two_point_identity_defect(-0.8, -0.8, EntropicIndex::TWO),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn continuity_at_one() {
        // |ln_{1+eps}(x) - ln x| <= C eps with C = (ln x)^2/2 * (1 + o(1));
        // C = 3 covers x in [0.1, 10].
        let eps = 1e-6;
        let qe = q(1.0 + eps);
        for i in 1..=100 {
            let x = 0.1 * i as f64;
            let diff = (q_log(x, qe).unwrap() - x.ln()).abs();
            assert!(diff <= 3.0 * eps, "x = {x}: diff = {diff}");
        }
    }

    #[test]
    fn prob_vector_validation() {
        assert!(ProbVector::new(vec![0.5, 0.5]).is_ok());
        assert!(ProbVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbVector::new(vec![-0.1, 1.1]).is_err());
        assert!(ProbVector::new(vec![]).is_err());
        let p = ProbVector::normalized(vec![2.0, 6.0]).unwrap();
        assert_eq!(p.weights(), &[0.25, 0.75]);
    }

    #[test]
    fn entropic_index_parsing_and_classes() {
        assert_eq!("2".parse::<EntropicIndex>().unwrap(), EntropicIndex::TWO);
        assert_eq!(
            "inf".parse::<EntropicIndex>().unwrap(),
            EntropicIndex::INFINITY
        );
        assert!("0".parse::<EntropicIndex>().is_err());
        assert!("-3".parse::<EntropicIndex>().is_err());
        assert_eq!(EntropicIndex::ONE.classify(), IndexClass::IsOne);
        assert_eq!(EntropicIndex::TWO.classify(), IndexClass::IsTwo);
        assert_eq!(q(3.0).classify(), IndexClass::IsFinite(3.0));
        assert_eq!(EntropicIndex::INFINITY.classify(), IndexClass::IsInfinity);
        let json = serde_json::to_string(&EntropicIndex::INFINITY).unwrap();
        assert_eq!(json, "\"inf\"");
        let back: EntropicIndex = serde_json::from_str("2.0").unwrap();
        assert_eq!(back, EntropicIndex::TWO);
    }
}
