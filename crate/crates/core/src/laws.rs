//! Reproduction laws and mark laws: validation, moments, sampling.
//!
//! A reproduction law here always satisfies the standing assumptions of the
//! models in this crate: no mass at zero offspring (trees are leafless) and
//! `p_1 < 1` (so the mean `m` exceeds one and the boundary is nontrivial).
//! Mark laws live on `(1, ∞)`.

use rand::Rng;
use thiserror::Error;

use crate::stats::pairwise_sum;

/// Largest offspring support handled with a dense table.
const MAX_SUPPORT: usize = 1 << 24;

#[derive(Debug, Error, PartialEq)]
pub enum LawError {
    #[error("offspring law puts mass {0} at k = 0")]
    ZeroOffspringMass(f64),
    #[error("offspring law is degenerate at k = 1")]
    DegenerateAtOne,
    #[error("offspring law cannot be normalized: {0}")]
    NotNormalizable(String),
    #[error("offspring law has non-finite mean")]
    InfiniteMean,
    #[error("alpha = {0} is outside (1, 2)")]
    AlphaOutOfRange(f64),
    #[error("tail_eps = {0} is outside (0, 1e-4)")]
    TailEpsOutOfRange(f64),
    #[error("mark law is invalid: {0}")]
    InvalidMark(String),
}

/// How the stored pmf relates to the law it represents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupportInfo {
    /// The law is exactly the stored finite pmf.
    Exact { max: usize },
    /// An infinite-support law truncated at `max` with the removed analytic
    /// tail mass recorded, then renormalized.
    Truncated { max: usize, tail_mass: f64 },
}

/// Analytic tail of the untruncated law, when one is known. Used to decide
/// whether moments of the *untruncated* law are finite.
#[derive(Debug, Clone, Copy, PartialEq)]
enum TailBehavior {
    /// Finite support; every moment is finite.
    None,
    /// `p_k ≍ k^(−1−alpha)` as `k → ∞`.
    PowerLaw { alpha: f64 },
}

/// Result of a moment computation that may diverge for the untruncated law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Moment {
    Finite(f64),
    Divergent,
}

impl Moment {
    pub fn is_finite(&self) -> bool {
        matches!(self, Moment::Finite(_))
    }

    pub fn unwrap(self) -> f64 {
        match self {
            Moment::Finite(v) => v,
            Moment::Divergent => panic!("divergent moment"),
        }
    }
}

/// Verdict of [`integrability_advisor`]. The criterion behind it is
/// sufficient, not sharp, so the advisor never claims divergence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrability {
    Finite,
    Unknown,
}

/// A validated offspring law `(p_k)_{k≥1}`.
///
/// Immutable after construction and safe to share across threads.
#[derive(Debug, Clone)]
pub struct OffspringLaw {
    /// Dense probabilities, `probs[k]` is the mass at `k`; `probs[0] = 0`.
    probs: Vec<f64>,
    /// Cumulative sums of `probs`, cached for inverse-CDF sampling.
    cdf: Vec<f64>,
    mean: f64,
    support: SupportInfo,
    tail: TailBehavior,
}

impl OffspringLaw {
    fn from_dense(mut probs: Vec<f64>, support: SupportInfo, tail: TailBehavior) -> Result<Self, LawError> {
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(LawError::NotNormalizable(
                "negative or non-finite mass".into(),
            ));
        }
        let total = pairwise_sum(&probs);
        if !(total.is_finite() && total > 0.0) {
            return Err(LawError::NotNormalizable(format!("total mass {total}")));
        }
        if !probs.is_empty() && probs[0] > 0.0 {
            return Err(LawError::ZeroOffspringMass(probs[0] / total));
        }
        for p in probs.iter_mut() {
            *p /= total;
        }
        while probs.last() == Some(&0.0) {
            probs.pop();
        }
        if probs.len() < 2 {
            return Err(LawError::NotNormalizable("no mass at any k >= 1".into()));
        }
        if probs.len() == 2 {
            // all mass sits at k = 1
            return Err(LawError::DegenerateAtOne);
        }
        let mean = pairwise_sum(
            &probs
                .iter()
                .enumerate()
                .map(|(k, p)| k as f64 * p)
                .collect::<Vec<_>>(),
        );
        if !mean.is_finite() {
            return Err(LawError::InfiniteMean);
        }
        let mut cdf = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for &p in &probs {
            acc += p;
            cdf.push(acc);
        }
        let law = Self {
            probs,
            cdf,
            mean,
            support,
            tail,
        };
        debug_assert!((law.total_mass() - 1.0).abs() < 1e-12);
        debug_assert!(law.mean > 1.0);
        Ok(law)
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn support(&self) -> SupportInfo {
        self.support
    }

    pub fn max_children(&self) -> usize {
        self.probs.len() - 1
    }

    /// Iterates over `(k, p_k)` pairs with positive mass.
    pub fn atoms(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(k, p)| (k, *p))
    }

    pub fn prob(&self, k: usize) -> f64 {
        self.probs.get(k).copied().unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        pairwise_sum(&self.probs)
    }

    /// Inverse-CDF sample of a children count.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = open_unit(rng);
        let k = self.cdf.partition_point(|&c| c < u);
        k.min(self.probs.len() - 1).max(1)
    }

    /// `Σ p_k k log k`, or `Divergent` when the untruncated tail makes the
    /// sum infinite (only detectable for parametric families).
    pub fn klogk_moment(&self) -> Moment {
        if let TailBehavior::PowerLaw { alpha } = self.tail {
            if alpha <= 1.0 {
                return Moment::Divergent;
            }
        }
        let terms: Vec<f64> = self
            .atoms()
            .map(|(k, p)| p * k as f64 * (k as f64).ln())
            .collect();
        Moment::Finite(pairwise_sum(&terms))
    }

    /// `Σ p_k k^power`, tail-aware like [`Self::klogk_moment`].
    pub fn power_moment(&self, power: f64) -> Moment {
        if let TailBehavior::PowerLaw { alpha } = self.tail {
            if power >= alpha {
                return Moment::Divergent;
            }
        }
        let terms: Vec<f64> = self
            .atoms()
            .map(|(k, p)| p * (k as f64).powf(power))
            .collect();
        Moment::Finite(pairwise_sum(&terms))
    }

    /// `E[log ν]`, the almost-sure dimension of the visibility measure.
    pub fn mean_log(&self) -> f64 {
        let terms: Vec<f64> = self.atoms().map(|(k, p)| p * (k as f64).ln()).collect();
        pairwise_sum(&terms)
    }
}

/// Validates a raw pmf (keys are children counts, values are masses).
///
/// The input is normalized; laws violating the standing assumptions
/// (`p_0 = 0`, `p_1 < 1`) are rejected.
pub fn validate_offspring(raw_pmf: &[(usize, f64)]) -> Result<OffspringLaw, LawError> {
    let max = raw_pmf.iter().map(|&(k, _)| k).max().unwrap_or(0);
    if max > MAX_SUPPORT {
        return Err(LawError::NotNormalizable(format!(
            "support extends to {max}, beyond the dense-table limit {MAX_SUPPORT}"
        )));
    }
    let mut probs = vec![0.0; max + 1];
    for &(k, p) in raw_pmf {
        probs[k] += p;
    }
    OffspringLaw::from_dense(probs, SupportInfo::Exact { max }, TailBehavior::None)
}

/// The heavy-tailed family `p_k = α Γ(k−α) / (k! Γ(2−α))` for `k ≥ 2`,
/// with `α ∈ (1,2)`; asymptotically `p_k ~ (α/Γ(2−α)) k^(−1−α)`.
///
/// The pmf is built by the stable ratio recursion
/// `p_{k+1} = p_k (k−α)/(k+1)` from `p_2 = α/2`, truncated at the smallest
/// `K` with tail mass below `tail_eps`, then renormalized.
pub fn lin_offspring(alpha: f64, tail_eps: f64) -> Result<OffspringLaw, LawError> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(LawError::AlphaOutOfRange(alpha));
    }
    if !(tail_eps > 0.0 && tail_eps < 1e-4) {
        return Err(LawError::TailEpsOutOfRange(tail_eps));
    }
    let mut probs = vec![0.0, 0.0, alpha / 2.0];
    let mut cum = alpha / 2.0;
    let mut k = 2usize;
    let mut pk = alpha / 2.0;
    // The untruncated pmf sums to 1, so the analytic tail mass is 1 − cum.
    while 1.0 - cum >= tail_eps {
        pk *= (k as f64 - alpha) / (k as f64 + 1.0);
        k += 1;
        probs.push(pk);
        cum += pk;
        if k > MAX_SUPPORT {
            return Err(LawError::NotNormalizable(format!(
                "tail_eps = {tail_eps} needs support beyond {MAX_SUPPORT}"
            )));
        }
    }
    let tail_mass = 1.0 - cum;
    OffspringLaw::from_dense(
        probs,
        SupportInfo::Truncated { max: k, tail_mass },
        TailBehavior::PowerLaw { alpha },
    )
}

/// A mark law on `(1, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub enum MarkLaw {
    /// Γ ≡ g for a constant g > 1.
    PointMass { g: f64 },
    /// 1/Γ uniform on (0, 1).
    InverseUniform,
    /// `P(Γ ≥ s) = min(1, c s^(−a))`; support `[c^(1/a), ∞)`, `c ≥ 1`.
    ParetoTail { a: f64, c: f64 },
    /// An i.i.d. sample standing in for an unknown law.
    Empirical(Vec<f64>),
}

impl MarkLaw {
    pub fn point_mass(g: f64) -> Result<Self, LawError> {
        if !(g > 1.0 && g.is_finite()) {
            return Err(LawError::InvalidMark(format!("point mass at {g} <= 1")));
        }
        Ok(MarkLaw::PointMass { g })
    }

    pub fn pareto_tail(a: f64, c: f64) -> Result<Self, LawError> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(LawError::InvalidMark(format!("tail exponent a = {a}")));
        }
        if !(c >= 1.0 && c.is_finite()) {
            return Err(LawError::InvalidMark(format!(
                "pareto scale c = {c} < 1 puts mass at or below 1"
            )));
        }
        Ok(MarkLaw::ParetoTail { a, c })
    }

    pub fn empirical(samples: Vec<f64>) -> Result<Self, LawError> {
        if samples.is_empty() {
            return Err(LawError::InvalidMark("empty empirical sample".into()));
        }
        if samples.iter().any(|&x| !(x > 1.0) || !x.is_finite()) {
            return Err(LawError::InvalidMark(
                "empirical sample contains values <= 1".into(),
            ));
        }
        Ok(MarkLaw::Empirical(samples))
    }

    /// Draws a mark, always strictly greater than 1.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            MarkLaw::PointMass { g } => *g,
            MarkLaw::InverseUniform => 1.0 / open_unit(rng),
            MarkLaw::ParetoTail { a, c } => (c / open_unit(rng)).powf(1.0 / a),
            MarkLaw::Empirical(samples) => samples[rng.random_range(0..samples.len())],
        }
    }

    /// Exact CDF when one is available; empirical marks expose only the
    /// sampler.
    pub fn cdf(&self, x: f64) -> Option<f64> {
        match self {
            MarkLaw::PointMass { g } => Some(if x >= *g { 1.0 } else { 0.0 }),
            MarkLaw::InverseUniform => Some(if x <= 1.0 { 0.0 } else { 1.0 - 1.0 / x }),
            MarkLaw::ParetoTail { a, c } => {
                Some(if x.powf(*a) <= *c { 0.0 } else { 1.0 - c * x.powf(-a) })
            }
            MarkLaw::Empirical(_) => None,
        }
    }

    /// Declared exponent `a` with `P(Γ ≥ s) ≤ C s^(−a)`, when known.
    /// A point mass is bounded, which is reported as an infinite exponent.
    pub fn tail_exponent(&self) -> Option<f64> {
        match self {
            MarkLaw::PointMass { .. } => Some(f64::INFINITY),
            MarkLaw::InverseUniform => Some(1.0),
            MarkLaw::ParetoTail { a, .. } => Some(*a),
            MarkLaw::Empirical(_) => None,
        }
    }

    /// `E[(1 − Γ⁻¹)^alpha]`, exact (or deterministic quadrature) when the
    /// CDF is known, otherwise the average over the stored sample.
    pub fn moment_one_minus_inv(&self, alpha: f64) -> f64 {
        match self {
            MarkLaw::PointMass { g } => (1.0 - 1.0 / g).powf(alpha),
            MarkLaw::InverseUniform => 1.0 / (alpha + 1.0),
            MarkLaw::ParetoTail { a, c } => {
                // Γ = (c/U)^(1/a) for U uniform, so integrate over u in (0,1).
                tanh_sinh_01(|u| {
                    let one_minus_inv = -f64::exp_m1((u / c).ln() / a);
                    one_minus_inv.max(0.0).powf(alpha)
                })
            }
            MarkLaw::Empirical(samples) => {
                let terms: Vec<f64> = samples.iter().map(|&g| (1.0 - 1.0 / g).powf(alpha)).collect();
                pairwise_sum(&terms) / samples.len() as f64
            }
        }
    }

    /// Whether `E[−log(1 − Γ⁻¹)]` is finite. Exact for the parametric
    /// families; for empirical marks a tail-growth heuristic is used and
    /// `Unknown` is reported rather than a value.
    pub fn log_one_minus_inv_finite(&self) -> Integrability {
        match self {
            MarkLaw::PointMass { .. } | MarkLaw::InverseUniform | MarkLaw::ParetoTail { .. } => {
                Integrability::Finite
            }
            MarkLaw::Empirical(samples) => {
                let mut v: Vec<f64> = samples.iter().map(|&g| -f64::ln_1p(-1.0 / g)).collect();
                v.sort_unstable_by(f64::total_cmp);
                let total = pairwise_sum(&v);
                let top = &v[v.len() - (v.len() / 10).max(1)..];
                if pairwise_sum(top) > 0.5 * total {
                    Integrability::Unknown
                } else {
                    Integrability::Finite
                }
            }
        }
    }

    pub fn is_point_mass(&self) -> bool {
        matches!(self, MarkLaw::PointMass { .. })
    }
}

/// Uniform draw from the open interval (0, 1).
fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 && u < 1.0 {
            return u;
        }
    }
}

/// Sufficient-condition check for `E[κ(φ(T))] < ∞` from the mark's declared
/// tail bound `P(Γ ≥ s) ≤ C s^(−a)`:
/// finite when `a > 1`; when `a = 1` and `Σ p_k k log k < ∞`; or when
/// `0 < a < 1` and `Σ p_k k^(2−a) < ∞`. Anything else is `Unknown` — the
/// criterion is sufficient only, so divergence is never claimed.
pub fn integrability_advisor(mark: &MarkLaw, law: &OffspringLaw) -> Integrability {
    let Some(a) = mark.tail_exponent() else {
        return Integrability::Unknown;
    };
    if a > 1.0 {
        return Integrability::Finite;
    }
    if a == 1.0 {
        return match law.klogk_moment() {
            Moment::Finite(_) => Integrability::Finite,
            Moment::Divergent => Integrability::Unknown,
        };
    }
    if a > 0.0 {
        return match law.power_moment(2.0 - a) {
            Moment::Finite(_) => Integrability::Finite,
            Moment::Divergent => Integrability::Unknown,
        };
    }
    Integrability::Unknown
}

/// Tanh-sinh quadrature of `f` over (0, 1). Nodes are generated in a form
/// that stays accurate at both endpoints, which the endpoint-singular mark
/// integrands need.
fn tanh_sinh_01<F: Fn(f64) -> f64>(f: F) -> f64 {
    let h = 1.0 / 64.0;
    let n = 280; // t up to 4.375, weights below are already ~1e-300 there
    let mut terms = Vec::with_capacity(2 * n + 1);
    for k in -(n as i64)..=(n as i64) {
        let t = k as f64 * h;
        let s = std::f64::consts::FRAC_PI_2 * t.sinh();
        // x = 1/(1+e^(−2s)) is the node; dx/dt = (π/2) cosh t / (2 cosh² s)
        let x = 1.0 / (1.0 + (-2.0 * s).exp());
        let w = h * std::f64::consts::FRAC_PI_2 * t.cosh() / (2.0 * s.cosh().powi(2));
        if w > 0.0 && x > 0.0 && x < 1.0 {
            let v = f(x);
            if v != 0.0 {
                terms.push(w * v);
            }
        }
    }
    pairwise_sum(&terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{ks_distance_cdf, stream_rng};

    fn law12() -> OffspringLaw {
        validate_offspring(&[(1, 0.5), (2, 0.5)]).unwrap()
    }

    #[test]
    fn validates_and_computes_mean() {
        let law = law12();
        assert!((law.mean() - 1.5).abs() < 1e-12);
        let binary = validate_offspring(&[(2, 1.0)]).unwrap();
        assert!((binary.mean() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_mass_at_zero() {
        let err = validate_offspring(&[(0, 0.1), (2, 0.9)]).unwrap_err();
        assert!(matches!(err, LawError::ZeroOffspringMass(_)));
    }

    #[test]
    fn rejects_degenerate_single_child() {
        let err = validate_offspring(&[(1, 1.0)]).unwrap_err();
        assert_eq!(err, LawError::DegenerateAtOne);
    }

    #[test]
    fn rejects_unnormalizable() {
        assert!(matches!(
            validate_offspring(&[(2, 0.0)]),
            Err(LawError::NotNormalizable(_))
        ));
        assert!(matches!(
            validate_offspring(&[(2, -1.0)]),
            Err(LawError::NotNormalizable(_))
        ));
    }

    #[test]
    fn normalizes_unscaled_input() {
        let law = validate_offspring(&[(1, 2.0), (2, 2.0)]).unwrap();
        assert!((law.prob(1) - 0.5).abs() < 1e-15);
        assert!((law.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lin_law_closed_form_at_two() {
        let law = lin_offspring(1.5, 1e-8).unwrap();
        // p_2 = α Γ(2−α) / (2! Γ(2−α)) = α/2, up to the renormalization
        // factor 1/(1−tail) which is within 1e-8 of one.
        assert!((law.prob(2) - 0.75).abs() < 1e-7);
        assert!((law.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lin_law_ratio_recursion_exact() {
        let alpha = 1.3;
        let law = lin_offspring(alpha, 1e-6).unwrap();
        for k in 2..200 {
            let expect = law.prob(k) * (k as f64 - alpha) / (k as f64 + 1.0);
            assert!(
                (law.prob(k + 1) - expect).abs() <= 1e-15 * expect.abs().max(1e-300),
                "ratio broken at k={k}"
            );
        }
    }

    #[test]
    fn lin_law_matches_power_tail_asymptotics() {
        // p_k k^(1+α) Γ(2−α)/α → 1; for α = 3/2, Γ(1/2) = √π.
        let law = lin_offspring(1.5, 1e-8).unwrap();
        let k = 10_000usize;
        let ratio = law.prob(k) * (k as f64).powf(2.5) * std::f64::consts::PI.sqrt() / 1.5;
        assert!((ratio - 1.0).abs() < 0.05, "ratio = {ratio}");
    }

    #[test]
    fn lin_law_mean_is_alpha_over_alpha_minus_one() {
        let law = lin_offspring(1.5, 1e-8).unwrap();
        assert!((law.mean() - 3.0).abs() < 0.01, "mean = {}", law.mean());
    }

    #[test]
    fn lin_rejects_bad_parameters() {
        assert!(matches!(lin_offspring(2.0, 1e-8), Err(LawError::AlphaOutOfRange(_))));
        assert!(matches!(lin_offspring(1.0, 1e-8), Err(LawError::AlphaOutOfRange(_))));
        assert!(matches!(lin_offspring(1.5, 1e-3), Err(LawError::TailEpsOutOfRange(_))));
    }

    #[test]
    fn klogk_examples() {
        let binary = validate_offspring(&[(2, 1.0)]).unwrap();
        assert!((binary.klogk_moment().unwrap() - 2.0 * 2f64.ln()).abs() < 1e-12);
        assert!((law12().klogk_moment().unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!(lin_offspring(1.5, 1e-8).unwrap().klogk_moment().is_finite());
    }

    #[test]
    fn advisor_cases() {
        let law = law12();
        assert_eq!(
            integrability_advisor(&MarkLaw::InverseUniform, &law),
            Integrability::Finite
        );
        let pareto2 = MarkLaw::pareto_tail(2.0, 1.0).unwrap();
        assert_eq!(integrability_advisor(&pareto2, &law), Integrability::Finite);
        // 0 < a < 1 asks for Σ p_k k^(2−a); for the power-law family the
        // untruncated sum converges only when 2−a < α.
        let pareto_half = MarkLaw::pareto_tail(0.5, 1.0).unwrap();
        let lin12 = lin_offspring(1.2, 1e-6).unwrap();
        assert_eq!(lin12.power_moment(1.5), Moment::Divergent);
        assert_eq!(integrability_advisor(&pareto_half, &lin12), Integrability::Unknown);
        let pareto_09 = MarkLaw::pareto_tail(0.9, 1.0).unwrap();
        let lin15 = lin_offspring(1.5, 1e-6).unwrap();
        assert_eq!(integrability_advisor(&pareto_09, &lin15), Integrability::Finite);
        // finite-support laws always pass the 0 < a < 1 moment check
        assert_eq!(integrability_advisor(&pareto_half, &law), Integrability::Finite);
    }

    #[test]
    fn sampling_point_mass_law() {
        let binary = validate_offspring(&[(2, 1.0)]).unwrap();
        let mut rng = stream_rng(1, 0);
        for _ in 0..100 {
            assert_eq!(binary.sample(&mut rng), 2);
        }
    }

    #[test]
    fn sampling_mean_matches_law() {
        let law = law12();
        let mut rng = stream_rng(42, 0);
        let n = 1_000_000;
        let total: usize = (0..n).map(|_| law.sample(&mut rng)).sum();
        let mean = total as f64 / n as f64;
        assert!((mean - 1.5).abs() < 0.002, "mean = {mean}");
    }

    #[test]
    fn sampling_is_reproducible() {
        let law = law12();
        let draws = |seed| {
            let mut rng = stream_rng(seed, 3);
            (0..32).map(|_| law.sample(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draws(9), draws(9));
        assert_ne!(draws(9), draws(10));
    }

    #[test]
    fn inverse_uniform_ks() {
        let mark = MarkLaw::InverseUniform;
        let mut rng = stream_rng(5, 0);
        let inv: Vec<f64> = (0..1_000_000).map(|_| 1.0 / mark.sample(&mut rng)).collect();
        let d = ks_distance_cdf(&inv, |x| x.clamp(0.0, 1.0));
        assert!(d < 0.002, "KS distance {d}");
    }

    #[test]
    fn marks_exceed_one() {
        let mut rng = stream_rng(6, 0);
        let laws = [
            MarkLaw::InverseUniform,
            MarkLaw::point_mass(2.0).unwrap(),
            MarkLaw::pareto_tail(1.5, 1.0).unwrap(),
            MarkLaw::pareto_tail(0.7, 2.0).unwrap(),
            MarkLaw::empirical(vec![1.5, 2.5, 7.0]).unwrap(),
        ];
        for law in &laws {
            for _ in 0..2000 {
                let g = law.sample(&mut rng);
                assert!(g > 1.0, "{law:?} produced {g}");
            }
        }
    }

    #[test]
    fn mark_constructors_reject_bad_input() {
        assert!(MarkLaw::point_mass(1.0).is_err());
        assert!(MarkLaw::pareto_tail(1.0, 0.5).is_err());
        assert!(MarkLaw::empirical(vec![0.5, 2.0]).is_err());
        assert!(MarkLaw::empirical(vec![]).is_err());
    }

    #[test]
    fn moment_one_minus_inv_closed_forms() {
        // inverse uniform: ∫ (1−u)^α du = 1/(α+1)
        for alpha in [0.5, 1.0, 2.0, 3.7] {
            let got = MarkLaw::InverseUniform.moment_one_minus_inv(alpha);
            assert!((got - 1.0 / (alpha + 1.0)).abs() < 1e-12);
        }
        let pm = MarkLaw::point_mass(2.0).unwrap();
        assert!((pm.moment_one_minus_inv(3.0) - 0.125).abs() < 1e-15);
        // pareto(a=1, c=1) is the same law as inverse_uniform
        let p = MarkLaw::pareto_tail(1.0, 1.0).unwrap();
        for alpha in [0.5, 1.0, 2.0] {
            let got = p.moment_one_minus_inv(alpha);
            assert!(
                (got - 1.0 / (alpha + 1.0)).abs() < 1e-10,
                "alpha={alpha} got={got}"
            );
        }
    }

    #[test]
    fn log_moment_finiteness() {
        assert_eq!(
            MarkLaw::InverseUniform.log_one_minus_inv_finite(),
            Integrability::Finite
        );
        let mut rng = stream_rng(8, 0);
        let tame: Vec<f64> = (0..4000).map(|_| MarkLaw::InverseUniform.sample(&mut rng)).collect();
        assert_eq!(
            MarkLaw::empirical(tame).unwrap().log_one_minus_inv_finite(),
            Integrability::Finite
        );
        // a sample whose −log(1−Γ⁻¹) mean is carried entirely by marks
        // sitting just above 1; no finite-mean claim is justified there
        let mut wild = vec![1e6; 900];
        wild.extend(vec![1.0 + 1e-12; 100]);
        assert_eq!(
            MarkLaw::empirical(wild).unwrap().log_one_minus_inv_finite(),
            Integrability::Unknown
        );
    }
}
