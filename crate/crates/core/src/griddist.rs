//! Arithmetic on probability distributions discretized on a uniform lattice.
//!
//! A [`GridDist`] is a set of point masses on the lattice `{ i·step }`,
//! stored as a weight vector plus the lattice index of its first atom.
//! Anchoring every grid to the same global lattice keeps convolution exact
//! index arithmetic: supports add, no snapping happens inside `convolve`,
//! and mixtures of convolution powers align without interpolation.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use std::cell::RefCell;
use thiserror::Error;

use crate::laws::OffspringLaw;
use crate::stats::pairwise_sum;

/// Output length from which convolutions switch to the transform path.
const FFT_THRESHOLD: usize = 4096;
/// Negative mass clamped after a transform convolution must stay below this,
/// otherwise the direct path recomputes the result.
const FFT_CLAMP_LIMIT: f64 = 1e-9;
/// Atoms with less mass than this are ignored by pair expectations.
const PAIR_PRUNE: f64 = 1e-14;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("grid steps differ: {0} vs {1}")]
    StepMismatch(f64, f64),
    #[error("integrand is not finite at x = {x} carrying mass {mass}")]
    NonFiniteIntegrand { x: f64, mass: f64 },
}

/// A discretized probability distribution on a uniform grid.
///
/// Weights are non-negative and sum to one; values are immutable after
/// construction and all operations are pure functions.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDist {
    lo_idx: i64,
    step: f64,
    weights: Vec<f64>,
}

/// Nearest lattice index of `x`, ties toward the lower index.
pub fn snap_index(x: f64, step: f64) -> i64 {
    let t = x / step;
    (t - 0.5).ceil() as i64
}

impl GridDist {
    /// All mass on the grid point nearest `x`.
    pub fn dirac(x: f64, step: f64) -> Self {
        assert!(step > 0.0, "step must be positive");
        Self {
            lo_idx: snap_index(x, step),
            step,
            weights: vec![1.0],
        }
    }

    /// Builds a distribution from `(x, weight)` atoms snapped to the lattice.
    pub fn from_atoms(atoms: &[(f64, f64)], step: f64) -> Self {
        assert!(!atoms.is_empty());
        let idx: Vec<i64> = atoms.iter().map(|&(x, _)| snap_index(x, step)).collect();
        let lo = *idx.iter().min().unwrap();
        let hi = *idx.iter().max().unwrap();
        let mut weights = vec![0.0; (hi - lo + 1) as usize];
        for (&i, &(_, w)) in idx.iter().zip(atoms) {
            weights[(i - lo) as usize] += w;
        }
        let mut d = Self {
            lo_idx: lo,
            step,
            weights,
        };
        d.renormalize();
        d
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn lo(&self) -> f64 {
        self.lo_idx as f64 * self.step
    }

    pub fn hi(&self) -> f64 {
        (self.lo_idx + self.weights.len() as i64 - 1) as f64 * self.step
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Grid point at weight index `i`.
    pub fn x_at(&self, i: usize) -> f64 {
        (self.lo_idx + i as i64) as f64 * self.step
    }

    /// Iterates over `(x, weight)` atoms with positive mass.
    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(|(i, w)| (self.x_at(i), *w))
    }

    pub fn total_mass(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    pub fn mean(&self) -> f64 {
        let terms: Vec<f64> = self.atoms().map(|(x, w)| x * w).collect();
        pairwise_sum(&terms)
    }

    /// Mass strictly below `threshold`. Grid points within a quarter step of
    /// the threshold count as *at* it, so float noise on lattice values
    /// cannot flip the comparison.
    pub fn mass_below(&self, threshold: f64) -> f64 {
        let cut = threshold - 0.25 * self.step;
        let terms: Vec<f64> = self.atoms().filter(|&(x, _)| x < cut).map(|(_, w)| w).collect();
        pairwise_sum(&terms)
    }

    /// Mass strictly above `threshold`, with the same quarter-step guard.
    pub fn mass_above(&self, threshold: f64) -> f64 {
        let cut = threshold + 0.25 * self.step;
        let terms: Vec<f64> = self.atoms().filter(|&(x, _)| x > cut).map(|(_, w)| w).collect();
        pairwise_sum(&terms)
    }

    /// Zero-pads so the grid covers at least `[lo, hi]` on the lattice.
    pub fn embed(&self, lo: f64, hi: f64) -> Self {
        let lo_idx = snap_index(lo, self.step).min(self.lo_idx);
        let hi_idx = snap_index(hi, self.step).max(self.lo_idx + self.weights.len() as i64 - 1);
        let mut weights = vec![0.0; (hi_idx - lo_idx + 1) as usize];
        let off = (self.lo_idx - lo_idx) as usize;
        weights[off..off + self.weights.len()].copy_from_slice(&self.weights);
        Self {
            lo_idx,
            step: self.step,
            weights,
        }
    }

    fn renormalize(&mut self) {
        let total = pairwise_sum(&self.weights);
        debug_assert!(
            (total - 1.0).abs() < 1e-10 || total > 0.0,
            "mass not conserved: {total}"
        );
        for w in self.weights.iter_mut() {
            *w /= total;
        }
    }

    /// Drops zero weights at both ends (the represented law is unchanged).
    fn trimmed(&self) -> (i64, &[f64]) {
        let first = self.weights.iter().position(|&w| w != 0.0).unwrap_or(0);
        let last = self
            .weights
            .iter()
            .rposition(|&w| w != 0.0)
            .unwrap_or(self.weights.len() - 1);
        (self.lo_idx + first as i64, &self.weights[first..=last])
    }

    /// Checks the structural invariants; used by tests and debug builds.
    pub fn validate(&self) -> Result<(), String> {
        if self.weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err("negative or non-finite weight".into());
        }
        let total = self.total_mass();
        if (total - 1.0).abs() > 1e-10 {
            return Err(format!("total mass {total}"));
        }
        let span = self.hi() - self.lo();
        let cells = (self.weights.len() - 1) as f64;
        if (span - cells * self.step).abs() > 1e-12 * (1.0 + span.abs()) {
            return Err("grid span is not a multiple of step".into());
        }
        Ok(())
    }
}

/// Law of `f(X)`: each atom's mass moves to the grid point nearest `f(x)`,
/// ties toward the lower index. Output bounds are the extremes of the mapped
/// atoms, snapped to the lattice.
pub fn pushforward<F: Fn(f64) -> f64>(d: &GridDist, f: F) -> GridDist {
    let mapped: Vec<(f64, f64)> = d.atoms().map(|(x, w)| (f(x), w)).collect();
    GridDist::from_atoms(&mapped, d.step)
}

/// Law of `X + Y` for independent `X ~ a`, `Y ~ b` on a common lattice.
///
/// Short vectors use the direct product sum; long ones a zero-padded FFT.
/// Tiny negative weights produced by the transform are clamped and, if the
/// clamped mass is not negligible, the direct path recomputes the result.
pub fn convolve(a: &GridDist, b: &GridDist) -> Result<GridDist, GridError> {
    if (a.step - b.step).abs() > 1e-12 * a.step.abs().max(b.step.abs()) {
        return Err(GridError::StepMismatch(a.step, b.step));
    }
    let (alo, aw) = a.trimmed();
    let (blo, bw) = b.trimmed();
    let out_len = aw.len() + bw.len() - 1;
    let small = aw.len().min(bw.len()) <= 32;
    let weights = if small || out_len < FFT_THRESHOLD {
        direct_convolve(aw, bw)
    } else {
        let (mut w, clamped) = fft_convolve(aw, bw);
        if clamped >= FFT_CLAMP_LIMIT {
            w = direct_convolve(aw, bw);
        }
        w
    };
    let mut out = GridDist {
        lo_idx: alo + blo,
        step: a.step,
        weights,
    };
    out.renormalize();
    Ok(out)
}

fn direct_convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    // iterate the shorter factor outermost so the inner loop streams
    let (short, long, flip) = if a.len() <= b.len() {
        (a, b, false)
    } else {
        (b, a, true)
    };
    let _ = flip; // addition is symmetric, order only matters for cache use
    for (i, &si) in short.iter().enumerate() {
        if si == 0.0 {
            continue;
        }
        for (j, &lj) in long.iter().enumerate() {
            out[i + j] += si * lj;
        }
    }
    out
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Returns the clamped (negative) mass removed from the raw transform output.
fn fft_convolve(a: &[f64], b: &[f64]) -> (Vec<f64>, f64) {
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    let mut fa: Vec<Complex<f64>> = a.iter().map(|&x| Complex::new(x, 0.0)).collect();
    fa.resize(size, Complex::new(0.0, 0.0));
    let mut fb: Vec<Complex<f64>> = b.iter().map(|&x| Complex::new(x, 0.0)).collect();
    fb.resize(size, Complex::new(0.0, 0.0));
    PLANNER.with(|p| {
        let fwd = p.borrow_mut().plan_fft_forward(size);
        fwd.process(&mut fa);
        fwd.process(&mut fb);
    });
    for (x, y) in fa.iter_mut().zip(fb.iter()) {
        *x *= *y;
    }
    PLANNER.with(|p| {
        let inv = p.borrow_mut().plan_fft_inverse(size);
        inv.process(&mut fa);
    });
    let scale = 1.0 / size as f64;
    let mut clamped = 0.0;
    let weights: Vec<f64> = fa[..out_len]
        .iter()
        .map(|c| {
            let v = c.re * scale;
            if v < 0.0 {
                clamped -= v;
                0.0
            } else {
                v
            }
        })
        .collect();
    (weights, clamped)
}

/// Mixture `Σ_k p_k · d^{*k}` — the law of a sum of `ν ~ law` independent
/// copies of `X ~ d`. Convolution powers are built incrementally,
/// `d^{*k} = d^{*(k−1)} * d`.
pub fn offspring_sum(d: &GridDist, law: &OffspringLaw) -> Result<GridDist, GridError> {
    let kmax = law.max_children();
    // support bounds of the mixture, for preallocation
    let (dlo, dw) = d.trimmed();
    let dhi = dlo + dw.len() as i64 - 1;
    let lo = (1..=kmax as i64).map(|k| k * dlo).min().unwrap();
    let hi = (1..=kmax as i64).map(|k| k * dhi).max().unwrap();
    let mut acc = vec![0.0; (hi - lo + 1) as usize];
    let mut power = d.clone();
    for k in 1..=kmax {
        if k > 1 {
            power = convolve(&power, d)?;
        }
        let pk = law.prob(k);
        if pk == 0.0 {
            continue;
        }
        let (plo, pw) = power.trimmed();
        let off = (plo - lo) as usize;
        for (i, &w) in pw.iter().enumerate() {
            acc[off + i] += pk * w;
        }
    }
    let mut out = GridDist {
        lo_idx: lo,
        step: d.step,
        weights: acc,
    };
    out.renormalize();
    Ok(out)
}

/// `Σ f(x_i) w_i`. Errors if `f` is not finite at an atom carrying more
/// than negligible mass (1e-12); lighter atoms are skipped.
pub fn expectation<F: Fn(f64) -> f64>(f: F, d: &GridDist) -> Result<f64, GridError> {
    let mut terms = Vec::with_capacity(d.len());
    for (x, w) in d.atoms() {
        let v = f(x);
        if !v.is_finite() {
            if w > 1e-12 {
                return Err(GridError::NonFiniteIntegrand { x, mass: w });
            }
            continue;
        }
        terms.push(v * w);
    }
    Ok(pairwise_sum(&terms))
}

/// `Σ_{ij} f(x_i, x_j) w_i w_j` over two independent copies, pruning atom
/// pairs below mass 1e-14.
pub fn pair_expectation<F: Fn(f64, f64) -> f64>(f: F, d: &GridDist) -> Result<f64, GridError> {
    let atoms: Vec<(f64, f64)> = d.atoms().filter(|&(_, w)| w > PAIR_PRUNE).collect();
    let mut rows = Vec::with_capacity(atoms.len());
    for &(xi, wi) in &atoms {
        let mut terms = Vec::with_capacity(atoms.len());
        for &(xj, wj) in &atoms {
            let v = f(xi, xj);
            let w = wi * wj;
            if !v.is_finite() {
                if w > 1e-12 {
                    return Err(GridError::NonFiniteIntegrand { x: xi, mass: w });
                }
                continue;
            }
            terms.push(v * w);
        }
        rows.push(pairwise_sum(&terms));
    }
    Ok(pairwise_sum(&rows))
}

/// Pair expectation of a separable kernel `f(x, y) = g(x)·h(y)`, which
/// factorizes into a product of two single expectations.
pub fn pair_expectation_separable<G, H>(g: G, h: H, d: &GridDist) -> Result<f64, GridError>
where
    G: Fn(f64) -> f64,
    H: Fn(f64) -> f64,
{
    Ok(expectation(g, d)? * expectation(h, d)?)
}

/// Sup-norm distance between the two CDFs on the union lattice.
pub fn kolmogorov_distance(a: &GridDist, b: &GridDist) -> f64 {
    if a.weights.is_empty() || b.weights.is_empty() {
        return 1.0;
    }
    let (alo, aw) = a.trimmed();
    let (blo, bw) = b.trimmed();
    let lo = alo.min(blo);
    let hi = (alo + aw.len() as i64 - 1).max(blo + bw.len() as i64 - 1);
    let mut ca = 0.0;
    let mut cb = 0.0;
    let mut sup: f64 = 0.0;
    for idx in lo..=hi {
        let ia = idx - alo;
        if ia >= 0 && (ia as usize) < aw.len() {
            ca += aw[ia as usize];
        }
        let ib = idx - blo;
        if ib >= 0 && (ib as usize) < bw.len() {
            cb += bw[ib as usize];
        }
        sup = sup.max((ca - cb).abs());
    }
    sup
}
