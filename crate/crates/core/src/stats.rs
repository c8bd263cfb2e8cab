//! Small statistical helpers shared by the Monte Carlo estimators:
//! seedable RNG streams, pairwise summation, bootstrap standard errors.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Number of logical work chunks used by every parallel loop in this crate.
///
/// Partial results are produced per chunk and combined in chunk order, so a
/// computation gives bit-identical results for any worker count.
pub const PAR_CHUNKS: usize = 64;

/// Dedicated RNG for the stream `id` of a run seeded with `seed`.
///
/// ChaCha streams are independent by construction, so workers never share
/// or split a generator.
pub fn stream_rng(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Sums a slice by recursive halving. Deterministic and more accurate than a
/// running sum for long vectors of mixed magnitudes.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    pairwise_sum(xs) / xs.len() as f64
}

/// Sample standard deviation (n−1 denominator).
pub fn sample_sd(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let dev: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
    (pairwise_sum(&dev) / (n - 1) as f64).sqrt()
}

/// Standard error of the sample mean.
pub fn se_of_mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    sample_sd(xs) / (xs.len() as f64).sqrt()
}

/// A point estimate together with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub se: f64,
}

impl Estimate {
    /// Whether `target` lies within `k` standard errors of the estimate.
    pub fn covers(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.se
    }
}

/// Bootstrap standard error of `statistic` over resamples of row indices.
///
/// `statistic` receives the resampled index set and must reduce it to a
/// scalar. 200 resamples are enough for an SE used at the 3-sigma level.
pub fn bootstrap_se<F>(n: usize, resamples: usize, rng: &mut ChaCha8Rng, statistic: F) -> f64
where
    F: Fn(&[usize]) -> f64,
{
    use rand::Rng;
    assert!(n > 0, "bootstrap over an empty sample");
    let mut stats = Vec::with_capacity(resamples);
    let mut idx = vec![0usize; n];
    for _ in 0..resamples {
        for slot in idx.iter_mut() {
            *slot = rng.random_range(0..n);
        }
        stats.push(statistic(&idx));
    }
    sample_sd(&stats)
}

/// Bootstrap SE of a ratio-of-means E[a]/E[b] over paired samples.
pub fn bootstrap_ratio_se(
    a: &[f64],
    b: &[f64],
    resamples: usize,
    rng: &mut ChaCha8Rng,
) -> f64 {
    assert_eq!(a.len(), b.len());
    bootstrap_se(a.len(), resamples, rng, |idx| {
        let num: f64 = idx.iter().map(|&i| a[i]).sum();
        let den: f64 = idx.iter().map(|&i| b[i]).sum();
        num / den
    })
}

/// Two-sample Kolmogorov-Smirnov distance between empirical CDFs.
///
/// Both inputs are sorted internally; ties are handled by advancing both
/// cursors past equal values before comparing.
pub fn ks_distance_samples(xs: &[f64], ys: &[f64]) -> f64 {
    let mut a: Vec<f64> = xs.to_vec();
    let mut b: Vec<f64> = ys.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] <= v {
            i += 1;
        }
        while j < b.len() && b[j] <= v {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    sup
}

/// One-sample KS distance against a CDF given as a closure.
pub fn ks_distance_cdf<F: Fn(f64) -> f64>(xs: &[f64], cdf: F) -> f64 {
    let mut a: Vec<f64> = xs.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    let n = a.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in a.iter().enumerate() {
        let f = cdf(x);
        sup = sup.max((f - i as f64 / n).abs());
        sup = sup.max(((i + 1) as f64 / n - f).abs());
    }
    sup
}

/// Splits `0..n` into [`PAR_CHUNKS`] round-robin index classes. Class `c`
/// holds the indices `i ≡ c (mod PAR_CHUNKS)`, which balances triangular
/// loops without making the partition depend on the worker count.
pub fn round_robin_chunk(n: usize, chunk: usize) -> impl Iterator<Item = usize> {
    (chunk..n).step_by(PAR_CHUNKS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-9);
    }

    #[test]
    fn stream_rngs_are_reproducible_and_distinct() {
        use rand::Rng;
        let a: u64 = stream_rng(7, 0).random();
        let a2: u64 = stream_rng(7, 0).random();
        let b: u64 = stream_rng(7, 1).random();
        assert_eq!(a, a2);
        assert_ne!(a, b);
    }

    #[test]
    fn ks_of_identical_samples_is_zero() {
        let xs = [0.1, 0.4, 0.4, 0.9];
        assert_eq!(ks_distance_samples(&xs, &xs), 0.0);
    }

    #[test]
    fn ks_of_disjoint_samples_is_one() {
        let xs = [0.0, 0.1];
        let ys = [5.0, 6.0];
        assert_eq!(ks_distance_samples(&xs, &ys), 1.0);
    }

    #[test]
    fn bootstrap_se_close_to_classic_se() {
        let xs: Vec<f64> = (0..4000).map(|i| ((i * 2654435761_usize) % 1000) as f64).collect();
        let mut rng = stream_rng(3, 0);
        let se = bootstrap_se(xs.len(), 300, &mut rng, |idx| {
            idx.iter().map(|&i| xs[i]).sum::<f64>() / idx.len() as f64
        });
        let classic = se_of_mean(&xs);
        assert!((se - classic).abs() / classic < 0.15, "se={se} classic={classic}");
    }
}
