// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Bounded discrete power laws (degrees, community sizes) and per-node
//! mixing-coefficient distributions.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SamplingError {
    #[error("invalid power law: {0}")]
    InvalidPowerLaw(String),
    #[error("invalid mixing distribution: {0}")]
    InvalidMixing(String),
    #[error("no k_min in 1..{k_max} reaches mean degree {target} with exponent {exponent}")]
    InfeasibleMean {
        target: f64,
        exponent: f64,
        k_max: usize,
    },
    #[error("cannot split {n} nodes into communities with sizes in [{min}, {max}]")]
    SizesUnattainable { n: usize, min: usize, max: usize },
}

/// Discrete power law `P(k) ∝ k^-exponent` on `min..=max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawSpec {
    pub exponent: f64,
    pub min: usize,
    pub max: usize,
}

impl PowerLawSpec {
    pub fn new(exponent: f64, min: usize, max: usize) -> Result<Self, SamplingError> {
        let spec = PowerLawSpec { exponent, min, max };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), SamplingError> {
        if !(self.exponent > 1.0) || !self.exponent.is_finite() {
            return Err(SamplingError::InvalidPowerLaw(format!(
                "exponent must be finite and > 1, got {}",
                self.exponent
            )));
        }
        if self.min == 0 || self.min > self.max {
            return Err(SamplingError::InvalidPowerLaw(format!(
                "bounds must satisfy 1 <= min <= max, got [{}, {}]",
                self.min, self.max
            )));
        }
        Ok(())
    }
}

/// Exact mean of the truncated power law, by direct summation.
pub fn power_law_mean(exponent: f64, min: usize, max: usize) -> f64 {
    if min == max {
        return min as f64;
    }
    let (mut num, mut den) = (0.0, 0.0);
    // Summing from the tail keeps the small terms from being swamped.
    for k in (min..=max).rev() {
        let w = (k as f64).powf(-exponent);
        num += k as f64 * w;
        den += w;
    }
    num / den
}

/// Integer lower cutoff whose truncated power-law mean on `[k_min, k_max]`
/// is closest to `target_mean`.
pub fn solve_k_min(target_mean: f64, gamma: f64, k_max: usize) -> Result<usize, SamplingError> {
    if !(gamma > 1.0) {
        return Err(SamplingError::InvalidPowerLaw(format!(
            "exponent must be > 1, got {gamma}"
        )));
    }
    if !(target_mean > 1.0) || !(target_mean < k_max as f64) {
        return Err(SamplingError::InfeasibleMean {
            target: target_mean,
            exponent: gamma,
            k_max,
        });
    }
    if power_law_mean(gamma, k_max - 1, k_max) < target_mean {
        return Err(SamplingError::InfeasibleMean {
            target: target_mean,
            exponent: gamma,
            k_max,
        });
    }
    // The mean is increasing in k_min: find the first cutoff reaching the
    // target, then compare it with its predecessor.
    let (mut lo, mut hi) = (1, k_max - 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if power_law_mean(gamma, mid, k_max) >= target_mean {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    if lo > 1 {
        let above = power_law_mean(gamma, lo, k_max) - target_mean;
        let below = target_mean - power_law_mean(gamma, lo - 1, k_max);
        if below < above {
            return Ok(lo - 1);
        }
    }
    Ok(lo)
}

/// Power law with its CDF tabulated once, sampled by inverse transform.
#[derive(Debug, Clone)]
pub struct DiscretePowerLaw {
    spec: PowerLawSpec,
    cdf: Vec<f64>,
}

impl DiscretePowerLaw {
    pub fn new(spec: PowerLawSpec) -> Result<Self, SamplingError> {
        spec.validate()?;
        let weights: Vec<f64> = (spec.min..=spec.max)
            .map(|k| (k as f64).powf(-spec.exponent))
            .collect();
        let total: f64 = weights.iter().rev().sum();
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w;
                acc / total
            })
            .collect();
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        Ok(DiscretePowerLaw { spec, cdf })
    }

    pub fn spec(&self) -> PowerLawSpec {
        self.spec
    }

    /// `P(K <= k)`.
    pub fn cdf(&self, k: usize) -> f64 {
        if k < self.spec.min {
            0.0
        } else if k >= self.spec.max {
            1.0
        } else {
            self.cdf[k - self.spec.min]
        }
    }

    pub fn mean(&self) -> f64 {
        power_law_mean(self.spec.exponent, self.spec.min, self.spec.max)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let idx = self.cdf.partition_point(|&c| c <= u);
        self.spec.min + idx.min(self.cdf.len() - 1)
    }
}

pub fn sample_power_law<R: Rng + ?Sized>(
    count: usize,
    spec: PowerLawSpec,
    rng: &mut R,
) -> Result<Vec<usize>, SamplingError> {
    let law = DiscretePowerLaw::new(spec)?;
    Ok((0..count).map(|_| law.sample(rng)).collect())
}

/// Community sizes drawn from `spec` that sum to exactly `n`.
///
/// Sizes are drawn until their running total reaches `n`; the final draw is
/// cut down to close the gap. If that leaves it below `spec.min`, it is
/// dropped and its nodes are handed out one at a time to the currently
/// smallest communities. A minimum below 2 is raised to 2.
pub fn sample_community_sizes<R: Rng + ?Sized>(
    n: usize,
    spec: PowerLawSpec,
    rng: &mut R,
) -> Result<Vec<usize>, SamplingError> {
    let spec = PowerLawSpec {
        min: spec.min.max(2),
        max: spec.max.max(2),
        ..spec
    };
    let law = DiscretePowerLaw::new(spec)?;
    let unattainable = SamplingError::SizesUnattainable {
        n,
        min: spec.min,
        max: spec.max,
    };
    if n < spec.min {
        return Err(unattainable);
    }
    let mut sizes = Vec::new();
    let mut total = 0;
    while total < n {
        let s = law.sample(rng);
        sizes.push(s);
        total += s;
    }
    let last = sizes.pop().unwrap_or(0);
    let filled = total - last;
    let remainder = n - filled;
    if remainder >= spec.min {
        sizes.push(remainder);
        return Ok(sizes);
    }
    for _ in 0..remainder {
        let smallest = sizes
            .iter()
            .enumerate()
            .filter(|(_, &s)| s < spec.max)
            .min_by_key(|&(i, &s)| (s, i))
            .map(|(i, _)| i);
        match smallest {
            Some(i) => sizes[i] += 1,
            None => return Err(unattainable),
        }
    }
    Ok(sizes)
}

/// If the sequence sum is odd, bump the lowest-id entry that is still below
/// `max` so that stubs can be paired.
pub fn make_sum_even(seq: &mut [usize], max: usize) {
    if seq.iter().sum::<usize>() % 2 == 0 {
        return;
    }
    if let Some(k) = seq.iter_mut().find(|k| **k < max) {
        *k += 1;
    } else if let Some(k) = seq.iter_mut().find(|k| **k > 0) {
        *k -= 1;
    }
}

/// Distribution of the per-node mixing coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MixingSpec {
    /// Every node gets the same value, as in the classic benchmark.
    Constant {
        mu: f64,
    },
    Uniform {
        low: f64,
        high: f64,
    },
    /// Piecewise-linear quantile function through `(probability, value)`
    /// points. Probabilities run from 0 to 1, both columns nondecreasing.
    Quantiles {
        points: Vec<(f64, f64)>,
    },
}

impl MixingSpec {
    pub fn validate(&self) -> Result<(), SamplingError> {
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        match self {
            MixingSpec::Constant { mu } if !unit(*mu) => Err(SamplingError::InvalidMixing(
                format!("constant mu {mu} outside [0, 1]"),
            )),
            MixingSpec::Uniform { low, high } if !(unit(*low) && unit(*high) && low <= high) => {
                Err(SamplingError::InvalidMixing(format!(
                    "uniform range [{low}, {high}] must satisfy 0 <= low <= high <= 1"
                )))
            }
            MixingSpec::Quantiles { points } => {
                if points.len() < 2 {
                    return Err(SamplingError::InvalidMixing(
                        "quantile table needs at least two points".into(),
                    ));
                }
                if points[0].0 != 0.0 || points[points.len() - 1].0 != 1.0 {
                    return Err(SamplingError::InvalidMixing(
                        "quantile probabilities must start at 0 and end at 1".into(),
                    ));
                }
                if points.iter().any(|&(p, v)| !unit(p) || !unit(v)) {
                    return Err(SamplingError::InvalidMixing(
                        "quantile table entries must lie in [0, 1]".into(),
                    ));
                }
                if points
                    .windows(2)
                    .any(|w| w[1].0 < w[0].0 || w[1].1 < w[0].1)
                {
                    return Err(SamplingError::InvalidMixing(
                        "quantile table must be nondecreasing".into(),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn quantile(&self, u: f64) -> f64 {
        match self {
            MixingSpec::Constant { mu } => *mu,
            MixingSpec::Uniform { low, high } => low + (high - low) * u,
            MixingSpec::Quantiles { points } => {
                let i = points
                    .windows(2)
                    .position(|w| u < w[1].0)
                    .unwrap_or(points.len() - 2);
                let ((p0, v0), (p1, v1)) = (points[i], points[i + 1]);
                if p1 > p0 {
                    v0 + (v1 - v0) * (u - p0) / (p1 - p0)
                } else {
                    v1
                }
            }
        }
    }
}

pub fn sample_mixing<R: Rng + ?Sized>(
    count: usize,
    spec: &MixingSpec,
    rng: &mut R,
) -> Result<Vec<f64>, SamplingError> {
    spec.validate()?;
    Ok((0..count)
        .map(|_| {
            let u: f64 = rng.gen();
            spec.quantile(u).clamp(0.0, 1.0)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Exhaustive search: evaluate every candidate cutoff.
    fn k_min_by_enumeration(target: f64, gamma: f64, k_max: usize) -> usize {
        (1..k_max)
            .min_by(|&a, &b| {
                let da = (power_law_mean(gamma, a, k_max) - target).abs();
                let db = (power_law_mean(gamma, b, k_max) - target).abs();
                da.total_cmp(&db)
            })
            .unwrap()
    }

    #[test]
    fn solve_k_min_matches_enumeration() {
        let k = solve_k_min(30.0, 3.0, 1000).unwrap();
        assert_eq!(k, k_min_by_enumeration(30.0, 3.0, 1000));
        assert_eq!(k, 16);
        assert!((power_law_mean(3.0, k, 1000) - 30.0).abs() < 1.0);
        for &(target, gamma, k_max) in &[(5.0, 2.5, 50), (12.0, 2.0, 300), (3.5, 3.0, 20)] {
            assert_eq!(
                solve_k_min(target, gamma, k_max).unwrap(),
                k_min_by_enumeration(target, gamma, k_max)
            );
        }
    }

    #[test]
    fn solve_k_min_infeasible() {
        assert!(matches!(
            solve_k_min(999.5, 3.0, 1000),
            Err(SamplingError::InfeasibleMean { .. })
        ));
    }

    #[test]
    fn point_mass() {
        assert_eq!(power_law_mean(3.0, 7, 7), 7.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let spec = PowerLawSpec::new(3.0, 5, 5).unwrap();
        assert!(sample_power_law(100, spec, &mut rng)
            .unwrap()
            .iter()
            .all(|&k| k == 5));
    }

    #[test]
    fn power_law_moments_and_cdf() {
        let spec = PowerLawSpec::new(3.0, 2, 100).unwrap();
        let law = DiscretePowerLaw::new(spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 100_000;
        let draws = sample_power_law(n, spec, &mut rng).unwrap();
        assert!(draws.iter().all(|&k| (2..=100).contains(&k)));

        let exact_mean = power_law_mean(3.0, 2, 100);
        let mean = draws.iter().sum::<usize>() as f64 / n as f64;
        assert!((mean - exact_mean).abs() / exact_mean < 0.05);

        // Exact CDF by summation, independent of the sampler's table.
        let z: f64 = (2..=100).map(|k| (k as f64).powi(-3)).sum();
        let mut counts = vec![0usize; 101];
        for &k in &draws {
            counts[k] += 1;
        }
        let (mut emp, mut exact, mut ks) = (0.0, 0.0, 0.0f64);
        for k in 2..=100 {
            emp += counts[k] as f64 / n as f64;
            exact += (k as f64).powi(-3) / z;
            ks = ks.max((emp - exact).abs());
            assert!((law.cdf(k) - exact).abs() < 1e-12);
        }
        assert!(ks < 0.01, "kolmogorov distance {ks}");
    }

    #[test]
    fn community_sizes_point_mass() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let spec = PowerLawSpec::new(2.0, 10, 10).unwrap();
        assert_eq!(
            sample_community_sizes(100, spec, &mut rng).unwrap(),
            vec![10; 10]
        );
    }

    #[test]
    fn community_sizes_sum_exactly() {
        let spec = PowerLawSpec::new(2.0, 16, 1000).unwrap();
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sizes = sample_community_sizes(10_000, spec, &mut rng).unwrap();
            assert_eq!(sizes.iter().sum::<usize>(), 10_000);
            assert!(sizes.iter().all(|&s| (16..=1000).contains(&s)));
        }
    }

    #[test]
    fn community_sizes_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let spec = PowerLawSpec::new(2.0, 10, 10).unwrap();
        assert!(sample_community_sizes(5, spec, &mut rng).is_err());
        assert!(matches!(
            sample_community_sizes(12, spec, &mut rng),
            Err(SamplingError::SizesUnattainable { .. })
        ));
    }

    /// Discrete power-law MLE on `[lo, hi]` by golden-section search over the
    /// exponent.
    fn fit_exponent(values: &[usize], lo: usize, hi: usize) -> f64 {
        let xs: Vec<f64> = values
            .iter()
            .filter(|&&v| v >= lo && v <= hi)
            .map(|&v| v as f64)
            .collect();
        let sum_log: f64 = xs.iter().map(|x| x.ln()).sum();
        let nll = |a: f64| {
            let z: f64 = (lo..=hi).map(|k| (k as f64).powf(-a)).sum();
            a * sum_log + xs.len() as f64 * z.ln()
        };
        let (mut a, mut b) = (1.01, 5.0);
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..100 {
            let c = b - phi * (b - a);
            let d = a + phi * (b - a);
            if nll(c) < nll(d) {
                b = d;
            } else {
                a = c;
            }
        }
        (a + b) / 2.0
    }

    #[test]
    fn community_size_exponent_fit() {
        let spec = PowerLawSpec::new(2.0, 16, 1000).unwrap();
        let mut fitted = 0.0;
        for seed in 0..5 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sizes = sample_community_sizes(10_000, spec, &mut rng).unwrap();
            fitted += fit_exponent(&sizes, 15, 700);
        }
        fitted /= 5.0;
        assert!((fitted - 2.0).abs() < 0.5, "fitted exponent {fitted}");
    }

    #[test]
    fn parity_fix() {
        let mut seq = vec![3, 2, 2];
        make_sum_even(&mut seq, 3);
        assert_eq!(seq, vec![3, 3, 2]);
        let mut even = vec![1, 1];
        make_sum_even(&mut even, 5);
        assert_eq!(even, vec![1, 1]);
    }

    #[test]
    fn mixing_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        assert_eq!(
            sample_mixing(4, &MixingSpec::Constant { mu: 0.3 }, &mut rng).unwrap(),
            vec![0.3; 4]
        );
        let table = MixingSpec::Quantiles {
            points: vec![(0.0, 0.5), (1.0, 0.5)],
        };
        assert!(sample_mixing(100, &table, &mut rng)
            .unwrap()
            .iter()
            .all(|&m| m == 0.5));

        let n = 100_000;
        let mut draws = sample_mixing(
            n,
            &MixingSpec::Uniform {
                low: 0.0,
                high: 1.0,
            },
            &mut rng,
        )
        .unwrap();
        draws.sort_by(f64::total_cmp);
        let ks = draws
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                ((i + 1) as f64 / n as f64 - x)
                    .abs()
                    .max((x - i as f64 / n as f64).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.01, "kolmogorov distance {ks}");
    }

    #[test]
    fn mixing_validation() {
        assert!(MixingSpec::Constant { mu: 1.2 }.validate().is_err());
        assert!(MixingSpec::Uniform {
            low: 0.6,
            high: 0.2
        }
        .validate()
        .is_err());
        assert!(MixingSpec::Quantiles {
            points: vec![(0.0, 0.7), (1.0, 0.2)]
        }
        .validate()
        .is_err());
        let bimodal = MixingSpec::Quantiles {
            points: vec![(0.0, 0.0), (0.5, 0.1), (0.5, 0.8), (1.0, 1.0)],
        };
        assert!(bimodal.validate().is_ok());
        assert!((bimodal.quantile(0.25) - 0.05).abs() < 1e-15);
        assert!((bimodal.quantile(0.75) - 0.9).abs() < 1e-15);
    }

    #[test]
    fn determinism() {
        let spec = PowerLawSpec::new(3.0, 16, 1000).unwrap();
        let a = sample_power_law(1000, spec, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = sample_power_law(1000, spec, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a, b);
    }
}
