//! Sums of geometric waiting times, `X(a, b) = X_a + ... + X_b` with
//! `X_i ~ Geom((N - i) / N)` on `{1, 2, ...}`: the number of coupon draws made
//! while holding between `a` and `b` distinct coupons out of `N`.

use rand::distributions::Open01;
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeomSumSpec {
    coupons: u64,
    a: u64,
    b: u64,
}

impl GeomSumSpec {
    /// Requires `0 <= a <= b < N` and `N >= 2`.
    pub fn new(coupons: u64, a: u64, b: u64) -> Result<Self> {
        if coupons < 2 {
            return Err(Error::InvalidGeomSpec(format!(
                "N = {coupons} must be at least 2"
            )));
        }
        if a > b {
            return Err(Error::InvalidGeomSpec(format!("a = {a} exceeds b = {b}")));
        }
        if b >= coupons {
            return Err(Error::InvalidGeomSpec(format!(
                "b = {b} must be below N = {coupons}"
            )));
        }
        Ok(Self { coupons, a, b })
    }

    pub fn coupons(&self) -> u64 {
        self.coupons
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// Success probability of `X_i`.
    fn p(&self, i: u64) -> f64 {
        (self.coupons - i) as f64 / self.coupons as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    /// Sum of inverse-transform geometric samples.
    GeometricSum,
    /// Explicit uniform coupon draws with replacement.
    CouponDraws,
}

/// `E[X(a, b)] = sum_{i=a}^{b} N / (N - i) = N (H_{N-a} - H_{N-b-1})`.
pub fn expected_partial_collect(spec: &GeomSumSpec) -> f64 {
    let n = spec.coupons as f64;
    (spec.a..=spec.b)
        .map(|i| n / (spec.coupons - i) as f64)
        .sum()
}

/// `Var[X(a, b)] = sum (1 - p_i) / p_i^2`, the geometrics being independent.
pub fn variance_partial_collect(spec: &GeomSumSpec) -> f64 {
    (spec.a..=spec.b)
        .map(|i| {
            let p = spec.p(i);
            (1.0 - p) / (p * p)
        })
        .sum()
}

/// `H_m` by direct summation, `H_0 = 0`.
pub fn harmonic(m: u64) -> f64 {
    (1..=m).map(|i| 1.0 / i as f64).sum()
}

/// Number of Bernoulli(`p`) trials up to and including the first success.
pub fn sample_geometric<R: Rng + ?Sized>(p: f64, rng: &mut R) -> u64 {
    debug_assert!(p > 0.0 && p <= 1.0);
    if p >= 1.0 {
        return 1;
    }
    let u: f64 = rng.sample(Open01);
    let x = (u.ln() / (-p).ln_1p()).ceil();
    (x as u64).max(1)
}

pub fn simulate_partial_collect<R: Rng + ?Sized>(
    spec: &GeomSumSpec,
    rng: &mut R,
    mode: SampleMode,
) -> u64 {
    match mode {
        SampleMode::GeometricSum => (spec.a..=spec.b)
            .map(|i| sample_geometric(spec.p(i), rng))
            .sum(),
        SampleMode::CouponDraws => {
            let n = spec.coupons as usize;
            let mut held = vec![false; n];
            held[..spec.a as usize].iter_mut().for_each(|h| *h = true);
            let mut count = spec.a;
            let mut draws = 0;
            while count <= spec.b {
                draws += 1;
                let c = rng.gen_range(0..n);
                if !held[c] {
                    held[c] = true;
                    count += 1;
                }
            }
            draws
        }
    }
}

/// Monte Carlo estimate of a probability with a 95% normal-approximation
/// half-width.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailEstimate {
    pub p_hat: f64,
    pub trials: u64,
    pub ci_halfwidth: f64,
}

impl TailEstimate {
    pub fn from_hits(hits: u64, trials: u64) -> Self {
        let p_hat = hits as f64 / trials as f64;
        Self {
            p_hat,
            trials,
            ci_halfwidth: 1.96 * (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
        }
    }
}

/// Estimates `Pr[X(N - k, N - 2) <= s]`.
///
/// `X(N - k, N - 2)` is at least `k - 1`, so for `s < k - 1` the event is
/// impossible and the estimate is exactly zero without sampling. Each trial
/// stops summing as soon as the running total exceeds `s`.
pub fn lemma1_tail_estimate<R: Rng + ?Sized>(
    coupons: u64,
    k: u64,
    s: u64,
    trials: u64,
    rng: &mut R,
) -> Result<TailEstimate> {
    if k < 2 || k >= coupons {
        return Err(Error::InvalidGeomSpec(format!(
            "need 2 <= k < N, got k = {k}, N = {coupons}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidGeomSpec("trials must be positive".into()));
    }
    if s < k - 1 {
        return Ok(TailEstimate::from_hits(0, trials));
    }
    let spec = GeomSumSpec::new(coupons, coupons - k, coupons - 2)?;
    let mut hits = 0;
    for _ in 0..trials {
        let mut total = 0;
        let mut within = true;
        for i in spec.a..=spec.b {
            total += sample_geometric(spec.p(i), rng);
            if total > s {
                within = false;
                break;
            }
        }
        hits += within as u64;
    }
    Ok(TailEstimate::from_hits(hits, trials))
}

/// `exp(-k^0.99)`.
pub fn lemma1_bound(k: u64) -> f64 {
    (-(k as f64).powf(0.99)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Two-sample Kolmogorov-Smirnov statistic.
    fn ks_statistic(a: &[u64], b: &[u64]) -> f64 {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        a.sort_unstable();
        b.sort_unstable();
        let (mut i, mut j, mut d) = (0, 0, 0.0f64);
        while i < a.len() && j < b.len() {
            let x = a[i].min(b[j]);
            while i < a.len() && a[i] == x {
                i += 1;
            }
            while j < b.len() && b[j] == x {
                j += 1;
            }
            d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
        }
        d
    }

    #[test]
    fn spec_validation() {
        assert!(GeomSumSpec::new(1, 0, 0).is_err());
        assert!(GeomSumSpec::new(5, 3, 2).is_err());
        assert!(GeomSumSpec::new(5, 0, 5).is_err());
        assert!(GeomSumSpec::new(5, 0, 4).is_ok());
    }

    #[test]
    fn expectation_examples() {
        let e = expected_partial_collect(&GeomSumSpec::new(2, 0, 1).unwrap());
        assert!((e - 3.0).abs() < 1e-12);
        assert!((e - 2.0 * (harmonic(2) - harmonic(0))).abs() < 1e-12);
        let e = expected_partial_collect(&GeomSumSpec::new(4, 2, 2).unwrap());
        assert!((e - 2.0).abs() < 1e-12);
        for n in [2, 7, 1000] {
            let e = expected_partial_collect(&GeomSumSpec::new(n, 0, 0).unwrap());
            assert!((e - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn expectation_matches_harmonic_difference() {
        for (n, a, b) in [(10, 0, 9), (100, 17, 80), (9999, 9000, 9997)] {
            let spec = GeomSumSpec::new(n, a, b).unwrap();
            let via_h = n as f64 * (harmonic(n - a) - harmonic(n - b - 1));
            let direct = expected_partial_collect(&spec);
            assert!((via_h - direct).abs() < 1e-9 * direct, "{n} {a} {b}");
        }
    }

    #[test]
    fn two_coupon_mean() {
        let spec = GeomSumSpec::new(2, 0, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let trials = 100_000;
        let sum: u64 = (0..trials)
            .map(|_| simulate_partial_collect(&spec, &mut rng, SampleMode::GeometricSum))
            .sum();
        let mean = sum as f64 / trials as f64;
        let se = (variance_partial_collect(&spec) / trials as f64).sqrt();
        assert!((mean - 3.0).abs() < 3.0 * se, "mean {mean}");
    }

    #[test]
    fn sampling_modes_agree_in_distribution() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let trials = 10_000;
        for (n, a, b) in [(5, 0, 4), (20, 3, 15), (50, 40, 48)] {
            let spec = GeomSumSpec::new(n, a, b).unwrap();
            let geo: Vec<u64> = (0..trials)
                .map(|_| simulate_partial_collect(&spec, &mut rng, SampleMode::GeometricSum))
                .collect();
            let coupons: Vec<u64> = (0..trials)
                .map(|_| simulate_partial_collect(&spec, &mut rng, SampleMode::CouponDraws))
                .collect();
            let d = ks_statistic(&geo, &coupons);
            // 1% critical value for equal sample sizes
            let crit = 1.628 * (2.0 / trials as f64).sqrt();
            assert!(d < crit, "N={n} a={a} b={b}: D={d} >= {crit}");
        }
    }

    #[test]
    fn geometric_support_starts_at_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(sample_geometric(1.0, &mut rng), 1);
        assert!((0..10_000).all(|_| sample_geometric(0.9, &mut rng) >= 1));
    }

    #[test]
    fn impossible_tail_is_exactly_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let est = lemma1_tail_estimate(100, 10, 8, 1000, &mut rng).unwrap();
        assert_eq!(est.p_hat, 0.0);
        assert_eq!(est.ci_halfwidth, 0.0);
    }

    #[test]
    fn far_above_mean_is_certain() {
        let (n, k) = (1000u64, 50u64);
        let s = (10.0 * n as f64 * (k as f64).ln()).ceil() as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let est = lemma1_tail_estimate(n, k, s, 2000, &mut rng).unwrap();
        assert!(est.p_hat >= 1.0 - est.ci_halfwidth);
    }

    #[test]
    fn tail_preconditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(lemma1_tail_estimate(100, 1, 10, 10, &mut rng).is_err());
        assert!(lemma1_tail_estimate(100, 100, 10, 10, &mut rng).is_err());
        assert!(lemma1_tail_estimate(100, 10, 10, 0, &mut rng).is_err());
    }

    #[test]
    fn bound_values() {
        assert!((lemma1_bound(1) - (-1.0f64).exp()).abs() < 1e-15);
        let expect = (-(10f64.powf(3.96))).exp();
        assert_eq!(lemma1_bound(10_000), expect);
        let mut prev = lemma1_bound(1);
        for k in 2..200 {
            let b = lemma1_bound(k);
            assert!(b < prev);
            prev = b;
        }
    }
}
