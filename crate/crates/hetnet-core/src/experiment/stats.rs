//! Small sample-statistics helpers for experiment aggregation.

use statrs::distribution::{ContinuousCDF, StudentsT};

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (n−1 denominator).
pub fn sample_std(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    (ss / (n - 1) as f64).sqrt()
}

/// Half-width of the 95% Student-t confidence interval for the mean.
/// Zero for fewer than two samples.
pub fn ci95_half_width(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
        .expect("valid t distribution")
        .inverse_cdf(0.975);
    t * sample_std(values) / (n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn t_quantile_reference_value() {
        // Two-sided 95% quantile with 4 degrees of freedom is 2.776.
        let values = [1.0, 2.0, 3.0, 4.0, 5.0];
        let hw = ci95_half_width(&values);
        let std = sample_std(&values);
        let t = hw * (values.len() as f64).sqrt() / std;
        assert!((t - 2.776).abs() < 1e-3, "t = {t}");
    }

    #[test]
    fn half_width_shrinks_like_inverse_sqrt_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let draw = |rng: &mut ChaCha8Rng, n: usize| -> Vec<f64> {
            (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
        };
        let hw_small: f64 = (0..200)
            .map(|_| ci95_half_width(&draw(&mut rng, 25)))
            .sum::<f64>()
            / 200.0;
        let hw_large: f64 = (0..200)
            .map(|_| ci95_half_width(&draw(&mut rng, 400)))
            .sum::<f64>()
            / 200.0;
        let ratio = hw_small / hw_large;
        // 16x the samples should shrink the interval ~4x.
        assert!((3.0..5.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn degenerate_inputs_yield_zero_width() {
        assert_eq!(ci95_half_width(&[]), 0.0);
        assert_eq!(ci95_half_width(&[3.0]), 0.0);
        assert_eq!(mean(&[]), 0.0);
    }
}
