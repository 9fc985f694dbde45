//! Win-rate statistics.

/// Wilson score interval for a binomial proportion at confidence `z`
/// (1.96 for 95%). Returns (low, high) in [0, 1].
pub fn wilson(successes: f64, trials: f64, z: f64) -> (f64, f64) {
    if trials <= 0.0 {
        return (0.0, 1.0);
    }
    let p = successes / trials;
    let z2 = z * z;
    let denom = 1.0 + z2 / trials;
    let centre = p + z2 / (2.0 * trials);
    let spread = z * (p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)).sqrt();
    (((centre - spread) / denom).max(0.0), ((centre + spread) / denom).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::wilson;

    #[test]
    fn wilson_brackets_the_proportion() {
        let (lo, hi) = wilson(80.0, 100.0, 1.96);
        assert!(lo < 0.8 && 0.8 < hi);
        assert!(lo > 0.70 && hi < 0.88);
        let (lo, hi) = wilson(0.0, 50.0, 1.96);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.15);
        let (lo, hi) = wilson(50.0, 50.0, 1.96);
        assert!(lo > 0.9);
        assert_eq!(hi, 1.0);
    }
}
