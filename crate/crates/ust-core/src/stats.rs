//! Small statistical helpers for the sampling tests: chi-square statistics
//! for goodness-of-fit and two-sample homogeneity. Quantiles are left to
//! the test harness.

/// Chi-square goodness-of-fit statistic of observed counts against expected
/// counts (same total). Returns (statistic, degrees of freedom).
pub fn chi_square_gof(observed: &[u64], expected: &[f64]) -> (f64, usize) {
    assert_eq!(observed.len(), expected.len());
    assert!(expected.iter().all(|&e| e > 0.0), "expected counts positive");
    let stat = observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum();
    (stat, observed.len().saturating_sub(1))
}

/// Goodness-of-fit against the uniform distribution over the categories.
pub fn chi_square_uniform(observed: &[u64]) -> (f64, usize) {
    let total: u64 = observed.iter().sum();
    let expected = vec![total as f64 / observed.len() as f64; observed.len()];
    chi_square_gof(observed, &expected)
}

/// Two-sample homogeneity statistic over matched categories. Degrees of
/// freedom: (categories - 1) * (samples - 1) = categories - 1 here.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> (f64, usize) {
    assert_eq!(a.len(), b.len());
    let total_a: u64 = a.iter().sum();
    let total_b: u64 = b.iter().sum();
    let grand = (total_a + total_b) as f64;
    let mut stat = 0.0;
    for (&oa, &ob) in a.iter().zip(b) {
        let row = (oa + ob) as f64;
        if row == 0.0 {
            continue;
        }
        let ea = row * total_a as f64 / grand;
        let eb = row * total_b as f64 / grand;
        stat += (oa as f64 - ea).powi(2) / ea + (ob as f64 - eb).powi(2) / eb;
    }
    (stat, a.len().saturating_sub(1))
}
