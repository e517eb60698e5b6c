//! Small numeric helpers shared across modules.

/// log(sum(exp(x))) with max-shift for stability. Returns -inf for an
/// empty slice or all -inf inputs.
pub fn logsumexp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

/// Log-density of a univariate normal.
pub fn log_normal_pdf(x: f64, mean: f64, variance: f64) -> f64 {
    let diff = x - mean;
    -0.5 * (2.0 * std::f64::consts::PI * variance).ln() - diff * diff / (2.0 * variance)
}

/// Round half away from zero, as in everyday hand rounding.
pub fn round_half_up(x: f64) -> f64 {
    x.round()
}
