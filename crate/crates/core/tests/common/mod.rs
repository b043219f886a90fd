#![allow(dead_code)]

use tar1_core::estimators::QuarticSums;
use tar1_core::QnConvention;

/// Prints one status line and returns whether it passed.
pub fn report(id: &str, what: &str, observed: impl std::fmt::Display, pass: bool) -> bool {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id}: {what} (observed {observed})");
    pass
}

/// Argmin of `Q_n` over `lo..=hi` with step `step`, by direct evaluation
/// of the residual sum of squares.
pub fn grid_argmin(values: &[f64], r: f64, lo: f64, hi: f64, step: f64) -> f64 {
    let steps = ((hi - lo) / step).round() as usize;
    (0..=steps)
        .map(|k| lo + k as f64 * step)
        .map(|x| (x, q_direct(values, r, x)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
        .0
}

/// `Q_n(x)` written out from its definition with `x` on the upper regime.
pub fn q_direct(values: &[f64], r: f64, x: f64) -> f64 {
    let mut q = 0.0;
    for t in 1..values.len() {
        let prev = values[t - 1];
        let (up, low) = if prev > r { (prev, 0.0) } else { (0.0, prev) };
        let e = values[t] - x * up - low / x;
        q += e * e;
    }
    q
}

/// `dQ_n/dx` from the chain rule, plus the summed magnitude of its terms.
pub fn dq_direct(values: &[f64], r: f64, x: f64) -> (f64, f64) {
    let mut d = 0.0;
    let mut mag = 0.0;
    for t in 1..values.len() {
        let prev = values[t - 1];
        let (up, low) = if prev > r { (prev, 0.0) } else { (0.0, prev) };
        let e = values[t] - x * up - low / x;
        let term = 2.0 * e * (-up + low / (x * x));
        d += term;
        mag += term.abs();
    }
    (d, mag)
}

/// Sign of `(A x^4 - B x^3 + C x - D) / x^3` from the library's sums.
pub fn quartic_sign(values: &[f64], r: f64, x: f64) -> f64 {
    let sums = QuarticSums::from_values(values, r, QnConvention::XOnUpper);
    (sums.polynomial().eval(x) / x.powi(3)).signum()
}
