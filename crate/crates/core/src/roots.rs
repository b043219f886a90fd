//! Real-root isolation for small polynomials.
//!
//! Roots of `p` are separated by roots of `p'`, so recursing on the
//! derivative splits `[lo, hi]` into pieces on which `p` is monotone. Each
//! piece holds at most one root, found by bisection. No closed forms are
//! used, so clustered or near-multiple roots do not lose accuracy.

/// Polynomial with coefficients in ascending order: `c[0] + c[1] x + ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect::<Vec<_>>();
        Polynomial::new(if coeffs.is_empty() { vec![0.0] } else { coeffs })
    }

    /// All real roots in `[lo, hi]`, ascending. Returns nothing for the
    /// zero polynomial.
    pub fn real_roots_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.isolate(lo, hi).0
    }

    /// Roots in `[lo, hi]` together with the interior critical points used
    /// to isolate them.
    pub fn isolate(&self, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        match self.degree() {
            0 => (Vec::new(), Vec::new()),
            1 => {
                let x = -self.coeffs[0] / self.coeffs[1];
                let roots = if (lo..=hi).contains(&x) { vec![x] } else { Vec::new() };
                (roots, Vec::new())
            }
            _ => {
                let critical = self.derivative().real_roots_in(lo, hi);
                let mut knots = Vec::with_capacity(critical.len() + 2);
                knots.push(lo);
                knots.extend(critical.iter().copied().filter(|&c| c > lo && c < hi));
                knots.push(hi);
                let mut roots = Vec::new();
                for w in knots.windows(2) {
                    let (a, b) = (w[0], w[1]);
                    let (fa, fb) = (self.eval(a), self.eval(b));
                    if fa == 0.0 {
                        roots.push(a);
                    } else if fa.signum() != fb.signum() && fb != 0.0 {
                        roots.push(self.bisect(a, b, fa));
                    }
                }
                if self.eval(hi) == 0.0 {
                    roots.push(hi);
                }
                roots.dedup();
                (roots, critical)
            }
        }
    }

    /// Bisection to machine resolution on a bracket with `f(a) = fa`.
    fn bisect(&self, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
        for _ in 0..2100 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let fm = self.eval(mid);
            if fm == 0.0 {
                return mid;
            }
            if fm.signum() == fa.signum() {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn factored_quartic() {
        // (x-1)(x-2)(x-3)(x-4) = x^4 - 10x^3 + 35x^2 - 50x + 24
        let p = Polynomial::new(vec![24.0, -50.0, 35.0, -10.0, 1.0]);
        let roots = p.real_roots_in(0.0, 10.0);
        assert!(close(&roots, &[1.0, 2.0, 3.0, 4.0], 1e-12), "{roots:?}");
        assert!(close(&p.real_roots_in(1.5, 3.5), &[2.0, 3.0], 1e-12));
    }

    #[test]
    fn clustered_roots() {
        let mul = |a: &[f64], b: &[f64]| {
            let mut out = vec![0.0; a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        };
        // (x - 1)(x - 1 - 1e-6)(x + 2)
        let e = 1e-6;
        let c = mul(&mul(&[-1.0, 1.0], &[-(1.0 + e), 1.0]), &[2.0, 1.0]);
        let roots = Polynomial::new(c).real_roots_in(-5.0, 5.0);
        assert_eq!(roots.len(), 3, "{roots:?}");
        assert!((roots[0] + 2.0).abs() < 1e-12);
        assert!((roots[1] - 1.0).abs() < 1e-9);
        assert!((roots[2] - 1.0 - e).abs() < 1e-9);
    }

    #[test]
    fn no_real_roots() {
        let p = Polynomial::new(vec![1.0, 0.0, 1.0]);
        assert!(p.real_roots_in(-10.0, 10.0).is_empty());
        assert!(Polynomial::new(vec![0.0]).real_roots_in(-1.0, 1.0).is_empty());
    }

    #[test]
    fn root_on_endpoint() {
        let p = Polynomial::new(vec![-2.0, 1.0, 0.0]);
        assert_eq!(p.degree(), 1);
        assert_eq!(p.real_roots_in(2.0, 3.0), vec![2.0]);
        let q = Polynomial::new(vec![-4.0, 0.0, 1.0]);
        assert_eq!(q.real_roots_in(0.0, 2.0), vec![2.0]);
    }
}
