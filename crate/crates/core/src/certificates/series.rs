//! Taylor series at `x = 0` of `√((a−x)(b−x)(β−x))` and its quotient by `b − x`.

use serde::{Deserialize, Serialize};

use super::CertError;

/// Coefficients `c₀ … c_N` of a truncated power series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries {
    pub coeffs: Vec<f64>,
}

impl PowerSeries {
    pub fn truncation(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn get(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// Cauchy product truncated to the shorter length.
    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| (0..=k).map(|i| self.coeffs[i] * other.coeffs[k - i]).sum())
            .collect();
        PowerSeries { coeffs }
    }
}

fn distinct(u: f64, v: f64) -> bool {
    (u - v).abs() > 1e-12 * u.abs().max(v.abs())
}

/// Coefficients of `(a−x)(b−x)(β−x)` in ascending order.
pub(crate) fn cubic_coeffs(a: f64, b: f64, beta: f64) -> [f64; 4] {
    [
        a * b * beta,
        -(a * b + a * beta + b * beta),
        a + b + beta,
        -1.0,
    ]
}

/// Coefficients `B₀ … B_N` of `√((a−x)(b−x)(β−x))`, with `B₀ = +√(abβ)`.
///
/// Uses the recurrence from `2 f g′ = f′ g`:
/// `B_{k+1} = −Σ_{j=1..3} f_j (2k − 3j + 2) B_{k−j+1} / (2 f₀ (k+1))`.
pub fn series_sqrt_cubic(a: f64, b: f64, beta: f64, n: usize) -> Result<PowerSeries, CertError> {
    if !(a > 0.0 && b > 0.0 && beta > 0.0)
        || !distinct(a, b)
        || !distinct(a, beta)
        || !distinct(b, beta)
    {
        return Err(CertError::DegenerateCubic { a, b, beta });
    }
    let f = cubic_coeffs(a, b, beta);
    let mut c = Vec::with_capacity(n + 1);
    c.push(f[0].sqrt());
    for k in 0..n {
        let mut acc = 0.0;
        for (j, fj) in f.iter().enumerate().skip(1) {
            if let Some(idx) = (k + 1).checked_sub(j) {
                acc += fj * (2.0 * k as f64 - 3.0 * j as f64 + 2.0) * c[idx];
            }
        }
        c.push(-acc / (2.0 * f[0] * (k as f64 + 1.0)));
    }
    Ok(PowerSeries { coeffs: c })
}

/// Coefficients of `s(x)/(b − x)`: `C_k = (C_{k−1} + B_k)/b`.
pub fn series_divide_linear(s: &PowerSeries, b: f64) -> PowerSeries {
    let mut prev = 0.0;
    let coeffs = s
        .coeffs
        .iter()
        .map(|&bk| {
            prev = (prev + bk) / b;
            prev
        })
        .collect();
    PowerSeries { coeffs }
}

/// Series of the cubic in `ξ = x/a`, i.e. with parameters `(1, b/a, β/a)`.
///
/// Coefficient `k` equals `B_k · a^{k − 3/2}`.
pub(crate) fn scaled_sqrt_series(
    a: f64,
    b: f64,
    beta: f64,
    n: usize,
) -> Result<PowerSeries, CertError> {
    series_sqrt_cubic(1.0, b / a, beta / a, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt_f(a: f64, b: f64, beta: f64, x: f64) -> f64 {
        ((a - x) * (b - x) * (beta - x)).sqrt()
    }

    // Central finite differences for derivatives 1..3 at 0, divided by k!.
    fn fd_coeffs(g: impl Fn(f64) -> f64, h: f64) -> [f64; 4] {
        let d1 = (g(h) - g(-h)) / (2.0 * h);
        let d2 = (g(h) - 2.0 * g(0.0) + g(-h)) / (h * h);
        let d3 = (g(2.0 * h) - 2.0 * g(h) + 2.0 * g(-h) - g(-2.0 * h)) / (2.0 * h * h * h);
        [g(0.0), d1, d2 / 2.0, d3 / 6.0]
    }

    #[test]
    fn leading_coefficient() {
        let s = series_sqrt_cubic(9.0, 4.0, 2.5, 6).unwrap();
        assert!((s.coeffs[0] - 90f64.sqrt()).abs() < 1e-14);
        assert_eq!(s.truncation(), 6);
        let tiny = series_sqrt_cubic(9.0, 4.0, 1e-12, 2).unwrap();
        assert!(tiny.coeffs[0] < 1e-5);
    }

    #[test]
    fn matches_finite_differences() {
        let s = series_sqrt_cubic(9.0, 4.0, 2.5, 4).unwrap();
        let fd = fd_coeffs(|x| sqrt_f(9.0, 4.0, 2.5, x), 1e-3);
        for (k, (c, d)) in s.coeffs.iter().zip(&fd).enumerate().take(3).skip(1) {
            assert!((c - d).abs() < 1e-6 * c.abs().max(1.0), "k={k}");
        }
        // third derivative needs a larger step to stay clear of rounding
        let fd3 = fd_coeffs(|x| sqrt_f(9.0, 4.0, 2.5, x), 1e-2)[3];
        assert!((s.coeffs[3] - fd3).abs() < 1e-3 * s.coeffs[3].abs());
    }

    #[test]
    fn quotient_matches_finite_differences() {
        let s = series_divide_linear(&series_sqrt_cubic(9.0, 4.0, 6.0, 4).unwrap(), 4.0);
        let fd = fd_coeffs(|x| sqrt_f(9.0, 4.0, 6.0, x) / (4.0 - x), 1e-3);
        assert!((s.coeffs[2] - fd[2]).abs() < 1e-6);
    }

    #[test]
    fn geometric_quotient_of_constant() {
        let s = PowerSeries {
            coeffs: vec![3.0, 0.0, 0.0, 0.0],
        };
        let c = series_divide_linear(&s, 2.0);
        for (k, ck) in c.coeffs.iter().enumerate() {
            assert!((ck - 3.0 / 2f64.powi(k as i32 + 1)).abs() < 1e-15);
        }
    }

    #[test]
    fn quotient_times_linear_restores() {
        let s = series_sqrt_cubic(9.0, 4.0, 6.0, 10).unwrap();
        let c = series_divide_linear(&s, 4.0);
        for k in 0..10 {
            let back = 4.0 * c.get(k) - if k > 0 { c.get(k - 1) } else { 0.0 };
            assert!((back - s.get(k)).abs() < 1e-12 * s.get(0));
        }
    }

    #[test]
    fn scaled_series_relation() {
        let s = series_sqrt_cubic(9.0, 4.0, 2.5, 6).unwrap();
        let t = scaled_sqrt_series(9.0, 4.0, 2.5, 6).unwrap();
        for k in 0..=6 {
            let expect = s.coeffs[k] * 9f64.powf(k as f64 - 1.5);
            assert!((t.coeffs[k] - expect).abs() < 1e-12 * expect.abs().max(1e-3));
        }
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            series_sqrt_cubic(9.0, 4.0, 4.0, 3),
            Err(CertError::DegenerateCubic { .. })
        ));
        assert!(series_sqrt_cubic(9.0, 4.0, 0.0, 3).is_err());
    }
}
