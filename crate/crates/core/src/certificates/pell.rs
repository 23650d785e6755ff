//! Polynomial Pell equations `E p² − F q² = c` in the variable `s`.
//!
//! The seed comes from the Laurent expansion of `√(F/E)` at `s = ∞`: for a
//! solution, `p − √(F/E)·q` vanishes to high order there, which pins `q` as
//! the null vector of a small Hankel system and `p` as the polynomial part of
//! `√(F/E)·q`. The pair is then polished by Gauss–Newton on all coefficients
//! of the defect.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::dynamics::MagicKind;

/// Residual above which a Pell pair is rejected.
pub const PELL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PellPair {
    /// Coefficients of `p`, ascending in `s`.
    pub p: Vec<f64>,
    /// Coefficients of `q`, ascending in `s`.
    pub q: Vec<f64>,
    /// Max-norm of the coefficients of `E p² − F q² − c`.
    pub residual: f64,
}

impl PellPair {
    pub fn degrees(&self) -> (usize, usize) {
        (self.p.len() - 1, self.q.len() - 1)
    }
}

/// The equation `E p² − F q² = c` with the expected degrees of `p` and `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct PellProblem {
    pub e: Vec<f64>,
    pub f: Vec<f64>,
    pub c: f64,
    pub deg_p: usize,
    pub deg_q: usize,
}

/// Monic polynomial with the given roots, ascending coefficients.
pub fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    roots
        .iter()
        .fold(vec![1.0], |acc, &r| poly_mul(&acc, &[-r, 1.0]))
}

pub fn poly_mul(u: &[f64], v: &[f64]) -> Vec<f64> {
    if u.is_empty() || v.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; u.len() + v.len() - 1];
    for (i, ui) in u.iter().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            out[i + j] += ui * vj;
        }
    }
    out
}

pub fn poly_eval(u: &[f64], s: f64) -> f64 {
    u.iter().rev().fold(0.0, |acc, c| acc * s + c)
}

fn poly_sub(u: &[f64], v: &[f64]) -> Vec<f64> {
    let n = u.len().max(v.len());
    (0..n)
        .map(|i| u.get(i).unwrap_or(&0.0) - v.get(i).unwrap_or(&0.0))
        .collect()
}

/// Equation data for `system` and period `n`, or `None` when no Pell
/// condition applies (period two, odd short-axis flips, odd identity).
pub fn pell_problem(system: MagicKind, n: usize, a: f64, b: f64, beta: f64) -> Option<PellProblem> {
    let (ia, ib, ibeta) = (1.0 / a, 1.0 / b, 1.0 / beta);
    let m = n / 2;
    if n.is_multiple_of(2) {
        if m < 2 {
            return None;
        }
        return Some(PellProblem {
            e: vec![1.0],
            f: poly_from_roots(&[0.0, ia, ib, ibeta]),
            c: 1.0,
            deg_p: m,
            deg_q: m - 2,
        });
    }
    if m < 1 {
        return None;
    }
    match system {
        MagicKind::FlipLong => Some(PellProblem {
            e: poly_from_roots(&[ib]),
            f: poly_from_roots(&[0.0, ia, ibeta]),
            c: -1.0,
            deg_p: m,
            deg_q: m - 1,
        }),
        MagicKind::HalfTurn => Some(PellProblem {
            e: poly_from_roots(&[0.0]),
            f: poly_from_roots(&[ia, ib, ibeta]),
            c: 1.0,
            deg_p: m,
            deg_q: m - 1,
        }),
        MagicKind::FlipShort | MagicKind::Identity => None,
    }
}

impl PellProblem {
    /// Coefficients of `E p² − F q² − c`.
    pub fn defect(&self, p: &[f64], q: &[f64]) -> Vec<f64> {
        let mut d = poly_sub(
            &poly_mul(&self.e, &poly_mul(p, p)),
            &poly_mul(&self.f, &poly_mul(q, q)),
        );
        d[0] -= self.c;
        d
    }

    /// Laurent coefficients `h_i` of `√(F/E) = Σ h_i s^{k−i}`.
    fn laurent(&self, terms: usize) -> Vec<f64> {
        let rev = |u: &[f64]| {
            let mut r: Vec<f64> = u.iter().rev().copied().collect();
            r.resize(terms, 0.0);
            r
        };
        series_sqrt(&series_div(&rev(&self.f), &rev(&self.e)))
    }

    fn seed(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let de = self.e.len() - 1;
        let k = (self.f.len() - 1 - de) / 2;
        let nq = self.deg_q + 1;
        let rows = self.deg_p + de - 1;
        let h = self.laurent(self.deg_q + k + rows + 2);
        let hk = |i: usize| h.get(i).copied().unwrap_or(0.0);
        let a = DMatrix::from_fn(rows, nq, |r, j| hk(j + k + r + 1));
        let svd = a.svd(false, true);
        let vt = svd.v_t?;
        let (imin, _) =
            svd.singular_values
                .iter()
                .enumerate()
                .fold(
                    (0, f64::INFINITY),
                    |best, (i, &s)| if s < best.1 { (i, s) } else { best },
                );
        let q: Vec<f64> = vt.row(imin).iter().copied().collect();
        let p: Vec<f64> = (0..=self.deg_p)
            .map(|l| {
                (0..nq)
                    .filter(|&j| j + k >= l)
                    .map(|j| q[j] * hk(j + k - l))
                    .sum()
            })
            .collect();
        let d0 = self.defect(&p, &q)[0] + self.c;
        let mu2 = self.c / d0;
        if !(mu2 > 0.0 && mu2.is_finite()) {
            return None;
        }
        let mu = mu2.sqrt();
        Some((
            p.iter().map(|x| x * mu).collect(),
            q.iter().map(|x| x * mu).collect(),
        ))
    }

    fn jacobian(&self, p: &[f64], q: &[f64], rows: usize) -> DMatrix<f64> {
        let ep = poly_mul(&self.e, p);
        let fq = poly_mul(&self.f, q);
        let (np, nq) = (p.len(), q.len());
        DMatrix::from_fn(rows, np + nq, |r, col| {
            if col < np {
                r.checked_sub(col)
                    .and_then(|i| ep.get(i))
                    .map_or(0.0, |v| 2.0 * v)
            } else {
                r.checked_sub(col - np)
                    .and_then(|i| fq.get(i))
                    .map_or(0.0, |v| -2.0 * v)
            }
        })
    }

    /// Max-norm of the defect with the coefficients held in double-double.
    fn residual_dd(&self, p: &[TwoFloat], q: &[TwoFloat]) -> f64 {
        self.defect_dd(p, q).iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Newton refinement with an `f64` Jacobian and a double-double defect.
    fn polish(&self, p: Vec<f64>, q: Vec<f64>) -> (Vec<TwoFloat>, Vec<TwoFloat>) {
        let mut p: Vec<TwoFloat> = p.into_iter().map(TwoFloat::from).collect();
        let mut q: Vec<TwoFloat> = q.into_iter().map(TwoFloat::from).collect();
        let mut best = self.residual_dd(&p, &q);
        for _ in 0..50 {
            if best < 1e-24 {
                break;
            }
            let (ph, qh): (Vec<f64>, Vec<f64>) = (
                p.iter().map(|v| v.hi()).collect(),
                q.iter().map(|v| v.hi()).collect(),
            );
            let d = self.defect_dd(&p, &q);
            let jac = self.jacobian(&ph, &qh, d.len());
            let rhs = -DVector::from_vec(d);
            let Ok(delta) = jac.svd(true, true).solve(&rhs, 1e-14) else {
                break;
            };
            let np = p.len();
            let p2: Vec<TwoFloat> = p.iter().zip(delta.iter()).map(|(x, d)| *x + *d).collect();
            let q2: Vec<TwoFloat> = q
                .iter()
                .zip(delta.iter().skip(np))
                .map(|(x, d)| *x + *d)
                .collect();
            let r2 = self.residual_dd(&p2, &q2);
            if r2.partial_cmp(&best) != Some(std::cmp::Ordering::Less) {
                break;
            }
            best = r2;
            p = p2;
            q = q2;
        }
        (p, q)
    }

    fn defect_dd(&self, p: &[TwoFloat], q: &[TwoFloat]) -> Vec<f64> {
        let e: Vec<TwoFloat> = self.e.iter().map(|&v| TwoFloat::from(v)).collect();
        let f: Vec<TwoFloat> = self.f.iter().map(|&v| TwoFloat::from(v)).collect();
        let lhs = poly_mul_dd(&e, &poly_mul_dd(p, p));
        let rhs = poly_mul_dd(&f, &poly_mul_dd(q, q));
        let zero = TwoFloat::from(0.0);
        (0..lhs.len().max(rhs.len()))
            .map(|i| {
                let d = *lhs.get(i).unwrap_or(&zero) - *rhs.get(i).unwrap_or(&zero);
                if i == 0 {
                    (d - TwoFloat::from(self.c)).hi()
                } else {
                    d.hi()
                }
            })
            .collect()
    }

    /// Pell pair with the solution family's sign fixed by positive leading coefficients.
    ///
    /// The residual is that of the double-double coefficients; `p` and `q`
    /// are their rounding to `f64`.
    pub fn solve(&self) -> Option<PellPair> {
        let (p, q) = self.seed()?;
        let (mut p, mut q) = self.polish(p, q);
        let neg = TwoFloat::from(0.0);
        if p.last().is_some_and(|v| *v < neg) {
            p.iter_mut().for_each(|v| *v = -*v);
        }
        if q.last().is_some_and(|v| *v < neg) {
            q.iter_mut().for_each(|v| *v = -*v);
        }
        let residual = self.residual_dd(&p, &q);
        let (p, q) = (
            p.iter().map(|v| v.hi()).collect(),
            q.iter().map(|v| v.hi()).collect(),
        );
        (residual <= PELL_TOL).then_some(PellPair { p, q, residual })
    }
}

fn poly_mul_dd(u: &[TwoFloat], v: &[TwoFloat]) -> Vec<TwoFloat> {
    if u.is_empty() || v.is_empty() {
        return Vec::new();
    }
    let mut out = vec![TwoFloat::from(0.0); u.len() + v.len() - 1];
    for (i, ui) in u.iter().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            out[i + j] += *ui * *vj;
        }
    }
    out
}

/// Solves the Pell equation attached to `system`, `n`, `β`.
pub fn pell_solve(system: MagicKind, n: usize, a: f64, b: f64, beta: f64) -> Option<PellPair> {
    pell_problem(system, n, a, b, beta)?.solve()
}

/// `u/v` as power series (requires `v₀ ≠ 0`).
fn series_div(u: &[f64], v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; u.len()];
    for k in 0..u.len() {
        let acc: f64 = (1..=k)
            .filter(|&i| i < v.len())
            .map(|i| v[i] * out[k - i])
            .sum();
        out[k] = (u[k] - acc) / v[0];
    }
    out
}

/// Square root of a power series with positive constant term.
fn series_sqrt(u: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; u.len()];
    g[0] = u[0].sqrt();
    for k in 1..u.len() {
        let acc: f64 = (1..k).map(|i| g[i] * g[k - i]).sum();
        g[k] = (u[k] - acc) / (2.0 * g[0]);
    }
    g
}
