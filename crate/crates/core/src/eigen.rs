//! Forward eigenproblem for real symmetric tridiagonal matrices.
//!
//! Two independent eigenvalue algorithms are kept side by side: implicit-shift
//! QL (the default) and Sturm-sequence bisection inside the Gershgorin
//! interval (the oracle). Eigenvectors come from inverse iteration.
//!
//! The `tridiagonal_*` functions take the actual matrix entries: `diag[i]`
//! and the signed coupling `offdiag[i]` at positions `(i, i+1)`/`(i+1, i)`.
//! The [`JacobiMatrix`] wrappers pass `-b_i` there.

use crate::error::{domain, Error, Result};
use crate::jacobi::JacobiMatrix;

const MAX_QL_SWEEPS: usize = 60;
const MAX_BISECTION_STEPS: usize = 200;
const MAX_INVERSE_ITERATIONS: usize = 6;
/// Eigenvalues closer than this (relative to the norm) are reorthogonalized
/// against each other during inverse iteration.
const CLUSTER_TOL: f64 = 1e-3;

/// Which eigenvalue algorithm to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Ql,
    Bisection,
}

/// Ascending eigenvalues with unit eigenvectors (`vectors[k][i] = v^(k)_i`).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    /// Largest `||T v - lambda v||_2` over the returned pairs.
    pub max_residual: f64,
    /// Smallest gap between consecutive eigenvalues (infinite for order 1).
    pub min_gap: f64,
    /// Set when some gap is below `1e3 * eps * ||T||_inf`; eigenvectors inside
    /// such a cluster are only determined up to a rotation.
    pub clustered: bool,
}

impl EigenSystem {
    pub fn vector(&self, k: usize) -> Option<&[f64]> {
        self.eigenvectors.as_ref().map(|v| v[k].as_slice())
    }
}

fn realized_offdiag(m: &JacobiMatrix) -> Vec<f64> {
    m.offdiag().iter().map(|b| -b).collect()
}

/// Number of eigenvalues strictly below `x`.
pub fn sturm_count(m: &JacobiMatrix, x: f64) -> usize {
    tridiagonal_sturm_count(m.diag(), m.offdiag(), x)
}

/// All eigenvalues, ascending, via implicit-shift QL.
pub fn eigenvalues(m: &JacobiMatrix, rel_tol: f64) -> Result<Vec<f64>> {
    eigenvalues_with(m, rel_tol, Method::Ql)
}

pub fn eigenvalues_with(m: &JacobiMatrix, rel_tol: f64, method: Method) -> Result<Vec<f64>> {
    let off = realized_offdiag(m);
    match method {
        Method::Ql => tridiagonal_eigenvalues_ql(m.diag(), &off),
        Method::Bisection => tridiagonal_eigenvalues_bisection(m.diag(), &off, rel_tol),
    }
}

pub fn eigensystem(m: &JacobiMatrix, rel_tol: f64) -> Result<EigenSystem> {
    tridiagonal_eigensystem(m.diag(), &realized_offdiag(m), rel_tol)
}

fn check_shape(diag: &[f64], offdiag: &[f64]) -> Result<()> {
    if diag.is_empty() || offdiag.len() + 1 != diag.len() {
        return domain(format!(
            "tridiagonal shape mismatch: {} diagonal and {} off-diagonal entries",
            diag.len(),
            offdiag.len()
        ));
    }
    if diag.iter().chain(offdiag).any(|x| !x.is_finite()) {
        return domain("matrix has non-finite entries");
    }
    Ok(())
}

fn check_tol(rel_tol: f64) -> Result<()> {
    if !(rel_tol > 0.0 && rel_tol.is_finite()) {
        return domain(format!(
            "relative tolerance must be positive, got {rel_tol}"
        ));
    }
    Ok(())
}

pub fn tridiagonal_norm_inf(diag: &[f64], offdiag: &[f64]) -> f64 {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 { offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { offdiag[i].abs() } else { 0.0 };
            diag[i].abs() + left + right
        })
        .fold(0.0, f64::max)
}

fn gershgorin(diag: &[f64], offdiag: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { offdiag[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { offdiag[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo, hi)
}

/// Sturm count from the `LDL^T` pivots of `T - x I`. A zero pivot is replaced
/// by `eps * ||T||_inf`.
pub fn tridiagonal_sturm_count(diag: &[f64], offdiag: &[f64], x: f64) -> usize {
    let pivmin = (f64::EPSILON * tridiagonal_norm_inf(diag, offdiag)).max(f64::MIN_POSITIVE);
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let coupling = if i > 0 {
            offdiag[i - 1] * offdiag[i - 1] / q
        } else {
            0.0
        };
        q = diag[i] - x - coupling;
        if q == 0.0 {
            q = pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

pub fn tridiagonal_eigenvalues_bisection(
    diag: &[f64],
    offdiag: &[f64],
    rel_tol: f64,
) -> Result<Vec<f64>> {
    check_shape(diag, offdiag)?;
    check_tol(rel_tol)?;
    let n = diag.len();
    let norm = tridiagonal_norm_inf(diag, offdiag);
    let (glo, ghi) = gershgorin(diag, offdiag);
    let pad = (4.0 * f64::EPSILON * (n as f64 + 1.0) * norm).max(f64::MIN_POSITIVE);
    let target = rel_tol * norm;

    let mut values = Vec::with_capacity(n);
    let mut worst: f64 = 0.0;
    for k in 0..n {
        // Eigenvalue k is the smallest x with more than k eigenvalues below it.
        let mut lo = values.last().copied().unwrap_or(glo - pad).max(glo - pad);
        let mut hi = ghi + pad;
        let mut converged = false;
        for _ in 0..MAX_BISECTION_STEPS {
            let width = hi - lo;
            let floor = 2.0 * f64::EPSILON * lo.abs().max(hi.abs());
            if width <= target.max(floor) {
                converged = true;
                break;
            }
            let mid = lo + 0.5 * width;
            if mid <= lo || mid >= hi {
                converged = true;
                break;
            }
            if tridiagonal_sturm_count(diag, offdiag, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        worst = worst.max(hi - lo);
        if !converged {
            return Err(Error::NoConvergence {
                order: n,
                width: worst,
            });
        }
        values.push(lo + 0.5 * (hi - lo));
    }
    Ok(values)
}

/// Implicit-shift QL with Wilkinson shifts (eigenvalues only).
pub fn tridiagonal_eigenvalues_ql(diag: &[f64], offdiag: &[f64]) -> Result<Vec<f64>> {
    check_shape(diag, offdiag)?;
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e: Vec<f64> = offdiag
        .iter()
        .copied()
        .chain(std::iter::once(0.0))
        .collect();

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(Error::NoConvergence {
                    order: n,
                    width: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvalues (QL) and eigenvectors (inverse iteration).
pub fn tridiagonal_eigensystem(diag: &[f64], offdiag: &[f64], rel_tol: f64) -> Result<EigenSystem> {
    check_shape(diag, offdiag)?;
    check_tol(rel_tol)?;
    let n = diag.len();
    let values = tridiagonal_eigenvalues_ql(diag, offdiag)?;
    let norm = tridiagonal_norm_inf(diag, offdiag);
    let pivmin = (f64::EPSILON * norm).max(f64::MIN_POSITIVE);

    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut max_residual: f64 = 0.0;
    for (k, &lambda) in values.iter().enumerate() {
        let cluster: Vec<usize> = (0..k)
            .filter(|&j| (values[j] - lambda).abs() <= CLUSTER_TOL * norm)
            .collect();
        let mut x = start_vector(n, k);
        let mut residual = f64::INFINITY;
        for _ in 0..MAX_INVERSE_ITERATIONS {
            x = solve_shifted(diag, offdiag, lambda, &x, pivmin);
            for &j in &cluster {
                orthogonalize(&mut x, &vectors[j]);
            }
            normalize(&mut x);
            residual = residual_norm(diag, offdiag, lambda, &x);
            if residual <= rel_tol * norm {
                break;
            }
        }
        for v in &vectors {
            orthogonalize(&mut x, v);
        }
        normalize(&mut x);
        fix_sign(&mut x);
        residual = residual.max(residual_norm(diag, offdiag, lambda, &x));
        max_residual = max_residual.max(residual);
        vectors.push(x);
    }

    let min_gap = values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    Ok(EigenSystem {
        eigenvalues: values,
        eigenvectors: Some(vectors),
        max_residual,
        min_gap,
        clustered: min_gap < 1e3 * f64::EPSILON * norm,
    })
}

/// Deterministic start vector with no special structure.
fn start_vector(n: usize, k: usize) -> Vec<f64> {
    let mut state = 0x9E37_79B9_7F4A_7C15u64 ^ (k as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            0.5 + (state >> 11) as f64 / (1u64 << 53) as f64
        })
        .collect()
}

/// Solve `(T - shift I) x = rhs` by Gaussian elimination with partial pivoting.
fn solve_shifted(diag: &[f64], offdiag: &[f64], shift: f64, rhs: &[f64], pivmin: f64) -> Vec<f64> {
    let n = diag.len();
    let mut d: Vec<f64> = diag.iter().map(|a| a - shift).collect();
    let mut du = offdiag.to_vec();
    let mut dl = offdiag.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut b = rhs.to_vec();
    let guard = |x: f64| {
        if x.abs() < pivmin {
            pivmin.copysign(if x == 0.0 { 1.0 } else { x })
        } else {
            x
        }
    };

    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            d[i] = guard(d[i]);
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            du[i] = temp;
            b.swap(i, i + 1);
            b[i + 1] -= fact * b[i];
        }
        dl[i] = 0.0;
    }
    d[n - 1] = guard(d[n - 1]);

    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        if i + 1 < n {
            acc -= du[i] * x[i + 1];
        }
        if i + 2 < n {
            acc -= du2[i] * x[i + 2];
        }
        x[i] = acc / d[i];
    }
    // Large growth is expected near an eigenvalue; rescale to keep it finite.
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale > 0.0 && scale.is_finite() {
        x.iter_mut().for_each(|v| *v /= scale);
    }
    x
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn orthogonalize(x: &mut [f64], against: &[f64]) {
    let c = dot(x, against);
    x.iter_mut().zip(against).for_each(|(xi, ai)| *xi -= c * ai);
}

fn normalize(x: &mut [f64]) {
    let norm = dot(x, x).sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

/// Make the largest-magnitude component positive; near-ties go to the lower index.
fn fix_sign(x: &mut [f64]) {
    let peak = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(lead) = x.iter().position(|v| v.abs() >= peak * (1.0 - 1e-10)) {
        if x[lead] < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

fn residual_norm(diag: &[f64], offdiag: &[f64], lambda: f64, x: &[f64]) -> f64 {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let mut r = (diag[i] - lambda) * x[i];
            if i > 0 {
                r += offdiag[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                r += offdiag[i] * x[i + 1];
            }
            r * r
        })
        .sum::<f64>()
        .sqrt()
}
