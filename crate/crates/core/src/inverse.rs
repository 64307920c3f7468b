//! Inverse eigenvalue problem for persymmetric Jacobi matrices.
//!
//! The de Boor-Golub procedure builds the monic polynomials `chi_i`
//! orthogonal under `<f, g> = sum_k w_k f(l_k) g(l_k)` and reads the matrix
//! entries off the three-term recurrence
//!
//! ```text
//! chi_{i+1}(l) = (l - a_{i+1}) chi_i(l) - b_i^2 chi_{i-1}(l)
//! a_{i+1} = <l chi_i, chi_i> / <chi_i, chi_i>
//! b_i^2   = <chi_i, chi_i> / <chi_{i-1}, chi_{i-1}>
//! ```
//!
//! Polynomials are only ever held as their values on the spectrum nodes.
//! The same state machine runs over `f64` and over `BigRational`. In floating
//! point each new polynomial is rescaled to unit norm and re-orthogonalized
//! against all earlier ones; the exact path needs neither.

use std::ops::{Add, Div, Mul, Sub};

use num_traits::{One, Zero};

use crate::error::{domain, Error, Result};
use crate::exact::{binomial, BigInt, BigRational};
use crate::jacobi::{ExactJacobi, JacobiMatrix};

/// Number type the recurrence can run over.
pub trait Scalar:
    Clone
    + Zero
    + One
    + PartialOrd
    + std::fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// Strictly positive and (for floats) finite.
    fn is_valid_norm(&self) -> bool;

    /// Factor `c` applied to the two trailing value vectors after each step
    /// (norms scale by `c^2`). `None` leaves the values untouched.
    fn rescale_for(norm: &Self) -> Option<Self>;

    /// Re-orthogonalize each new polynomial against all earlier ones.
    /// Plain three-term recurrence loses orthogonality in floating point
    /// once the weights span many orders of magnitude.
    const REORTHOGONALIZE: bool;
}

impl Scalar for f64 {
    fn is_valid_norm(&self) -> bool {
        self.is_finite() && *self > 0.0
    }

    fn rescale_for(norm: &Self) -> Option<Self> {
        Some(1.0 / norm.sqrt())
    }

    const REORTHOGONALIZE: bool = true;
}

impl Scalar for BigRational {
    fn is_valid_norm(&self) -> bool {
        *self > BigRational::zero()
    }

    fn rescale_for(_: &Self) -> Option<Self> {
        None
    }

    const REORTHOGONALIZE: bool = false;
}

/// Inner-product weights `w_0..w_m` attached to the spectrum nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector<T> {
    weights: Vec<T>,
}

impl<T: Scalar> WeightVector<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return domain("weight vector is empty");
        }
        if let Some(w) = weights.iter().find(|w| !w.is_valid_norm()) {
            return domain(format!("weights must be positive, found {w}"));
        }
        Ok(Self { weights })
    }

    /// `m = n - 1`.
    pub fn m(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn as_slice(&self) -> &[T] {
        &self.weights
    }

    pub fn into_vec(self) -> Vec<T> {
        self.weights
    }

    pub fn sum(&self) -> T {
        self.weights
            .iter()
            .fold(T::zero(), |acc, w| acc + w.clone())
    }

    /// Multiply every weight by `c`.
    pub fn scaled(&self, c: T) -> Result<Self> {
        Self::new(self.weights.iter().map(|w| w.clone() * c.clone()).collect())
    }
}

fn check_distinct<T: PartialEq + std::fmt::Display>(spectrum: &[T]) -> Result<()> {
    if spectrum.is_empty() {
        return domain("spectrum is empty");
    }
    for (i, x) in spectrum.iter().enumerate() {
        if spectrum[i + 1..].contains(x) {
            return domain(format!(
                "eigenvalue {x} is repeated; the inverse problem needs distinct eigenvalues"
            ));
        }
    }
    Ok(())
}

/// Weights `w_k proportional to prod_{q != k} 1/|l_k - l_q|`, which make the
/// reconstructed matrix persymmetric. Normalized to unit sum.
///
/// The products are accumulated in the log domain.
pub fn persymmetric_weights(spectrum: &[f64]) -> Result<WeightVector<f64>> {
    check_distinct(spectrum)?;
    if spectrum.iter().any(|x| !x.is_finite()) {
        return domain("spectrum has non-finite entries");
    }
    let logs: Vec<f64> = spectrum
        .iter()
        .enumerate()
        .map(|(k, lk)| {
            -spectrum
                .iter()
                .enumerate()
                .filter(|&(q, _)| q != k)
                .map(|(_, lq)| (lk - lq).abs().ln())
                .sum::<f64>()
        })
        .collect();
    let peak = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = logs.iter().map(|l| (l - peak).exp()).collect();
    let total: f64 = raw.iter().sum();
    WeightVector::new(raw.into_iter().map(|w| w / total).collect())
}

/// Exact counterpart of [`persymmetric_weights`], normalized to unit sum.
pub fn persymmetric_weights_exact(spectrum: &[BigRational]) -> Result<WeightVector<BigRational>> {
    check_distinct(spectrum)?;
    let raw: Vec<BigRational> = spectrum
        .iter()
        .enumerate()
        .map(|(k, lk)| {
            let prod = spectrum.iter().enumerate().filter(|&(q, _)| q != k).fold(
                BigRational::one(),
                |acc, (_, lq)| {
                    let d = lk - lq;
                    acc * if d < BigRational::zero() { -d } else { d }
                },
            );
            prod.recip()
        })
        .collect();
    let total = raw.iter().fold(BigRational::zero(), |acc, w| acc + w);
    WeightVector::new(raw.into_iter().map(|w| w / &total).collect())
}

/// The nodes `2k^2`, `k = 0..n-1`.
pub fn square_integer_spectrum(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * (k * k) as f64).collect()
}

pub fn square_integer_spectrum_exact(n: usize) -> Vec<BigRational> {
    (0..n as u64)
        .map(|k| BigRational::from_integer(BigInt::from(2 * k * k)))
        .collect()
}

/// Exact weights for the spectrum `{2k^2}` in binomial form:
/// `w_k = C(2m, m+k) / 4^m` for `k >= 1` and half of that for `k = 0`.
///
/// The scale is such that the two-sided family `w_{-k} = w_k`, `k = -m..m`
/// (with the un-halved `w_0`) is a probability distribution; the one-sided
/// vector returned here therefore sums to `1/2`.
pub fn square_integer_weights(n: usize) -> Result<WeightVector<BigRational>> {
    if n == 0 {
        return domain("order must be at least 1");
    }
    let m = (n - 1) as u64;
    let denom = BigInt::one() << (2 * m);
    let weights = (0..=m)
        .map(|k| {
            let mut w = BigRational::new(binomial(2 * m, (m + k) as i64), denom.clone());
            if k == 0 {
                w /= BigRational::from_integer(BigInt::from(2));
            }
            w
        })
        .collect();
    WeightVector::new(weights)
}

/// State of the de Boor-Golub iteration after step `i`.
#[derive(Debug, Clone)]
pub struct DbgState<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
    step: usize,
    /// `chi_i` on the nodes.
    current: Vec<T>,
    /// `chi_{i-1}` on the nodes.
    previous: Vec<T>,
    /// Unit-norm `chi_0..chi_i`, kept only when re-orthogonalizing.
    basis: Vec<Vec<T>>,
    /// `s_i = <chi_i, chi_i>` in the current scaling.
    norm: T,
    /// `s_i / s_0` and `t_i / s_0`, recorded only when no rescaling happens.
    s_history: Vec<T>,
    t_history: Vec<T>,
    s0: T,
    diag: Vec<T>,
    offdiag_sq: Vec<T>,
}

impl<T: Scalar> DbgState<T> {
    /// Start from `chi_0 = 1`; emits `a_1`.
    pub fn new(spectrum: &[T], weights: &WeightVector<T>) -> Result<Self> {
        if spectrum.len() != weights.as_slice().len() {
            return domain(format!(
                "{} eigenvalues but {} weights",
                spectrum.len(),
                weights.as_slice().len()
            ));
        }
        if spectrum.is_empty() {
            return domain("spectrum is empty");
        }
        let n = spectrum.len();
        let current = vec![T::one(); n];
        let previous = vec![T::zero(); n];
        let mut state = Self {
            nodes: spectrum.to_vec(),
            weights: weights.as_slice().to_vec(),
            step: 0,
            current,
            previous,
            basis: Vec::new(),
            norm: T::zero(),
            s_history: Vec::new(),
            t_history: Vec::new(),
            s0: T::zero(),
            diag: Vec::new(),
            offdiag_sq: Vec::new(),
        };
        let (s, t) = state.moments(0)?;
        state.s0 = s.clone();
        state.record(&s, &t);
        state.norm = s.clone();
        state.diag.push(t / s.clone());
        state.rescale(&s);
        Ok(state)
    }

    fn moments(&self, step: usize) -> Result<(T, T)> {
        let mut s = T::zero();
        let mut t = T::zero();
        for ((w, x), chi) in self.weights.iter().zip(&self.nodes).zip(&self.current) {
            let wc2 = w.clone() * chi.clone() * chi.clone();
            t = t + x.clone() * wc2.clone();
            s = s + wc2;
        }
        if !s.is_valid_norm() {
            return Err(Error::Breakdown {
                step,
                reason: format!("<chi, chi> = {s} is not positive"),
            });
        }
        Ok((s, t))
    }

    fn record(&mut self, s: &T, t: &T) {
        self.s_history.push(s.clone() / self.s0.clone());
        self.t_history.push(t.clone() / self.s0.clone());
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn is_complete(&self) -> bool {
        self.diag.len() == self.nodes.len()
    }

    /// Emitted `a_1..a_{i+1}`.
    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    /// Emitted `b_1^2..b_i^2`.
    pub fn offdiag_sq(&self) -> &[T] {
        &self.offdiag_sq
    }

    /// `s_j / s_0` for `j = 0..=i`; only meaningful when the scalar type does
    /// not rescale (exact mode).
    pub fn s_normalized(&self) -> &[T] {
        &self.s_history
    }

    /// `t_j / s_0` for `j = 0..=i`; see [`Self::s_normalized`].
    pub fn t_normalized(&self) -> &[T] {
        &self.t_history
    }

    /// One recurrence step: builds `chi_{i+1}` and emits `b_{i+1}^2`, `a_{i+2}`.
    /// Returns `false` once all `n` diagonal entries are out.
    pub fn advance(&mut self) -> Result<bool> {
        if self.is_complete() {
            return Ok(false);
        }
        let a = self.diag.last().cloned().expect("a_1 emitted at start");
        let b2 = self.offdiag_sq.last().cloned().unwrap_or_else(T::zero);
        let next: Vec<T> = self
            .nodes
            .iter()
            .zip(self.current.iter().zip(&self.previous))
            .map(|(x, (c, p))| (x.clone() - a.clone()) * c.clone() - b2.clone() * p.clone())
            .collect();
        let next = self.reorthogonalized(next);
        self.previous = std::mem::replace(&mut self.current, next);
        self.step += 1;

        let (s, t) = self.moments(self.step)?;
        let b2_next = s.clone() / self.norm.clone();
        let a_next = t.clone() / s.clone();
        if !b2_next.is_valid_norm() {
            return Err(Error::Breakdown {
                step: self.step,
                reason: format!("b^2 = {b2_next}"),
            });
        }
        self.offdiag_sq.push(b2_next);
        self.diag.push(a_next);

        if T::rescale_for(&s).is_none() {
            self.record(&s, &t);
        }
        self.norm = s.clone();
        self.rescale(&s);
        Ok(true)
    }

    fn rescale(&mut self, s: &T) {
        if let Some(c) = T::rescale_for(s) {
            for v in self.current.iter_mut().chain(self.previous.iter_mut()) {
                *v = v.clone() * c.clone();
            }
            self.norm = T::one();
        }
        if T::REORTHOGONALIZE {
            self.basis.push(self.current.clone());
        }
    }

    /// Two Gram-Schmidt passes against the stored unit-norm polynomials.
    fn reorthogonalized(&self, mut v: Vec<T>) -> Vec<T> {
        if !T::REORTHOGONALIZE {
            return v;
        }
        for _ in 0..2 {
            for q in &self.basis {
                let c = self
                    .weights
                    .iter()
                    .zip(v.iter().zip(q))
                    .fold(T::zero(), |acc, (w, (x, y))| {
                        acc + w.clone() * x.clone() * y.clone()
                    });
                for (x, y) in v.iter_mut().zip(q) {
                    *x = x.clone() - c.clone() * y.clone();
                }
            }
        }
        v
    }

    /// Run to completion.
    pub fn finish(mut self) -> Result<Self> {
        while self.advance()? {}
        Ok(self)
    }
}

/// Reconstruct the Jacobi matrix with the given spectrum and weights.
pub fn deboor_golub(spectrum: &[f64], weights: &WeightVector<f64>) -> Result<JacobiMatrix> {
    check_distinct(spectrum)?;
    let state = DbgState::new(spectrum, weights)?.finish()?;
    let offdiag = state.offdiag_sq().iter().map(|b2| b2.sqrt()).collect();
    JacobiMatrix::new(state.diag, offdiag)
}

/// Exact reconstruction together with the normalized inner products.
#[derive(Debug, Clone)]
pub struct ExactReconstruction {
    pub matrix: ExactJacobi,
    /// `s_i / s_0`, `i = 0..n-1`.
    pub s: Vec<BigRational>,
    /// `t_i / s_0`, `i = 0..n-1`.
    pub t: Vec<BigRational>,
}

pub fn deboor_golub_exact(
    spectrum: &[BigRational],
    weights: &WeightVector<BigRational>,
) -> Result<ExactReconstruction> {
    check_distinct(spectrum)?;
    let state = DbgState::new(spectrum, weights)?.finish()?;
    Ok(ExactReconstruction {
        s: state.s_history,
        t: state.t_history,
        matrix: ExactJacobi {
            diag: state.diag,
            offdiag_sq: state.offdiag_sq,
        },
    })
}

/// Moments `<<k^{2l}>>`, `l = 0..=max_order/2`, of the two-sided binomial
/// weights, read off the Taylor series of `cosh(x/2)^{2m}`.
pub fn characteristic_moments(m: usize, max_order: usize) -> Vec<BigRational> {
    let terms = max_order / 2 + 1;
    // cosh(x/2) = sum_j x^{2j} / (4^j (2j)!), stored by j
    let mut cosh = Vec::with_capacity(terms);
    let mut coeff = BigRational::one();
    for j in 0..terms {
        if j > 0 {
            let d = BigInt::from(4 * (2 * j - 1) * (2 * j));
            coeff /= BigRational::from_integer(d);
        }
        cosh.push(coeff.clone());
    }
    let mut series = vec![BigRational::zero(); terms];
    series[0] = BigRational::one();
    for _ in 0..2 * m {
        series = truncated_product(&series, &cosh);
    }
    let mut factorial = BigInt::one();
    series
        .into_iter()
        .enumerate()
        .map(|(l, c)| {
            if l > 0 {
                factorial *= BigInt::from((2 * l - 1) * (2 * l));
            }
            c * BigRational::from_integer(factorial.clone())
        })
        .collect()
}

fn truncated_product(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let len = a.len();
    (0..len)
        .map(|d| (0..=d).fold(BigRational::zero(), |acc, j| acc + &a[j] * &b[d - j]))
        .collect()
}

/// Closed forms for the first entries of the `{2k^2}` reconstruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstEntries {
    pub a1: BigInt,
    pub b1_sq: BigInt,
    pub a2: BigInt,
    /// `t_1 = <l chi_1, chi_1>` with the weights normalized to `s_0 = 1`.
    pub t1: BigInt,
}

pub fn analytic_first_entries(n: usize) -> Result<FirstEntries> {
    if n < 2 {
        return domain("only a_1 = 0 is defined for n = 1");
    }
    let m = BigInt::from(n - 1);
    let two_m_1 = BigInt::from(2 * n - 3);
    let t1 = &m * &two_m_1 * BigInt::from(5 * n as i64 - 9);
    Ok(FirstEntries {
        a1: m.clone(),
        b1_sq: &m * &two_m_1,
        a2: &m + BigInt::from(4) * (&m - 1),
        t1,
    })
}
