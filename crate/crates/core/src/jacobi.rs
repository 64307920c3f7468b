//! Jacobi matrices and the closed-form `{2k^2}` family.
//!
//! Off-diagonal entries are stored as positive magnitudes `b_i`. The dense
//! realization used by tests places `-b_i` next to the diagonal; the shifted
//! complement `C = 2n^2 I - A(n+1)` is realized with `+b_i` instead.

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{domain, Error, Result};
use crate::exact::{self, BigInt, BigRational};

/// Exact entries of a Jacobi matrix: diagonal and squared off-diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactJacobi {
    pub diag: Vec<BigRational>,
    pub offdiag_sq: Vec<BigRational>,
}

impl ExactJacobi {
    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn to_float(&self) -> Result<JacobiMatrix> {
        JacobiMatrix::from_exact(self.clone())
    }

    pub fn trace(&self) -> BigRational {
        self.diag.iter().fold(BigRational::zero(), |acc, x| acc + x)
    }
}

/// Sign placed on the off-diagonal of a dense realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffDiagSign {
    Minus,
    Plus,
}

/// Real symmetric tridiagonal matrix with positive off-diagonal magnitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
    exact: Option<ExactJacobi>,
}

impl JacobiMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return domain("a Jacobi matrix needs order at least 1");
        }
        if offdiag.len() + 1 != diag.len() {
            return domain(format!(
                "order {} needs {} off-diagonal entries, got {}",
                diag.len(),
                diag.len() - 1,
                offdiag.len()
            ));
        }
        if let Some(x) = diag.iter().find(|x| !x.is_finite()) {
            return domain(format!("non-finite diagonal entry {x}"));
        }
        if let Some(x) = offdiag.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return domain(format!(
                "off-diagonal magnitudes must be positive and finite, got {x}"
            ));
        }
        Ok(Self {
            diag,
            offdiag,
            exact: None,
        })
    }

    /// Build from exact entries, keeping them attached for exact comparisons.
    pub fn from_exact(exact: ExactJacobi) -> Result<Self> {
        if exact.offdiag_sq.len() + 1 != exact.diag.len() {
            return domain("exact entries have inconsistent lengths");
        }
        let diag = exact.diag.iter().map(exact::to_f64).collect();
        let offdiag = exact
            .offdiag_sq
            .iter()
            .map(|b2| exact::to_f64(b2).sqrt())
            .collect();
        let mut m = Self::new(diag, offdiag)?;
        m.exact = Some(exact);
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// `b_i^2`, taken from the exact entries when they are available.
    pub fn offdiag_sq(&self, i: usize) -> f64 {
        match &self.exact {
            Some(e) => exact::to_f64(&e.offdiag_sq[i]),
            None => self.offdiag[i] * self.offdiag[i],
        }
    }

    pub fn exact(&self) -> Option<&ExactJacobi> {
        self.exact.as_ref()
    }

    /// Infinity norm of the realized matrix.
    pub fn norm_inf(&self) -> f64 {
        let n = self.order();
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.offdiag[i - 1] } else { 0.0 };
                let right = if i + 1 < n { self.offdiag[i] } else { 0.0 };
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let n = self.order();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1] } else { 0.0 };
            let right = if i + 1 < n { self.offdiag[i] } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Leading principal submatrix of order `k`.
    pub fn leading(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.order() {
            return domain(format!("leading block of order {k} out of range"));
        }
        let exact = self.exact.as_ref().map(|e| ExactJacobi {
            diag: e.diag[..k].to_vec(),
            offdiag_sq: e.offdiag_sq[..k - 1].to_vec(),
        });
        Ok(Self {
            diag: self.diag[..k].to_vec(),
            offdiag: self.offdiag[..k - 1].to_vec(),
            exact,
        })
    }

    /// Multiply every entry by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return domain(format!("scale factor must be positive, got {c}"));
        }
        Self::new(
            self.diag.iter().map(|x| x * c).collect(),
            self.offdiag.iter().map(|x| x * c).collect(),
        )
    }

    /// Dense realization, intended for test oracles only.
    pub fn to_dense(&self, sign: OffDiagSign) -> Vec<Vec<f64>> {
        let n = self.order();
        let s = match sign {
            OffDiagSign::Minus => -1.0,
            OffDiagSign::Plus => 1.0,
        };
        let mut dense = vec![vec![0.0; n]; n];
        for i in 0..n {
            dense[i][i] = self.diag[i];
            if i + 1 < n {
                dense[i][i + 1] = s * self.offdiag[i];
                dense[i + 1][i] = s * self.offdiag[i];
            }
        }
        dense
    }

    /// Product of the realized (`-b`) matrix with a vector.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.order();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc -= self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc -= self.offdiag[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let doc = JacobiJson {
            n: self.order(),
            diag: self.diag.clone(),
            offdiag: self.offdiag.clone(),
            diag_exact: self
                .exact
                .as_ref()
                .map(|e| e.diag.iter().map(rational_json).collect()),
            offdiag_sq_exact: self
                .exact
                .as_ref()
                .map(|e| e.offdiag_sq.iter().map(rational_json).collect()),
        };
        serde_json::to_value(doc).expect("matrix serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: JacobiJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let m = match (doc.diag_exact, doc.offdiag_sq_exact) {
            (Some(d), Some(b2)) => {
                let parse = |v: &Value| match v {
                    Value::Number(x) => exact::parse_rational(&x.to_string()),
                    Value::String(s) => exact::parse_rational(s),
                    other => Err(Error::Parse(format!("bad exact entry {other}"))),
                };
                let exact = ExactJacobi {
                    diag: d.iter().map(parse).collect::<Result<_>>()?,
                    offdiag_sq: b2.iter().map(parse).collect::<Result<_>>()?,
                };
                let mut m = Self::new(doc.diag, doc.offdiag)?;
                if exact.order() != m.order() || exact.offdiag_sq.len() + 1 != m.order() {
                    return Err(Error::Parse(
                        "exact entries disagree with the float entries in length".into(),
                    ));
                }
                m.exact = Some(exact);
                m
            }
            _ => Self::new(doc.diag, doc.offdiag)?,
        };
        if m.order() != doc.n {
            return Err(Error::Parse(format!(
                "declared n = {} but diag has {} entries",
                doc.n,
                m.order()
            )));
        }
        Ok(m)
    }
}

#[derive(Serialize, Deserialize)]
struct JacobiJson {
    n: usize,
    diag: Vec<f64>,
    offdiag: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    diag_exact: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    offdiag_sq_exact: Option<Vec<Value>>,
}

/// Integers that fit in `i64` become JSON numbers, everything else a `"p/q"` string.
fn rational_json(x: &BigRational) -> Value {
    if x.is_integer() {
        if let Some(v) = x.numer().to_i64() {
            return Value::from(v);
        }
    }
    Value::from(exact::format_rational(x))
}

/// Closed-form entries `a_i`, `b_i^2` of the order-`n` matrix with spectrum `{2k^2}`.
pub fn theorem1_entries(n: u64) -> (Vec<BigInt>, Vec<BigInt>) {
    let diag = (1..=n)
        .map(|i| BigInt::from(n - 1) + BigInt::from(4) * BigInt::from(i - 1) * BigInt::from(n - i))
        .collect();
    let offdiag_sq = (1..n)
        .map(|i| {
            BigInt::from(i)
                * BigInt::from(2 * i - 1)
                * BigInt::from(n - i)
                * BigInt::from(2 * n - 2 * i - 1)
        })
        .collect();
    (diag, offdiag_sq)
}

/// Persymmetric Jacobi matrix of order `n` whose eigenvalues are `2k^2`, `k = 0..n-1`.
pub fn build_theorem1(n: usize) -> Result<JacobiMatrix> {
    if n == 0 {
        return domain("order must be at least 1");
    }
    let (diag, offdiag_sq) = theorem1_entries(n as u64);
    JacobiMatrix::from_exact(ExactJacobi {
        diag: diag.into_iter().map(BigRational::from_integer).collect(),
        offdiag_sq: offdiag_sq
            .into_iter()
            .map(BigRational::from_integer)
            .collect(),
    })
}

/// `C(n+1) = 2n^2 I - A(n+1)`, stored with the same off-diagonal magnitudes.
/// Its realization carries `+b_i` (see [`OffDiagSign::Plus`]).
pub fn build_shifted_complement(n: usize) -> Result<JacobiMatrix> {
    if n == 0 {
        return domain("order must be at least 1");
    }
    let (c, b2) = shifted_complement_entries(n as u64);
    JacobiMatrix::from_exact(ExactJacobi {
        diag: c.into_iter().map(BigRational::from_integer).collect(),
        offdiag_sq: b2.into_iter().map(BigRational::from_integer).collect(),
    })
}

fn shifted_complement_entries(n: u64) -> (Vec<BigInt>, Vec<BigInt>) {
    let c = (1..=n + 1)
        .map(|i| {
            let d = n as i64 + 2 - 2 * i as i64;
            BigInt::from(n * (n - 1)) + BigInt::from(d * d)
        })
        .collect();
    let (_, b2) = theorem1_entries(n + 1);
    (c, b2)
}

/// True when `a_i = a_{n+1-i}` and `b_i = b_{n-i}` within `tol`.
///
/// With `tol == 0` and exact entries present, the comparison is exact.
pub fn is_persymmetric(m: &JacobiMatrix, tol: f64) -> bool {
    if tol == 0.0 {
        if let Some(e) = m.exact() {
            return mirrored(&e.diag, |a, b| a == b) && mirrored(&e.offdiag_sq, |a, b| a == b);
        }
    }
    let close = |a: &f64, b: &f64| (a - b).abs() <= tol;
    mirrored(m.diag(), close) && mirrored(m.offdiag(), close)
}

fn mirrored<T>(v: &[T], eq: impl Fn(&T, &T) -> bool) -> bool {
    v.iter().zip(v.iter().rev()).all(|(a, b)| eq(a, b))
}

/// Flip off-diagonal signs to positive; the spectrum is unchanged by the
/// diagonal `±1` similarity that does this.
pub fn sign_normalize(diag: &[f64], offdiag: &[f64]) -> Result<JacobiMatrix> {
    if let Some(i) = offdiag.iter().position(|b| *b == 0.0) {
        return domain(format!(
            "off-diagonal entry {} is zero; the matrix decouples",
            i + 1
        ));
    }
    JacobiMatrix::new(diag.to_vec(), offdiag.iter().map(|b| b.abs()).collect())
}

/// Lower bidiagonal `H` of order `n+1` with `C(n+1) = H H^T`.
///
/// Entries are stored squared (they are integers); `hdiag()`/`subdiag()`
/// return the real square roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BidiagonalFactor {
    n: usize,
    hdiag_sq: Vec<BigInt>,
    subdiag_sq: Vec<BigInt>,
}

impl BidiagonalFactor {
    /// Order of `H`, i.e. `n + 1`.
    pub fn order(&self) -> usize {
        self.n + 1
    }

    pub fn hdiag_sq(&self) -> &[BigInt] {
        &self.hdiag_sq
    }

    pub fn subdiag_sq(&self) -> &[BigInt] {
        &self.subdiag_sq
    }

    pub fn hdiag(&self) -> Vec<f64> {
        self.hdiag_sq.iter().map(sqrt_int).collect()
    }

    pub fn subdiag(&self) -> Vec<f64> {
        self.subdiag_sq.iter().map(sqrt_int).collect()
    }
}

fn sqrt_int(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY).sqrt()
}

pub fn build_bidiagonal_factor(n: usize) -> Result<BidiagonalFactor> {
    if n == 0 {
        return domain("order must be at least 1");
    }
    let n64 = n as u64;
    let hdiag_sq = (1..=n64 + 1)
        .map(|i| BigInt::from(n64 + 1 - i) * BigInt::from(2 * n64 as i64 + 1 - 2 * i as i64))
        .collect();
    let subdiag_sq = (1..=n64)
        .map(|i| BigInt::from(i) * BigInt::from(2 * i - 1))
        .collect();
    Ok(BidiagonalFactor {
        n,
        hdiag_sq,
        subdiag_sq,
    })
}

/// Which identity of the factorization argument failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorizationIdentity {
    /// `h_i^2 + r_{i-1}^2 = c_i`
    Diagonal,
    /// `(h_i r_i)^2 = b_i(n+1)^2`
    OffDiagonal,
    /// `2n^2 I - H^T H` equals `A(n)` bordered by the corner `2n^2`
    ReversedProduct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationFailure {
    pub identity: FactorizationIdentity,
    /// 1-based row index.
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationReport {
    pub n: usize,
    pub failures: Vec<FactorizationFailure>,
}

impl FactorizationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check, in exact integers, the induction step that takes `A(n)` to `A(n+1)`.
pub fn verify_factorization(n: usize) -> Result<FactorizationReport> {
    let h = build_bidiagonal_factor(n)?;
    let n64 = n as u64;
    let (c, b2_next) = shifted_complement_entries(n64);
    let (a, b2) = theorem1_entries(n64);
    let (a_next, _) = theorem1_entries(n64 + 1);
    let shift = BigInt::from(2 * n64 * n64);
    let h2 = h.hdiag_sq();
    let r2 = h.subdiag_sq();
    let mut failures = Vec::new();
    let mut fail = |identity, index| failures.push(FactorizationFailure { identity, index });

    // C = H H^T
    for i in 0..=n {
        let r_prev = if i > 0 {
            r2[i - 1].clone()
        } else {
            BigInt::zero()
        };
        if &h2[i] + r_prev != c[i] {
            fail(FactorizationIdentity::Diagonal, i + 1);
        }
        if c[i] != &shift - &a_next[i] {
            fail(FactorizationIdentity::Diagonal, i + 1);
        }
    }
    for i in 0..n {
        if &h2[i] * &r2[i] != b2_next[i] {
            fail(FactorizationIdentity::OffDiagonal, i + 1);
        }
    }

    // 2n^2 I - H^T H: diagonal 2n^2 - h_i^2 - r_i^2, off-diagonal magnitude r_i h_{i+1}
    for i in 0..=n {
        let r_i = if i < n { r2[i].clone() } else { BigInt::zero() };
        let d = &shift - &h2[i] - r_i;
        let expected = if i < n { a[i].clone() } else { shift.clone() };
        if d != expected {
            fail(FactorizationIdentity::ReversedProduct, i + 1);
        }
    }
    for i in 0..n {
        let off = &r2[i] * &h2[i + 1];
        let expected = if i + 1 < n {
            b2[i].clone()
        } else {
            BigInt::zero()
        };
        if off != expected {
            fail(FactorizationIdentity::ReversedProduct, i + 1);
        }
    }
    Ok(FactorizationReport { n, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn closed_form_small_orders() {
        let m1 = build_theorem1(1).unwrap();
        assert_eq!(m1.diag(), &[0.0]);
        assert!(m1.offdiag().is_empty());

        let m2 = build_theorem1(2).unwrap();
        assert_eq!(m2.diag(), &[1.0, 1.0]);
        assert_eq!(m2.offdiag(), &[1.0]);

        let m3 = build_theorem1(3).unwrap();
        assert_eq!(m3.diag(), &[2.0, 6.0, 2.0]);
        let s6 = 6f64.sqrt();
        assert_eq!(m3.offdiag(), &[s6, s6]);
        assert!(build_theorem1(0).is_err());
    }

    #[test]
    fn closed_form_shape_properties() {
        for n in 1..=100usize {
            let m = build_theorem1(n).unwrap();
            assert!(is_persymmetric(&m, 0.0), "n={n}");
            let e = m.exact().unwrap();
            let first = BigRational::from_integer(BigInt::from(n - 1));
            assert_eq!(e.diag[0], first);
            assert_eq!(e.diag[n - 1], first);
            let peak = n.div_ceil(2) - 1;
            assert!(e.diag.iter().all(|a| a <= &e.diag[peak]), "n={n}");
            let n = n as i64;
            let expected_trace =
                BigRational::from_integer(BigInt::from(n * (n - 1) * (2 * n - 1) / 3));
            assert_eq!(e.trace(), expected_trace);
        }
    }

    #[test]
    fn persymmetry_examples() {
        assert!(is_persymmetric(&build_theorem1(10).unwrap(), 0.0));
        assert!(!is_persymmetric(
            &JacobiMatrix::new(vec![1.0, 2.0], vec![1.0]).unwrap(),
            0.0
        ));
        assert!(is_persymmetric(
            &JacobiMatrix::new(vec![0.0, 5.0, 0.0], vec![2.0, 2.0]).unwrap(),
            0.0
        ));
        let m = JacobiMatrix::new(vec![1.0, 1.0 + 1e-12], vec![1.0]).unwrap();
        assert!(!is_persymmetric(&m, 0.0));
        assert!(is_persymmetric(&m, 1e-10));
    }

    #[test]
    fn sign_normalization() {
        let m = sign_normalize(&[0.0, 0.0, 0.0], &[-1.0, 2.0]).unwrap();
        assert_eq!(m.offdiag(), &[1.0, 2.0]);
        let m = sign_normalize(&[0.0, 0.0], &[3.0]).unwrap();
        assert_eq!(m.offdiag(), &[3.0]);
        let s6 = 6f64.sqrt();
        let m = sign_normalize(&[2.0, 6.0, 2.0], &[-s6, -s6]).unwrap();
        let t = build_theorem1(3).unwrap();
        assert_eq!(m.diag(), t.diag());
        assert_eq!(m.offdiag(), t.offdiag());
        assert!(sign_normalize(&[1.0, 1.0], &[0.0]).is_err());
    }

    #[test]
    fn shifted_complement_examples() {
        let c1 = build_shifted_complement(1).unwrap();
        assert_eq!(c1.diag(), &[1.0, 1.0]);
        assert_eq!(c1.offdiag(), &[1.0]);
        // 2I - A(2) realized with +b equals [[1,1],[1,1]]
        let a2 = build_theorem1(2).unwrap().to_dense(OffDiagSign::Minus);
        let dense = c1.to_dense(OffDiagSign::Plus);
        for i in 0..2 {
            for j in 0..2 {
                let shift = if i == j { 2.0 } else { 0.0 };
                assert_eq!(dense[i][j], shift - a2[i][j]);
            }
        }

        let c2 = build_shifted_complement(2).unwrap();
        assert_eq!(c2.diag(), &[6.0, 2.0, 6.0]);
        assert_eq!(
            c2.exact().unwrap().offdiag_sq,
            vec![exact::int(6), exact::int(6)]
        );

        for n in 1..=50i64 {
            let c = build_shifted_complement(n as usize).unwrap();
            assert_eq!(c.exact().unwrap().diag[0], exact::int(2 * n * n - n));
        }
    }

    #[test]
    fn bidiagonal_examples() {
        let h = build_bidiagonal_factor(1).unwrap();
        assert_eq!(h.hdiag_sq(), ints(&[1, 0]).as_slice());
        assert_eq!(h.subdiag_sq(), ints(&[1]).as_slice());
        assert_eq!(h.hdiag(), vec![1.0, 0.0]);

        let h = build_bidiagonal_factor(2).unwrap();
        assert_eq!(h.subdiag_sq()[1], BigInt::from(6));
        for n in 1..=30 {
            let h = build_bidiagonal_factor(n).unwrap();
            assert_eq!(h.order(), n + 1);
            assert!(h.hdiag_sq()[n].is_zero());
        }
    }

    #[test]
    fn factorization_holds() {
        for n in [1, 5, 40] {
            let report = verify_factorization(n).unwrap();
            assert!(report.passed(), "n={n}: {:?}", report.failures);
        }
    }

    #[test]
    fn json_round_trip_keeps_exact_entries() {
        let m = build_theorem1(4).unwrap();
        let text = m.to_json().to_string();
        assert!(text.contains("\"diag_exact\":[3,11,11,3]"), "{text}");
        let back = JacobiMatrix::from_json(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn json_rejects_bad_order() {
        let err = JacobiMatrix::from_json(r#"{"n":3,"diag":[1,2],"offdiag":[1]}"#);
        assert!(err.is_err());
    }

    #[test]
    fn dense_realization_signs() {
        let m = build_theorem1(3).unwrap();
        let d = m.to_dense(OffDiagSign::Minus);
        assert!(d[0][1] < 0.0 && d[1][0] < 0.0 && d[0][2] == 0.0);
        let v = [1.0, 2.0, 3.0];
        let mv = m.mul_vec(&v);
        for i in 0..3 {
            let dense: f64 = (0..3).map(|j| d[i][j] * v[j]).sum();
            assert!((mv[i] - dense).abs() < 1e-14);
        }
    }
}
