//! Mass-spring chains whose normal-mode frequencies are `omega * k`.
//!
//! A chain with masses `M_i` and springs `K_i` (free ends, `K_0 = K_n = 0`)
//! has dynamical matrix `M^{-1/2} K M^{-1/2}`. Choosing
//!
//! ```text
//! M_{i+1} = M_i (2i-1)/i * (n-i)/(2n-2i-1)
//! K_i     = M_i omega^2/2 * (2i-1)(n-i)
//! ```
//!
//! makes that matrix equal to `omega^2/2` times the `{2k^2}` Jacobi matrix.

use std::f64::consts::PI;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{domain, Result};
use crate::exact::{self, binomial, gcd_all, normalize_to_coprime_integers, BigInt, BigRational};
use crate::jacobi::{ExactJacobi, JacobiMatrix};

/// Physical chain parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainDesign {
    masses: Vec<f64>,
    springs: Vec<f64>,
    omega: f64,
}

impl ChainDesign {
    /// Validate and wrap a chain; `omega` is the nominal frequency spacing
    /// (only meaningful for perfect chains, but always carried along).
    pub fn new(masses: Vec<f64>, springs: Vec<f64>, omega: f64) -> Result<Self> {
        if masses.is_empty() {
            return domain("a chain needs at least one mass");
        }
        if springs.len() + 1 != masses.len() {
            return domain(format!(
                "{} masses need {} springs, got {}",
                masses.len(),
                masses.len() - 1,
                springs.len()
            ));
        }
        if masses
            .iter()
            .chain(&springs)
            .any(|x| !(x.is_finite() && *x > 0.0))
        {
            return domain("masses and spring constants must be positive and finite");
        }
        if !(omega.is_finite() && omega > 0.0) {
            return domain(format!("frequency spacing must be positive, got {omega}"));
        }
        Ok(Self {
            masses,
            springs,
            omega,
        })
    }

    /// Identical masses and springs.
    pub fn uniform(n: usize, mass: f64, spring: f64) -> Result<Self> {
        Self::new(vec![mass; n], vec![spring; n.saturating_sub(1)], 1.0)
    }

    pub fn n(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn springs(&self) -> &[f64] {
        &self.springs
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n(),
            "masses": self.masses,
            "springs": self.springs,
            "omega": self.omega,
        })
    }
}

/// Chain parameters in exact rational arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactChainDesign {
    pub masses: Vec<BigRational>,
    pub springs: Vec<BigRational>,
    pub omega_sq: BigRational,
}

impl ExactChainDesign {
    pub fn n(&self) -> usize {
        self.masses.len()
    }

    pub fn to_float(&self) -> Result<ChainDesign> {
        ChainDesign::new(
            self.masses.iter().map(exact::to_f64).collect(),
            self.springs.iter().map(exact::to_f64).collect(),
            exact::to_f64(&self.omega_sq).sqrt(),
        )
    }

    /// Multiply every mass and spring by `c`.
    pub fn scaled(&self, c: &BigRational) -> Self {
        Self {
            masses: self.masses.iter().map(|m| m * c).collect(),
            springs: self.springs.iter().map(|k| k * c).collect(),
            omega_sq: self.omega_sq.clone(),
        }
    }
}

/// Default figure parameterization: `omega = pi/(n-1)`, `M_1 = sqrt((n-1)/pi)`.
pub fn figure_parameters(n: usize) -> (f64, f64) {
    let len = n.saturating_sub(1).max(1) as f64;
    (PI / len, (len / PI).sqrt())
}

fn check_design_args(n: usize) -> Result<()> {
    if n < 2 {
        return domain("a chain needs at least two masses to carry springs");
    }
    Ok(())
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if !(x.is_finite() && x > 0.0) {
        return domain(format!("{name} must be positive, got {x}"));
    }
    Ok(())
}

/// Masses by the two-term recursion, springs from `K_i = M_i omega^2/2 (2i-1)(n-i)`.
pub fn design_chain(n: usize, m1: f64, omega: f64) -> Result<ChainDesign> {
    check_design_args(n)?;
    check_positive("M_1", m1)?;
    check_positive("omega", omega)?;
    let nf = n as f64;
    let mut masses = Vec::with_capacity(n);
    masses.push(m1);
    for i in 1..n {
        let i = i as f64;
        let prev = *masses.last().unwrap();
        masses.push(prev * (2.0 * i - 1.0) / i * (nf - i) / (2.0 * nf - 2.0 * i - 1.0));
    }
    let springs = (1..n)
        .map(|i| {
            let i = i as f64;
            masses[i as usize - 1] * omega * omega / 2.0 * (2.0 * i - 1.0) * (nf - i)
        })
        .collect();
    ChainDesign::new(masses, springs, omega)
}

pub fn design_chain_exact(
    n: usize,
    m1: &BigRational,
    omega_sq: &BigRational,
) -> Result<ExactChainDesign> {
    check_design_args(n)?;
    if *m1 <= BigRational::zero() || *omega_sq <= BigRational::zero() {
        return domain("M_1 and omega^2 must be positive");
    }
    let r = |v: i64| BigRational::from_integer(BigInt::from(v));
    let n64 = n as i64;
    let mut masses = vec![m1.clone()];
    for i in 1..n64 {
        let prev = masses.last().unwrap().clone();
        masses.push(prev * r(2 * i - 1) * r(n64 - i) / (r(i) * r(2 * n64 - 2 * i - 1)));
    }
    let half = omega_sq / r(2);
    let springs = (1..n64)
        .map(|i| &masses[i as usize - 1] * &half * r((2 * i - 1) * (n64 - i)))
        .collect();
    Ok(ExactChainDesign {
        masses,
        springs,
        omega_sq: omega_sq.clone(),
    })
}

/// Masses and springs from the binomial closed forms.
pub fn design_chain_closed_form_exact(
    n: usize,
    m1: &BigRational,
    omega_sq: &BigRational,
) -> Result<ExactChainDesign> {
    check_design_args(n)?;
    if *m1 <= BigRational::zero() || *omega_sq <= BigRational::zero() {
        return domain("M_1 and omega^2 must be positive");
    }
    let n64 = n as u64;
    let masses = (1..=n64)
        .map(|i| {
            let c = binomial(n64 - 1, i as i64 - 1);
            m1 * BigRational::new(&c * &c, binomial(2 * n64 - 2, 2 * i as i64 - 2))
        })
        .collect();
    let lead = m1 * omega_sq * BigRational::from_integer(BigInt::from((n64 - 1) * (n64 - 1)));
    let springs = (1..n64)
        .map(|i| {
            let c = binomial(n64 - 2, i as i64 - 1);
            &lead * BigRational::new(&c * &c, binomial(2 * n64 - 2, 2 * i as i64 - 1))
        })
        .collect();
    Ok(ExactChainDesign {
        masses,
        springs,
        omega_sq: omega_sq.clone(),
    })
}

/// Floating-point evaluation of the binomial closed forms.
///
/// Binomial ratios are evaluated exactly and rounded once, so this stays
/// accurate where `C(2n-2, .)` itself would overflow `f64`.
pub fn design_chain_closed_form(n: usize, m1: f64, omega: f64) -> Result<ChainDesign> {
    check_design_args(n)?;
    check_positive("M_1", m1)?;
    check_positive("omega", omega)?;
    let unit = design_chain_closed_form_exact(n, &BigRational::one(), &BigRational::one())?;
    ChainDesign::new(
        unit.masses.iter().map(|m| m1 * exact::to_f64(m)).collect(),
        unit.springs
            .iter()
            .map(|k| m1 * omega * omega * exact::to_f64(k))
            .collect(),
        omega,
    )
}

/// Coprime integer masses and springs with the matching `omega^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MagicDesign {
    pub n: usize,
    pub masses: Vec<BigInt>,
    pub springs: Vec<BigInt>,
    pub omega_squared: BigRational,
}

impl MagicDesign {
    pub fn to_exact(&self) -> ExactChainDesign {
        ExactChainDesign {
            masses: self
                .masses
                .iter()
                .cloned()
                .map(BigRational::from_integer)
                .collect(),
            springs: self
                .springs
                .iter()
                .cloned()
                .map(BigRational::from_integer)
                .collect(),
            omega_sq: self.omega_squared.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        let strings = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        json!({
            "n": self.n,
            "masses": strings(&self.masses),
            "springs": strings(&self.springs),
            "omega_squared": exact::format_rational(&self.omega_squared),
        })
    }
}

/// Normalize the perfect chain to coprime integers.
///
/// Start from `M_1 = 1`, `omega^2 = 2` (so `K_i = M_i (2i-1)(n-i)`), clear the
/// mass denominators with the smallest factor `alpha`, then divide the
/// (integer) springs `alpha K_i` by their gcd `g`; the spacing becomes
/// `omega^2 = 2/g`.
pub fn magic_design(n: usize) -> Result<MagicDesign> {
    let base = design_chain_exact(
        n,
        &BigRational::one(),
        &BigRational::from_integer(BigInt::from(2)),
    )?;
    let (masses, alpha) = normalize_to_coprime_integers(&base.masses)?;
    let scaled: Vec<BigRational> = base.springs.iter().map(|k| k * &alpha).collect();
    debug_assert!(scaled.iter().all(|k| k.is_integer()));
    let ints: Vec<BigInt> = scaled.iter().map(|k| k.to_integer()).collect();
    let g = gcd_all(&ints);
    let springs = ints.into_iter().map(|k| k / &g).collect();
    Ok(MagicDesign {
        n,
        masses,
        springs,
        omega_squared: BigRational::new(BigInt::from(2), g),
    })
}

/// `M^{-1/2} K M^{-1/2}`: diagonal `(K_i + K_{i-1})/M_i`, couplings
/// `K_i / sqrt(M_i M_{i+1})` (realized with a minus sign).
pub fn dynamical_matrix(d: &ChainDesign) -> Result<JacobiMatrix> {
    let n = d.n();
    let (m, k) = (d.masses(), d.springs());
    let diag = (0..n)
        .map(|i| {
            let right = if i + 1 < n { k[i] } else { 0.0 };
            let left = if i > 0 { k[i - 1] } else { 0.0 };
            (left + right) / m[i]
        })
        .collect();
    let offdiag = (0..n - 1)
        .map(|i| k[i] / (m[i] * m[i + 1]).sqrt())
        .collect();
    JacobiMatrix::new(diag, offdiag)
}

pub fn dynamical_matrix_exact(d: &ExactChainDesign) -> ExactJacobi {
    let n = d.n();
    let (m, k) = (&d.masses, &d.springs);
    let diag = (0..n)
        .map(|i| {
            let mut sum = BigRational::zero();
            if i + 1 < n {
                sum += &k[i];
            }
            if i > 0 {
                sum += &k[i - 1];
            }
            sum / &m[i]
        })
        .collect();
    let offdiag_sq = (0..n - 1)
        .map(|i| &k[i] * &k[i] / (&m[i] * &m[i + 1]))
        .collect();
    ExactJacobi { diag, offdiag_sq }
}

/// Strict monotonicity toward the middle (`M_{i+1} < M_i`, `K_{i+1} > K_i`
/// for `2(i+1) < n`) plus mirror symmetry within `1e-12` relative.
pub fn monotonicity_check(d: &ChainDesign) -> bool {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
    let mirrored = |v: &[f64]| v.iter().zip(v.iter().rev()).all(|(a, b)| close(*a, *b));
    mirrored(d.masses()) && mirrored(d.springs()) && strictly_shaped(d.masses(), d.springs())
}

pub fn monotonicity_check_exact(d: &ExactChainDesign) -> bool {
    let mirrored = |v: &[BigRational]| v.iter().eq(v.iter().rev());
    mirrored(&d.masses) && mirrored(&d.springs) && strictly_shaped(&d.masses, &d.springs)
}

fn strictly_shaped<T: PartialOrd>(masses: &[T], springs: &[T]) -> bool {
    let n = masses.len();
    // 1-based i with 2(i+1) < n
    (1..n)
        .filter(|i| 2 * (i + 1) < n)
        .all(|i| masses[i] < masses[i - 1] && springs[i] > springs[i - 1])
}

/// Large-`n` shape diagnostics for the perfect chain.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticsReport {
    pub n: usize,
    /// `M_mid / M_1` (exact ratio, rounded once).
    pub mass_ratio: f64,
    /// `2 / sqrt(pi n)`.
    pub mass_ratio_predicted: f64,
    pub mass_ratio_rel_dev: f64,
    /// `K_mid / K_1`.
    pub spring_ratio: f64,
    /// `sqrt(n / pi)`.
    pub spring_ratio_predicted: f64,
    pub spring_ratio_rel_dev: f64,
    /// max over `i = 2..n-1` of `|a~_i - 2 pi^2 x(1-x)|`, `x = (i-1)/(n-1)`.
    pub diag_parabola_dev: f64,
    /// max over `i` of `|b~_i - pi^2 x(1-x)|` at the bond abscissa
    /// `x = (i - 1/2)/(n-1)`.
    pub offdiag_parabola_dev: f64,
}

impl AsymptoticsReport {
    /// Diagonal deviation as a fraction of the limiting peak `pi^2/2`.
    pub fn diag_parabola_rel_dev(&self) -> f64 {
        self.diag_parabola_dev / (PI * PI / 2.0)
    }

    /// Off-diagonal deviation as a fraction of the limiting peak `pi^2/4`.
    pub fn offdiag_parabola_rel_dev(&self) -> f64 {
        self.offdiag_parabola_dev / (PI * PI / 4.0)
    }
}

/// Limit parabola for `a~` at `x`.
pub fn diag_parabola(x: f64) -> f64 {
    2.0 * PI * PI * x * (1.0 - x)
}

/// Limit parabola for `b~` at `x`.
pub fn offdiag_parabola(x: f64) -> f64 {
    PI * PI * x * (1.0 - x)
}

pub fn asymptotic_report(n: usize) -> Result<AsymptoticsReport> {
    if n < 4 {
        return domain("asymptotics need n >= 4");
    }
    let n64 = n as u64;
    let mid = n64.div_ceil(2);
    let cm = binomial(n64 - 1, mid as i64 - 1);
    let mass_ratio = exact::to_f64(&BigRational::new(
        &cm * &cm,
        binomial(2 * n64 - 2, 2 * mid as i64 - 2),
    ));
    let ck = binomial(n64 - 2, mid as i64 - 1);
    let spring_ratio = exact::to_f64(&BigRational::new(
        BigInt::from(2 * n64 - 2) * &ck * &ck,
        binomial(2 * n64 - 2, 2 * mid as i64 - 1),
    ));
    let nf = n as f64;
    let mass_ratio_predicted = 2.0 / (PI * nf).sqrt();
    let spring_ratio_predicted = (nf / PI).sqrt();

    let omega = PI / (nf - 1.0);
    let half_w2 = omega * omega / 2.0;
    let (a, b2) = crate::jacobi::theorem1_entries(n64);
    let diag_parabola_dev = (1..n - 1)
        .map(|i| {
            let x = i as f64 / (nf - 1.0);
            (half_w2 * exact::to_f64(&BigRational::from_integer(a[i].clone())) - diag_parabola(x))
                .abs()
        })
        .fold(0.0, f64::max);
    let offdiag_parabola_dev = (0..n - 1)
        .map(|i| {
            let x = (i as f64 + 0.5) / (nf - 1.0);
            let b = exact::to_f64(&BigRational::from_integer(b2[i].clone())).sqrt();
            (half_w2 * b - offdiag_parabola(x)).abs()
        })
        .fold(0.0, f64::max);

    Ok(AsymptoticsReport {
        n,
        mass_ratio,
        mass_ratio_predicted,
        mass_ratio_rel_dev: (mass_ratio - mass_ratio_predicted).abs() / mass_ratio_predicted,
        spring_ratio,
        spring_ratio_predicted,
        spring_ratio_rel_dev: (spring_ratio - spring_ratio_predicted).abs()
            / spring_ratio_predicted,
        diag_parabola_dev,
        offdiag_parabola_dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rational};
    use crate::jacobi::build_theorem1;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rats(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn recursion_examples() {
        let d = design_chain_exact(3, &int(3), &rational(1, 3)).unwrap();
        assert_eq!(d.masses, rats(&[3, 2, 3]));
        assert_eq!(d.springs, rats(&[1, 1]));

        let d = design_chain_exact(5, &int(35), &rational(1, 10)).unwrap();
        assert_eq!(d.masses, rats(&[35, 20, 18, 20, 35]));
        assert_eq!(d.springs, rats(&[7, 9, 9, 7]));

        let d = design_chain_exact(2, &int(1), &int(2)).unwrap();
        assert_eq!(d.masses, rats(&[1, 1]));
        assert_eq!(d.springs, rats(&[1]));

        let f = design_chain(5, 35.0, 0.1f64.sqrt()).unwrap();
        for (got, want) in f.masses().iter().zip([35.0, 20.0, 18.0, 20.0, 35.0]) {
            assert!((got - want).abs() < 1e-12 * want);
        }
        for (got, want) in f.springs().iter().zip([7.0, 9.0, 9.0, 7.0]) {
            assert!((got - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn closed_form_examples() {
        let d = design_chain_closed_form_exact(4, &int(5), &rational(2, 3)).unwrap();
        assert_eq!(d.masses, rats(&[5, 3, 3, 5]));
        assert_eq!(d.springs, rats(&[5, 6, 5]));

        let d = design_chain_closed_form_exact(10, &int(1), &int(1)).unwrap();
        assert_eq!(d.masses[0], int(1));
        assert_eq!(d.masses[4], rational(4410, 12155));
        assert_eq!(d.masses[4], rational(126 * 126, 43758));

        let f = design_chain_closed_form(4, 5.0, (2.0f64 / 3.0).sqrt()).unwrap();
        for (got, want) in f.springs().iter().zip([5.0, 6.0, 5.0]) {
            assert!((got - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn invalid_designs() {
        assert!(design_chain(1, 1.0, 1.0).is_err());
        assert!(design_chain(3, 0.0, 1.0).is_err());
        assert!(design_chain(3, 1.0, -1.0).is_err());
        assert!(design_chain_exact(3, &int(-1), &int(1)).is_err());
        assert!(ChainDesign::new(vec![1.0, 1.0], vec![], 1.0).is_err());
        assert!(ChainDesign::new(vec![1.0, -1.0], vec![1.0], 1.0).is_err());
    }

    #[test]
    fn magic_examples() {
        let d = magic_design(7).unwrap();
        assert_eq!(d.masses, ints(&[231, 126, 105, 100, 105, 126, 231]));
        assert_eq!(d.springs, ints(&[33, 45, 50, 50, 45, 33]));
        assert_eq!(d.omega_squared, rational(1, 21));

        let d = magic_design(10).unwrap();
        assert_eq!(d.masses[0], BigInt::from(12155));
        assert_eq!(d.springs[0], BigInt::from(2431));
        // K_1 = M_1 omega^2/2 (n-1) forces 2431 = 12155 * 9 * omega^2 / 2
        assert_eq!(d.omega_squared, rational(2, 45));

        let d = magic_design(2).unwrap();
        assert_eq!(
            (d.masses, d.springs, d.omega_squared),
            (ints(&[1, 1]), ints(&[1]), int(2))
        );
    }

    #[test]
    fn magic_spacing_matches_spectrum() {
        for n in 3..=10 {
            let d = magic_design(n).unwrap();
            let m = dynamical_matrix(&d.to_exact().to_float().unwrap()).unwrap();
            let w2 = exact::to_f64(&d.omega_squared);
            let ev = crate::eigen::eigenvalues(&m, 1e-14).unwrap();
            for (k, lambda) in ev.iter().enumerate() {
                let want = w2 * (k * k) as f64;
                assert!(
                    (lambda - want).abs() < 1e-9 * w2 * (n * n) as f64,
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn magic_json_uses_strings() {
        let v = magic_design(3).unwrap().to_json();
        assert_eq!(v["omega_squared"], "1/3");
        assert_eq!(v["masses"][1], "2");
    }

    #[test]
    fn dynamical_matrix_examples() {
        let uniform = ChainDesign::uniform(2, 1.0, 1.0).unwrap();
        let m = dynamical_matrix(&uniform).unwrap();
        assert_eq!(m.diag(), &[1.0, 1.0]);
        assert_eq!(m.offdiag(), &[1.0]);

        let omega = 0.3;
        let d = design_chain(12, 2.5, omega).unwrap();
        let dyn_m = dynamical_matrix(&d).unwrap();
        let target = build_theorem1(12)
            .unwrap()
            .scaled(omega * omega / 2.0)
            .unwrap();
        for (x, y) in dyn_m.diag().iter().zip(target.diag()) {
            assert!((x - y).abs() <= 1e-12 * y.abs().max(1e-300), "{x} vs {y}");
        }
        for (x, y) in dyn_m.offdiag().iter().zip(target.offdiag()) {
            assert!((x - y).abs() <= 1e-12 * y);
        }
    }

    #[test]
    fn monotonicity_examples() {
        let t9 = magic_design(9).unwrap();
        assert_eq!(t9.masses[..5], ints(&[6435, 3432, 2772, 2520, 2450])[..]);
        assert!(monotonicity_check_exact(&t9.to_exact()));
        assert!(monotonicity_check(&t9.to_exact().to_float().unwrap()));
        assert!(monotonicity_check(&design_chain(3, 1.0, 1.0).unwrap()));
        let lopsided = ChainDesign::new(vec![3.0, 2.0, 1.0], vec![1.0, 2.0], 1.0).unwrap();
        assert!(!monotonicity_check(&lopsided));
        // persymmetric but wrong shape
        let bumpy = ChainDesign::new(
            vec![1.0, 2.0, 3.0, 2.0, 1.0, 2.0, 3.0, 2.0, 1.0],
            vec![1.0; 8],
            1.0,
        )
        .unwrap();
        assert!(!monotonicity_check(&bumpy));
    }

    #[test]
    fn asymptotics_smoke_and_n200() {
        let r = asymptotic_report(4).unwrap();
        assert!(r.mass_ratio_rel_dev.is_finite() && r.diag_parabola_dev.is_finite());
        assert!(asymptotic_report(3).is_err());
        let r = asymptotic_report(200).unwrap();
        assert!(r.mass_ratio_rel_dev < 0.01);
        assert!(r.spring_ratio_rel_dev < 0.01);
        assert!(r.diag_parabola_dev < 0.05 * 2.0 * PI * PI / 4.0);
    }

    #[test]
    fn figure_defaults() {
        let (omega, m1) = figure_parameters(51);
        assert!((omega - PI / 50.0).abs() < 1e-16);
        assert!((m1 - (50.0 / PI).sqrt()).abs() < 1e-15);
    }
}
