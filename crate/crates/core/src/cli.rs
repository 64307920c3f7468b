//! Command-line front end.
//!
//! Exit codes: `0` success, `1` a verification check failed, `2` bad usage or
//! invalid input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::One;

use crate::chain::{
    self, design_chain, design_chain_closed_form_exact, design_chain_exact, dynamical_matrix_exact,
    figure_parameters, magic_design, ChainDesign,
};
use crate::dynamics::{
    integrate_verlet, mirror_fidelity, snapshot_series, ChainState, ModalPropagator, Trajectory,
};
use crate::eigen::{self, Method};
use crate::error::{Error, Result};
use crate::exact::{self, parse_rational, BigRational};
use crate::format::fmt_f64;
use crate::inverse::{
    deboor_golub, deboor_golub_exact, persymmetric_weights, persymmetric_weights_exact,
    square_integer_spectrum, square_integer_spectrum_exact, square_integer_weights, WeightVector,
};
use crate::jacobi::{build_theorem1, is_persymmetric, verify_factorization, JacobiMatrix};
use crate::plot::{self, Series, Style};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "perfectchain",
    version,
    about = "Jacobi matrices with spectrum {2k^2} and dispersionless mass-spring chains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Float,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Integrator {
    Modal,
    Verlet,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit the order-n matrix with eigenvalues 2k^2.
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every consistency check for order n (or for a matrix file).
    Verify {
        #[arg(long)]
        n: Option<usize>,
        /// Relative tolerance for the floating-point checks.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// JSON matrix to check against the closed form instead of building it.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct the persymmetric Jacobi matrix with a given spectrum.
    Invert {
        /// One eigenvalue per line.
        spectrum: PathBuf,
        /// `auto` for persymmetric weights, or a file with one weight per line.
        #[arg(long, default_value = "auto")]
        weights: String,
        #[arg(long, value_enum, default_value_t = Mode::Float)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coprime integer masses and springs (e.g. `magic 3..10`).
    Magic {
        /// `N` or `LO..HI` (inclusive).
        range: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Masses and springs of the perfect chain.
    Design {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long)]
        m1: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Snapshots of the chain released from a single displaced end mass.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long)]
        m1: Option<f64>,
        /// Defaults to the half period pi/omega.
        #[arg(long)]
        t_end: Option<f64>,
        /// Defaults to t_end/10.
        #[arg(long)]
        interval: Option<f64>,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, value_enum, default_value_t = Integrator::Modal)]
        integrator: Integrator,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Matrix entries and chain parameters along the chain, with limit parabolas.
    Profile {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long)]
        m1: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// What a subcommand produced: text for the primary output and an exit code.
struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self {
            text,
            code: EXIT_OK,
        }
    }
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let out_path = match &cli.command {
        Command::Build { out, .. }
        | Command::Verify { out, .. }
        | Command::Invert { out, .. }
        | Command::Magic { out, .. }
        | Command::Design { out, .. }
        | Command::Simulate { out, .. }
        | Command::Profile { out, .. } => out.clone(),
    };
    match execute(cli.command) {
        Ok(outcome) => {
            let written = match &out_path {
                Some(path) => std::fs::write(path, &outcome.text).map_err(|e| e.to_string()),
                None => stdout
                    .write_all(outcome.text.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: cannot write output: {e}");
                return EXIT_USAGE;
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(command: Command) -> Result<Outcome> {
    match command {
        Command::Build { n, format, .. } => cmd_build(n, format).map(Outcome::ok),
        Command::Verify { n, tol, matrix, .. } => cmd_verify(n, tol, matrix.as_deref()),
        Command::Invert {
            spectrum,
            weights,
            mode,
            format,
            ..
        } => cmd_invert(&spectrum, &weights, mode, format).map(Outcome::ok),
        Command::Magic {
            range, n, format, ..
        } => {
            let (lo, hi) = parse_range(range.as_deref(), n)?;
            cmd_magic(lo, hi, format).map(Outcome::ok)
        }
        Command::Design {
            n,
            omega,
            m1,
            format,
            ..
        } => cmd_design(n, omega, m1, format).map(Outcome::ok),
        Command::Simulate {
            n,
            omega,
            m1,
            t_end,
            interval,
            dt,
            integrator,
            format,
            out,
        } => {
            let params = SimulateParams {
                n,
                omega,
                m1,
                t_end,
                interval,
                dt,
                integrator,
            };
            cmd_simulate(&params, format, out.as_deref()).map(Outcome::ok)
        }
        Command::Profile {
            n,
            omega,
            m1,
            format,
            ..
        } => cmd_profile(n, omega, m1, format).map(Outcome::ok),
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn matrix_csv(m: &JacobiMatrix) -> String {
    let mut out = String::from("i,diag,offdiag,diag_exact,offdiag_sq_exact\n");
    let n = m.order();
    for i in 0..n {
        let off = if i + 1 < n {
            fmt_f64(m.offdiag()[i])
        } else {
            String::new()
        };
        let (de, oe) = match m.exact() {
            Some(e) => (
                exact::format_rational(&e.diag[i]),
                if i + 1 < n {
                    exact::format_rational(&e.offdiag_sq[i])
                } else {
                    String::new()
                },
            ),
            None => (String::new(), String::new()),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            i + 1,
            fmt_f64(m.diag()[i]),
            off,
            de,
            oe
        );
    }
    out
}

fn emit_matrix(m: &JacobiMatrix, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(json_text(&m.to_json())),
        Format::Csv => Ok(matrix_csv(m)),
        Format::Svg => Err(usage("matrices are emitted as json or csv")),
    }
}

pub fn cmd_build(n: usize, format: Format) -> Result<String> {
    emit_matrix(&build_theorem1(n)?, format)
}

/// One line of the verification report.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name,
        passed,
        detail: detail.into(),
    }
}

fn spectrum_check(name: &'static str, m: &JacobiMatrix, tol: f64, method: Method) -> Check {
    let n = m.order();
    let bound = tol * 2.0 * ((n - 1) * (n - 1)) as f64;
    match eigen::eigenvalues_with(m, tol.min(1e-12), method) {
        Ok(ev) => {
            let worst = ev
                .iter()
                .enumerate()
                .map(|(k, l)| (l - 2.0 * (k * k) as f64).abs())
                .fold(0.0, f64::max);
            check(
                name,
                worst <= bound,
                format!("max |lambda_k - 2k^2| = {worst:e} (bound {bound:e})"),
            )
        }
        Err(e) => check(name, false, e.to_string()),
    }
}

fn relative_entry_error(a: &JacobiMatrix, b: &JacobiMatrix) -> f64 {
    let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(1.0);
    let d = a.diag().iter().zip(b.diag()).map(|(x, y)| rel(*x, *y));
    let o = a
        .offdiag()
        .iter()
        .zip(b.offdiag())
        .map(|(x, y)| rel(*x, *y));
    d.chain(o).fold(0.0, f64::max)
}

/// The full battery of checks for order `n`.
pub fn verification_checks(n: usize, tol: f64) -> Result<Vec<Check>> {
    let m = build_theorem1(n)?;
    let mut checks = vec![
        spectrum_check("spectrum_ql", &m, tol, Method::Ql),
        spectrum_check("spectrum_bisection", &m, tol, Method::Bisection),
    ];

    let e = m.exact().expect("closed form carries exact entries");
    let n_i = n as i64;
    let trace_ok = e.trace() == exact::int(n_i * (n_i - 1) * (2 * n_i - 1) / 3);
    checks.push(check(
        "trace",
        trace_ok,
        format!("trace = {}", exact::format_rational(&e.trace())),
    ));
    checks.push(check(
        "persymmetry",
        is_persymmetric(&m, 0.0),
        "exact comparison",
    ));

    let fact = verify_factorization(n)?;
    let detail = match fact.failures.first() {
        Some(f) => format!("{:?} identity fails at row {}", f.identity, f.index),
        None => "C = H H^T and 2n^2 I - H^T H hold exactly".into(),
    };
    checks.push(check("factorization", fact.passed(), detail));

    let spec = square_integer_spectrum(n);
    let rebuilt = deboor_golub(&spec, &persymmetric_weights(&spec)?)?;
    let err = relative_entry_error(&rebuilt, &m);
    checks.push(check(
        "inverse_float",
        err <= 1e-9,
        format!("max relative entry error {err:e} (bound 1e-9)"),
    ));

    if n <= 20 {
        let rec = deboor_golub_exact(
            &square_integer_spectrum_exact(n),
            &square_integer_weights(n)?,
        )?;
        checks.push(check(
            "inverse_exact",
            &rec.matrix == e,
            "exact a_i and b_i^2",
        ));
    }

    if n >= 2 {
        let two = exact::int(2);
        let one = BigRational::one();
        let rec = design_chain_exact(n, &one, &two)?;
        let closed = design_chain_closed_form_exact(n, &one, &two)?;
        checks.push(check(
            "chain_matrix_exact",
            &dynamical_matrix_exact(&rec) == e,
            "omega^2 = 2, M_1 = 1",
        ));
        checks.push(check(
            "recursion_vs_closed_form",
            rec == closed,
            "exact masses and springs",
        ));

        let (omega, m1) = figure_parameters(n);
        let design = design_chain(n, m1, omega)?;
        let prop = ModalPropagator::new(&design)?;
        let ratio_err = prop
            .frequencies()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, w)| (w / prop.frequencies()[1] - k as f64).abs())
            .fold(0.0, f64::max);
        checks.push(check(
            "frequencies",
            ratio_err <= 1e-9,
            format!("max |omega_k/omega_1 - k| = {ratio_err:e}"),
        ));

        let s0 = ChainState::unit_displacement(n, 0);
        let half = prop.propagate(&s0, std::f64::consts::PI / omega)?;
        let report = mirror_fidelity(&s0, &half)?;
        let ok = (report.fidelity - 1.0).abs() <= 1e-10 && report.max_deviation <= 1e-8;
        checks.push(check(
            "mirror_transfer",
            ok,
            format!(
                "fidelity {} max deviation {:e}",
                fmt_f64(report.fidelity),
                report.max_deviation
            ),
        ));
    }
    Ok(checks)
}

/// Checks for a matrix read from disk against the closed form.
pub fn matrix_file_checks(m: &JacobiMatrix, tol: f64) -> Result<Vec<Check>> {
    let n = m.order();
    let reference = build_theorem1(n)?;
    let err = relative_entry_error(m, &reference);
    Ok(vec![
        spectrum_check("spectrum_ql", m, tol, Method::Ql),
        spectrum_check("spectrum_bisection", m, tol, Method::Bisection),
        check(
            "persymmetry",
            is_persymmetric(m, tol * m.norm_inf()),
            "mirror symmetry of entries",
        ),
        check(
            "closed_form_entries",
            err <= tol,
            format!("max relative entry error {err:e}"),
        ),
    ])
}

fn render_checks(title: &str, checks: &[Check]) -> Outcome {
    let mut text = format!("{title}\n");
    for c in checks {
        let _ = writeln!(
            text,
            "{} {:<26} {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    if failed.is_empty() {
        let _ = writeln!(text, "all {} checks passed", checks.len());
        Outcome {
            text,
            code: EXIT_OK,
        }
    } else {
        let _ = writeln!(text, "failed: {}", failed.join(", "));
        Outcome {
            text,
            code: EXIT_CHECK_FAILED,
        }
    }
}

fn cmd_verify(n: Option<usize>, tol: f64, matrix: Option<&Path>) -> Result<Outcome> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(usage(format!("--tol must be positive, got {tol}")));
    }
    match matrix {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            let checks = match JacobiMatrix::from_json(&text) {
                Ok(m) => {
                    if let Some(n) = n {
                        if n != m.order() {
                            return Err(usage(format!(
                                "--n {n} disagrees with the file's order {}",
                                m.order()
                            )));
                        }
                    }
                    matrix_file_checks(&m, tol)?
                }
                Err(e) => vec![check("matrix_file", false, e.to_string())],
            };
            Ok(render_checks(
                &format!("verify {}", path.display()),
                &checks,
            ))
        }
        None => {
            let n = n.ok_or_else(|| usage("verify needs --n or --matrix"))?;
            Ok(render_checks(
                &format!("verify n={n} tol={}", fmt_f64(tol)),
                &verification_checks(n, tol)?,
            ))
        }
    }
}

/// Non-empty, non-comment lines of a text file.
fn data_lines(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

fn parse_floats(lines: &[String]) -> Result<Vec<f64>> {
    lines
        .iter()
        .map(|l| {
            l.parse::<f64>()
                .map_err(|_| Error::Parse(format!("not a number: {l:?}")))
        })
        .collect()
}

pub fn cmd_invert(spectrum: &Path, weights: &str, mode: Mode, format: Format) -> Result<String> {
    let lines = data_lines(spectrum)?;
    let weight_lines = if weights == "auto" {
        None
    } else {
        Some(data_lines(Path::new(weights))?)
    };
    let m = match mode {
        Mode::Float => {
            let spec = parse_floats(&lines)?;
            let w = match weight_lines {
                None => persymmetric_weights(&spec)?,
                Some(l) => WeightVector::new(parse_floats(&l)?)?,
            };
            deboor_golub(&spec, &w)?
        }
        Mode::Exact => {
            let spec: Vec<BigRational> = lines
                .iter()
                .map(|l| parse_rational(l))
                .collect::<Result<_>>()?;
            let w = match weight_lines {
                None => persymmetric_weights_exact(&spec)?,
                Some(l) => {
                    WeightVector::new(l.iter().map(|x| parse_rational(x)).collect::<Result<_>>()?)?
                }
            };
            JacobiMatrix::from_exact(deboor_golub_exact(&spec, &w)?.matrix)?
        }
    };
    emit_matrix(&m, format)
}

fn parse_range(range: Option<&str>, n: Option<usize>) -> Result<(usize, usize)> {
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("bad chain length {s:?}")))
    };
    let (lo, hi) = match (range, n) {
        (Some(r), None) => match r.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let v = parse(r)?;
                (v, v)
            }
        },
        (None, Some(v)) => (v, v),
        (Some(_), Some(_)) => return Err(usage("give either a range or --n, not both")),
        (None, None) => return Err(usage("magic needs a range like 3..10 or --n")),
    };
    if lo < 2 || hi < lo {
        return Err(usage(format!(
            "invalid range {lo}..{hi} (need 2 <= lo <= hi)"
        )));
    }
    Ok((lo, hi))
}

/// Magic table as CSV: `n,omega_squared,i,mass,spring` (spring empty on the last row).
pub fn magic_csv(lo: usize, hi: usize) -> Result<String> {
    let mut out = String::from("n,omega_squared,i,mass,spring\n");
    for n in lo..=hi {
        let d = magic_design(n)?;
        let w2 = exact::format_rational(&d.omega_squared);
        for i in 0..n {
            let k = d.springs.get(i).map(|k| k.to_string()).unwrap_or_default();
            let _ = writeln!(out, "{n},{w2},{},{},{k}", i + 1, d.masses[i]);
        }
    }
    Ok(out)
}

pub fn cmd_magic(lo: usize, hi: usize, format: Format) -> Result<String> {
    match format {
        Format::Csv => magic_csv(lo, hi),
        Format::Json => {
            let designs = (lo..=hi)
                .map(|n| magic_design(n).map(|d| d.to_json()))
                .collect::<Result<Vec<_>>>()?;
            Ok(json_text(&serde_json::Value::Array(designs)))
        }
        Format::Svg => Err(usage("the magic table is emitted as csv or json")),
    }
}

fn chain_params(n: usize, omega: Option<f64>, m1: Option<f64>) -> Result<ChainDesign> {
    if n < 2 {
        return Err(usage("a chain needs n >= 2"));
    }
    let (w0, m0) = figure_parameters(n);
    design_chain(n, m1.unwrap_or(m0), omega.unwrap_or(w0))
}

pub fn cmd_design(n: usize, omega: Option<f64>, m1: Option<f64>, format: Format) -> Result<String> {
    let d = chain_params(n, omega, m1)?;
    match format {
        Format::Json => Ok(json_text(&d.to_json())),
        Format::Csv => {
            let mut out = String::from("i,mass,spring\n");
            for i in 0..n {
                let k = d.springs().get(i).map(|k| fmt_f64(*k)).unwrap_or_default();
                let _ = writeln!(out, "{},{},{k}", i + 1, fmt_f64(d.masses()[i]));
            }
            Ok(out)
        }
        Format::Svg => Err(usage(
            "designs are emitted as json or csv; use `profile` for plots",
        )),
    }
}

#[derive(Debug, Clone)]
pub struct SimulateParams {
    pub n: usize,
    pub omega: Option<f64>,
    pub m1: Option<f64>,
    pub t_end: Option<f64>,
    pub interval: Option<f64>,
    pub dt: f64,
    pub integrator: Integrator,
}

pub fn simulate(p: &SimulateParams) -> Result<Trajectory> {
    let d = chain_params(p.n, p.omega, p.m1)?;
    let t_end = p.t_end.unwrap_or(std::f64::consts::PI / d.omega());
    let interval = p
        .interval
        .unwrap_or(if t_end > 0.0 { t_end / 10.0 } else { 1.0 });
    let s0 = ChainState::unit_displacement(p.n, 0);
    match p.integrator {
        Integrator::Modal => snapshot_series(&d, &s0, t_end, interval),
        Integrator::Verlet => integrate_verlet(&d, &s0, t_end, p.dt, interval),
    }
}

fn cmd_simulate(p: &SimulateParams, format: Format, out: Option<&Path>) -> Result<String> {
    let traj = simulate(p)?;
    match format {
        Format::Csv => Ok(traj.to_csv()),
        Format::Json => Ok(json_text(&traj.to_json())),
        Format::Svg => {
            let out = out
                .ok_or_else(|| usage("--format svg needs --out (the CSV is written next to it)"))?;
            std::fs::write(out.with_extension("csv"), traj.to_csv())
                .map_err(|e| usage(format!("cannot write CSV next to {}: {e}", out.display())))?;
            let rows: Vec<(f64, Vec<f64>)> =
                traj.snapshots.iter().map(|s| (s.t, s.q.clone())).collect();
            Ok(plot::stacked_rows(
                &format!("perfect chain, n = {}", p.n),
                &rows,
            ))
        }
    }
}

/// One row of the parameter profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRow {
    pub series: &'static str,
    pub i: usize,
    pub abscissa: f64,
    pub x: f64,
    pub value: f64,
    pub limit: Option<f64>,
}

/// Scaled matrix entries `a~_i`, `b~_i` and chain parameters `M_i`, `K_i`;
/// bond quantities sit at the abscissa `i + 1/2`.
pub fn profile_rows(n: usize, omega: Option<f64>, m1: Option<f64>) -> Result<Vec<ProfileRow>> {
    let d = chain_params(n, omega, m1)?;
    let m = build_theorem1(n)?;
    let half_w2 = d.omega() * d.omega() / 2.0;
    let len = (n - 1) as f64;
    let mut rows = Vec::with_capacity(4 * n);
    for i in 1..=n {
        let x = (i - 1) as f64 / len;
        rows.push(ProfileRow {
            series: "a",
            i,
            abscissa: i as f64,
            x,
            value: half_w2 * m.diag()[i - 1],
            limit: Some(chain::diag_parabola(x)),
        });
    }
    for i in 1..n {
        let x = (i as f64 - 0.5) / len;
        rows.push(ProfileRow {
            series: "b",
            i,
            abscissa: i as f64 + 0.5,
            x,
            value: half_w2 * m.offdiag()[i - 1],
            limit: Some(chain::offdiag_parabola(x)),
        });
    }
    for i in 1..=n {
        let x = (i - 1) as f64 / len;
        rows.push(ProfileRow {
            series: "M",
            i,
            abscissa: i as f64,
            x,
            value: d.masses()[i - 1],
            limit: None,
        });
    }
    for i in 1..n {
        let x = (i as f64 - 0.5) / len;
        rows.push(ProfileRow {
            series: "K",
            i,
            abscissa: i as f64 + 0.5,
            x,
            value: d.springs()[i - 1],
            limit: None,
        });
    }
    Ok(rows)
}

pub fn cmd_profile(
    n: usize,
    omega: Option<f64>,
    m1: Option<f64>,
    format: Format,
) -> Result<String> {
    let rows = profile_rows(n, omega, m1)?;
    match format {
        Format::Csv => {
            let mut out = String::from("series,i,abscissa,x,value,limit\n");
            for r in &rows {
                let limit = r.limit.map(fmt_f64).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{limit}",
                    r.series,
                    r.i,
                    fmt_f64(r.abscissa),
                    fmt_f64(r.x),
                    fmt_f64(r.value)
                );
            }
            Ok(out)
        }
        Format::Json => {
            let v: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| serde_json::json!({"series": r.series, "i": r.i, "abscissa": r.abscissa, "x": r.x, "value": r.value, "limit": r.limit}))
                .collect();
            Ok(json_text(&serde_json::Value::Array(v)))
        }
        Format::Svg => {
            let pick = |name: &str, style| {
                Series::new(
                    name,
                    rows.iter()
                        .filter(|r| r.series == name)
                        .map(|r| (r.x, r.value))
                        .collect(),
                    style,
                )
            };
            let fine: Vec<f64> = (0..=200).map(|j| j as f64 / 200.0).collect();
            let series = [
                pick("a", Style::Markers),
                pick("b", Style::Markers),
                pick("M", Style::LineAndMarkers),
                pick("K", Style::LineAndMarkers),
                Series::new(
                    "2 pi^2 x(1-x)",
                    fine.iter().map(|&x| (x, chain::diag_parabola(x))).collect(),
                    Style::Line,
                ),
                Series::new(
                    "pi^2 x(1-x)",
                    fine.iter()
                        .map(|&x| (x, chain::offdiag_parabola(x)))
                        .collect(),
                    Style::Line,
                ),
            ];
            Ok(plot::chart(
                &format!("chain parameters, n = {n}"),
                "x = (i-1)/(n-1)",
                &series,
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("perfectchain").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn build_outputs() {
        let (code, out, _) = run_args(&["build", "--n", "3", "--format", "csv"]);
        assert_eq!(code, 0);
        assert!(out.contains("1,2,2.449489742783178,2,6"), "{out}");
        let (code, out, _) = run_args(&["build", "--n", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"diag_exact\": [\n    0\n  ]"), "{out}");
        let (code, _, err) = run_args(&["build", "--n", "0"]);
        assert_eq!(code, 2);
        assert!(err.contains("order"));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        assert_eq!(run_args(&["build"]).0, 2);
        assert_eq!(run_args(&["magic"]).0, 2);
        assert_eq!(run_args(&["magic", "5..3"]).0, 2);
    }

    #[test]
    fn verify_small_orders() {
        for n in ["1", "2", "10"] {
            let (code, out, _) = run_args(&["verify", "--n", n]);
            assert_eq!(code, 0, "{out}");
            assert!(!out.contains("FAIL"));
        }
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range(Some("3..10"), None).unwrap(), (3, 10));
        assert_eq!(parse_range(Some("3..=10"), None).unwrap(), (3, 10));
        assert_eq!(parse_range(Some("12"), None).unwrap(), (12, 12));
        assert_eq!(parse_range(None, Some(4)).unwrap(), (4, 4));
        assert!(parse_range(Some("1..3"), None).is_err());
    }

    #[test]
    fn magic_n2() {
        assert_eq!(
            magic_csv(2, 2).unwrap(),
            "n,omega_squared,i,mass,spring\n2,2,1,1,1\n2,2,2,1,\n"
        );
    }

    #[test]
    fn profile_parabola_column() {
        let rows = profile_rows(10, None, None).unwrap();
        for r in rows.iter().filter(|r| r.series == "a") {
            assert_eq!(
                r.limit.unwrap(),
                2.0 * std::f64::consts::PI.powi(2) * r.x * (1.0 - r.x)
            );
        }
        let b: Vec<_> = rows.iter().filter(|r| r.series == "b").collect();
        assert_eq!(b[0].abscissa, 1.5);
        assert_eq!(rows.len(), 4 * 10 - 2);
    }
}
