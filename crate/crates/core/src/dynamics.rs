//! Free evolution of a mass-spring chain.
//!
//! States are kept in mass-weighted coordinates `q_i = sqrt(M_i) u_i`, where
//! the equations of motion read `q'' = -D q` with `D` the dynamical matrix.
//! [`ModalPropagator`] evolves each normal mode in closed form; the
//! velocity-Verlet integrator works on the physical displacements `u` and
//! serves as an independent check.

use serde_json::{json, Value};

use crate::chain::{dynamical_matrix, ChainDesign};
use crate::eigen::{self, EigenSystem};
use crate::error::{domain, Error, Result};
use crate::format::fmt_f64;

const EIGEN_TOL: f64 = 1e-13;

/// Snapshot of the chain at time `t` (mass-weighted coordinates).
#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    pub t: f64,
    pub q: Vec<f64>,
    pub qdot: Vec<f64>,
}

impl ChainState {
    pub fn new(t: f64, q: Vec<f64>, qdot: Vec<f64>) -> Result<Self> {
        if q.len() != qdot.len() || q.is_empty() {
            return domain(
                "displacement and velocity arrays must be non-empty and of equal length",
            );
        }
        Ok(Self { t, q, qdot })
    }

    /// At rest, all masses at equilibrium.
    pub fn zeros(n: usize) -> Self {
        Self {
            t: 0.0,
            q: vec![0.0; n],
            qdot: vec![0.0; n],
        }
    }

    /// At rest with unit mass-weighted displacement of one site (0-based).
    pub fn unit_displacement(n: usize, site: usize) -> Self {
        let mut s = Self::zeros(n);
        s.q[site] = 1.0;
        s
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    /// `u_i = q_i / sqrt(M_i)`.
    pub fn physical_displacements(&self, masses: &[f64]) -> Vec<f64> {
        self.q
            .iter()
            .zip(masses)
            .map(|(q, m)| q / m.sqrt())
            .collect()
    }

    pub fn physical_velocities(&self, masses: &[f64]) -> Vec<f64> {
        self.qdot
            .iter()
            .zip(masses)
            .map(|(v, m)| v / m.sqrt())
            .collect()
    }

    fn from_physical(t: f64, u: &[f64], v: &[f64], masses: &[f64]) -> Self {
        Self {
            t,
            q: u.iter().zip(masses).map(|(x, m)| x * m.sqrt()).collect(),
            qdot: v.iter().zip(masses).map(|(x, m)| x * m.sqrt()).collect(),
        }
    }

    /// Mirror image `q_i -> q_{n+1-i}`.
    pub fn mirrored(&self) -> Self {
        Self {
            t: self.t,
            q: self.q.iter().rev().copied().collect(),
            qdot: self.qdot.iter().rev().copied().collect(),
        }
    }
}

/// `E = 1/2 sum M_i u'_i^2 + 1/2 sum K_i (u_{i+1} - u_i)^2`.
pub fn energy(d: &ChainDesign, state: &ChainState) -> f64 {
    let u = state.physical_displacements(d.masses());
    let v = state.physical_velocities(d.masses());
    let kinetic: f64 = d.masses().iter().zip(&v).map(|(m, v)| m * v * v).sum();
    let potential: f64 = d
        .springs()
        .iter()
        .enumerate()
        .map(|(i, k)| k * (u[i + 1] - u[i]).powi(2))
        .sum();
    0.5 * (kinetic + potential)
}

/// Ordered snapshots of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub design: ChainDesign,
    pub snapshots: Vec<ChainState>,
    pub interval: f64,
}

impl Trajectory {
    pub fn first(&self) -> &ChainState {
        &self.snapshots[0]
    }

    pub fn last(&self) -> &ChainState {
        self.snapshots
            .last()
            .expect("trajectory has at least one snapshot")
    }

    pub fn energies(&self) -> Vec<f64> {
        self.snapshots
            .iter()
            .map(|s| energy(&self.design, s))
            .collect()
    }

    /// Largest `|E(t) - E(0)| / E(0)` over the snapshots (zero for a chain at rest).
    pub fn max_relative_energy_drift(&self) -> f64 {
        let e = self.energies();
        if e[0] == 0.0 {
            return e.iter().fold(0.0, |m, x| m.max(x.abs()));
        }
        e.iter()
            .map(|x| (x - e[0]).abs() / e[0])
            .fold(0.0, f64::max)
    }

    /// `t,i,q,qdot,u`, one row per snapshot and site (`i` is 1-based).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,i,q,qdot,u\n");
        for s in &self.snapshots {
            let u = s.physical_displacements(self.design.masses());
            for (i, ((q, v), u)) in s.q.iter().zip(&s.qdot).zip(&u).enumerate() {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt_f64(s.t),
                    i + 1,
                    fmt_f64(*q),
                    fmt_f64(*v),
                    fmt_f64(*u)
                ));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let snaps: Vec<Value> = self
            .snapshots
            .iter()
            .map(|s| json!({ "t": s.t, "q": s.q, "qdot": s.qdot, "u": s.physical_displacements(self.design.masses()) }))
            .collect();
        json!({ "design": self.design.to_json(), "interval": self.interval, "snapshots": snaps })
    }
}

/// Normal-mode decomposition of a chain, reusable across many times.
#[derive(Debug, Clone)]
pub struct ModalPropagator {
    design: ChainDesign,
    system: EigenSystem,
    frequencies: Vec<f64>,
}

impl ModalPropagator {
    pub fn new(design: &ChainDesign) -> Result<Self> {
        let system = eigen::eigensystem(&dynamical_matrix(design)?, EIGEN_TOL)?;
        let frequencies = system
            .eigenvalues
            .iter()
            .map(|l| l.max(0.0).sqrt())
            .collect();
        Ok(Self {
            design: design.clone(),
            system,
            frequencies,
        })
    }

    pub fn design(&self) -> &ChainDesign {
        &self.design
    }

    /// Mode frequencies `omega_k`, ascending.
    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn eigensystem(&self) -> &EigenSystem {
        &self.system
    }

    /// State after an elapsed time `dt` (result time is `initial.t + dt`).
    pub fn propagate(&self, initial: &ChainState, dt: f64) -> Result<ChainState> {
        let n = self.design.n();
        if initial.n() != n {
            return domain(format!("state has {} sites, chain has {n}", initial.n()));
        }
        let modes = self
            .system
            .eigenvectors
            .as_ref()
            .expect("eigensystem carries vectors");
        let mut q = vec![0.0; n];
        let mut qdot = vec![0.0; n];
        for (v, &w) in modes.iter().zip(&self.frequencies) {
            let c = dot(v, &initial.q);
            let s = dot(v, &initial.qdot);
            let (x, xdot) = if w == 0.0 {
                (c + s * dt, s)
            } else {
                let (sin, cos) = (w * dt).sin_cos();
                (c * cos + s * sin / w, -c * w * sin + s * cos)
            };
            for i in 0..n {
                q[i] += v[i] * x;
                qdot[i] += v[i] * xdot;
            }
        }
        Ok(ChainState {
            t: initial.t + dt,
            q,
            qdot,
        })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact modal evolution over an elapsed time `t`.
pub fn propagate_modes(d: &ChainDesign, initial: &ChainState, t: f64) -> Result<ChainState> {
    ModalPropagator::new(d)?.propagate(initial, t)
}

/// Number of whole `step`s in `span`, insisting the division is exact up to rounding.
fn whole_steps(span: f64, step: f64, what: &str) -> Result<usize> {
    let count = (span / step).round();
    if (count * step - span).abs() > 1e-9 * span.max(step) {
        return domain(format!("{what} {step} does not divide {span}"));
    }
    Ok(count as usize)
}

fn check_time(t_end: f64, interval: f64) -> Result<()> {
    if !(t_end.is_finite() && t_end >= 0.0) {
        return domain(format!("end time must be non-negative, got {t_end}"));
    }
    if !(interval.is_finite() && interval > 0.0) {
        return domain(format!(
            "snapshot interval must be positive, got {interval}"
        ));
    }
    Ok(())
}

/// Snapshots from the modal propagator at `0, interval, ..., t_end` past the
/// initial time.
pub fn snapshot_series(
    d: &ChainDesign,
    initial: &ChainState,
    t_end: f64,
    interval: f64,
) -> Result<Trajectory> {
    check_time(t_end, interval)?;
    let count = whole_steps(t_end, interval, "snapshot interval")?;
    let prop = ModalPropagator::new(d)?;
    let snapshots = (0..=count)
        .map(|j| {
            let elapsed = if j == count {
                t_end
            } else {
                j as f64 * interval
            };
            if j == 0 {
                Ok(initial.clone())
            } else {
                prop.propagate(initial, elapsed)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory {
        design: d.clone(),
        snapshots,
        interval,
    })
}

/// Largest stable Verlet step accepted: half the linear-stability limit `2/omega_max`.
pub fn verlet_step_bound(d: &ChainDesign) -> Result<f64> {
    let ev = eigen::eigenvalues(&dynamical_matrix(d)?, EIGEN_TOL)?;
    let omega_max = ev.last().copied().unwrap_or(0.0).max(0.0).sqrt();
    Ok(if omega_max == 0.0 {
        f64::INFINITY
    } else {
        1.0 / omega_max
    })
}

/// Velocity-Verlet integration of `M u'' = -K u`, recording a snapshot every
/// `interval` (which must be a whole number of steps).
pub fn integrate_verlet(
    d: &ChainDesign,
    initial: &ChainState,
    t_end: f64,
    dt: f64,
    interval: f64,
) -> Result<Trajectory> {
    check_time(t_end, interval)?;
    if !(dt.is_finite() && dt > 0.0) {
        return domain(format!("time step must be positive, got {dt}"));
    }
    let bound = verlet_step_bound(d)?;
    if dt > bound {
        return Err(Error::Unstable { dt, bound });
    }
    if initial.n() != d.n() {
        return domain(format!(
            "state has {} sites, chain has {}",
            initial.n(),
            d.n()
        ));
    }
    let per_snapshot = if t_end == 0.0 {
        1
    } else {
        whole_steps(interval, dt, "time step")?.max(1)
    };
    let total = if t_end == 0.0 {
        0
    } else {
        whole_steps(t_end, dt, "time step")?
    };
    if total % per_snapshot != 0 {
        return domain(format!(
            "interval {interval} does not divide end time {t_end}"
        ));
    }

    let masses = d.masses();
    let springs = d.springs();
    let n = d.n();
    let accel = |u: &[f64], a: &mut [f64]| {
        a.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..n - 1 {
            let f = springs[i] * (u[i + 1] - u[i]);
            a[i] += f;
            a[i + 1] -= f;
        }
        a.iter_mut().zip(masses).for_each(|(x, m)| *x /= m);
    };

    let mut u = initial.physical_displacements(masses);
    let mut v = initial.physical_velocities(masses);
    let mut a = vec![0.0; n];
    accel(&u, &mut a);
    let mut snapshots = vec![initial.clone()];
    for step in 1..=total {
        for i in 0..n {
            v[i] += 0.5 * dt * a[i];
            u[i] += dt * v[i];
        }
        accel(&u, &mut a);
        for i in 0..n {
            v[i] += 0.5 * dt * a[i];
        }
        if step % per_snapshot == 0 {
            snapshots.push(ChainState::from_physical(
                initial.t + step as f64 * dt,
                &u,
                &v,
                masses,
            ));
        }
    }
    Ok(Trajectory {
        design: d.clone(),
        snapshots,
        interval,
    })
}

/// Overlap between a configuration and the mirror image of the initial one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorReport {
    /// `<mirror(q0), q> / (|q0| |q|)`.
    pub fidelity: f64,
    /// `max_i |q_i - q0_{n+1-i}|`.
    pub max_deviation: f64,
}

/// Mirror-transfer diagnostic; the initial state must be at rest and displaced.
pub fn mirror_fidelity(initial: &ChainState, final_state: &ChainState) -> Result<MirrorReport> {
    if initial.n() != final_state.n() {
        return domain("states have different lengths");
    }
    if initial.qdot.iter().any(|v| *v != 0.0) {
        return domain("mirror transfer is only defined for initial states at rest");
    }
    let norm0 = dot(&initial.q, &initial.q).sqrt();
    if norm0 == 0.0 {
        return domain("fidelity is undefined for a zero initial displacement");
    }
    let mirror: Vec<f64> = initial.q.iter().rev().copied().collect();
    let norm1 = dot(&final_state.q, &final_state.q).sqrt();
    let fidelity = if norm1 == 0.0 {
        0.0
    } else {
        dot(&mirror, &final_state.q) / (norm0 * norm1)
    };
    let max_deviation = mirror
        .iter()
        .zip(&final_state.q)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(MirrorReport {
        fidelity,
        max_deviation,
    })
}
