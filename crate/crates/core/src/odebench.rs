//! Damped second-order exemplars `y'' + c y' + k r(y) = u(t)`, with
//! `r(y) = y` (linear spring) or `r(y) = y - y^3` (cubic spring).
//! Setting `k = 0` gives the integrator chain with a continuum of equilibria.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{HarmonicInput, Schedule, Trajectory};

/// A harmonic input must be resolved by at least this many steps per period.
pub const MIN_STEPS_PER_PERIOD: f64 = 200.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecondOrderParams {
    pub c: f64,
    pub k: f64,
    pub cubic: bool,
}

impl SecondOrderParams {
    pub fn linear(c: f64, k: f64) -> Self {
        SecondOrderParams { c, k, cubic: false }
    }

    pub fn cubic(c: f64, k: f64) -> Self {
        SecondOrderParams { c, k, cubic: true }
    }

    pub fn validate(&self) -> Result<()> {
        if self.c.is_finite() && self.k.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite("second-order parameters"))
        }
    }

    /// Stiffness of the linearization at position `y`.
    pub fn effective_stiffness(&self, y: f64) -> f64 {
        if self.cubic {
            self.k * (1.0 - 3.0 * y * y)
        } else {
            self.k
        }
    }

    fn restoring(&self, y: f64) -> f64 {
        if self.cubic {
            self.k * (y - y * y * y)
        } else {
            self.k * y
        }
    }
}

/// Position and velocity; also used for their time derivatives.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SecondOrderState {
    pub y: f64,
    pub ydot: f64,
}

impl SecondOrderState {
    pub const fn new(y: f64, ydot: f64) -> Self {
        SecondOrderState { y, ydot }
    }

    pub fn norm(&self) -> f64 {
        self.y.hypot(self.ydot)
    }

    fn axpy(&self, h: f64, d: &SecondOrderState) -> SecondOrderState {
        SecondOrderState { y: self.y + h * d.y, ydot: self.ydot + h * d.ydot }
    }

    fn is_finite(&self) -> bool {
        self.y.is_finite() && self.ydot.is_finite()
    }
}

/// First-order vector field of the exemplar with input value `u`.
pub fn rhs(params: &SecondOrderParams, s: &SecondOrderState, u: f64) -> SecondOrderState {
    SecondOrderState {
        y: s.ydot,
        ydot: -params.c * s.ydot - params.restoring(s.y) + u,
    }
}

fn rk4_step(params: &SecondOrderParams, s: &SecondOrderState, t: f64, dt: f64, input: Option<&HarmonicInput>) -> SecondOrderState {
    let u = |t: f64| input.map_or(0.0, |sig| sig.evaluate(t));
    let half = 0.5 * dt;
    let k1 = rhs(params, s, u(t));
    let k2 = rhs(params, &s.axpy(half, &k1), u(t + half));
    let k3 = rhs(params, &s.axpy(half, &k2), u(t + half));
    let k4 = rhs(params, &s.axpy(dt, &k3), u(t + dt));
    SecondOrderState {
        y: s.y + dt / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
        ydot: s.ydot + dt / 6.0 * (k1.ydot + 2.0 * k2.ydot + 2.0 * k3.ydot + k4.ydot),
    }
}

/// Fixed-step RK4 from `s0` over `[0, t_end]`, recording `y` and `u` at every step.
pub fn integrate(
    params: &SecondOrderParams,
    input: Option<&HarmonicInput>,
    s0: SecondOrderState,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    integrate_scheduled(params, input, s0, &Schedule::fixed(dt, t_end)?).map(|(traj, _)| traj)
}

/// RK4 over an explicit schedule; also returns the final state.
pub fn integrate_scheduled(
    params: &SecondOrderParams,
    input: Option<&HarmonicInput>,
    s0: SecondOrderState,
    schedule: &Schedule,
) -> Result<(Trajectory, SecondOrderState)> {
    params.validate()?;
    if !s0.is_finite() {
        return Err(Error::NonFinite("initial state"));
    }
    let dt = schedule.dt;
    if let Some(sig) = input {
        let limit = sig.period() / MIN_STEPS_PER_PERIOD;
        if dt > limit {
            return Err(Error::StepSize { dt, limit, reason: "fewer than 200 steps per input period" });
        }
    }
    let u = |t: f64| input.map_or(0.0, |sig| sig.evaluate(t));

    let mut traj = Trajectory::with_capacity(schedule.recorded_len());
    let mut s = s0;
    traj.push(0.0, s.y, u(0.0));
    for step in 0..schedule.steps {
        let t = schedule.time(step);
        s = rk4_step(params, &s, t, dt, input);
        let t_next = schedule.time(step + 1);
        if !s.is_finite() {
            return Err(Error::BlowUp { time: t_next });
        }
        if schedule.records(step + 1) {
            traj.push(t_next, s.y, u(t_next));
        }
    }
    Ok((traj, s))
}

/// Exact response of the linear spring to `u = sin(omega t)` from `(y0, y1)`,
/// by modal decomposition. Complex eigenvalue pairs are handled in complex
/// arithmetic; the result is the real part.
pub fn closed_form_linear(c: f64, k: f64, omega: f64, y0: f64, y1: f64, t: f64) -> Result<f64> {
    if omega.is_nan() || omega <= 0.0 {
        return Err(Error::InvalidArgument(format!("omega must be positive, got {omega}")));
    }
    let disc = c * c - 4.0 * k;
    if disc.abs() <= 1e-12 * (c * c).max(4.0 * k.abs()).max(f64::MIN_POSITIVE) {
        return Err(Error::RepeatedEigenvalue);
    }
    let [l1, l2] = quadratic_roots(c, k);

    // y_p = p sin(wt) + q cos(wt)
    let denom = (k - omega * omega).powi(2) + (c * omega).powi(2);
    let p = (k - omega * omega) / denom;
    let q = -c * omega / denom;

    // a + b = y0 - y_p(0), l1 a + l2 b = y1 - y_p'(0)
    let r0 = Complex64::from(y0 - q);
    let r1 = Complex64::from(y1 - omega * p);
    let a = (r1 - l2 * r0) / (l1 - l2);
    let b = (l1 * r0 - r1) / (l1 - l2);
    let homogeneous = a * (l1 * t).exp() + b * (l2 * t).exp();
    Ok(homogeneous.re + p * (omega * t).sin() + q * (omega * t).cos())
}

/// Exact response of `y'' + c y' = sin(omega t)` from `(y0, y1)`.
///
/// Evaluated as
/// `y0 + (y1/c)(1 - e^{-ct}) - sin(wt)/(w²+c²) + (w²(1 - e^{-ct}) + c²(1 - cos wt)) / (w c (w²+c²))`, with
/// `1 - cos wt = 2 sin²(wt/2)` and `expm1` so that small `omega` and `t` do
/// not cancel.
pub fn closed_form_k0(c: f64, omega: f64, y0: f64, y1: f64, t: f64) -> f64 {
    let w2 = omega * omega;
    let s = w2 + c * c;
    let decay = -(-c * t).exp_m1();
    let half = (0.5 * omega * t).sin();
    y0 + y1 / c * decay - (omega * t).sin() / s + (w2 * decay + 2.0 * c * c * half * half) / (omega * c * s)
}

/// Equilibrium set of an unforced exemplar.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Equilibria {
    /// Finitely many isolated points.
    Points(Vec<SecondOrderState>),
    /// Every `(a, 0)` with `a` real.
    Continuum,
}

impl Equilibria {
    pub fn contains(&self, s: &SecondOrderState) -> bool {
        match self {
            Equilibria::Points(points) => points.iter().any(|p| p == s),
            Equilibria::Continuum => s.ydot == 0.0,
        }
    }
}

pub fn equilibria(params: &SecondOrderParams) -> Equilibria {
    if params.k == 0.0 {
        Equilibria::Continuum
    } else if params.cubic {
        Equilibria::Points(vec![
            SecondOrderState::new(0.0, 0.0),
            SecondOrderState::new(1.0, 0.0),
            SecondOrderState::new(-1.0, 0.0),
        ])
    } else {
        Equilibria::Points(vec![SecondOrderState::new(0.0, 0.0)])
    }
}

/// Roots of `λ² + cλ + k = 0`, larger real part first.
fn quadratic_roots(c: f64, k: f64) -> [Complex64; 2] {
    let disc = c * c - 4.0 * k;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        // avoid cancellation between -c and sqrt(disc)
        let big = -0.5 * (c + c.signum() * sq);
        let (r1, r2) = if big == 0.0 {
            (0.5 * sq, -0.5 * sq)
        } else {
            (big, k / big)
        };
        let (hi, lo) = if r1 >= r2 { (r1, r2) } else { (r2, r1) };
        [Complex64::from(hi), Complex64::from(lo)]
    } else {
        let im = 0.5 * (-disc).sqrt();
        [Complex64::new(-0.5 * c, im), Complex64::new(-0.5 * c, -im)]
    }
}

/// Eigenvalues of the Jacobian at the equilibrium `at`: the roots of
/// `λ² + cλ + k_eff`, with `k_eff = k(1 - 3y²)` for the cubic spring.
pub fn linearized_eigenvalues(params: &SecondOrderParams, at: &SecondOrderState) -> Result<[Complex64; 2]> {
    params.validate()?;
    let d = rhs(params, at, 0.0);
    let scale = 1.0 + params.k.abs() * (1.0 + at.y.abs().powi(3)) + params.c.abs() * at.ydot.abs();
    if d.norm() > 1e-12 * scale {
        return Err(Error::NotEquilibrium { y: at.y, ydot: at.ydot });
    }
    Ok(quadratic_roots(params.c, params.effective_stiffness(at.y)))
}

/// Lyapunov stability read off the linearization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    /// Every eigenvalue has negative real part.
    Asymptotic,
    /// A simple zero eigenvalue along a line of equilibria, the rest negative.
    Marginal,
    Unstable,
}

impl Stability {
    pub fn is_stable(&self) -> bool {
        !matches!(self, Stability::Unstable)
    }
}

pub fn classify_stability(eigenvalues: &[Complex64; 2]) -> Stability {
    let tol = 1e-12;
    let max_re = eigenvalues[0].re.max(eigenvalues[1].re);
    if max_re < -tol {
        Stability::Asymptotic
    } else if max_re > tol {
        Stability::Unstable
    } else {
        let zeros = eigenvalues.iter().filter(|l| l.norm() <= tol).count();
        let others_negative = eigenvalues.iter().all(|l| l.norm() <= tol || l.re < -tol);
        if zeros == 1 && others_negative {
            Stability::Marginal
        } else {
            Stability::Unstable
        }
    }
}
