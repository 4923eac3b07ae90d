//! One-dimensional Landau-Lifshitz equation on `[0, L]` with homogeneous
//! Neumann ends,
//!
//! ```text
//! m_t = m × m_xx − ν m × (m × m_xx) + u(t),   |m| = 1,
//! ```
//!
//! discretized by the method of lines: second-order central differences in
//! space with mirror ghost nodes, classical RK4 in time, and per-node
//! renormalization after every step.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{MagnetizationField, SpatialGrid};
use crate::signal::{HarmonicInput, Schedule, Trajectory};
use crate::stepper::FieldRk4;
use crate::vec3::{cross, Vec3};

/// Norm tolerance accepted by the right-hand-side evaluators.
pub const LOOSE_NORM_TOLERANCE: f64 = 1e-6;

/// Default number of steps resolving one input period.
pub const STEPS_PER_PERIOD: f64 = 1000.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LLParams {
    pub nu: f64,
    pub grid: SpatialGrid,
}

impl LLParams {
    pub fn new(nu: f64, grid: SpatialGrid) -> Result<Self> {
        if !(nu.is_finite() && nu >= 0.0) {
            return Err(Error::InvalidArgument(format!("damping nu must be non-negative, got {nu}")));
        }
        Ok(LLParams { nu, grid })
    }

    /// Largest step accepted by the explicit integrator: `h² / (4ν + 2)`.
    pub fn stable_dt(&self) -> f64 {
        let h = self.grid.spacing();
        h * h / (4.0 * self.nu + 2.0)
    }

    /// `min(h²/(4ν+2), T/1000)` for an input of angular frequency `omega`.
    pub fn default_dt_bound(&self, omega: f64) -> f64 {
        self.stable_dt().min(TAU / omega / STEPS_PER_PERIOD)
    }
}

/// Where and which component to record.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeSpec {
    pub x: f64,
    pub channel: usize,
}

/// A probe snapped to its nearest grid node.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedProbe {
    pub node: usize,
    pub x_requested: f64,
    pub x_node: f64,
    pub snap_distance: f64,
    pub channel: usize,
}

impl ProbeSpec {
    pub fn new(x: f64, channel: usize) -> Self {
        ProbeSpec { x, channel }
    }

    pub fn resolve(&self, grid: &SpatialGrid) -> Result<ResolvedProbe> {
        if !(1..=3).contains(&self.channel) {
            return Err(Error::InvalidArgument(format!("probe channel must be 1, 2 or 3, got {}", self.channel)));
        }
        let (node, snap_distance) = grid.nearest_node(self.x)?;
        Ok(ResolvedProbe {
            node,
            x_requested: self.x,
            x_node: grid.x(node),
            snap_distance,
            channel: self.channel,
        })
    }
}

impl ResolvedProbe {
    #[inline]
    pub(crate) fn read(&self, values: &[Vec3]) -> f64 {
        values[self.node][self.channel - 1]
    }
}

/// `(f_{j-1} - 2 f_j + f_{j+1}) / h²` with ghosts `f_{-1} = f_1`, `f_n = f_{n-2}`.
pub(crate) fn laplacian_into(values: &[Vec3], h: f64, out: &mut [Vec3]) {
    let n = values.len();
    let inv_h2 = 1.0 / (h * h);
    out[0] = (values[1] - values[0]) * (2.0 * inv_h2);
    for j in 1..n - 1 {
        out[j] = (values[j - 1] + values[j + 1] - values[j] * 2.0) * inv_h2;
    }
    out[n - 1] = (values[n - 2] - values[n - 1]) * (2.0 * inv_h2);
}

/// Central first differences; one-sided second-order stencils at the ends.
pub(crate) fn gradient_into(values: &[Vec3], h: f64, out: &mut [Vec3]) {
    let n = values.len();
    let inv_2h = 0.5 / h;
    out[0] = ((values[1] - values[0]) * 4.0 - (values[2] - values[0])) * inv_2h;
    for j in 1..n - 1 {
        out[j] = (values[j + 1] - values[j - 1]) * inv_2h;
    }
    out[n - 1] = ((values[n - 3] - values[n - 1]) - (values[n - 2] - values[n - 1]) * 4.0) * inv_2h;
}

/// Neumann Laplacian of a field, node by node.
pub fn laplacian_neumann(f: &MagnetizationField) -> MagnetizationField {
    let mut out = vec![Vec3::ZERO; f.values().len()];
    laplacian_into(f.values(), f.grid().spacing(), &mut out);
    MagnetizationField::from_parts_unchecked(*f.grid(), out)
}

/// Which algebraic form of the right-hand side to evaluate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RhsForm {
    /// `m × m_xx − ν m × (m × m_xx)`
    #[default]
    CrossProduct,
    /// `ν m_xx + m × m_xx + ν |m_x|² m`, equal to the cross-product form on the sphere.
    Semilinear,
}

/// Evaluation workspace so the time loop does not allocate.
pub(crate) struct RhsKernel {
    nu: f64,
    h: f64,
    form: RhsForm,
    lap: Vec<Vec3>,
    grad: Vec<Vec3>,
}

impl RhsKernel {
    pub(crate) fn new(p: &LLParams, form: RhsForm) -> Self {
        let n = p.grid.nodes();
        RhsKernel {
            nu: p.nu,
            h: p.grid.spacing(),
            form,
            lap: vec![Vec3::ZERO; n],
            grad: vec![Vec3::ZERO; n],
        }
    }

    /// Unforced right-hand side into `out`.
    pub(crate) fn eval(&mut self, m: &[Vec3], out: &mut [Vec3]) {
        laplacian_into(m, self.h, &mut self.lap);
        let nu = self.nu;
        match self.form {
            RhsForm::CrossProduct => {
                for ((o, m), lap) in out.iter_mut().zip(m).zip(&self.lap) {
                    let precession = cross(*m, *lap);
                    *o = precession - cross(*m, precession) * nu;
                }
            }
            RhsForm::Semilinear => {
                gradient_into(m, self.h, &mut self.grad);
                for (((o, m), lap), grad) in out.iter_mut().zip(m).zip(&self.lap).zip(&self.grad) {
                    *o = *lap * nu + cross(*m, *lap) + *m * (nu * grad.norm_squared());
                }
            }
        }
    }
}

fn evaluate_form(f: &MagnetizationField, p: &LLParams, u: Vec3, form: RhsForm) -> Result<MagnetizationField> {
    if f.grid() != &p.grid {
        return Err(Error::InvalidArgument("field and parameters use different grids".into()));
    }
    if !u.is_finite() {
        return Err(Error::NonFinite("applied input"));
    }
    f.check_unit_norm(LOOSE_NORM_TOLERANCE)?;
    let mut kernel = RhsKernel::new(p, form);
    let mut out = vec![Vec3::ZERO; f.values().len()];
    kernel.eval(f.values(), &mut out);
    for o in &mut out {
        *o += u;
    }
    Ok(MagnetizationField::from_parts_unchecked(p.grid, out))
}

/// `m × m_xx − ν m × (m × m_xx) + u` at every node.
pub fn ll_rhs(f: &MagnetizationField, p: &LLParams, u: Vec3) -> Result<MagnetizationField> {
    evaluate_form(f, p, u, RhsForm::CrossProduct)
}

/// `ν m_xx + m × m_xx + ν |m_x|² m + u` at every node.
pub fn ll_rhs_semilinear(f: &MagnetizationField, p: &LLParams, u: Vec3) -> Result<MagnetizationField> {
    evaluate_form(f, p, u, RhsForm::Semilinear)
}

/// Max-norm gap between the two unforced right-hand-side forms.
///
/// Both forms agree exactly for smooth unit-norm fields; the discrete gap is
/// `ν (m·m_xx + |m_x|²) m`, which is second order in the grid spacing.
pub fn semilinear_residual(f: &MagnetizationField, p: &LLParams) -> f64 {
    let n = f.values().len();
    let mut cross_form = vec![Vec3::ZERO; n];
    let mut semi_form = vec![Vec3::ZERO; n];
    RhsKernel::new(p, RhsForm::CrossProduct).eval(f.values(), &mut cross_form);
    RhsKernel::new(p, RhsForm::Semilinear).eval(f.values(), &mut semi_form);
    cross_form
        .iter()
        .zip(&semi_form)
        .map(|(a, b)| (*a - *b).norm())
        .fold(0.0, f64::max)
}

/// L2 distance from a unit-norm field to the set of constant unit fields.
///
/// For `|m| = 1` the nearest constant is `M/|M|` with `M = ∫ m`, giving
/// `dist² = ∫|m|² + L − 2|M|`.
pub fn distance_to_equilibria(f: &MagnetizationField) -> f64 {
    let grid = f.grid();
    let h = grid.spacing();
    let last = f.values().len() - 1;
    let mut mean = Vec3::ZERO;
    let mut sq = 0.0;
    for (j, v) in f.values().iter().enumerate() {
        let w = if j == 0 || j == last { 0.5 * h } else { h };
        mean += *v * w;
        sq += w * v.norm_squared();
    }
    (sq + grid.length() - 2.0 * mean.norm()).max(0.0).sqrt()
}

/// How the unit-norm constraint is treated during time stepping.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintMode {
    /// Renormalize every node after each step. The applied input is reduced to
    /// its component tangent to the sphere at each node, so that it rotates `m`
    /// instead of stretching it.
    #[default]
    Project,
    /// Integrate the forced equation exactly as written, with the input added
    /// to the right-hand side and no renormalization. A uniform input parallel
    /// to `m` then changes `|m|` instead of being absorbed by the projection.
    Unconstrained,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LlOptions {
    pub constraint: ConstraintMode,
    pub form: RhsForm,
    /// Record a full-field snapshot every this many steps.
    pub snapshot_stride: Option<usize>,
}

/// Norm bookkeeping for one run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    /// Largest `| |m_j| − 1 |` after a step, before renormalization.
    pub max_pre_projection: f64,
    /// Largest `| |m_j| − 1 |` over the reported (renormalized) states.
    pub max_post_projection: f64,
}

#[derive(Clone, Debug)]
pub struct LlRun {
    pub trajectory: Trajectory,
    pub drift: DriftReport,
    pub probe: ResolvedProbe,
    pub final_field: MagnetizationField,
    pub snapshots: Vec<(f64, MagnetizationField)>,
    pub schedule: Schedule,
}

/// Projected RK4 with default options over `[0, t_end]`.
pub fn integrate_ll(
    f0: &MagnetizationField,
    p: &LLParams,
    input: Option<&HarmonicInput>,
    t_end: f64,
    dt: f64,
    probe: &ProbeSpec,
) -> Result<LlRun> {
    integrate_ll_with(f0, p, input, &Schedule::fixed(dt, t_end)?, probe, &LlOptions::default())
}

pub fn integrate_ll_with(
    f0: &MagnetizationField,
    p: &LLParams,
    input: Option<&HarmonicInput>,
    schedule: &Schedule,
    probe: &ProbeSpec,
    opts: &LlOptions,
) -> Result<LlRun> {
    if f0.grid() != &p.grid {
        return Err(Error::InvalidArgument("initial field and parameters use different grids".into()));
    }
    let dt = schedule.dt;
    let limit = p.stable_dt();
    if dt > limit * (1.0 + 1e-12) {
        return Err(Error::StepSize { dt, limit, reason: "explicit bound h²/(4ν+2)" });
    }
    let probe = probe.resolve(&p.grid)?;
    let project = opts.constraint == ConstraintMode::Project;
    let mut m = if project {
        f0.check_unit_norm(LOOSE_NORM_TOLERANCE)?;
        f0.normalized().into_values()
    } else {
        f0.values().to_vec()
    };

    let forcing = |t: f64| input.map_or(Vec3::ZERO, |sig| sig.evaluate_vector(t));
    let scalar_input = |t: f64| input.map_or(0.0, |sig| sig.evaluate(t));

    let mut kernel = RhsKernel::new(p, opts.form);
    let mut rk = FieldRk4::new(m.len());
    let mut drift = DriftReport {
        max_pre_projection: 0.0,
        max_post_projection: if project { max_deviation(&m) } else { 0.0 },
    };
    let mut traj = Trajectory::with_capacity(schedule.recorded_len());
    let mut snapshots = Vec::new();
    traj.push(0.0, probe.read(&m), scalar_input(0.0));
    if opts.snapshot_stride.is_some() {
        snapshots.push((0.0, MagnetizationField::from_parts_unchecked(p.grid, m.clone())));
    }

    for step in 0..schedule.steps {
        let t = schedule.time(step);
        rk.step(&mut m, t, dt, |state, t, out| {
            kernel.eval(state, out);
            let u = forcing(t);
            if project {
                for (o, s) in out.iter_mut().zip(state) {
                    *o += u - *s * (u.dot(s) / s.norm_squared());
                }
            } else {
                for o in out.iter_mut() {
                    *o += u;
                }
            }
        });
        let t_next = schedule.time(step + 1);
        if project {
            for v in m.iter_mut() {
                let norm = v.norm();
                if !norm.is_finite() {
                    return Err(Error::BlowUp { time: t_next });
                }
                drift.max_pre_projection = drift.max_pre_projection.max((norm - 1.0).abs());
                *v = *v * (1.0 / norm);
                drift.max_post_projection = drift.max_post_projection.max((v.norm() - 1.0).abs());
            }
        } else if !m.iter().all(Vec3::is_finite) {
            return Err(Error::BlowUp { time: t_next });
        }
        if schedule.records(step + 1) {
            traj.push(t_next, probe.read(&m), scalar_input(t_next));
        }
        if let Some(stride) = opts.snapshot_stride {
            if (step + 1) % stride.max(1) == 0 {
                snapshots.push((t_next, MagnetizationField::from_parts_unchecked(p.grid, m.clone())));
            }
        }
    }
    if !project {
        drift.max_pre_projection = f64::NAN;
        drift.max_post_projection = max_deviation(&m);
    }

    Ok(LlRun {
        trajectory: traj,
        drift,
        probe,
        final_field: MagnetizationField::from_parts_unchecked(p.grid, m),
        snapshots,
        schedule: *schedule,
    })
}

fn max_deviation(m: &[Vec3]) -> f64 {
    m.iter().map(|v| (v.norm() - 1.0).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params(nu: f64, nodes: usize) -> LLParams {
        LLParams::new(nu, SpatialGrid::new(1.0, nodes).unwrap()).unwrap()
    }

    /// `(cos θ, sin θ, 0)` with `θ = θ0 cos(πx/L)`; satisfies the Neumann condition.
    fn great_circle(p: &LLParams, theta0: f64) -> MagnetizationField {
        let l = p.grid.length();
        MagnetizationField::from_fn(p.grid, |x| {
            let th = theta0 * (PI * x / l).cos();
            Vec3::new(th.cos(), th.sin(), 0.0)
        })
        .unwrap()
    }

    #[test]
    fn laplacian_of_constant_is_zero() {
        let p = params(0.02, 11);
        let f = MagnetizationField::uniform(p.grid, Vec3::new(0.3, -0.2, 0.9));
        assert!(laplacian_neumann(&f).values().iter().all(|v| *v == Vec3::ZERO));
    }

    #[test]
    fn laplacian_of_cosine_is_second_order() {
        let errs: Vec<f64> = [21, 41, 81]
            .iter()
            .map(|&n| {
                let p = params(0.02, n);
                let f = MagnetizationField::from_fn(p.grid, |x| Vec3::new((PI * x).cos(), 0.0, 0.0)).unwrap();
                let lap = laplacian_neumann(&f);
                p.grid
                    .positions()
                    .zip(lap.values())
                    .map(|(x, v)| (v[0] + PI * PI * (PI * x).cos()).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((3.8..4.2).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn laplacian_of_ramp_only_sees_the_ends() {
        let p = params(0.02, 9);
        let h = p.grid.spacing();
        let f = MagnetizationField::from_fn(p.grid, |x| Vec3::new(x, 0.0, 0.0)).unwrap();
        let lap = laplacian_neumann(&f);
        let v = lap.values();
        for vj in &v[1..8] {
            assert!(vj[0].abs() < 1e-10);
        }
        // ghost mirror: 2(f1 - f0)/h² = 2/h at x=0 and -2/h at x=L
        assert!((v[0][0] - 2.0 / h).abs() < 1e-10);
        assert!((v[8][0] + 2.0 / h).abs() < 1e-10);
    }

    #[test]
    fn constant_fields_are_equilibria() {
        let p = params(0.02, 41);
        for a in [Vec3::basis(1), Vec3::basis(3), Vec3::new(0.6, 0.0, -0.8), Vec3::new(1.0, 2.0, -2.0).normalized()] {
            let f = MagnetizationField::uniform(p.grid, a);
            assert!(ll_rhs(&f, &p, Vec3::ZERO).unwrap().values().iter().all(|v| *v == Vec3::ZERO));
            assert!(ll_rhs_semilinear(&f, &p, Vec3::ZERO).unwrap().values().iter().all(|v| *v == Vec3::ZERO));
        }
    }

    #[test]
    fn uniform_input_is_added_at_every_node() {
        let p = params(0.02, 41);
        let f = MagnetizationField::uniform(p.grid, Vec3::basis(1));
        let u = Vec3::new(0.001, 0.0, 0.0);
        assert!(ll_rhs(&f, &p, u).unwrap().values().iter().all(|v| *v == u));
    }

    #[test]
    fn rhs_rejects_off_sphere_fields() {
        let p = params(0.02, 11);
        let f = MagnetizationField::uniform(p.grid, Vec3::new(1.001, 0.0, 0.0));
        assert!(matches!(ll_rhs(&f, &p, Vec3::ZERO), Err(Error::ConstraintViolation { .. })));
        assert!(matches!(ll_rhs_semilinear(&f, &p, Vec3::ZERO), Err(Error::ConstraintViolation { .. })));
    }

    #[test]
    fn cross_form_is_tangent() {
        let p = params(0.02, 41);
        let f = great_circle(&p, 0.8);
        let d = ll_rhs(&f, &p, Vec3::ZERO).unwrap();
        for (m, dm) in f.values().iter().zip(d.values()) {
            assert!(m.dot(dm).abs() < 1e-12 * (1.0 + dm.norm()));
        }
    }

    #[test]
    fn semilinear_form_is_nearly_tangent() {
        // tangency defect is ν(m·m_xx + |m_x|²), second order in h
        let defects: Vec<f64> = [21, 41, 81]
            .iter()
            .map(|&n| {
                let p = params(0.02, n);
                let f = great_circle(&p, 0.8);
                let d = ll_rhs_semilinear(&f, &p, Vec3::ZERO).unwrap();
                f.values().iter().zip(d.values()).map(|(m, dm)| m.dot(dm).abs()).fold(0.0, f64::max)
            })
            .collect();
        assert!(defects[0] < 1e-2);
        for w in defects.windows(2) {
            let ratio = w[0] / w[1];
            assert!((3.2..5.0).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn semilinear_residual_vanishes_on_constants() {
        let p = params(0.02, 21);
        let f = MagnetizationField::uniform(p.grid, Vec3::basis(2));
        assert_eq!(semilinear_residual(&f, &p), 0.0);
    }

    #[test]
    fn semilinear_residual_is_second_order() {
        let res: Vec<f64> = [21, 41, 81].iter().map(|&n| {
            let p = params(0.02, n);
            semilinear_residual(&great_circle(&p, 0.8), &p)
        }).collect();
        for w in res.windows(2) {
            let ratio = w[0] / w[1];
            assert!((3.2..5.0).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn distance_to_equilibria_of_constant_is_zero() {
        let p = params(0.02, 21);
        let f = MagnetizationField::uniform(p.grid, Vec3::new(0.0, 0.6, 0.8));
        assert!(distance_to_equilibria(&f) < 1e-7);
        assert!(distance_to_equilibria(&great_circle(&p, 0.5)) > 0.1);
    }

    #[test]
    fn equilibrium_stays_put() {
        let p = params(0.02, 41);
        let f0 = MagnetizationField::uniform(p.grid, Vec3::basis(1));
        let run = integrate_ll(&f0, &p, None, 1.0, p.stable_dt(), &ProbeSpec::new(0.6, 1)).unwrap();
        assert!(run.trajectory.samples().iter().all(|&y| y == 1.0));
        assert_eq!(run.probe.node, 24);
    }

    #[test]
    fn rejects_steps_beyond_stability_bound() {
        let p = params(0.02, 41);
        let f0 = MagnetizationField::uniform(p.grid, Vec3::basis(1));
        let err = integrate_ll(&f0, &p, None, 1.0, 2.0 * p.stable_dt(), &ProbeSpec::new(0.6, 1));
        assert!(matches!(err, Err(Error::StepSize { .. })));
    }

    #[test]
    fn projected_run_keeps_unit_norm() {
        let p = params(0.02, 21);
        let f0 = great_circle(&p, 1.0);
        let run = integrate_ll(&f0, &p, None, 2.0, p.stable_dt(), &ProbeSpec::new(0.5, 2)).unwrap();
        assert!(run.drift.max_post_projection <= 1e-12);
        assert!(run.final_field.max_norm_deviation() <= 1e-12);
        assert!(run.drift.max_pre_projection < 1e-8);
    }

    #[test]
    fn projection_absorbs_parallel_input() {
        let p = params(0.02, 21);
        let f0 = MagnetizationField::uniform(p.grid, Vec3::basis(1));
        let u = HarmonicInput::cosine(0.001, 1.0).unwrap().on_channel(1).unwrap();
        let schedule = Schedule::fixed(p.stable_dt(), 3.0).unwrap();
        let projected = integrate_ll_with(&f0, &p, Some(&u), &schedule, &ProbeSpec::new(0.6, 1), &LlOptions::default()).unwrap();
        assert!(projected.trajectory.samples().iter().all(|&y| y == 1.0));

        let free = LlOptions { constraint: ConstraintMode::Unconstrained, ..LlOptions::default() };
        let run = integrate_ll_with(&f0, &p, Some(&u), &schedule, &ProbeSpec::new(0.6, 1), &free).unwrap();
        // uniform state: m1' = u(t), so m1 = 1 + 0.001 sin t
        for (t, y) in run.trajectory.times().iter().zip(run.trajectory.samples()) {
            assert!((y - (1.0 + 0.001 * t.sin())).abs() < 1e-13);
        }
    }

    #[test]
    fn snapshots_follow_stride() {
        let p = params(0.02, 11);
        let f0 = great_circle(&p, 0.3);
        let schedule = Schedule::fixed(p.stable_dt(), 100.0 * p.stable_dt()).unwrap();
        let opts = LlOptions { snapshot_stride: Some(25), ..LlOptions::default() };
        let run = integrate_ll_with(&f0, &p, None, &schedule, &ProbeSpec::new(0.0, 1), &opts).unwrap();
        assert_eq!(run.snapshots.len(), 5);
        assert!(run.snapshots.iter().all(|(_, f)| f.is_unit_norm()));
    }
}
