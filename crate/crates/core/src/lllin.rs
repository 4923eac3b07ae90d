//! Landau-Lifshitz equation linearized about a constant unit vector `a`:
//! `z_t = A z + u(t)` with `A z = ν z_xx + a × z_xx` and Neumann ends.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::MagnetizationField;
use crate::llpde::{laplacian_into, LLParams, ProbeSpec, ResolvedProbe};
use crate::signal::{HarmonicInput, Schedule, Trajectory};
use crate::stepper::FieldRk4;
use crate::vec3::{cross, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearizationPoint {
    a: Vec3,
}

impl LinearizationPoint {
    pub fn new(a: Vec3) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::NonFinite("linearization point"));
        }
        if (a.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("linearization point must be a unit vector, |a| = {}", a.norm())));
        }
        Ok(LinearizationPoint { a })
    }

    pub fn a(&self) -> Vec3 {
        self.a
    }
}

fn apply_into(z: &[Vec3], p: &LLParams, a: Vec3, lap: &mut [Vec3], out: &mut [Vec3]) {
    laplacian_into(z, p.grid.spacing(), lap);
    for (o, l) in out.iter_mut().zip(lap.iter()) {
        *o = *l * p.nu + cross(a, *l);
    }
}

/// `ν z_xx + a × z_xx` at every node.
pub fn apply_a(z: &MagnetizationField, p: &LLParams, at: &LinearizationPoint) -> MagnetizationField {
    let n = z.values().len();
    let mut lap = vec![Vec3::ZERO; n];
    let mut out = vec![Vec3::ZERO; n];
    apply_into(z.values(), p, at.a, &mut lap, &mut out);
    MagnetizationField::from_parts_unchecked(*z.grid(), out)
}

/// Eigenvalues carried by the Neumann mode `cos(mπx/L)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub mode: usize,
    /// `{0}` for mode 0; otherwise `[λ⁺, λ⁻, λ_real]`.
    pub values: Vec<Complex64>,
}

impl SpectrumEntry {
    /// Values repeated to the three-dimensional multiplicity of each mode.
    pub fn with_multiplicity(&self) -> Vec<Complex64> {
        if self.mode == 0 {
            vec![Complex64::new(0.0, 0.0); 3]
        } else {
            self.values.clone()
        }
    }
}

/// Exact eigenvalues of `A` for modes `0..=max_mode`:
/// `−m²π²ν/L² ± i m²π²/L²` and `−m²π²ν/L²`, collapsing to `0` for `m = 0`.
pub fn analytic_spectrum(p: &LLParams, max_mode: usize) -> Vec<SpectrumEntry> {
    let l = p.grid.length();
    (0..=max_mode)
        .map(|mode| {
            if mode == 0 {
                return SpectrumEntry { mode, values: vec![Complex64::new(0.0, 0.0)] };
            }
            let q = (mode as f64 * PI / l).powi(2);
            let re = -q * p.nu;
            SpectrumEntry {
                mode,
                values: vec![Complex64::new(re, q), Complex64::new(re, -q), Complex64::new(re, 0.0)],
            }
        })
        .collect()
}

/// Dense matrix of `A` on node-major flattened fields (`3j + component`).
///
/// Equal to the Neumann Laplacian stencil tensored with `νI + [a]×`.
pub fn discretize_a(p: &LLParams, at: &LinearizationPoint) -> DMatrix<f64> {
    let n = p.grid.nodes();
    let h = p.grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    let mut lap = DMatrix::<f64>::zeros(n, n);
    lap[(0, 0)] = -2.0 * inv_h2;
    lap[(0, 1)] = 2.0 * inv_h2;
    for j in 1..n - 1 {
        lap[(j, j - 1)] = inv_h2;
        lap[(j, j)] = -2.0 * inv_h2;
        lap[(j, j + 1)] = inv_h2;
    }
    lap[(n - 1, n - 2)] = 2.0 * inv_h2;
    lap[(n - 1, n - 1)] = -2.0 * inv_h2;

    let [a1, a2, a3] = at.a.0;
    let nu = p.nu;
    let block = nalgebra::Matrix3::new(
        nu, -a3, a2, //
        a3, nu, -a1, //
        -a2, a1, nu,
    );
    lap.kronecker(&block)
}

/// All eigenvalues of a dense real matrix, sorted by real part then
/// imaginary part, both descending.
pub fn numeric_spectrum(m: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::InvalidArgument(format!("matrix is {}x{}, not square", m.nrows(), m.ncols())));
    }
    let schur = nalgebra::Schur::try_new(m.clone(), f64::EPSILON, 0).ok_or(Error::EigenNonConvergence)?;
    let mut values: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::EigenNonConvergence);
    }
    values.sort_by(|x, y| y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im)));
    Ok(values)
}

/// One analytic eigenvalue and the numeric eigenvalue paired with it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeComparison {
    pub mode: usize,
    pub analytic: Complex64,
    pub numeric: Complex64,
    pub abs_error: f64,
}

/// Greedy nearest-neighbour pairing of analytic eigenvalues with numeric
/// ones, closest pairs first, each numeric value used at most once. Rows come
/// back ordered by mode, then by analytic imaginary part descending.
///
/// Candidates are not pre-filtered by modulus: the real eigenvalues of high
/// modes are smaller in modulus than the complex ones of low modes when
/// `ν` is small.
pub fn compare_spectra(numeric: &[Complex64], analytic: &[SpectrumEntry]) -> Vec<ModeComparison> {
    let targets: Vec<(usize, Complex64)> = analytic
        .iter()
        .flat_map(|e| e.with_multiplicity().into_iter().map(move |v| (e.mode, v)))
        .collect();
    let candidates = numeric;

    let mut pairs = Vec::with_capacity(targets.len());
    for (ti, &(_, target)) in targets.iter().enumerate() {
        for (ci, cand) in candidates.iter().enumerate() {
            pairs.push(((target - cand).norm(), ti, ci));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut target_done = vec![false; targets.len()];
    let mut cand_done = vec![false; candidates.len()];
    let mut rows = Vec::with_capacity(targets.len());
    for (dist, ti, ci) in pairs {
        if target_done[ti] || cand_done[ci] {
            continue;
        }
        target_done[ti] = true;
        cand_done[ci] = true;
        let (mode, analytic) = targets[ti];
        rows.push(ModeComparison { mode, analytic, numeric: candidates[ci], abs_error: dist });
    }
    rows.sort_by(|x, y| x.mode.cmp(&y.mode).then(y.analytic.im.total_cmp(&x.analytic.im)));
    rows
}

/// Eigenvalues of the discrete Neumann Laplacian: `−(4/h²) sin²(mπ/(2(n−1)))`.
fn discrete_laplacian_eigenvalues(p: &LLParams) -> impl Iterator<Item = f64> + '_ {
    let n = p.grid.nodes();
    let h = p.grid.spacing();
    (0..n).map(move |m| {
        let s = (m as f64 * PI / (2.0 * (n - 1) as f64)).sin();
        -4.0 / (h * h) * s * s
    })
}

/// Whether RK4 at step `dt` is non-expansive on every eigenvalue of the
/// discrete operator, which are `μ(ν ± i)` and `μν` for each Laplacian
/// eigenvalue `μ`.
pub fn rk4_is_stable(p: &LLParams, dt: f64) -> bool {
    let amplification = |z: Complex64| (1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0).norm();
    discrete_laplacian_eigenvalues(p).all(|mu| {
        [Complex64::new(p.nu, 1.0), Complex64::new(p.nu, -1.0), Complex64::new(p.nu, 0.0)]
            .iter()
            .all(|f| amplification(*f * (mu * dt)) <= 1.0 + 1e-12)
    })
}

#[derive(Clone, Debug)]
pub struct LinearRun {
    pub trajectory: Trajectory,
    pub probe: ResolvedProbe,
    pub final_field: MagnetizationField,
    pub schedule: Schedule,
}

/// RK4 on `z' = A z + u(t)` over `[0, t_end]`, recording every step.
pub fn integrate_linear(
    z0: &MagnetizationField,
    p: &LLParams,
    at: &LinearizationPoint,
    input: Option<&HarmonicInput>,
    t_end: f64,
    dt: f64,
    probe: &ProbeSpec,
) -> Result<Trajectory> {
    integrate_linear_scheduled(z0, p, at, input, &Schedule::fixed(dt, t_end)?, probe).map(|run| run.trajectory)
}

pub fn integrate_linear_scheduled(
    z0: &MagnetizationField,
    p: &LLParams,
    at: &LinearizationPoint,
    input: Option<&HarmonicInput>,
    schedule: &Schedule,
    probe: &ProbeSpec,
) -> Result<LinearRun> {
    if z0.grid() != &p.grid {
        return Err(Error::InvalidArgument("initial field and parameters use different grids".into()));
    }
    let dt = schedule.dt;
    if !rk4_is_stable(p, dt) {
        return Err(Error::StepSize { dt, limit: p.stable_dt(), reason: "RK4 stability region of the discrete operator" });
    }
    let probe = probe.resolve(&p.grid)?;
    let a = at.a;
    let forcing = |t: f64| input.map_or(Vec3::ZERO, |sig| sig.evaluate_vector(t));
    let scalar_input = |t: f64| input.map_or(0.0, |sig| sig.evaluate(t));

    let mut z = z0.values().to_vec();
    let mut lap = vec![Vec3::ZERO; z.len()];
    let mut rk = FieldRk4::new(z.len());
    let mut traj = Trajectory::with_capacity(schedule.recorded_len());
    traj.push(0.0, probe.read(&z), scalar_input(0.0));
    for step in 0..schedule.steps {
        let t = schedule.time(step);
        rk.step(&mut z, t, dt, |state, t, out| {
            apply_into(state, p, a, &mut lap, out);
            let u = forcing(t);
            for o in out.iter_mut() {
                *o += u;
            }
        });
        let t_next = schedule.time(step + 1);
        if !z[probe.node].is_finite() || (step % 64 == 0 && !z.iter().all(Vec3::is_finite)) {
            return Err(Error::BlowUp { time: t_next });
        }
        if schedule.records(step + 1) {
            traj.push(t_next, probe.read(&z), scalar_input(t_next));
        }
    }
    if !z.iter().all(Vec3::is_finite) {
        return Err(Error::BlowUp { time: schedule.t_end() });
    }
    Ok(LinearRun {
        trajectory: traj,
        probe,
        final_field: MagnetizationField::from_parts_unchecked(p.grid, z),
        schedule: *schedule,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SpatialGrid;
    use approx::assert_abs_diff_eq;

    fn params(nu: f64, nodes: usize) -> LLParams {
        LLParams::new(nu, SpatialGrid::new(1.0, nodes).unwrap()).unwrap()
    }

    fn e1() -> LinearizationPoint {
        LinearizationPoint::new(Vec3::basis(1)).unwrap()
    }

    #[test]
    fn linearization_point_must_be_unit() {
        assert!(LinearizationPoint::new(Vec3::new(1.0, 1e-5, 0.0)).is_err());
        assert!(LinearizationPoint::new(Vec3::new(0.6, 0.8, 0.0)).is_ok());
    }

    #[test]
    fn constants_are_in_the_kernel() {
        let p = params(0.02, 41);
        let z = MagnetizationField::uniform(p.grid, Vec3::new(3.0, -1.0, 0.5));
        assert!(apply_a(&z, &p, &e1()).values().iter().all(|v| *v == Vec3::ZERO));
    }

    #[test]
    fn action_on_first_mode() {
        let v = Vec3::new(0.2, 0.5, -0.4);
        let a = e1();
        let target = v * 0.02 + cross(a.a(), v);
        let errs: Vec<f64> = [21, 41, 81]
            .iter()
            .map(|&n| {
                let p = params(0.02, n);
                let z = MagnetizationField::from_fn(p.grid, |x| v * (PI * x).cos()).unwrap();
                let az = apply_a(&z, &p, &a);
                p.grid
                    .positions()
                    .zip(az.values())
                    .map(|(x, w)| (*w - target * (-PI * PI * (PI * x).cos())).norm())
                    .fold(0.0, f64::max)
            })
            .collect();
        assert!(errs[1] < 1e-2);
        assert!((3.8..4.2).contains(&(errs[0] / errs[1])));
        assert!((3.8..4.2).contains(&(errs[1] / errs[2])));
    }

    #[test]
    fn operator_is_linear() {
        let p = params(0.05, 17);
        let at = LinearizationPoint::new(Vec3::new(0.0, 0.6, 0.8)).unwrap();
        let z1 = MagnetizationField::from_fn(p.grid, |x| Vec3::new(x * x, (3.0 * x).sin(), 1.0 - x)).unwrap();
        let z2 = MagnetizationField::from_fn(p.grid, |x| Vec3::new((2.0 * x).cos(), x, x * x * x)).unwrap();
        let lhs = apply_a(&z1.combine(2.0, &z2, -0.5), &p, &at);
        let rhs = apply_a(&z1, &p, &at).combine(2.0, &apply_a(&z2, &p, &at), -0.5);
        for (l, r) in lhs.values().iter().zip(rhs.values()) {
            assert!((*l - *r).norm() <= 1e-12 * (1.0 + l.norm()));
        }
    }

    #[test]
    fn analytic_values() {
        let p = params(0.02, 41);
        let spec = analytic_spectrum(&p, 2);
        assert_eq!(spec[0].values, vec![Complex64::new(0.0, 0.0)]);
        assert_abs_diff_eq!(spec[1].values[2].re, -0.19739, epsilon = 1e-5);
        assert_abs_diff_eq!(spec[1].values[0].im, 9.8696, epsilon = 1e-4);
        assert_abs_diff_eq!(spec[1].values[1].im, -9.8696, epsilon = 1e-4);
        assert_abs_diff_eq!(spec[2].values[2].re, -0.78957, epsilon = 1e-5);
    }

    #[test]
    fn matrix_matches_operator() {
        let p = params(0.02, 13);
        let at = LinearizationPoint::new(Vec3::new(0.48, 0.6, 0.64)).unwrap();
        let m = discretize_a(&p, &at);
        assert_eq!(m.ncols(), 39);
        let v = Vec3::new(1.0, -2.0, 0.5);
        let z = MagnetizationField::from_fn(p.grid, |x| v * (PI * x).cos()).unwrap();
        let mz = &m * nalgebra::DVector::from_vec(z.to_flat());
        let az = apply_a(&z, &p, &at).to_flat();
        for (x, y) in mz.iter().zip(&az) {
            assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()));
        }
        let constant = nalgebra::DVector::from_vec(MagnetizationField::uniform(p.grid, v).to_flat());
        assert!((&m * constant).amax() <= 1e-12 * m.amax());
    }

    #[test]
    fn spectrum_has_three_dimensional_kernel_and_no_growth() {
        let p = params(0.02, 41);
        let values = numeric_spectrum(&discretize_a(&p, &e1())).unwrap();
        assert_eq!(values.len(), 123);
        assert_eq!(values.iter().filter(|v| v.norm() <= 1e-10).count(), 3);
        assert!(values[0].re <= 1e-10);
    }

    #[test]
    fn discrete_spectrum_equals_laplacian_times_block() {
        // each discrete Laplacian eigenvalue μ yields μ(ν ± i) and μν exactly
        let p = params(0.02, 11);
        let numeric = numeric_spectrum(&discretize_a(&p, &e1())).unwrap();
        for mu in discrete_laplacian_eigenvalues(&p) {
            for f in [Complex64::new(0.02, 1.0), Complex64::new(0.02, -1.0), Complex64::new(0.02, 0.0)] {
                let target = f * mu;
                let best = numeric.iter().map(|v| (v - target).norm()).fold(f64::INFINITY, f64::min);
                assert!(best < 1e-9 * (1.0 + target.norm()), "{target}: {best}");
            }
        }
    }

    #[test]
    fn low_modes_converge_at_second_order() {
        let errors = |n: usize| {
            let p = params(0.02, n);
            let numeric = numeric_spectrum(&discretize_a(&p, &e1())).unwrap();
            compare_spectra(&numeric, &analytic_spectrum(&p, 3))
        };
        let coarse = errors(21);
        let fine = errors(41);
        assert_eq!(coarse.len(), 12);
        for (c, f) in coarse.iter().zip(&fine).filter(|(c, _)| c.mode > 0) {
            assert_eq!(c.analytic, f.analytic);
            let ratio = c.abs_error / f.abs_error;
            assert!((3.2..5.0).contains(&ratio), "mode {} ratio {ratio}", c.mode);
        }
        assert!(fine.iter().filter(|r| r.mode == 0).all(|r| r.abs_error < 1e-10));
    }

    #[test]
    fn default_step_is_rk4_stable() {
        for nu in [0.0, 0.02, 0.5] {
            let p = params(nu, 41);
            assert!(rk4_is_stable(&p, p.stable_dt()));
            assert!(!rk4_is_stable(&p, 3.0 * p.stable_dt()));
        }
    }

    #[test]
    fn kernel_initial_data_is_stationary() {
        let p = params(0.02, 41);
        let z0 = MagnetizationField::uniform(p.grid, Vec3::new(1.0, 0.0, 0.0));
        let traj = integrate_linear(&z0, &p, &e1(), None, 0.5, p.stable_dt(), &ProbeSpec::new(0.6, 1)).unwrap();
        assert!(traj.samples().iter().all(|&y| y == 1.0));
    }

    #[test]
    fn rejects_unstable_step() {
        let p = params(0.02, 41);
        let z0 = MagnetizationField::uniform(p.grid, Vec3::ZERO);
        let err = integrate_linear(&z0, &p, &e1(), None, 0.5, 4.0 * p.stable_dt(), &ProbeSpec::new(0.6, 1));
        assert!(matches!(err, Err(Error::StepSize { .. })));
    }

    #[test]
    fn single_mode_decays_at_analytic_rate() {
        // z = cos(πx) e3 evolves in the (e2, e3) plane with rate μ(ν ± i)
        let p = params(0.02, 81);
        let z0 = MagnetizationField::from_fn(p.grid, |x| Vec3::basis(3) * (PI * x).cos()).unwrap();
        let t_end = 0.3;
        let traj = integrate_linear(&z0, &p, &e1(), None, t_end, p.stable_dt(), &ProbeSpec::new(0.0, 3)).unwrap();
        let mu = -4.0 / p.grid.spacing().powi(2) * (PI * p.grid.spacing() / 2.0).sin().powi(2);
        let t = *traj.times().last().unwrap();
        let expected = (mu * 0.02 * t).exp() * (mu * t).cos();
        assert_abs_diff_eq!(traj.last_sample().unwrap(), expected, epsilon = 1e-9);
    }
}
