//! Quick oracle checks run by `hystlab verify`.

use std::f64::consts::{PI, TAU};

use hystlab_core::hysteresis::{equilibrium_census, loop_area, EquilibriumCount, IOCurve, SystemDescriptor};
use hystlab_core::lllin::{analytic_spectrum, compare_spectra, discretize_a, numeric_spectrum, LinearizationPoint};
use hystlab_core::llpde::{integrate_ll, semilinear_residual, LLParams, ProbeSpec};
use hystlab_core::odebench::{closed_form_k0, closed_form_linear, integrate, SecondOrderParams, SecondOrderState};
use hystlab_core::{Error, HarmonicInput, MagnetizationField, SpatialGrid, Vec3};

pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    /// Relative change applied to ν in the analytic spectrum only; a nonzero
    /// value must make the spectral check fail.
    pub perturb_nu: f64,
}

pub fn run_all(opts: &VerifyOptions) -> Vec<Check> {
    vec![
        closed_form_check(),
        semilinear_check(),
        spectral_check(opts.perturb_nu),
        ellipse_check(),
        census_check(),
        step_guard_check(),
    ]
}

fn check(name: &'static str, pass: bool, detail: String) -> Check {
    Check { name, pass, detail }
}

fn closed_form_check() -> Check {
    let mut worst: f64 = 0.0;
    for (k, omega) in [(1.0, 1.0), (0.0, 1.0), (1.0, 0.1)] {
        // default schedule: at most 0.01 and at least 1000 steps a period
        let period = TAU / omega;
        let dt = period / (period / 0.01).ceil().max(1000.0);
        let params = SecondOrderParams::linear(15.0, k);
        let input = HarmonicInput::sine(1.0, omega).unwrap();
        let traj = integrate(&params, Some(&input), SecondOrderState::new(0.5, -0.2), 3.0 * period, dt).unwrap();
        for (t, y) in traj.times().iter().zip(traj.samples()) {
            let exact = if k == 0.0 {
                closed_form_k0(15.0, omega, 0.5, -0.2, *t)
            } else {
                closed_form_linear(15.0, k, omega, 0.5, -0.2, *t).unwrap()
            };
            worst = worst.max((y - exact).abs());
        }
    }
    check("closed-form vs RK4", worst <= 1e-6, format!("max error {worst:.2e}"))
}

fn smooth_field(grid: SpatialGrid) -> MagnetizationField {
    MagnetizationField::from_fn(grid, |x| {
        let theta = 0.6 * (PI * x).cos() + 0.2;
        let phi = 1.1 * (PI * x).cos() + 0.3;
        Vec3::new(theta.cos() * phi.cos(), theta.cos() * phi.sin(), theta.sin())
    })
    .unwrap()
}

fn semilinear_check() -> Check {
    let res: Vec<f64> = [21, 41, 81]
        .iter()
        .map(|&n| {
            let p = LLParams::new(0.02, SpatialGrid::new(1.0, n).unwrap()).unwrap();
            semilinear_residual(&smooth_field(p.grid), &p)
        })
        .collect();
    let ratios = [res[0] / res[1], res[1] / res[2]];
    let pass = ratios.iter().all(|r| (3.2..=5.0).contains(r));
    check("semilinear residual refinement", pass, format!("ratios {:.2}, {:.2}", ratios[0], ratios[1]))
}

fn spectral_check(perturb_nu: f64) -> Check {
    let errors = |n: usize| {
        let p = LLParams::new(0.02, SpatialGrid::new(1.0, n).unwrap()).unwrap();
        let at = LinearizationPoint::new(Vec3::basis(1)).unwrap();
        let numeric = numeric_spectrum(&discretize_a(&p, &at)).unwrap();
        let mut shifted = p;
        shifted.nu *= 1.0 + perturb_nu;
        (numeric[0].re, compare_spectra(&numeric, &analytic_spectrum(&shifted, 3)))
    };
    let (max_re, coarse) = errors(41);
    let (_, fine) = errors(81);
    let kernel_ok = coarse.iter().filter(|r| r.mode == 0).all(|r| r.abs_error < 1e-10);
    let mut worst_ratio: f64 = 4.0;
    for (c, f) in coarse.iter().zip(&fine).filter(|(c, _)| c.mode > 0) {
        let r = c.abs_error / f.abs_error;
        if (r - 4.0).abs() > (worst_ratio - 4.0).abs() {
            worst_ratio = r;
        }
    }
    let pass = kernel_ok && max_re <= 1e-10 && (3.5..=4.5).contains(&worst_ratio);
    check(
        "spectral convergence (modes 0-3, n 41 -> 81)",
        pass,
        format!("worst refinement ratio {worst_ratio:.3}, max re {max_re:.1e}"),
    )
}

fn ellipse_check() -> Check {
    let b = 0.3;
    let pts = (0..1000)
        .map(|i| {
            let th = TAU * i as f64 / 1000.0;
            (th.sin(), 0.7 * th.sin() + b * th.cos())
        })
        .collect();
    let area = loop_area(&IOCurve::new(pts, 1.0).unwrap()).abs();
    let rel = (area - PI * b).abs() / (PI * b);
    check("loop area of an ellipse", rel <= 1e-3, format!("relative error {rel:.1e}"))
}

fn census_check() -> Check {
    let count = |p: SecondOrderParams| {
        let c = equilibrium_census(&SystemDescriptor::SecondOrder(p)).unwrap();
        (c.count, c.multiple_stable)
    };
    let linear = count(SecondOrderParams::linear(15.0, 1.0));
    let cubic = count(SecondOrderParams::cubic(15.0, -1.0));
    let chain = count(SecondOrderParams::linear(15.0, 0.0));
    let p = LLParams::new(0.02, SpatialGrid::new(1.0, 21).unwrap()).unwrap();
    let ll = equilibrium_census(&SystemDescriptor::LlNonlinear(p)).unwrap();
    let pass = linear == (EquilibriumCount::One, false)
        && cubic == (EquilibriumCount::FiniteMany(3), true)
        && chain == (EquilibriumCount::Continuum, true)
        && ll.count == EquilibriumCount::Continuum
        && ll.multiple_stable;
    check(
        "equilibrium census",
        pass,
        format!("linear {:?}, cubic {:?}, chain {:?}, ll {:?}", linear.0, cubic.0, chain.0, ll.count),
    )
}

fn step_guard_check() -> Check {
    let p = LLParams::new(0.02, SpatialGrid::new(1.0, 21).unwrap()).unwrap();
    let f = MagnetizationField::uniform(p.grid, Vec3::basis(1));
    let dt = 2.0 * p.stable_dt();
    let fired = matches!(integrate_ll(&f, &p, None, 10.0 * dt, dt, &ProbeSpec::new(0.5, 1)), Err(Error::StepSize { .. }));
    check("step-size guard", fired, format!("dt = 2 x {:.3e} {}", p.stable_dt(), if fired { "rejected" } else { "accepted" }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for c in run_all(&VerifyOptions::default()) {
            assert!(c.pass, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn perturbed_nu_fails_spectral_check() {
        assert!(!spectral_check(0.01).pass);
        assert!(spectral_check(0.0).pass);
    }
}
