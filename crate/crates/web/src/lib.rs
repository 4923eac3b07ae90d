//! Browser bindings: one loop of a spring, one loop of the field model, and
//! the spectrum of the linearized field operator.

use hystlab_core::experiment::{Experiment, Forcing, InitialState, Integration, Model, SystemKind};
use hystlab_core::hysteresis::LoopMetrics;
use hystlab_core::lllin::{analytic_spectrum, compare_spectra, discretize_a, numeric_spectrum, LinearizationPoint};
use hystlab_core::llpde::{ConstraintMode, LLParams, LlOptions, ProbeSpec};
use hystlab_core::odebench::{SecondOrderParams, SecondOrderState};
use hystlab_core::{InputShape, IOCurve, MagnetizationField, SpatialGrid, Vec3};
use wasm_bindgen::prelude::*;

fn js(e: hystlab_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// The analysed period of a run, in `(u, y)` coordinates.
#[wasm_bindgen]
pub struct LoopView {
    u: Vec<f64>,
    y: Vec<f64>,
    metrics: LoopMetrics,
}

#[wasm_bindgen]
impl LoopView {
    #[wasm_bindgen(getter)]
    pub fn u(&self) -> Vec<f64> {
        self.u.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn y(&self) -> Vec<f64> {
        self.y.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn area(&self) -> f64 {
        self.metrics.area
    }

    #[wasm_bindgen(getter)]
    pub fn normalized_area(&self) -> f64 {
        self.metrics.normalized_area
    }

    #[wasm_bindgen(getter)]
    pub fn closure_gap(&self) -> f64 {
        self.metrics.closure_gap
    }
}

impl From<IOCurve> for LoopView {
    fn from(curve: IOCurve) -> Self {
        let metrics = LoopMetrics::of(&curve);
        let (u, y) = curve.points().iter().copied().unzip();
        LoopView { u, y, metrics }
    }
}

/// `system` is `linear-spring`, `nonlinear-spring` or `integrator-chain`.
#[wasm_bindgen]
pub fn spring_loop(system: &str, c: f64, k: f64, omega: f64, amplitude: f64) -> Result<LoopView, JsError> {
    let kind: SystemKind = system.parse().map_err(js)?;
    let params = match kind {
        SystemKind::NonlinearSpring => SecondOrderParams::cubic(c, k),
        SystemKind::LinearSpring | SystemKind::IntegratorChain => SecondOrderParams::linear(c, k),
        _ => return Err(JsError::new("not a spring")),
    };
    let exp = Experiment::new(
        Model::SecondOrder(params),
        InitialState::Point(SecondOrderState::default()),
        Forcing { amplitude, shape: InputShape::Sine, channel: None },
        None,
        Integration::default(),
    )
    .map_err(js)?;
    Ok(exp.cycle(omega).map_err(js)?.into())
}

/// Loop of the probed field component for the nonlinear or linearized model
/// started from the uniform state `(1, 0, 0)`.
#[wasm_bindgen]
pub fn field_loop(linear: bool, nu: f64, nodes: usize, omega: f64, amplitude: f64) -> Result<LoopView, JsError> {
    let grid = SpatialGrid::new(1.0, nodes).map_err(js)?;
    let params = LLParams::new(nu, grid).map_err(js)?;
    let model = if linear {
        Model::LlLinear { params, at: LinearizationPoint::new(Vec3::basis(1)).map_err(js)? }
    } else {
        Model::LlNonlinear { params, options: LlOptions { constraint: ConstraintMode::Unconstrained, ..LlOptions::default() } }
    };
    let exp = Experiment::new(
        model,
        InitialState::Field(MagnetizationField::uniform(grid, Vec3::basis(1))),
        Forcing { amplitude, shape: InputShape::Cosine, channel: Some(1) },
        Some(ProbeSpec::new(0.6, 1)),
        Integration::default(),
    )
    .map_err(js)?;
    Ok(exp.cycle(omega).map_err(js)?.into())
}

/// Rows of `[mode, re_analytic, im_analytic, re_numeric, im_numeric, abs_error]`, flattened.
#[wasm_bindgen]
pub fn spectrum(nu: f64, nodes: usize, max_mode: usize) -> Result<Vec<f64>, JsError> {
    let params = LLParams::new(nu, SpatialGrid::new(1.0, nodes).map_err(js)?).map_err(js)?;
    let at = LinearizationPoint::new(Vec3::basis(1)).map_err(js)?;
    let numeric = numeric_spectrum(&discretize_a(&params, &at)).map_err(js)?;
    Ok(compare_spectra(&numeric, &analytic_spectrum(&params, max_mode))
        .iter()
        .flat_map(|r| [r.mode as f64, r.analytic.re, r.analytic.im, r.numeric.re, r.numeric.im, r.abs_error])
        .collect())
}
