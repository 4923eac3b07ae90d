//! Experiment description files.
//!
//! A spec is a TOML document naming a built-in system, its parameters, the
//! forcing, the initial state and the list of frequencies to run. Every
//! optional field has a default; [`ExperimentSpec::resolved`] fills them all
//! in so a saved record never depends on defaults.

use hystlab_core::experiment::{Experiment, Forcing, InitialState, Integration, Model, SystemKind, DEFAULT_DISCARD_PERIODS, DEFAULT_SAMPLES_PER_PERIOD};
use hystlab_core::lllin::LinearizationPoint;
use hystlab_core::llpde::{ConstraintMode, LLParams, LlOptions, ProbeSpec, RhsForm};
use hystlab_core::odebench::{SecondOrderParams, SecondOrderState};
use hystlab_core::{InputShape, MagnetizationField, SpatialGrid, Vec3};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub system: SystemKind,
    /// Forcing frequencies, strictly decreasing for a sweep.
    pub sweep: Vec<f64>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub input: InputSpec,
    #[serde(default)]
    pub initial: InitialSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeBlock>,
    #[serde(default)]
    pub integrator: IntegratorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSpec>,
    #[serde(default)]
    pub outputs: OutputSpec,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    /// Linearization point of the linear LL system.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<[f64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    pub amplitude: f64,
    pub shape: InputShape,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<usize>,
}

impl Default for InputSpec {
    fn default() -> Self {
        InputSpec { amplitude: 1.0, shape: InputShape::Sine, channel: None }
    }
}

/// `y`/`ydot` for the springs, a uniform vector `m` for the field systems.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ydot: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<[f64; 3]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeBlock {
    pub x: f64,
    pub channel: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSpec {
    /// Exact step; the per-frequency default bound when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discard_periods: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples_per_period: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<ConstraintMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<RhsForm>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSpec {
    pub max_mode: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Write per-frequency loop plots even without `--plot`.
    #[serde(default)]
    pub plot: bool,
    /// Write the analysed cycle of every frequency as its own CSV during a sweep.
    #[serde(default)]
    pub cycles: bool,
}

fn spec_err(msg: impl Into<String>) -> CliError {
    CliError::Spec(msg.into())
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: ExperimentSpec = toml::from_str(text).map_err(|e| spec_err(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("specs always serialize")
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(spec_err("name must not be empty"));
        }
        if self.sweep.is_empty() {
            return Err(spec_err("sweep needs at least one frequency"));
        }
        if self.sweep.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(spec_err("sweep frequencies must be positive"));
        }
        let field = self.system.is_field();
        let p = &self.params;
        let misplaced = if field {
            [("c", p.c.is_some()), ("k", p.k.is_some())].into_iter().find(|(_, set)| *set)
        } else {
            [("nu", p.nu.is_some()), ("length", p.length.is_some()), ("nodes", p.nodes.is_some()), ("a", p.a.is_some())]
                .into_iter()
                .find(|(_, set)| *set)
        };
        if let Some((key, _)) = misplaced {
            return Err(spec_err(format!("params.{key} does not apply to {}", self.system)));
        }
        if p.a.is_some() && self.system != SystemKind::LlLinear {
            return Err(spec_err("params.a only applies to ll-linear"));
        }
        if field && (self.initial.y.is_some() || self.initial.ydot.is_some()) {
            return Err(spec_err("field systems take initial.m, not y/ydot"));
        }
        if !field && self.initial.m.is_some() {
            return Err(spec_err("scalar systems take initial.y and initial.ydot, not m"));
        }
        if !field && self.input.channel.is_some() {
            return Err(spec_err("input.channel only applies to field systems"));
        }
        if !field && self.probe.is_some() {
            return Err(spec_err("probe only applies to field systems"));
        }
        if self.system != SystemKind::LlNonlinear && (self.integrator.constraint.is_some() || self.integrator.form.is_some()) {
            return Err(spec_err("integrator.constraint and integrator.form only apply to ll-nonlinear"));
        }
        if self.spectrum.is_some() && self.system != SystemKind::LlLinear {
            return Err(spec_err("spectrum only applies to ll-linear"));
        }
        self.experiment()?;
        Ok(())
    }

    /// Copy with every default written out.
    pub fn resolved(&self) -> ExperimentSpec {
        let mut s = self.clone();
        let field = s.system.is_field();
        if field {
            s.params.nu.get_or_insert(0.02);
            s.params.length.get_or_insert(1.0);
            s.params.nodes.get_or_insert(41);
            if s.system == SystemKind::LlLinear {
                s.params.a.get_or_insert([1.0, 0.0, 0.0]);
            }
            s.initial.m.get_or_insert([1.0, 0.0, 0.0]);
            s.probe.get_or_insert(ProbeBlock { x: 0.6, channel: 1 });
            s.input.channel.get_or_insert(1);
        } else {
            s.params.c.get_or_insert(15.0);
            s.params.k.get_or_insert(match s.system {
                SystemKind::NonlinearSpring => -1.0,
                SystemKind::IntegratorChain => 0.0,
                _ => 1.0,
            });
            s.initial.y.get_or_insert(0.0);
            s.initial.ydot.get_or_insert(0.0);
        }
        s.integrator.discard_periods.get_or_insert(DEFAULT_DISCARD_PERIODS);
        s.integrator.samples_per_period.get_or_insert(DEFAULT_SAMPLES_PER_PERIOD);
        if s.system == SystemKind::LlNonlinear {
            s.integrator.constraint.get_or_insert(ConstraintMode::Project);
            s.integrator.form.get_or_insert(RhsForm::CrossProduct);
        }
        s
    }

    /// Applies command-line overrides.
    pub fn with_overrides(mut self, dt: Option<f64>, discard_periods: Option<usize>) -> Result<Self> {
        if dt.is_some() {
            self.integrator.dt = dt;
        }
        if discard_periods.is_some() {
            self.integrator.discard_periods = discard_periods;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn experiment(&self) -> Result<Experiment> {
        let r = self.resolved();
        let p = &r.params;
        let integration = Integration {
            dt: r.integrator.dt,
            discard_periods: r.integrator.discard_periods.unwrap(),
            samples_per_period: r.integrator.samples_per_period.unwrap(),
        };
        let forcing = Forcing { amplitude: r.input.amplitude, shape: r.input.shape, channel: r.input.channel };
        let core = |e: hystlab_core::Error| spec_err(e.to_string());
        let (model, initial, probe) = if r.system.is_field() {
            let grid = SpatialGrid::new(p.length.unwrap(), p.nodes.unwrap()).map_err(core)?;
            let params = LLParams::new(p.nu.unwrap(), grid).map_err(core)?;
            let [m1, m2, m3] = r.initial.m.unwrap();
            let m0 = Vec3::try_new(m1, m2, m3).map_err(core)?;
            let field = MagnetizationField::uniform(grid, m0);
            let model = match r.system {
                SystemKind::LlNonlinear => Model::LlNonlinear {
                    params,
                    options: LlOptions {
                        constraint: r.integrator.constraint.unwrap(),
                        form: r.integrator.form.unwrap(),
                        snapshot_stride: None,
                    },
                },
                _ => Model::LlLinear { params, at: LinearizationPoint::new(Vec3(p.a.unwrap())).map_err(core)? },
            };
            let probe = r.probe.unwrap();
            (model, InitialState::Field(field), Some(ProbeSpec::new(probe.x, probe.channel)))
        } else {
            let (c, k) = (p.c.unwrap(), p.k.unwrap());
            let params = match r.system {
                SystemKind::NonlinearSpring => SecondOrderParams::cubic(c, k),
                _ => SecondOrderParams::linear(c, k),
            };
            (
                Model::SecondOrder(params),
                InitialState::Point(SecondOrderState::new(r.initial.y.unwrap(), r.initial.ydot.unwrap())),
                None,
            )
        };
        Experiment::new(model, initial, forcing, probe, integration).map_err(core)
    }

    pub fn max_mode(&self) -> usize {
        self.spectrum.map_or(5, |s| s.max_mode)
    }
}
