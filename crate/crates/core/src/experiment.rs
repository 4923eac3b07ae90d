//! Frequency-parameterized runs of the built-in systems.
//!
//! An [`Experiment`] fixes everything except the forcing frequency, so the
//! same value drives single simulations, cycle extraction and sweeps.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{MagnetizationField, SpatialGrid};
use crate::hysteresis::{extract_cycle, CycleRunner, IOCurve, SystemDescriptor};
use crate::lllin::{integrate_linear_scheduled, LinearizationPoint};
use crate::llpde::{integrate_ll_with, ConstraintMode, DriftReport, LLParams, LlOptions, ProbeSpec, ResolvedProbe};
use crate::odebench::{integrate_scheduled, SecondOrderParams, SecondOrderState};
use crate::signal::{HarmonicInput, InputShape, Schedule, Trajectory};
use crate::vec3::Vec3;

pub const DEFAULT_SAMPLES_PER_PERIOD: usize = 2000;
pub const DEFAULT_DISCARD_PERIODS: usize = 2;
/// Upper bound on the ODE step independent of the forcing period.
pub const ODE_MAX_DT: f64 = 0.01;
/// Minimum ODE steps per forcing period.
pub const ODE_STEPS_PER_PERIOD: f64 = 1000.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    LinearSpring,
    NonlinearSpring,
    IntegratorChain,
    LlNonlinear,
    LlLinear,
}

impl SystemKind {
    pub const ALL: [SystemKind; 5] = [
        SystemKind::LinearSpring,
        SystemKind::NonlinearSpring,
        SystemKind::IntegratorChain,
        SystemKind::LlNonlinear,
        SystemKind::LlLinear,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SystemKind::LinearSpring => "linear-spring",
            SystemKind::NonlinearSpring => "nonlinear-spring",
            SystemKind::IntegratorChain => "integrator-chain",
            SystemKind::LlNonlinear => "ll-nonlinear",
            SystemKind::LlLinear => "ll-linear",
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, SystemKind::LlNonlinear | SystemKind::LlLinear)
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SystemKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown system `{s}`")))
    }
}

/// The dynamics, with their parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    SecondOrder(SecondOrderParams),
    LlNonlinear { params: LLParams, options: LlOptions },
    LlLinear { params: LLParams, at: LinearizationPoint },
}

impl Model {
    pub fn descriptor(&self) -> SystemDescriptor {
        match self {
            Model::SecondOrder(p) => SystemDescriptor::SecondOrder(*p),
            Model::LlNonlinear { params, .. } => SystemDescriptor::LlNonlinear(*params),
            Model::LlLinear { params, at } => SystemDescriptor::LlLinear(*params, *at),
        }
    }

    fn grid(&self) -> Option<&SpatialGrid> {
        match self {
            Model::SecondOrder(_) => None,
            Model::LlNonlinear { params, .. } | Model::LlLinear { params, .. } => Some(&params.grid),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialState {
    Point(SecondOrderState),
    Field(MagnetizationField),
}

/// Harmonic forcing without its frequency.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Forcing {
    pub amplitude: f64,
    pub shape: InputShape,
    /// 1-based field component receiving the input; ignored by scalar systems.
    pub channel: Option<usize>,
}

impl Forcing {
    pub fn at(&self, omega: f64) -> Result<HarmonicInput> {
        let sig = HarmonicInput::new(self.amplitude, omega, self.shape)?;
        match self.channel {
            Some(c) => sig.on_channel(c),
            None => Ok(sig),
        }
    }
}

/// Time-stepping policy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Integration {
    /// Exact step to use instead of the default bound.
    pub dt: Option<f64>,
    pub discard_periods: usize,
    pub samples_per_period: usize,
}

impl Default for Integration {
    fn default() -> Self {
        Integration { dt: None, discard_periods: DEFAULT_DISCARD_PERIODS, samples_per_period: DEFAULT_SAMPLES_PER_PERIOD }
    }
}

#[derive(Clone, Debug)]
pub struct Simulation {
    pub trajectory: Trajectory,
    pub schedule: Schedule,
    pub drift: Option<DriftReport>,
    pub probe: Option<ResolvedProbe>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Experiment {
    model: Model,
    initial: InitialState,
    forcing: Forcing,
    probe: Option<ProbeSpec>,
    integration: Integration,
}

impl Experiment {
    pub fn new(model: Model, initial: InitialState, forcing: Forcing, probe: Option<ProbeSpec>, integration: Integration) -> Result<Self> {
        match (&model, &initial) {
            (Model::SecondOrder(p), InitialState::Point(s)) => {
                p.validate()?;
                if !(s.y.is_finite() && s.ydot.is_finite()) {
                    return Err(Error::NonFinite("initial state"));
                }
                if probe.is_some() {
                    return Err(Error::InvalidArgument("scalar systems take no probe".into()));
                }
            }
            (Model::SecondOrder(_), InitialState::Field(_)) => {
                return Err(Error::InvalidArgument("scalar systems need a scalar initial state".into()))
            }
            (_, InitialState::Point(_)) => return Err(Error::InvalidArgument("field systems need an initial field".into())),
            (m, InitialState::Field(f)) => {
                if Some(f.grid()) != m.grid() {
                    return Err(Error::InvalidArgument("initial field and parameters use different grids".into()));
                }
                match probe {
                    Some(p) => {
                        p.resolve(f.grid())?;
                    }
                    None => return Err(Error::InvalidArgument("field systems need a probe".into())),
                }
                if let Model::LlNonlinear { options, .. } = m {
                    if options.constraint == ConstraintMode::Project {
                        f.check_unit_norm(crate::llpde::LOOSE_NORM_TOLERANCE)?;
                    }
                }
            }
        }
        if integration.samples_per_period == 0 {
            return Err(Error::InvalidArgument("samples per period must be positive".into()));
        }
        if let Some(dt) = integration.dt {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
            }
        }
        forcing.at(1.0)?;
        Ok(Experiment { model, initial, forcing, probe, integration })
    }

    /// Reference setup of a built-in system: zero initial state and
    /// unit sine forcing for the springs, a uniform `(1, 0, 0)` field on a
    /// 41-node unit interval with `0.001 cos` forcing on component 1 and a
    /// probe of component 1 at `x = 0.6` for the field systems.
    pub fn reference(kind: SystemKind) -> Experiment {
        let spring = |params: SecondOrderParams| {
            Experiment::new(
                Model::SecondOrder(params),
                InitialState::Point(SecondOrderState::default()),
                Forcing { amplitude: 1.0, shape: InputShape::Sine, channel: None },
                None,
                Integration::default(),
            )
        };
        let grid = SpatialGrid::new(1.0, 41).expect("valid grid");
        let params = LLParams::new(0.02, grid).expect("valid parameters");
        let field = MagnetizationField::uniform(grid, Vec3::basis(1));
        let forcing = Forcing { amplitude: 0.001, shape: InputShape::Cosine, channel: Some(1) };
        let probe = Some(ProbeSpec::new(0.6, 1));
        let at = LinearizationPoint::new(Vec3::basis(1)).expect("unit vector");
        match kind {
            SystemKind::LinearSpring => spring(SecondOrderParams::linear(15.0, 1.0)),
            SystemKind::NonlinearSpring => spring(SecondOrderParams::cubic(15.0, -1.0)),
            SystemKind::IntegratorChain => spring(SecondOrderParams::linear(15.0, 0.0)),
            SystemKind::LlNonlinear => Experiment::new(
                Model::LlNonlinear {
                    params,
                    options: LlOptions { constraint: ConstraintMode::Unconstrained, ..LlOptions::default() },
                },
                InitialState::Field(field),
                forcing,
                probe,
                Integration::default(),
            ),
            SystemKind::LlLinear => Experiment::new(
                Model::LlLinear { params, at },
                InitialState::Field(field),
                forcing,
                probe,
                Integration::default(),
            ),
        }
        .expect("reference setups are valid")
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn initial(&self) -> &InitialState {
        &self.initial
    }

    pub fn forcing(&self) -> &Forcing {
        &self.forcing
    }

    pub fn probe(&self) -> Option<&ProbeSpec> {
        self.probe.as_ref()
    }

    pub fn integration(&self) -> &Integration {
        &self.integration
    }

    pub fn with_integration(self, integration: Integration) -> Result<Self> {
        Experiment::new(self.model, self.initial, self.forcing, self.probe, integration)
    }

    pub fn descriptor(&self) -> SystemDescriptor {
        self.model.descriptor()
    }

    /// Largest step the default schedule may use at frequency `omega`.
    pub fn dt_bound(&self, omega: f64) -> f64 {
        match &self.model {
            Model::SecondOrder(_) => ODE_MAX_DT.min(std::f64::consts::TAU / omega / ODE_STEPS_PER_PERIOD),
            Model::LlNonlinear { params, .. } | Model::LlLinear { params, .. } => params.default_dt_bound(omega),
        }
    }

    /// `discard_periods + 1` whole periods with samples on period boundaries.
    pub fn schedule(&self, omega: f64) -> Result<Schedule> {
        let periods = self.integration.discard_periods + 1;
        let spp = self.integration.samples_per_period;
        match self.integration.dt {
            Some(dt) => Schedule::periodic_with_dt(omega, periods, dt, spp),
            None => Schedule::periodic(omega, periods, self.dt_bound(omega), spp),
        }
    }

    pub fn simulate(&self, omega: f64) -> Result<Simulation> {
        let schedule = self.schedule(omega)?;
        self.simulate_with(omega, &schedule)
    }

    pub fn simulate_with(&self, omega: f64, schedule: &Schedule) -> Result<Simulation> {
        let input = self.forcing.at(omega)?;
        match (&self.model, &self.initial) {
            (Model::SecondOrder(p), InitialState::Point(s0)) => {
                let (trajectory, _) = integrate_scheduled(p, Some(&input), *s0, schedule)?;
                Ok(Simulation { trajectory, schedule: *schedule, drift: None, probe: None })
            }
            (Model::LlNonlinear { params, options }, InitialState::Field(f0)) => {
                let run = integrate_ll_with(f0, params, Some(&input), schedule, &self.probe_spec(), options)?;
                Ok(Simulation { trajectory: run.trajectory, schedule: run.schedule, drift: Some(run.drift), probe: Some(run.probe) })
            }
            (Model::LlLinear { params, at }, InitialState::Field(z0)) => {
                let run = integrate_linear_scheduled(z0, params, at, Some(&input), schedule, &self.probe_spec())?;
                Ok(Simulation { trajectory: run.trajectory, schedule: run.schedule, drift: None, probe: Some(run.probe) })
            }
            _ => unreachable!("checked in Experiment::new"),
        }
    }

    fn probe_spec(&self) -> ProbeSpec {
        self.probe.expect("field systems carry a probe")
    }

    /// Steady-state cycle after the discarded transient.
    pub fn cycle(&self, omega: f64) -> Result<IOCurve> {
        let sim = self.simulate(omega)?;
        extract_cycle(&sim.trajectory, omega, self.integration.discard_periods)
    }
}

impl CycleRunner for Experiment {
    fn cycle(&self, omega: f64) -> Result<IOCurve> {
        Experiment::cycle(self, omega)
    }
}
