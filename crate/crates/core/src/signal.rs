//! Periodic forcing, sampled trajectories and the fixed-step time schedule
//! shared by every integrator.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec3::Vec3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputShape {
    Sine,
    Cosine,
}

/// `amplitude * sin(omega t)` or `amplitude * cos(omega t)`, optionally routed
/// to one component of a vector system.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicInput {
    amplitude: f64,
    omega: f64,
    shape: InputShape,
    channel: Option<usize>,
}

impl HarmonicInput {
    pub fn new(amplitude: f64, omega: f64, shape: InputShape) -> Result<Self> {
        if !amplitude.is_finite() {
            return Err(Error::NonFinite("input amplitude"));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidArgument(format!("omega must be positive, got {omega}")));
        }
        Ok(HarmonicInput { amplitude, omega, shape, channel: None })
    }

    pub fn sine(amplitude: f64, omega: f64) -> Result<Self> {
        Self::new(amplitude, omega, InputShape::Sine)
    }

    pub fn cosine(amplitude: f64, omega: f64) -> Result<Self> {
        Self::new(amplitude, omega, InputShape::Cosine)
    }

    /// Routes the input to component `channel` (1, 2 or 3) of a vector system.
    pub fn on_channel(mut self, channel: usize) -> Result<Self> {
        if !(1..=3).contains(&channel) {
            return Err(Error::InvalidArgument(format!("channel must be 1, 2 or 3, got {channel}")));
        }
        self.channel = Some(channel);
        Ok(self)
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn shape(&self) -> InputShape {
        self.shape
    }

    pub fn channel(&self) -> Option<usize> {
        self.channel
    }

    pub fn period(&self) -> f64 {
        TAU / self.omega
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        let phase = self.omega * t;
        match self.shape {
            InputShape::Sine => self.amplitude * phase.sin(),
            InputShape::Cosine => self.amplitude * phase.cos(),
        }
    }

    /// The input as a uniform applied vector; channel 1 when none was set.
    pub fn evaluate_vector(&self, t: f64) -> Vec3 {
        Vec3::basis(self.channel.unwrap_or(1)) * self.evaluate(t)
    }
}

/// Evaluates `sig` at time `t`.
pub fn evaluate_input(sig: &HarmonicInput, t: f64) -> f64 {
    sig.evaluate(t)
}

/// Probe value and input, recorded at increasing times.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    samples: Vec<f64>,
    inputs: Vec<f64>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, samples: Vec<f64>, inputs: Vec<f64>) -> Result<Self> {
        if times.len() != samples.len() || times.len() != inputs.len() {
            return Err(Error::InvalidArgument("trajectory columns differ in length".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("trajectory times must be strictly increasing".into()));
        }
        Ok(Trajectory { times, samples, inputs })
    }

    pub(crate) fn with_capacity(n: usize) -> Self {
        Trajectory {
            times: Vec::with_capacity(n),
            samples: Vec::with_capacity(n),
            inputs: Vec::with_capacity(n),
        }
    }

    pub(crate) fn push(&mut self, t: f64, sample: f64, input: f64) {
        debug_assert!(self.times.last().is_none_or(|&last| t > last));
        self.times.push(t);
        self.samples.push(sample);
        self.inputs.push(input);
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn inputs(&self) -> &[f64] {
        &self.inputs
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_sample(&self) -> Option<f64> {
        self.samples.last().copied()
    }
}

/// Uniform time stepping: `steps` steps of size `dt`, recording every
/// `record_stride` steps (step 0 included).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub dt: f64,
    pub steps: usize,
    pub record_stride: usize,
}

impl Schedule {
    /// Steps of size `dt` until at least `t_end`, recording every step.
    pub fn fixed(dt: f64, t_end: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
        }
        if !(t_end.is_finite() && t_end >= 0.0) {
            return Err(Error::InvalidArgument(format!("t_end must be non-negative, got {t_end}")));
        }
        let steps = (t_end / dt - 1e-9).ceil().max(0.0) as usize;
        Ok(Schedule { dt, steps, record_stride: 1 })
    }

    /// Covers `periods` whole periods of `2π/omega` with the largest step
    /// `<= dt_bound` that puts a recorded sample exactly on every period
    /// boundary, `samples_per_period` samples per period.
    pub fn periodic(omega: f64, periods: usize, dt_bound: f64, samples_per_period: usize) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidArgument(format!("omega must be positive, got {omega}")));
        }
        if !(dt_bound.is_finite() && dt_bound > 0.0) {
            return Err(Error::InvalidArgument(format!("dt bound must be positive, got {dt_bound}")));
        }
        if samples_per_period == 0 || periods == 0 {
            return Err(Error::InvalidArgument("periods and samples per period must be positive".into()));
        }
        let period = TAU / omega;
        let strides = (period / (dt_bound * samples_per_period as f64)).ceil().max(1.0) as usize;
        let per_period = strides * samples_per_period;
        Ok(Schedule {
            dt: period / per_period as f64,
            steps: per_period * periods,
            record_stride: strides,
        })
    }

    /// Like [`Schedule::periodic`] but with a caller-chosen step; samples land
    /// on period boundaries only when `dt` divides the period.
    pub fn periodic_with_dt(omega: f64, periods: usize, dt: f64, samples_per_period: usize) -> Result<Self> {
        let mut s = Schedule::fixed(dt, periods as f64 * TAU / omega)?;
        let per_period = TAU / omega / dt;
        s.record_stride = ((per_period / samples_per_period.max(1) as f64).floor() as usize).max(1);
        Ok(s)
    }

    pub fn with_record_stride(mut self, stride: usize) -> Self {
        self.record_stride = stride.max(1);
        self
    }

    pub fn time(&self, step: usize) -> f64 {
        step as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.steps)
    }

    pub fn records(&self, step: usize) -> bool {
        step.is_multiple_of(self.record_stride) || step == self.steps
    }

    pub fn recorded_len(&self) -> usize {
        self.steps / self.record_stride + 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn sine_starts_at_zero() {
        assert_eq!(HarmonicInput::sine(1.0, 1.0).unwrap().evaluate(0.0), 0.0);
    }

    #[test]
    fn cosine_input_at_origin() {
        let u = HarmonicInput::cosine(0.001, 1.0).unwrap();
        assert_eq!(evaluate_input(&u, 0.0), 0.001);
    }

    #[test]
    fn sine_peak() {
        let u = HarmonicInput::sine(1.0, 2.0).unwrap();
        assert!((u.evaluate(FRAC_PI_4) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn input_is_periodic() {
        for &omega in &[1.0, 0.1, 0.001, 7.3] {
            let u = HarmonicInput::cosine(2.5, omega).unwrap();
            for i in 0..50 {
                let t = 0.37 * i as f64 / omega;
                let gap = (u.evaluate(t) - u.evaluate(t + u.period())).abs();
                assert!(gap <= 64.0 * f64::EPSILON * (1.0 + omega * t) * 2.5, "{gap}");
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(HarmonicInput::sine(1.0, 0.0).is_err());
        assert!(HarmonicInput::sine(f64::NAN, 1.0).is_err());
        assert!(HarmonicInput::sine(1.0, 1.0).unwrap().on_channel(4).is_err());
    }

    #[test]
    fn vector_input_uses_channel() {
        let u = HarmonicInput::cosine(0.5, 1.0).unwrap().on_channel(2).unwrap();
        assert_eq!(u.evaluate_vector(0.0), Vec3::new(0.0, 0.5, 0.0));
    }

    #[test]
    fn trajectory_validates_columns() {
        assert!(Trajectory::new(vec![0.0, 1.0], vec![0.0], vec![0.0, 0.0]).is_err());
        assert!(Trajectory::new(vec![0.0, 0.0], vec![0.0; 2], vec![0.0; 2]).is_err());
        assert!(Trajectory::new(vec![0.0, 1.0], vec![0.0; 2], vec![0.0; 2]).is_ok());
    }

    #[test]
    fn periodic_schedule_lands_on_period_boundaries() {
        let s = Schedule::periodic(0.1, 3, 0.01, 2000).unwrap();
        let period = 2.0 * PI / 0.1;
        assert!(s.dt <= 0.01);
        assert_eq!(s.steps % 3, 0);
        let per_period = s.steps / 3;
        assert_eq!(per_period % s.record_stride, 0);
        assert_eq!(per_period / s.record_stride, 2000);
        assert!((s.time(per_period) - period).abs() < 1e-9 * period);
        assert!((s.t_end() - 3.0 * period).abs() < 1e-9 * period);
    }

    #[test]
    fn fixed_schedule_reaches_t_end() {
        let s = Schedule::fixed(0.1, 1.0).unwrap();
        assert_eq!(s.steps, 10);
        let s = Schedule::fixed(0.3, 1.0).unwrap();
        assert_eq!(s.steps, 4);
        assert!(Schedule::fixed(0.0, 1.0).is_err());
    }
}
