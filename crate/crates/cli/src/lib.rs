//! Experiment runner behind the `hystlab` binary.

pub mod error;
pub mod output;
pub mod presets;
pub mod record;
pub mod spec;
pub mod verify;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use hystlab_core::experiment::SystemKind;
use hystlab_core::hysteresis::{equilibrium_census, extract_cycle, rate_independence, sweep_parallel, LoopMetrics, SweepPolicy, SweepResult};
use hystlab_core::lllin::{analytic_spectrum, compare_spectra, discretize_a, numeric_spectrum, LinearizationPoint, ModeComparison};
use hystlab_core::llpde::LLParams;
use hystlab_core::{SpatialGrid, Vec3};

pub use error::{CliError, Result};
use record::{RunInfo, RunRecord};
pub use spec::ExperimentSpec;

/// Settings shared by the run commands.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub out: PathBuf,
    pub jobs: usize,
    pub plot: bool,
    pub dt: Option<f64>,
    pub discard_periods: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { out: PathBuf::from("."), jobs: 1, plot: false, dt: None, discard_periods: None }
    }
}

fn file_tag(omega: f64) -> String {
    format!("w{}", output::num(omega))
}

fn write(out: &Path, name: String, bytes: &[u8], record: &mut RunRecord) -> Result<()> {
    output::write_file(&out.join(&name), bytes)?;
    record.outputs.push(name);
    Ok(())
}

fn finish(out: &Path, stem: &str, mut record: RunRecord, start: Instant) -> Result<RunRecord> {
    record.wall_clock_seconds = start.elapsed().as_secs_f64();
    let name = format!("{stem}.run.json");
    record.outputs.push(name.clone());
    output::write_file(&out.join(name), record.to_json().as_bytes())?;
    Ok(record)
}

/// One frequency: writes the full `t,u,y` trajectory.
pub fn simulate(spec: &ExperimentSpec, omega: Option<f64>, opts: &RunOptions) -> Result<RunRecord> {
    let start = Instant::now();
    let spec = spec.clone().with_overrides(opts.dt, opts.discard_periods)?;
    let omega = match (omega, spec.sweep.as_slice()) {
        (Some(w), _) => w,
        (None, [w]) => *w,
        (None, ws) => {
            return Err(CliError::Spec(format!("simulate needs a single frequency, the experiment file lists {}; pass --omega", ws.len())))
        }
    };
    if !(omega.is_finite() && omega > 0.0) {
        return Err(CliError::Spec(format!("omega must be positive, got {omega}")));
    }
    let experiment = spec.experiment()?;
    let sim = experiment.simulate(omega).map_err(CliError::simulation("time integration"))?;
    let mut record = RunRecord::new("simulate", &spec);
    let mut info = RunInfo::new(omega, &sim.schedule);
    if let Ok(curve) = extract_cycle(&sim.trajectory, omega, experiment.integration().discard_periods) {
        info.metrics = Some(LoopMetrics::of(&curve));
    }
    fill_diagnostics(&mut info, &sim);
    record.runs.push(info);

    let stem = spec.name.clone();
    write(&opts.out, format!("{stem}.csv"), &output::trajectory_csv(&sim.trajectory), &mut record)?;
    if opts.plot || spec.outputs.plot {
        let pts: Vec<(f64, f64)> = sim.trajectory.inputs().iter().copied().zip(sim.trajectory.samples().iter().copied()).collect();
        let caption = format!("{} {}, omega = {}", spec.name, spec.system, output::num(omega));
        write(&opts.out, format!("{stem}.svg"), output::loop_svg(&pts, &caption).as_bytes(), &mut record)?;
    }
    finish(&opts.out, &stem, record, start)
}

fn fill_diagnostics(info: &mut RunInfo, sim: &hystlab_core::experiment::Simulation) {
    if let Some(d) = sim.drift {
        info.drift_pre_projection = d.max_pre_projection.is_finite().then_some(d.max_pre_projection);
        info.drift_post_projection = Some(d.max_post_projection);
    }
    info.probe = sim.probe;
}

/// Sweep over the listed frequencies and report the verdict.
pub fn sweep(spec: &ExperimentSpec, opts: &RunOptions) -> Result<(RunRecord, SweepResult)> {
    let start = Instant::now();
    let spec = spec.clone().with_overrides(opts.dt, opts.discard_periods)?;
    let experiment = spec.experiment()?;
    let infos: Mutex<BTreeMap<u64, RunInfo>> = Mutex::new(BTreeMap::new());
    let runner = |omega: f64| {
        let sim = experiment.simulate(omega)?;
        let curve = extract_cycle(&sim.trajectory, omega, experiment.integration().discard_periods)?;
        let mut info = RunInfo::new(omega, &sim.schedule);
        info.metrics = Some(LoopMetrics::of(&curve));
        fill_diagnostics(&mut info, &sim);
        infos.lock().unwrap().insert(omega.to_bits(), info);
        Ok(curve)
    };
    let result = sweep_parallel(&runner, &spec.sweep, &SweepPolicy::default(), opts.jobs.max(1)).map_err(|e| match e {
        hystlab_core::Error::InvalidArgument(msg) => CliError::Spec(msg),
        other => CliError::Simulation { stage: "sweep", source: other },
    })?;

    let mut record = RunRecord::new("sweep", &spec);
    let mut infos = infos.into_inner().unwrap();
    record.runs = spec.sweep.iter().filter_map(|w| infos.remove(&w.to_bits())).collect();
    record.verdict = Some(result.verdict);
    let n = result.curves.len();
    record.rate_independence = rate_independence(&result.curves[n - 2], &result.curves[n - 1]).ok();
    record.census = Some(equilibrium_census(&experiment.descriptor()).map_err(CliError::simulation("equilibrium census"))?);

    let stem = spec.name.clone();
    write(&opts.out, format!("{stem}.loops.csv"), &output::loops_csv(&result.entries), &mut record)?;
    for curve in &result.curves {
        let tag = file_tag(curve.omega());
        if spec.outputs.cycles {
            write(&opts.out, format!("{stem}.{tag}.cycle.csv"), &output::cycle_csv(curve), &mut record)?;
        }
        if opts.plot || spec.outputs.plot {
            let caption = format!("{} {}, omega = {}", spec.name, spec.system, output::num(curve.omega()));
            write(&opts.out, format!("{stem}.{tag}.svg"), output::loop_svg(curve.points(), &caption).as_bytes(), &mut record)?;
        }
    }
    let record = finish(&opts.out, &format!("{stem}.sweep"), record, start)?;
    Ok((record, result))
}

/// Analytic against numeric eigenvalues of the linearized operator.
pub fn spectrum(spec: &ExperimentSpec, opts: &RunOptions) -> Result<(RunRecord, Vec<ModeComparison>)> {
    let start = Instant::now();
    if spec.system != SystemKind::LlLinear {
        return Err(CliError::Spec(format!("spectrum needs an ll-linear spec, got {}", spec.system)));
    }
    let r = spec.resolved();
    let core = |e: hystlab_core::Error| CliError::Spec(e.to_string());
    let grid = SpatialGrid::new(r.params.length.unwrap(), r.params.nodes.unwrap()).map_err(core)?;
    let params = LLParams::new(r.params.nu.unwrap(), grid).map_err(core)?;
    let at = LinearizationPoint::new(Vec3(r.params.a.unwrap())).map_err(core)?;
    let numeric = numeric_spectrum(&discretize_a(&params, &at)).map_err(CliError::simulation("eigensolve"))?;
    let rows = compare_spectra(&numeric, &analytic_spectrum(&params, spec.max_mode()));
    let mut record = RunRecord::new("spectrum", spec);
    write(&opts.out, format!("{}.spectrum.csv", spec.name), &output::spectrum_csv(&rows), &mut record)?;
    let record = finish(&opts.out, &format!("{}.spectrum", spec.name), record, start)?;
    Ok((record, rows))
}

/// Runs the oracle checks; `Err(Verify)` names the failures.
pub fn verify(opts: &verify::VerifyOptions) -> (Vec<verify::Check>, Result<()>) {
    let checks = verify::run_all(opts);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
    let outcome = if failed.is_empty() { Ok(()) } else { Err(CliError::Verify(failed.join(", "))) };
    (checks, outcome)
}
