//! Operational hysteresis tests.
//!
//! Two complementary diagnostics are provided. [`sweep`] extracts one
//! steady-state input-output cycle per forcing frequency and decides whether
//! a loop with non-empty interior survives as the frequency goes to zero.
//! [`equilibrium_census`] reports whether the unforced system has several
//! stable equilibria. [`rate_independence`] measures how far two low-frequency
//! loops are from coinciding as curves.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lllin::{discretize_a, numeric_spectrum, LinearizationPoint};
use crate::llpde::LLParams;
use crate::odebench::{classify_stability, equilibria, linearized_eigenvalues, Equilibria, SecondOrderParams, SecondOrderState, Stability};
use crate::signal::Trajectory;

/// Fewest samples accepted for one period of an input-output cycle.
pub const MIN_CYCLE_POINTS: usize = 100;

/// One period of `(input, output)` samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IOCurve {
    points: Vec<(f64, f64)>,
    omega: f64,
    closure_gap: f64,
    degenerate: bool,
}

impl IOCurve {
    pub fn new(points: Vec<(f64, f64)>, omega: f64) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidArgument(format!("a curve needs at least 3 points, got {}", points.len())));
        }
        if points.iter().any(|(u, y)| !u.is_finite() || !y.is_finite()) {
            return Err(Error::NonFinite("curve points"));
        }
        let first = points[0];
        let last = points[points.len() - 1];
        let closure_gap = (first.0 - last.0).hypot(first.1 - last.1);
        let (width, height) = extent(&points);
        let scale = points.iter().fold(1.0f64, |s, (u, y)| s.max(u.abs()).max(y.abs()));
        let degenerate = width <= 1e-12 * scale || height <= 1e-12 * scale;
        Ok(IOCurve { points, omega, closure_gap, degenerate })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn closure_gap(&self) -> f64 {
        self.closure_gap
    }

    /// Zero width or zero height: the curve has an empty interior.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Same points in the opposite order.
    pub fn reversed(&self) -> IOCurve {
        let mut points = self.points.clone();
        points.reverse();
        IOCurve { points, ..*self }
    }

    pub fn width(&self) -> f64 {
        extent(&self.points).0
    }

    pub fn height(&self) -> f64 {
        extent(&self.points).1
    }
}

fn extent(points: &[(f64, f64)]) -> (f64, f64) {
    let (mut umin, mut umax, mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(u, y) in points {
        umin = umin.min(u);
        umax = umax.max(u);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    (umax - umin, ymax - ymin)
}

/// Derived statistics of one cycle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopMetrics {
    /// Signed shoelace area; positive for counterclockwise traversal in the `(u, y)` plane.
    pub area: f64,
    pub width: f64,
    pub height: f64,
    /// `|area| / (width · height)`, or 0 for a degenerate curve.
    pub normalized_area: f64,
    pub closure_gap: f64,
}

impl LoopMetrics {
    pub fn of(curve: &IOCurve) -> Self {
        let area = loop_area(curve);
        let (width, height) = extent(&curve.points);
        let normalized_area = if curve.degenerate { 0.0 } else { area.abs() / (width * height) };
        LoopMetrics { area, width, height, normalized_area, closure_gap: curve.closure_gap }
    }

    /// Closure gap relative to the output range.
    pub fn relative_closure_gap(&self) -> f64 {
        if self.height > 0.0 {
            self.closure_gap / self.height
        } else if self.closure_gap == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Cycle number `discard_periods` (0-based), i.e. the first period after the
/// discarded transient. When the trajectory spans exactly
/// `discard_periods + 1` periods this is the final one.
pub fn extract_cycle(traj: &Trajectory, omega: f64, discard_periods: usize) -> Result<IOCurve> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidArgument(format!("omega must be positive, got {omega}")));
    }
    let period = std::f64::consts::TAU / omega;
    let start = discard_periods as f64 * period;
    let stop = start + period;
    let eps = 1e-9 * stop.max(1.0);
    let times = traj.times();
    let available = times.last().copied().unwrap_or(0.0) - times.first().copied().unwrap_or(0.0);
    if times.is_empty() || *times.last().unwrap() < stop - eps {
        return Err(Error::InsufficientTrajectory { available, required: stop });
    }
    let lo = times.partition_point(|&t| t < start - eps);
    let hi = times.partition_point(|&t| t <= stop + eps);
    let points: Vec<(f64, f64)> = traj.inputs()[lo..hi].iter().copied().zip(traj.samples()[lo..hi].iter().copied()).collect();
    if points.len() < MIN_CYCLE_POINTS {
        return Err(Error::InvalidArgument(format!(
            "cycle has {} samples, need at least {MIN_CYCLE_POINTS}",
            points.len()
        )));
    }
    IOCurve::new(points, omega)
}

/// Shoelace area `−½ Σ (u_{i+1} − u_i)(y_{i+1} + y_i)` of the closed polygon,
/// joining the last point back to the first. Counterclockwise loops in the
/// `(u, y)` plane come out positive.
pub fn loop_area(curve: &IOCurve) -> f64 {
    polygon_area(&curve.points)
}

// The terms are summed with correct rounding, so the result does not depend
// on traversal order and reversing a curve negates its area bit for bit.
pub(crate) fn polygon_area(points: &[(f64, f64)]) -> f64 {
    let n = points.len();
    let terms: Vec<f64> = (0..n)
        .map(|i| {
            let (u0, y0) = points[i];
            let (u1, y1) = points[(i + 1) % n];
            (u1 - u0) * (y1 + y0)
        })
        .collect();
    -0.5 * correctly_rounded_sum(&terms)
}

// Shewchuk's non-overlapping partials with a final round-half-even fix-up.
fn correctly_rounded_sum(values: &[f64]) -> f64 {
    let mut partials: Vec<f64> = Vec::new();
    for &v in values {
        let mut x = v;
        let mut kept = 0;
        for j in 0..partials.len() {
            let mut y = partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                partials[kept] = lo;
                kept += 1;
            }
            x = hi;
        }
        partials.truncate(kept);
        partials.push(x);
    }
    let Some(mut n) = partials.len().checked_sub(1) else {
        return 0.0;
    };
    let mut hi = partials[n];
    let mut lo = 0.0;
    while n > 0 {
        let x = hi;
        n -= 1;
        let y = partials[n];
        hi = x + y;
        lo = y - (hi - x);
        if lo != 0.0 {
            break;
        }
    }
    if n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0)) {
        let y = lo * 2.0;
        let x = hi + y;
        if y == x - hi {
            hi = x;
        }
    }
    hi
}

/// Outcome of a frequency sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    LoopPersists,
    LoopVanishes,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::LoopPersists => "loop-persists",
            Verdict::LoopVanishes => "loop-vanishes",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Thresholds turning loop metrics into a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPolicy {
    /// Minimum normalized area at the lowest frequency for a persistent loop.
    pub persistence_threshold: f64,
    /// Normalized area at the lowest frequency below which the loop has vanished.
    pub vanish_threshold: f64,
    /// A persistent loop must also keep at least this fraction of the
    /// absolute area it had at the highest frequency.
    pub vanish_ratio: f64,
}

impl Default for SweepPolicy {
    fn default() -> Self {
        SweepPolicy { persistence_threshold: 0.05, vanish_threshold: 0.01, vanish_ratio: 0.1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub omega: f64,
    pub metrics: LoopMetrics,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub entries: Vec<SweepEntry>,
    pub verdict: Verdict,
    #[serde(skip)]
    pub curves: Vec<IOCurve>,
}

/// Anything that can produce a steady-state cycle at a given frequency.
pub trait CycleRunner: Sync {
    fn cycle(&self, omega: f64) -> Result<IOCurve>;
}

impl<F> CycleRunner for F
where
    F: Fn(f64) -> Result<IOCurve> + Sync,
{
    fn cycle(&self, omega: f64) -> Result<IOCurve> {
        self(omega)
    }
}

/// Verdict from per-frequency metrics ordered by decreasing frequency.
pub fn classify(entries: &[SweepEntry], policy: &SweepPolicy) -> Verdict {
    let (Some(first), Some(last)) = (entries.first(), entries.last()) else {
        return Verdict::Inconclusive;
    };
    let low = last.metrics;
    let keeps_area = low.area.abs() >= policy.vanish_ratio * first.metrics.area.abs();
    if low.normalized_area >= policy.persistence_threshold && keeps_area {
        return Verdict::LoopPersists;
    }
    let decreasing = entries.windows(2).all(|w| w[1].metrics.normalized_area < w[0].metrics.normalized_area);
    if decreasing && low.normalized_area < policy.vanish_threshold {
        Verdict::LoopVanishes
    } else {
        Verdict::Inconclusive
    }
}

fn check_omegas(omegas: &[f64]) -> Result<()> {
    if omegas.len() < 3 {
        return Err(Error::InvalidArgument(format!("a sweep needs at least 3 frequencies, got {}", omegas.len())));
    }
    if omegas.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::InvalidArgument("sweep frequencies must be positive".into()));
    }
    if omegas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("sweep frequencies must be strictly decreasing".into()));
    }
    Ok(())
}

/// Runs `runner` at every frequency, one after another.
pub fn sweep(runner: &dyn CycleRunner, omegas: &[f64], policy: &SweepPolicy) -> Result<SweepResult> {
    sweep_parallel(runner, omegas, policy, 1)
}

/// Like [`sweep`], spreading frequencies over up to `jobs` threads. Results
/// are assembled in frequency order regardless of completion order.
pub fn sweep_parallel(runner: &dyn CycleRunner, omegas: &[f64], policy: &SweepPolicy, jobs: usize) -> Result<SweepResult> {
    check_omegas(omegas)?;
    let run = |omega: f64| runner.cycle(omega).map_err(|e| e.at_frequency(omega));
    let curves: Vec<Result<IOCurve>> = if jobs <= 1 {
        omegas.iter().map(|&w| run(w)).collect()
    } else {
        let slots: Vec<Mutex<Option<Result<IOCurve>>>> = omegas.iter().map(|_| Mutex::new(None)).collect();
        let next = AtomicUsize::new(0);
        std::thread::scope(|scope| {
            for _ in 0..jobs.min(omegas.len()) {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= omegas.len() {
                        break;
                    }
                    let result = run(omegas[i]);
                    *slots[i].lock().unwrap() = Some(result);
                });
            }
        });
        slots.into_iter().map(|s| s.into_inner().unwrap().expect("every slot is filled")).collect()
    };
    let curves = curves.into_iter().collect::<Result<Vec<_>>>()?;
    let entries: Vec<SweepEntry> = curves
        .iter()
        .map(|c| SweepEntry { omega: c.omega(), metrics: LoopMetrics::of(c) })
        .collect();
    let verdict = classify(&entries, policy);
    Ok(SweepResult { entries, verdict, curves })
}

fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let s = if len2 > 0.0 { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (p.0 - a.0 - s * dx).hypot(p.1 - a.1 - s * dy)
}

/// Largest distance from a vertex of `from` to the closed polyline `to`.
fn directed_distance(from: &[(f64, f64)], to: &[(f64, f64)]) -> f64 {
    let n = to.len();
    from.iter()
        .map(|&p| {
            (0..n)
                .map(|i| point_segment_distance(p, to[i], to[(i + 1) % n]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between two cycles in the `(u, y)` plane,
/// divided by the larger output range. Small values mean the loops coincide
/// as curves, whatever their time parameterization.
///
/// Each curve's vertices are measured against the other curve's polyline, so
/// fast transitions crossed by only a few samples are not mistaken for gaps.
pub fn rate_independence(a: &IOCurve, b: &IOCurve) -> Result<f64> {
    if a.is_degenerate() || b.is_degenerate() {
        return Err(Error::DegenerateCurve("rate independence needs loops with non-empty interior"));
    }
    let scale = a.height().max(b.height());
    let d = directed_distance(&a.points, &b.points).max(directed_distance(&b.points, &a.points));
    Ok(d / scale)
}

/// The built-in systems, with the parameters needed to describe their
/// unforced equilibria.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SystemDescriptor {
    SecondOrder(SecondOrderParams),
    LlNonlinear(LLParams),
    LlLinear(LLParams, LinearizationPoint),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquilibriumCount {
    One,
    FiniteMany(usize),
    Continuum,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumCensus {
    pub count: EquilibriumCount,
    /// Number of stable equilibria; `None` for a continuum of stable ones.
    pub stable: Option<usize>,
    /// Whether there are several stable equilibria.
    pub multiple_stable: bool,
    pub notes: Vec<String>,
}

/// Equilibrium structure and stability of an unforced built-in system.
pub fn equilibrium_census(system: &SystemDescriptor) -> Result<EquilibriumCensus> {
    match system {
        SystemDescriptor::SecondOrder(params) => second_order_census(params),
        SystemDescriptor::LlNonlinear(p) => {
            let at = LinearizationPoint::new(crate::vec3::Vec3::basis(1))?;
            let max_re = spectral_abscissa(p, &at)?;
            Ok(EquilibriumCensus {
                count: EquilibriumCount::Continuum,
                stable: None,
                multiple_stable: p.nu >= 0.0,
                notes: vec![
                    "equilibria are the constant unit vectors (the unit sphere)".into(),
                    "each is stable in L2; the L2 distance to the set is bounded in simulation".into(),
                    format!("largest real part of the discrete linearization at (1,0,0): {max_re:.3e}"),
                ],
            })
        }
        SystemDescriptor::LlLinear(p, at) => {
            let max_re = spectral_abscissa(p, at)?;
            let stable = max_re <= 1e-10;
            Ok(EquilibriumCensus {
                count: EquilibriumCount::Continuum,
                stable: if stable { None } else { Some(0) },
                multiple_stable: stable,
                notes: vec![
                    "every constant field is an equilibrium".into(),
                    format!("largest real part of the discrete operator spectrum: {max_re:.3e}"),
                ],
            })
        }
    }
}

fn spectral_abscissa(p: &LLParams, at: &LinearizationPoint) -> Result<f64> {
    let values = numeric_spectrum(&discretize_a(p, at))?;
    Ok(values.first().map_or(0.0, |v| v.re))
}

fn second_order_census(params: &SecondOrderParams) -> Result<EquilibriumCensus> {
    match equilibria(params) {
        Equilibria::Continuum => {
            let stability = classify_stability(&linearized_eigenvalues(params, &SecondOrderState::default())?);
            let stable = stability.is_stable();
            Ok(EquilibriumCensus {
                count: EquilibriumCount::Continuum,
                stable: if stable { None } else { Some(0) },
                multiple_stable: stable,
                notes: vec![format!("every (a, 0) is an equilibrium; linearization is {stability:?}")],
            })
        }
        Equilibria::Points(points) => {
            let mut notes = Vec::new();
            let mut stable = 0;
            for p in &points {
                let eig = linearized_eigenvalues(params, p)?;
                let s = classify_stability(&eig);
                if s.is_stable() {
                    stable += 1;
                }
                let tag = match s {
                    Stability::Asymptotic => "stable",
                    Stability::Marginal => "marginally stable",
                    Stability::Unstable => "unstable",
                };
                notes.push(format!("({}, {}): {tag}, eigenvalues {:.6} and {:.6}", p.y, p.ydot, eig[0], eig[1]));
            }
            let count = if points.len() == 1 { EquilibriumCount::One } else { EquilibriumCount::FiniteMany(points.len()) };
            Ok(EquilibriumCensus { count, stable: Some(stable), multiple_stable: stable >= 2, notes })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SpatialGrid;
    use crate::vec3::Vec3;
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    fn ellipse(a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
        (0..n)
            .map(|i| {
                let th = TAU * i as f64 / n as f64;
                (th.sin(), a * th.sin() + b * th.cos())
            })
            .collect()
    }

    #[test]
    fn unit_square_counterclockwise() {
        let c = IOCurve::new(vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], 1.0).unwrap();
        assert_eq!(loop_area(&c), 1.0);
        assert_eq!(loop_area(&c.reversed()), -1.0);
        assert_eq!(LoopMetrics::of(&c).normalized_area, 1.0);
    }

    #[test]
    fn back_and_forth_segment_has_no_area() {
        let pts: Vec<(f64, f64)> = (0..=10).chain((0..10).rev()).map(|i| (i as f64, 2.0 * i as f64)).collect();
        assert_eq!(loop_area(&IOCurve::new(pts, 1.0).unwrap()), 0.0);
    }

    #[test]
    fn ellipse_area_matches_analytic() {
        let (a, b) = (0.7, 0.3);
        let c = IOCurve::new(ellipse(a, b, 1000), 1.0).unwrap();
        let area = loop_area(&c).abs();
        assert!((area - PI * b).abs() <= 1e-3 * PI * b);
        let m = LoopMetrics::of(&c);
        assert!(m.normalized_area > 0.0 && m.normalized_area <= 1.0);
    }

    #[test]
    fn ellipse_area_converges_at_second_order() {
        let exact = PI * 0.4;
        let err = |n| (loop_area(&IOCurve::new(ellipse(1.0, 0.4, n), 1.0).unwrap()).abs() - exact).abs();
        let ratio = err(50) / err(100);
        assert!((3.5..4.5).contains(&ratio), "{ratio}");
    }

    #[test]
    fn circle_normalizes_to_quarter_pi() {
        let c = IOCurve::new(ellipse(0.0, 1.0, 4000), 1.0).unwrap();
        assert!((LoopMetrics::of(&c).normalized_area - PI / 4.0).abs() < 1e-5);
    }

    #[test]
    fn constant_output_is_degenerate() {
        let times: Vec<f64> = (0..=400).map(|i| i as f64 * TAU / 200.0).collect();
        let inputs: Vec<f64> = times.iter().map(|t| t.sin()).collect();
        let traj = Trajectory::new(times, vec![1.0; 401], inputs).unwrap();
        let c = extract_cycle(&traj, 1.0, 1).unwrap();
        assert!(c.is_degenerate());
        let m = LoopMetrics::of(&c);
        assert_eq!(m.normalized_area, 0.0);
        assert_eq!(m.height, 0.0);
    }

    #[test]
    fn extract_phase_lag_cycle() {
        let phi = 0.4;
        let times: Vec<f64> = (0..=600).map(|i| i as f64 * TAU / 200.0).collect();
        let inputs: Vec<f64> = times.iter().map(|t| t.sin()).collect();
        let outputs: Vec<f64> = times.iter().map(|t| (t - phi).sin()).collect();
        let traj = Trajectory::new(times, outputs, inputs).unwrap();
        let c = extract_cycle(&traj, 1.0, 2).unwrap();
        assert_eq!(c.points().len(), 201);
        assert!(c.closure_gap() < 1e-12);
        let m = LoopMetrics::of(&c);
        assert!((m.area.abs() - PI * phi.sin()).abs() < 1e-3);
        assert!(extract_cycle(&traj, 1.0, 3).is_err());
    }

    #[test]
    fn extract_rejects_undersampled_cycles() {
        let times: Vec<f64> = (0..=60).map(|i| i as f64 * TAU / 20.0).collect();
        let traj = Trajectory::new(times.clone(), times.iter().map(|t| t.cos()).collect(), times.iter().map(|t| t.sin()).collect()).unwrap();
        assert!(extract_cycle(&traj, 1.0, 1).is_err());
    }

    fn synthetic(normalized: &[f64]) -> Vec<SweepEntry> {
        normalized
            .iter()
            .enumerate()
            .map(|(i, &na)| SweepEntry {
                omega: 10f64.powi(-(i as i32)),
                metrics: LoopMetrics { area: na * 4.0, width: 2.0, height: 2.0, normalized_area: na, closure_gap: 0.0 },
            })
            .collect()
    }

    #[test]
    fn verdict_rules() {
        let policy = SweepPolicy::default();
        assert_eq!(classify(&synthetic(&[0.78, 0.6, 0.1, 0.005]), &policy), Verdict::LoopVanishes);
        assert_eq!(classify(&synthetic(&[0.78, 0.6, 0.1, 0.0118]), &policy), Verdict::Inconclusive);
        assert_eq!(classify(&synthetic(&[0.2, 0.4, 0.5, 0.6]), &policy), Verdict::LoopPersists);
        assert_eq!(classify(&synthetic(&[0.78, 0.5, 0.2, 0.06]), &policy), Verdict::Inconclusive);
        assert_eq!(classify(&synthetic(&[0.3, 0.005, 0.2, 0.001]), &policy), Verdict::Inconclusive);
    }

    #[test]
    fn sweep_needs_decreasing_frequencies() {
        let runner = |w: f64| IOCurve::new(ellipse(0.0, w, 200), w);
        assert!(sweep(&runner, &[1.0, 0.1], &SweepPolicy::default()).is_err());
        assert!(sweep(&runner, &[1.0, 0.1, 0.5], &SweepPolicy::default()).is_err());
        let r = sweep(&runner, &[1.0, 0.1, 0.01], &SweepPolicy::default()).unwrap();
        assert_eq!(r.entries.len(), 3);
    }

    #[test]
    fn parallel_sweep_keeps_order_and_tags_errors() {
        let runner = |w: f64| {
            if w == 0.25 {
                Err(Error::BlowUp { time: 1.0 })
            } else {
                IOCurve::new(ellipse(0.0, 1.0 + w, 300), w)
            }
        };
        let omegas = [1.0, 0.5, 0.3, 0.2, 0.1];
        let seq = sweep(&runner, &omegas, &SweepPolicy::default()).unwrap();
        let par = sweep_parallel(&runner, &omegas, &SweepPolicy::default(), 4).unwrap();
        assert_eq!(seq, par);
        match sweep_parallel(&runner, &[1.0, 0.5, 0.25], &SweepPolicy::default(), 3) {
            Err(Error::AtFrequency { omega, .. }) => assert_eq!(omega, 0.25),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn identical_curves_are_rate_independent() {
        let c = IOCurve::new(ellipse(0.3, 0.5, 500), 1.0).unwrap();
        assert_eq!(rate_independence(&c, &c).unwrap(), 0.0);
    }

    #[test]
    fn shrinking_loops_are_far_apart() {
        let a = IOCurve::new(ellipse(0.0, 1.0, 500), 1.0).unwrap();
        let b = IOCurve::new(ellipse(0.0, 0.1, 500), 0.1).unwrap();
        assert!(rate_independence(&a, &b).unwrap() > 0.1);
    }

    #[test]
    fn degenerate_curves_are_rejected() {
        let flat = IOCurve::new((0..200).map(|i| ((i as f64).sin(), 1.0)).collect(), 1.0).unwrap();
        let good = IOCurve::new(ellipse(0.0, 1.0, 200), 1.0).unwrap();
        assert!(rate_independence(&flat, &good).is_err());
    }

    #[test]
    fn census_of_second_order_exemplars() {
        let lin = equilibrium_census(&SystemDescriptor::SecondOrder(SecondOrderParams::linear(15.0, 1.0))).unwrap();
        assert_eq!(lin.count, EquilibriumCount::One);
        assert_eq!(lin.stable, Some(1));
        assert!(!lin.multiple_stable);

        let cubic = equilibrium_census(&SystemDescriptor::SecondOrder(SecondOrderParams::cubic(15.0, -1.0))).unwrap();
        assert_eq!(cubic.count, EquilibriumCount::FiniteMany(3));
        assert_eq!(cubic.stable, Some(2));
        assert!(cubic.multiple_stable);

        let chain = equilibrium_census(&SystemDescriptor::SecondOrder(SecondOrderParams::linear(15.0, 0.0))).unwrap();
        assert_eq!(chain.count, EquilibriumCount::Continuum);
        assert!(chain.multiple_stable);
    }

    #[test]
    fn census_of_landau_lifshitz_systems() {
        let p = LLParams::new(0.02, SpatialGrid::new(1.0, 21).unwrap()).unwrap();
        let nl = equilibrium_census(&SystemDescriptor::LlNonlinear(p)).unwrap();
        assert_eq!(nl.count, EquilibriumCount::Continuum);
        assert!(nl.multiple_stable);
        let at = LinearizationPoint::new(Vec3::basis(1)).unwrap();
        let lin = equilibrium_census(&SystemDescriptor::LlLinear(p, at)).unwrap();
        assert_eq!(lin.count, EquilibriumCount::Continuum);
        assert!(lin.multiple_stable);
    }

    #[test]
    fn exact_sum_survives_cancellation() {
        assert_eq!(correctly_rounded_sum(&[1e100, 1.0, -1e100]), 1.0);
        assert_eq!(correctly_rounded_sum(&[0.1; 10]), 1.0);
        assert_eq!(correctly_rounded_sum(&[]), 0.0);
    }

    proptest! {
        #[test]
        fn exact_sum_ignores_order(mut xs in prop::collection::vec(-1e6f64..1e6, 0..50)) {
            let forward = correctly_rounded_sum(&xs);
            xs.reverse();
            prop_assert_eq!(correctly_rounded_sum(&xs), forward);
        }

        #[test]
        fn reversing_negates_area(pts in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 3..60)) {
            let c = IOCurve::new(pts, 1.0).unwrap();
            prop_assert_eq!(loop_area(&c.reversed()), -loop_area(&c));
        }

        #[test]
        fn normalized_area_within_unit_interval(pts in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 3..40)) {
            let m = LoopMetrics::of(&IOCurve::new(pts, 1.0).unwrap());
            prop_assert!(m.normalized_area >= 0.0);
            // self-intersecting polygons can count regions twice, simple ones cannot exceed the box
            prop_assert!(m.normalized_area.is_finite());
        }
    }
}
