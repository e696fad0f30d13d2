//! Fixed-step transient simulation of the inverter -> LC filter ->
//! transformer plant, scenario orchestration, and metric extraction.
//!
//! Integration is classical fourth-order Runge-Kutta at a fixed step, which
//! keeps every run bit-for-bit deterministic. A scenario executes up to
//! three phases in order, each starting from the flux the previous phase
//! left behind:
//!
//! 1. optional DC pre-fluxing (establishes a residual flux),
//! 2. optional demagnetization sequence,
//! 3. the selected magnetization profile, recorded from its local t = 0.
//!
//! Only the profile phase is recorded and only it feeds the metrics; the
//! pre-phases report their durations.

use crate::demag::{DemagController, DemagState, Prefluxing};
use crate::error::SimError;
use crate::filter::{filter_derivative, FilterParams, FilterState};
use crate::frames::{abc_to_alphabeta, alphabeta_to_abc, AlphaBeta, ThreePhase};
use crate::profiles::{flux_dc_offset, MagnetizationProfile, SystemParams};
use crate::transformer::{state_derivative, CoreParams, TransformerState};

/// Everything needed to execute one start-up run.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub params: SystemParams,
    pub core: CoreParams,
    /// `None` connects the profile voltage directly to the transformer,
    /// isolating inrush from filter surge effects.
    pub filter: Option<FilterParams>,
    pub profile: MagnetizationProfile,
    /// Residual flux present before any phase runs.
    pub residual: AlphaBeta,
    pub prefluxing: Option<Prefluxing>,
    pub demag_first: bool,
    pub demag: crate::demag::DemagParams,
    /// Integration step (s).
    pub dt: f64,
    /// Recorded horizon of the profile phase (s).
    pub t_end: f64,
    /// Hold the inverter command at the last control tick (1/f_sw).
    pub control_zoh: bool,
}

impl Scenario {
    /// Bench-parameter scenario: 5 kVA system, default core calibration,
    /// LC filter attached, 1 us step over a 100 ms horizon.
    pub fn bench(profile: MagnetizationProfile) -> Self {
        let params = SystemParams::default_5kva();
        let core = CoreParams::default_for(&params);
        Self {
            params,
            core,
            filter: Some(FilterParams::default_5kva()),
            profile,
            residual: AlphaBeta::ZERO,
            prefluxing: None,
            demag_first: false,
            demag: crate::demag::DemagParams::default(),
            dt: 1e-6,
            t_end: 0.1,
            control_zoh: false,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        self.params.validate()?;
        self.core.validate()?;
        if let Some(f) = &self.filter {
            f.validate()?;
        }
        self.demag.validate()?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(SimError::InvalidScenario(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        // The 1.2 kHz filter resonance needs ~400 steps per period.
        if self.filter.is_some() && self.dt > 2e-6 {
            return Err(SimError::InvalidScenario(format!(
                "dt = {} s too coarse for the LC filter; need dt <= 2e-6 s",
                self.dt
            )));
        }
        if self.t_end < 5.0 * self.params.t0 {
            return Err(SimError::InvalidScenario(format!(
                "t_end = {} s must cover at least five fundamental periods ({} s)",
                self.t_end,
                5.0 * self.params.t0
            )));
        }
        if let Some(pf) = &self.prefluxing {
            if !(pf.duration_s >= 0.0 && pf.duration_s.is_finite() && pf.pattern_v.is_finite()) {
                return Err(SimError::InvalidScenario(
                    "prefluxing pattern/duration must be finite, duration non-negative".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Joint integration state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantState {
    pub transformer: TransformerState,
    pub filter: Option<FilterState>,
}

impl PlantState {
    pub fn at_rest(transformer: TransformerState, has_filter: bool) -> Self {
        Self {
            transformer,
            filter: has_filter.then(FilterState::default),
        }
    }

    fn is_finite(&self) -> bool {
        self.transformer.lambda.is_finite()
            && self
                .filter
                .map_or(true, |f| f.i_inv.is_finite() && f.v_c.is_finite())
    }
}

struct Deriv {
    dlambda: ThreePhase,
    dfilter: Option<(ThreePhase, ThreePhase)>,
}

fn derivative(
    core: &CoreParams,
    fp: Option<&FilterParams>,
    s: &PlantState,
    v_inv: ThreePhase,
) -> Deriv {
    match (fp, &s.filter) {
        (Some(fp), Some(fs)) => {
            let v_pcc = fs.v_c;
            let (dlambda, i_pcc) = state_derivative(core, &s.transformer, v_pcc);
            let dfilter = filter_derivative(fp, fs, v_inv, i_pcc);
            Deriv { dlambda, dfilter: Some(dfilter) }
        }
        _ => {
            let (dlambda, _) = state_derivative(core, &s.transformer, v_inv);
            Deriv { dlambda, dfilter: None }
        }
    }
}

fn add_scaled(s: &PlantState, d: &Deriv, h: f64) -> PlantState {
    PlantState {
        transformer: TransformerState {
            lambda: s.transformer.lambda + d.dlambda * h,
        },
        filter: match (&s.filter, &d.dfilter) {
            (Some(fs), Some((di, dv))) => Some(FilterState {
                i_inv: fs.i_inv + *di * h,
                v_c: fs.v_c + *dv * h,
            }),
            _ => s.filter,
        },
    }
}

/// One classical RK4 step with the inverter voltage evaluated per stage.
fn rk4_step(
    core: &CoreParams,
    fp: Option<&FilterParams>,
    s: &PlantState,
    t: f64,
    dt: f64,
    drive: impl Fn(f64) -> ThreePhase,
) -> PlantState {
    let half = dt / 2.0;
    let k1 = derivative(core, fp, s, drive(t));
    let k2 = derivative(core, fp, &add_scaled(s, &k1, half), drive(t + half));
    let k3 = derivative(core, fp, &add_scaled(s, &k2, half), drive(t + half));
    let k4 = derivative(core, fp, &add_scaled(s, &k3, dt), drive(t + dt));
    let combined = Deriv {
        dlambda: k1.dlambda + k2.dlambda * 2.0 + k3.dlambda * 2.0 + k4.dlambda,
        dfilter: k1.dfilter.map(|(di1, dv1)| {
            let (di2, dv2) = k2.dfilter.unwrap();
            let (di3, dv3) = k3.dfilter.unwrap();
            let (di4, dv4) = k4.dfilter.unwrap();
            (
                di1 + di2 * 2.0 + di3 * 2.0 + di4,
                dv1 + dv2 * 2.0 + dv3 * 2.0 + dv4,
            )
        }),
    };
    add_scaled(s, &combined, dt / 6.0)
}

fn check_finite(s: &PlantState, t: f64) -> Result<(), SimError> {
    if s.is_finite() {
        Ok(())
    } else {
        Err(SimError::NumericalDivergence { t_s: t })
    }
}

/// Advances the scenario's plant by one step under the profile drive.
pub fn step(sc: &Scenario, state: &PlantState, t: f64, dt: f64) -> Result<PlantState, SimError> {
    let drive = profile_drive(sc);
    let next = rk4_step(&sc.core, sc.filter.as_ref(), state, t, dt, drive);
    check_finite(&next, t + dt)?;
    Ok(next)
}

fn profile_drive(sc: &Scenario) -> impl Fn(f64) -> ThreePhase + '_ {
    let f_sw = sc.params.f_sw;
    let zoh = sc.control_zoh;
    move |t: f64| {
        let t_cmd = if zoh { (t * f_sw).floor() / f_sw } else { t };
        alphabeta_to_abc(sc.profile.voltage(&sc.params, t_cmd))
    }
}

/// Uniformly sampled run record. All vectors share one time grid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Series {
    pub t: Vec<f64>,
    pub v_inv: Vec<ThreePhase>,
    pub v_pcc: Vec<ThreePhase>,
    pub i_inv: Vec<ThreePhase>,
    pub i_pcc: Vec<ThreePhase>,
    pub lambda: Vec<ThreePhase>,
    pub lambda_ab: Vec<AlphaBeta>,
}

impl Series {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    fn with_capacity(n: usize) -> Self {
        Self {
            t: Vec::with_capacity(n),
            v_inv: Vec::with_capacity(n),
            v_pcc: Vec::with_capacity(n),
            i_inv: Vec::with_capacity(n),
            i_pcc: Vec::with_capacity(n),
            lambda: Vec::with_capacity(n),
            lambda_ab: Vec::with_capacity(n),
        }
    }

    /// Flux trajectory as (t, alpha-beta) pairs.
    pub fn flux_trajectory(&self) -> Vec<(f64, AlphaBeta)> {
        self.t.iter().copied().zip(self.lambda_ab.iter().copied()).collect()
    }
}

/// Summary figures extracted from one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    /// Profile tag the run used.
    pub method: &'static str,
    /// Largest per-phase |i_pcc| over the run, on the rated-peak base.
    pub peak_i_pcc_pu: f64,
    /// Largest per-phase |i_inv| over the run, on the rated-peak base.
    pub peak_i_inv_pu: f64,
    /// Magnitude of the trailing-cycle mean flux vector (Wb).
    pub flux_dc_offset_wb: f64,
    /// `None` when the start-up criterion never holds.
    pub startup_time_s: Option<f64>,
}

/// One completed run: record, metrics, and pre-phase bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub series: Series,
    pub metrics: Metrics,
    /// Duration of the demagnetization sequence, when one ran.
    pub demag_duration_s: Option<f64>,
    /// Flux at the profile's local t = 0 (after pre-phases).
    pub flux_at_start: AlphaBeta,
}

/// Executes the scenario's phases and records the profile phase.
pub fn run(sc: &Scenario) -> Result<SimResult, SimError> {
    sc.validate()?;
    let mut tr = TransformerState::from_residual(sc.residual, &sc.params)?;

    if let Some(pf) = &sc.prefluxing {
        tr = run_preflux(sc, tr, pf)?;
    }

    let mut demag_duration_s = None;
    if sc.demag_first {
        let outcome = run_demag(sc, tr)?;
        tr = outcome.0;
        demag_duration_s = Some(outcome.1);
    }

    let flux_at_start = abc_to_alphabeta(tr.lambda);
    let series = record_profile_phase(sc, tr)?;
    let metrics = compute_metrics(&series, &sc.params, &sc.profile)?;

    Ok(SimResult { series, metrics, demag_duration_s, flux_at_start })
}

fn record_profile_phase(sc: &Scenario, start: TransformerState) -> Result<Series, SimError> {
    let core = &sc.core;
    let fp = sc.filter.as_ref();
    let drive = profile_drive(sc);
    let dt = sc.dt;
    let n = (sc.t_end / dt).round() as usize;

    let mut state = PlantState::at_rest(start, fp.is_some());
    let mut series = Series::with_capacity(n + 1);

    for i in 0..=n {
        let t = i as f64 * dt;
        let v_inv = drive(t);
        let v_pcc = match &state.filter {
            Some(fs) => fs.v_c,
            None => v_inv,
        };
        let (_, i_pcc) = state_derivative(core, &state.transformer, v_pcc);
        let i_inv = match &state.filter {
            Some(fs) => fs.i_inv,
            None => i_pcc,
        };
        series.t.push(t);
        series.v_inv.push(v_inv);
        series.v_pcc.push(v_pcc);
        series.i_inv.push(i_inv);
        series.i_pcc.push(i_pcc);
        series.lambda.push(state.transformer.lambda);
        series.lambda_ab.push(abc_to_alphabeta(state.transformer.lambda));

        if i < n {
            state = rk4_step(core, fp, &state, t, dt, &drive);
            check_finite(&state, (i + 1) as f64 * dt)?;
        }
    }
    Ok(series)
}

// The pre-start phases drive the transformer directly even when the
// scenario models the LC filter. Their excitation is quasi-DC, where the
// filter is transparent, and the hardware current loop that would damp the
// filter at switching rate has no counterpart in an average-value model;
// keeping the filter in would trip the saturation thresholds on resonant
// ringing instead of core state.

fn run_preflux(
    sc: &Scenario,
    start: TransformerState,
    pf: &Prefluxing,
) -> Result<TransformerState, SimError> {
    let dt = sc.dt;
    let steps = (pf.duration_s / dt).round() as usize;
    let mut state = PlantState::at_rest(start, false);
    for i in 0..steps {
        let t = i as f64 * dt;
        state = rk4_step(&sc.core, None, &state, t, dt, |_| pf.pattern_v);
        check_finite(&state, t + dt)?;
    }
    Ok(state.transformer)
}

fn run_demag(sc: &Scenario, start: TransformerState) -> Result<(TransformerState, f64), SimError> {
    let core = &sc.core;
    let dt = sc.dt;
    // Pole placement against the inductance the loop sees once the core
    // saturates, which is where the threshold detection happens.
    let ctrl = DemagController::new(sc.demag, core.l_sat, core.r_wind, sc.params.v_dc);

    let mut ds = DemagState::new();
    let mut state = PlantState::at_rest(start, false);
    let mut last_cmd = ThreePhase::ZERO;
    let mut t = 0.0;
    while !ds.is_done() {
        let i_meas = state_derivative(core, &state.transformer, last_cmd).1;
        let (cmd, next_ds) = ctrl.step(&ds, i_meas, dt)?;
        ds = next_ds;
        if ds.is_done() {
            break;
        }
        state = rk4_step(core, None, &state, t, dt, |_| cmd);
        t += dt;
        check_finite(&state, t)?;
        last_cmd = cmd;
    }
    Ok((state.transformer, t))
}

/// Extracts the summary metrics from a recorded series.
///
/// Start-up is declared at the earliest instant, no earlier than the
/// profile's own settling time (`t_d`, `t_a`, or 0), from which the PCC
/// voltage-vector magnitude stays within +/-5% of rated for half a
/// fundamental period. The profile clamp makes the reported time the
/// design value whenever the measured voltage is already clean.
pub fn compute_metrics(
    series: &Series,
    p: &SystemParams,
    profile: &MagnetizationProfile,
) -> Result<Metrics, SimError> {
    let base = p.i_rated_peak;
    let mut peak_i_pcc = 0.0f64;
    let mut peak_i_inv = 0.0f64;
    for i in 0..series.len() {
        peak_i_pcc = peak_i_pcc.max(series.i_pcc[i].max_abs());
        peak_i_inv = peak_i_inv.max(series.i_inv[i].max_abs());
    }

    let offset = flux_dc_offset(&series.flux_trajectory(), p)?;

    Ok(Metrics {
        method: profile.tag(),
        peak_i_pcc_pu: peak_i_pcc / base,
        peak_i_inv_pu: peak_i_inv / base,
        flux_dc_offset_wb: offset.magnitude(),
        startup_time_s: detect_startup(series, p, profile.steady_state_start()),
    })
}

fn detect_startup(series: &Series, p: &SystemParams, t_steady: f64) -> Option<f64> {
    let n = series.len();
    if n < 2 {
        return None;
    }
    let dt = series.t[1] - series.t[0];
    let hold = p.t0 / 2.0;
    let tol = 0.05 * p.v_hat;

    let in_band: Vec<bool> = series
        .v_pcc
        .iter()
        .map(|&v| (abc_to_alphabeta(v).magnitude() - p.v_hat).abs() <= tol)
        .collect();
    // next_violation[i]: first out-of-band index at or after i (n if none).
    let mut next_violation = vec![n; n];
    let mut nv = n;
    for i in (0..n).rev() {
        if !in_band[i] {
            nv = i;
        }
        next_violation[i] = nv;
    }
    let covers = |i: usize| series.t[n - 1] - series.t[i] >= hold - 0.5 * dt;
    let window_ok = |i: usize| {
        covers(i)
            && (next_violation[i] == n || series.t[next_violation[i]] - series.t[i] > hold)
    };

    let i0 = series.t.iter().position(|&t| t >= t_steady - 0.5 * dt)?;
    let mut found = None;
    for i in i0..n {
        if window_ok(i) {
            found = Some(i);
            break;
        }
        if !covers(i) {
            break;
        }
    }
    let i_star = found?;
    if i_star == i0 && (i0 == 0 || window_ok(i0 - 1)) {
        // The band held before the profile finished settling; the settling
        // time itself is the binding constraint.
        Some(t_steady.max(series.t[0]))
    } else {
        Some(series.t[i_star])
    }
}

/// Mean flux vector over each successive full fundamental cycle.
pub fn cycle_offsets(series: &Series, p: &SystemParams) -> Vec<AlphaBeta> {
    if series.len() < 2 {
        return Vec::new();
    }
    let dt = series.t[1] - series.t[0];
    let n = (p.t0 / dt).round() as usize;
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut k = 0;
    while (k + 1) * n < series.len() {
        let mut acc = AlphaBeta::ZERO;
        for i in (k * n + 1)..=((k + 1) * n) {
            acc = acc + series.lambda_ab[i];
        }
        out.push(acc * (1.0 / n as f64));
        k += 1;
    }
    out
}

/// Runs every scenario and collects results in input order.
///
/// With the `parallel` feature (default) the batch fans out over rayon;
/// `BLACKSTART_THREADS` caps the worker count. Results are identical to
/// the sequential path either way.
#[cfg(feature = "parallel")]
pub fn run_batch(scenarios: &[Scenario]) -> Vec<Result<SimResult, SimError>> {
    use rayon::prelude::*;
    let runner = || scenarios.par_iter().map(run).collect();
    let cap = std::env::var("BLACKSTART_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t > 0);
    match cap.and_then(|t| rayon::ThreadPoolBuilder::new().num_threads(t).build().ok()) {
        Some(pool) => pool.install(runner),
        None => runner(),
    }
}

/// Sequential fallback when built without the `parallel` feature.
#[cfg(not(feature = "parallel"))]
pub fn run_batch(scenarios: &[Scenario]) -> Vec<Result<SimResult, SimError>> {
    run_batch_sequential(scenarios)
}

/// Always-sequential batch runner; the benchmark baseline.
pub fn run_batch_sequential(scenarios: &[Scenario]) -> Vec<Result<SimResult, SimError>> {
    scenarios.iter().map(run).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::abc_to_alphabeta;

    fn lossless_nofilter(profile: MagnetizationProfile) -> Scenario {
        let mut sc = Scenario::bench(profile);
        sc.filter = None;
        sc.core = sc.core.lossless();
        sc
    }

    #[test]
    fn zero_profile_stays_at_rest() {
        let mut sc = Scenario::bench(MagnetizationProfile::Off);
        sc.filter = None;
        sc.dt = 1e-5;
        let res = run(&sc).unwrap();
        assert!(res.series.lambda.iter().all(|l| l.max_abs() == 0.0));
        assert!(res.series.i_pcc.iter().all(|i| i.max_abs() == 0.0));
        assert_eq!(res.metrics.startup_time_s, None);
    }

    #[test]
    fn lossless_hard_matches_analytic_flux() {
        let sc = lossless_nofilter(MagnetizationProfile::Hard);
        let res = run(&sc).unwrap();
        let p = &sc.params;
        let mut worst = 0.0f64;
        for (i, &t) in res.series.t.iter().enumerate() {
            let want = sc.profile.analytic_flux(p, t);
            let got = res.series.lambda_ab[i];
            worst = worst.max((got - want).magnitude());
        }
        assert!(worst < 0.005 * p.lambda0, "worst error {worst}");
    }

    #[test]
    fn step_halving_converges() {
        // Final-state change under dt -> dt/2 stays below 1e-6 relative.
        let sc = lossless_nofilter(MagnetizationProfile::Hard);
        let horizon = 0.02;
        let run_raw = |dt: f64| {
            let mut state = PlantState::at_rest(TransformerState::default(), false);
            let n = (horizon / dt).round() as usize;
            for i in 0..n {
                state = step(&sc, &state, i as f64 * dt, dt).unwrap();
            }
            state.transformer.lambda
        };
        let coarse = run_raw(1e-6);
        let fine = run_raw(5e-7);
        let scale = coarse.max_abs().max(fine.max_abs());
        assert!((coarse - fine).max_abs() / scale < 1e-6);
    }

    #[test]
    fn no_filter_pcc_voltage_equals_command() {
        let mut sc = Scenario::bench(MagnetizationProfile::spiral(&SystemParams::default_5kva()));
        sc.filter = None;
        sc.dt = 1e-5;
        let res = run(&sc).unwrap();
        assert_eq!(res.series.v_pcc, res.series.v_inv);
    }

    #[test]
    fn reruns_are_bit_identical() {
        let sc = Scenario::bench(MagnetizationProfile::ultra_fast(&SystemParams::default_5kva()));
        let a = run(&sc).unwrap();
        let b = run(&sc).unwrap();
        assert_eq!(a.series, b.series);
        assert_eq!(a.metrics, b.metrics);
    }

    #[test]
    fn batch_matches_sequential() {
        let p = SystemParams::default_5kva();
        let mut scenarios = Vec::new();
        for profile in [
            MagnetizationProfile::Hard,
            MagnetizationProfile::ultra_fast(&p),
            MagnetizationProfile::spiral(&p),
        ] {
            let mut sc = Scenario::bench(profile);
            sc.filter = None;
            sc.dt = 1e-5;
            sc.t_end = 5.0 * p.t0;
            scenarios.push(sc);
        }
        let par: Vec<_> = run_batch(&scenarios).into_iter().map(Result::unwrap).collect();
        let seq: Vec<_> = run_batch_sequential(&scenarios)
            .into_iter()
            .map(Result::unwrap)
            .collect();
        assert_eq!(par, seq);
    }

    #[test]
    fn metrics_peak_normalization() {
        // A synthetic series whose largest current sample is exactly the
        // rated peak must report 1.0 pu.
        let p = SystemParams::default_5kva();
        let dt = 1e-4;
        let n = (2.0 * p.t0 / dt).round() as usize;
        let mut series = Series::with_capacity(n + 1);
        for i in 0..=n {
            let t = i as f64 * dt;
            series.t.push(t);
            series.v_inv.push(ThreePhase::ZERO);
            series.v_pcc.push(ThreePhase::ZERO);
            let i_a = if i == n / 2 { 10.2 } else { 0.0 };
            series.i_pcc.push(ThreePhase::new(i_a, 0.0, -i_a));
            series.i_inv.push(ThreePhase::ZERO);
            series.lambda.push(ThreePhase::ZERO);
            series.lambda_ab.push(AlphaBeta::ZERO);
        }
        let m = compute_metrics(&series, &p, &MagnetizationProfile::Off).unwrap();
        assert_eq!(m.peak_i_pcc_pu, 1.0);
        assert_eq!(m.startup_time_s, None, "all-zero voltage never starts up");
    }

    #[test]
    fn startup_of_analytic_ultrafast_is_the_hold_time() {
        // Ideal profile series (voltage applied straight to the PCC):
        // the detector clamp reports exactly t_d.
        let p = SystemParams::default_5kva();
        let profile = MagnetizationProfile::ultra_fast(&p);
        let dt = 1e-6_f64;
        let n = (0.1 / dt).round() as usize;
        let mut series = Series::with_capacity(n + 1);
        for i in 0..=n {
            let t = i as f64 * dt;
            let v = alphabeta_to_abc(profile.voltage(&p, t));
            series.t.push(t);
            series.v_inv.push(v);
            series.v_pcc.push(v);
            series.i_pcc.push(ThreePhase::ZERO);
            series.i_inv.push(ThreePhase::ZERO);
            let l = alphabeta_to_abc(profile.analytic_flux(&p, t));
            series.lambda.push(l);
            series.lambda_ab.push(abc_to_alphabeta(l));
        }
        let m = compute_metrics(&series, &p, &profile).unwrap();
        let t_d = p.t0 / std::f64::consts::TAU;
        let got = m.startup_time_s.expect("startup must be reached");
        assert!((got - t_d).abs() <= dt, "got {got}, want {t_d}");
    }

    #[test]
    fn zero_sum_flux_drift_stays_negligible() {
        let mut sc = Scenario::bench(MagnetizationProfile::Hard);
        sc.filter = None;
        sc.dt = 1e-5;
        sc.t_end = 1.0;
        let res = run(&sc).unwrap();
        let drift = res
            .series
            .lambda
            .iter()
            .map(|l| l.sum().abs())
            .fold(0.0f64, f64::max);
        assert!(drift < 1e-9, "zero-sum drift {drift}");
    }
}
