//! Magnetization voltage profiles and their closed-form flux integrals.
//!
//! Each profile defines the inverter EMF reference in the stationary frame.
//! The matching `analytic_flux` is the exact resistance-free time integral
//! of that voltage and serves as the oracle the transient simulation is
//! checked against.
//!
//! Three start-up strategies are modeled:
//!
//! * `Hard` — full-magnitude rotating voltage from t = 0. Its flux integral
//!   carries a permanent offset of one rated flux radius on the beta axis.
//! * `UltraFast` — a constant alpha-axis vector held for `t_d = T0/(2*pi)`,
//!   which walks the flux out to the rated radius, followed by rotation with
//!   the phase initialized to pi/2. Offset-free, but the voltage vector is
//!   discontinuous at 0 and at `t_d`.
//! * `Spiral` — voltage magnitude ramps linearly with angle over one full
//!   revolution (`t_a = T0`), so magnitude and phase are both continuous and
//!   the flux traces a spiral out to the rated radius with no offset.

use crate::error::SimError;
use crate::frames::AlphaBeta;
use std::f64::consts::TAU;

/// Rated electrical quantities and converter constants.
///
/// Derived fields (`v_hat`, `omega0`, `t0`, `lambda0`) are computed once at
/// construction so the identity `lambda0 * omega0 == v_hat` holds exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Phase-voltage peak (V).
    pub v_hat: f64,
    /// Rated angular frequency (rad/s).
    pub omega0: f64,
    /// Rated frequency (Hz).
    pub f0: f64,
    /// Fundamental period (s).
    pub t0: f64,
    /// Rated flux linkage radius (Wb), `v_hat / omega0`.
    pub lambda0: f64,
    /// Rated apparent power (VA).
    pub s_rated: f64,
    /// DC-link voltage (V).
    pub v_dc: f64,
    /// Per-unit current base: rated peak current (A).
    pub i_rated_peak: f64,
    /// Control-update frequency (Hz).
    pub f_sw: f64,
}

impl SystemParams {
    /// Builds parameters from a line-to-line RMS voltage rating.
    pub fn from_line_to_line(
        v_ll_rms: f64,
        f0: f64,
        s_rated: f64,
        v_dc: f64,
        i_rated_peak: f64,
        f_sw: f64,
    ) -> Result<Self, SimError> {
        let v_hat = v_ll_rms * std::f64::consts::SQRT_2 / crate::frames::SQRT_3;
        Self::from_phase_peak(v_hat, f0, s_rated, v_dc, i_rated_peak, f_sw)
    }

    pub fn from_phase_peak(
        v_hat: f64,
        f0: f64,
        s_rated: f64,
        v_dc: f64,
        i_rated_peak: f64,
        f_sw: f64,
    ) -> Result<Self, SimError> {
        for (name, v) in [
            ("v_hat", v_hat),
            ("f0", f0),
            ("s_rated", s_rated),
            ("v_dc", v_dc),
            ("i_rated_peak", i_rated_peak),
            ("f_sw", f_sw),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(SimError::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        // Commanded line-line peak may not exceed the DC link.
        if v_hat >= v_dc / crate::frames::SQRT_3 {
            return Err(SimError::InvalidParameter(format!(
                "v_hat = {v_hat:.1} V exceeds v_dc/sqrt(3) = {:.1} V",
                v_dc / crate::frames::SQRT_3
            )));
        }
        let omega0 = TAU * f0;
        Ok(Self {
            v_hat,
            omega0,
            f0,
            t0: 1.0 / f0,
            lambda0: v_hat / omega0,
            s_rated,
            v_dc,
            i_rated_peak,
            f_sw,
        })
    }

    /// Built-in preset for the 5 kVA / 400 V / 60 Hz bench system.
    pub fn default_5kva() -> Self {
        Self::from_line_to_line(400.0, 60.0, 5_000.0, 700.0, 10.2, 8_000.0)
            .expect("built-in preset is valid")
    }

    /// Re-checks the construction invariants (fields are public).
    pub fn validate(&self) -> Result<(), SimError> {
        Self::from_phase_peak(
            self.v_hat,
            self.f0,
            self.s_rated,
            self.v_dc,
            self.i_rated_peak,
            self.f_sw,
        )
        .map(|_| ())
    }
}

/// Start-up voltage trajectory selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MagnetizationProfile {
    /// Full-magnitude rotating voltage from t = 0.
    Hard,
    /// Constant alpha-axis vector for `t_d`, then rotation from pi/2.
    UltraFast { t_d: f64 },
    /// Archimedean spiral: magnitude `a * omega0 * t`, phase `b * omega0 * t`
    /// until `t_a`, then rated rotation. `b` is fixed to 1 here.
    Spiral { a: f64, b: f64, t_a: f64 },
    /// Zero output.
    Off,
}

impl MagnetizationProfile {
    /// Hold duration sized so the flux walk-out equals the rated radius.
    pub fn ultra_fast(p: &SystemParams) -> Self {
        Self::UltraFast { t_d: p.t0 / TAU }
    }

    /// Slope sized so one revolution ends at rated magnitude and rated flux.
    pub fn spiral(p: &SystemParams) -> Self {
        Self::Spiral { a: p.v_hat / TAU, b: 1.0, t_a: p.t0 }
    }

    /// Instant at which the commanded profile settles into its rated
    /// rotating form: 0 for `Hard`/`Off`, `t_d` and `t_a` for the soft ones.
    pub fn steady_state_start(&self) -> f64 {
        match *self {
            Self::Hard | Self::Off => 0.0,
            Self::UltraFast { t_d } => t_d,
            Self::Spiral { t_a, .. } => t_a,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Self::Hard => "hard",
            Self::UltraFast { .. } => "ultrafast",
            Self::Spiral { .. } => "spiral",
            Self::Off => "off",
        }
    }

    /// EMF reference at time `t` in the stationary frame.
    pub fn voltage(&self, p: &SystemParams, t: f64) -> AlphaBeta {
        match *self {
            Self::Hard => hard_voltage(p, t),
            Self::UltraFast { t_d } => ultrafast_voltage_with(p, t_d, t),
            Self::Spiral { a, b, t_a } => spiral_voltage_with(p, a, b, t_a, t),
            Self::Off => AlphaBeta::ZERO,
        }
    }

    /// Exact resistance-free flux integral of `voltage` from 0 to `t`.
    pub fn analytic_flux(&self, p: &SystemParams, t: f64) -> AlphaBeta {
        match *self {
            Self::Hard => {
                let th = p.omega0 * t;
                AlphaBeta::new(p.lambda0 * th.sin(), p.lambda0 * (1.0 - th.cos()))
            }
            Self::UltraFast { t_d } => {
                if t <= t_d {
                    AlphaBeta::new(p.v_hat * t, 0.0)
                } else {
                    let th = p.omega0 * (t - t_d);
                    let walkout = p.v_hat * t_d;
                    AlphaBeta::new(
                        walkout + p.lambda0 * (th.cos() - 1.0),
                        p.lambda0 * th.sin(),
                    )
                }
            }
            Self::Spiral { a, b, t_a } => {
                debug_assert_eq!(b, 1.0, "only single-revolution spirals are supported");
                if t <= t_a {
                    spiral_flux_ramp(p, a, t)
                } else {
                    let end = spiral_flux_ramp(p, a, t_a);
                    let th = p.omega0 * (t - t_a);
                    end + AlphaBeta::new(p.lambda0 * th.sin(), p.lambda0 * (1.0 - th.cos()))
                }
            }
            Self::Off => AlphaBeta::ZERO,
        }
    }
}

/// Rotating rated-magnitude voltage, `(v_hat cos w0 t, v_hat sin w0 t)`.
pub fn hard_voltage(p: &SystemParams, t: f64) -> AlphaBeta {
    AlphaBeta::from_polar(p.v_hat, p.omega0 * t)
}

/// Ultra-fast profile with the hold duration taken from `p`.
pub fn ultrafast_voltage(p: &SystemParams, t: f64) -> AlphaBeta {
    ultrafast_voltage_with(p, p.t0 / TAU, t)
}

fn ultrafast_voltage_with(p: &SystemParams, t_d: f64, t: f64) -> AlphaBeta {
    if t < t_d {
        AlphaBeta::new(p.v_hat, 0.0)
    } else {
        // Phase integrator initialized to pi/2 at the hand-off.
        AlphaBeta::from_polar(p.v_hat, std::f64::consts::FRAC_PI_2 + p.omega0 * (t - t_d))
    }
}

/// Spiral profile with slope and duration taken from `p`.
pub fn spiral_voltage(p: &SystemParams, t: f64) -> AlphaBeta {
    spiral_voltage_with(p, p.v_hat / TAU, 1.0, p.t0, t)
}

fn spiral_voltage_with(p: &SystemParams, a: f64, b: f64, t_a: f64, t: f64) -> AlphaBeta {
    if t <= t_a {
        AlphaBeta::from_polar(a * p.omega0 * t, b * p.omega0 * t)
    } else {
        AlphaBeta::from_polar(p.v_hat, p.omega0 * (t - t_a))
    }
}

/// Integral of the spiral ramp voltage from 0 to `t <= t_a`:
/// `(a/w)(wt sin wt + cos wt - 1, sin wt - wt cos wt)`.
fn spiral_flux_ramp(p: &SystemParams, a: f64, t: f64) -> AlphaBeta {
    let th = p.omega0 * t;
    let scale = a / p.omega0;
    AlphaBeta::new(
        scale * (th * th.sin() + th.cos() - 1.0),
        scale * (th.sin() - th * th.cos()),
    )
}

/// Mean of the flux vector over the trailing full fundamental period.
///
/// The trajectory must be uniformly sampled and span at least one period.
/// The window is half-open, `(t_end - t0, t_end]`, so a pure fundamental
/// averages to zero exactly.
pub fn flux_dc_offset(
    trajectory: &[(f64, AlphaBeta)],
    p: &SystemParams,
) -> Result<AlphaBeta, SimError> {
    if trajectory.len() < 2 {
        return Err(SimError::InsufficientSpan {
            span_s: 0.0,
            required_s: p.t0,
        });
    }
    let t_first = trajectory[0].0;
    let t_last = trajectory[trajectory.len() - 1].0;
    let span = t_last - t_first;
    if span < p.t0 * (1.0 - 1e-9) {
        return Err(SimError::InsufficientSpan {
            span_s: span,
            required_s: p.t0,
        });
    }
    let dt = span / (trajectory.len() - 1) as f64;
    let n = (p.t0 / dt).round().max(1.0) as usize;
    let n = n.min(trajectory.len());
    let tail = &trajectory[trajectory.len() - n..];
    let mut acc = AlphaBeta::ZERO;
    for &(_, v) in tail {
        acc = acc + v;
    }
    Ok(acc * (1.0 / n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> SystemParams {
        SystemParams::default_5kva()
    }

    fn assert_vec_close(got: AlphaBeta, want: AlphaBeta, tol: f64) {
        assert!(
            (got - want).magnitude() <= tol,
            "got ({}, {}), want ({}, {}), tol {tol}",
            got.alpha,
            got.beta,
            want.alpha,
            want.beta
        );
    }

    #[test]
    fn rated_quantities_match_bench_values() {
        let p = params();
        // 400 Vll rms -> 326.6 V phase peak; lambda0 within 0.2% of the
        // 865.6 mWb rated flux of the bench transformer.
        assert!((p.v_hat - 326.598_632).abs() < 1e-5);
        assert!((p.lambda0 - 0.8656).abs() / 0.8656 < 2e-3);
        assert_eq!(p.lambda0 * p.omega0, p.v_hat);
    }

    #[test]
    fn rejects_v_hat_above_dc_link() {
        let err = SystemParams::from_line_to_line(500.0, 60.0, 5e3, 700.0, 10.2, 8e3);
        assert!(err.is_err());
    }

    #[test]
    fn hard_voltage_anchors() {
        let p = params();
        assert_vec_close(hard_voltage(&p, 0.0), AlphaBeta::new(p.v_hat, 0.0), 1e-9);
        assert_vec_close(
            hard_voltage(&p, p.t0 / 4.0),
            AlphaBeta::new(0.0, p.v_hat),
            1e-9,
        );
        assert_vec_close(hard_voltage(&p, p.t0), AlphaBeta::new(p.v_hat, 0.0), 1e-9);
    }

    #[test]
    fn ultrafast_voltage_anchors() {
        let p = params();
        let t_d = p.t0 / TAU;
        assert_vec_close(ultrafast_voltage(&p, 0.0), AlphaBeta::new(p.v_hat, 0.0), 1e-9);
        assert_vec_close(ultrafast_voltage(&p, t_d), AlphaBeta::new(0.0, p.v_hat), 1e-9);
        assert_vec_close(
            ultrafast_voltage(&p, t_d + p.t0 / 4.0),
            AlphaBeta::new(-p.v_hat, 0.0),
            1e-9,
        );
    }

    #[test]
    fn spiral_voltage_anchors() {
        let p = params();
        assert_vec_close(spiral_voltage(&p, 0.0), AlphaBeta::ZERO, 1e-12);
        assert_vec_close(spiral_voltage(&p, p.t0), AlphaBeta::new(p.v_hat, 0.0), 1e-9);
        // Half way through: magnitude v_hat/2 at phase pi.
        assert_vec_close(
            spiral_voltage(&p, p.t0 / 2.0),
            AlphaBeta::new(-p.v_hat / 2.0, 0.0),
            1e-9,
        );
    }

    #[test]
    fn analytic_flux_anchors() {
        let p = params();
        let hard = MagnetizationProfile::Hard;
        assert_vec_close(
            hard.analytic_flux(&p, p.t0 / 2.0),
            AlphaBeta::new(0.0, 2.0 * p.lambda0),
            1e-9,
        );

        let uf = MagnetizationProfile::ultra_fast(&p);
        assert_vec_close(
            uf.analytic_flux(&p, p.t0 / TAU),
            AlphaBeta::new(p.lambda0, 0.0),
            1e-9,
        );

        let sp = MagnetizationProfile::spiral(&p);
        assert_vec_close(
            sp.analytic_flux(&p, p.t0),
            AlphaBeta::new(0.0, -p.lambda0),
            1e-9,
        );
    }

    #[test]
    fn timing_anchors() {
        let p = params();
        match MagnetizationProfile::ultra_fast(&p) {
            MagnetizationProfile::UltraFast { t_d } => {
                assert!((t_d - 2.6526e-3).abs() < 1e-6)
            }
            _ => unreachable!(),
        }
        match MagnetizationProfile::spiral(&p) {
            MagnetizationProfile::Spiral { t_a, .. } => {
                assert!((t_a - 16.667e-3).abs() < 1e-6)
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn flux_radius_settles_at_rated() {
        let p = params();
        let uf = MagnetizationProfile::ultra_fast(&p);
        let sp = MagnetizationProfile::spiral(&p);
        for k in 0..200 {
            let t = uf.steady_state_start() + k as f64 * 1.3e-4;
            assert!((uf.analytic_flux(&p, t).magnitude() - p.lambda0).abs() < 1e-9);
            let t = sp.steady_state_start() + k as f64 * 1.3e-4;
            assert!((sp.analytic_flux(&p, t).magnitude() - p.lambda0).abs() < 1e-9);
        }
    }

    #[test]
    fn flux_tangent_matches_voltage() {
        // Central finite difference of the analytic flux reproduces the
        // profile voltage away from the switching instants.
        let p = params();
        let h = 1e-7;
        let profiles = [
            MagnetizationProfile::Hard,
            MagnetizationProfile::ultra_fast(&p),
            MagnetizationProfile::spiral(&p),
        ];
        for prof in profiles {
            for k in 1..160 {
                let t = k as f64 * 6.1e-4;
                let switch = prof.steady_state_start();
                if (t - switch).abs() < 2.0 * h {
                    continue;
                }
                let d = (prof.analytic_flux(&p, t + h) - prof.analytic_flux(&p, t - h))
                    * (1.0 / (2.0 * h));
                let v = prof.voltage(&p, t);
                let err = (d - v).magnitude() / v.magnitude().max(1.0);
                assert!(err < 1e-4, "{} t={t}: err {err}", prof.tag());
            }
        }
    }

    #[test]
    fn spiral_is_continuous_ultrafast_is_not() {
        let p = params();
        let sp = MagnetizationProfile::spiral(&p);
        let t_a = p.t0;
        let eps = 1e-9;
        let jump = (sp.voltage(&p, t_a + eps) - sp.voltage(&p, t_a - eps)).magnitude();
        assert!(jump < 1e-3 * p.v_hat, "spiral jump {jump}");

        let uf = MagnetizationProfile::ultra_fast(&p);
        let t_d = p.t0 / TAU;
        // Jump of magnitude v_hat at t = 0 (from rest), sqrt(2) v_hat at t_d.
        assert!((uf.voltage(&p, 0.0).magnitude() - p.v_hat).abs() < 1e-9);
        let jump = (uf.voltage(&p, t_d + eps) - uf.voltage(&p, t_d - eps)).magnitude();
        assert!(jump >= p.v_hat);
    }

    fn sampled_flux(
        prof: &MagnetizationProfile,
        p: &SystemParams,
        t_end: f64,
        n: usize,
    ) -> Vec<(f64, AlphaBeta)> {
        (0..=n)
            .map(|i| {
                let t = t_end * i as f64 / n as f64;
                (t, prof.analytic_flux(p, t))
            })
            .collect()
    }

    #[test]
    fn trailing_cycle_mean_hard_offset() {
        let p = params();
        // Sample so one period is an integer number of steps.
        let traj = sampled_flux(&MagnetizationProfile::Hard, &p, 3.0 * p.t0, 3 * 4096);
        let off = flux_dc_offset(&traj, &p).unwrap();
        assert_vec_close(off, AlphaBeta::new(0.0, p.lambda0), 1e-9);
    }

    #[test]
    fn trailing_cycle_mean_soft_profiles_zero() {
        let p = params();
        // Period-aligned grid: one fundamental cycle is exactly 4096 steps,
        // so the discrete mean of a centered circle cancels to rounding.
        let dt = p.t0 / 4096.0;
        for (prof, start) in [
            (MagnetizationProfile::ultra_fast(&p), p.t0 / TAU),
            (MagnetizationProfile::spiral(&p), p.t0),
        ] {
            // Windows whose trailing cycle begins after the profile settles.
            for m in 1..4 {
                let n = ((start / dt).ceil() as usize) + m * 4096 + 617 * m;
                let traj: Vec<_> = (0..=n)
                    .map(|i| {
                        let t = i as f64 * dt;
                        (t, prof.analytic_flux(&p, t))
                    })
                    .collect();
                let off = flux_dc_offset(&traj, &p).unwrap();
                assert!(
                    off.magnitude() < 1e-9,
                    "{} window {m}: offset {}",
                    prof.tag(),
                    off.magnitude()
                );
            }
        }
    }

    #[test]
    fn trailing_cycle_mean_constant_trajectory() {
        let p = params();
        let traj: Vec<_> = (0..=2000)
            .map(|i| (i as f64 * 1e-5, AlphaBeta::new(0.4, -0.2)))
            .collect();
        let off = flux_dc_offset(&traj, &p).unwrap();
        assert_vec_close(off, AlphaBeta::new(0.4, -0.2), 1e-12);
    }

    #[test]
    fn short_trajectory_is_rejected() {
        let p = params();
        let traj: Vec<_> = (0..=10)
            .map(|i| (i as f64 * 1e-4, AlphaBeta::ZERO))
            .collect();
        match flux_dc_offset(&traj, &p) {
            Err(SimError::InsufficientSpan { .. }) => {}
            other => panic!("expected insufficient span, got {other:?}"),
        }
    }
}
