//! Inverter-driven demagnetization sequence and DC pre-fluxing setup.
//!
//! The residual flux left in the core after a blackout is unknown, so the
//! sequence first forces the core to a known deep-saturation point and then
//! uses volt-second symmetry to walk it back to the origin:
//!
//! 1. `SaturatePositive` — closed-loop per-phase current control toward the
//!    references `(+i_sat, 0, -i_sat)` until the a-phase current reaches
//!    `+i_sat`. The current loop keeps the approach bounded.
//! 2. `ReverseSaturate` — open-loop DC pattern `(-v_d, 0, +v_d)` until the
//!    a-phase current falls to `-i_sat`, measuring the elapsed time.
//! 3. `ReturnToOrigin` — the opposite pattern `(+v_d, 0, -v_d)` for exactly
//!    half the measured time. On a symmetric anhysteretic curve this lands
//!    the flux at the curve's zero-current point.
//!
//! The controller is a deterministic state machine advanced once per
//! simulation step; the plant integration itself lives in [`crate::sim`].

use crate::error::SimError;
use crate::frames::ThreePhase;

/// Demagnetization sequence constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemagParams {
    /// Saturation detection threshold (A).
    pub i_sat: f64,
    /// Open-loop DC drive voltage (V).
    pub v_d: f64,
    /// Current-loop bandwidth (Hz).
    pub ctrl_bandwidth: f64,
    /// Per-phase timeout (s).
    pub timeout: f64,
}

impl Default for DemagParams {
    fn default() -> Self {
        Self { i_sat: 3.0, v_d: 10.0, ctrl_bandwidth: 500.0, timeout: 1.0 }
    }
}

/// Detection band on the saturation threshold. The closed current loop
/// approaches its reference asymptotically, so an exact `i >= i_sat` test
/// would never fire; crossing 98% of the threshold is treated as reaching
/// it. The flux bookkeeping error this introduces is a few mWb.
pub const THRESHOLD_DETECTION_BAND: f64 = 0.02;

impl DemagParams {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.i_sat > 0.0 && self.v_d > 0.0 && self.timeout > 0.0 && self.ctrl_bandwidth > 0.0)
        {
            return Err(SimError::InvalidParameter(format!(
                "demag params must be positive: i_sat = {}, v_d = {}, bandwidth = {}, timeout = {}",
                self.i_sat, self.v_d, self.ctrl_bandwidth, self.timeout
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemagPhase {
    SaturatePositive,
    ReverseSaturate,
    ReturnToOrigin,
    Done,
}

impl DemagPhase {
    fn name(self) -> &'static str {
        match self {
            Self::SaturatePositive => "SaturatePositive",
            Self::ReverseSaturate => "ReverseSaturate",
            Self::ReturnToOrigin => "ReturnToOrigin",
            Self::Done => "Done",
        }
    }
}

/// Sequencer state. `tau_measured` is only meaningful once
/// `ReverseSaturate` has completed; `ReturnToOrigin` then lasts exactly
/// `tau_measured / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemagState {
    pub phase: DemagPhase,
    pub tau_measured: f64,
    pub elapsed_in_phase: f64,
    integrators: [f64; 3],
}

impl DemagState {
    pub fn new() -> Self {
        Self {
            phase: DemagPhase::SaturatePositive,
            tau_measured: 0.0,
            elapsed_in_phase: 0.0,
            integrators: [0.0; 3],
        }
    }

    pub fn is_done(&self) -> bool {
        self.phase == DemagPhase::Done
    }
}

impl Default for DemagState {
    fn default() -> Self {
        Self::new()
    }
}

/// Per-phase PI current controller plus the three-step sequencer.
///
/// PI gains come from first-order pole placement at the configured
/// bandwidth against the series inductance seen by the loop in the
/// saturated region (filter inductance plus the saturated incremental
/// magnetizing inductance): `kp = w_bw * l`, `ki = w_bw * r`. Anti-windup
/// clamps the output at +/- v_dc/2.
#[derive(Debug, Clone, Copy)]
pub struct DemagController {
    pub params: DemagParams,
    kp: f64,
    ki: f64,
    v_clamp: f64,
}

impl DemagController {
    pub fn new(params: DemagParams, loop_inductance: f64, loop_resistance: f64, v_dc: f64) -> Self {
        let w_bw = std::f64::consts::TAU * params.ctrl_bandwidth;
        Self {
            params,
            kp: w_bw * loop_inductance,
            ki: w_bw * loop_resistance,
            v_clamp: v_dc / 2.0,
        }
    }

    /// Advances the sequencer by one step of `dt` given the measured
    /// inverter current, returning the voltage command to hold over that
    /// step and the next state.
    pub fn step(
        &self,
        state: &DemagState,
        i_inv: ThreePhase,
        dt: f64,
    ) -> Result<(ThreePhase, DemagState), SimError> {
        let mut next = *state;
        if next.elapsed_in_phase > self.params.timeout {
            return Err(SimError::DemagTimeout {
                phase: state.phase.name(),
                elapsed_s: next.elapsed_in_phase,
            });
        }

        let detect = self.params.i_sat * (1.0 - THRESHOLD_DETECTION_BAND);
        let settle = self.params.i_sat * THRESHOLD_DETECTION_BAND;
        let cmd = match state.phase {
            DemagPhase::SaturatePositive => {
                // The core has fully entered the defined saturation state
                // once the whole current vector sits at its references, not
                // just phase a; exiting early would freeze leftover flux in
                // the unforced phases.
                if i_inv.a >= detect && i_inv.c <= -detect && i_inv.b.abs() <= settle {
                    next.phase = DemagPhase::ReverseSaturate;
                    next.elapsed_in_phase = 0.0;
                    next.tau_measured = 0.0;
                    ThreePhase::new(-self.params.v_d, 0.0, self.params.v_d)
                } else {
                    let refs = [self.params.i_sat, 0.0, -self.params.i_sat];
                    let meas = [i_inv.a, i_inv.b, i_inv.c];
                    let mut out = [0.0; 3];
                    for ph in 0..3 {
                        let err = refs[ph] - meas[ph];
                        // Conditional anti-windup: freeze the integrator
                        // while the output is clamped in the error's
                        // direction.
                        let u_raw = self.kp * err + next.integrators[ph];
                        let winding_deeper = (u_raw >= self.v_clamp && err > 0.0)
                            || (u_raw <= -self.v_clamp && err < 0.0);
                        if !winding_deeper {
                            next.integrators[ph] += self.ki * err * dt;
                        }
                        out[ph] = (self.kp * err + next.integrators[ph])
                            .clamp(-self.v_clamp, self.v_clamp);
                    }
                    next.elapsed_in_phase += dt;
                    ThreePhase::new(out[0], out[1], out[2])
                }
            }
            DemagPhase::ReverseSaturate => {
                if i_inv.a <= -self.params.i_sat {
                    next.phase = DemagPhase::ReturnToOrigin;
                    next.elapsed_in_phase = 0.0;
                    ThreePhase::new(self.params.v_d, 0.0, -self.params.v_d)
                } else {
                    next.tau_measured += dt;
                    next.elapsed_in_phase += dt;
                    ThreePhase::new(-self.params.v_d, 0.0, self.params.v_d)
                }
            }
            DemagPhase::ReturnToOrigin => {
                if state.elapsed_in_phase >= state.tau_measured / 2.0 {
                    next.phase = DemagPhase::Done;
                    next.elapsed_in_phase = 0.0;
                    ThreePhase::ZERO
                } else {
                    next.elapsed_in_phase += dt;
                    ThreePhase::new(self.params.v_d, 0.0, -self.params.v_d)
                }
            }
            DemagPhase::Done => ThreePhase::ZERO,
        };
        Ok((cmd, next))
    }
}

/// DC pre-fluxing phase: apply `pattern_v` for `duration_s`, then zero
/// voltage. The flux reached becomes the residual initial condition for
/// whatever runs next.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prefluxing {
    pub pattern_v: ThreePhase,
    pub duration_s: f64,
}

/// Builds a pre-fluxing phase spec for establishing a known residual flux.
pub fn build_residual_flux(pattern_v: ThreePhase, duration_s: f64) -> Result<Prefluxing, SimError> {
    if !(duration_s >= 0.0 && duration_s.is_finite()) {
        return Err(SimError::InvalidParameter(format!(
            "prefluxing duration must be non-negative, got {duration_s}"
        )));
    }
    if !pattern_v.is_finite() {
        return Err(SimError::InvalidParameter(
            "prefluxing pattern must be finite".into(),
        ));
    }
    Ok(Prefluxing { pattern_v, duration_s })
}
