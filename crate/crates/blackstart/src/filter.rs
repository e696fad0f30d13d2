//! LC output filter between the inverter bridge and the PCC.
//!
//! The undamped series inductor / shunt capacitor pair is what turns abrupt
//! voltage transitions into surge currents through the semiconductors; the
//! default damping is zero to expose that worst case.

use crate::error::SimError;
use crate::frames::ThreePhase;
use std::f64::consts::TAU;

/// Filter constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterParams {
    /// Filter inductance (H).
    pub l_f: f64,
    /// Filter capacitance (F).
    pub c_f: f64,
    /// Series damping resistance (Ohm).
    pub r_damp: f64,
}

impl FilterParams {
    pub fn new(l_f: f64, c_f: f64, r_damp: f64) -> Result<Self, SimError> {
        if !(l_f > 0.0 && l_f.is_finite()) || !(c_f > 0.0 && c_f.is_finite()) {
            return Err(SimError::InvalidParameter(format!(
                "need l_f > 0 and c_f > 0, got l_f = {l_f}, c_f = {c_f}"
            )));
        }
        if !(r_damp >= 0.0 && r_damp.is_finite()) {
            return Err(SimError::InvalidParameter(format!(
                "need r_damp >= 0, got {r_damp}"
            )));
        }
        Ok(Self { l_f, c_f, r_damp })
    }

    /// 3.4 mH / 5 uF bench filter, undamped.
    pub fn default_5kva() -> Self {
        Self { l_f: 3.4e-3, c_f: 5e-6, r_damp: 0.0 }
    }

    /// Undamped LC resonance frequency in Hz.
    pub fn resonance_frequency(&self) -> f64 {
        1.0 / (TAU * (self.l_f * self.c_f).sqrt())
    }

    /// Characteristic impedance sqrt(L/C); a rated-voltage step drives a
    /// surge of roughly `v_hat / z0` through the inductor.
    pub fn characteristic_impedance(&self) -> f64 {
        (self.l_f / self.c_f).sqrt()
    }

    pub fn validate(&self) -> Result<(), SimError> {
        Self::new(self.l_f, self.c_f, self.r_damp).map(|_| ())
    }
}

/// Inductor current and capacitor (PCC) voltage.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FilterState {
    pub i_inv: ThreePhase,
    pub v_c: ThreePhase,
}

/// Per-phase LC dynamics:
/// `l_f di/dt = v_inv - v_c - r_damp i`, `c_f dv_c/dt = i - i_pcc`.
pub fn filter_derivative(
    fp: &FilterParams,
    fs: &FilterState,
    v_inv: ThreePhase,
    i_pcc: ThreePhase,
) -> (ThreePhase, ThreePhase) {
    let di = (v_inv - fs.v_c - fs.i_inv * fp.r_damp) * (1.0 / fp.l_f);
    let dv = (fs.i_inv - i_pcc) * (1.0 / fp.c_f);
    (di, dv)
}
