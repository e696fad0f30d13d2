//! Black-start transformer energization simulator for grid-forming
//! converters.
//!
//! A grid-forming inverter re-energizing a dead network must magnetize its
//! interface transformer without the luxuries of a stiff grid. Applying the
//! full rotating voltage at once leaves a DC offset of one rated flux
//! radius in the core, drives it past the knee of its magnetization curve,
//! and draws a multi-per-unit inrush current. This crate models that
//! plant — saturable three-limb transformer behind an optional LC filter —
//! and the start-up voltage profiles that avoid the offset, plus the
//! inverter-driven demagnetization sequence used when residual flux is
//! present.
//!
//! The library is organized around:
//!
//! * [`frames`] — Clarke transform pair and the two vector types,
//! * [`profiles`] — the hard / ultra-fast / spiral voltage profiles and
//!   their closed-form flux integrals (the simulation oracle),
//! * [`transformer`], [`filter`] — plant models,
//! * [`demag`] — the three-step demagnetization state machine,
//! * [`sim`] — fixed-step RK4 scenario execution and metric extraction,
//! * [`compare`] — the method-comparison matrix with qualitative verdicts.
//!
//! Scenario batches run data-parallel via rayon under the default
//! `parallel` feature; disable it for a fully sequential build with
//! identical results. `BLACKSTART_THREADS` caps the worker count.

pub mod compare;
pub mod demag;
pub mod error;
pub mod filter;
pub mod frames;
pub mod profiles;
pub mod sim;
pub mod transformer;

pub use error::SimError;
pub use frames::{abc_to_alphabeta, alphabeta_to_abc, AlphaBeta, ThreePhase};
pub use profiles::{MagnetizationProfile, SystemParams};
pub use sim::{run, run_batch, run_batch_sequential, Metrics, Scenario, SimResult};
