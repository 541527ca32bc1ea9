//! Synthesis and simulation of time-optimal holonomic quantum gates on a
//! detuned Delta-type three-level system.
//!
//! The crate covers the full stack from abstract pulse synthesis down to a
//! transmon-circuit realization:
//!
//! - [`operator`], [`state`], [`schedule`], [`propagate`], [`lindblad`],
//!   [`fidelity`]: dense complex operators, time-ordered propagation,
//!   Lindblad open-system integration and the fidelity measures.
//! - [`delta`]: the three-level model at lab-frame, rotating-frame and
//!   dressed (bright/dark) levels, with the time-optimal-control
//!   constraint residuals and Bloch trajectories.
//! - [`synthesis`]: drive-parameter solving for arbitrary holonomic
//!   rotations and the two-qubit controlled phase, analytic evolution
//!   operators, and the baseline schemes used for comparison.
//! - [`robustness`]: systematic-error sweeps and open-system fidelity
//!   curves.
//! - [`transmon`]: the physical layer - parametrically driven transmon
//!   units with decoherence-free-subspace encoding, validated against the
//!   effective models.
//! - [`cli`], [`config`], [`presets`], [`report`]: the batch front end.
//!
//! Each major capability has a runnable example under `examples/`:
//!
//! ```bash
//! cargo run --release --example synthesize_gate
//! cargo run --release --example gate_time_vs_angle
//! cargo run --release --example bloch_paths
//! cargo run --release --example robustness_sweep
//! cargo run --release --example state_decoherence
//! cargo run --release --example gate_fidelity_decoherence
//! cargo run --release --example open_system_trace
//! cargo run --release --example lab_frame_check
//! cargo run --release --example transmon_single_qubit
//! cargo run --release --example transmon_two_qubit
//! ```
//!
//! The same functionality is scriptable through the `deltasim` binary; see
//! the README and `docs/config.md` for the configuration schema.

pub mod cli;
pub mod config;
pub mod delta;
pub mod error;
pub mod fidelity;
pub mod lindblad;
pub mod operator;
pub mod presets;
pub mod propagate;
pub mod report;
pub mod robustness;
pub mod schedule;
pub mod state;
pub mod synthesis;
pub mod transmon;

pub use error::{Error, Result};
pub use operator::{matrix_exponential, Operator};
pub use propagate::{propagate, propagate_interval};
pub use schedule::Schedule;
pub use state::{DensityMatrix, StateVector};
