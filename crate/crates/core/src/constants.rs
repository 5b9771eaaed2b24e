//! Frozen constants for bounds whose constant is left unspecified.
//!
//! Each value is twice the worst ratio measured by the calibration sweep in
//! `tests/calibration.rs`, which recomputes the ratios and checks they stay inside.

/// FSL embedding: `‖|v̂⟩ − |v̂^M⟩'‖ ≤ C_FSL · N·log2 N / M`.
pub const C_FSL: f64 = 1.4;

/// Quantum chirp-z: success probability at least `C_CHIRPZ · ε²`.
pub const C_CHIRPZ: f64 = 0.0625;

/// Real-line falloff: `Pr(|x| > k²M) ≤ C_FALL / k` for `k | N`.
pub const C_FALL: f64 = 0.11;

/// Integral-period closeness: squared distance `≤ C_INT · tM/(Np)`.
pub const C_INT: f64 = 1.0;
