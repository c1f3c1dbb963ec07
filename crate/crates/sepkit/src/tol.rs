//! Numerical thresholds used across the crate.
//!
//! All thresholds are fixed at build time except the PSD decision
//! threshold, which can be overridden through the `SEPKIT_PSD_TOL`
//! environment variable (an absolute value, parsed as a decimal string).

use std::sync::OnceLock;

/// Entrywise tolerance for Hermiticity checks.
pub const TOL_H: f64 = 1e-12;

/// Threshold below which a certified negative value is not trusted.
pub const CERT_TOL: f64 = 1e-10;

/// Schmidt coefficients below this count as zero for rank purposes.
pub const SCHMIDT_TOL: f64 = 1e-10;

/// Choi eigenvalues below this are dropped during Kraus extraction.
pub const KRAUS_TOL: f64 = 1e-10;

/// Maximum number of Jacobi sweeps before giving up.
pub const EIG_SWEEP_LIMIT: usize = 100;

/// Off-diagonal convergence factor for the Jacobi eigensolver,
/// relative to the Frobenius norm of the input.
pub const EIG_OFF_TOL: f64 = 1e-14;

fn psd_tol_override() -> Option<f64> {
    static OVERRIDE: OnceLock<Option<f64>> = OnceLock::new();
    *OVERRIDE.get_or_init(|| {
        std::env::var("SEPKIT_PSD_TOL")
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|t| t.is_finite() && *t >= 0.0)
    })
}

/// Positive-semidefiniteness decision threshold for a matrix with the
/// given Frobenius norm: eigenvalues above `-psd_tol(norm)` count as
/// nonnegative. Scales as `1e-9 * max(1, norm)` unless overridden by
/// `SEPKIT_PSD_TOL`.
pub fn psd_tol(fro_norm: f64) -> f64 {
    match psd_tol_override() {
        Some(t) => t,
        None => 1e-9 * fro_norm.max(1.0),
    }
}
