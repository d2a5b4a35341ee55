//! External comparison values. These come from an exact or discrete-ordinates
//! treatment of the same problem and are shipped as data; nothing here is
//! computed by this crate.

use serde::Serialize;

/// Temperature jump coefficient `ε_T` (per unit `g_T`) from a
/// discrete-ordinates solution, keyed by accommodation coefficient.
pub const REFERENCE_EPS_T: [(f64, f64); 7] = [
    (1.0, 1.30272),
    (0.9, 1.57026),
    (0.7, 2.31753),
    (0.6, 2.86762),
    (0.5, 3.62922),
    (0.3, 6.63051),
    (0.1, 21.45012),
];

/// Exact diffuse-wall (`q = 1`) values.
pub const EXACT_DIFFUSE_EPS_T: f64 = 1.30272;
pub const EXACT_DIFFUSE_EPS_N: f64 = -0.74428;

/// Accommodation coefficients of the reference table, largest first.
pub const REFERENCE_Q: [f64; 7] = [1.0, 0.9, 0.7, 0.6, 0.5, 0.3, 0.1];

/// Reference `ε_T` for `q`, if the table has an entry for it.
pub fn reference_eps_t(q: f64) -> Option<f64> {
    REFERENCE_EPS_T
        .iter()
        .find(|(qr, _)| (qr - q).abs() < 1e-12)
        .map(|&(_, v)| v)
}

/// `(reference − value)/reference · 100`.
pub fn relative_error_percent(reference: f64, value: f64) -> f64 {
    (reference - value) / reference * 100.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub q: f64,
    pub value: f64,
    pub reference: Option<f64>,
    pub error_percent: Option<f64>,
}

pub fn compare(q: f64, eps_t: f64) -> Comparison {
    let reference = reference_eps_t(q);
    Comparison {
        q,
        value: eps_t,
        reference,
        error_percent: reference.map(|r| relative_error_percent(r, eps_t)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup() {
        assert_eq!(reference_eps_t(0.5), Some(3.62922));
        assert_eq!(reference_eps_t(0.55), None);
        assert_eq!(reference_eps_t(1.0), Some(EXACT_DIFFUSE_EPS_T));
        let c = compare(0.4, 4.0);
        assert_eq!((c.reference, c.error_percent), (None, None));
        let c = compare(1.0, 1.32156);
        assert!((c.error_percent.unwrap() + 1.446).abs() < 1e-3);
    }
}
