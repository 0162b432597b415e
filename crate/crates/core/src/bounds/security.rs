use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmath::binary_entropy;

/// Lower edge (exclusive) of the anticorrelation parameter for key distillation.
pub const MIN_ANTICORR: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecurityVerdict {
    pub p_anticorr: f64,
    pub qber: f64,
    pub h_q: f64,
    pub h_p: f64,
    pub secure: bool,
    pub reason: String,
}

impl SecurityVerdict {
    /// `1 - H(Q) - H(1 - 2P)`; positive when the entropy clause holds.
    pub fn margin(&self) -> f64 {
        1.0 - self.h_q - self.h_p
    }
}

fn half_unit(value: f64, what: &'static str) -> Result<f64> {
    if (0.0..=0.5).contains(&value) {
        Ok(value)
    } else {
        Err(Error::OutOfDomain { value, domain: what })
    }
}

/// `max I_A:E = max I_B:E` on the diagonal `P01 = P10 = P`.
pub fn diagonal_max(p_anticorr: f64) -> Result<f64> {
    let p = half_unit(p_anticorr, "[0, 0.5] for the anticorrelation parameter")?;
    if p < MIN_ANTICORR {
        Ok(1.0)
    } else {
        binary_entropy(1.0 - 2.0 * p)
    }
}

/// Keys can be distilled iff `0.25 < P <= 0.5` and `H(Q) + H(1 - 2P) < 1`.
pub fn security_condition(p_anticorr: f64, qber: f64) -> Result<SecurityVerdict> {
    let p = half_unit(p_anticorr, "[0, 0.5] for the anticorrelation parameter")?;
    let qber = half_unit(qber, "[0, 0.5] for the QBER")?;
    let h_q = binary_entropy(qber)?;
    let h_p = binary_entropy(1.0 - 2.0 * p)?;
    let total = h_q + h_p;
    let (secure, reason) = if p <= MIN_ANTICORR {
        (
            false,
            format!("P <= 0.25 (P = {p}): Eve's information is not bounded below 1 bit"),
        )
    } else if total >= 1.0 {
        (false, format!("H(Q) + H(1-2P) = {total} >= 1"))
    } else {
        (true, format!("H(Q) + H(1-2P) = {total} < 1"))
    };
    Ok(SecurityVerdict {
        p_anticorr: p,
        qber,
        h_q,
        h_p,
        secure,
        reason,
    })
}

/// Anticorrelation parameter of a lossy experiment, then the verdict.
///
/// Untrusted detectors: every lost photon counts against the check,
/// `P = (1 - P_loss - P_corr)/2`. Trusted detectors: detection losses are
/// traced out, `P = (1 - P_corr)/2`.
pub fn analyze_experiment(p_loss: f64, p_corr: f64, trusted: bool, qber: f64) -> Result<SecurityVerdict> {
    for (value, domain) in [
        (p_loss, "[0, 1] for the loss probability"),
        (p_corr, "[0, 1] for the correlated-result probability"),
    ] {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::OutOfDomain { value, domain });
        }
    }
    if p_loss + p_corr > 1.0 {
        return Err(Error::OutOfDomain {
            value: p_loss + p_corr,
            domain: "P_loss + P_corr <= 1",
        });
    }
    let p_anticorr = if trusted {
        (1.0 - p_corr) / 2.0
    } else {
        (1.0 - p_loss - p_corr) / 2.0
    };
    security_condition(p_anticorr, qber)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_values() {
        assert_eq!(diagonal_max(0.5).unwrap(), 0.0);
        assert_eq!(diagonal_max(0.2).unwrap(), 1.0);
        assert_eq!(diagonal_max(0.25).unwrap(), 1.0);
        assert!((diagonal_max(0.35).unwrap() - 0.8813).abs() < 1e-4);
        assert!(diagonal_max(0.6).is_err());
    }

    #[test]
    fn noiseless_attack_free() {
        let v = security_condition(0.5, 0.0).unwrap();
        assert!(v.secure);
        assert_eq!(v.margin(), 1.0);
    }

    #[test]
    fn weak_anticorrelation_is_insecure() {
        for q in [0.0, 0.1, 0.5] {
            let v = security_condition(0.09, q).unwrap();
            assert!(!v.secure);
            assert!(v.reason.starts_with("P <= 0.25"));
        }
        assert!(!security_condition(0.25, 0.0).unwrap().secure);
    }

    #[test]
    fn entropy_clause() {
        let v = security_condition(0.475, 0.01).unwrap();
        let h = |x: f64| -(x * x.log2() + (1.0 - x) * (1.0 - x).log2());
        assert!((v.h_q - h(0.01)).abs() < 1e-12);
        assert!((v.h_p - h(0.05)).abs() < 1e-12);
        assert!((v.h_q + v.h_p - 0.3672).abs() < 1e-4);
        assert!(v.secure);
        let v = security_condition(0.3, 0.2).unwrap();
        assert!(!v.secure && v.reason.contains(">= 1"));
    }

    #[test]
    fn input_domain() {
        assert!(security_condition(0.6, 0.0).is_err());
        assert!(security_condition(0.4, 0.7).is_err());
        assert!(analyze_experiment(0.8, 0.3, false, 0.0).is_err());
        assert!(analyze_experiment(-0.1, 0.0, false, 0.0).is_err());
    }

    #[test]
    fn experiment_example() {
        let v = analyze_experiment(0.77, 0.05, false, 0.0).unwrap();
        assert!((v.p_anticorr - 0.09).abs() < 1e-12);
        assert!(!v.secure);
        let v = analyze_experiment(0.77, 0.05, true, 0.0).unwrap();
        assert!((v.p_anticorr - 0.475).abs() < 1e-12);
        assert!(v.secure);
        for trusted in [false, true] {
            assert_eq!(analyze_experiment(0.0, 0.0, trusted, 0.0).unwrap().p_anticorr, 0.5);
        }
    }
}
