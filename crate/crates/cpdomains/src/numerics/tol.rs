use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by every algorithm.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct Tolerances {
    /// Relative singular/eigenvalue cutoff for rank decisions.
    pub rank_rtol: f64,
    /// Absolute residual bound for operator identities.
    pub residual_atol: f64,
    /// Maximum sine of a principal angle for subspace equality.
    pub angle_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank_rtol: 1e-10,
            residual_atol: 1e-8,
            angle_tol: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> crate::error::Result<()> {
        if self.rank_rtol > 0.0 && self.residual_atol > 0.0 && self.angle_tol > 0.0 {
            Ok(())
        } else {
            Err(crate::error::CpError::InvalidInput(
                "tolerances must be strictly positive".into(),
            ))
        }
    }
}
