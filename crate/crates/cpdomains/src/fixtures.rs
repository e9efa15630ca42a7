//! Built-in example maps used throughout the tests and the CLI.
//!
//! Each fixture has a stable name so it can be requested from the
//! command line without writing a JSON problem file.

use crate::cpmaps::CPMap;
use crate::error::{CpError, Result};
use crate::numerics::{Mat, Tolerances};

/// `EX-A`: phi on M_2 with phi(E_11) = E_11 and all other matrix-unit
/// images zero, i.e. phi(a) = a_11 E_11. Compresses to the (1,1) corner;
/// its multiplicative domain is the diagonal algebra and its ternary
/// domain is the span of E_11.
pub fn ex_a(tol: &Tolerances) -> Result<CPMap> {
    let mut choi = Mat::zeros(4, 4);
    choi[(0, 0)] = 1.0.into();
    CPMap::from_choi(2, 2, choi, tol)
}

/// `EX-B`: phi on M_2 with phi(E_11) = 2 E_11, other images zero. A
/// rescaled `EX-A` that fails contractivity (phi(I) has norm 2); the
/// standard counterexample for criteria that assume contractivity.
pub fn ex_b(tol: &Tolerances) -> Result<CPMap> {
    let mut choi = Mat::zeros(4, 4);
    choi[(0, 0)] = 2.0.into();
    CPMap::from_choi(2, 2, choi, tol)
}

/// The distinguished vector of the `EX-B` counterexample.
pub fn ex_b_x0() -> Mat {
    Mat::from_real(2, 2, &[1.0, 1.0, 0.0, 0.0])
}

/// `EX-ID`: the identity channel on M_n (Choi is the rank-1 maximally
/// entangled projector, unscaled).
pub fn ex_id(n: usize, tol: &Tolerances) -> Result<CPMap> {
    let images: Vec<Mat> = (0..n)
        .flat_map(|i| (0..n).map(move |j| Mat::unit(n, n, i, j)))
        .collect();
    CPMap::from_action(n, n, &images, tol)
}

/// `EX-TR`: the normalized trace map on M_2, phi(a) = tr(a)/2 * I_2.
/// Unital with full-rank Choi I_4/2; both domains collapse (M_phi = C I,
/// T_phi = 0).
pub fn ex_tr(tol: &Tolerances) -> Result<CPMap> {
    CPMap::from_choi(2, 2, Mat::identity(4).scale_re(0.5), tol)
}

/// `EX-0`: the zero map M_n -> M_h.
pub fn ex_zero(n: usize, h: usize, tol: &Tolerances) -> Result<CPMap> {
    CPMap::from_choi(n, h, Mat::zeros(n * h, n * h), tol)
}

/// Resolves a fixture by its CLI name. `EX-ID` takes an optional
/// dimension suffix (`EX-ID:3`); it defaults to 2, as does `EX-0`.
pub fn by_name(name: &str, tol: &Tolerances) -> Result<CPMap> {
    let (base, dim) = match name.split_once(':') {
        Some((b, d)) => {
            let k: usize = d
                .parse()
                .map_err(|_| CpError::InvalidInput(format!("bad fixture dimension in {name:?}")))?;
            if k == 0 {
                return Err(CpError::InvalidInput("fixture dimension must be >= 1".into()));
            }
            (b, k)
        }
        None => (name, 2),
    };
    match base {
        "EX-A" => ex_a(tol),
        "EX-B" => ex_b(tol),
        "EX-ID" => ex_id(dim, tol),
        "EX-TR" => ex_tr(tol),
        "EX-0" => ex_zero(dim, dim, tol),
        _ => Err(CpError::InvalidInput(format!(
            "unknown fixture {name:?} (expected EX-A, EX-B, EX-ID[:n], EX-TR, EX-0[:n])"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_by_name() {
        let t = Tolerances::default();
        assert_eq!(by_name("EX-ID:3", &t).unwrap().n(), 3);
        assert_eq!(by_name("EX-A", &t).unwrap().h(), 2);
        assert!(by_name("EX-WAT", &t).is_err());
        assert!(by_name("EX-ID:0", &t).is_err());
    }
}
