//! JSON wire format: complex numbers are `[re, im]` pairs, matrices are
//! row-major nested arrays, and a problem file carries a CP map (by Choi
//! matrix, by matrix-unit action, or by fixture name) plus optional
//! module size and tolerance overrides.

use serde::{Deserialize, Serialize};

use crate::cpmaps::CPMap;
use crate::error::{CpError, Result};
use crate::fixtures;
use crate::numerics::{C64, Mat, OperatorSubspace, Tolerances};

pub type ComplexPair = [f64; 2];
pub type MatrixJson = Vec<Vec<ComplexPair>>;

pub fn mat_to_json(m: &Mat) -> MatrixJson {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn mat_from_json(rows: &MatrixJson) -> Result<Mat> {
    let r = rows.len();
    let c = rows.first().map(|x| x.len()).unwrap_or(0);
    let mut out = Mat::zeros(r, c);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != c {
            return Err(CpError::InvalidInput("ragged matrix rows in JSON".into()));
        }
        for (j, &[re, im]) in row.iter().enumerate() {
            out[(i, j)] = C64::new(re, im);
        }
    }
    Ok(out)
}

pub fn basis_to_json(s: &OperatorSubspace) -> Vec<MatrixJson> {
    s.basis().iter().map(mat_to_json).collect()
}

/// CP map on the wire: exactly one of `choi` (an nh x nh matrix) or
/// `action` (n^2 images of the matrix units, row-major) must be present.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CpMapJson {
    pub n: usize,
    pub h: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub choi: Option<MatrixJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<MatrixJson>>,
}

impl CpMapJson {
    pub fn to_cpmap(&self, tol: &Tolerances) -> Result<CPMap> {
        match (&self.choi, &self.action) {
            (Some(choi), None) => CPMap::from_choi(self.n, self.h, mat_from_json(choi)?, tol),
            (None, Some(action)) => {
                let images: Vec<Mat> = action.iter().map(mat_from_json).collect::<Result<_>>()?;
                CPMap::from_action(self.n, self.h, &images, tol)
            }
            _ => Err(CpError::InvalidInput(
                "cp_map must have exactly one of \"choi\" or \"action\"".into(),
            )),
        }
    }

    pub fn from_cpmap(phi: &CPMap) -> Self {
        CpMapJson {
            n: phi.n(),
            h: phi.h(),
            choi: Some(mat_to_json(phi.choi())),
            action: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ModuleJson {
    pub p: usize,
}

/// Per-field tolerance overrides; unspecified fields keep their defaults.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct ToleranceOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_rtol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_atol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angle_tol: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self, base: Tolerances) -> Tolerances {
        Tolerances {
            rank_rtol: self.rank_rtol.unwrap_or(base.rank_rtol),
            residual_atol: self.residual_atol.unwrap_or(base.residual_atol),
            angle_tol: self.angle_tol.unwrap_or(base.angle_tol),
        }
    }
}

/// Input problem: a CP map given inline or by fixture name, an optional
/// module row size, and optional tolerance overrides.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cp_map: Option<CpMapJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixtures: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
}

impl ProblemFile {
    pub fn from_fixture(name: &str) -> Self {
        ProblemFile {
            cp_map: None,
            fixtures: Some(name.to_string()),
            module: None,
            tolerances: None,
        }
    }

    pub fn tolerances(&self, base: Tolerances) -> Tolerances {
        self.tolerances.unwrap_or_default().apply(base)
    }

    pub fn resolve_map(&self, tol: &Tolerances) -> Result<CPMap> {
        match (&self.cp_map, &self.fixtures) {
            (Some(m), None) => m.to_cpmap(tol),
            (None, Some(name)) => fixtures::by_name(name, tol),
            (None, None) => Err(CpError::InvalidInput(
                "problem file needs a \"cp_map\" or a \"fixtures\" entry".into(),
            )),
            (Some(_), Some(_)) => Err(CpError::InvalidInput(
                "problem file has both \"cp_map\" and \"fixtures\"; pick one".into(),
            )),
        }
    }

    pub fn module_p(&self) -> Result<usize> {
        match self.module {
            Some(ModuleJson { p }) if p >= 1 => Ok(p),
            Some(_) => Err(CpError::InvalidInput("module p must be >= 1".into())),
            None => Err(CpError::InvalidInput(
                "this command needs a \"module\": {\"p\": ...} entry".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let m = Mat::from_rows(&[
            vec![C64::new(1.0, -2.0), C64::new(0.0, 3.5)],
            vec![C64::new(-1.5, 0.0), C64::new(2.0, 2.0)],
        ])
        .unwrap();
        let back = mat_from_json(&mat_to_json(&m)).unwrap();
        assert_eq!(m.data(), back.data());
    }

    #[test]
    fn problem_file_fixture_and_choi_forms() {
        let t = Tolerances::default();
        let pf: ProblemFile = serde_json::from_str(r#"{"fixtures": "EX-A"}"#).unwrap();
        let phi = pf.resolve_map(&t).unwrap();
        assert_eq!((phi.n(), phi.h()), (2, 2));

        let json = serde_json::to_string(&ProblemFile {
            cp_map: Some(CpMapJson::from_cpmap(&phi)),
            fixtures: None,
            module: Some(ModuleJson { p: 2 }),
            tolerances: None,
        })
        .unwrap();
        let pf2: ProblemFile = serde_json::from_str(&json).unwrap();
        let phi2 = pf2.resolve_map(&t).unwrap();
        assert!((phi.choi() - phi2.choi()).frob_norm() < 1e-15);
        assert_eq!(pf2.module_p().unwrap(), 2);
    }

    #[test]
    fn rejects_ambiguous_input() {
        let t = Tolerances::default();
        let pf: ProblemFile =
            serde_json::from_str(r#"{"fixtures": "EX-A", "cp_map": {"n": 1, "h": 1, "choi": [[[1.0, 0.0]]]}}"#)
                .unwrap();
        assert!(pf.resolve_map(&t).is_err());
        let pf: ProblemFile = serde_json::from_str("{}").unwrap();
        assert!(pf.resolve_map(&t).is_err());
    }

    #[test]
    fn action_form_parses() {
        let t = Tolerances::default();
        let json = r#"{"cp_map": {"n": 1, "h": 1, "action": [[[[2.0, 0.0]]]]}}"#;
        let pf: ProblemFile = serde_json::from_str(json).unwrap();
        let phi = pf.resolve_map(&t).unwrap();
        assert_eq!(phi.choi()[(0, 0)], C64::new(2.0, 0.0));
    }

    #[test]
    fn tolerance_overrides_apply() {
        let o = ToleranceOverrides {
            residual_atol: Some(1e-6),
            ..Default::default()
        };
        let t = o.apply(Tolerances::default());
        assert_eq!(t.residual_atol, 1e-6);
        assert_eq!(t.rank_rtol, 1e-10);
    }
}
