//! Completely positive maps phi: M_n -> L(C^h), stored as Choi matrices,
//! with minimal Stinespring dilations and a seeded random ensemble.
//!
//! Choi block convention: C = sum_ij E_ij (x) phi(E_ij), i.e. block (i,j)
//! of size h x h equals phi(E_ij). The map is completely positive exactly
//! when C is positive semidefinite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CpError, Result};
use crate::numerics::{C64, Mat, OperatorSubspace, Tolerances, hermitian_eig, lambda_max};

/// A completely positive linear map M_n -> L(C^h), canonically stored as
/// its nh x nh Choi matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CPMap {
    n: usize,
    h: usize,
    choi: Mat,
}

/// Minimal Stinespring data: phi(a) = V* (a (x) I_r) V with
/// V: C^h -> C^n (x) C^r, plus the Kraus form phi(a) = sum_k K_k a K_k*.
/// The representation a -> a (x) I_r is implicit and never stored.
#[derive(Debug, Clone)]
pub struct Dilation {
    pub r: usize,
    /// (n*r) x h isometry-like operator.
    pub v: Mat,
    /// r Kraus operators, each h x n, mutually orthogonal under the
    /// Frobenius inner product (they come from the Choi eigenbasis).
    pub kraus: Vec<Mat>,
}

/// Normalization applied to a randomly drawn CP map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Raw,
    Contractive,
    UnitalIfPossible,
}

/// Random draw result; `unital_fallback` is set when unital
/// normalization was requested but phi(I) was singular.
#[derive(Debug, Clone)]
pub struct RandomCpMap {
    pub map: CPMap,
    pub unital_fallback: bool,
}

impl CPMap {
    /// Assembles a CP map from the images phi(E_ij), listed row-major
    /// over (i,j). Validates complete positivity.
    pub fn from_action(n: usize, h: usize, images: &[Mat], tol: &Tolerances) -> Result<CPMap> {
        if images.len() != n * n {
            return Err(CpError::InvalidInput(format!(
                "from_action: expected {} images, got {}",
                n * n,
                images.len()
            )));
        }
        let mut choi = Mat::zeros(n * h, n * h);
        for i in 0..n {
            for j in 0..n {
                let img = &images[i * n + j];
                if img.shape() != (h, h) {
                    return Err(CpError::InvalidInput(format!(
                        "from_action: image ({i},{j}) is {}x{}, expected {h}x{h}",
                        img.rows(),
                        img.cols()
                    )));
                }
                choi.set_block(i * h, j * h, img);
            }
        }
        CPMap::from_choi(n, h, choi, tol)
    }

    /// Wraps a Choi matrix, validating Hermiticity (equivalently
    /// self-adjointness of the map) and positive semidefiniteness.
    pub fn from_choi(n: usize, h: usize, choi: Mat, tol: &Tolerances) -> Result<CPMap> {
        if choi.shape() != (n * h, n * h) {
            return Err(CpError::InvalidInput(format!(
                "choi matrix is {}x{}, expected {}x{}",
                choi.rows(),
                choi.cols(),
                n * h,
                n * h
            )));
        }
        let defect = choi.hermitian_defect();
        if defect > tol.residual_atol {
            return Err(CpError::InvalidInput(format!(
                "choi matrix is not Hermitian (defect {defect:.3e})"
            )));
        }
        let (vals, _) = hermitian_eig(&choi, tol)?;
        let top = vals.last().copied().unwrap_or(0.0).max(0.0);
        if let Some(&min) = vals.first() {
            if min < -tol.rank_rtol * top.max(1.0) {
                return Err(CpError::NotCompletelyPositive { eigenvalue: min });
            }
        }
        Ok(CPMap { n, h, choi })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn choi(&self) -> &Mat {
        &self.choi
    }

    /// phi(E_ij), block (i,j) of the Choi matrix.
    pub fn unit_image(&self, i: usize, j: usize) -> Mat {
        self.choi.block(i * self.h, j * self.h, self.h, self.h)
    }

    /// Applies the map by linear extension of the matrix-unit images.
    pub fn apply(&self, a: &Mat) -> Result<Mat> {
        if a.shape() != (self.n, self.n) {
            return Err(CpError::InvalidInput(format!(
                "apply: argument is {}x{}, expected {}x{}",
                a.rows(),
                a.cols(),
                self.n,
                self.n
            )));
        }
        let mut out = Mat::zeros(self.h, self.h);
        for i in 0..self.n {
            for j in 0..self.n {
                let c = a[(i, j)];
                if c.norm_sqr() == 0.0 {
                    continue;
                }
                for p in 0..self.h {
                    for q in 0..self.h {
                        out[(p, q)] += c * self.choi[(i * self.h + p, j * self.h + q)];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn phi_of_identity(&self) -> Mat {
        let mut out = Mat::zeros(self.h, self.h);
        for i in 0..self.n {
            for p in 0..self.h {
                for q in 0..self.h {
                    out[(p, q)] += self.choi[(i * self.h + p, i * self.h + q)];
                }
            }
        }
        out
    }

    pub fn is_completely_positive(&self, tol: &Tolerances) -> bool {
        // Re-derivable from the stored Choi matrix at any tolerance.
        match hermitian_eig(&self.choi, tol) {
            Ok((vals, _)) => {
                let top = vals.last().copied().unwrap_or(0.0).max(0.0);
                vals.first()
                    .map(|&min| min >= -tol.rank_rtol * top.max(1.0))
                    .unwrap_or(true)
            }
            Err(_) => false,
        }
    }

    pub fn is_unital(&self, tol: &Tolerances) -> bool {
        (&self.phi_of_identity() - &Mat::identity(self.h)).frob_norm() <= tol.residual_atol
    }

    /// For CP maps the operator norm is attained at the identity, so
    /// contractivity reduces to lambda_max(phi(I)) <= 1.
    pub fn is_contractive(&self, tol: &Tolerances) -> bool {
        match lambda_max(&self.phi_of_identity(), tol) {
            Ok(l) => l <= 1.0 + tol.residual_atol,
            Err(_) => false,
        }
    }

    pub fn choi_rank(&self, tol: &Tolerances) -> Result<usize> {
        let (vals, _) = hermitian_eig(&self.choi, tol)?;
        let top = vals.last().copied().unwrap_or(0.0).max(0.0);
        Ok(vals.iter().filter(|&&v| v > tol.rank_rtol * top).count())
    }

    /// Purity operationalized as Choi rank 1 (single Kraus operator).
    pub fn is_pure(&self, tol: &Tolerances) -> Result<bool> {
        Ok(self.choi_rank(tol)? == 1)
    }

    pub fn is_zero(&self, tol: &Tolerances) -> bool {
        self.choi.frob_norm() <= tol.residual_atol
    }

    /// Constructs a minimal Stinespring dilation from the Choi
    /// eigendecomposition. The Kraus operators are eigenvector reshapes
    /// scaled by sqrt(eigenvalue), hence mutually orthogonal; this makes
    /// the dilation minimal by construction.
    pub fn minimal_stinespring(&self, tol: &Tolerances) -> Result<Dilation> {
        let (vals, vecs) = hermitian_eig(&self.choi, tol)?;
        let top = vals.last().copied().unwrap_or(0.0).max(0.0);
        let mut kraus = vec![];
        for (k, &v) in vals.iter().enumerate() {
            if v > tol.rank_rtol * top {
                let col = vecs.column(k);
                // Choi eigenvector is indexed (i, a); K[a][i] = sqrt(v) * col[i*h + a].
                let mut km = Mat::zeros(self.h, self.n);
                let s = v.max(0.0).sqrt();
                for i in 0..self.n {
                    for a in 0..self.h {
                        km[(a, i)] = col[i * self.h + a] * C64::new(s, 0.0);
                    }
                }
                kraus.push(km);
            }
        }
        let r = kraus.len();
        if r == 0 {
            return Err(CpError::DegenerateDilation);
        }
        // V xi = sum_k (K_k* xi) (x) e_k; entry ((i,k), a) = conj(K_k[a, i]).
        let mut v = Mat::zeros(self.n * r, self.h);
        for (k, km) in kraus.iter().enumerate() {
            for i in 0..self.n {
                for a in 0..self.h {
                    v[(i * r + k, a)] = km[(a, i)].conj();
                }
            }
        }
        let d = Dilation { r, v, kraus };
        d.validate(self, tol)?;
        Ok(d)
    }

    /// Draws a CP map with `choi_rank` Gaussian Kraus operators from a
    /// deterministic seeded generator (ChaCha8 keyed by `seed`,
    /// Box-Muller complex normals), then normalizes.
    pub fn random(
        n: usize,
        h: usize,
        choi_rank: usize,
        normalization: Normalization,
        seed: u64,
        tol: &Tolerances,
    ) -> Result<RandomCpMap> {
        if choi_rank < 1 || choi_rank > n * h {
            return Err(CpError::InvalidInput(format!(
                "choi_rank {choi_rank} out of range 1..={}",
                n * h
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Gaussian Kraus are almost surely independent; re-draw on the
        // (measure-zero) event of numerical rank deficiency.
        for _attempt in 0..16 {
            let kraus: Vec<Mat> = (0..choi_rank)
                .map(|_| gaussian_matrix(&mut rng, h, n))
                .collect();
            let images = images_from_kraus(n, h, &kraus);
            let raw = CPMap::from_action(n, h, &images, tol)?;
            let (map, unital_fallback) = match normalization {
                Normalization::Raw => (raw, false),
                Normalization::Contractive => (raw.normalize_contractive(tol)?, false),
                Normalization::UnitalIfPossible => {
                    match raw.normalize_unital(&kraus, tol) {
                        Ok(m) => (m, false),
                        Err(_) => (raw.normalize_contractive(tol)?, true),
                    }
                }
            };
            if map.choi_rank(tol)? == choi_rank {
                return Ok(RandomCpMap { map, unital_fallback });
            }
        }
        Err(CpError::InvalidInput(
            "random: persistent rank deficiency (bad dimensions?)".into(),
        ))
    }

    fn normalize_contractive(&self, tol: &Tolerances) -> Result<CPMap> {
        let l = lambda_max(&self.phi_of_identity(), tol)?;
        if l <= 0.0 {
            return Ok(self.clone());
        }
        CPMap::from_choi(self.n, self.h, self.choi.scale_re(1.0 / l), tol)
    }

    fn normalize_unital(&self, kraus: &[Mat], tol: &Tolerances) -> Result<CPMap> {
        // K_k' = M^{-1/2} K_k with M = phi(I) = sum K K*; then
        // sum K' K'* = I, i.e. the map is unital.
        let m = self.phi_of_identity();
        let s = crate::numerics::inv_sqrt_psd(&m, tol)?;
        let adjusted: Vec<Mat> = kraus.iter().map(|k| &s * k).collect();
        let images = images_from_kraus(self.n, self.h, &adjusted);
        CPMap::from_action(self.n, self.h, &images, tol)
    }
}

fn images_from_kraus(n: usize, h: usize, kraus: &[Mat]) -> Vec<Mat> {
    let mut images = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            // K E_ij K* = K[:,i] (K[:,j])*
            let mut img = Mat::zeros(h, h);
            for k in kraus {
                for a in 0..h {
                    for b in 0..h {
                        img[(a, b)] += k[(a, i)] * k[(b, j)].conj();
                    }
                }
            }
            images.push(img);
        }
    }
    images
}

/// Standard complex Gaussian entries via Box-Muller on the uniform
/// stream of the seeded generator; documented so reproducibility is
/// well-defined across platforms.
fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat {
    let mut m = Mat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let u1: f64 = loop {
                let u: f64 = rng.gen();
                if u > 0.0 {
                    break u;
                }
            };
            let u2: f64 = rng.gen();
            let rad = (-2.0 * u1.ln()).sqrt() / 2.0f64.sqrt();
            let ang = 2.0 * std::f64::consts::PI * u2;
            m[(i, j)] = C64::new(rad * ang.cos(), rad * ang.sin());
        }
    }
    m
}

impl Dilation {
    /// Checks the Stinespring reconstruction, the Kraus form, and
    /// minimality against the map the dilation was built from.
    pub fn validate(&self, phi: &CPMap, tol: &Tolerances) -> Result<()> {
        let n = phi.n();
        let h = phi.h();
        let ir = Mat::identity(self.r);
        let vadj = self.v.adjoint();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let unit = Mat::unit(n, n, i, j);
                let img = phi.unit_image(i, j);
                let rec = &(&vadj * &unit.kron(&ir)) * &self.v;
                worst = worst.max((&rec - &img).frob_norm());
                let mut ksum = Mat::zeros(h, h);
                for k in &self.kraus {
                    ksum = &ksum + &(&(k * &unit) * &k.adjoint());
                }
                worst = worst.max((&ksum - &img).frob_norm());
            }
        }
        if worst > tol.residual_atol {
            return Err(CpError::InvalidInput(format!(
                "dilation reconstruction residual {worst:.3e}"
            )));
        }
        if self.minimality_dimension(n, tol)? != n * self.r {
            return Err(CpError::InvalidInput("dilation is not minimal".into()));
        }
        Ok(())
    }

    /// dim span{(E_ij (x) I_r) V xi} — equals n*r exactly when minimal.
    pub fn minimality_dimension(&self, n: usize, tol: &Tolerances) -> Result<usize> {
        let h = self.v.cols();
        let ir = Mat::identity(self.r);
        let mut gens = vec![];
        for i in 0..n {
            for j in 0..n {
                let amp = &Mat::unit(n, n, i, j).kron(&ir) * &self.v;
                for a in 0..h {
                    gens.push(Mat::from_vec(n * self.r, 1, amp.column(a))?);
                }
            }
        }
        Ok(OperatorSubspace::span(n * self.r, 1, &gens, tol)?.dim())
    }
}
