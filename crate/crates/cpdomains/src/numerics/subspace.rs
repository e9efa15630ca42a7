use super::eig::hermitian_eig;
use super::mat::{C64, Mat};
use super::tol::Tolerances;
use crate::error::{CpError, Result};

/// Linear subspace of s x t complex matrices, stored as a basis that is
/// orthonormal under the Frobenius inner product tr(A* B).
#[derive(Debug, Clone)]
pub struct OperatorSubspace {
    ambient_rows: usize,
    ambient_cols: usize,
    basis: Vec<Mat>,
}

/// Verdict of [`subspace_compare`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceComparison {
    pub equal: bool,
    pub contains_1_in_2: bool,
    pub contains_2_in_1: bool,
    pub max_angle_sine: f64,
}

impl OperatorSubspace {
    pub fn empty(ambient_rows: usize, ambient_cols: usize) -> Self {
        OperatorSubspace {
            ambient_rows,
            ambient_cols,
            basis: vec![],
        }
    }

    /// The whole ambient space, spanned by matrix units.
    pub fn full(ambient_rows: usize, ambient_cols: usize) -> Self {
        let basis = (0..ambient_rows)
            .flat_map(|i| (0..ambient_cols).map(move |j| (i, j)))
            .map(|(i, j)| Mat::unit(ambient_rows, ambient_cols, i, j))
            .collect();
        OperatorSubspace {
            ambient_rows,
            ambient_cols,
            basis,
        }
    }

    /// Orthonormal span of an arbitrary generating family, via the Gram
    /// matrix of the stacked vectorizations (rank-revealing; a single
    /// eigendecomposition replaces iterated Gram-Schmidt).
    pub fn span(
        ambient_rows: usize,
        ambient_cols: usize,
        generators: &[Mat],
        tol: &Tolerances,
    ) -> Result<Self> {
        let d = ambient_rows * ambient_cols;
        for g in generators {
            if g.shape() != (ambient_rows, ambient_cols) {
                return Err(CpError::InvalidInput(format!(
                    "span: generator is {}x{}, ambient is {}x{}",
                    g.rows(),
                    g.cols(),
                    ambient_rows,
                    ambient_cols
                )));
            }
        }
        if generators.is_empty() || d == 0 {
            return Ok(OperatorSubspace::empty(ambient_rows, ambient_cols));
        }
        // Gram accumulation of g g* over vectorized generators.
        let mut gram = Mat::zeros(d, d);
        for g in generators {
            let v = g.vectorize();
            for (i, a) in v.iter().enumerate() {
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for (j, b) in v.iter().enumerate() {
                    gram[(i, j)] += a * b.conj();
                }
            }
        }
        let (vals, vecs) = hermitian_eig(&gram, tol)?;
        let top = vals.last().copied().unwrap_or(0.0);
        if top <= 0.0 {
            return Ok(OperatorSubspace::empty(ambient_rows, ambient_cols));
        }
        let mut basis = vec![];
        for (k, &v) in vals.iter().enumerate() {
            if v > tol.rank_rtol * top {
                basis.push(Mat::from_vectorized(
                    ambient_rows,
                    ambient_cols,
                    &vecs.column(k),
                )?);
            }
        }
        Ok(OperatorSubspace {
            ambient_rows,
            ambient_cols,
            basis,
        })
    }

    pub fn ambient_rows(&self) -> usize {
        self.ambient_rows
    }

    pub fn ambient_cols(&self) -> usize {
        self.ambient_cols
    }

    pub fn ambient_shape(&self) -> (usize, usize) {
        (self.ambient_rows, self.ambient_cols)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    /// Orthogonal projection of an ambient element onto the subspace.
    pub fn project(&self, x: &Mat) -> Mat {
        let mut out = Mat::zeros(self.ambient_rows, self.ambient_cols);
        for b in &self.basis {
            let c = b.frob_inner(x);
            out = &out + &b.scale(c);
        }
        out
    }

    /// Frobenius norm of x - P(x).
    pub fn projection_defect(&self, x: &Mat) -> f64 {
        (x - &self.project(x)).frob_norm()
    }

    /// Membership at relative tolerance: defect <= angle_tol * (1 + |x|).
    pub fn contains_element(&self, x: &Mat, tol: &Tolerances) -> bool {
        self.projection_defect(x) <= tol.angle_tol * (1.0 + x.frob_norm())
    }

    /// Intersection via the stacked complement projectors of both
    /// subspaces: the kernel of (I - P1) + (I - P2).
    pub fn intersect(&self, other: &OperatorSubspace, tol: &Tolerances) -> Result<OperatorSubspace> {
        if self.ambient_shape() != other.ambient_shape() {
            return Err(CpError::InvalidInput("intersect: ambient mismatch".into()));
        }
        let d = self.ambient_rows * self.ambient_cols;
        let mut acc = KernelAccumulator::new(d);
        acc.add_complement_projector(self);
        acc.add_complement_projector(other);
        acc.kernel(self.ambient_rows, self.ambient_cols, tol)
    }
}

/// Compares two subspaces of the same ambient matrix space.
///
/// Containment is decided by projecting each basis vector of one side
/// onto the other and thresholding the residual norm (which for a unit
/// vector equals the sine of its principal angle to the target space).
pub fn subspace_compare(
    s1: &OperatorSubspace,
    s2: &OperatorSubspace,
    tol: &Tolerances,
) -> Result<SubspaceComparison> {
    if s1.ambient_shape() != s2.ambient_shape() {
        return Err(CpError::InvalidInput(
            "subspace_compare: ambient shape mismatch".into(),
        ));
    }
    let worst = |a: &OperatorSubspace, b: &OperatorSubspace| -> f64 {
        a.basis
            .iter()
            .map(|v| b.projection_defect(v))
            .fold(0.0f64, f64::max)
    };
    let d12 = worst(s1, s2);
    let d21 = worst(s2, s1);
    let contains_1_in_2 = d12 <= tol.angle_tol;
    let contains_2_in_1 = d21 <= tol.angle_tol;
    Ok(SubspaceComparison {
        equal: contains_1_in_2 && contains_2_in_1 && s1.dim() == s2.dim(),
        contains_1_in_2,
        contains_2_in_1,
        max_angle_sine: d12.max(d21),
    })
}

/// Accumulates the Gram matrix L* L of a (possibly huge) stacked linear
/// map L block by block, then extracts the kernel by a Hermitian
/// eigendecomposition. This is the single numerical pathway behind every
/// null-space and set operation in the crate: eigenvalues of the Gram
/// matrix are squared singular values of L, and the rank cutoff is
/// applied relative to the largest one.
pub struct KernelAccumulator {
    d: usize,
    gram: Mat,
}

impl KernelAccumulator {
    pub fn new(d: usize) -> Self {
        KernelAccumulator {
            d,
            gram: Mat::zeros(d, d),
        }
    }

    /// Adds a block of rows of L (a linear map into some stacked output).
    pub fn add_block(&mut self, block: &Mat) {
        assert_eq!(block.cols(), self.d, "block has wrong column count");
        for r in 0..block.rows() {
            let row = block.row(r);
            for (i, a) in row.iter().enumerate() {
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let ac = a.conj();
                for (j, b) in row.iter().enumerate() {
                    self.gram[(i, j)] += ac * b;
                }
            }
        }
    }

    /// Adds I - P for a subspace projector; kernel directions must lie
    /// inside the subspace.
    pub fn add_complement_projector(&mut self, s: &OperatorSubspace) {
        assert_eq!(s.ambient_rows() * s.ambient_cols(), self.d);
        // A full subspace constrains nothing; skip it rather than add
        // I - sum v v*, whose cancellation noise (~machine epsilon, far
        // above the squared-residual scale of genuine Gram entries)
        // would otherwise masquerade as defect.
        if s.dim() == self.d {
            return;
        }
        // (I-P)*(I-P) = I-P, so the Gram contribution is I - sum v v*.
        for i in 0..self.d {
            self.gram[(i, i)] += C64::new(1.0, 0.0);
        }
        for b in s.basis() {
            let v = b.vectorize();
            for (i, a) in v.iter().enumerate() {
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for (j, c) in v.iter().enumerate() {
                    self.gram[(i, j)] -= a * c.conj();
                }
            }
        }
    }

    /// Extracts the kernel subspace, reshaped to ambient matrices.
    pub fn kernel(
        &self,
        ambient_rows: usize,
        ambient_cols: usize,
        tol: &Tolerances,
    ) -> Result<OperatorSubspace> {
        assert_eq!(ambient_rows * ambient_cols, self.d);
        if self.d == 0 {
            return Ok(OperatorSubspace::empty(ambient_rows, ambient_cols));
        }
        let (vals, vecs) = hermitian_eig(&self.gram, tol)?;
        let top = vals.last().copied().unwrap_or(0.0).max(0.0);
        // Gram eigenvalues are squared singular values of L, so a
        // direction with eigenvalue below residual_atol^2 has defect
        // below residual_atol and belongs to the kernel even when the
        // whole map is numerically zero (top ~ 0).
        let cut = (tol.rank_rtol * top).max(tol.residual_atol * tol.residual_atol);
        let mut basis = vec![];
        for (k, &v) in vals.iter().enumerate() {
            if v <= cut {
                basis.push(Mat::from_vectorized(ambient_rows, ambient_cols, &vecs.column(k))?);
            }
        }
        Ok(OperatorSubspace {
            ambient_rows,
            ambient_cols,
            basis,
        })
    }
}

/// Kernel of an explicit matrix L acting on vectorized
/// `ambient_rows x ambient_cols` matrices.
pub fn null_space(
    l: &Mat,
    ambient_rows: usize,
    ambient_cols: usize,
    tol: &Tolerances,
) -> Result<OperatorSubspace> {
    let d = ambient_rows * ambient_cols;
    if l.cols() != d {
        return Err(CpError::InvalidInput(format!(
            "null_space: map has {} columns, ambient dimension is {}",
            l.cols(),
            d
        )));
    }
    let mut acc = KernelAccumulator::new(d);
    acc.add_block(l);
    acc.kernel(ambient_rows, ambient_cols, tol)
}

/// Numerical rank of a matrix, singular values above rank_rtol relative
/// to the largest (applied on the squared, Gram-eigenvalue scale).
pub fn numerical_rank(m: &Mat, tol: &Tolerances) -> Result<usize> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0);
    }
    let gram = &m.adjoint() * m;
    let (vals, _) = hermitian_eig(&gram, tol)?;
    let top = vals.last().copied().unwrap_or(0.0).max(0.0);
    Ok(vals.iter().filter(|&&v| v > tol.rank_rtol * top).count())
}
