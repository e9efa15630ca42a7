use super::mat::{C64, Mat};
use super::tol::Tolerances;
use crate::error::{CpError, Result};

/// Cyclic Jacobi diagonalization of a Hermitian matrix. The matrices in
/// this crate are small (Gram matrices of operator spaces, at most a few
/// dozen rows), and kernel extraction downstream needs eigenvectors
/// accurate to machine precision, which Jacobi delivers; it is also
/// fully deterministic for a fixed sweep order.
///
/// Returns the unsorted eigenvalues (diagonal after convergence) and the
/// accumulated unitary, column k paired with eigenvalue k.
fn jacobi_hermitian(a: &Mat) -> (Vec<f64>, Mat) {
    let n = a.rows();
    let mut a = a.clone();
    let mut v = Mat::identity(n);
    let norm = a.frob_norm();
    if n <= 1 || norm == 0.0 {
        let vals = (0..n).map(|i| a[(i, i)].re).collect();
        return (vals, v);
    }
    let stop = norm * 1e-15;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let gamma = a[(p, q)];
                let g = gamma.norm();
                if g <= norm * 1e-18 {
                    continue;
                }
                // Unitary 2x2 rotation U = [[c, s*u], [-s*conj(u), c]]
                // zeroing the (p, q) entry; u is the phase of a_pq.
                let u = gamma / g;
                let alpha = a[(p, p)].re;
                let beta = a[(q, q)].re;
                let tau = (beta - alpha) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let su = u.scale(s);
                let suc = su.conj();

                // A <- U^* A U: columns first, then rows.
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip.scale(c) - aiq * suc;
                    a[(i, q)] = aip * su + aiq.scale(c);
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj.scale(c) - aqj * su;
                    a[(q, j)] = apj * suc + aqj.scale(c);
                }
                // Pin what is exact in real arithmetic.
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip.scale(c) - viq * suc;
                    v[(i, q)] = vip * su + viq.scale(c);
                }
            }
        }
    }
    let vals = (0..n).map(|i| a[(i, i)].re).collect();
    (vals, v)
}

/// Normalizes the global phase of a vector: the first entry of modulus
/// above `cut` is made positive real. Makes eigenvector output
/// reproducible byte-for-byte.
fn phase_normalize(v: &mut [C64], cut: f64) {
    for z in v.iter() {
        if z.norm() > cut {
            let phase = z / z.norm();
            let corr = phase.conj();
            for w in v.iter_mut() {
                *w *= corr;
            }
            return;
        }
    }
}

fn lex_cmp(a: &[C64], b: &[C64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        if (x.re - y.re).abs() > 1e-12 {
            return x.re.partial_cmp(&y.re).unwrap();
        }
        if (x.im - y.im).abs() > 1e-12 {
            return x.im.partial_cmp(&y.im).unwrap();
        }
    }
    std::cmp::Ordering::Equal
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues sorted ascending and a unitary matrix of
/// eigenvectors (as columns). Ties are broken by a lexicographic sort of
/// the phase-normalized eigenvectors so the output is deterministic.
pub fn hermitian_eig(m: &Mat, tol: &Tolerances) -> Result<(Vec<f64>, Mat)> {
    if !m.is_square() {
        return Err(CpError::InvalidInput(format!(
            "hermitian_eig: matrix is {}x{}, not square",
            m.rows(),
            m.cols()
        )));
    }
    let defect = m.hermitian_defect();
    if defect > tol.residual_atol {
        return Err(CpError::InvalidInput(format!(
            "hermitian_eig: matrix is not Hermitian (defect {defect:.3e})"
        )));
    }
    let n = m.rows();
    if n == 0 {
        return Ok((vec![], Mat::zeros(0, 0)));
    }
    // Work on the Hermitian part so tiny asymmetries cannot leak through.
    let herm = (m + &m.adjoint()).scale_re(0.5);
    let (vals, u) = jacobi_hermitian(&herm);

    let scale = vals.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
    let cut = 1e-12 * scale.max(1.0);

    let mut vecs: Vec<Vec<C64>> = (0..n)
        .map(|k| {
            let mut v: Vec<C64> = (0..n).map(|i| u[(i, k)]).collect();
            phase_normalize(&mut v, 1e-12);
            v
        })
        .collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let da = vals[a];
        let db = vals[b];
        if (da - db).abs() > cut {
            da.partial_cmp(&db).unwrap()
        } else {
            lex_cmp(&vecs[a], &vecs[b])
        }
    });

    let mut eigvals = Vec::with_capacity(n);
    let mut eigvecs = Mat::zeros(n, n);
    for (k, &idx) in order.iter().enumerate() {
        eigvals.push(vals[idx]);
        let v = std::mem::take(&mut vecs[idx]);
        for (i, z) in v.into_iter().enumerate() {
            eigvecs[(i, k)] = z;
        }
    }
    Ok((eigvals, eigvecs))
}

/// Largest eigenvalue of a Hermitian matrix; 0 for the empty matrix.
pub fn lambda_max(m: &Mat, tol: &Tolerances) -> Result<f64> {
    let (vals, _) = hermitian_eig(m, tol)?;
    Ok(vals.last().copied().unwrap_or(0.0))
}

/// Hermitian inverse square root, restricted to the numerically nonzero
/// eigenspace. Errors if the matrix is singular at the rank tolerance.
pub fn inv_sqrt_psd(m: &Mat, tol: &Tolerances) -> Result<Mat> {
    let (vals, vecs) = hermitian_eig(m, tol)?;
    let top = vals.last().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return Err(CpError::InvalidInput("inv_sqrt_psd: zero matrix".into()));
    }
    if vals[0] <= tol.rank_rtol * top {
        return Err(CpError::InvalidInput(
            "inv_sqrt_psd: matrix is numerically singular".into(),
        ));
    }
    let n = m.rows();
    let mut diag = Mat::zeros(n, n);
    for (i, &v) in vals.iter().enumerate() {
        diag[(i, i)] = C64::new(1.0 / v.sqrt(), 0.0);
    }
    Ok(&(&vecs * &diag) * &vecs.adjoint())
}

/// Operator (spectral) norm via the Gram matrix.
pub fn op_norm(m: &Mat, tol: &Tolerances) -> Result<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0.0);
    }
    let gram = &m.adjoint() * m;
    Ok(lambda_max(&gram, tol)?.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_already_sorted() {
        let m = Mat::from_real(2, 2, &[0.0, 0.0, 0.0, 1.0]);
        let tol = Tolerances::default();
        let (vals, vecs) = hermitian_eig(&m, &tol).unwrap();
        assert!((vals[0] - 0.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        assert!((&vecs - &Mat::identity(2)).frob_norm() < 1e-12);
    }

    #[test]
    fn pauli_x_spectrum() {
        let m = Mat::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let (vals, vecs) = hermitian_eig(&m, &Tolerances::default()).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-12 && (vals[1] - 1.0).abs() < 1e-12);
        // reconstruction
        let mut d = Mat::zeros(2, 2);
        d[(0, 0)] = C64::new(vals[0], 0.0);
        d[(1, 1)] = C64::new(vals[1], 0.0);
        let rec = &(&vecs * &d) * &vecs.adjoint();
        assert!((&m - &rec).frob_norm() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Mat::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(hermitian_eig(&m, &Tolerances::default()).is_err());
    }

    #[test]
    fn deterministic_on_repeat() {
        let m = Mat::from_real(3, 3, &[2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0]);
        let tol = Tolerances::default();
        let (v1, u1) = hermitian_eig(&m, &tol).unwrap();
        let (v2, u2) = hermitian_eig(&m, &tol).unwrap();
        assert_eq!(v1, v2);
        assert_eq!(u1.data(), u2.data());
    }
}
