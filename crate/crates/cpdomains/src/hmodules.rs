//! The Hilbert C*-module X = M_{p,n} over M_n, phi-maps on it, and the
//! module ternary domain X_phi computed by four independent routes.
//!
//! Elements of X are p x n matrices with inner product <x,y> = x*y and
//! the right action x.a of M_n. The compacts K(X) are M_p acting by left
//! multiplication, with rank-one generators theta(y, x) = y x*. Given a
//! CP map phi with minimal dilation (V, r), the amplification
//! Pi(x) = x (x) I_r intertwines the module structure, and the canonical
//! phi-map is Phi(x) = W* Pi(x) V where W embeds the subspace
//! K_phi = span{Pi(x) V xi} isometrically.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cpmaps::{CPMap, Dilation};
use crate::domains::in_mult_domain;
use crate::error::{CpError, Result};
use crate::numerics::{C64, KernelAccumulator, Mat, OperatorSubspace, Tolerances};

/// The module X = M_{p,n} of p x n matrices over M_n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModuleSpace {
    pub p: usize,
    pub n: usize,
}

impl ModuleSpace {
    pub fn new(p: usize, n: usize) -> Result<Self> {
        if p == 0 || n == 0 {
            return Err(CpError::InvalidInput("module dimensions must be >= 1".into()));
        }
        Ok(ModuleSpace { p, n })
    }

    /// Matrix units of X in row-major order.
    pub fn basis(&self) -> Vec<Mat> {
        (0..self.p)
            .flat_map(|i| (0..self.n).map(move |j| Mat::unit(self.p, self.n, i, j)))
            .collect()
    }

    /// The M_n-valued inner product <x,y> = x*y.
    pub fn inner(&self, x: &Mat, y: &Mat) -> Mat {
        &x.adjoint() * y
    }

    pub fn check_shape(&self, x: &Mat) -> Result<()> {
        if x.shape() != (self.p, self.n) {
            return Err(CpError::InvalidInput(format!(
                "module element is {}x{}, expected {}x{}",
                x.rows(),
                x.cols(),
                self.p,
                self.n
            )));
        }
        Ok(())
    }
}

/// theta(y, x) = y x* in K(X) = M_p; left multiplication by it realizes
/// z -> y <x, z>.
pub fn theta(y: &Mat, x: &Mat) -> Result<Mat> {
    if y.shape() != x.shape() {
        return Err(CpError::InvalidInput("theta: shape mismatch".into()));
    }
    Ok(y * &x.adjoint())
}

/// A concrete phi-map Phi: X -> matrices, satisfying
/// Phi(x)*Phi(y) = phi(<x,y>).
#[derive(Debug, Clone)]
pub struct PhiMapRealization {
    pub phi: CPMap,
    pub d: Dilation,
    pub space: ModuleSpace,
    /// Dimension of K_phi = span{(x (x) I_r)V xi}.
    pub k: usize,
    /// (p*r) x k isometry whose columns are an orthonormal basis of K_phi.
    pub embed: Mat,
    /// Optional extra isometry S (k' x k, S*S = I) composed on the left;
    /// used to realize non-canonical phi-maps for independence tests.
    pub post_isometry: Option<Mat>,
}

impl PhiMapRealization {
    /// Output row dimension of Phi(x).
    pub fn out_dim(&self) -> usize {
        match &self.post_isometry {
            Some(s) => s.rows(),
            None => self.k,
        }
    }

    /// The BRS operator W with Phi(x) = W* Pi(x) V. For a twisted
    /// realization W = embed . S*.
    pub fn w(&self) -> Mat {
        match &self.post_isometry {
            Some(s) => &self.embed * &s.adjoint(),
            None => self.embed.clone(),
        }
    }

    /// Phi(x) = W* (x (x) I_r) V, an out_dim x h matrix.
    pub fn apply(&self, x: &Mat) -> Result<Mat> {
        self.space.check_shape(x)?;
        let amp = x.kron(&Mat::identity(self.d.r));
        Ok(&(&self.w().adjoint() * &amp) * &self.d.v)
    }

    /// Worst defect of the phi-map identity Phi(x)*Phi(y) = phi(<x,y>)
    /// over all module basis pairs.
    pub fn phi_map_defect(&self) -> Result<f64> {
        let basis = self.space.basis();
        let images: Vec<Mat> = basis.iter().map(|x| self.apply(x)).collect::<Result<_>>()?;
        let mut worst = 0.0f64;
        for (x, px) in basis.iter().zip(images.iter()) {
            for (y, py) in basis.iter().zip(images.iter()) {
                let lhs = &px.adjoint() * py;
                let rhs = self.phi.apply(&self.space.inner(x, y))?;
                worst = worst.max((&lhs - &rhs).frob_norm());
            }
        }
        Ok(worst)
    }
}

/// Builds the canonical phi-map for phi on X = M_{p,n}: computes the
/// minimal dilation, the subspace K_phi, and Phi(x) = embed* (x (x) I_r) V.
/// By construction [Phi(X)H] is all of C^k.
pub fn canonical_phi_map(
    phi: &CPMap,
    space: &ModuleSpace,
    tol: &Tolerances,
) -> Result<PhiMapRealization> {
    if space.n != phi.n() {
        return Err(CpError::InvalidInput(
            "module coefficient size must match the map's domain".into(),
        ));
    }
    let d = phi.minimal_stinespring(tol)?;
    canonical_phi_map_with_dilation(phi, &d, space, tol)
}

/// Same construction reusing an existing dilation.
pub fn canonical_phi_map_with_dilation(
    phi: &CPMap,
    d: &Dilation,
    space: &ModuleSpace,
    tol: &Tolerances,
) -> Result<PhiMapRealization> {
    if d.r == 0 {
        return Err(CpError::DegenerateDilation);
    }
    let (p, n) = (space.p, space.n);
    let ir = Mat::identity(d.r);
    // Generators of K_phi: columns of (E_ij (x) I_r) V as p*r vectors.
    let mut gens = vec![];
    for i in 0..p {
        for j in 0..n {
            let amp = &Mat::unit(p, n, i, j).kron(&ir) * &d.v;
            for a in 0..phi.h() {
                gens.push(Mat::from_vec(p * d.r, 1, amp.column(a))?);
            }
        }
    }
    let kspace = OperatorSubspace::span(p * d.r, 1, &gens, tol)?;
    let k = kspace.dim();
    let mut embed = Mat::zeros(p * d.r, k);
    for (c, b) in kspace.basis().iter().enumerate() {
        for row in 0..p * d.r {
            embed[(row, c)] = b[(row, 0)];
        }
    }
    let real = PhiMapRealization {
        phi: phi.clone(),
        d: d.clone(),
        space: *space,
        k,
        embed,
        post_isometry: None,
    };
    let defect = real.phi_map_defect()?;
    if defect > tol.residual_atol {
        return Err(CpError::InvalidInput(format!(
            "canonical phi-map identity defect {defect:.3e}"
        )));
    }
    Ok(real)
}

/// Composes the realization with a seeded random isometry
/// S: C^k -> C^{k+2}, producing a different phi-map with the same phi.
/// Exercises the independence of X_Phi from the choice of Phi.
pub fn twist_phi_map(base: &PhiMapRealization, seed: u64, tol: &Tolerances) -> Result<PhiMapRealization> {
    let k = base.out_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Orthonormalize the columns of a Gaussian (k+2) x k matrix; any
    // orthonormal basis of its column space gives an isometry.
    let mut cols = vec![];
    for _ in 0..k {
        let mut v = Mat::zeros(k + 2, 1);
        for i in 0..k + 2 {
            let re: f64 = rng.gen::<f64>() - 0.5;
            let im: f64 = rng.gen::<f64>() - 0.5;
            v[(i, 0)] = C64::new(re, im);
        }
        cols.push(v);
    }
    let span = OperatorSubspace::span(k + 2, 1, &cols, tol)?;
    if span.dim() != k {
        return Err(CpError::InvalidInput("twist: degenerate random isometry".into()));
    }
    let mut s = Mat::zeros(k + 2, k);
    for (c, b) in span.basis().iter().enumerate() {
        for row in 0..k + 2 {
            s[(row, c)] = b[(row, 0)];
        }
    }
    let s = match &base.post_isometry {
        Some(prev) => &s * prev,
        None => s,
    };
    Ok(PhiMapRealization {
        post_isometry: Some(s),
        ..base.clone()
    })
}

/// X_Phi = {x : Phi(x b) = Phi(x) phi(b) for all b}, as the null space of
/// the stacked defect maps with b over matrix units.
pub fn module_domain_def(real: &PhiMapRealization, tol: &Tolerances) -> Result<OperatorSubspace> {
    let (p, n) = (real.space.p, real.space.n);
    let mut acc = KernelAccumulator::new(p * n);
    for s in 0..n {
        for t in 0..n {
            let b = Mat::unit(n, n, s, t);
            let pb = real.phi.unit_image(s, t);
            let block = Mat::of_linear_map(p, n, |i, j| {
                let x = Mat::unit(p, n, i, j);
                let xb = &x * &b;
                let lhs = real.apply(&xb).expect("shape checked");
                let rhs = &real.apply(&x).expect("shape checked") * &pb;
                &lhs - &rhs
            });
            acc.add_block(&block);
        }
    }
    acc.kernel(p, n, tol)
}

/// X_phi from the dilation: null space of x -> (x (x) I_r)(I - VV*).
pub fn module_domain_stinespring(
    _phi: &CPMap,
    d: &Dilation,
    space: &ModuleSpace,
    tol: &Tolerances,
) -> Result<OperatorSubspace> {
    if d.r == 0 {
        return Err(CpError::DegenerateDilation);
    }
    let (p, n) = (space.p, space.n);
    let ir = Mat::identity(d.r);
    let q = &Mat::identity(n * d.r) - &(&d.v * &d.v.adjoint());
    let mut acc = KernelAccumulator::new(p * n);
    acc.add_block(&Mat::of_linear_map(p, n, |i, j| {
        &Mat::unit(p, n, i, j).kron(&ir) * &q
    }));
    acc.kernel(p, n, tol)
}

/// X_phi = X . T_phi: the span of module units multiplied by a basis of
/// the ternary domain.
pub fn module_domain_from_ideal(
    space: &ModuleSpace,
    t: &OperatorSubspace,
    tol: &Tolerances,
) -> Result<OperatorSubspace> {
    if t.ambient_shape() != (space.n, space.n) {
        return Err(CpError::InvalidInput(
            "ideal must be a subspace of the coefficient algebra".into(),
        ));
    }
    let mut gens = vec![];
    for e in space.basis() {
        for b in t.basis() {
            gens.push(&e * b);
        }
    }
    OperatorSubspace::span(space.p, space.n, &gens, tol)
}

/// Membership via the Gram element: x is in X_phi iff <x,x> lies in
/// T_phi. Tolerance scales with |x|^2 since the Gram is quadratic.
pub fn gram_predicate(x: &Mat, t: &OperatorSubspace, tol: &Tolerances) -> Result<bool> {
    if x.cols() != t.ambient_rows() {
        return Err(CpError::InvalidInput("gram_predicate: shape mismatch".into()));
    }
    let gram = &x.adjoint() * x;
    let norm = x.frob_norm();
    Ok(t.projection_defect(&gram) <= tol.residual_atol * (1.0 + norm * norm))
}

/// Worst ternary defect max_{y,z} |Phi(y<x,z>) - Phi(y)Phi(x)*Phi(z)|
/// over module basis pairs; vanishes exactly on X_phi.
pub fn ternary_residual(real: &PhiMapRealization, x: &Mat, _tol: &Tolerances) -> Result<f64> {
    real.space.check_shape(x)?;
    let basis = real.space.basis();
    let images: Vec<Mat> = basis.iter().map(|y| real.apply(y)).collect::<Result<_>>()?;
    let px_adj = real.apply(x)?.adjoint();
    let mut worst = 0.0f64;
    for (y, py) in basis.iter().zip(images.iter()) {
        for (z, pz) in basis.iter().zip(images.iter()) {
            let lhs = real.apply(&(y * &real.space.inner(x, z)))?;
            let rhs = &(py * &px_adj) * pz;
            worst = worst.max((&lhs - &rhs).frob_norm());
        }
    }
    Ok(worst)
}

/// Verdict of the cube identity Phi(x<x,x>) = Phi(x) phi(<x,x>) versus
/// multiplicative-domain membership of the Gram element. The two agree
/// for contractive phi and can disagree otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CubeCriterion {
    pub cube_equality: bool,
    pub gram_in_m: bool,
}

pub fn contractive_cube_criterion(
    real: &PhiMapRealization,
    x: &Mat,
    tol: &Tolerances,
) -> Result<CubeCriterion> {
    real.space.check_shape(x)?;
    let gram = real.space.inner(x, x);
    let lhs = real.apply(&(x * &gram))?;
    let rhs = &real.apply(x)? * &real.phi.apply(&gram)?;
    Ok(CubeCriterion {
        cube_equality: (&lhs - &rhs).frob_norm() <= tol.residual_atol,
        gram_in_m: in_mult_domain(&real.phi, &gram, tol)?,
    })
}

/// Residuals of the four equivalent membership characterizations of
/// x in X_phi for the BRS data (W, V): the ternary defect, the
/// amplification criterion, and the two W-intertwining identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrsReport {
    /// max_{y,z} |Phi(y<x,z>) - Phi(y)Phi(x)*Phi(z)|.
    pub ternary: f64,
    /// |Pi(x)(I - VV*)|.
    pub amplification: f64,
    /// |W* Pi(x) - Phi(x) V*|.
    pub intertwine: f64,
    /// |Pi(x) - W Phi(x) V*|.
    pub reconstruction: f64,
}

impl BrsReport {
    pub fn max(&self) -> f64 {
        self.ternary
            .max(self.amplification)
            .max(self.intertwine)
            .max(self.reconstruction)
    }
}

pub fn brs_checks(real: &PhiMapRealization, x: &Mat, tol: &Tolerances) -> Result<BrsReport> {
    real.space.check_shape(x)?;
    let amp = x.kron(&Mat::identity(real.d.r));
    let q = &Mat::identity(real.space.n * real.d.r) - &(&real.d.v * &real.d.v.adjoint());
    let w = real.w();
    let px = real.apply(x)?;
    let pv = &px * &real.d.v.adjoint();
    Ok(BrsReport {
        ternary: ternary_residual(real, x, tol)?,
        amplification: (&amp * &q).frob_norm(),
        intertwine: (&(&w.adjoint() * &amp) - &pv).frob_norm(),
        reconstruction: (&amp - &(&w * &pv)).frob_norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::ternary_domain_def;
    use crate::fixtures;
    use crate::numerics::subspace_compare;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn theta_examples() {
        let e11 = Mat::unit(2, 2, 0, 0);
        let e21 = Mat::unit(2, 2, 1, 0);
        assert!((&theta(&e11, &e11).unwrap() - &e11).frob_norm() < 1e-14);
        // y x* = E11 E12 = E12
        assert!((&theta(&e11, &e21).unwrap() - &Mat::unit(2, 2, 0, 1)).frob_norm() < 1e-14);
    }

    #[test]
    fn module_is_full() {
        // span{<E_ij, E_kl>} = M_n.
        let t = tol();
        let space = ModuleSpace::new(3, 2).unwrap();
        let mut gens = vec![];
        for x in space.basis() {
            for y in space.basis() {
                gens.push(space.inner(&x, &y));
            }
        }
        let s = OperatorSubspace::span(2, 2, &gens, &t).unwrap();
        assert_eq!(s.dim(), 4);
    }

    #[test]
    fn canonical_map_ex_a() {
        let t = tol();
        let phi = fixtures::ex_a(&t).unwrap();
        let space = ModuleSpace::new(2, 2).unwrap();
        let real = canonical_phi_map(&phi, &space, &t).unwrap();
        assert_eq!(real.k, 2);
        assert!(real.phi_map_defect().unwrap() < 1e-12);
        // Up to the constructed unitary, Phi(x) = x E11: its Gram with
        // itself must match phi(x*x) and Phi kills the second column.
        let x = Mat::from_real(2, 2, &[0.0, 1.0, 0.0, 1.0]);
        assert!(real.apply(&x).unwrap().frob_norm() < 1e-12);
        let y = Mat::from_real(2, 2, &[1.0, 0.0, 1.0, 0.0]);
        assert!((real.apply(&y).unwrap().frob_norm() - y.frob_norm()).abs() < 1e-12);
    }

    #[test]
    fn canonical_map_ex_b_scales() {
        let t = tol();
        let phi = fixtures::ex_b(&t).unwrap();
        let space = ModuleSpace::new(2, 2).unwrap();
        let real = canonical_phi_map(&phi, &space, &t).unwrap();
        // Phi(x) = sqrt(2) x E11 up to unitary.
        let y = Mat::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert!((real.apply(&y).unwrap().frob_norm() - 2.0f64.sqrt()).abs() < 1e-12);
        assert!(real.phi_map_defect().unwrap() < 1e-12);
    }

    #[test]
    fn canonical_map_identity_channel() {
        let t = tol();
        let phi = fixtures::ex_id(2, &t).unwrap();
        let space = ModuleSpace::new(2, 2).unwrap();
        let real = canonical_phi_map(&phi, &space, &t).unwrap();
        assert_eq!(real.k, 2);
        // Phi is unitarily equivalent to the identity map.
        let x = Mat::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert!((real.apply(&x).unwrap().frob_norm() - x.frob_norm()).abs() < 1e-12);
    }

    #[test]
    fn module_domain_ex_a_four_ways() {
        let t = tol();
        let phi = fixtures::ex_a(&t).unwrap();
        let space = ModuleSpace::new(2, 2).unwrap();
        let real = canonical_phi_map(&phi, &space, &t).unwrap();

        let s_def = module_domain_def(&real, &t).unwrap();
        assert_eq!(s_def.dim(), 2);
        // First-column matrices.
        assert!(s_def.contains_element(&Mat::unit(2, 2, 0, 0), &t));
        assert!(s_def.contains_element(&Mat::unit(2, 2, 1, 0), &t));

        let s_st = module_domain_stinespring(&phi, &real.d, &space, &t).unwrap();
        assert!(subspace_compare(&s_def, &s_st, &t).unwrap().equal);

        let tern = ternary_domain_def(&phi, &t).unwrap();
        let s_ideal = module_domain_from_ideal(&space, &tern.subspace, &t).unwrap();
        assert!(subspace_compare(&s_def, &s_ideal, &t).unwrap().equal);

        // Membership by Gram predicate and ternary residual.
        let inside = Mat::from_real(2, 2, &[1.0, 0.0, 1.0, 0.0]);
        let outside = Mat::from_real(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        assert!(gram_predicate(&inside, &tern.subspace, &t).unwrap());
        assert!(!gram_predicate(&outside, &tern.subspace, &t).unwrap());
        assert!(ternary_residual(&real, &Mat::unit(2, 2, 0, 0), &t).unwrap() < 1e-12);
        assert!(ternary_residual(&real, &Mat::unit(2, 2, 0, 1), &t).unwrap() > 0.5);
    }

    #[test]
    fn module_domain_trace_map_is_zero() {
        let t = tol();
        let phi = fixtures::ex_tr(&t).unwrap();
        let space = ModuleSpace::new(2, 2).unwrap();
        let real = canonical_phi_map(&phi, &space, &t).unwrap();
        assert_eq!(module_domain_def(&real, &t).unwrap().dim(), 0);
    }

    #[test]
    fn module_domain_identity_is_everything() {
        let t = tol();
        let phi = fixtures::ex_id(2, &t).unwrap();
        let space = ModuleSpace::new(2, 2).unwrap();
        let real = canonical_phi_map(&phi, &space, &t).unwrap();
        assert_eq!(module_domain_def(&real, &t).unwrap().dim(), 4);
        assert_eq!(
            module_domain_stinespring(&phi, &real.d, &space, &t).unwrap().dim(),
            4
        );
    }

    #[test]
    fn ideal_edge_cases() {
        let t = tol();
        let space = ModuleSpace::new(2, 2).unwrap();
        let zero = OperatorSubspace::empty(2, 2);
        assert_eq!(module_domain_from_ideal(&space, &zero, &t).unwrap().dim(), 0);
        let full = OperatorSubspace::full(2, 2);
        assert_eq!(module_domain_from_ideal(&space, &full, &t).unwrap().dim(), 4);
    }

    #[test]
    fn twist_preserves_identity_and_domain() {
        let t = tol();
        let phi = fixtures::ex_a(&t).unwrap();
        let space = ModuleSpace::new(2, 2).unwrap();
        let base = canonical_phi_map(&phi, &space, &t).unwrap();
        let twisted = twist_phi_map(&base, 3, &t).unwrap();
        assert_eq!(twisted.out_dim(), base.out_dim() + 2);
        assert!(twisted.phi_map_defect().unwrap() < 1e-12);
        let s1 = module_domain_def(&base, &t).unwrap();
        let s2 = module_domain_def(&twisted, &t).unwrap();
        assert!(subspace_compare(&s1, &s2, &t).unwrap().equal);
    }

    #[test]
    fn cube_criterion_counterexample() {
        let t = tol();
        let phi = fixtures::ex_b(&t).unwrap();
        let space = ModuleSpace::new(2, 2).unwrap();
        let real = canonical_phi_map(&phi, &space, &t).unwrap();
        let x0 = fixtures::ex_b_x0();
        let verdict = contractive_cube_criterion(&real, &x0, &t).unwrap();
        assert!(verdict.cube_equality);
        assert!(!verdict.gram_in_m);

        // On the contractive EX-A the two predicates agree.
        let phi_a = fixtures::ex_a(&t).unwrap();
        let real_a = canonical_phi_map(&phi_a, &space, &t).unwrap();
        let x = Mat::from_real(2, 2, &[1.0, 0.0, 1.0, 0.0]);
        let verdict = contractive_cube_criterion(&real_a, &x, &t).unwrap();
        assert!(verdict.cube_equality && verdict.gram_in_m);
        let zero = Mat::zeros(2, 2);
        let verdict = contractive_cube_criterion(&real_a, &zero, &t).unwrap();
        assert!(verdict.cube_equality && verdict.gram_in_m);
    }

    #[test]
    fn brs_residuals_on_ex_a() {
        let t = tol();
        let phi = fixtures::ex_a(&t).unwrap();
        let space = ModuleSpace::new(2, 2).unwrap();
        let real = canonical_phi_map(&phi, &space, &t).unwrap();
        let inside = Mat::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let rep = brs_checks(&real, &inside, &t).unwrap();
        assert!(rep.max() < 1e-10, "{rep:?}");
        let outside = Mat::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let rep = brs_checks(&real, &outside, &t).unwrap();
        assert!((rep.amplification - 1.0).abs() < 1e-12);
        assert!(rep.max() > 0.5);
        let zero = Mat::zeros(2, 2);
        let rep = brs_checks(&real, &zero, &t).unwrap();
        assert!(rep.max() < 1e-14);
    }

    #[test]
    fn star_homomorphism_iff_full_module_domain() {
        let t = tol();
        // Identity channel: a *-homomorphism, X_phi = X.
        let phi = fixtures::ex_id(2, &t).unwrap();
        let space = ModuleSpace::new(2, 2).unwrap();
        let real = canonical_phi_map(&phi, &space, &t).unwrap();
        assert_eq!(module_domain_def(&real, &t).unwrap().dim(), 4);
        for x in space.basis() {
            assert!(ternary_residual(&real, &x, &t).unwrap() < 1e-10);
        }
        // EX-A is not a *-homomorphism and X_phi is proper.
        let phi_a = fixtures::ex_a(&t).unwrap();
        let real_a = canonical_phi_map(&phi_a, &space, &t).unwrap();
        assert!(module_domain_def(&real_a, &t).unwrap().dim() < 4);
    }
}
