//! Multiplicative domain M_phi and ternary domain T_phi of a CP map,
//! each computed by two independent algorithms.
//!
//! The central observation: every defining condition (for example
//! phi(ab) = phi(a)phi(b) for all b) is linear in the unknown a once the
//! quantified variables are fixed, and linearity in those variables means
//! ranging them over matrix units is equivalent to universal
//! quantification. So each domain is exactly the null space of a stacked
//! linear map and reduces to one rank computation. The definitional
//! route below uses only the map's action; the Stinespring route uses
//! only the dilation. Keeping the two free of shared intermediate
//! results is what makes their agreement a meaningful check.

use crate::cpmaps::{CPMap, Dilation};
use crate::error::{CpError, Result};
use crate::numerics::{
    KernelAccumulator, Mat, OperatorSubspace, Tolerances, subspace_compare,
};

/// Which route produced a [`DomainReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainAlgorithm {
    Definitional,
    Stinespring,
}

impl DomainAlgorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            DomainAlgorithm::Definitional => "definitional",
            DomainAlgorithm::Stinespring => "stinespring",
        }
    }
}

/// A computed domain subspace together with the worst-case defect of its
/// defining conditions evaluated on the returned basis.
#[derive(Debug, Clone)]
pub struct DomainReport {
    pub subspace: OperatorSubspace,
    pub algorithm: DomainAlgorithm,
    pub residual: f64,
}

/// Outcome of the algebraic structure checks on a pair (M, T).
#[derive(Debug, Clone)]
pub struct StructureReport {
    /// M is closed under adjoints.
    pub m_star_closed: bool,
    /// Products of M-basis pairs stay in M.
    pub m_subalgebra: bool,
    /// T is closed under adjoints.
    pub t_star_closed: bool,
    /// span(M·T) and span(T·M) are contained in T.
    pub t_ideal_in_m: bool,
    /// span(T·M_n·T) = T, both containments.
    pub tat_equals_t: bool,
    pub t_in_m: bool,
    /// Worst principal-angle sine over all containment checks.
    pub worst_defect: f64,
}

impl StructureReport {
    pub fn all_pass(&self) -> bool {
        self.m_star_closed
            && self.m_subalgebra
            && self.t_star_closed
            && self.t_ideal_in_m
            && self.tat_equals_t
            && self.t_in_m
    }
}

/// Images of all matrix units, indexed [i][j]; the only thing the
/// definitional algorithms ever read from the map.
fn unit_images(phi: &CPMap) -> Vec<Vec<Mat>> {
    let n = phi.n();
    (0..n)
        .map(|i| (0..n).map(|j| phi.unit_image(i, j)).collect())
        .collect()
}

/// M_phi = {a : phi(ab) = phi(a)phi(b) and phi(ba) = phi(b)phi(a) for
/// all b}, computed as the null space of the stacked defect maps with b
/// ranging over matrix units.
pub fn mult_domain_def(phi: &CPMap, tol: &Tolerances) -> Result<DomainReport> {
    let n = phi.n();
    let f = unit_images(phi);
    let mut acc = KernelAccumulator::new(n * n);
    for s in 0..n {
        for t in 0..n {
            // b = E_st; columns indexed by a = E_kl.
            let right = Mat::of_linear_map(n, n, |k, l| {
                // phi(E_kl E_st) - phi(E_kl) phi(E_st)
                let prod = &f[k][l] * &f[s][t];
                if l == s { &f[k][t] - &prod } else { -&prod }
            });
            acc.add_block(&right);
            let left = Mat::of_linear_map(n, n, |k, l| {
                // phi(E_st E_kl) - phi(E_st) phi(E_kl)
                let prod = &f[s][t] * &f[k][l];
                if t == k { &f[s][l] - &prod } else { -&prod }
            });
            acc.add_block(&left);
        }
    }
    let subspace = acc.kernel(n, n, tol)?;
    let residual = mult_defect_on(phi, subspace.basis())?;
    Ok(DomainReport {
        subspace,
        algorithm: DomainAlgorithm::Definitional,
        residual,
    })
}

/// Worst multiplicative defect of the given elements, quantified over
/// matrix units.
fn mult_defect_on(phi: &CPMap, elems: &[Mat]) -> Result<f64> {
    let n = phi.n();
    let mut worst = 0.0f64;
    for a in elems {
        let pa = phi.apply(a)?;
        for s in 0..n {
            for t in 0..n {
                let b = Mat::unit(n, n, s, t);
                let pb = phi.unit_image(s, t);
                worst = worst.max((&phi.apply(&(a * &b))? - &(&pa * &pb)).frob_norm());
                worst = worst.max((&phi.apply(&(&b * a))? - &(&pb * &pa)).frob_norm());
            }
        }
    }
    Ok(worst)
}

/// M_phi from the dilation: the null space of
/// a -> (V*(a (x) I_r)(I - VV*), (I - VV*)(a (x) I_r)V).
pub fn mult_domain_stinespring(
    phi: &CPMap,
    d: &Dilation,
    tol: &Tolerances,
) -> Result<DomainReport> {
    if d.r == 0 {
        return Err(CpError::DegenerateDilation);
    }
    let n = phi.n();
    let ir = Mat::identity(d.r);
    let q = &Mat::identity(n * d.r) - &(&d.v * &d.v.adjoint());
    let vadj = d.v.adjoint();
    let mut acc = KernelAccumulator::new(n * n);
    acc.add_block(&Mat::of_linear_map(n, n, |i, j| {
        &(&vadj * &Mat::unit(n, n, i, j).kron(&ir)) * &q
    }));
    acc.add_block(&Mat::of_linear_map(n, n, |i, j| {
        &(&q * &Mat::unit(n, n, i, j).kron(&ir)) * &d.v
    }));
    let subspace = acc.kernel(n, n, tol)?;
    let mut residual = 0.0f64;
    for a in subspace.basis() {
        let amp = a.kron(&ir);
        residual = residual.max((&(&vadj * &amp) * &q).frob_norm());
        residual = residual.max((&(&q * &amp) * &d.v).frob_norm());
    }
    Ok(DomainReport {
        subspace,
        algorithm: DomainAlgorithm::Stinespring,
        residual,
    })
}

/// T_phi = {a : phi(bac) = phi(ba)phi(c) = phi(b)phi(ac) =
/// phi(b)phi(a)phi(c) for all b, c}, as the null space of the three
/// defect maps stacked over all matrix-unit pairs (b, c).
pub fn ternary_domain_def(phi: &CPMap, tol: &Tolerances) -> Result<DomainReport> {
    let n = phi.n();
    let h = phi.h();
    let f = unit_images(phi);
    // Pairwise products phi(E_pq) phi(E_kl), reused across quadruples.
    let prod: Vec<Vec<Mat>> = (0..n * n)
        .map(|pq| {
            (0..n * n)
                .map(|kl| &f[pq / n][pq % n] * &f[kl / n][kl % n])
                .collect()
        })
        .collect();
    let zero = Mat::zeros(h, h);
    let mut acc = KernelAccumulator::new(n * n);
    for p in 0..n {
        for q in 0..n {
            for s in 0..n {
                for t in 0..n {
                    // b = E_pq, c = E_st; with a = E_kl:
                    //   phi(b a c)        = [q==k][l==s] phi(E_pt)
                    //   phi(b a) phi(c)   = [q==k] phi(E_pl) phi(E_st)
                    //   phi(b) phi(a c)   = [l==s] phi(E_pq) phi(E_kt)
                    //   phi(b) phi(a) phi(c) = phi(E_pq) phi(E_kl) phi(E_st)
                    let bac = Mat::of_linear_map(n, n, |k, l| {
                        if q == k && l == s { f[p][t].clone() } else { zero.clone() }
                    });
                    let ba_c = Mat::of_linear_map(n, n, |k, l| {
                        if q == k { &f[p][l] * &f[s][t] } else { zero.clone() }
                    });
                    let b_ac = Mat::of_linear_map(n, n, |k, l| {
                        if l == s { &f[p][q] * &f[k][t] } else { zero.clone() }
                    });
                    let b_a_c = Mat::of_linear_map(n, n, |k, l| &prod[p * n + q][k * n + l] * &f[s][t]);
                    acc.add_block(&(&bac - &ba_c));
                    acc.add_block(&(&bac - &b_ac));
                    acc.add_block(&(&bac - &b_a_c));
                }
            }
        }
    }
    let subspace = acc.kernel(n, n, tol)?;
    let residual = ternary_defect_on(phi, subspace.basis())?;
    Ok(DomainReport {
        subspace,
        algorithm: DomainAlgorithm::Definitional,
        residual,
    })
}

/// Worst ternary defect of the given elements over matrix-unit pairs.
fn ternary_defect_on(phi: &CPMap, elems: &[Mat]) -> Result<f64> {
    let n = phi.n();
    let mut worst = 0.0f64;
    for a in elems {
        for p in 0..n {
            for q in 0..n {
                let b = Mat::unit(n, n, p, q);
                let pb = phi.unit_image(p, q);
                let ba = &b * a;
                let pba = phi.apply(&ba)?;
                for s in 0..n {
                    for t in 0..n {
                        let c = Mat::unit(n, n, s, t);
                        let pc = phi.unit_image(s, t);
                        let bac = phi.apply(&(&ba * &c))?;
                        worst = worst.max((&bac - &(&pba * &pc)).frob_norm());
                        worst = worst.max((&bac - &(&pb * &phi.apply(&(a * &c))?)).frob_norm());
                        worst = worst
                            .max((&bac - &(&(&pb * &phi.apply(a)?) * &pc)).frob_norm());
                    }
                }
            }
        }
    }
    Ok(worst)
}

/// T_phi from the dilation: M_phi intersected with the null space of
/// a -> (a (x) I_r) - V phi(a) V*.
pub fn ternary_domain_stinespring(
    phi: &CPMap,
    d: &Dilation,
    m: &OperatorSubspace,
    tol: &Tolerances,
) -> Result<DomainReport> {
    if d.r == 0 {
        return Err(CpError::DegenerateDilation);
    }
    let n = phi.n();
    let ir = Mat::identity(d.r);
    let vadj = d.v.adjoint();
    let mut acc = KernelAccumulator::new(n * n);
    acc.add_block(&Mat::of_linear_map(n, n, |i, j| {
        let amp = Mat::unit(n, n, i, j).kron(&ir);
        &amp - &(&(&d.v * &phi.unit_image(i, j)) * &vadj)
    }));
    acc.add_complement_projector(m);
    let subspace = acc.kernel(n, n, tol)?;
    let mut residual = 0.0f64;
    for a in subspace.basis() {
        let rep = &(&d.v * &phi.apply(a)?) * &vadj;
        residual = residual.max((&a.kron(&ir) - &rep).frob_norm());
        residual = residual.max(m.projection_defect(a));
    }
    Ok(DomainReport {
        subspace,
        algorithm: DomainAlgorithm::Stinespring,
        residual,
    })
}

/// Span of all pairwise products {a·b : a in A-basis, b in B-basis}.
fn product_span(
    a: &OperatorSubspace,
    b: &OperatorSubspace,
    tol: &Tolerances,
) -> Result<OperatorSubspace> {
    let mut gens = vec![];
    for x in a.basis() {
        for y in b.basis() {
            gens.push(x * y);
        }
    }
    OperatorSubspace::span(a.ambient_rows(), b.ambient_cols(), &gens, tol)
}

/// Checks the expected algebraic structure of a multiplicative domain M
/// and ternary domain T inside M_n: M is a *-subalgebra, T a two-sided
/// *-ideal of M with T ⊆ M, and span(T·M_n·T) = T.
pub fn verify_structure(
    m: &OperatorSubspace,
    t: &OperatorSubspace,
    n: usize,
    tol: &Tolerances,
) -> Result<StructureReport> {
    if m.ambient_shape() != (n, n) || t.ambient_shape() != (n, n) {
        return Err(CpError::InvalidInput(
            "verify_structure: subspaces must live in M_n".into(),
        ));
    }
    fn check_star(s: &OperatorSubspace, tol: &Tolerances, worst: &mut f64) -> bool {
        let mut pass = true;
        for x in s.basis() {
            let defect = s.projection_defect(&x.adjoint());
            *worst = worst.max(defect);
            pass &= defect <= tol.angle_tol;
        }
        pass
    }
    fn check_contained(
        span: &OperatorSubspace,
        target: &OperatorSubspace,
        tol: &Tolerances,
        worst: &mut f64,
    ) -> Result<bool> {
        let cmp = subspace_compare(span, target, tol)?;
        *worst = worst.max(
            span.basis()
                .iter()
                .map(|v| target.projection_defect(v))
                .fold(0.0f64, f64::max),
        );
        Ok(cmp.contains_1_in_2)
    }

    let mut worst = 0.0f64;
    let m_star_closed = check_star(m, tol, &mut worst);
    let t_star_closed = check_star(t, tol, &mut worst);

    let mm = product_span(m, m, tol)?;
    let m_subalgebra = check_contained(&mm, m, tol, &mut worst)?;

    let mt = product_span(m, t, tol)?;
    let tm = product_span(t, m, tol)?;
    let t_ideal_in_m =
        check_contained(&mt, t, tol, &mut worst)? && check_contained(&tm, t, tol, &mut worst)?;

    let full = OperatorSubspace::full(n, n);
    let ta = product_span(t, &full, tol)?;
    let tat = product_span(&ta, t, tol)?;
    let tat_cmp = subspace_compare(&tat, t, tol)?;
    worst = worst.max(tat_cmp.max_angle_sine);
    let tat_equals_t = tat_cmp.equal;

    let t_in_m = check_contained(t, m, tol, &mut worst)?;

    Ok(StructureReport {
        m_star_closed,
        m_subalgebra,
        t_star_closed,
        t_ideal_in_m,
        tat_equals_t,
        t_in_m,
        worst_defect: worst,
    })
}

/// Exact definitional membership: projection of a onto the computed
/// multiplicative domain.
pub fn in_mult_domain(phi: &CPMap, a: &Mat, tol: &Tolerances) -> Result<bool> {
    if a.shape() != (phi.n(), phi.n()) {
        return Err(CpError::InvalidInput("in_mult_domain: wrong shape".into()));
    }
    let report = mult_domain_def(phi, tol)?;
    Ok(report.subspace.contains_element(a, tol))
}

/// The contractive-case membership test phi(aa*) = phi(a)phi(a)* and
/// phi(a*a) = phi(a)*phi(a). Only equivalent to membership when phi is
/// contractive, so it refuses to run otherwise.
pub fn contractive_mult_criterion(phi: &CPMap, a: &Mat, tol: &Tolerances) -> Result<bool> {
    if !phi.is_contractive(tol) {
        return Err(CpError::Precondition(
            "contractive_mult_criterion requires a contractive map".into(),
        ));
    }
    if a.shape() != (phi.n(), phi.n()) {
        return Err(CpError::InvalidInput("wrong shape".into()));
    }
    let pa = phi.apply(a)?;
    let d1 = (&phi.apply(&(a * &a.adjoint()))? - &(&pa * &pa.adjoint())).frob_norm();
    let d2 = (&phi.apply(&(&a.adjoint() * a))? - &(&pa.adjoint() * &pa)).frob_norm();
    Ok(d1 <= tol.residual_atol && d2 <= tol.residual_atol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpmaps::Normalization;
    use crate::fixtures;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn diag_span(tol: &Tolerances) -> OperatorSubspace {
        OperatorSubspace::span(2, 2, &[Mat::unit(2, 2, 0, 0), Mat::unit(2, 2, 1, 1)], tol)
            .unwrap()
    }

    #[test]
    fn ex_a_mult_domain_is_diagonal() {
        let t = tol();
        let phi = fixtures::ex_a(&t).unwrap();
        let rep = mult_domain_def(&phi, &t).unwrap();
        assert_eq!(rep.subspace.dim(), 2);
        assert!(subspace_compare(&rep.subspace, &diag_span(&t), &t).unwrap().equal);
        assert!(rep.residual < 1e-10);
    }

    #[test]
    fn ex_a_mult_domain_stinespring_agrees() {
        let t = tol();
        let phi = fixtures::ex_a(&t).unwrap();
        let d = phi.minimal_stinespring(&t).unwrap();
        let rep = mult_domain_stinespring(&phi, &d, &t).unwrap();
        assert_eq!(rep.subspace.dim(), 2);
        assert!(subspace_compare(&rep.subspace, &diag_span(&t), &t).unwrap().equal);
    }

    #[test]
    fn identity_channel_domains_are_everything() {
        let t = tol();
        let phi = fixtures::ex_id(2, &t).unwrap();
        let m = mult_domain_def(&phi, &t).unwrap();
        assert_eq!(m.subspace.dim(), 4);
        let d = phi.minimal_stinespring(&t).unwrap();
        let ms = mult_domain_stinespring(&phi, &d, &t).unwrap();
        assert_eq!(ms.subspace.dim(), 4);
        let tern = ternary_domain_def(&phi, &t).unwrap();
        assert_eq!(tern.subspace.dim(), 4);
        let ts = ternary_domain_stinespring(&phi, &d, &ms.subspace, &t).unwrap();
        assert_eq!(ts.subspace.dim(), 4);
    }

    #[test]
    fn trace_map_domains_collapse() {
        let t = tol();
        let phi = fixtures::ex_tr(&t).unwrap();
        let m = mult_domain_def(&phi, &t).unwrap();
        assert_eq!(m.subspace.dim(), 1);
        assert!(m.subspace.contains_element(&Mat::identity(2).scale_re(0.5), &t));
        let tern = ternary_domain_def(&phi, &t).unwrap();
        assert_eq!(tern.subspace.dim(), 0);
    }

    #[test]
    fn ex_a_ternary_domain_is_e11() {
        let t = tol();
        let phi = fixtures::ex_a(&t).unwrap();
        let tern = ternary_domain_def(&phi, &t).unwrap();
        assert_eq!(tern.subspace.dim(), 1);
        assert!(tern.subspace.contains_element(&Mat::unit(2, 2, 0, 0), &t));
        assert!(tern.residual < 1e-10);

        let d = phi.minimal_stinespring(&t).unwrap();
        let m = mult_domain_def(&phi, &t).unwrap();
        let ts = ternary_domain_stinespring(&phi, &d, &m.subspace, &t).unwrap();
        assert!(subspace_compare(&ts.subspace, &tern.subspace, &t).unwrap().equal);
    }

    #[test]
    fn zero_map_domains_are_full() {
        let t = tol();
        let phi = fixtures::ex_zero(2, 2, &t).unwrap();
        assert_eq!(mult_domain_def(&phi, &t).unwrap().subspace.dim(), 4);
        assert_eq!(ternary_domain_def(&phi, &t).unwrap().subspace.dim(), 4);
    }

    #[test]
    fn cross_algorithm_on_random_map() {
        let t = tol();
        let phi = CPMap::random(2, 2, 2, Normalization::Contractive, 7, &t)
            .unwrap()
            .map;
        let d = phi.minimal_stinespring(&t).unwrap();
        let m1 = mult_domain_def(&phi, &t).unwrap();
        let m2 = mult_domain_stinespring(&phi, &d, &t).unwrap();
        let cmp = subspace_compare(&m1.subspace, &m2.subspace, &t).unwrap();
        assert!(cmp.equal, "mult domains disagree: {cmp:?}");
        let t1 = ternary_domain_def(&phi, &t).unwrap();
        let t2 = ternary_domain_stinespring(&phi, &d, &m1.subspace, &t).unwrap();
        let cmp = subspace_compare(&t1.subspace, &t2.subspace, &t).unwrap();
        assert!(cmp.equal, "ternary domains disagree: {cmp:?}");
    }

    #[test]
    fn structure_checks_on_ex_a() {
        let t = tol();
        let phi = fixtures::ex_a(&t).unwrap();
        let m = mult_domain_def(&phi, &t).unwrap();
        let tern = ternary_domain_def(&phi, &t).unwrap();
        let rep = verify_structure(&m.subspace, &tern.subspace, 2, &t).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
    }

    #[test]
    fn structure_rejects_non_star_closed_input() {
        let t = tol();
        let m = OperatorSubspace::span(2, 2, &[Mat::unit(2, 2, 0, 1)], &t).unwrap();
        let tern = OperatorSubspace::empty(2, 2);
        let rep = verify_structure(&m, &tern, 2, &t).unwrap();
        assert!(!rep.m_star_closed);
        assert!(!rep.all_pass());
    }

    #[test]
    fn membership_predicates_on_examples() {
        let t = tol();
        let phi_a = fixtures::ex_a(&t).unwrap();
        let e11 = Mat::unit(2, 2, 0, 0);
        assert!(in_mult_domain(&phi_a, &e11, &t).unwrap());
        assert!(contractive_mult_criterion(&phi_a, &e11, &t).unwrap());
        assert!(in_mult_domain(&phi_a, &Mat::zeros(2, 2), &t).unwrap());

        let phi_b = fixtures::ex_b(&t).unwrap();
        let gram = Mat::from_real(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(!in_mult_domain(&phi_b, &gram, &t).unwrap());
        match contractive_mult_criterion(&phi_b, &gram, &t) {
            Err(CpError::Precondition(_)) => {}
            other => panic!("expected precondition error, got {other:?}"),
        }
    }

    #[test]
    fn restriction_to_m_is_homomorphism() {
        let t = tol();
        let phi = CPMap::random(3, 2, 2, Normalization::Contractive, 19, &t)
            .unwrap()
            .map;
        let m = mult_domain_def(&phi, &t).unwrap();
        for a in m.subspace.basis() {
            for b in m.subspace.basis() {
                let lhs = phi.apply(&(a * b)).unwrap();
                let rhs = &phi.apply(a).unwrap() * &phi.apply(b).unwrap();
                assert!((&lhs - &rhs).frob_norm() < 1e-8);
            }
        }
    }
}
