//! Randomized invariant suites: seeded ensembles of CP maps pushed
//! through every pair of independent algorithms, with worst-case
//! residuals and findings collected per suite.
//!
//! Each trial is fully determined by (suite salt, base seed, trial
//! index), so a run is reproducible bit for bit regardless of scheduling
//! or trial count changes elsewhere.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cpmaps::{CPMap, Normalization};
use crate::domains::{
    mult_domain_def, mult_domain_stinespring, ternary_domain_def, ternary_domain_stinespring,
    verify_structure,
};
use crate::error::Result;
use crate::fixtures;
use crate::hmodules::{
    ModuleSpace, canonical_phi_map_with_dilation, gram_predicate, module_domain_def,
    module_domain_from_ideal, module_domain_stinespring, ternary_residual, twist_phi_map,
};
use crate::linking::{induced_cp_map, lemma52_checks, purity_suite, verify_linking_domains};
use crate::numerics::{C64, Mat, OperatorSubspace, Tolerances, subspace_compare};

/// Aggregated result of one suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    /// Largest principal-angle sine seen across subspace comparisons.
    pub worst_angle: f64,
    /// Largest identity residual seen across operator checks.
    pub worst_residual: f64,
    /// One line per failed check; empty on full success.
    pub findings: Vec<String>,
}

impl SuiteOutcome {
    fn new(name: &str) -> Self {
        SuiteOutcome {
            name: name.to_string(),
            trials: 0,
            failures: 0,
            worst_angle: 0.0,
            worst_residual: 0.0,
            findings: vec![],
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn check(&mut self, ok: bool, finding: impl FnOnce() -> String) {
        if !ok {
            self.failures += 1;
            self.findings.push(finding());
        }
    }

    fn angle(&mut self, a: f64) {
        self.worst_angle = self.worst_angle.max(a);
    }

    fn residual(&mut self, r: f64) {
        self.worst_residual = self.worst_residual.max(r);
    }
}

/// Whole-run summary across all suites.
#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub trials: usize,
    pub tolerances: Tolerances,
    pub suites: Vec<SuiteOutcome>,
    pub passed: bool,
}

/// Parameters of a verification run.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub trials: usize,
    pub seed: u64,
    pub max_n: usize,
    pub max_h: usize,
    pub max_p: usize,
    pub tol: Tolerances,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            trials: 50,
            seed: 1,
            max_n: 3,
            max_h: 3,
            max_p: 3,
            tol: Tolerances::default(),
        }
    }
}

fn trial_rng(seed: u64, salt: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(
        seed ^ salt.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(trial.wrapping_mul(0xD1B54A32D192ED03)),
    )
}

fn draw_dim(rng: &mut ChaCha8Rng, max: usize) -> usize {
    1 + (rng.gen::<u64>() as usize) % max.max(1)
}

fn draw_normalization(trial: usize) -> Normalization {
    match trial % 3 {
        0 => Normalization::Raw,
        1 => Normalization::Contractive,
        _ => Normalization::UnitalIfPossible,
    }
}

fn random_element(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat {
    let mut m = Mat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
    }
    m
}

fn draw_map(
    rng: &mut ChaCha8Rng,
    trial: usize,
    max_n: usize,
    max_h: usize,
    max_rank: Option<usize>,
    tol: &Tolerances,
) -> Result<CPMap> {
    let n = draw_dim(rng, max_n);
    let h = draw_dim(rng, max_h);
    let cap = max_rank.unwrap_or(n * h).min(n * h);
    let rank = draw_dim(rng, cap);
    let seed = rng.gen::<u64>();
    Ok(CPMap::random(n, h, rank, draw_normalization(trial), seed, tol)?.map)
}

/// Cross-algorithm equality of both domains, plus the dilation-side
/// identities that characterize them, plus the algebraic structure of
/// the resulting pair (M, T).
pub fn suite_domains(trials: usize, seed: u64, max_n: usize, max_h: usize, tol: &Tolerances) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("domain-cross-algorithms");
    for trial in 0..trials {
        let mut rng = trial_rng(seed, 0xD0, trial as u64);
        let phi = draw_map(&mut rng, trial, max_n, max_h, None, tol)?;
        let n = phi.n();
        out.trials += 1;

        let d = phi.minimal_stinespring(tol)?;
        let m1 = mult_domain_def(&phi, tol)?;
        let m2 = mult_domain_stinespring(&phi, &d, tol)?;
        let cmp = subspace_compare(&m1.subspace, &m2.subspace, tol)?;
        out.angle(cmp.max_angle_sine);
        out.check(cmp.equal && cmp.max_angle_sine < 1e-7, || {
            format!("trial {trial}: mult domains disagree (angle {:.3e})", cmp.max_angle_sine)
        });

        let t1 = ternary_domain_def(&phi, tol)?;
        let t2 = ternary_domain_stinespring(&phi, &d, &m1.subspace, tol)?;
        let cmp = subspace_compare(&t1.subspace, &t2.subspace, tol)?;
        out.angle(cmp.max_angle_sine);
        out.check(cmp.equal && cmp.max_angle_sine < 1e-7, || {
            format!("trial {trial}: ternary domains disagree (angle {:.3e})", cmp.max_angle_sine)
        });
        out.residual(m1.residual.max(m2.residual).max(t1.residual).max(t2.residual));

        // Structure of the computed pair.
        let st = verify_structure(&m1.subspace, &t1.subspace, n, tol)?;
        out.residual(st.worst_defect);
        out.check(st.all_pass(), || format!("trial {trial}: structure checks failed ({st:?})"));

        // Dilation identities on the M basis: V* pi(a) = phi(a) V* and
        // the projections commute; on the T basis the range condition.
        let ir = Mat::identity(d.r);
        let vv = &d.v * &d.v.adjoint();
        let vsv = &d.v.adjoint() * &d.v;
        for a in m1.subspace.basis() {
            let amp = a.kron(&ir);
            let pa = phi.apply(a)?;
            let r = (&(&d.v.adjoint() * &amp) - &(&pa * &d.v.adjoint())).frob_norm();
            out.residual(r);
            out.check(r <= tol.residual_atol, || {
                format!("trial {trial}: intertwining identity failed ({r:.3e})")
            });
            let c1 = (&(&vv * &amp) - &(&amp * &vv)).frob_norm();
            let c2 = (&(&vsv * &pa) - &(&pa * &vsv)).frob_norm();
            out.residual(c1.max(c2));
            out.check(c1.max(c2) <= tol.residual_atol, || {
                format!("trial {trial}: commutant identity failed ({:.3e})", c1.max(c2))
            });
        }
        for a in t1.subspace.basis() {
            let amp = a.kron(&ir);
            let r = (&(&vv * &amp) - &amp).frob_norm();
            out.residual(r);
            out.check(r <= tol.residual_atol, || {
                format!("trial {trial}: range identity on the ternary ideal failed ({r:.3e})")
            });
        }

        // Restriction homomorphism on the M basis.
        for a in m1.subspace.basis() {
            for b in m1.subspace.basis() {
                let r = (&phi.apply(&(a * b))? - &(&phi.apply(a)? * &phi.apply(b)?)).frob_norm();
                out.residual(r);
                out.check(r <= tol.residual_atol, || {
                    format!("trial {trial}: restriction is not multiplicative ({r:.3e})")
                });
            }
        }
    }
    Ok(out)
}

/// Stinespring reconstruction, minimality, and unital isometry checks.
pub fn suite_stinespring(trials: usize, seed: u64, max_n: usize, max_h: usize, tol: &Tolerances) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("stinespring-contract");
    for trial in 0..trials {
        let mut rng = trial_rng(seed, 0x57, trial as u64);
        let phi = draw_map(&mut rng, trial, max_n, max_h, None, tol)?;
        out.trials += 1;
        let d = phi.minimal_stinespring(tol)?;
        let rank = phi.choi_rank(tol)?;
        out.check(d.r == rank, || {
            format!("trial {trial}: dilation size {} != Choi rank {rank}", d.r)
        });

        let ir = Mat::identity(d.r);
        let mut rec = 0.0f64;
        for i in 0..phi.n() {
            for j in 0..phi.n() {
                let unit = Mat::unit(phi.n(), phi.n(), i, j);
                let img = &(&d.v.adjoint() * &unit.kron(&ir)) * &d.v;
                rec = rec.max((&img - &phi.unit_image(i, j)).frob_norm());
            }
        }
        out.residual(rec);
        out.check(rec < 1e-10, || format!("trial {trial}: reconstruction residual {rec:.3e}"));

        let mindim = d.minimality_dimension(phi.n(), tol)?;
        out.check(mindim == phi.n() * d.r, || {
            format!("trial {trial}: minimality dimension {mindim} != {}", phi.n() * d.r)
        });

        if phi.is_unital(tol) {
            let iso = (&(&d.v.adjoint() * &d.v) - &Mat::identity(phi.h())).frob_norm();
            out.residual(iso);
            out.check(iso < 1e-10, || format!("trial {trial}: V is not isometric ({iso:.3e})"));
        }
    }
    Ok(out)
}

/// Four independent computations of X_phi, pointwise membership
/// predicates, Phi-independence under twisting, and the module
/// structure invariants.
pub fn suite_modules(
    trials: usize,
    seed: u64,
    max_n: usize,
    max_h: usize,
    max_p: usize,
    tol: &Tolerances,
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("module-domain-four-way");
    for trial in 0..trials {
        let mut rng = trial_rng(seed, 0x40D, trial as u64);
        let phi = draw_map(&mut rng, trial, max_n, max_h, None, tol)?;
        let p = draw_dim(&mut rng, max_p);
        let space = ModuleSpace::new(p, phi.n())?;
        out.trials += 1;

        let d = phi.minimal_stinespring(tol)?;
        let real = canonical_phi_map_with_dilation(&phi, &d, &space, tol)?;
        out.residual(real.phi_map_defect()?);

        let s_def = module_domain_def(&real, tol)?;
        let s_st = module_domain_stinespring(&phi, &d, &space, tol)?;
        let t_phi = ternary_domain_def(&phi, tol)?.subspace;
        let s_ideal = module_domain_from_ideal(&space, &t_phi, tol)?;
        let twisted = twist_phi_map(&real, rng.gen::<u64>(), tol)?;
        let s_twist = module_domain_def(&twisted, tol)?;

        for (name, other) in [("stinespring", &s_st), ("ideal", &s_ideal), ("twist", &s_twist)] {
            let cmp = subspace_compare(&s_def, other, tol)?;
            out.angle(cmp.max_angle_sine);
            out.check(cmp.equal && cmp.max_angle_sine < 1e-7, || {
                format!(
                    "trial {trial}: module domain ({name}) disagrees (angle {:.3e})",
                    cmp.max_angle_sine
                )
            });
        }

        // Pointwise predicate agreement on basis elements plus random
        // elements and their projections into the domain.
        let mut elems: Vec<Mat> = space.basis();
        for _ in 0..20 {
            let x = random_element(&mut rng, p, phi.n());
            elems.push(s_def.project(&x));
            elems.push(x);
        }
        for x in &elems {
            let member = s_def.contains_element(x, tol);
            let by_gram = gram_predicate(x, &t_phi, tol)?;
            let tr = ternary_residual(&real, x, tol)?;
            let norm = x.frob_norm();
            let by_residual = tr <= 1e-6 * (1.0 + norm * norm * norm);
            out.check(member == by_gram && member == by_residual, || {
                format!(
                    "trial {trial}: membership predicates disagree (subspace {member}, gram {by_gram}, ternary residual {tr:.3e})"
                )
            });
            if member {
                out.residual(tr);
            }
        }

        // Structure: X_phi . M_phi inside X_phi; <X_phi, X_phi> spans
        // T_phi exactly; K(X) X_phi inside X_phi.
        let m_phi = mult_domain_def(&phi, tol)?.subspace;
        let mut xm = vec![];
        for x in s_def.basis() {
            for a in m_phi.basis() {
                xm.push(x * a);
            }
        }
        let xm = OperatorSubspace::span(p, phi.n(), &xm, tol)?;
        let cmp = subspace_compare(&xm, &s_def, tol)?;
        out.angle(if xm.dim() > 0 { cmp.max_angle_sine } else { 0.0 });
        out.check(cmp.contains_1_in_2, || {
            format!("trial {trial}: X_phi . M_phi escapes X_phi")
        });

        let mut grams = vec![];
        for x in s_def.basis() {
            for y in s_def.basis() {
                grams.push(space.inner(x, y));
            }
        }
        let gram_span = OperatorSubspace::span(phi.n(), phi.n(), &grams, tol)?;
        let cmp = subspace_compare(&gram_span, &t_phi, tol)?;
        out.angle(cmp.max_angle_sine);
        out.check(cmp.equal, || {
            format!("trial {trial}: span<X_phi, X_phi> != T_phi (angle {:.3e})", cmp.max_angle_sine)
        });

        let mut kx = vec![];
        for i in 0..p {
            for j in 0..p {
                let t_unit = Mat::unit(p, p, i, j);
                for x in s_def.basis() {
                    kx.push(&t_unit * x);
                }
            }
        }
        let kx = OperatorSubspace::span(p, phi.n(), &kx, tol)?;
        out.check(subspace_compare(&kx, &s_def, tol)?.contains_1_in_2, || {
            format!("trial {trial}: K(X) X_phi escapes X_phi")
        });

        // Module-map identities over the ideal and the bilinear
        // multiplicativity on X_phi.
        for x in space.basis() {
            let px = real.apply(&x)?;
            for a in m_phi.basis() {
                let r = (&real.apply(&(&x * a))? - &(&px * &phi.apply(a)?)).frob_norm();
                out.residual(r);
                out.check(r <= tol.residual_atol, || {
                    format!("trial {trial}: Phi(xa) != Phi(x)phi(a) ({r:.3e})")
                });
            }
            for a in t_phi.basis() {
                for bi in 0..phi.n() {
                    let b = Mat::unit(phi.n(), phi.n(), bi, (bi + 1) % phi.n());
                    let lhs = real.apply(&(&(&x * a) * &b))?;
                    let rhs = &(&px * &phi.apply(a)?) * &phi.apply(&b)?;
                    let r = (&lhs - &rhs).frob_norm();
                    out.residual(r);
                    out.check(r <= tol.residual_atol, || {
                        format!("trial {trial}: Phi(xab) != Phi(x)phi(a)phi(b) ({r:.3e})")
                    });
                }
            }
        }
        // Corollary: pi(<y,x>) acts inside the range for x in X_phi.
        let ir = Mat::identity(d.r);
        let q = &Mat::identity(phi.n() * d.r) - &(&d.v * &d.v.adjoint());
        for x in s_def.basis() {
            for y in space.basis() {
                let g = space.inner(&y, x);
                let r = (&g.kron(&ir) * &q).frob_norm();
                out.residual(r);
                out.check(r <= tol.residual_atol, || {
                    format!("trial {trial}: pi(<y,x>)(I-VV*) != 0 ({r:.3e})")
                });
            }
        }
    }
    Ok(out)
}

/// Block structure of the induced map on the linking algebra, the
/// compatibility identities of its compact corner, and equality of the
/// induced domains across realizations.
pub fn suite_linking(trials: usize, seed: u64, max_dim: usize, tol: &Tolerances) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("linking-block-structure");
    for trial in 0..trials {
        let mut rng = trial_rng(seed, 0x71, trial as u64);
        // Rank capped at 2 to keep the induced output space small.
        let phi = draw_map(&mut rng, trial, max_dim, max_dim, Some(2), tol)?;
        let p = draw_dim(&mut rng, max_dim);
        let space = ModuleSpace::new(p, phi.n())?;
        out.trials += 1;

        let d = phi.minimal_stinespring(tol)?;
        let real = canonical_phi_map_with_dilation(&phi, &d, &space, tol)?;
        let ind = induced_cp_map(&real, tol)?;
        let x_phi = module_domain_def(&real, tol)?;
        let m_phi = mult_domain_def(&phi, tol)?.subspace;
        let t_phi = ternary_domain_def(&phi, tol)?.subspace;

        let rep = verify_linking_domains(&ind, &x_phi, &m_phi, &t_phi, tol)?;
        out.angle(rep.m_angle.max(rep.t_angle));
        out.check(rep.all_pass() && rep.m_angle.max(rep.t_angle) < 1e-7, || {
            format!(
                "trial {trial}: block structure mismatch (M {} vs {}, T {} vs {})",
                rep.m_tilde.dim(),
                rep.dim_m_predicted,
                rep.t_tilde.dim(),
                rep.dim_t_predicted
            )
        });

        let lemma = lemma52_checks(&ind, &x_phi, &t_phi, tol)?;
        out.residual(lemma.module_map_residual);
        out.check(lemma.module_map_residual <= tol.residual_atol, || {
            format!("trial {trial}: compact corner module identity failed")
        });
        out.check(lemma.compacts_preserve_domain, || {
            format!("trial {trial}: K(X) X_phi escapes X_phi")
        });
        if lemma.contractive {
            let inside = lemma.theta_identity_inside.unwrap_or(0.0);
            out.residual(inside);
            out.check(inside <= tol.residual_atol, || {
                format!("trial {trial}: theta identity failed on X_phi ({inside:.3e})")
            });
            if let Some(outside) = lemma.theta_identity_outside {
                out.check(outside > tol.residual_atol, || {
                    format!("trial {trial}: theta identity did not separate a non-member")
                });
            }
            let r5 = lemma.twisted_theta_residual.unwrap_or(0.0);
            out.residual(r5);
            out.check(r5 <= tol.residual_atol, || {
                format!("trial {trial}: twisted theta identity failed ({r5:.3e})")
            });
        }

        // Induced maps from canonical and twisted realizations share
        // both domains.
        let twisted = twist_phi_map(&real, rng.gen::<u64>(), tol)?;
        let ind2 = induced_cp_map(&twisted, tol)?;
        let m2 = mult_domain_def(&ind2.map, tol)?.subspace;
        let cmp = subspace_compare(&rep.m_tilde, &m2, tol)?;
        out.angle(cmp.max_angle_sine);
        out.check(cmp.equal && cmp.max_angle_sine < 1e-8, || {
            format!("trial {trial}: induced mult domains differ across realizations")
        });
        let t2 = ternary_domain_def(&ind2.map, tol)?.subspace;
        let cmp = subspace_compare(&rep.t_tilde, &t2, tol)?;
        out.angle(cmp.max_angle_sine);
        out.check(cmp.equal && cmp.max_angle_sine < 1e-8, || {
            format!("trial {trial}: induced ternary domains differ across realizations")
        });
    }
    Ok(out)
}

/// Purity chain on rank-1 maps.
pub fn suite_purity(trials: usize, seed: u64, max_dim: usize, tol: &Tolerances) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("purity-chain");
    for trial in 0..trials {
        let mut rng = trial_rng(seed, 0x9A, trial as u64);
        let phi = draw_map(&mut rng, trial, max_dim, max_dim, Some(1), tol)?;
        let p = draw_dim(&mut rng, max_dim);
        let space = ModuleSpace::new(p, phi.n())?;
        out.trials += 1;
        let rep = purity_suite(&phi, &space, tol)?;
        out.residual(rep.relation_residual);
        out.check(rep.all_pass(tol), || {
            format!(
                "trial {trial}: purity chain failed (irreducible {}, rank {}, relation {:.3e}, phase {:.6})",
                rep.corner_irreducible, rep.induced_choi_rank, rep.relation_residual, rep.phase_alignment
            )
        });
    }
    Ok(out)
}

/// The named examples, re-derived end to end.
pub fn suite_fixtures(tol: &Tolerances) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("fixtures");
    out.trials = 2;

    // Corner-compression example: dims (2, 1, 2) and the displayed bases.
    let phi = fixtures::ex_a(tol)?;
    let m = mult_domain_def(&phi, tol)?.subspace;
    let t = ternary_domain_def(&phi, tol)?.subspace;
    let space = ModuleSpace::new(2, 2)?;
    let real = canonical_phi_map_with_dilation(&phi, &phi.minimal_stinespring(tol)?, &space, tol)?;
    let x = module_domain_def(&real, tol)?;
    out.check(m.dim() == 2 && t.dim() == 1 && x.dim() == 2, || {
        format!("dims (M, T, X) = ({}, {}, {})", m.dim(), t.dim(), x.dim())
    });
    let diag = OperatorSubspace::span(2, 2, &[Mat::unit(2, 2, 0, 0), Mat::unit(2, 2, 1, 1)], tol)?;
    let e11 = OperatorSubspace::span(2, 2, &[Mat::unit(2, 2, 0, 0)], tol)?;
    let first_col =
        OperatorSubspace::span(2, 2, &[Mat::unit(2, 2, 0, 0), Mat::unit(2, 2, 1, 0)], tol)?;
    for (name, got, want) in [("M", &m, &diag), ("T", &t, &e11), ("X", &x, &first_col)] {
        let cmp = subspace_compare(got, want, tol)?;
        out.angle(cmp.max_angle_sine);
        out.check(cmp.equal && cmp.max_angle_sine < 1e-8, || {
            format!("{name} basis mismatch (angle {:.3e})", cmp.max_angle_sine)
        });
    }
    let defect = real.phi_map_defect()?;
    out.residual(defect);
    out.check(defect < 1e-10, || format!("phi-map identity defect {defect:.3e}"));

    // Counterexample: the cube identity holds while the Gram element is
    // not multiplicative, so the map must be (and is) non-contractive.
    let phi_b = fixtures::ex_b(tol)?;
    let real_b =
        canonical_phi_map_with_dilation(&phi_b, &phi_b.minimal_stinespring(tol)?, &space, tol)?;
    let x0 = fixtures::ex_b_x0();
    let gram = space.inner(&x0, &x0);
    let cube = (&real_b.apply(&(&x0 * &gram))? - &(&real_b.apply(&x0)? * &phi_b.apply(&gram)?))
        .frob_norm();
    out.residual(cube);
    out.check(cube < 1e-10, || format!("cube identity residual {cube:.3e}"));
    out.check(!crate::domains::in_mult_domain(&phi_b, &gram, tol)?, || {
        "Gram element unexpectedly multiplicative".into()
    });
    let witness = (&phi_b.apply(&(&gram * &Mat::unit(2, 2, 1, 0)))?
        - &(&phi_b.apply(&gram)? * &phi_b.unit_image(1, 0)))
        .frob_norm();
    out.check(witness >= 2.0 - 1e-8, || format!("witness defect only {witness:.6}"));
    out.check(!phi_b.is_contractive(tol), || "counterexample map is contractive".into());
    Ok(out)
}

/// Runs every suite with a shared budget and seed.
pub fn run_all(cfg: &VerifyConfig) -> Result<VerifySummary> {
    let t = &cfg.tol;
    let linking_dim = cfg.max_n.min(3);
    let suites = vec![
        suite_fixtures(t)?,
        suite_domains(cfg.trials, cfg.seed, cfg.max_n, cfg.max_h, t)?,
        suite_stinespring(cfg.trials, cfg.seed, cfg.max_n, cfg.max_h, t)?,
        suite_modules(cfg.trials.div_ceil(2), cfg.seed, cfg.max_n, cfg.max_h, cfg.max_p, t)?,
        suite_linking(cfg.trials.div_ceil(4), cfg.seed, linking_dim, t)?,
        suite_purity(cfg.trials.div_ceil(4), cfg.seed, linking_dim, t)?,
    ];
    let passed = suites.iter().all(|s| s.passed());
    Ok(VerifySummary {
        seed: cfg.seed,
        trials: cfg.trials,
        tolerances: cfg.tol,
        suites,
        passed,
    })
}
