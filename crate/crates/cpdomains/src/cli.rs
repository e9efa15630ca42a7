//! Command-line front end: parse a JSON problem file (or a named
//! fixture), run the requested analysis, and emit a JSON report.
//!
//! Exit codes: 0 success, 1 a verification check failed (the math
//! disagreed), 2 input or construction error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::domains::{
    DomainReport, mult_domain_def, mult_domain_stinespring, ternary_domain_def,
    ternary_domain_stinespring, verify_structure,
};
use crate::error::{CpError, Result};
use crate::hmodules::{ModuleSpace, canonical_phi_map_with_dilation, module_domain_def, module_domain_from_ideal, module_domain_stinespring, twist_phi_map};
use crate::linking::{induced_cp_map, lemma52_checks, purity_suite, verify_linking_domains};
use crate::numerics::{Mat, OperatorSubspace, Tolerances, subspace_compare};
use crate::verify::{VerifyConfig, run_all};
use crate::wire::{CpMapJson, MatrixJson, ProblemFile, basis_to_json, mat_to_json};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cpdomains",
    about = "Multiplicative and ternary domains of completely positive maps",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute M_phi and T_phi by both algorithms and check their structure.
    Analyze(CommonArgs),
    /// Compute the module ternary domain X_phi by all four algorithms.
    ModuleDomain(CommonArgs),
    /// Emit the minimal Stinespring dilation.
    Dilate(CommonArgs),
    /// Build the induced map on the linking algebra and verify its
    /// block structure.
    Linking(CommonArgs),
    /// Run the seeded randomized invariant suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON problem file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Built-in fixture name (EX-A, EX-B, EX-ID[:n], EX-TR, EX-0[:n])
    /// instead of an input file.
    #[arg(long)]
    pub fixture: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Module row dimension p (overrides the problem file).
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub tol_rank: Option<f64>,
    #[arg(long)]
    pub tol_residual: Option<f64>,
    #[arg(long)]
    pub tol_angle: Option<f64>,
    /// Compact JSON output (the default).
    #[arg(long)]
    pub json: bool,
    /// Pretty-printed JSON output.
    #[arg(long, conflicts_with = "json")]
    pub pretty: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 3)]
    pub max_n: usize,
    #[arg(long, default_value_t = 3)]
    pub max_h: usize,
    #[arg(long, default_value_t = 3)]
    pub max_p: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub tol_rank: Option<f64>,
    #[arg(long)]
    pub tol_residual: Option<f64>,
    #[arg(long)]
    pub tol_angle: Option<f64>,
    #[arg(long)]
    pub json: bool,
    #[arg(long, conflicts_with = "json")]
    pub pretty: bool,
}

impl CommonArgs {
    fn problem(&self) -> Result<ProblemFile> {
        match (&self.input, &self.fixture) {
            (Some(path), None) => {
                let text = std::fs::read_to_string(path)?;
                Ok(serde_json::from_str(&text)?)
            }
            (None, Some(name)) => Ok(ProblemFile::from_fixture(name)),
            (None, None) => Err(CpError::InvalidInput(
                "provide --input FILE or --fixture NAME".into(),
            )),
            (Some(_), Some(_)) => Err(CpError::InvalidInput(
                "--input and --fixture are mutually exclusive".into(),
            )),
        }
    }

    fn tolerances(&self, file: &ProblemFile) -> Result<Tolerances> {
        let mut t = file.tolerances(Tolerances::default());
        if let Some(v) = self.tol_rank {
            t.rank_rtol = v;
        }
        if let Some(v) = self.tol_residual {
            t.residual_atol = v;
        }
        if let Some(v) = self.tol_angle {
            t.angle_tol = v;
        }
        t.validate()?;
        Ok(t)
    }
}

#[derive(Debug, Serialize)]
struct DomainJson {
    dimension: usize,
    basis: Vec<MatrixJson>,
    residual: f64,
    algorithm: String,
}

impl DomainJson {
    fn from_report(r: &DomainReport) -> Self {
        DomainJson {
            dimension: r.subspace.dim(),
            basis: basis_to_json(&r.subspace),
            residual: r.residual,
            algorithm: r.algorithm.as_str().to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
struct StructureJson {
    m_star_closed: bool,
    m_subalgebra: bool,
    t_star_closed: bool,
    t_ideal_in_m: bool,
    tat_equals_t: bool,
    t_in_m: bool,
    worst_defect: f64,
    all_pass: bool,
}

#[derive(Debug, Serialize)]
struct AnalyzeReport {
    tolerances: Tolerances,
    mult_definitional: DomainJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    mult_stinespring: Option<DomainJson>,
    ternary_definitional: DomainJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    ternary_stinespring: Option<DomainJson>,
    mult_angle: f64,
    ternary_angle: f64,
    agreement: bool,
    structure: StructureJson,
}

fn cmd_analyze(args: &CommonArgs) -> Result<(String, i32)> {
    let file = args.problem()?;
    let tol = args.tolerances(&file)?;
    let phi = file.resolve_map(&tol)?;

    let m_def = mult_domain_def(&phi, &tol)?;
    let t_def = ternary_domain_def(&phi, &tol)?;
    let st = verify_structure(&m_def.subspace, &t_def.subspace, phi.n(), &tol)?;

    let mut mult_angle = 0.0;
    let mut ternary_angle = 0.0;
    let mut agreement = true;
    let (m_st, t_st) = if phi.is_zero(&tol) {
        (None, None)
    } else {
        let d = phi.minimal_stinespring(&tol)?;
        let m_st = mult_domain_stinespring(&phi, &d, &tol)?;
        let t_st = ternary_domain_stinespring(&phi, &d, &m_def.subspace, &tol)?;
        let m_cmp = subspace_compare(&m_def.subspace, &m_st.subspace, &tol)?;
        let t_cmp = subspace_compare(&t_def.subspace, &t_st.subspace, &tol)?;
        mult_angle = m_cmp.max_angle_sine;
        ternary_angle = t_cmp.max_angle_sine;
        agreement = m_cmp.equal && t_cmp.equal;
        (Some(m_st), Some(t_st))
    };

    let code = if agreement && st.all_pass() {
        EXIT_OK
    } else {
        EXIT_VERIFICATION_FAILED
    };
    let report = AnalyzeReport {
        tolerances: tol,
        mult_definitional: DomainJson::from_report(&m_def),
        mult_stinespring: m_st.as_ref().map(DomainJson::from_report),
        ternary_definitional: DomainJson::from_report(&t_def),
        ternary_stinespring: t_st.as_ref().map(DomainJson::from_report),
        mult_angle,
        ternary_angle,
        agreement,
        structure: StructureJson {
            m_star_closed: st.m_star_closed,
            m_subalgebra: st.m_subalgebra,
            t_star_closed: st.t_star_closed,
            t_ideal_in_m: st.t_ideal_in_m,
            tat_equals_t: st.tat_equals_t,
            t_in_m: st.t_in_m,
            worst_defect: st.worst_defect,
            all_pass: st.all_pass(),
        },
    };
    Ok((render(&report, args.pretty)?, code))
}

#[derive(Debug, Serialize)]
struct SubspaceJson {
    dimension: usize,
    basis: Vec<MatrixJson>,
}

impl SubspaceJson {
    fn from(s: &OperatorSubspace) -> Self {
        SubspaceJson {
            dimension: s.dim(),
            basis: basis_to_json(s),
        }
    }
}

#[derive(Debug, Serialize)]
struct RealizationJson {
    k: usize,
    phi_of_basis: Vec<MatrixJson>,
}

#[derive(Debug, Serialize)]
struct ModuleDomainReport {
    tolerances: Tolerances,
    p: usize,
    realization: RealizationJson,
    definitional: SubspaceJson,
    stinespring: SubspaceJson,
    ideal: SubspaceJson,
    twist: SubspaceJson,
    pairwise_angles: PairwiseAngles,
    agreement: bool,
}

#[derive(Debug, Serialize)]
struct PairwiseAngles {
    def_vs_stinespring: f64,
    def_vs_ideal: f64,
    def_vs_twist: f64,
}

fn cmd_module_domain(args: &CommonArgs) -> Result<(String, i32)> {
    let file = args.problem()?;
    let tol = args.tolerances(&file)?;
    let phi = file.resolve_map(&tol)?;
    let p = match args.p {
        Some(p) if p >= 1 => p,
        Some(_) => return Err(CpError::InvalidInput("--p must be >= 1".into())),
        None => file.module_p()?,
    };
    let space = ModuleSpace::new(p, phi.n())?;
    let d = phi.minimal_stinespring(&tol)?;
    let real = canonical_phi_map_with_dilation(&phi, &d, &space, &tol)?;

    let s_def = module_domain_def(&real, &tol)?;
    let s_st = module_domain_stinespring(&phi, &d, &space, &tol)?;
    let t_phi = ternary_domain_def(&phi, &tol)?.subspace;
    let s_ideal = module_domain_from_ideal(&space, &t_phi, &tol)?;
    let twisted = twist_phi_map(&real, 1, &tol)?;
    let s_twist = module_domain_def(&twisted, &tol)?;

    let c1 = subspace_compare(&s_def, &s_st, &tol)?;
    let c2 = subspace_compare(&s_def, &s_ideal, &tol)?;
    let c3 = subspace_compare(&s_def, &s_twist, &tol)?;
    let agreement = c1.equal && c2.equal && c3.equal;

    let phi_of_basis = space
        .basis()
        .iter()
        .map(|x| real.apply(x).map(|m| mat_to_json(&m)))
        .collect::<Result<_>>()?;
    let report = ModuleDomainReport {
        tolerances: tol,
        p,
        realization: RealizationJson {
            k: real.k,
            phi_of_basis,
        },
        definitional: SubspaceJson::from(&s_def),
        stinespring: SubspaceJson::from(&s_st),
        ideal: SubspaceJson::from(&s_ideal),
        twist: SubspaceJson::from(&s_twist),
        pairwise_angles: PairwiseAngles {
            def_vs_stinespring: c1.max_angle_sine,
            def_vs_ideal: c2.max_angle_sine,
            def_vs_twist: c3.max_angle_sine,
        },
        agreement,
    };
    let code = if agreement { EXIT_OK } else { EXIT_VERIFICATION_FAILED };
    Ok((render(&report, args.pretty)?, code))
}

#[derive(Debug, Serialize)]
struct DilateReport {
    tolerances: Tolerances,
    r: usize,
    v: MatrixJson,
    kraus: Vec<MatrixJson>,
    reconstruction_residual: f64,
    minimality_dimension: usize,
}

fn cmd_dilate(args: &CommonArgs) -> Result<(String, i32)> {
    let file = args.problem()?;
    let tol = args.tolerances(&file)?;
    let phi = file.resolve_map(&tol)?;
    let d = phi.minimal_stinespring(&tol)?;

    let ir = Mat::identity(d.r);
    let mut rec = 0.0f64;
    for i in 0..phi.n() {
        for j in 0..phi.n() {
            let img = &(&d.v.adjoint() * &Mat::unit(phi.n(), phi.n(), i, j).kron(&ir)) * &d.v;
            rec = rec.max((&img - &phi.unit_image(i, j)).frob_norm());
        }
    }
    let report = DilateReport {
        tolerances: tol,
        r: d.r,
        v: mat_to_json(&d.v),
        kraus: d.kraus.iter().map(mat_to_json).collect(),
        reconstruction_residual: rec,
        minimality_dimension: d.minimality_dimension(phi.n(), &tol)?,
    };
    Ok((render(&report, args.pretty)?, EXIT_OK))
}

#[derive(Debug, Serialize)]
struct BlockTableJson {
    #[serde(rename = "dim_M_tilde", skip_serializing_if = "Option::is_none")]
    dim_m_tilde: Option<usize>,
    #[serde(rename = "dim_T_tilde", skip_serializing_if = "Option::is_none")]
    dim_t_tilde: Option<usize>,
    predicted: usize,
    equal: bool,
    angle: f64,
}

#[derive(Debug, Serialize)]
struct Lemma52Json {
    module_map_residual: f64,
    compacts_preserve_domain: bool,
    contractive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta_identity_inside: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta_identity_outside: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    twisted_theta_residual: Option<f64>,
}

#[derive(Debug, Serialize)]
struct PurityJson {
    corner_irreducible: bool,
    induced_choi_rank: usize,
    relation_residual: f64,
    phase_alignment: f64,
    k: usize,
    all_pass: bool,
}

#[derive(Debug, Serialize)]
struct LinkingReport {
    tolerances: Tolerances,
    induced: CpMapJson,
    k: usize,
    m_tilde: BlockTableJson,
    t_tilde: BlockTableJson,
    sub_linking_contained: bool,
    lemma52: Lemma52Json,
    #[serde(skip_serializing_if = "Option::is_none")]
    purity: Option<PurityJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    purity_skipped: Option<String>,
}

fn cmd_linking(args: &CommonArgs) -> Result<(String, i32)> {
    let file = args.problem()?;
    let tol = args.tolerances(&file)?;
    let phi = file.resolve_map(&tol)?;
    let p = match args.p {
        Some(p) if p >= 1 => p,
        Some(_) => return Err(CpError::InvalidInput("--p must be >= 1".into())),
        None => file.module_p()?,
    };
    let space = ModuleSpace::new(p, phi.n())?;
    let d = phi.minimal_stinespring(&tol)?;
    let real = canonical_phi_map_with_dilation(&phi, &d, &space, &tol)?;
    let ind = induced_cp_map(&real, &tol)?;

    let x_phi = module_domain_def(&real, &tol)?;
    let m_phi = mult_domain_def(&phi, &tol)?.subspace;
    let t_phi = ternary_domain_def(&phi, &tol)?.subspace;
    let rep = verify_linking_domains(&ind, &x_phi, &m_phi, &t_phi, &tol)?;
    let lemma = lemma52_checks(&ind, &x_phi, &t_phi, &tol)?;

    let (purity, purity_skipped) = if phi.is_pure(&tol)? {
        let pr = purity_suite(&phi, &space, &tol)?;
        let all_pass = pr.all_pass(&tol);
        (
            Some(PurityJson {
                corner_irreducible: pr.corner_irreducible,
                induced_choi_rank: pr.induced_choi_rank,
                relation_residual: pr.relation_residual,
                phase_alignment: pr.phase_alignment,
                k: pr.k,
                all_pass,
            }),
            None,
        )
    } else {
        (None, Some("map is not pure (Choi rank > 1)".to_string()))
    };

    let ok = rep.all_pass()
        && lemma.module_map_residual <= tol.residual_atol
        && lemma.compacts_preserve_domain
        && purity.as_ref().map(|p| p.all_pass).unwrap_or(true);
    let report = LinkingReport {
        tolerances: tol,
        induced: CpMapJson::from_cpmap(&ind.map),
        k: ind.k,
        m_tilde: BlockTableJson {
            dim_m_tilde: Some(rep.m_tilde.dim()),
            dim_t_tilde: None,
            predicted: rep.dim_m_predicted,
            equal: rep.m_equal,
            angle: rep.m_angle,
        },
        t_tilde: BlockTableJson {
            dim_m_tilde: None,
            dim_t_tilde: Some(rep.t_tilde.dim()),
            predicted: rep.dim_t_predicted,
            equal: rep.t_equal,
            angle: rep.t_angle,
        },
        sub_linking_contained: rep.sub_linking_contained,
        lemma52: Lemma52Json {
            module_map_residual: lemma.module_map_residual,
            compacts_preserve_domain: lemma.compacts_preserve_domain,
            contractive: lemma.contractive,
            theta_identity_inside: lemma.theta_identity_inside,
            theta_identity_outside: lemma.theta_identity_outside,
            twisted_theta_residual: lemma.twisted_theta_residual,
        },
        purity,
        purity_skipped,
    };
    let code = if ok { EXIT_OK } else { EXIT_VERIFICATION_FAILED };
    Ok((render(&report, args.pretty)?, code))
}

fn cmd_verify(args: &VerifyArgs) -> Result<(String, i32)> {
    let mut tol = Tolerances::default();
    if let Some(v) = args.tol_rank {
        tol.rank_rtol = v;
    }
    if let Some(v) = args.tol_residual {
        tol.residual_atol = v;
    }
    if let Some(v) = args.tol_angle {
        tol.angle_tol = v;
    }
    tol.validate()?;
    let cfg = VerifyConfig {
        trials: args.trials,
        seed: args.seed,
        max_n: args.max_n,
        max_h: args.max_h,
        max_p: args.max_p,
        tol,
    };
    let summary = run_all(&cfg)?;
    let code = if summary.passed { EXIT_OK } else { EXIT_VERIFICATION_FAILED };
    Ok((render(&summary, args.pretty)?, code))
}

fn render<T: Serialize>(value: &T, pretty: bool) -> Result<String> {
    Ok(if pretty {
        serde_json::to_string_pretty(value)?
    } else {
        serde_json::to_string(value)?
    })
}

/// Executes a parsed command; returns the report text and the exit code.
pub fn run(cli: &Cli) -> Result<(String, i32)> {
    match &cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::ModuleDomain(args) => cmd_module_domain(args),
        Command::Dilate(args) => cmd_dilate(args),
        Command::Linking(args) => cmd_linking(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

/// Where the report text goes.
pub fn output_path(cli: &Cli) -> Option<&PathBuf> {
    match &cli.command {
        Command::Analyze(a) | Command::ModuleDomain(a) | Command::Dilate(a) | Command::Linking(a) => {
            a.output.as_ref()
        }
        Command::Verify(v) => v.output.as_ref(),
    }
}
