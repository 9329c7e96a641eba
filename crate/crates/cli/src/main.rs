//! Batch front end: parse a JSON problem document, dispatch one command,
//! print a machine-readable report on stdout.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails (the report
//! says where), 2 on input or usage errors.

mod doc;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use doc::InputDocument;
use momenta::central::{
    accelerations, ensure_lambda, fit_lambda, verify_central_ac, verify_central_dias,
    verify_central_extended_leibniz, verify_central_minors, zero_total_mass_checks,
};
use momenta::config::max_abs;
use momenta::distgeom::{
    cayley_menger_det_subset, cayley_menger_matrix, certify_constraint_independence,
    constraint_count, constraint_set, cospherical_test, kernel_correspondence,
};
use momenta::equilibrium::{
    dziobek_factorize, dziobek_synthesize, induced_weight_systems, inverse_interactions,
    verify_equilibrium_ac, verify_equilibrium_leibniz,
};
use momenta::moments::{barycenter, summarize, total_weight};
use momenta::nullspace::{
    config_matrix, config_matrix_kernel, dimension_codimension, dziobek_tree, find_core,
    membership_identities, plucker_deltas, plucker_residual, w0_basis,
};
use momenta::residual::Residual;
use momenta::solver::{solve_central, SolveOptions};
use momenta::{Error, Mat, Scalar};
use report::{
    check_bool, check_grid, check_minor_test, check_residual, check_scalar, grid_value,
    index_set_value, scalar_value, vector_value, Check, Report,
};

#[derive(Parser)]
#[command(name = "momenta")]
#[command(about = "moment-theoretic verification and solving for weighted point systems")]
struct Cli {
    /// Relative tolerance for float-mode checks; overrides the document.
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Omit the timing field so reports are byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,

    /// Print a human-readable summary on stderr.
    #[arg(long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Total weight, moments, barycenter, and the classical identities.
    Moments { input: PathBuf },
    /// Codimension, core, Dziobek tree, and the volume basis of the kernel.
    Nullspace { input: PathBuf },
    /// Membership identities of the weights in the zero-first-moment space.
    Membership { input: PathBuf },
    /// The Pluecker relation residual of a planar five-point configuration.
    Plucker { input: PathBuf },
    /// Equilibrium residuals for the phi grid.
    VerifyEquilibrium {
        #[arg(value_enum)]
        family: EquilibriumFamily,
        input: PathBuf,
    },
    /// The interaction family under which the points are an equilibrium.
    InverseInteractions { input: PathBuf },
    /// The symmetric factorization F = W S W^T, either direction.
    Dziobek {
        #[arg(value_enum)]
        op: DziobekOp,
        input: PathBuf,
    },
    /// Central-configuration fitting and verification families.
    Central {
        #[arg(value_enum)]
        op: CentralOp,
        input: PathBuf,
    },
    /// Distance-geometry matrices, constraints, and kernel bridges.
    Distgeom {
        #[arg(value_enum)]
        op: DistgeomOp,
        input: PathBuf,
    },
    /// Damped Gauss-Newton search for a central configuration.
    Solve { input: PathBuf },
}

#[derive(ValueEnum, Clone, Copy)]
enum EquilibriumFamily {
    Ac,
    Leibniz,
}

#[derive(ValueEnum, Clone, Copy)]
enum DziobekOp {
    Factorize,
    Synthesize,
}

#[derive(ValueEnum, Clone, Copy)]
enum CentralOp {
    FitLambda,
    VerifyAc,
    VerifyDias,
    VerifyMinors,
    VerifyLeibniz,
    ZeroMass,
}

#[derive(ValueEnum, Clone, Copy)]
enum DistgeomOp {
    CmDet,
    Cospherical,
    Constraints,
    KernelBridge,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn command_name(cmd: &Command) -> String {
    match cmd {
        Command::Moments { .. } => "moments".into(),
        Command::Nullspace { .. } => "nullspace".into(),
        Command::Membership { .. } => "membership".into(),
        Command::Plucker { .. } => "plucker".into(),
        Command::VerifyEquilibrium { family, .. } => format!(
            "verify-equilibrium {}",
            match family {
                EquilibriumFamily::Ac => "ac",
                EquilibriumFamily::Leibniz => "leibniz",
            }
        ),
        Command::InverseInteractions { .. } => "inverse-interactions".into(),
        Command::Dziobek { op, .. } => format!(
            "dziobek {}",
            match op {
                DziobekOp::Factorize => "factorize",
                DziobekOp::Synthesize => "synthesize",
            }
        ),
        Command::Central { op, .. } => format!(
            "central {}",
            match op {
                CentralOp::FitLambda => "fit-lambda",
                CentralOp::VerifyAc => "verify-ac",
                CentralOp::VerifyDias => "verify-dias",
                CentralOp::VerifyMinors => "verify-minors",
                CentralOp::VerifyLeibniz => "verify-leibniz",
                CentralOp::ZeroMass => "zero-mass",
            }
        ),
        Command::Distgeom { op, .. } => format!(
            "distgeom {}",
            match op {
                DistgeomOp::CmDet => "cm-det",
                DistgeomOp::Cospherical => "cospherical",
                DistgeomOp::Constraints => "constraints",
                DistgeomOp::KernelBridge => "kernel-bridge",
            }
        ),
        Command::Solve { .. } => "solve".into(),
    }
}

fn input_path(cmd: &Command) -> &PathBuf {
    match cmd {
        Command::Moments { input }
        | Command::Nullspace { input }
        | Command::Membership { input }
        | Command::Plucker { input }
        | Command::VerifyEquilibrium { input, .. }
        | Command::InverseInteractions { input }
        | Command::Dziobek { input, .. }
        | Command::Central { input, .. }
        | Command::Distgeom { input, .. }
        | Command::Solve { input } => input,
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let start = Instant::now();
    let path = input_path(&cli.command);
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow!("cannot read {}: {e}", path.display()))?;
    let doc = InputDocument::parse(&text)?;
    let tolerance = cli
        .tolerance
        .or(doc.tolerance)
        .unwrap_or(momenta::DEFAULT_TOLERANCE);

    let (data, checks) = dispatch(&cli.command, &doc, cli, tolerance)?;

    let timing_ms = if cli.no_timing {
        None
    } else {
        Some(start.elapsed().as_secs_f64() * 1e3)
    };
    let report = Report::assemble(
        &command_name(&cli.command),
        doc.mode,
        tolerance,
        doc.raw.clone(),
        data,
        checks,
        timing_ms,
    );
    println!("{}", serde_json::to_string_pretty(&report)?);
    if cli.verbose {
        eprint!("{}", report.human_summary());
    }
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn dispatch(
    cmd: &Command,
    doc: &InputDocument,
    cli: &Cli,
    tol: f64,
) -> Result<(Value, Vec<Check>)> {
    match cmd {
        Command::Moments { .. } => cmd_moments(doc, tol),
        Command::Nullspace { .. } => cmd_nullspace(doc, tol),
        Command::Membership { .. } => cmd_membership(doc, tol),
        Command::Plucker { .. } => cmd_plucker(doc, tol),
        Command::VerifyEquilibrium { family, .. } => cmd_verify_equilibrium(doc, *family, tol),
        Command::InverseInteractions { .. } => cmd_inverse_interactions(doc, tol),
        Command::Dziobek { op, .. } => cmd_dziobek(doc, *op, tol),
        Command::Central { op, .. } => cmd_central(doc, *op, tol),
        Command::Distgeom { op, .. } => cmd_distgeom(doc, *op, tol),
        Command::Solve { .. } => cmd_solve(doc, cli, tol),
    }
}

fn cmd_moments(doc: &InputDocument, tol: f64) -> Result<(Value, Vec<Check>)> {
    let ws = doc.weighted_system()?;
    let mode = doc.mode;
    let mut probes: Vec<Vec<Scalar>> = vec![
        vec![mode.zero(); doc.points.ambient_dim()],
        doc.points.point(0).to_vec(),
    ];
    let mu0 = total_weight(&ws);
    let bc = if mu0.is_zero() {
        None
    } else {
        let g = barycenter(&ws).map_err(|e| anyhow!("{e}"))?;
        probes.push(g.clone());
        Some(g)
    };
    let summary = summarize(&ws, &probes).map_err(|e| anyhow!("{e}"))?;

    let mut checks = vec![check_scalar(
        "first-moment lemma over probe pairs",
        &summary.lemma_residual(),
        &mu0,
        tol,
    )];
    let mut worst_leibniz: Option<Residual> = None;
    for p in &probes {
        let r = momenta::moments::leibniz_identity_residual(&ws, p).map_err(|e| anyhow!("{e}"))?;
        if worst_leibniz
            .as_ref()
            .is_none_or(|w| r.value.cmp_abs(&w.value) == std::cmp::Ordering::Greater)
        {
            worst_leibniz = Some(r);
        }
    }
    checks.push(check_residual(
        "Leibniz identity at probes",
        &worst_leibniz.expect("at least one probe"),
        tol,
    ));
    let mut worst_hlk: Option<Residual> = None;
    for a in 0..probes.len() {
        for b in (a + 1)..probes.len() {
            let r = momenta::moments::hlk_difference_residual(&ws, &probes[a], &probes[b])
                .map_err(|e| anyhow!("{e}"))?;
            if worst_hlk
                .as_ref()
                .is_none_or(|w| r.value.cmp_abs(&w.value) == std::cmp::Ordering::Greater)
            {
                worst_hlk = Some(r);
            }
        }
    }
    checks.push(check_residual(
        "second-moment difference identity at probe pairs",
        &worst_hlk.expect("at least one pair"),
        tol,
    ));
    if let Some(g) = &bc {
        let m1 = momenta::moments::first_moment(&ws, g).map_err(|e| anyhow!("{e}"))?;
        checks.push(check_scalar(
            "first moment vanishes at the barycenter",
            &max_abs(&m1),
            &mu0,
            tol,
        ));
    }

    let data = json!({
        "mu0": scalar_value(&mu0),
        "barycenter": bc.as_ref().map(|g| vector_value(g)),
        "probes": probes.iter().map(|p| vector_value(p)).collect::<Vec<_>>(),
        "mu1_at_probes": summary.mu1_at.iter().map(|v| vector_value(v)).collect::<Vec<_>>(),
        "mu2_at_probes": summary.mu2_at.iter().map(scalar_value).collect::<Vec<_>>(),
    });
    Ok((data, checks))
}

fn cmd_nullspace(doc: &InputDocument, tol: f64) -> Result<(Value, Vec<Check>)> {
    let x = &doc.points;
    let (d, c) = dimension_codimension(x, tol);
    let core = find_core(x, tol);
    let tree = dziobek_tree(x, &core, tol).map_err(|e| anyhow!("{e}"))?;
    let oracle = config_matrix_kernel(x, tol);
    let mut checks = vec![check_bool(
        "direct kernel dimension equals codimension",
        oracle.len() == c,
    )];
    let basis_vectors: Vec<Vec<Scalar>> = if c > 0 {
        let basis = w0_basis(x, &core, tol).map_err(|e| anyhow!("{e}"))?;
        let xmat = config_matrix(x);
        let mut worst = doc.mode.zero();
        for w in basis.vectors() {
            let prod = xmat.mul_vec(w.entries()).map_err(|e| anyhow!("{e}"))?;
            let m = max_abs(&prod);
            if m.cmp_abs(&worst) == std::cmp::Ordering::Greater {
                worst = m;
            }
        }
        let scale = basis.matrix().max_abs_entry();
        checks.push(check_scalar(
            "volume basis annihilated by configuration matrix",
            &worst,
            &scale,
            tol,
        ));
        let mut cols: Vec<Vec<Scalar>> = basis
            .vectors()
            .iter()
            .map(|w| w.entries().to_vec())
            .collect();
        cols.extend(oracle.iter().cloned());
        let stacked = Mat::from_columns(&cols).map_err(|e| anyhow!("{e}"))?;
        checks.push(check_bool(
            "volume basis spans the direct kernel",
            stacked.rank(tol) == c,
        ));
        basis
            .vectors()
            .iter()
            .map(|w| w.entries().to_vec())
            .collect()
    } else {
        Vec::new()
    };
    let data = json!({
        "dimension": d,
        "codimension": c,
        "core": index_set_value(tree.core()),
        "chain": tree.chain().iter().map(|s| index_set_value(s)).collect::<Vec<_>>(),
        "leaves": tree.leaves().iter().map(|s| index_set_value(s)).collect::<Vec<_>>(),
        "basis": basis_vectors.iter().map(|v| vector_value(v)).collect::<Vec<_>>(),
        "kernel_dimension": oracle.len(),
    });
    Ok((data, checks))
}

fn cmd_membership(doc: &InputDocument, tol: f64) -> Result<(Value, Vec<Check>)> {
    let w = doc.require_weights()?;
    let grid = membership_identities(&doc.points, w, tol).map_err(|e| anyhow!("{e}"))?;
    let data = json!({
        "residuals": grid_value(grid.values()),
    });
    Ok((
        data,
        vec![check_grid("membership identities vanish", &grid, tol)],
    ))
}

fn cmd_plucker(doc: &InputDocument, tol: f64) -> Result<(Value, Vec<Check>)> {
    let deltas = plucker_deltas(&doc.points).map_err(|e| anyhow!("{e}"))?;
    let r = plucker_residual(&doc.points).map_err(|e| anyhow!("{e}"))?;
    let data = json!({
        "deltas": {
            "d23": scalar_value(&deltas.d23),
            "d24": scalar_value(&deltas.d24),
            "d25": scalar_value(&deltas.d25),
            "d34": scalar_value(&deltas.d34),
            "d35": scalar_value(&deltas.d35),
            "d45": scalar_value(&deltas.d45),
        },
        "residual": scalar_value(&r.value),
    });
    Ok((data, vec![check_residual("Pluecker relation", &r, tol)]))
}

fn cmd_verify_equilibrium(
    doc: &InputDocument,
    family: EquilibriumFamily,
    tol: f64,
) -> Result<(Value, Vec<Check>)> {
    let phi = doc.require_phi()?;
    let (name, grid) = match family {
        EquilibriumFamily::Ac => (
            "Albouy-Chenciner equilibrium residuals",
            verify_equilibrium_ac(&doc.points, phi).map_err(|e| anyhow!("{e}"))?,
        ),
        EquilibriumFamily::Leibniz => (
            "bilinear equilibrium residuals",
            verify_equilibrium_leibniz(&doc.points, phi).map_err(|e| anyhow!("{e}"))?,
        ),
    };
    let data = json!({
        "residuals": grid_value(grid.values()),
        "phi_symmetric": phi.is_symmetric(),
    });
    Ok((data, vec![check_grid(name, &grid, tol)]))
}

fn cmd_inverse_interactions(doc: &InputDocument, tol: f64) -> Result<(Value, Vec<Check>)> {
    let family = inverse_interactions(&doc.points, tol).map_err(|e| anyhow!("{e}"))?;
    let c = family.codimension();
    let mut checks = Vec::new();
    if c > 0 {
        let s = Mat::identity(c, doc.mode);
        let phi = family.symmetric_member(&s).map_err(|e| anyhow!("{e}"))?;
        let grid = verify_equilibrium_ac(&doc.points, &phi).map_err(|e| anyhow!("{e}"))?;
        checks.push(check_grid(
            "canonical symmetric member is an equilibrium",
            &grid,
            tol,
        ));
    }
    let data = json!({
        "codimension": c,
        "parameter_count": family.parameter_count(),
        "core": index_set_value(family.basis().core()),
        "basis": family
            .basis()
            .vectors()
            .iter()
            .map(|w| vector_value(w.entries()))
            .collect::<Vec<_>>(),
    });
    Ok((data, checks))
}

fn cmd_dziobek(doc: &InputDocument, op: DziobekOp, tol: f64) -> Result<(Value, Vec<Check>)> {
    let x = &doc.points;
    let core = find_core(x, tol);
    let basis = w0_basis(x, &core, tol).map_err(|e| anyhow!("{e}"))?;
    match op {
        DziobekOp::Synthesize => {
            let s = doc
                .s_matrix
                .as_ref()
                .ok_or_else(|| anyhow!("dziobek synthesize needs an \"s_matrix\" field"))?;
            let f = dziobek_synthesize(&basis, s).map_err(|e| anyhow!("{e}"))?;
            let xmat = config_matrix(x);
            let mut worst = doc.mode.zero();
            for j in 0..f.n() {
                let prod = xmat
                    .mul_vec(&f.matrix().column(j))
                    .map_err(|e| anyhow!("{e}"))?;
                let m = max_abs(&prod);
                if m.cmp_abs(&worst) == std::cmp::Ordering::Greater {
                    worst = m;
                }
            }
            let checks = vec![
                check_scalar(
                    "synthesized columns lie in the kernel",
                    &worst,
                    &f.matrix().max_abs_entry(),
                    tol,
                ),
                check_bool("synthesized weight matrix symmetric", f.is_symmetric()),
            ];
            let data = json!({
                "weight_matrix": grid_value(f.matrix()),
                "core": index_set_value(basis.core()),
            });
            Ok((data, checks))
        }
        DziobekOp::Factorize => {
            let phi = doc.require_phi()?;
            let f = induced_weight_systems(x, phi).map_err(|e| anyhow!("{e}"))?;
            match dziobek_factorize(&f, &basis, tol) {
                Ok(fac) => {
                    let data = json!({
                        "s": grid_value(fac.s()),
                        "a": grid_value(fac.a()),
                        "core": index_set_value(basis.core()),
                        "reconstruction_residual": scalar_value(fac.reconstruction_residual()),
                    });
                    let checks = vec![check_scalar(
                        "factorization reconstructs the weight matrix",
                        fac.reconstruction_residual(),
                        &f.matrix().max_abs_entry(),
                        tol,
                    )];
                    Ok((data, checks))
                }
                Err(Error::AsymmetricInput) => {
                    Ok((Value::Null, vec![check_bool("phi grid symmetric", false)]))
                }
                Err(Error::ColumnNotInKernel { column }) => Ok((
                    Value::Null,
                    vec![check_bool(
                        &format!("induced column {} lies in the kernel", column + 1),
                        false,
                    )],
                )),
                Err(e) => bail!("{e}"),
            }
        }
    }
}

fn cmd_central(doc: &InputDocument, op: CentralOp, tol: f64) -> Result<(Value, Vec<Check>)> {
    let cs = doc.central_system()?;
    match op {
        CentralOp::FitLambda => {
            let fit = fit_lambda(&cs).map_err(|e| anyhow!("{e}"))?;
            let gamma = accelerations(&cs).map_err(|e| anyhow!("{e}"))?;
            let mut scale = doc.mode.zero();
            for g in &gamma {
                let m = max_abs(g);
                if m.cmp_abs(&scale) == std::cmp::Ordering::Greater {
                    scale = m;
                }
            }
            let data = json!({
                "lambda": scalar_value(&fit.lambda),
                "lambda_definitional": scalar_value(&fit.lambda_definitional),
                "center": vector_value(&fit.center),
                "gamma_center": vector_value(&fit.gamma_center),
                "residual": scalar_value(&fit.residual),
            });
            let checks = vec![check_scalar(
                "central-configuration equations at the fitted lambda",
                &fit.residual,
                &scale,
                tol,
            )];
            Ok((data, checks))
        }
        CentralOp::VerifyAc => {
            let with_lambda = ensure_lambda(&cs).map_err(|e| anyhow!("{e}"))?;
            let grid = verify_central_ac(&with_lambda).map_err(|e| anyhow!("{e}"))?;
            let data = json!({
                "lambda": scalar_value(with_lambda.lambda().expect("ensured")),
                "residuals": grid_value(grid.values()),
            });
            Ok((
                data,
                vec![check_grid("Albouy-Chenciner residuals", &grid, tol)],
            ))
        }
        CentralOp::VerifyDias => {
            let with_lambda = ensure_lambda(&cs).map_err(|e| anyhow!("{e}"))?;
            let grid = verify_central_dias(&with_lambda).map_err(|e| anyhow!("{e}"))?;
            let data = json!({
                "lambda": scalar_value(with_lambda.lambda().expect("ensured")),
                "residuals": grid_value(grid.values()),
            });
            Ok((data, vec![check_grid("Dias residuals", &grid, tol)]))
        }
        CentralOp::VerifyMinors => {
            let with_lambda = ensure_lambda(&cs).map_err(|e| anyhow!("{e}"))?;
            let t = verify_central_minors(&with_lambda, &[], tol).map_err(|e| anyhow!("{e}"))?;
            let (_, c) = dimension_codimension(&doc.points, tol);
            let data = json!({
                "lambda": scalar_value(with_lambda.lambda().expect("ensured")),
                "codimension": c,
                "witness": t.witness.as_ref().map(|w| json!({
                    "rows": index_set_value(&w.rows),
                    "cols": index_set_value(&w.cols),
                    "value": scalar_value(&w.value),
                })),
            });
            Ok((
                data,
                vec![check_minor_test("Dziobek-type minors vanish", &t)],
            ))
        }
        CentralOp::VerifyLeibniz => {
            let with_lambda = ensure_lambda(&cs).map_err(|e| anyhow!("{e}"))?;
            let grid = verify_central_extended_leibniz(&with_lambda).map_err(|e| anyhow!("{e}"))?;
            let data = json!({
                "lambda": scalar_value(with_lambda.lambda().expect("ensured")),
                "residuals": grid_value(grid.values()),
            });
            Ok((
                data,
                vec![check_grid("extended Leibniz residuals", &grid, tol)],
            ))
        }
        CentralOp::ZeroMass => {
            let report = zero_total_mass_checks(&cs).map_err(|e| anyhow!("{e}"))?;
            let checks = vec![
                check_scalar(
                    "mass vector lies in the kernel",
                    &max_abs(&report.kernel_residuals),
                    &report.kernel_scale,
                    tol,
                ),
                check_scalar(
                    "each point is the barycenter of the others",
                    &max_abs(&report.barycenter_deviations),
                    &report.kernel_scale,
                    tol,
                ),
                Check {
                    name: "constant second moment, Leibniz sum, and distance family".into(),
                    max_abs_residual: scalar_value(&report.mu2_spread),
                    worst_at: None,
                    pass: report.item_passes(3, tol),
                },
                check_grid(
                    "membership identities on the masses",
                    &report.membership,
                    tol,
                ),
            ];
            let data = json!({
                "codimension": report.codimension,
                "mu2_values": report.mu2_values.iter().map(scalar_value).collect::<Vec<_>>(),
                "leibniz_sum": scalar_value(&report.leibniz_sum.value),
                "ac_residuals": grid_value(report.ac_grid.values()),
            });
            Ok((data, checks))
        }
    }
}

fn cmd_distgeom(doc: &InputDocument, op: DistgeomOp, tol: f64) -> Result<(Value, Vec<Check>)> {
    let x = &doc.points;
    match op {
        DistgeomOp::CmDet => {
            let indices: Vec<usize> = doc.indices.clone().unwrap_or_else(|| (0..x.n()).collect());
            let det = cayley_menger_det_subset(x, &indices).map_err(|e| anyhow!("{e}"))?;
            let data = json!({
                "indices": index_set_value(&indices),
                "determinant": scalar_value(&det),
            });
            Ok((data, Vec::new()))
        }
        DistgeomOp::Cospherical => {
            let report = cospherical_test(x, tol).map_err(|e| anyhow!("{e}"))?;
            let data = json!({
                "cospherical": report.cospherical,
                "center": report.center.as_ref().map(|c| vector_value(c)),
                "radius2": report.radius2.as_ref().map(scalar_value),
                "det_b": scalar_value(&report.det_b),
            });
            Ok((data, Vec::new()))
        }
        DistgeomOp::Constraints => {
            let (d, _) = dimension_codimension(x, tol);
            let count = constraint_count(x.n(), d).map_err(|e| anyhow!("{e}"))?;
            let subsets = constraint_set(x.n(), d).map_err(|e| anyhow!("{e}"))?;
            let mut dets = Vec::with_capacity(subsets.len());
            let mut worst = doc.mode.zero();
            let mut scale = doc.mode.one();
            for subset in &subsets {
                let det = cayley_menger_det_subset(x, subset).map_err(|e| anyhow!("{e}"))?;
                let sub = x.subconfiguration(subset).map_err(|e| anyhow!("{e}"))?;
                let entry = cayley_menger_matrix(&sub).grid().max_abs_entry();
                let mut bound = doc.mode.one();
                for _ in 0..subset.len() + 1 {
                    bound = bound * &entry;
                }
                if bound.cmp_abs(&scale) == std::cmp::Ordering::Greater {
                    scale = bound;
                }
                if det.abs().cmp_abs(&worst) == std::cmp::Ordering::Greater {
                    worst = det.abs();
                }
                dets.push(det);
            }
            let independence =
                certify_constraint_independence(x, tol).map_err(|e| anyhow!("{e}"))?;
            let checks = vec![
                check_scalar(
                    "constraint determinants vanish at the configuration",
                    &worst,
                    &scale,
                    tol,
                ),
                check_bool(
                    "constraint determinants functionally independent",
                    independence.independent,
                ),
            ];
            let data = json!({
                "dimension": d,
                "count": count,
                "subsets": subsets.iter().map(|s| index_set_value(s)).collect::<Vec<_>>(),
                "determinants": dets.iter().map(scalar_value).collect::<Vec<_>>(),
                "jacobian_rank": independence.jacobian_rank,
            });
            Ok((data, checks))
        }
        DistgeomOp::KernelBridge => {
            let report = kernel_correspondence(x, tol).map_err(|e| anyhow!("{e}"))?;
            let checks = vec![
                check_bool(
                    "bordered-matrix kernel dimension equals codimension",
                    report.ker_c_dim == report.codimension,
                ),
                check_scalar(
                    "kernel isomorphism residual",
                    &report.iso_residual,
                    &report.scale,
                    tol,
                ),
                check_scalar(
                    "restricted distance-matrix kernel included in the zero-first-moment space",
                    &report.inclusion_residual,
                    &report.scale,
                    tol,
                ),
            ];
            let data = json!({
                "codimension": report.codimension,
                "ker_c_dim": report.ker_c_dim,
                "ker_b0_dim": report.ker_b0_dim,
                "w0_values": report.w0_values.iter().map(scalar_value).collect::<Vec<_>>(),
                "equality": report.equality,
            });
            Ok((data, checks))
        }
    }
}

fn cmd_solve(doc: &InputDocument, cli: &Cli, _tol: f64) -> Result<(Value, Vec<Check>)> {
    let masses = doc.require_masses()?;
    let exponent = doc.require_exponent()?;
    let solve_tol = cli
        .tolerance
        .or(doc.tolerance)
        .unwrap_or(SolveOptions::default().tolerance);
    let opts = SolveOptions {
        max_iterations: doc.max_iterations.unwrap_or(50),
        tolerance: solve_tol,
        damping: 1.0,
    };
    match solve_central(masses, exponent, &doc.points, &opts) {
        Ok(result) => {
            let verify_tol = 10.0 * opts.tolerance;
            let mut checks = vec![
                check_bool("converged", result.converged),
                check_grid(
                    "definition residuals",
                    &result.certificate.definition,
                    verify_tol,
                ),
                check_grid(
                    "Albouy-Chenciner residuals",
                    &result.certificate.ac,
                    verify_tol,
                ),
                check_minor_test("Dziobek-type minors vanish", &result.certificate.minors),
                check_grid(
                    "extended Leibniz residuals",
                    &result.certificate.extended_leibniz,
                    verify_tol,
                ),
            ];
            if let Some(dias) = &result.certificate.dias {
                checks.push(check_grid("Dias residuals", dias, verify_tol));
            }
            let data = json!({
                "configuration": result
                    .configuration
                    .points()
                    .iter()
                    .map(|p| vector_value(p))
                    .collect::<Vec<_>>(),
                "lambda": scalar_value(&result.lambda),
                "lambda_definitional": scalar_value(&(-&result.lambda)),
                "iterations": result.iterations,
                "residual_history": result.residual_history,
            });
            Ok((data, checks))
        }
        Err(Error::MaxIterations {
            iterations,
            residual,
        }) => {
            let data = json!({
                "iterations": iterations,
                "final_residual": residual,
            });
            Ok((data, vec![check_bool("converged", false)]))
        }
        Err(e) => bail!("{e}"),
    }
}
