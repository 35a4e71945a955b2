//! Command-line interface: group closure and validation, Molien tables,
//! generator computation with certification, polynomial decomposition,
//! compactification reports, and distribution decomposition.
//!
//! Every subcommand validates the group file (closure and homomorphism
//! checks) before computing, prints a deterministic plain-text report to
//! stdout, and, when `--out` is given, writes the text report to that path
//! plus a machine-readable JSON twin alongside it (same path with `.json`
//! appended).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use covar_core::compactify::{
    self, boundary_flatness_report, compactify_function, equivariance_residual, norm, norm_sq,
    BallFn, SchwartzDecomposition,
};
use covar_core::decompose::{decompose, reassemble};
use covar_core::dist::{self, DistSpec, PointDistribution};
use covar_core::generators::{
    certify_generators, covariant_generators, invariant_generators, CertificationReport,
    CovariantBasis, InvariantBasisTable,
};
use covar_core::group::{check_norm_invariance, matrix_to_strings, GroupSpec, DEFAULT_CAP};
use covar_core::molien::{molien_covariant, molien_invariant, RationalSeries};
use covar_core::poly::{parse_vector, render_scalar, render_vector};
use covar_core::rng::SplitMix64;
use covar_core::scalar::format_rat;
use covar_core::{DenseMatrix, Error, FiniteGroupRep};

#[derive(Parser)]
#[command(
    name = "covar",
    about = "Covariant polynomial generators, invariant decompositions, and point-distribution calculus for finite matrix groups",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Close the group over products of its generators and list the elements.
    Close {
        #[arg(long)]
        group: PathBuf,
        /// Maximum number of group elements before aborting.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate closure, the homomorphism property, and norm invariance.
    CheckRep {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invariant and covariant Molien series with coefficient tables.
    Molien {
        #[arg(long)]
        group: PathBuf,
        /// Expansion order of the series.
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute invariant-ring and covariant-module generators, then certify.
    Generators {
        #[arg(long)]
        group: PathBuf,
        /// Degree cap for the generator search; defaults to the group order.
        #[arg(long)]
        cap: Option<usize>,
        /// Degree up to which completeness is verified; defaults to twice
        /// the group order.
        #[arg(long)]
        check_cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify completeness of the computed covariant basis per degree.
    Certify {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        check_cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose a covariant polynomial over the generator family.
    Decompose {
        #[arg(long)]
        group: PathBuf,
        /// Covariant polynomial in the shared grammar; for d > 1 give a
        /// comma-separated component list, e.g. "(x0^3, x1)".
        #[arg(long)]
        poly: String,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Flatness and covariance diagnostics for a compactified function.
    CompactifyReport {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, value_enum, default_value_t = BuiltinFunction::Gaussian)]
        function: BuiltinFunction,
        /// Admissibility margin for the ball-to-space map.
        #[arg(long, default_value_t = compactify::DEFAULT_PHI_TOL)]
        tol: f64,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose a covariant point distribution into invariant coefficients.
    DistDecompose {
        #[arg(long)]
        group: PathBuf,
        /// Distribution file: JSON list of {location, multi_index, weight}.
        #[arg(long)]
        dist: PathBuf,
        #[arg(long, default_value_t = dist::DEFAULT_ORDER_SLACK)]
        order_slack: usize,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BuiltinFunction {
    /// exp(−‖y‖²)
    Gaussian,
    /// ‖y‖² · exp(−‖y‖²)
    PolyTimesGaussian,
    /// exp(−1/(1−‖x‖²)) on the ball, zero outside
    Bump,
}

impl BuiltinFunction {
    fn name(&self) -> &'static str {
        match self {
            BuiltinFunction::Gaussian => "gaussian",
            BuiltinFunction::PolyTimesGaussian => "poly-times-gaussian",
            BuiltinFunction::Bump => "bump",
        }
    }

    /// The function on ℝⁿ.
    fn eval(&self, y: &[f64]) -> f64 {
        let r2 = norm_sq(y);
        match self {
            BuiltinFunction::Gaussian => (-r2).exp(),
            BuiltinFunction::PolyTimesGaussian => r2 * (-r2).exp(),
            BuiltinFunction::Bump => {
                // compactly supported inside the unit ball of ℝⁿ
                if r2 < 1.0 {
                    (-1.0 / (1.0 - r2)).exp()
                } else {
                    0.0
                }
            }
        }
    }

    /// The transported function on the open ball, `I(f) = f∘φ`.
    fn ball_fn(&self) -> BallFn {
        let choice = *self;
        Box::new(move |u: &[f64]| {
            let r2 = norm_sq(u);
            if r2 >= 1.0 {
                return 0.0;
            }
            let scale = 1.0 / (1.0 - r2).sqrt();
            let y: Vec<f64> = u.iter().map(|v| v * scale).collect();
            choice.eval(&y)
        })
    }
}

struct Failure {
    name: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            name: e.name(),
            message: e.to_string(),
        }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure {
        name: "FileIO",
        message: e.to_string(),
    }
}

type RunResult = Result<(String, Value), Failure>;

fn load_group(path: &PathBuf, cap: usize) -> Result<(GroupSpec, FiniteGroupRep), Failure> {
    let text = std::fs::read_to_string(path).map_err(io_failure)?;
    let spec = GroupSpec::from_json(&text)?;
    let rep = spec.close(cap)?;
    Ok((spec, rep))
}

fn matrix_text(m: &DenseMatrix) -> String {
    let rows: Vec<String> = matrix_to_strings(m)
        .iter()
        .map(|r| format!("[{}]", r.join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn matrix_json(m: &DenseMatrix) -> Value {
    json!(matrix_to_strings(m))
}

fn series_lines(label: &str, s: &RationalSeries, text: &mut String) {
    let _ = writeln!(
        text,
        "{label} closed form: ({}) / ({})",
        s.numerator.render("t"),
        s.denominator.render("t")
    );
    let coeffs: Vec<String> = s.expansion.iter().map(format_rat).collect();
    let _ = writeln!(text, "{label} coefficients: {}", coeffs.join(", "));
}

fn series_json(s: &RationalSeries) -> Value {
    json!({
        "numerator": s.numerator.render("t"),
        "denominator": s.denominator.render("t"),
        "coefficients": s.expansion.iter().map(format_rat).collect::<Vec<_>>(),
    })
}

fn certification_lines(report: &CertificationReport, text: &mut String) {
    let _ = writeln!(text, "certification check cap: {}", report.check_cap);
    let _ = writeln!(text, "degree | covariant dim | module rank");
    for row in &report.per_degree {
        let _ = writeln!(
            text,
            "{:>6} | {:>13} | {:>11}",
            row.degree, row.covariant_dim, row.module_rank
        );
    }
    match report.first_failure {
        None => {
            let _ = writeln!(text, "certification: PASS");
        }
        Some(m) => {
            let _ = writeln!(text, "certification: FAIL at degree {m}");
        }
    }
}

fn certification_json(report: &CertificationReport) -> Value {
    json!({
        "check_cap": report.check_cap,
        "per_degree": report.per_degree.iter().map(|row| json!({
            "degree": row.degree,
            "covariant_dim": row.covariant_dim,
            "module_rank": row.module_rank,
        })).collect::<Vec<_>>(),
        "first_failure": report.first_failure,
        "passed": report.passed(),
    })
}

/// Shared generator pipeline: invariant table, covariant basis, certification.
fn build_generators(
    rep: &FiniteGroupRep,
    cap: Option<usize>,
    check_cap: Option<usize>,
) -> Result<(InvariantBasisTable, CovariantBasis, CertificationReport), Failure> {
    let degree_cap = cap.unwrap_or(rep.order());
    let check_cap = check_cap.unwrap_or(2 * rep.order()).max(degree_cap);
    let inv = invariant_generators(rep, degree_cap)?;
    let basis = covariant_generators(rep, &inv, degree_cap)?;
    let report = certify_generators(rep, &basis, check_cap)?;
    Ok((inv, basis, report))
}

fn run_close(group: &PathBuf, cap: usize) -> RunResult {
    let (spec, rep) = load_group(group, cap)?;
    let mut text = String::new();
    let _ = writeln!(text, "group: {}", spec.name);
    let _ = writeln!(text, "source dimension n: {}", rep.n());
    let _ = writeln!(text, "representation dimension d: {}", rep.d());
    let _ = writeln!(text, "order: {}", rep.order());
    for i in 0..rep.order() {
        let _ = writeln!(
            text,
            "element {i}: source={} rho={}",
            matrix_text(rep.source(i)),
            matrix_text(rep.rho(i))
        );
    }
    let elements: Vec<Value> = (0..rep.order())
        .map(|i| {
            json!({
                "index": i,
                "source": matrix_json(rep.source(i)),
                "rho": matrix_json(rep.rho(i)),
                "inverse_index": rep.inverse_index(i),
            })
        })
        .collect();
    let value = json!({
        "command": "close",
        "group": spec.name,
        "n": rep.n(),
        "d": rep.d(),
        "order": rep.order(),
        "elements": elements,
    });
    Ok((text, value))
}

fn run_check_rep(group: &PathBuf, cap: usize) -> RunResult {
    let (spec, rep) = load_group(group, cap)?;
    let norm_report = check_norm_invariance(&rep);
    let mut text = String::new();
    let _ = writeln!(text, "group: {}", spec.name);
    let _ = writeln!(text, "order: {}", rep.order());
    let _ = writeln!(text, "closure: OK");
    let _ = writeln!(text, "homomorphism: OK");
    let _ = writeln!(
        text,
        "euclidean norm invariant on source: {}",
        norm_report.all_source
    );
    let _ = writeln!(
        text,
        "euclidean norm invariant on rho: {}",
        norm_report.all_rho
    );
    for (i, (s, r)) in norm_report.per_element.iter().enumerate() {
        let _ = writeln!(
            text,
            "element {i}: source orthogonal={s} rho orthogonal={r}"
        );
    }
    let value = json!({
        "command": "check-rep",
        "group": spec.name,
        "order": rep.order(),
        "closure": "ok",
        "homomorphism": "ok",
        "norm_invariant_source": norm_report.all_source,
        "norm_invariant_rho": norm_report.all_rho,
        "per_element": norm_report
            .per_element
            .iter()
            .map(|(s, r)| json!({"source_orthogonal": s, "rho_orthogonal": r}))
            .collect::<Vec<_>>(),
    });
    Ok((text, value))
}

fn run_molien(group: &PathBuf, order: usize) -> RunResult {
    let (spec, rep) = load_group(group, DEFAULT_CAP)?;
    let inv = molien_invariant(&rep, order);
    let cov = molien_covariant(&rep, order);
    let mut text = String::new();
    let _ = writeln!(text, "group: {} (order {})", spec.name, rep.order());
    let _ = writeln!(text, "expansion order: {order}");
    series_lines("invariant", &inv, &mut text);
    series_lines("covariant", &cov, &mut text);
    let value = json!({
        "command": "molien",
        "group": spec.name,
        "order": order,
        "invariant": series_json(&inv),
        "covariant": series_json(&cov),
    });
    Ok((text, value))
}

fn generators_report(
    spec: &GroupSpec,
    rep: &FiniteGroupRep,
    inv: &InvariantBasisTable,
    basis: &CovariantBasis,
    report: &CertificationReport,
    command: &str,
) -> (String, Value) {
    let mut text = String::new();
    let _ = writeln!(text, "group: {} (order {})", spec.name, rep.order());
    let inv_gens = inv.generators();
    let _ = writeln!(text, "invariant generators: {}", inv_gens.len());
    for (p, deg) in &inv_gens {
        let _ = writeln!(text, "  degree {deg}: {}", render_scalar(p));
    }
    let _ = writeln!(text, "covariant generators: {}", basis.len());
    for i in 0..basis.len() {
        let _ = writeln!(
            text,
            "  P{}: degree {}: {}",
            i + 1,
            basis.degree(i),
            render_vector(basis.generator(i))
        );
    }
    let _ = writeln!(text, "certified degree: {}", basis.certified_degree());
    certification_lines(report, &mut text);
    let value = json!({
        "command": command,
        "group": spec.name,
        "invariant_generators": inv_gens
            .iter()
            .map(|(p, deg)| json!({"degree": deg, "polynomial": render_scalar(p)}))
            .collect::<Vec<_>>(),
        "covariant_generators": (0..basis.len())
            .map(|i| json!({
                "degree": basis.degree(i),
                "polynomial": render_vector(basis.generator(i)),
            }))
            .collect::<Vec<_>>(),
        "certified_degree": basis.certified_degree(),
        "certification": certification_json(report),
    });
    (text, value)
}

fn run_generators(group: &PathBuf, cap: Option<usize>, check_cap: Option<usize>) -> RunResult {
    let (spec, rep) = load_group(group, DEFAULT_CAP)?;
    let (inv, basis, report) = build_generators(&rep, cap, check_cap)?;
    Ok(generators_report(
        &spec,
        &rep,
        &inv,
        &basis,
        &report,
        "generators",
    ))
}

fn run_certify(group: &PathBuf, cap: Option<usize>, check_cap: Option<usize>) -> RunResult {
    let (spec, rep) = load_group(group, DEFAULT_CAP)?;
    let (_, basis, report) = build_generators(&rep, cap, check_cap)?;
    let mut text = String::new();
    let _ = writeln!(text, "group: {} (order {})", spec.name, rep.order());
    let _ = writeln!(
        text,
        "covariant generator degrees: [{}]",
        basis
            .degrees()
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    certification_lines(&report, &mut text);
    let value = json!({
        "command": "certify",
        "group": spec.name,
        "generator_degrees": basis.degrees(),
        "certification": certification_json(&report),
    });
    Ok((text, value))
}

fn run_decompose(group: &PathBuf, poly: &str, cap: Option<usize>) -> RunResult {
    let (spec, rep) = load_group(group, DEFAULT_CAP)?;
    let f = parse_vector(poly, rep.n(), rep.d())?;
    // the basis must be certified at least up to the input degree
    let needed = f.degree().unwrap_or(0);
    let degree_cap = cap.unwrap_or(rep.order()).max(needed);
    let inv = invariant_generators(&rep, degree_cap)?;
    let basis = covariant_generators(&rep, &inv, degree_cap)?;
    let coeffs = decompose(&f, &basis, &inv, &rep)?;
    let ok = reassemble(&coeffs, &basis) == f;
    let mut text = String::new();
    let _ = writeln!(text, "group: {} (order {})", spec.name, rep.order());
    let _ = writeln!(text, "input: {}", render_vector(&f));
    for (i, c) in coeffs.iter().enumerate() {
        let _ = writeln!(
            text,
            "p{} (times P{}: {}): {}",
            i + 1,
            i + 1,
            render_vector(basis.generator(i)),
            render_scalar(c)
        );
    }
    let _ = writeln!(text, "reassembly: {}", if ok { "PASS" } else { "FAIL" });
    let value = json!({
        "command": "decompose",
        "group": spec.name,
        "input": render_vector(&f),
        "coefficients": coeffs.iter().map(render_scalar).collect::<Vec<_>>(),
        "generators": (0..basis.len())
            .map(|i| render_vector(basis.generator(i)))
            .collect::<Vec<_>>(),
        "reassembly": if ok { "PASS" } else { "FAIL" },
    });
    Ok((text, value))
}

fn run_compactify_report(
    group: &PathBuf,
    function: BuiltinFunction,
    tol: f64,
    cap: Option<usize>,
) -> RunResult {
    let (spec, rep) = load_group(group, DEFAULT_CAP)?;
    compactify::require_orthogonal(&rep)?;
    let n = rep.n();

    // deterministic shell grid plus interior points
    let mut rng = SplitMix64::new(0x5eed);
    let mut grid: Vec<Vec<f64>> = Vec::new();
    for &radius in &[0.5, 0.7, 0.85, 0.91, 0.95, 0.99, 0.995] {
        for _ in 0..40 {
            let mut dir: Vec<f64> = (0..n).map(|_| rng.next_signed_f64()).collect();
            let len = norm(&dir);
            if len < 1e-9 {
                continue;
            }
            for v in &mut dir {
                *v *= radius / len;
            }
            grid.push(dir);
        }
    }

    let choice_fn = {
        let f = function;
        move |y: &[f64]| vec![f.eval(y)]
    };
    let sampled = compactify_function(choice_fn, &grid);
    let flatness = boundary_flatness_report(&sampled, &[0, 1, 2, 3]);

    // covariant assembly from the transported radial coefficient
    let (_, basis, _) = build_generators(&rep, cap, Some(rep.order()))?;
    let g_list: Vec<BallFn> = (0..basis.len()).map(|_| function.ball_fn()).collect();
    let schwartz = SchwartzDecomposition::new(g_list, &basis)?;
    let eval_points: Vec<Vec<f64>> = (0..50)
        .map(|_| (0..n).map(|_| 3.0 * rng.next_signed_f64()).collect())
        .collect();
    let covariance_residual = schwartz.covariance_residual(&rep, &eval_points)?;

    let ball_points: Vec<Vec<f64>> = (0..50)
        .map(|_| {
            let mut p: Vec<f64> = (0..n).map(|_| rng.next_signed_f64()).collect();
            let len = norm(&p).max(1e-9);
            let r = 0.9 * rng.next_f64();
            for v in &mut p {
                *v *= r / len;
            }
            p
        })
        .collect();
    let equivariance = equivariance_residual(&rep, &ball_points, tol)?;

    let mut text = String::new();
    let _ = writeln!(text, "group: {} (order {})", spec.name, rep.order());
    let _ = writeln!(text, "function: {}", function.name());
    let _ = writeln!(text, "grid points: {}", sampled.len());
    let _ = writeln!(
        text,
        "flatness table (sup of |value|/(1-|x|^2)^p, shell 0.9 < |x| < 1):"
    );
    let _ = writeln!(text, "order,supremum,points");
    for entry in &flatness {
        let _ = writeln!(
            text,
            "{},{:.12e},{}",
            entry.order, entry.supremum, entry.points_used
        );
    }
    let _ = writeln!(text, "phi/psi equivariance residual: {:.12e}", equivariance);
    let _ = writeln!(
        text,
        "schwartz covariance residual: {:.12e}",
        covariance_residual
    );
    let value = json!({
        "command": "compactify-report",
        "group": spec.name,
        "function": function.name(),
        "grid_points": sampled.len(),
        "flatness": flatness.iter().map(|e| json!({
            "order": e.order,
            "supremum": format!("{:.12e}", e.supremum),
            "points": e.points_used,
        })).collect::<Vec<_>>(),
        "equivariance_residual": format!("{:.12e}", equivariance),
        "covariance_residual": format!("{:.12e}", covariance_residual),
    });
    Ok((text, value))
}

fn run_dist_decompose(
    group: &PathBuf,
    dist_path: &PathBuf,
    order_slack: usize,
    cap: Option<usize>,
) -> RunResult {
    let (spec, rep) = load_group(group, DEFAULT_CAP)?;
    let dist_text = std::fs::read_to_string(dist_path).map_err(io_failure)?;
    let t = DistSpec::from_json(&dist_text)?.to_distribution()?;
    let (_, basis, _) = build_generators(&rep, cap, Some(rep.order()))?;
    let thetas = dist::decompose_dist(&t, &basis, &rep, order_slack)?;

    let mut acc = PointDistribution::zero(rep.n(), rep.d());
    for (theta, i) in thetas.iter().zip(0..basis.len()) {
        acc = acc.add(&dist::multiply(theta, basis.generator(i))?)?;
    }
    let ok = acc == t;

    let mut text = String::new();
    let _ = writeln!(text, "group: {} (order {})", spec.name, rep.order());
    let _ = writeln!(text, "input terms: {}", t.num_terms());
    let _ = writeln!(text, "input order: {}", t.order());
    for (i, theta) in thetas.iter().enumerate() {
        let _ = writeln!(
            text,
            "theta{} (times P{}: {}):",
            i + 1,
            i + 1,
            render_vector(basis.generator(i))
        );
        if theta.is_zero() {
            let _ = writeln!(text, "  0");
        }
        for (loc, alpha, weight) in theta.terms() {
            let loc_s: Vec<String> = loc.iter().map(format_rat).collect();
            let w_s: Vec<String> = weight.iter().map(format_rat).collect();
            let _ = writeln!(
                text,
                "  location=[{}] multi_index={:?} weight=[{}]",
                loc_s.join(", "),
                alpha.0,
                w_s.join(", ")
            );
        }
    }
    let _ = writeln!(text, "reassembly: {}", if ok { "PASS" } else { "FAIL" });
    let value = json!({
        "command": "dist-decompose",
        "group": spec.name,
        "order_slack": order_slack,
        "thetas": thetas
            .iter()
            .map(|theta| serde_json::to_value(DistSpec::from_distribution(theta)).unwrap())
            .collect::<Vec<_>>(),
        "generators": (0..basis.len())
            .map(|i| render_vector(basis.generator(i)))
            .collect::<Vec<_>>(),
        "reassembly": if ok { "PASS" } else { "FAIL" },
    });
    Ok((text, value))
}

fn dispatch(cli: Cli) -> (RunResult, Option<PathBuf>) {
    match cli.command {
        Command::Close { group, cap, out } => (run_close(&group, cap), out),
        Command::CheckRep { group, cap, out } => (run_check_rep(&group, cap), out),
        Command::Molien { group, order, out } => (run_molien(&group, order), out),
        Command::Generators {
            group,
            cap,
            check_cap,
            out,
        } => (run_generators(&group, cap, check_cap), out),
        Command::Certify {
            group,
            cap,
            check_cap,
            out,
        } => (run_certify(&group, cap, check_cap), out),
        Command::Decompose {
            group,
            poly,
            cap,
            out,
        } => (run_decompose(&group, &poly, cap), out),
        Command::CompactifyReport {
            group,
            function,
            tol,
            cap,
            out,
        } => (run_compactify_report(&group, function, tol, cap), out),
        Command::DistDecompose {
            group,
            dist,
            order_slack,
            cap,
            out,
        } => (run_dist_decompose(&group, &dist, order_slack, cap), out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, out) = dispatch(cli);
    match result {
        Ok((text, value)) => {
            print!("{text}");
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, &text) {
                    eprintln!("error: FileIO: {e}");
                    return ExitCode::FAILURE;
                }
                let mut json_path = path.into_os_string();
                json_path.push(".json");
                let pretty = serde_json::to_string_pretty(&value).expect("report serializes");
                if let Err(e) = std::fs::write(&json_path, pretty) {
                    eprintln!("error: FileIO: {e}");
                    return ExitCode::FAILURE;
                }
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}: {}", f.name, f.message);
            ExitCode::FAILURE
        }
    }
}
