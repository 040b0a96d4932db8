//! `hauptmodul`: subgroup invariants, hauptmodul coefficients and Belyi maps
//! from permutation triple files.
//!
//! Exit status: 0 on success, 2 for unreadable or invalid input, 3 when the
//! solver does not converge, 4 when a verification check fails.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use log::info;
use serde::Serialize;

use hauptmodul::belyi::{self, io as pio, BelyiError, ExactMap, Poly, RecognizeOptions, ResidualCheck};
use hauptmodul::mpcore::{bits_for_digits, BigComplex};
use hauptmodul::solver::{self, io as cio, ExpansionState, Method, SolverConfig, SolverError};
use hauptmodul::{SubgroupData, TripleFile};

#[derive(Parser)]
#[command(name = "hauptmodul", version, about = "Hauptmoduln and Belyi maps of genus-zero subgroups of PSL2(Z)")]
struct Cli {
    /// Worker threads; defaults to one per core. Never changes the output.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the structural invariants of a triple file as JSON.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve for the hauptmodul coefficients at every cusp.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Coefficient file to write (stdout if neither this nor --out-dir).
        #[arg(long, conflicts_with = "out_dir")]
        out: Option<PathBuf>,
        /// Directory receiving `coeffs.txt`.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Assemble, check and recognize the Belyi map.
    Belyi {
        #[arg(long)]
        input: PathBuf,
        /// Coefficient file from `solve`; solves first when absent.
        #[arg(long)]
        coeffs: Option<PathBuf>,
        /// Receives p3/p2/pc files, `report.json` and, when solving, `coeffs.txt`.
        #[arg(long)]
        out_dir: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        recognize: RecognizeArgs,
        #[command(flatten)]
        checks: CheckArgs,
    },
    /// Re-check polynomial files against a coefficient file.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        coeffs: PathBuf,
        /// Directory holding p3.txt, p2.txt, pc.txt and optional *.exact.txt.
        #[arg(long)]
        polys: PathBuf,
        /// Tolerance the coefficients were solved to.
        #[arg(long, default_value = "1e-30")]
        tol: f64,
        #[command(flatten)]
        checks: CheckArgs,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Coefficients per unit of cusp width [default: from --tol].
    #[arg(long = "N")]
    n: Option<usize>,
    /// Working decimal digits [default: smallest admissible].
    #[arg(long)]
    digits: Option<u32>,
    /// Target tolerance of the fixed-point solve.
    #[arg(long, default_value = "1e-30")]
    tol: f64,
    #[arg(long, default_value = "gmres")]
    method: Method,
    /// Picard sweeps or GMRES operator applications [default: 500 / 200].
    #[arg(long)]
    max_sweeps: Option<usize>,
    /// GMRES restart length [default: none].
    #[arg(long)]
    restart: Option<usize>,
    /// Height of the sampling horocycles.
    #[arg(long, default_value_t = 0.5)]
    sample_height: f64,
}

#[derive(Args, Clone)]
struct RecognizeArgs {
    /// Largest degree of a coefficient field tried during recognition.
    #[arg(long, default_value_t = 2)]
    max_degree: usize,
    /// Largest coefficient of an accepted minimal polynomial.
    #[arg(long, default_value = "1000000000000")]
    height_bound: u64,
    /// Trusted decimal digits [default: target digits minus 5].
    #[arg(long)]
    accuracy_digits: Option<u32>,
}

#[derive(Args, Clone)]
struct CheckArgs {
    /// Number of points for the Φ(j_Γ(z)) = j(z) spot checks.
    #[arg(long, default_value_t = 20)]
    spot_checks: usize,
    /// Accepted check error as a multiple of the tolerance.
    #[arg(long, default_value_t = 100.0)]
    check_factor: f64,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(e: impl fmt::Display) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }

    fn convergence(e: impl fmt::Display) -> Self {
        Failure {
            code: 3,
            message: e.to_string(),
        }
    }

    fn verification(e: impl fmt::Display) -> Self {
        Failure {
            code: 4,
            message: e.to_string(),
        }
    }

    fn other(e: impl fmt::Display) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::NotConverged { .. } => Failure::convergence(e),
            SolverError::Numeric(_) => Failure::convergence(e),
            SolverError::Config(_) | SolverError::NotGenusZero(_) => Failure::input(e),
            SolverError::Reduce(_) => Failure::other(e),
        }
    }
}

impl From<BelyiError> for Failure {
    fn from(e: BelyiError) -> Self {
        match e {
            BelyiError::NotConverged { .. } => Failure::convergence(e),
            BelyiError::Solver(s) => s.into(),
            other => Failure::other(other),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::Analyze { input, out } => analyze(&input, out.as_deref()),
        Command::Solve {
            input,
            solver,
            out,
            out_dir,
        } => solve(&input, &solver, out, out_dir),
        Command::Belyi {
            input,
            coeffs,
            out_dir,
            solver,
            recognize,
            checks,
        } => run_belyi(&input, coeffs.as_deref(), &out_dir, &solver, &recognize, &checks),
        Command::Verify {
            input,
            coeffs,
            polys,
            tol,
            checks,
            out,
        } => verify(&input, &coeffs, &polys, tol, &checks, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::other(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// The subgroup of a triple file and the name used in output headers.
fn load_group(path: &Path) -> Result<(String, Arc<SubgroupData>), Failure> {
    let triple = TripleFile::parse(&read_text(path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let group = SubgroupData::build(&triple.s0, &triple.s1)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let name = triple.name.unwrap_or_else(|| {
        path.file_stem()
            .map_or_else(|| "group".into(), |s| s.to_string_lossy().into_owned())
    });
    Ok((name, Arc::new(group)))
}

#[derive(Serialize)]
struct CuspJson {
    width: usize,
    representative: String,
    /// 1-based cosets.
    cycle: Vec<usize>,
}

#[derive(Serialize)]
struct RelationOrders {
    s0s1: u64,
    s0s1s0s1s1: u64,
}

#[derive(Serialize)]
struct AnalyzeJson {
    name: String,
    degree: usize,
    e2: usize,
    e3: usize,
    genus: usize,
    congruence: bool,
    level: u64,
    cusps: Vec<CuspJson>,
    relation_orders: RelationOrders,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn analyze(input: &Path, out: Option<&Path>) -> Outcome {
    let (name, g) = load_group(input)?;
    let (a, b) = g.relation_orders();
    let doc = AnalyzeJson {
        name,
        degree: g.degree(),
        e2: g.e2,
        e3: g.e3,
        genus: g.genus,
        congruence: g.is_congruence,
        level: g.level(),
        cusps: g
            .cusps
            .iter()
            .map(|c| CuspJson {
                width: c.width,
                representative: c.representative.to_string(),
                cycle: c.cycle.iter().map(|i| i + 1).collect(),
            })
            .collect(),
        relation_orders: RelationOrders { s0s1: a, s0s1s0s1s1: b },
    };
    emit(out, &to_json(&doc))
}

fn solver_config(args: &SolverArgs, threads: Option<usize>) -> SolverConfig {
    let target = solver::target_digits(args.tol);
    let n = args.n.unwrap_or_else(|| solver::default_n(target));
    let digits = args
        .digits
        .unwrap_or_else(|| solver::required_digits(n, args.sample_height, target));
    let mut cfg = SolverConfig::new(n, digits, args.tol, args.method);
    if let Some(m) = args.max_sweeps {
        cfg.max_sweeps = m;
    }
    cfg.restart = args.restart;
    cfg.sample_height = args.sample_height;
    cfg.threads = threads;
    cfg
}

/// Solves and returns the state with the digits it was solved at.
fn solve_group(g: &Arc<SubgroupData>, args: &SolverArgs) -> Result<(ExpansionState, u32), Failure> {
    let cfg = solver_config(args, None);
    info!("solving: N = {}, {} digits, tol {:e}, {}", cfg.n, cfg.digits, cfg.target_tol, cfg.method);
    let digits = cfg.digits;
    let sol = solver::solve(Arc::clone(g), cfg)?;
    info!(
        "{} iterations, fixed-point residual {:e}",
        sol.report.iterations, sol.report.fixed_point_residual
    );
    Ok((sol.state, digits))
}

fn solve(input: &Path, args: &SolverArgs, out: Option<PathBuf>, out_dir: Option<PathBuf>) -> Outcome {
    let (name, g) = load_group(input)?;
    let (state, digits) = solve_group(&g, args)?;
    let text = cio::write_coefficients(&state, &name, digits);
    let path = match (out, out_dir) {
        (Some(p), _) => Some(p),
        (None, Some(dir)) => {
            fs::create_dir_all(&dir).map_err(|e| Failure::other(format!("{}: {e}", dir.display())))?;
            Some(dir.join("coeffs.txt"))
        }
        (None, None) => None,
    };
    emit(path.as_deref(), &text)
}

fn load_coefficients(path: &Path, g: &Arc<SubgroupData>) -> Result<(cio::CoeffHeader, ExpansionState), Failure> {
    cio::read_coefficients(&read_text(path)?, Arc::clone(g))
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Deterministic points in the strip `|Re z| ≤ 1/2`, `1 ≤ Im z < 2`.
fn spot_points(count: usize, prec: u32) -> Vec<BigComplex> {
    const GOLDEN: f64 = 0.618_033_988_749_895;
    (0..count)
        .map(|j| {
            let x = -0.5 + (j as f64 + 0.5) / count as f64;
            let y = 1.0 + (j as f64 * GOLDEN).fract();
            BigComplex::from_f64(prec, x, y)
        })
        .collect()
}

#[derive(Serialize)]
struct BelyiReport {
    group: String,
    degree: usize,
    principal_width: usize,
    n: usize,
    precision_digits: u32,
    tol: f64,
    cycle_spread: f64,
    identity_residual: f64,
    phi_error: f64,
    spot_checks: usize,
    /// `rational`, `number_field`, or absent when recognition failed.
    recognized: Option<&'static str>,
    recognition_margin_digits: Option<f64>,
    recognition_error: Option<String>,
    exact_identity: Option<bool>,
    passed: bool,
}

fn run_belyi(
    input: &Path,
    coeffs: Option<&Path>,
    out_dir: &Path,
    args: &SolverArgs,
    rec: &RecognizeArgs,
    checks: &CheckArgs,
) -> Outcome {
    let (name, g) = load_group(input)?;
    if g.genus != 0 {
        return Err(Failure::input(SolverError::NotGenusZero(g.genus)));
    }
    fs::create_dir_all(out_dir).map_err(|e| Failure::other(format!("{}: {e}", out_dir.display())))?;
    let (state, digits) = match coeffs {
        Some(path) => {
            let (header, state) = load_coefficients(path, &g)?;
            (state, header.precision_digits)
        }
        None => {
            let (state, digits) = solve_group(&g, args)?;
            write_text(&out_dir.join("coeffs.txt"), &cio::write_coefficients(&state, &name, digits))?;
            (state, digits)
        }
    };
    let tol = args.tol;
    let check = ResidualCheck {
        tol: 10.0 * tol,
        sample_height: args.sample_height,
    };
    let sv = belyi::special_values(&state, &check)?;
    let map = belyi::build_map(&sv, &g)?;
    write_text(&out_dir.join("p3.txt"), &pio::write_numeric(&map.p3))?;
    write_text(&out_dir.join("p2.txt"), &pio::write_numeric(&map.p2))?;
    write_text(&out_dir.join("pc.txt"), &pio::write_numeric(&map.pc))?;

    let identity = belyi::verify_identity(&map);
    let points = spot_points(checks.spot_checks, state.prec());
    let phi = belyi::phi_consistency(&state, &map, &points)?;

    let target = solver::target_digits(tol);
    let opts = RecognizeOptions::new(
        rec.max_degree,
        rec.height_bound,
        rec.accuracy_digits.unwrap_or(target.saturating_sub(5)),
    );
    let (recognized, margin, rec_err, exact_identity) = match belyi::recognize_map(&map, &opts) {
        Ok(res) => {
            let (kind, ok) = match &res.map {
                ExactMap::Rational(r) => {
                    write_text(&out_dir.join("p3.exact.txt"), &pio::write_rational(&r.p3, map.degree))?;
                    write_text(&out_dir.join("p2.exact.txt"), &pio::write_rational(&r.p2, map.degree))?;
                    let dc = map.degree - map.principal_width;
                    write_text(&out_dir.join("pc.exact.txt"), &pio::write_rational(&r.pc, dc))?;
                    ("rational", r.identity_defect().is_zero())
                }
                ExactMap::NumberField(k) => {
                    for (file, p) in [("p3", &k.p3), ("p2", &k.p2), ("pc", &k.pc)] {
                        let text = pio::write_number_field(&k.defining, p);
                        write_text(&out_dir.join(format!("{file}.exact.txt")), &text)?;
                    }
                    let ok = k.identity_defect().iter().flatten().all(|q| q.cmp0().is_eq());
                    ("number_field", ok)
                }
            };
            (Some(kind), Some(res.margin_digits), None, Some(ok))
        }
        Err(e) => {
            info!("recognition failed: {e}");
            (None, None, Some(e.to_string()), None)
        }
    };

    let bound = checks.check_factor * tol;
    let passed = identity <= bound && phi <= bound && exact_identity != Some(false);
    let report = BelyiReport {
        group: name,
        degree: map.degree,
        principal_width: map.principal_width,
        n: state.n(),
        precision_digits: digits,
        tol,
        cycle_spread: sv.cycle_spread,
        identity_residual: identity,
        phi_error: phi,
        spot_checks: points.len(),
        recognized,
        recognition_margin_digits: margin,
        recognition_error: rec_err,
        exact_identity,
        passed,
    };
    write_text(&out_dir.join("report.json"), &to_json(&report))?;
    if passed {
        Ok(())
    } else {
        Err(Failure::verification(format!(
            "checks failed (identity {identity:e}, phi {phi:e}, bound {bound:e}); see {}",
            out_dir.join("report.json").display()
        )))
    }
}

#[derive(Serialize)]
struct VerifyReport {
    group: String,
    tol: f64,
    identity_residual: f64,
    phi_error: f64,
    spot_checks: usize,
    /// Absent when no `*.exact.txt` files are present.
    exact_identity: Option<bool>,
    passed: bool,
}

fn read_poly(dir: &Path, file: &str, prec: u32) -> Result<Poly, Failure> {
    let path = dir.join(file);
    pio::read_numeric(&read_text(&path)?, prec).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Checks the exact files when all three exist.
fn exact_identity(dir: &Path) -> Result<Option<bool>, Failure> {
    let paths: Vec<PathBuf> = ["p3", "p2", "pc"]
        .iter()
        .map(|f| dir.join(format!("{f}.exact.txt")))
        .collect();
    if !paths.iter().all(|p| p.exists()) {
        return Ok(None);
    }
    let texts = paths.iter().map(|p| read_text(p)).collect::<Result<Vec<_>, _>>()?;
    let bad = |i: usize, e: pio::PolyFileError| Failure::input(format!("{}: {e}", paths[i].display()));
    if texts[0].trim_start().starts_with("poly:") {
        let mut lists = Vec::new();
        let mut defining = None;
        for (i, t) in texts.iter().enumerate() {
            let (d, c) = pio::read_number_field(t).map_err(|e| bad(i, e))?;
            if defining.as_ref().is_some_and(|x| *x != d) {
                return Err(Failure::input("exact files use different defining polynomials"));
            }
            defining = Some(d);
            lists.push(c);
        }
        let defect = belyi::power_basis_defect(&lists[0], &lists[1], &lists[2]);
        Ok(Some(defect.iter().flatten().all(|q| q.cmp0().is_eq())))
    } else {
        let mut polys = Vec::new();
        for (i, t) in texts.iter().enumerate() {
            polys.push(pio::read_rational(t).map_err(|e| bad(i, e))?);
        }
        let pc = polys.pop().expect("three files");
        let p2 = polys.pop().expect("three files");
        let p3 = polys.pop().expect("three files");
        Ok(Some(belyi::RationalMap { p3, p2, pc }.identity_defect().is_zero()))
    }
}

fn verify(input: &Path, coeffs: &Path, polys: &Path, tol: f64, checks: &CheckArgs, out: Option<&Path>) -> Outcome {
    let (name, g) = load_group(input)?;
    let (header, state) = load_coefficients(coeffs, &g)?;
    let prec = bits_for_digits(header.precision_digits);
    let p3 = read_poly(polys, "p3.txt", prec)?;
    let p2 = read_poly(polys, "p2.txt", prec)?;
    let pc = read_poly(polys, "pc.txt", prec)?;
    let identity = belyi::identity_residual(&p3, &p2, &pc);
    let points = spot_points(checks.spot_checks, state.prec());
    let phi = belyi::phi_error(&state, &p3, &pc, &points)?;
    let exact = exact_identity(polys)?;
    let bound = checks.check_factor * tol;
    let passed = identity <= bound && phi <= bound && exact != Some(false);
    let report = VerifyReport {
        group: name,
        tol,
        identity_residual: identity,
        phi_error: phi,
        spot_checks: points.len(),
        exact_identity: exact,
        passed,
    };
    emit(out, &to_json(&report))?;
    if passed {
        Ok(())
    } else {
        Err(Failure::verification(format!(
            "verification failed (identity {identity:e}, phi {phi:e}, bound {bound:e})"
        )))
    }
}
