//! `rbf-euler` command line: ad-hoc solves, convergence tables, stability
//! scans and regeneration of the reference example tables as CSV.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical abort.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rbf_euler::analysis::{
    convergence_study, global_error, reports_to_csv, stability_scan, ConvergenceReport, Rect,
    DEFAULT_RECT,
};
use rbf_euler::problems::{get_problem, IvpProblem};
use rbf_euler::{
    integrate, Bootstrap, Error, Execution, Guard, LRule, SchemeKind, ShapePolicy, StepFlag,
};
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numerical abort: {0}")]
    Numerical(Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotFound(_) | Error::InvalidInput(_) | Error::DerivativeUnavailable { .. } => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Numerical(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "rbf-euler",
    version,
    about = "Euler methods with adaptive RBF shape parameters"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one problem and write the trajectory as CSV.
    Solve(SolveArgs),
    /// Endpoint errors and empirical orders over a list of step counts.
    Converge(ConvergeArgs),
    /// Scan the linear stability region in the complex z = λh plane.
    Stability(StabilityArgs),
    /// Regenerate one of the example tables or the stability masks.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyKind {
    Fixed,
    Exact,
    Fd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GuardKind {
    Nc,
    Threshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BootstrapKind {
    Predictor,
    Euler,
}

#[derive(Debug, Clone, Args)]
pub struct PolicyArgs {
    /// Shape-parameter policy for the RBF schemes.
    #[arg(long, value_enum, default_value = "fd")]
    pub policy: PolicyKind,
    /// ε² for `--policy fixed`.
    #[arg(long, allow_hyphen_values = true)]
    pub eps2: Option<f64>,
    #[arg(long, value_enum, default_value = "nc")]
    pub guard: GuardKind,
    /// Threshold exponent: the guard fires when |u_n| <= h^p.
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Guard magnitude: zero, inv-h, inv-sqrt-h or a non-negative number.
    #[arg(long = "l", default_value = "zero", value_parser = parse_l_rule)]
    pub l: LRule,
    /// First finite-difference step: forward predictor or plain Euler.
    #[arg(long, value_enum, default_value = "predictor")]
    pub bootstrap: BootstrapKind,
    /// Use the Taylor-simplified IMQ/IQ updates.
    #[arg(long)]
    pub modified: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub problem: String,
    #[arg(long, default_value = "imq")]
    pub scheme: String,
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub policy: PolicyArgs,
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergeArgs {
    #[arg(long)]
    pub problem: String,
    /// Comma-separated schemes, e.g. `euler,imq,iq`.
    #[arg(long, default_value = "euler,imq,iq")]
    pub scheme: String,
    /// Comma-separated, strictly increasing step counts.
    #[arg(long, default_value = "10,20,40,80,160,320")]
    pub n: String,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RectArgs {
    #[arg(long, default_value_t = DEFAULT_RECT.re_min, allow_hyphen_values = true)]
    pub re_min: f64,
    #[arg(long, default_value_t = DEFAULT_RECT.re_max, allow_hyphen_values = true)]
    pub re_max: f64,
    #[arg(long, default_value_t = DEFAULT_RECT.im_min, allow_hyphen_values = true)]
    pub im_min: f64,
    #[arg(long, default_value_t = DEFAULT_RECT.im_max, allow_hyphen_values = true)]
    pub im_max: f64,
    #[arg(long, default_value_t = 200)]
    pub nx: usize,
    #[arg(long, default_value_t = 200)]
    pub ny: usize,
    /// Number of repeated steps that must stay in the unit disk.
    #[arg(long, default_value_t = 1)]
    pub n_iter: usize,
}

impl RectArgs {
    pub fn rect(&self) -> Rect {
        Rect {
            re_min: self.re_min,
            re_max: self.re_max,
            im_min: self.im_min,
            im_max: self.im_max,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct StabilityArgs {
    /// Comma-separated subset of `euler,imq,iq`.
    #[arg(long, default_value = "euler")]
    pub scheme: String,
    #[command(flatten)]
    pub rect: RectArgs,
    /// Output file for one scheme, directory for several (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableId {
    Ex1,
    Ex2,
    Ex3,
    #[value(name = "ex4-nc")]
    Ex4Nc,
    #[value(name = "ex4-c1")]
    Ex4C1,
    #[value(name = "ex4-c2")]
    Ex4C2,
    #[value(name = "ex4-c3")]
    Ex4C3,
    Stability,
    All,
}

impl TableId {
    pub const TABLES: [TableId; 8] = [
        TableId::Ex1,
        TableId::Ex2,
        TableId::Ex3,
        TableId::Ex4Nc,
        TableId::Ex4C1,
        TableId::Ex4C2,
        TableId::Ex4C3,
        TableId::Stability,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableId::Ex1 => "ex1",
            TableId::Ex2 => "ex2",
            TableId::Ex3 => "ex3",
            TableId::Ex4Nc => "ex4-nc",
            TableId::Ex4C1 => "ex4-c1",
            TableId::Ex4C2 => "ex4-c2",
            TableId::Ex4C3 => "ex4-c3",
            TableId::Stability => "stability",
            TableId::All => "all",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub table: TableId,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Use the Taylor-simplified IMQ/IQ updates for the RBF rows.
    #[arg(long)]
    pub modified: bool,
    #[command(flatten)]
    pub rect: RectArgs,
}

pub fn parse_l_rule(s: &str) -> Result<LRule, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "zero" | "0" => Ok(LRule::Zero),
        "inv-h" | "one-over-h" | "1/h" => Ok(LRule::InvH),
        "inv-sqrt-h" | "sqrt-h" | "one-over-sqrt-h" | "1/sqrt(h)" => Ok(LRule::InvSqrtH),
        other => match other.parse::<f64>() {
            Ok(v) if v >= 0.0 && v.is_finite() => Ok(LRule::Value(v)),
            _ => Err(format!(
                "expected zero, inv-h, inv-sqrt-h or a non-negative number, got `{s}`"
            )),
        },
    }
}

pub fn parse_schemes(list: &str, modified: bool) -> CliResult<Vec<SchemeKind>> {
    let schemes = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.parse::<SchemeKind>()
                .map(|k| if modified { k.modified() } else { k })
                .map_err(|e| CliError::Usage(e.to_string()))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if schemes.is_empty() {
        return Err(CliError::Usage("no scheme given".into()));
    }
    Ok(schemes)
}

pub fn parse_n_list(list: &str) -> CliResult<Vec<usize>> {
    let ns = list
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .ok()
                .filter(|n| *n > 0)
                .ok_or_else(|| CliError::Usage(format!("invalid step count `{s}`")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Usage(
            "step counts must be strictly increasing".into(),
        ));
    }
    Ok(ns)
}

pub fn build_policy(args: &PolicyArgs) -> CliResult<ShapePolicy> {
    let mut policy = match (args.policy, args.eps2) {
        (PolicyKind::Fixed, Some(e)) => ShapePolicy::fixed(e),
        (PolicyKind::Fixed, None) => {
            return Err(CliError::Usage("--policy fixed requires --eps2".into()))
        }
        (PolicyKind::Exact, _) => ShapePolicy::exact(),
        (PolicyKind::Fd, _) => ShapePolicy::finite_difference(),
    };
    if args.guard == GuardKind::Threshold {
        if args.policy != PolicyKind::Fd {
            return Err(CliError::Usage(
                "--guard threshold only applies to --policy fd".into(),
            ));
        }
        policy = policy.with_guard(Guard::threshold(args.p, args.l));
    }
    policy = policy.with_bootstrap(match args.bootstrap {
        BootstrapKind::Predictor => Bootstrap::ForwardPredictor,
        BootstrapKind::Euler => Bootstrap::PlainEuler,
    });
    policy.validate()?;
    Ok(policy)
}

fn load_problem(id: &str) -> CliResult<IvpProblem> {
    get_problem(id).map_err(|e| CliError::Usage(e.to_string()))
}

/// Output of [`run_solve`]: the trajectory CSV and, when the problem has an
/// exact solution, the endpoint error.
#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub csv: String,
    pub endpoint_error: Option<f64>,
    pub guard_rows: usize,
}

pub fn run_solve(
    problem: &IvpProblem,
    scheme: SchemeKind,
    policy: &ShapePolicy,
    n: usize,
) -> CliResult<SolveOutput> {
    let traj = integrate(problem, scheme, policy, n)?;
    let endpoint_error = if problem.has_exact() {
        Some(global_error(&traj, problem)?)
    } else {
        None
    };
    Ok(SolveOutput {
        csv: traj.to_csv(),
        endpoint_error,
        guard_rows: traj.count_flag(StepFlag::GuardTriggered),
    })
}

/// One convergence report per scheme; Euler ignores the policy.
pub fn run_converge(
    problem: &IvpProblem,
    schemes: &[SchemeKind],
    policy: &ShapePolicy,
    n_list: &[usize],
) -> CliResult<Vec<ConvergenceReport>> {
    let exec = Execution::default();
    schemes
        .iter()
        .map(|&s| convergence_study(problem, s, policy, n_list, exec).map_err(CliError::from))
        .collect()
}

pub const N_DOUBLING: [usize; 6] = [10, 20, 40, 80, 160, 320];
pub const N_EX3: [usize; 6] = [200, 400, 800, 1600, 3200, 6400];
pub const N_EX4: [usize; 10] = [10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000];

/// Problem, step counts, schemes and policy that make up a table.
pub fn table_setup(
    table: TableId,
    modified: bool,
) -> Option<(&'static str, &'static [usize], Vec<SchemeKind>, ShapePolicy)> {
    let rbf = |k: SchemeKind| if modified { k.modified() } else { k };
    let all = vec![SchemeKind::Euler, rbf(SchemeKind::Imq), rbf(SchemeKind::Iq)];
    let only_rbf = vec![rbf(SchemeKind::Imq), rbf(SchemeKind::Iq)];
    let fd = ShapePolicy::finite_difference();
    let threshold = |l| fd.with_guard(Guard::threshold(1.0, l));
    Some(match table {
        TableId::Ex1 => ("ex1", &N_DOUBLING[..], all, fd),
        TableId::Ex2 => ("ex2", &N_DOUBLING[..], all, fd),
        TableId::Ex3 => ("ex3", &N_EX3[..], all, fd),
        TableId::Ex4Nc => ("ex4", &N_EX4[..], all, fd),
        TableId::Ex4C1 => ("ex4", &N_EX4[..], only_rbf, threshold(LRule::Zero)),
        TableId::Ex4C2 => ("ex4", &N_EX4[..], only_rbf, threshold(LRule::InvH)),
        TableId::Ex4C3 => ("ex4", &N_EX4[..], only_rbf, threshold(LRule::InvSqrtH)),
        TableId::Stability | TableId::All => return None,
    })
}

/// Writes the CSV file(s) for `table` into `dir` and returns their paths.
pub fn run_reproduce(
    table: TableId,
    dir: &Path,
    modified: bool,
    rect: &RectArgs,
) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    match table {
        TableId::All => {
            for t in TableId::TABLES {
                written.extend(run_reproduce(t, dir, modified, rect)?);
            }
        }
        TableId::Stability => {
            for scheme in [SchemeKind::Euler, SchemeKind::Imq, SchemeKind::Iq] {
                let path = dir.join(format!("stability-{scheme}.csv"));
                fs::write(&path, stability_csv(scheme, rect)?)?;
                written.push(path);
            }
        }
        _ => {
            let (id, n_list, schemes, policy) =
                table_setup(table, modified).expect("table ids are covered above");
            let reports = run_converge(&load_problem(id)?, &schemes, &policy, n_list)?;
            let path = dir.join(format!("{}.csv", table.name()));
            fs::write(&path, reports_to_csv(&reports))?;
            written.push(path);
        }
    }
    Ok(written)
}

pub fn stability_csv(scheme: SchemeKind, rect: &RectArgs) -> CliResult<String> {
    let grid = stability_scan(
        scheme,
        rect.rect(),
        rect.nx,
        rect.ny,
        rect.n_iter,
        Execution::default(),
    )?;
    Ok(grid.to_csv())
}

fn emit(out: Option<&Path>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => io::stdout().lock().write_all(content.as_bytes())?,
    }
    Ok(())
}

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Solve(args) => {
            let problem = load_problem(&args.problem)?;
            let scheme = match parse_schemes(&args.scheme, args.policy.modified)?.as_slice() {
                [one] => *one,
                _ => return Err(CliError::Usage("solve takes a single scheme".into())),
            };
            let policy = build_policy(&args.policy)?;
            if args.n == 0 {
                return Err(CliError::Usage("--n must be positive".into()));
            }
            let out = run_solve(&problem, scheme, &policy, args.n)?;
            emit(args.out.as_deref(), &out.csv)?;
            if let Some(e) = out.endpoint_error {
                eprintln!("endpoint error at t = {}: {:.15e}", problem.t_end, e);
            }
        }
        Command::Converge(args) => {
            let problem = load_problem(&args.problem)?;
            let schemes = parse_schemes(&args.scheme, args.policy.modified)?;
            let n_list = parse_n_list(&args.n)?;
            let policy = build_policy(&args.policy)?;
            let reports = run_converge(&problem, &schemes, &policy, &n_list)?;
            emit(args.out.as_deref(), &reports_to_csv(&reports))?;
        }
        Command::Stability(args) => {
            let schemes = parse_schemes(&args.scheme, false)?;
            if let [one] = schemes.as_slice() {
                emit(args.out.as_deref(), &stability_csv(*one, &args.rect)?)?;
            } else {
                let dir = args.out.as_deref().ok_or_else(|| {
                    CliError::Usage("several schemes need --out <directory>".into())
                })?;
                fs::create_dir_all(dir)?;
                for s in schemes {
                    fs::write(
                        dir.join(format!("stability-{s}.csv")),
                        stability_csv(s, &args.rect)?,
                    )?;
                }
            }
        }
        Command::Reproduce(args) => {
            for path in run_reproduce(args.table, &args.out, args.modified, &args.rect)? {
                eprintln!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_rules() {
        assert_eq!(parse_l_rule("zero").unwrap(), LRule::Zero);
        assert_eq!(parse_l_rule("inv-h").unwrap(), LRule::InvH);
        assert_eq!(parse_l_rule("sqrt-h").unwrap(), LRule::InvSqrtH);
        assert_eq!(parse_l_rule("2.5").unwrap(), LRule::Value(2.5));
        assert!(parse_l_rule("-1").is_err());
        assert!(parse_l_rule("big").is_err());
    }

    #[test]
    fn n_lists() {
        assert_eq!(parse_n_list("10, 20,40").unwrap(), vec![10, 20, 40]);
        assert!(parse_n_list("20,10").is_err());
        assert!(parse_n_list("10,x").is_err());
        assert!(parse_n_list("0").is_err());
    }

    #[test]
    fn scheme_lists() {
        assert_eq!(
            parse_schemes("euler,imq,iq", true).unwrap(),
            vec![SchemeKind::Euler, SchemeKind::ImqMod, SchemeKind::IqMod]
        );
        assert!(parse_schemes("rk4", false).is_err());
        assert!(parse_schemes(",", false).is_err());
    }

    #[test]
    fn ex4_tables_use_the_reference_guards() {
        let (_, n, schemes, pol) = table_setup(TableId::Ex4C3, false).unwrap();
        assert_eq!(n.len(), 10);
        assert_eq!(schemes, vec![SchemeKind::Imq, SchemeKind::Iq]);
        assert_eq!(pol.guard, Guard::threshold(1.0, LRule::InvSqrtH));
        let (_, _, schemes, pol) = table_setup(TableId::Ex4Nc, false).unwrap();
        assert_eq!(schemes.len(), 3);
        assert_eq!(pol.guard, Guard::None);
    }

    #[test]
    fn error_classes() {
        assert_eq!(CliError::from(Error::NotFound("x".into())).exit_code(), 1);
        assert_eq!(
            CliError::from(Error::NonFinite { step: 3, t: 0.1 }).exit_code(),
            2
        );
    }
}
