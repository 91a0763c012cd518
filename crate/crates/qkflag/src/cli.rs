//! Command-line front end: `ifun`, `verify`, `abelianize`, and `kclass-eq`
//! subcommands over the library, with deterministic text, JSON, and LaTeX
//! output.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::degree::{DegreeMatrix, DegreeVector, FlagType};
use crate::error::{Error, Result};
use crate::json::{kclass_report_to_dto, report_to_dto, rf_to_dto, series_to_dto};
use crate::ktheory::{fixed_point_restrict, kclass_eq_report, series_to_fixed_point, FixedPoint};
use crate::latex::{latex_rf, latex_series};
use crate::localization::{abelianize, i_series, LevelSpec};
use crate::par::parallel_map;
use crate::poly::{LaurentPolynomial, Monomial};
use crate::qtoda::{build_toda, recursion_solve, verify_eigen, EigenFailure, VerifyReport};
use crate::ratfun::{rf_eq_seeded, RationalFunction};
use crate::vars::Variable;

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Latex,
}

/// Everything a subcommand run needs, resolved from flags and environment.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub flag: FlagType,
    pub cap: u32,
    pub level: LevelSpec,
    pub equivariant: bool,
    pub format: OutputFormat,
    pub jobs: usize,
    pub seed: u64,
}

#[derive(Parser, Debug)]
#[command(name = "qkflag", version, about = "Exact I-function coefficients for flag varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the I-function coefficients up to the degree cap
    Ifun {
        #[command(flatten)]
        flag: FlagArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run a named verification; exit 0 on pass, 1 on failure
    Verify {
        /// Which verification to run
        #[arg(value_enum)]
        kind: VerifyKind,
        #[command(flatten)]
        flag: FlagArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print the abelianized contribution of one degree matrix
    Abelianize {
        /// Degree matrix as JSON, e.g. '{"rows":[[1],[0,0]]}'
        #[arg(long, value_name = "JSON")]
        matrix: String,
        #[command(flatten)]
        flag: FlagArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Compare two rational-function files as classes at all fixed points
    KclassEq {
        /// Rank of the torus action (fixed points are permutations of rank+1)
        #[arg(long, value_name = "R")]
        rank: usize,
        /// JSON file with the left-hand rational function
        lhs: PathBuf,
        /// JSON file with the right-hand rational function
        rhs: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum VerifyKind {
    /// Localization series is an eigenfunction of the difference operator
    Toda,
    /// Same check with a nontrivial level twist (defaults to level 1)
    Level,
    /// Localization coefficients match the recursion solver at fixed points
    DualOracle,
    /// Degree-one coefficients of the complete flag in C^4 match closed forms
    #[value(name = "example-4-1")]
    ClosedForms,
}

#[derive(Args, Debug)]
struct FlagArgs {
    /// Subquotient ranks, comma separated (e.g. 1,2,3)
    #[arg(long, value_name = "R1,R2,...")]
    flag: Option<String>,
    /// Ambient dimension
    #[arg(long, value_name = "N")]
    n: Option<u32>,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Highest total degree to compute
    #[arg(long, value_name = "D", default_value_t = 0)]
    cap: u32,
    /// Level entry for one block, as `i:l` (repeatable)
    #[arg(long = "level", value_name = "I:L")]
    level: Vec<String>,
    /// Keep torus weights symbolic (default)
    #[arg(long, overrides_with = "no_equivariant")]
    equivariant: bool,
    /// Send every torus weight to 1
    #[arg(long, overrides_with = "equivariant")]
    no_equivariant: bool,
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Worker threads; defaults to QKFLAG_JOBS, then the machine
    #[arg(long, value_name = "K", env = "QKFLAG_JOBS")]
    jobs: Option<usize>,
    /// Seed for the randomized equality fast path
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write output to FILE instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self, flag: FlagType) -> Result<RunConfig> {
        let level = parse_level(flag.num_blocks(), &self.level)?;
        let jobs = match self.jobs {
            Some(0) => return Err(Error::invalid("jobs", "must be at least 1".to_string())),
            Some(j) => j,
            None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        };
        Ok(RunConfig {
            flag,
            cap: self.cap,
            level,
            equivariant: !self.no_equivariant,
            format: self.format,
            jobs,
            seed: self.seed,
        })
    }
}

fn parse_flag(args: &FlagArgs) -> Result<FlagType> {
    let (Some(ranks), Some(n)) = (&args.flag, args.n) else {
        return Err(Error::invalid("flag", "both --flag and --n are required".to_string()));
    };
    let ranks = ranks
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|e| Error::invalid("flag", format!("bad rank {s:?}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    FlagType::new(n, ranks)
}

fn parse_level(blocks: usize, entries: &[String]) -> Result<LevelSpec> {
    if entries.is_empty() {
        return Ok(LevelSpec::trivial(blocks));
    }
    let mut pairs = Vec::new();
    for e in entries {
        let Some((i, l)) = e.split_once(':') else {
            return Err(Error::invalid("level", format!("expected i:l, got {e:?}")));
        };
        let i = i
            .trim()
            .parse::<u32>()
            .map_err(|err| Error::invalid("level", format!("bad block {i:?}: {err}")))?;
        let l = l
            .trim()
            .parse::<i32>()
            .map_err(|err| Error::invalid("level", format!("bad level {l:?}: {err}")))?;
        pairs.push((i, l));
    }
    LevelSpec::from_pairs(blocks, &pairs)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::invalid("out", format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fmt_degree(d: &DegreeVector) -> String {
    let body = d.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    format!("({body})")
}

fn json_line<T: serde::Serialize>(value: &T) -> Result<String> {
    let s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InconsistentData(format!("serialization failed: {e}")))?;
    Ok(format!("{s}\n"))
}

fn report_text(report: &VerifyReport) -> String {
    let mut out = String::new();
    out.push_str(if report.pass { "pass\n" } else { "fail\n" });
    for f in &report.failures {
        let sigma =
            f.sigma.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        out.push_str(&format!(
            "failure at d={} sigma=({sigma}): residual {}\n",
            fmt_degree(&f.d),
            f.residual
        ));
    }
    out
}

fn render_report(report: &VerifyReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => json_line(&report_to_dto(report)),
        _ => Ok(report_text(report)),
    }
}

fn cmd_ifun(cfg: &RunConfig) -> Result<(String, i32)> {
    let series = i_series(&cfg.flag, cfg.cap, &cfg.level, cfg.equivariant, cfg.jobs)?;
    let text = match cfg.format {
        OutputFormat::Text => {
            let mut out = String::new();
            for (d, c) in &series.coeffs {
                out.push_str(&format!("d={}: {c}\n", fmt_degree(d)));
            }
            out
        }
        OutputFormat::Json => json_line(&series_to_dto(&series))?,
        OutputFormat::Latex => format!("{}\n", latex_series(&series)),
    };
    Ok((text, 0))
}

fn require_complete(flag: &FlagType) -> Result<()> {
    if flag.is_complete() {
        Ok(())
    } else {
        Err(Error::invalid("flag", format!("{flag} is not a complete flag variety")))
    }
}

fn eigen_verify(cfg: &RunConfig, level: &LevelSpec) -> Result<VerifyReport> {
    require_complete(&cfg.flag)?;
    let op = build_toda(cfg.flag.num_blocks(), level)?;
    let series = i_series(&cfg.flag, cfg.cap, level, true, cfg.jobs)?;
    verify_eigen(&op, &series, cfg.jobs)
}

fn dual_oracle_verify(cfg: &RunConfig) -> Result<VerifyReport> {
    require_complete(&cfg.flag)?;
    let rank = cfg.flag.num_blocks();
    let op = build_toda(rank, &cfg.level)?;
    let solved = recursion_solve(&op, &cfg.level, cfg.cap)?;
    let series = i_series(&cfg.flag, cfg.cap, &cfg.level, true, cfg.jobs)?;
    let points = FixedPoint::all(rank + 1);
    let per_point = parallel_map(cfg.jobs, &points, |sigma| -> Result<Vec<EigenFailure>> {
        let restricted = series_to_fixed_point(&series, sigma)?;
        let mut failures = Vec::new();
        for (d, loc) in &restricted {
            let rec = fixed_point_restrict(&solved[d], sigma)?;
            if !rf_eq_seeded(loc, &rec, cfg.seed) {
                failures.push(EigenFailure {
                    d: d.clone(),
                    sigma: sigma.sigma().to_vec(),
                    residual: loc.sub(&rec),
                });
            }
        }
        Ok(failures)
    });
    let mut failures = Vec::new();
    for batch in per_point {
        failures.extend(batch?);
    }
    failures.sort_by(|a, b| (&a.d, &a.sigma).cmp(&(&b.d, &b.sigma)));
    Ok(VerifyReport { pass: failures.is_empty(), failures })
}

/// The three closed-form degree-one coefficients of the complete flag in
/// `C^4`, in determinant-class variables: `1/((1-q)(1-p_i^2 p_{i-1}^{-1}
/// p_{i+1}^{-1} q))` with `p_0 = p_4 = 1`.
fn closed_form_c4(i: u16) -> RationalFunction {
    let mut pairs = vec![(Variable::Q, 1), (Variable::p(i), 2)];
    if i > 1 {
        pairs.push((Variable::p(i - 1), -1));
    }
    if i < 3 {
        pairs.push((Variable::p(i + 1), -1));
    }
    let one = LaurentPolynomial::one();
    let q_factor = one.sub(&LaurentPolynomial::var(Variable::Q));
    let p_factor = one.sub(&LaurentPolynomial::monomial(
        crate::scalar::scalar_int(1),
        Monomial::from_pairs(pairs),
    ));
    RationalFunction::new(one, vec![(q_factor, 1), (p_factor, 1)])
}

fn closed_forms_verify(cfg: &RunConfig) -> Result<VerifyReport> {
    let flag = FlagType::complete(4);
    let level = LevelSpec::trivial(3);
    let series = i_series(&flag, 1, &level, true, cfg.jobs)?;
    let mut failures = Vec::new();
    for i in 1..=3u16 {
        let mut d = vec![0u32; 3];
        d[(i - 1) as usize] = 1;
        let d = DegreeVector(d);
        let computed = series.coeffs[&d].clone();
        let expected = closed_form_c4(i);
        let report = kclass_eq_report(&computed, &expected, 3, cfg.seed, cfg.jobs)?;
        if !report.equal {
            let sigma = report
                .first_failure
                .map(|p| p.sigma().to_vec())
                .unwrap_or_default();
            failures.push(EigenFailure { d, sigma, residual: computed.sub(&expected) });
        }
    }
    Ok(VerifyReport { pass: failures.is_empty(), failures })
}

fn cmd_verify(kind: VerifyKind, cfg: &RunConfig) -> Result<(String, i32)> {
    let report = match kind {
        VerifyKind::Toda => eigen_verify(cfg, &LevelSpec::trivial(cfg.flag.num_blocks()))?,
        VerifyKind::Level => {
            let level = if cfg.level.is_trivial() {
                let pairs: Vec<_> =
                    (0..cfg.flag.num_blocks() as u32).map(|i| (i + 1, 1)).collect();
                LevelSpec::from_pairs(cfg.flag.num_blocks(), &pairs)?
            } else {
                cfg.level.clone()
            };
            eigen_verify(cfg, &level)?
        }
        VerifyKind::DualOracle => dual_oracle_verify(cfg)?,
        VerifyKind::ClosedForms => closed_forms_verify(cfg)?,
    };
    let text = render_report(&report, cfg.format)?;
    Ok((text, if report.pass { 0 } else { 1 }))
}

fn cmd_abelianize(matrix: &str, cfg: &RunConfig) -> Result<(String, i32)> {
    let matrix: DegreeMatrix = serde_json::from_str(matrix)
        .map_err(|e| Error::invalid("matrix", e.to_string()))?;
    let rf = abelianize(&cfg.flag, &matrix, &cfg.level, cfg.equivariant)?;
    let text = match cfg.format {
        OutputFormat::Text => format!("{rf}\n"),
        OutputFormat::Json => json_line(&rf_to_dto(&rf))?,
        OutputFormat::Latex => format!("{}\n", latex_rf(&rf)),
    };
    Ok((text, 0))
}

fn read_rf(path: &PathBuf) -> Result<RationalFunction> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid("input", format!("{}: {e}", path.display())))?;
    let dto: crate::json::RfDto = serde_json::from_str(&raw)
        .map_err(|e| Error::invalid("input", format!("{}: {e}", path.display())))?;
    crate::json::dto_to_rf(&dto)
}

fn cmd_kclass_eq(
    rank: usize,
    lhs: &PathBuf,
    rhs: &PathBuf,
    format: OutputFormat,
    seed: u64,
    jobs: usize,
) -> Result<(String, i32)> {
    let f = read_rf(lhs)?;
    let g = read_rf(rhs)?;
    let report = kclass_eq_report(&f, &g, rank, seed, jobs)?;
    let text = match format {
        OutputFormat::Json => json_line(&kclass_report_to_dto(&report))?,
        _ => {
            let mut out = format!(
                "equal: {}\npoints checked: {}\n",
                report.equal, report.points_checked
            );
            if let Some(p) = &report.first_failure {
                out.push_str(&format!("first failure: {p}\n"));
            }
            out
        }
    };
    Ok((text, if report.equal { 0 } else { 1 }))
}

fn dispatch(cli: Cli) -> Result<i32> {
    match &cli.command {
        Command::Ifun { flag, run } => {
            let cfg = run.config(parse_flag(flag)?)?;
            let (text, code) = cmd_ifun(&cfg)?;
            emit(&run.out, &text)?;
            Ok(code)
        }
        Command::Verify { kind, flag, run } => {
            let cfg = if *kind == VerifyKind::ClosedForms {
                run.config(
                    parse_flag(flag).unwrap_or_else(|_| FlagType::complete(4)),
                )?
            } else {
                run.config(parse_flag(flag)?)?
            };
            let (text, code) = cmd_verify(*kind, &cfg)?;
            emit(&run.out, &text)?;
            Ok(code)
        }
        Command::Abelianize { matrix, flag, run } => {
            let cfg = run.config(parse_flag(flag)?)?;
            let (text, code) = cmd_abelianize(matrix, &cfg)?;
            emit(&run.out, &text)?;
            Ok(code)
        }
        Command::KclassEq { rank, lhs, rhs, run } => {
            let jobs = match run.jobs {
                Some(0) => return Err(Error::invalid("jobs", "must be at least 1".to_string())),
                Some(j) => j,
                None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            };
            let (text, code) =
                cmd_kclass_eq(*rank, lhs, rhs, run.format, run.seed, jobs)?;
            emit(&run.out, &text)?;
            Ok(code)
        }
    }
}

/// Parse and run; returns the process exit code: 0 for success, 1 for a
/// verification that ran and failed, 2 for malformed input.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_entries_parse_and_validate() {
        let lv = parse_level(2, &["1:2".into()]).unwrap();
        assert_eq!(lv.levels(), &[2, 0]);
        assert!(parse_level(2, &["3:1".into()]).is_err());
        assert!(parse_level(2, &["oops".into()]).is_err());
    }

    #[test]
    fn flag_arguments_parse() {
        let args = FlagArgs { flag: Some("1,2".into()), n: Some(3) };
        assert_eq!(parse_flag(&args).unwrap(), FlagType::complete(3));
        assert!(parse_flag(&FlagArgs { flag: None, n: Some(3) }).is_err());
        assert!(parse_flag(&FlagArgs { flag: Some("2,1".into()), n: Some(3) }).is_err());
    }

    #[test]
    fn closed_forms_have_boundary_classes_dropped() {
        let f = closed_form_c4(1);
        let vars = f.support_vars();
        assert!(vars.contains(&Variable::p(1)));
        assert!(vars.contains(&Variable::p(2)));
        assert!(!vars.contains(&Variable::p(3)));
    }
}
