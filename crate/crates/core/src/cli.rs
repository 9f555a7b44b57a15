//! Command-line front end: flag parsing with an optional key=value config
//! overlay, validation, dispatch to the pipelines, and report emission.
//!
//! Exit codes: 0 success, 2 validation failure, 3 budget exhaustion with
//! partial output, 64 unusable arguments.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use crate::arith::is_prime;
use crate::congruence::{
    count_units_direct_threaded, genus_estimate, index_gamma, Level, MU_BAR_DEFAULT,
};
use crate::error::Error;
use crate::lps;
use crate::quaternion::QuaternionAlgebra;
use crate::report::{
    lps_survey_to_csv, survey_to_csv, to_json_pretty, AlgebraReport, IndexReport, LpsReport,
    SurveyRowReport, SystoleReport, TernaryReport, SURVEY_CSV_HEADER,
};
use crate::systole::{self, SurveyRow};
use crate::ternary::{self, RepOutcome, SearchBudget, TernaryForm};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

pub const THREADS_ENV: &str = "SYSTOLE_LAB_THREADS";

#[derive(Parser)]
#[command(
    name = "systole-lab",
    version,
    about = "Congruence unit groups of rational quaternion algebras: indices, systole brackets, ternary representation, and LPS graph girth"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format (default: json; surveys default to csv)
    #[arg(long, global = true, value_enum)]
    emit: Option<Emit>,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker thread cap for enumeration loops (env SYSTOLE_LAB_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for randomized pipelines; all current commands are deterministic
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Optional flat key=value config file; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IndexMethod {
    Direct,
    Crt,
}

#[derive(Subcommand)]
enum Command {
    /// Splitting data and admissibility gates for (a,b/Q)
    AlgebraInfo {
        #[arg(long)]
        a: Option<i64>,
        #[arg(long)]
        b: Option<i64>,
    },
    /// [Gamma : Gamma(q)] = #(O/qO)^1
    Index {
        #[arg(long)]
        a: Option<i64>,
        #[arg(long)]
        b: Option<i64>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, value_enum)]
        method: Option<IndexMethod>,
    },
    /// Systole bracket for X_q at an odd prime level
    Systole {
        #[arg(long)]
        a: Option<i64>,
        #[arg(long)]
        b: Option<i64>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long = "box")]
        box_bound: Option<i64>,
        #[arg(long = "node-cap")]
        node_cap: Option<u64>,
        #[arg(long = "max-candidates")]
        max_candidates: Option<usize>,
        /// Hyperbolic co-area constant for the genus estimate
        #[arg(long = "mu-bar")]
        mu_bar: Option<f64>,
    },
    /// Systole/index growth table over prime levels in [qmin, qmax]
    Survey {
        #[arg(long)]
        a: Option<i64>,
        #[arg(long)]
        b: Option<i64>,
        #[arg(long)]
        qmin: Option<u64>,
        #[arg(long)]
        qmax: Option<u64>,
        #[arg(long = "box")]
        box_bound: Option<i64>,
        #[arg(long = "node-cap")]
        node_cap: Option<u64>,
        #[arg(long = "max-candidates")]
        max_candidates: Option<usize>,
    },
    /// Represent n by a diagonal ternary form c1,c2,c3
    Ternary {
        /// Coefficients as "c1,c2,c3"
        #[arg(long)]
        form: Option<String>,
        #[arg(long)]
        n: Option<i64>,
        #[arg(long = "box")]
        box_bound: Option<i64>,
        #[arg(long = "node-cap")]
        node_cap: Option<u64>,
    },
    /// LPS Cayley graph X^{p,q} and its girth
    Lps {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
        /// Survey all candidate levels up to this bound instead
        #[arg(long)]
        survey: Option<u64>,
    },
}

/// Flat key=value overlay; '#' starts a comment.
struct ConfigMap(HashMap<String, String>);

impl ConfigMap {
    fn empty() -> Self {
        ConfigMap(HashMap::new())
    }

    fn load(path: &Path) -> Result<Self, String> {
        let text =
            fs::read_to_string(path).map_err(|e| format!("config {}: {e}", path.display()))?;
        let mut map = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {} is not key=value: {raw}", lineno + 1))?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(ConfigMap(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, String>
    where
        T::Err: std::fmt::Display,
    {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| format!("config key {key}={raw}: {e}")),
        }
    }
}

type Failure = (String, i32);

fn fail_validation(msg: impl Into<String>) -> Failure {
    (msg.into(), EXIT_VALIDATION)
}

fn resolve<T: FromStr>(flag: Option<T>, cfg: &ConfigMap, key: &str) -> Result<Option<T>, Failure>
where
    T::Err: std::fmt::Display,
{
    match flag {
        Some(v) => Ok(Some(v)),
        None => cfg.get(key).map_err(fail_validation),
    }
}

fn required<T>(value: Option<T>, name: &str) -> Result<T, Failure> {
    value.ok_or_else(|| fail_validation(format!("missing required parameter --{name}")))
}

fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::DirectCountBudget { .. } => EXIT_BUDGET,
        _ => EXIT_VALIDATION,
    }
}

fn map_err(e: Error) -> Failure {
    let code = error_exit_code(&e);
    (e.to_string(), code)
}

fn write_report(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, text)
            .map_err(|e| fail_validation(format!("writing {}: {e}", path.display()))),
    }
}

fn algebra(a: i64, b: i64) -> Result<QuaternionAlgebra, Failure> {
    QuaternionAlgebra::new(a, b).map_err(map_err)
}

/// Gate used by the surface pipelines, naming the failing condition.
fn fuchsian_algebra(a: i64, b: i64) -> Result<QuaternionAlgebra, Failure> {
    let alg = algebra(a, b)?;
    if !(alg.a > 0 || alg.b > 0) {
        return Err(fail_validation(format!(
            "algebra ({a},{b}) is ramified at the real place; the surface pipeline needs a split real place"
        )));
    }
    if !alg.is_division() {
        return Err(fail_validation(format!(
            "algebra ({a},{b}) is not a division algebra; Gamma would not be cocompact"
        )));
    }
    Ok(alg)
}

fn parse_form(text: &str) -> Result<[i64; 3], Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(fail_validation(format!(
            "--form expects c1,c2,c3 (got {text})"
        )));
    }
    let mut out = [0i64; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|e| fail_validation(format!("--form coefficient {part}: {e}")))?;
    }
    Ok(out)
}

fn budget_from(box_bound: Option<i64>, node_cap: Option<u64>) -> Result<SearchBudget, Failure> {
    SearchBudget::new(
        box_bound.unwrap_or(SearchBudget::default().box_bound),
        node_cap.unwrap_or(SearchBudget::default().node_cap),
    )
    .map_err(map_err)
}

fn resolve_threads(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(1)
    .max(1)
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err((msg, code)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, Failure> {
    let cfg = match &cli.config {
        Some(path) => ConfigMap::load(path).map_err(fail_validation)?,
        None => ConfigMap::empty(),
    };
    let threads = resolve_threads(resolve(cli.threads, &cfg, "threads")?);
    let emit = resolve(cli.emit, &cfg, "emit")?;
    let out = cli.out.clone();

    match cli.command {
        Command::AlgebraInfo { a, b } => {
            let a = required(resolve(a, &cfg, "a")?, "a")?;
            let b = required(resolve(b, &cfg, "b")?, "b")?;
            let report = AlgebraReport::new(&algebra(a, b)?);
            write_report(&to_json_pretty(&report), out.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Index { a, b, q, method } => {
            let a = required(resolve(a, &cfg, "a")?, "a")?;
            let b = required(resolve(b, &cfg, "b")?, "b")?;
            let q = required(resolve(q, &cfg, "q")?, "q")?;
            let method = resolve(method, &cfg, "method")?.unwrap_or(IndexMethod::Crt);
            let alg = algebra(a, b)?;
            let count = match method {
                IndexMethod::Direct => {
                    count_units_direct_threaded(&alg, q, threads).map_err(map_err)?
                }
                IndexMethod::Crt => {
                    index_gamma(&alg, &Level::new(q).map_err(map_err)?).map_err(map_err)?
                }
            };
            let report = IndexReport::new(&alg, &count);
            write_report(&to_json_pretty(&report), out.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Systole {
            a,
            b,
            q,
            box_bound,
            node_cap,
            max_candidates,
            mu_bar,
        } => {
            let a = required(resolve(a, &cfg, "a")?, "a")?;
            let b = required(resolve(b, &cfg, "b")?, "b")?;
            let q = required(resolve(q, &cfg, "q")?, "q")?;
            let budget = budget_from(
                resolve(box_bound, &cfg, "box")?,
                resolve(node_cap, &cfg, "node-cap")?,
            )?;
            let max_candidates = resolve(max_candidates, &cfg, "max-candidates")?
                .unwrap_or(systole::DEFAULT_MAX_CANDIDATES);
            let mu_bar = resolve(mu_bar, &cfg, "mu-bar")?.unwrap_or(MU_BAR_DEFAULT);
            let alg = fuchsian_algebra(a, b)?;
            let bracket =
                systole::minimal_trace_search(&alg, q, &budget, max_candidates).map_err(map_err)?;
            let index = index_gamma(&alg, &Level::new(q).map_err(map_err)?)
                .map_err(map_err)?
                .count;
            let genus = genus_estimate(&index, mu_bar);
            let report = SystoleReport::new(&alg, &bracket, &index, genus);
            let text = match emit.unwrap_or(Emit::Json) {
                Emit::Json => to_json_pretty(&report),
                Emit::Csv => {
                    let row = survey_row_from_bracket(&alg, &bracket)?;
                    let mut s = String::from(SURVEY_CSV_HEADER);
                    s.push('\n');
                    s.push_str(&survey_row_csv_line(&row));
                    s
                }
            };
            write_report(&text, out.as_deref())?;
            if bracket.trace_upper.is_none() {
                eprintln!("no witness within budget; upper bound left empty");
                return Ok(EXIT_BUDGET);
            }
            Ok(EXIT_OK)
        }
        Command::Survey {
            a,
            b,
            qmin,
            qmax,
            box_bound,
            node_cap,
            max_candidates,
        } => {
            let a = required(resolve(a, &cfg, "a")?, "a")?;
            let b = required(resolve(b, &cfg, "b")?, "b")?;
            let qmin = required(resolve(qmin, &cfg, "qmin")?, "qmin")?;
            let qmax = required(resolve(qmax, &cfg, "qmax")?, "qmax")?;
            let budget = budget_from(
                resolve(box_bound, &cfg, "box")?,
                resolve(node_cap, &cfg, "node-cap")?,
            )?;
            let max_candidates = resolve(max_candidates, &cfg, "max-candidates")?
                .unwrap_or(systole::DEFAULT_MAX_CANDIDATES);
            let alg = fuchsian_algebra(a, b)?;
            let two_ab = 2 * alg.a.unsigned_abs() * alg.b.unsigned_abs();
            let levels: Vec<u64> = (qmin.max(3)..=qmax)
                .filter(|&q| q % 2 == 1 && is_prime(q) && two_ab % q != 0)
                .collect();
            let survey = systole::survey(&alg, &levels, &budget, max_candidates).map_err(map_err)?;
            let text = match emit.unwrap_or(Emit::Csv) {
                Emit::Csv => survey_to_csv(&survey),
                Emit::Json => {
                    let rows: Vec<SurveyRowReport> =
                        survey.rows.iter().map(SurveyRowReport::new).collect();
                    to_json_pretty(&rows)
                }
            };
            write_report(&text, out.as_deref())?;
            if let Some(slope) = survey.slope {
                let (attained, with_witness) = survey.attainment();
                eprintln!(
                    "defect slope vs log q: {slope:.6}; trace floor attained on {attained}/{with_witness} levels"
                );
            }
            if survey.rows.iter().any(|r| r.sys_upper.is_none()) {
                eprintln!("some levels lack a witness within budget");
                return Ok(EXIT_BUDGET);
            }
            Ok(EXIT_OK)
        }
        Command::Ternary {
            form,
            n,
            box_bound,
            node_cap,
        } => {
            let form_text = required(resolve(form, &cfg, "form")?, "form")?;
            let n = required(resolve(n, &cfg, "n")?, "n")?;
            let coeffs = parse_form(&form_text)?;
            let budget = budget_from(
                resolve(box_bound, &cfg, "box")?,
                resolve(node_cap, &cfg, "node-cap")?,
            )?;
            let form = TernaryForm::new(coeffs[0], coeffs[1], coeffs[2]).map_err(map_err)?;
            let outcome = ternary::represent(&form, n, &budget);
            let report = TernaryReport::new(coeffs, n, &outcome);
            write_report(&to_json_pretty(&report), out.as_deref())?;
            if matches!(outcome, RepOutcome::Unknown { .. }) {
                return Ok(EXIT_BUDGET);
            }
            Ok(EXIT_OK)
        }
        Command::Lps { p, q, survey } => {
            let p = required(resolve(p, &cfg, "p")?, "p")?;
            let survey_max = resolve(survey, &cfg, "survey")?;
            match survey_max {
                Some(qmax) => {
                    let candidates: Vec<u64> =
                        (5..=qmax).filter(|&q| is_prime(q) && q % 4 == 1 && q != p).collect();
                    let rows = lps::girth_survey(p, &candidates).map_err(map_err)?;
                    let (csv, skipped) = lps_survey_to_csv(&rows);
                    write_report(&csv, out.as_deref())?;
                    for line in skipped {
                        eprintln!("{line}");
                    }
                    Ok(EXIT_OK)
                }
                None => {
                    let q = required(resolve(q, &cfg, "q")?, "q")?;
                    let graph = lps::build_graph(p, q).map_err(map_err)?;
                    let girth = lps::girth(&graph).map_err(map_err)?;
                    let report = LpsReport::new(&graph, &girth);
                    write_report(&to_json_pretty(&report), out.as_deref())?;
                    Ok(EXIT_OK)
                }
            }
        }
    }
}

fn survey_row_from_bracket(
    alg: &QuaternionAlgebra,
    bracket: &crate::systole::SystoleBracket,
) -> Result<SurveyRow, Failure> {
    use num::ToPrimitive;
    let index = index_gamma(alg, &Level::new(bracket.q).map_err(map_err)?)
        .map_err(map_err)?
        .count;
    let log_index = index.to_f64().unwrap().ln();
    let sys_upper = bracket.sys_upper();
    Ok(SurveyRow {
        q: bracket.q,
        index,
        log_index,
        sys_lower: bracket.sys_lower(),
        sys_upper,
        defect: sys_upper.map(|u| u - systole::GAMMA_FOUR_THIRDS * log_index),
        exhaustive: bracket.exhaustive,
    })
}

fn survey_row_csv_line(row: &SurveyRow) -> String {
    let r = SurveyRowReport::new(row);
    format!(
        "{},{},{:.6},{:.6},{},{},{}\n",
        r.q,
        r.index,
        r.log_index,
        r.sys_lower,
        r.sys_upper.map(|x| format!("{x:.6}")).unwrap_or_default(),
        r.defect.map(|x| format!("{x:.6}")).unwrap_or_default(),
        r.exhaustive
    )
}

impl FromStr for Emit {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Emit::Json),
            "csv" => Ok(Emit::Csv),
            other => Err(format!("emit must be json or csv (got {other})")),
        }
    }
}

impl FromStr for IndexMethod {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "direct" => Ok(IndexMethod::Direct),
            "crt" => Ok(IndexMethod::Crt),
            other => Err(format!("method must be direct or crt (got {other})")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_64() {
        assert_eq!(run(["systole-lab", "--definitely-not-a-flag"]), EXIT_USAGE);
        assert_eq!(run(["systole-lab", "frobnicate"]), EXIT_USAGE);
    }

    #[test]
    fn missing_parameters_exit_2() {
        assert_eq!(run(["systole-lab", "algebra-info"]), EXIT_VALIDATION);
        assert_eq!(run(["systole-lab", "index", "--a", "2", "--b", "3"]), EXIT_VALIDATION);
    }

    #[test]
    fn inadmissible_algebra_exits_2() {
        assert_eq!(
            run([
                "systole-lab",
                "systole",
                "--a",
                "-1",
                "--b",
                "-1",
                "--q",
                "5"
            ]),
            EXIT_VALIDATION
        );
        assert_eq!(
            run(["systole-lab", "systole", "--a", "1", "--b", "1", "--q", "5"]),
            EXIT_VALIDATION
        );
    }

    #[test]
    fn form_parsing() {
        assert_eq!(parse_form("2,3,-6").unwrap(), [2, 3, -6]);
        assert_eq!(parse_form(" 1 , 1 , 1 ").unwrap(), [1, 1, 1]);
        assert!(parse_form("2,3").is_err());
        assert!(parse_form("2,3,x").is_err());
    }

    #[test]
    fn config_overlay() {
        let dir = std::env::temp_dir().join("systole-lab-test-config");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg.txt");
        fs::write(&path, "a = 2\nb = 3   # algebra\nq = 35\n").unwrap();
        let cfg = ConfigMap::load(&path).unwrap();
        assert_eq!(cfg.get::<i64>("a").unwrap(), Some(2));
        assert_eq!(cfg.get::<u64>("q").unwrap(), Some(35));
        assert_eq!(cfg.get::<i64>("missing").unwrap(), None);
        assert!(cfg.get::<i64>("b").unwrap() == Some(3));
    }
}
