//! The `plaus` command line: evaluate, check, sweep and reformat case files.
//!
//! Exit codes: 0 success (every claim meets its standard, for `evaluate`),
//! 1 some claim falls short of its standard, 2 usage, parse or validation
//! failure, 3 internal error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use plaus_core::coherence::{check_case_coherence_with, check_engine_vs_oracle, DiscreteWorld};
use plaus_core::inference::{explain, sweep, SweepTarget};
use plaus_core::report::{self, Evaluation};
use plaus_core::{
    parse_case_with, serialize_case, CaseSpec, Config, StandardName, StandardOfProof,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NOT_MET: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "plaus",
    version,
    about = "Weigh competing explanations of evidence as posterior odds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate every claim of a case against a standard of proof
    Evaluate {
        case: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        standard: StandardArgs,
    },
    /// Run the coherence checks on a case, optionally against a world file
    Check {
        case: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Joint distribution file for the oracle comparison
        #[arg(long)]
        world: Option<PathBuf>,
        /// `group=var1,var2`; repeat once per group. Requires --world
        #[arg(long, requires = "world")]
        bind: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Re-evaluate a case while varying one parameter
    Sweep {
        case: PathBuf,
        /// claim.group.lr, claim.group.coverage, claim.prior_odds,
        /// claim.for.complexity or claim.against.complexity
        #[arg(long)]
        target: String,
        /// Comma-separated values
        #[arg(long, conflicts_with = "range", required_unless_present = "range")]
        values: Option<String>,
        /// `lo:hi:steps`, evenly spaced and inclusive of both ends
        #[arg(long)]
        range: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        standard: StandardArgs,
    },
    /// Print a case in canonical form
    Fmt { case: PathBuf },
}

#[derive(Args, Debug)]
struct StandardArgs {
    /// Standard to apply instead of the one named in the case
    #[arg(long)]
    standard: Option<String>,
    /// Threshold odds replacing the configured value
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// A failure carrying its exit code and the message for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

/// Run one command. Configuration is read from `PLAUS_CONFIG` when set.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let config = match Config::from_env() {
        Ok(config) => config,
        Err(e) => {
            let _ = writeln!(stderr, "plaus: configuration: {e}");
            return EXIT_INVALID;
        }
    };
    match execute(cli.command, &config, stdout, stderr) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(stderr, "plaus: {}", failure.message);
            failure.code
        }
    }
}

fn execute(
    command: Command,
    config: &Config,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<u8, Failure> {
    let (out, code) = match command {
        Command::Evaluate {
            case,
            format,
            standard,
        } => {
            let spec = load_case(&case, config, stderr)?;
            let standard = resolve_standard(&spec, &standard, config)?;
            let report = explain(&spec).map_err(|e| Failure::internal(e.to_string()))?;
            let evaluation = Evaluation::new(&spec, report, standard);
            let code = if evaluation.all_met() {
                EXIT_OK
            } else {
                EXIT_NOT_MET
            };
            let out = match format {
                Format::Text => evaluation.to_text(),
                Format::Json => evaluation.to_json(),
            };
            (out, code)
        }
        Command::Check {
            case,
            trials,
            seed,
            world,
            bind,
            format,
        } => {
            let spec = load_case(&case, config, stderr)?;
            let mut checks = check_case_coherence_with(&spec, trials, seed, &config.scale);
            if let Some(path) = world {
                let text = read(&path)?;
                let world = DiscreteWorld::parse(&text)
                    .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
                let binding = parse_bindings(&bind)?;
                let result = check_engine_vs_oracle(&world, &spec, &binding)
                    .map_err(|e| Failure::invalid(e.to_string()))?;
                checks.push(result);
            }
            let code = if checks.iter().all(|c| c.passed()) {
                EXIT_OK
            } else {
                EXIT_INVALID
            };
            let out = match format {
                Format::Text => report::checks_to_text(&spec.case_id, &checks),
                Format::Json => report::checks_to_json(&spec.case_id, &checks),
            };
            (out, code)
        }
        Command::Sweep {
            case,
            target,
            values,
            range,
            format,
            standard,
        } => {
            let spec = load_case(&case, config, stderr)?;
            let standard = resolve_standard(&spec, &standard, config)?;
            let target: SweepTarget = target
                .parse()
                .map_err(|e: plaus_core::InferenceError| Failure::invalid(e.to_string()))?;
            let values = match (values, range) {
                (Some(list), _) => parse_values(&list)?,
                (None, Some(range)) => parse_range(&range)?,
                (None, None) => {
                    return Err(Failure::invalid("one of --values or --range is required"))
                }
            };
            let table = sweep(&spec, &target, &values, &standard)
                .map_err(|e| Failure::invalid(e.to_string()))?;
            let out = match format {
                Format::Text => report::sweep_to_text(&spec.case_id, &table, &standard),
                Format::Json => report::sweep_to_json(&spec.case_id, &table, &standard),
            };
            (out, EXIT_OK)
        }
        Command::Fmt { case } => {
            let spec = load_case(&case, config, stderr)?;
            (serialize_case(&spec), EXIT_OK)
        }
    };
    stdout
        .write_all(out.as_bytes())
        .map_err(|e| Failure::internal(format!("writing output: {e}")))?;
    Ok(code)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))
}

/// Read and parse a case, writing any diagnostics to `stderr`.
fn load_case(path: &Path, config: &Config, stderr: &mut dyn Write) -> Result<CaseSpec, Failure> {
    let source = read(path)?;
    parse_case_with(&source, &config.scale).map_err(|diagnostics| {
        let file = path.display().to_string();
        for d in &diagnostics {
            let _ = writeln!(stderr, "{}", d.render(&file));
        }
        Failure::invalid(format!(
            "{file}: {} error{}",
            diagnostics.len(),
            if diagnostics.len() == 1 { "" } else { "s" }
        ))
    })
}

fn resolve_standard(
    case: &CaseSpec,
    args: &StandardArgs,
    config: &Config,
) -> Result<StandardOfProof, Failure> {
    let name = match &args.standard {
        Some(name) => StandardName::from_name(name),
        None => case.standard.clone(),
    };
    let standard = match args.threshold {
        Some(odds) => StandardOfProof::new(name, odds),
        None => config.standard(&name),
    };
    standard.map_err(|e| Failure::invalid(e.to_string()))
}

fn parse_number(text: &str) -> Result<f64, Failure> {
    let text = text.trim();
    match text {
        "inf" => Ok(f64::INFINITY),
        _ => text
            .parse::<f64>()
            .ok()
            .filter(|v| !v.is_nan())
            .ok_or_else(|| Failure::invalid(format!("`{text}` is not a number"))),
    }
}

fn parse_values(list: &str) -> Result<Vec<f64>, Failure> {
    list.split(',').map(parse_number).collect()
}

fn parse_range(range: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = range.split(':').collect();
    let [lo, hi, steps] = parts.as_slice() else {
        return Err(Failure::invalid(format!(
            "range `{range}` is not lo:hi:steps"
        )));
    };
    let (lo, hi) = (parse_number(lo)?, parse_number(hi)?);
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Failure::invalid("range bounds must be finite"));
    }
    let steps: usize = steps
        .trim()
        .parse()
        .ok()
        .filter(|n| *n >= 1)
        .ok_or_else(|| {
            Failure::invalid(format!("steps in `{range}` must be a positive integer"))
        })?;
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i + 1 == steps {
                hi
            } else {
                lo + (hi - lo) * i as f64 / last
            }
        })
        .collect())
}

fn parse_bindings(binds: &[String]) -> Result<BTreeMap<String, Vec<String>>, Failure> {
    let mut out = BTreeMap::new();
    for bind in binds {
        let (group, vars) = bind
            .split_once('=')
            .ok_or_else(|| Failure::invalid(format!("binding `{bind}` is not group=var1,var2")))?;
        let vars: Vec<String> = vars
            .split(',')
            .map(str::trim)
            .filter(|v| !v.is_empty())
            .map(String::from)
            .collect();
        if vars.is_empty() {
            return Err(Failure::invalid(format!(
                "binding `{bind}` names no variables"
            )));
        }
        if out.insert(group.trim().to_string(), vars).is_some() {
            return Err(Failure::invalid(format!("group {group} bound twice")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let values = parse_range("0.1:1:10").ok().unwrap();
        assert_eq!(values.len(), 10);
        assert_eq!(values[0], 0.1);
        assert_eq!(values[9], 1.0);
        assert_eq!(parse_range("2:5:1").ok().unwrap(), vec![2.0]);
        assert!(parse_range("1:2").is_err());
        assert!(parse_range("1:2:0").is_err());
        assert!(parse_range("1:inf:3").is_err());
    }

    #[test]
    fn value_lists() {
        assert_eq!(
            parse_values("1, 0.5,inf").ok().unwrap(),
            vec![1.0, 0.5, f64::INFINITY]
        );
        assert!(parse_values("1,,2").is_err());
        assert!(parse_values("NaN").is_err());
    }

    #[test]
    fn bindings() {
        let b = parse_bindings(&["g1=a,b".into(), "c.g2=c".into()])
            .ok()
            .unwrap();
        assert_eq!(b["g1"], vec!["a", "b"]);
        assert_eq!(b["c.g2"], vec!["c"]);
        assert!(parse_bindings(&["g1".into()]).is_err());
        assert!(parse_bindings(&["g1=".into()]).is_err());
        assert!(parse_bindings(&["g=a".into(), "g=b".into()]).is_err());
    }
}
