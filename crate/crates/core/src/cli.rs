//! Command-line interface behind the `coe` binary.
//!
//! [`run`] takes raw arguments and returns captured stdout, stderr, and an
//! exit code, so integration tests can assert byte-identical output without
//! spawning processes.  Exit codes: 0 success, 1 computational error, 2 usage
//! error, 3 failed Monte Carlo verification.
//!
//! When `COE_WG_CACHE` names a file, character tables are loaded from it
//! before the command runs and saved back afterwards; cache traffic is
//! reported on stderr so stdout stays reproducible.

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use num::{BigInt, BigRational, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::characters::{load_cache_file, save_cache_file};
use crate::combinat::Partition;
use crate::error::{Error, Result};
use crate::moments::{
    asymptotic_counts, coe_moment, coe_moment_symbolic, diagonal_moment_symbolic, moment_expansion,
    offdiagonal_moment_symbolic, IndexSeq, MomentResult,
};
use crate::montecarlo::{verify_moment, RngSpec};
use crate::qz::{InfinitySeries, RatFunc};
use crate::selftest;
use crate::weingarten::{orthogonal_table, unitary_table};
use crate::Limits;

#[derive(Parser)]
#[command(
    name = "coe",
    version,
    about = "Exact moments of circular orthogonal ensemble matrix elements"
)]
struct Cli {
    /// Emit a single JSON object instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Largest moment weight n accepted by exact computations
    #[arg(long, global = true, default_value_t = 6)]
    n_max: usize,

    /// Enumeration budget shared by permutation sums and sampling
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget: u64,

    /// Omit the timestamp so reruns are byte-identical
    #[arg(long, global = true)]
    no_timestamp: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact COE moment for a pair of index sequences
    Moment {
        /// Row-column indices of the plain factors, e.g. 1,2,1,2
        #[arg(long)]
        i: String,
        /// Row-column indices of the conjugated factors
        #[arg(long)]
        j: String,
        /// Print the rational function of z even when a value is requested
        #[arg(long)]
        symbolic: bool,
        /// Evaluate at this matrix size
        #[arg(long, value_name = "N")]
        numeric: Option<usize>,
        /// Also print the value as a float
        #[arg(long, requires = "numeric")]
        float: bool,
    },
    /// Closed-form absolute moments of a single matrix element
    Single {
        #[arg(long, value_enum)]
        kind: ElementKind,
        /// Half the number of factors: the moment is E|v|^(2n)
        #[arg(long)]
        n: usize,
        /// Evaluate at this matrix size
        #[arg(long = "N", value_name = "N")]
        size: Option<usize>,
    },
    /// Weingarten functions by conjugacy or coset type
    Wg {
        #[arg(long, value_enum)]
        family: WgFamily,
        /// Weight: pair count for orthogonal, permutation degree for unitary
        #[arg(long)]
        n: usize,
        /// Evaluate every entry at this z
        #[arg(long)]
        at: Option<i64>,
    },
    /// Large-N expansion of a moment with its matching counts
    Asym {
        #[arg(long)]
        i: String,
        #[arg(long)]
        j: String,
        /// Number of expansion coefficients
        #[arg(long, default_value_t = 2)]
        orders: usize,
    },
    /// Monte Carlo check of an exact moment
    McVerify {
        #[arg(long)]
        i: String,
        #[arg(long)]
        j: String,
        #[arg(long = "N", value_name = "N")]
        size: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        /// Largest accepted |z| deviation in standard errors
        #[arg(long, default_value_t = 4.0)]
        k: f64,
    },
    /// Run the built-in consistency checks
    Selftest {
        /// Include the Monte Carlo checks
        #[arg(long)]
        mc: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ElementKind {
    Diagonal,
    Offdiagonal,
}

#[derive(Clone, Copy, ValueEnum)]
enum WgFamily {
    Orthogonal,
    Unitary,
}

/// Captured output of one invocation.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

struct CommandOutput {
    lines: Vec<String>,
    json: Value,
    code: u8,
}

/// Entry point for the `coe` binary.
pub fn main() -> ExitCode {
    let out = run(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code)
}

/// Parses arguments (the first is the binary name) and executes one command.
pub fn run<I, S>(args: I) -> RunOutput
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let rendered = err.render().to_string();
            return if err.exit_code() == 0 {
                RunOutput {
                    stdout: rendered,
                    stderr: String::new(),
                    code: 0,
                }
            } else {
                RunOutput {
                    stdout: String::new(),
                    stderr: rendered,
                    code: 2,
                }
            };
        }
    };

    let limits = Limits {
        n_max: cli.n_max,
        enum_budget: cli.budget,
    };
    let mut stderr = String::new();
    let cache_path = std::env::var_os("COE_WG_CACHE").map(PathBuf::from);
    if let Some(path) = &cache_path {
        if path.exists() {
            match load_cache_file(path) {
                Ok(count) => {
                    stderr.push_str(&format!(
                        "cache: loaded {count} character table(s) from {}\n",
                        path.display()
                    ));
                }
                Err(err) => {
                    stderr.push_str(&format!("cache: ignoring {}: {err}\n", path.display()));
                }
            }
        }
    }

    let outcome = dispatch(&cli.command, &limits);

    if let Some(path) = &cache_path {
        match save_cache_file(path) {
            Ok(()) => stderr.push_str(&format!("cache: saved to {}\n", path.display())),
            Err(err) => stderr.push_str(&format!("cache: not saved: {err}\n")),
        }
    }

    match outcome {
        Ok(output) => {
            let stdout = if cli.json {
                let mut value = output.json;
                if let Value::Object(map) = &mut value {
                    map.insert("config".into(), config_json(&cli));
                }
                format!("{:#}\n", value)
            } else {
                let mut text = header_lines(&cli).join("\n");
                text.push('\n');
                text.push_str(&output.lines.join("\n"));
                text.push('\n');
                text
            };
            RunOutput {
                stdout,
                stderr,
                code: output.code,
            }
        }
        Err(err) => {
            stderr.push_str(&format!("error[{}]: {err}\n", err.code()));
            RunOutput {
                stdout: String::new(),
                stderr,
                code: 1,
            }
        }
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Moment { .. } => "moment",
        Command::Single { .. } => "single",
        Command::Wg { .. } => "wg",
        Command::Asym { .. } => "asym",
        Command::McVerify { .. } => "mc-verify",
        Command::Selftest { .. } => "selftest",
    }
}

fn now_secs() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn header_lines(cli: &Cli) -> Vec<String> {
    let mut lines = vec![
        format!("# coe {}", command_name(&cli.command)),
        format!("# config: n_max={} budget={}", cli.n_max, cli.budget),
    ];
    if !cli.no_timestamp {
        lines.push(format!("# time: {}", now_secs()));
    }
    lines
}

fn config_json(cli: &Cli) -> Value {
    json!({
        "n_max": cli.n_max,
        "budget": cli.budget,
        "time": if cli.no_timestamp { Value::Null } else { json!(now_secs()) },
    })
}

fn dispatch(command: &Command, limits: &Limits) -> Result<CommandOutput> {
    match command {
        Command::Moment {
            i,
            j,
            symbolic,
            numeric,
            float,
        } => cmd_moment(i, j, *symbolic, *numeric, *float, limits),
        Command::Single { kind, n, size } => cmd_single(*kind, *n, *size),
        Command::Wg { family, n, at } => cmd_wg(*family, *n, *at, limits),
        Command::Asym { i, j, orders } => cmd_asym(i, j, *orders, limits),
        Command::McVerify {
            i,
            j,
            size,
            samples,
            seed,
            stream,
            k,
        } => cmd_mc_verify(i, j, *size, *samples, *seed, *stream, *k, limits),
        Command::Selftest { mc } => Ok(cmd_selftest(*mc, limits)),
    }
}

fn big_strings(values: &[BigInt]) -> Vec<String> {
    values.iter().map(|v| v.to_string()).collect()
}

fn ratfunc_json(f: &RatFunc, var: &str) -> Value {
    let (num, den) = f.integer_pair();
    json!({
        "display": f.render(var),
        "numerator_coeffs": big_strings(&num),
        "denominator_coeffs": big_strings(&den),
    })
}

fn value_json(big_n: usize, exact: &BigRational, float: bool) -> Value {
    json!({
        "N": big_n,
        "exact": exact.to_string(),
        "float": if float { json!(exact.to_f64()) } else { Value::Null },
    })
}

fn index_json(seq: &IndexSeq) -> Value {
    json!(seq.entries())
}

fn type_counts_json(counts: &[(Partition, BigInt)]) -> Value {
    Value::Array(
        counts
            .iter()
            .map(|(mu, c)| json!({"type": mu.parts(), "count": c.to_string()}))
            .collect(),
    )
}

fn push_moment_common(lines: &mut Vec<String>, result: &MomentResult) {
    lines.push(format!("i = {}", result.i));
    lines.push(format!("j = {}", result.j));
    lines.push(format!("n = {}", result.n));
    lines.push(format!("matchings = {}", result.match_count));
    for (mu, count) in &result.type_counts {
        lines.push(format!("type {mu}: {count}"));
    }
}

fn cmd_moment(
    i: &str,
    j: &str,
    symbolic: bool,
    numeric: Option<usize>,
    float: bool,
    limits: &Limits,
) -> Result<CommandOutput> {
    let i = IndexSeq::parse(i)?;
    let j = IndexSeq::parse(j)?;
    let result = match numeric {
        Some(big_n) => coe_moment(&i, &j, big_n, limits)?,
        None => coe_moment_symbolic(&i, &j, limits)?,
    };
    let mut lines = Vec::new();
    push_moment_common(&mut lines, &result);
    let show_symbolic = symbolic || numeric.is_none();
    if show_symbolic {
        lines.push(format!("M(i,j;z) = {}", result.symbolic.display_factored()));
        lines.push("note: evaluate at z = N + 1".into());
    }
    if let (Some(big_n), Some(value)) = (numeric, &result.value) {
        lines.push(format!("value at N = {big_n}: {value}"));
        if float {
            lines.push(format!(
                "float value: {}",
                value.to_f64().unwrap_or(f64::NAN)
            ));
        }
    }
    let json = json!({
        "command": "moment",
        "i": index_json(&result.i),
        "j": index_json(&result.j),
        "n": result.n,
        "matchings": result.match_count.to_string(),
        "type_counts": type_counts_json(&result.type_counts),
        "symbolic": if show_symbolic { ratfunc_json(&result.symbolic, "z") } else { Value::Null },
        "note": "evaluate at z = N + 1",
        "value": match (numeric, &result.value) {
            (Some(big_n), Some(value)) => value_json(big_n, value, float),
            _ => Value::Null,
        },
    });
    Ok(CommandOutput {
        lines,
        json,
        code: 0,
    })
}

fn cmd_single(kind: ElementKind, n: usize, size: Option<usize>) -> Result<CommandOutput> {
    if n == 0 {
        return Err(Error::Domain("moment weight n must be positive".into()));
    }
    let (kind_name, label, symbolic) = match kind {
        ElementKind::Diagonal => ("diagonal", "E|v_cc|", diagonal_moment_symbolic(n)),
        ElementKind::Offdiagonal => ("offdiagonal", "E|v_cd|", offdiagonal_moment_symbolic(n)),
    };
    let value = match size {
        Some(big_n) => {
            let floor = match kind {
                ElementKind::Diagonal => 1,
                ElementKind::Offdiagonal => 2,
            };
            if big_n < floor {
                return Err(Error::Domain(format!(
                    "{kind_name} moments need matrix size N >= {floor}"
                )));
            }
            Some(symbolic.eval_at_int(big_n as i64)?)
        }
        None => None,
    };
    let mut lines = vec![
        format!("kind = {kind_name}"),
        format!("n = {n}"),
        format!("{label}^{} = {}", 2 * n, symbolic.render("N")),
    ];
    if let (Some(big_n), Some(value)) = (size, &value) {
        lines.push(format!("value at N = {big_n}: {value}"));
        lines.push(format!(
            "float value: {}",
            value.to_f64().unwrap_or(f64::NAN)
        ));
    }
    let json = json!({
        "command": "single",
        "kind": kind_name,
        "n": n,
        "symbolic": ratfunc_json(&symbolic, "N"),
        "value": match (size, &value) {
            (Some(big_n), Some(value)) => value_json(big_n, value, true),
            _ => Value::Null,
        },
    });
    Ok(CommandOutput {
        lines,
        json,
        code: 0,
    })
}

fn cmd_wg(family: WgFamily, n: usize, at: Option<i64>, limits: &Limits) -> Result<CommandOutput> {
    let (family_name, entries): (&str, Vec<(Partition, RatFunc)>) = match family {
        WgFamily::Orthogonal => {
            let table = orthogonal_table(n, limits)?;
            let entries = table
                .types()
                .iter()
                .map(|mu| (mu.clone(), table.value(mu).clone()))
                .collect();
            ("orthogonal", entries)
        }
        WgFamily::Unitary => {
            let table = unitary_table(n, limits)?;
            let entries = table
                .types()
                .iter()
                .map(|rho| (rho.clone(), table.value(rho).clone()))
                .collect();
            ("unitary", entries)
        }
    };
    let group = match family {
        WgFamily::Orthogonal => "O(N)",
        WgFamily::Unitary => "U(N)",
    };
    let mut lines = vec![format!("family = {family_name}"), format!("weight = {n}")];
    let mut json_entries = Vec::new();
    for (mu, f) in &entries {
        let at_value = at.map(|z| f.eval_at_int(z)).transpose()?;
        let mut line = format!("type {mu}: {}", f.display_factored());
        if let (Some(z), Some(value)) = (at, &at_value) {
            line.push_str(&format!(" | at z = {z}: {value}"));
        }
        lines.push(line);
        let mut entry = ratfunc_json(f, "z");
        if let Value::Object(map) = &mut entry {
            map.insert("type".into(), json!(mu.parts()));
            map.insert(
                "at".into(),
                match (at, &at_value) {
                    (Some(z), Some(value)) => json!({
                        "z": z,
                        "exact": value.to_string(),
                        "float": value.to_f64(),
                    }),
                    _ => Value::Null,
                },
            );
        }
        json_entries.push(entry);
    }
    lines.push(format!("note: evaluate at z = N for {group} averages"));
    let json = json!({
        "command": "wg",
        "family": family_name,
        "weight": n,
        "entries": json_entries,
        "note": format!("evaluate at z = N for {group} averages"),
    });
    Ok(CommandOutput {
        lines,
        json,
        code: 0,
    })
}

fn render_series(series: &InfinitySeries, var: &str) -> String {
    let Some(lead) = series.leading_exponent else {
        return "0".into();
    };
    let mut out = String::new();
    for (k, coeff) in series.coeffs.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let exponent = lead - k as i64;
        let negative = coeff < &BigRational::zero();
        let magnitude = if negative { -coeff.clone() } else { coeff.clone() };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if !magnitude.is_integer() || magnitude != BigRational::from_integer(BigInt::from(1)) {
            out.push_str(&format!("{magnitude}*"));
        }
        out.push_str(&format!("{var}^{exponent}"));
    }
    let tail = lead - series.coeffs.len() as i64;
    if out.is_empty() {
        format!("O({var}^{tail})")
    } else {
        format!("{out} + O({var}^{tail})")
    }
}

fn cmd_asym(i: &str, j: &str, orders: usize, limits: &Limits) -> Result<CommandOutput> {
    if orders == 0 {
        return Err(Error::Domain("orders must be positive".into()));
    }
    let i = IndexSeq::parse(i)?;
    let j = IndexSeq::parse(j)?;
    let counts = asymptotic_counts(&i, &j, limits)?;
    let series = moment_expansion(&i, &j, orders, limits)?;
    let mut lines = vec![
        format!("i = {i}"),
        format!("j = {j}"),
        format!("n = {}", i.pair_count()),
    ];
    for (mu, count) in &counts.type_counts {
        lines.push(format!("type {mu}: {count}"));
    }
    lines.push(format!("s = {}", counts.s));
    lines.push(format!("s' = {}", counts.s_prime));
    lines.push(format!("series in N: {}", render_series(&series, "N")));
    let json = json!({
        "command": "asym",
        "i": index_json(&i),
        "j": index_json(&j),
        "n": i.pair_count(),
        "type_counts": type_counts_json(&counts.type_counts),
        "s": counts.s.to_string(),
        "s_prime": counts.s_prime.to_string(),
        "series": {
            "display": render_series(&series, "N"),
            "leading_exponent": series.leading_exponent,
            "coefficients": series.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        },
    });
    Ok(CommandOutput {
        lines,
        json,
        code: 0,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_mc_verify(
    i: &str,
    j: &str,
    size: usize,
    samples: u64,
    seed: u64,
    stream: u64,
    k: f64,
    limits: &Limits,
) -> Result<CommandOutput> {
    let i = IndexSeq::parse(i)?;
    let j = IndexSeq::parse(j)?;
    let spec = RngSpec::new(seed, stream);
    let verdict = verify_moment(&i, &j, size, samples, &spec, k, limits)?;
    let est = &verdict.estimate;
    let lines = vec![
        format!("i = {i}"),
        format!("j = {j}"),
        format!("N = {size}"),
        format!(
            "samples = {} (effective {}, {} batches)",
            est.requested_samples, est.effective_samples, est.batches
        ),
        format!("seed = {seed}, stream = {stream}"),
        format!("exact = {} ({:.8})", verdict.exact, verdict.exact_f64),
        format!("estimate re = {:.8} +- {:.8}", est.mean_re, est.stderr_re),
        format!("estimate im = {:.8} +- {:.8}", est.mean_im, est.stderr_im),
        format!(
            "z_re = {:+.3}, z_im = {:+.3}, threshold = {k}",
            verdict.z_re, verdict.z_im
        ),
        format!(
            "verdict: {}",
            if verdict.pass { "PASS" } else { "FAIL" }
        ),
    ];
    let json = json!({
        "command": "mc-verify",
        "i": index_json(&i),
        "j": index_json(&j),
        "N": size,
        "samples": {
            "requested": est.requested_samples,
            "effective": est.effective_samples,
            "batches": est.batches,
        },
        "rng": {"seed": seed, "stream": stream},
        "exact": {"display": verdict.exact.to_string(), "float": verdict.exact_f64},
        "estimate": {
            "mean_re": est.mean_re,
            "mean_im": est.mean_im,
            "stderr_re": est.stderr_re,
            "stderr_im": est.stderr_im,
        },
        "z": {"re": verdict.z_re, "im": verdict.z_im},
        "threshold": k,
        "pass": verdict.pass,
    });
    Ok(CommandOutput {
        lines,
        json,
        code: if verdict.pass { 0 } else { 3 },
    })
}

fn cmd_selftest(mc: bool, limits: &Limits) -> CommandOutput {
    let report = selftest::run(mc, limits);
    let mut lines = Vec::new();
    for check in &report.checks {
        let tag = if check.passed { "ok" } else { "FAIL" };
        lines.push(format!("{tag} {}: {}", check.name, check.detail));
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    lines.push(format!("selftest: {passed}/{} passed", report.checks.len()));
    let json = json!({
        "command": "selftest",
        "mc": mc,
        "checks": report
            .checks
            .iter()
            .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
            .collect::<Vec<_>>(),
        "passed": report.passed,
    });
    CommandOutput {
        lines,
        json,
        code: if report.passed { 0 } else { 1 },
    }
}
