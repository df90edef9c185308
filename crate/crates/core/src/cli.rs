//! Command-line front end.
//!
//! Exit codes: 0 on success or a verified relation, 1 when a verification
//! fails, 2 on usage or syntax errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bell::{bell_complete, bell_partial};
use crate::darboux::DarbouxQuadruple;
use crate::invariants::{invariants_bell, invariants_omega, InvariantSet};
use crate::operators::{GaugeParameter, LaplaceOperator, NormalizedM};
use crate::selftest::{run_selftest, SelftestConfig};
use crate::textio::{expression_lines, format_operator, parse_operator, parse_polynomial};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Bell,
    Omega,
    Both,
}

#[derive(Debug, Parser)]
#[command(
    name = "darboux",
    about = "Gauge invariants and Darboux transformations for DxDy + aDx + bDy + c"
)]
pub struct CliConfig {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the 2d+3 basis invariants of the pair (L, M).
    Invariants {
        #[arg(long = "L")]
        l: Option<String>,
        #[arg(long = "M")]
        m: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Bell)]
        method: Method,
        /// Order of M; missing coefficients are zero.
        #[arg(long)]
        order: Option<u32>,
        /// File with L and M, one expression per line.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Conjugate an operator by exp(alpha).
    Gauge {
        #[arg(long)]
        op: Option<String>,
        #[arg(long, default_value = "alpha")]
        alpha: String,
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Compose two operators.
    Compose {
        #[arg(long)]
        left: Option<String>,
        #[arg(long)]
        right: Option<String>,
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Check N*L = L1*M; exits 0 iff the residual vanishes.
    VerifyDarboux {
        #[arg(long = "N")]
        n: Option<String>,
        #[arg(long = "L")]
        l: Option<String>,
        #[arg(long = "L1")]
        l1: Option<String>,
        #[arg(long = "M")]
        m: Option<String>,
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Print a partial or complete Bell polynomial.
    Bell {
        #[arg(long, num_args = 2, value_names = ["N", "K"], conflicts_with = "complete")]
        partial: Option<Vec<usize>>,
        #[arg(long, value_name = "N")]
        complete: Option<usize>,
        /// Comma-separated arguments; defaults to x1, x2, ...
        #[arg(long)]
        args: Option<String>,
    },
    /// Run the symbolic and randomized property suites.
    Selftest {
        #[arg(long = "max-order", default_value_t = 6)]
        max_order: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Failure that ends a command with a given exit code.
struct Abort {
    code: i32,
    message: String,
}

impl From<Error> for Abort {
    fn from(e: Error) -> Self {
        Abort {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Abort {
    Abort {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Fills the operator slots from flags, then from the `--in` file in order.
fn resolve_slots(
    names: &[&str],
    flags: Vec<Option<String>>,
    input: Option<&PathBuf>,
) -> Result<Vec<String>, Abort> {
    let from_file: Vec<String> = match input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            expression_lines(&text).map(str::to_string).collect()
        }
        None => Vec::new(),
    };
    let mut file_lines = from_file.into_iter();
    names
        .iter()
        .zip(flags)
        .map(|(name, flag)| match flag {
            Some(v) => Ok(v),
            None => file_lines
                .next()
                .ok_or_else(|| usage(format!("missing --{name} (or a line in --in)"))),
        })
        .collect()
}

#[derive(Serialize)]
struct InvariantsJson {
    d: u32,
    m: String,
    h: String,
    #[serde(rename = "R")]
    r: BTreeMap<i64, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agree: Option<bool>,
}

fn invariants_json(set: &InvariantSet, agree: Option<bool>) -> InvariantsJson {
    InvariantsJson {
        d: set.d,
        m: set.m.to_string(),
        h: set.h.to_string(),
        r: set.r.iter().map(|(&j, p)| (j, p.to_string())).collect(),
        agree,
    }
}

struct Output<'a> {
    format: OutputFormat,
    out: &'a mut dyn Write,
}

impl Output<'_> {
    fn json<T: Serialize>(&mut self, value: &T) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(value).expect("serializable");
        writeln!(self.out, "{text}")
    }
}

fn run_command(cmd: Command, o: &mut Output<'_>) -> Result<i32, Abort> {
    let io = |e: std::io::Error| usage(format!("write failed: {e}"));
    match cmd {
        Command::Invariants {
            l,
            m,
            method,
            order,
            input,
        } => {
            let slots = resolve_slots(&["L", "M"], vec![l, m], input.as_ref())?;
            let lap = LaplaceOperator::from_operator(&parse_operator(&slots[0])?)?;
            let mop = NormalizedM::from_operator(&parse_operator(&slots[1])?, order)?;
            let (set, agree) = match method {
                Method::Bell => (invariants_bell(&lap, &mop), None),
                Method::Omega => (invariants_omega(&lap, &mop), None),
                Method::Both => {
                    let bell = invariants_bell(&lap, &mop);
                    let agree = bell == invariants_omega(&lap, &mop);
                    (bell, Some(agree))
                }
            };
            match o.format {
                OutputFormat::Json => o.json(&invariants_json(&set, agree)).map_err(io)?,
                OutputFormat::Text => {
                    writeln!(o.out, "d = {}", set.d).map_err(io)?;
                    for (label, p) in set.entries() {
                        writeln!(o.out, "{label} = {p}").map_err(io)?;
                    }
                    match agree {
                        Some(true) => writeln!(o.out, "methods agree").map_err(io)?,
                        Some(false) => writeln!(o.out, "methods disagree").map_err(io)?,
                        None => {}
                    }
                }
            }
            Ok(if agree == Some(false) {
                EXIT_FAILED
            } else {
                EXIT_OK
            })
        }
        Command::Gauge { op, alpha, input } => {
            let slots = resolve_slots(&["op"], vec![op], input.as_ref())?;
            let op = parse_operator(&slots[0])?;
            let alpha = GaugeParameter::new(&alpha);
            if !alpha.is_fresh_for(&op) {
                return Err(usage(format!(
                    "gauge symbol {} occurs in the operator",
                    alpha.symbol()
                )));
            }
            let text = format_operator(&op.gauge_conjugate(&alpha));
            match o.format {
                OutputFormat::Json => o
                    .json(&serde_json::json!({ "operator": text }))
                    .map_err(io)?,
                OutputFormat::Text => writeln!(o.out, "{text}").map_err(io)?,
            }
            Ok(EXIT_OK)
        }
        Command::Compose { left, right, input } => {
            let slots = resolve_slots(&["left", "right"], vec![left, right], input.as_ref())?;
            let composed = parse_operator(&slots[0])?.compose(&parse_operator(&slots[1])?);
            let text = format_operator(&composed);
            match o.format {
                OutputFormat::Json => o
                    .json(&serde_json::json!({ "operator": text }))
                    .map_err(io)?,
                OutputFormat::Text => writeln!(o.out, "{text}").map_err(io)?,
            }
            Ok(EXIT_OK)
        }
        Command::VerifyDarboux { n, l, l1, m, input } => {
            let slots = resolve_slots(&["N", "L", "L1", "M"], vec![n, l, l1, m], input.as_ref())?;
            let ops = slots
                .iter()
                .map(|s| parse_operator(s))
                .collect::<Result<Vec<_>, _>>()?;
            let [n, l, l1, m]: [_; 4] = ops.try_into().expect("four slots");
            let q = DarbouxQuadruple::new(n, l, l1, m)?;
            let residual = q.residual();
            let zero = residual.is_zero();
            match o.format {
                OutputFormat::Json => o
                    .json(&serde_json::json!({
                        "residual": format_operator(&residual),
                        "zero": zero,
                        "order": q.order(),
                    }))
                    .map_err(io)?,
                OutputFormat::Text => {
                    writeln!(o.out, "residual = {}", format_operator(&residual)).map_err(io)?;
                    if zero {
                        let order = q.order().map_or("-inf".to_string(), |d| d.to_string());
                        writeln!(o.out, "Darboux transformation of order {order}").map_err(io)?;
                    } else {
                        writeln!(o.out, "not a Darboux transformation").map_err(io)?;
                    }
                }
            }
            Ok(if zero { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Bell {
            partial,
            complete,
            args,
        } => {
            let (n, k) = match (partial, complete) {
                (Some(nk), None) => (nk[0], Some(nk[1])),
                (None, Some(n)) => (n, None),
                _ => return Err(usage("give exactly one of --partial N K or --complete N")),
            };
            let xs = match args {
                Some(list) => list
                    .split(',')
                    .map(|s| parse_polynomial(s.trim()))
                    .collect::<Result<Vec<_>, _>>()?,
                None => (1..=n.max(1))
                    .map(|i| crate::ring::DiffPolynomial::symbol(&format!("x{i}")))
                    .collect(),
            };
            let value = match k {
                Some(k) => bell_partial(n, k, &xs)?,
                None => bell_complete(n, &xs)?,
            };
            match o.format {
                OutputFormat::Json => o
                    .json(&serde_json::json!({ "polynomial": value.to_string() }))
                    .map_err(io)?,
                OutputFormat::Text => writeln!(o.out, "{value}").map_err(io)?,
            }
            Ok(EXIT_OK)
        }
        Command::Selftest { max_order, seed } => {
            if max_order < 1 {
                return Err(usage("--max-order must be at least 1"));
            }
            let reports = run_selftest(&SelftestConfig::new(max_order, seed));
            let all_ok = reports.iter().all(|r| r.ok());
            match o.format {
                OutputFormat::Json => {
                    let checks: Vec<_> = reports
                        .iter()
                        .map(|r| serde_json::json!({ "name": r.name, "passed": r.passed, "failed": r.failed }))
                        .collect();
                    o.json(&serde_json::json!({ "checks": checks, "ok": all_ok }))
                        .map_err(io)?
                }
                OutputFormat::Text => {
                    for r in &reports {
                        let status = if r.ok() { "PASS" } else { "FAIL" };
                        writeln!(
                            o.out,
                            "{status} {} ({} passed, {} failed)",
                            r.name, r.passed, r.failed
                        )
                        .map_err(io)?;
                        for f in r.failures.iter().take(5) {
                            writeln!(o.out, "     {f}").map_err(io)?;
                        }
                    }
                    let passed = reports.iter().filter(|r| r.ok()).count();
                    writeln!(o.out, "{passed}/{} suites passed", reports.len()).map_err(io)?;
                }
            }
            Ok(if all_ok { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let mut output = Output {
        format: config.format,
        out,
    };
    match run_command(config.command, &mut output) {
        Ok(code) => code,
        Err(Abort { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}
