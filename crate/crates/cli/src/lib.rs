//! Command-line front end for `mwk-core`.
//!
//! [`parse_command`] turns an argument vector into a validated [`Command`]; [`run`] executes
//! it and returns the exit code together with the text to print. [`execute`] chains both.

use clap::{Parser, Subcommand, ValueEnum};
use mwk_core::kmw::{check_defining_relations, Compatibility};
use mwk_core::prelude::*;
use mwk_core::sampling::Sampler;
use mwk_core::spectrum::{check_dual_route, check_primality, enumerate, harrison_checks, member};
use mwk_core::witt::witt_equivalent;
use serde_json::{json, Value};
use std::fmt::Write as _;

/// Exit code for a malformed command line.
pub const EXIT_USAGE: u8 = 1;
/// Exit code for an unparsable field, prime, element or form.
pub const EXIT_PARSE: u8 = 2;
/// Exit code for an operation the chosen field backend cannot decide.
pub const EXIT_CAPABILITY: u8 = 3;
/// Exit code for a verification suite that found counterexamples.
pub const EXIT_VERIFY_FAILED: u8 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    /// The four defining relations.
    Relations,
    /// Prime and ideal properties of every enumerated prime.
    Primality,
    /// Residue rule against signature rule for the `([P], 2, η)` family.
    Dual,
    /// Harrison subbasis against basic opens.
    Harrison,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Relations => "relations",
            Suite::Primality => "primality",
            Suite::Dual => "dual",
            Suite::Harrison => "harrison",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mwk", version, about = "Milnor-Witt K-theory of fields and its homogeneous spectrum")]
struct Args {
    #[command(subcommand)]
    command: RawCommand,
}

#[derive(Debug, Subcommand)]
enum RawCommand {
    /// List the homogeneous primes up to an odd-prime bound.
    Spectrum {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 13)]
        bound: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide whether an element lies in a prime.
    Member {
        #[arg(long)]
        field: String,
        #[arg(long)]
        prime: String,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    /// Evaluate an element and print its graded components.
    Eval {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run sampled verification suites.
    Verify {
        #[arg(long)]
        field: String,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "relations")]
        suites: Vec<Suite>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, env = "MWK_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 13)]
        bound: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the inclusion poset as a DOT digraph of covering pairs.
    Hasse {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 13)]
        bound: u64,
    },
    /// Decide whether two diagonal forms are Witt equivalent.
    Equiv {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        form1: String,
        #[arg(long, allow_hyphen_values = true)]
        form2: String,
    },
    /// Signature of a diagonal form at one or all orderings.
    Signature {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long)]
        ordering: Option<String>,
    },
}

/// A validated command.
#[derive(Clone, Debug)]
pub enum Command {
    Spectrum { field: FieldDescriptor, bound: u64, format: Format },
    Member { field: FieldDescriptor, prime: PrimeDescriptor, element: KmwExpr },
    Eval { field: FieldDescriptor, element: KmwExpr, format: Format },
    Verify { field: FieldDescriptor, suites: Vec<Suite>, samples: usize, seed: u64, bound: u64, format: Format },
    Hasse { field: FieldDescriptor, bound: u64 },
    Equiv { field: FieldDescriptor, form1: DiagonalForm, form2: DiagonalForm },
    Signature { field: FieldDescriptor, form: DiagonalForm, ordering: Option<Ordering> },
}

/// Exit code plus the text destined for stdout and stderr.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { code: 0, stdout, stderr: String::new() }
    }

    fn fail(code: u8, stderr: String) -> Self {
        Output { code, stdout: String::new(), stderr }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::CapabilityUnsupported { .. } => EXIT_CAPABILITY,
        _ => EXIT_PARSE,
    }
}

fn from_error(e: Error) -> Output {
    Output::fail(error_code(&e), format!("error: {e}\n"))
}

/// Parses `<a,b,c>` or `a,b,c`; `<>` is the zero form.
pub fn parse_form(field: FieldDescriptor, text: &str) -> Result<DiagonalForm> {
    let t = text.trim();
    let inner = t.strip_prefix('<').and_then(|s| s.strip_suffix('>')).unwrap_or(t);
    if inner.trim().is_empty() {
        return Ok(DiagonalForm::empty(field));
    }
    let entries = inner.split(',').map(|e| field.parse_element(e.trim())).collect::<Result<Vec<_>>>()?;
    DiagonalForm::new(field, entries)
}

/// Parses and validates an argument vector (including the program name).
pub fn parse_command<I, T>(argv: I) -> std::result::Result<Command, Output>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(|e| {
        let text = e.render().to_string();
        if e.use_stderr() {
            Output::fail(EXIT_USAGE, text)
        } else {
            Output::ok(text)
        }
    })?;
    validate(args.command).map_err(from_error)
}

fn validate(raw: RawCommand) -> Result<Command> {
    let field = |s: &str| s.parse::<FieldDescriptor>();
    Ok(match raw {
        RawCommand::Spectrum { field: f, bound, format } => Command::Spectrum { field: field(&f)?, bound, format },
        RawCommand::Member { field: f, prime, element } => {
            let field = field(&f)?;
            Command::Member {
                field,
                prime: PrimeDescriptor::parse(field, &prime)?,
                element: KmwExpr::parse(field, &element)?,
            }
        }
        RawCommand::Eval { field: f, element, format } => {
            let field = field(&f)?;
            Command::Eval { field, element: KmwExpr::parse(field, &element)?, format }
        }
        RawCommand::Verify { field: f, mut suites, samples, seed, bound, format } => {
            suites.sort();
            suites.dedup();
            Command::Verify { field: field(&f)?, suites, samples, seed, bound, format }
        }
        RawCommand::Hasse { field: f, bound } => Command::Hasse { field: field(&f)?, bound },
        RawCommand::Equiv { field: f, form1, form2 } => {
            let field = field(&f)?;
            Command::Equiv { field, form1: parse_form(field, &form1)?, form2: parse_form(field, &form2)? }
        }
        RawCommand::Signature { field: f, form, ordering } => {
            let field = field(&f)?;
            let ordering = ordering.map(|o| field.ordering(&o)).transpose()?;
            Command::Signature { field, form: parse_form(field, &form)?, ordering }
        }
    })
}

/// Executes a validated command.
pub fn run(command: &Command) -> Output {
    match dispatch(command) {
        Ok(out) => out,
        Err(e) => from_error(e),
    }
}

/// Parses and runs; the entry point of the binary.
pub fn execute<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_command(argv) {
        Ok(c) => run(&c),
        Err(out) => out,
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn dispatch(command: &Command) -> Result<Output> {
    match command {
        Command::Spectrum { field, bound, format } => {
            let view = enumerate(*field, *bound)?;
            Ok(Output::ok(match format {
                Format::Json => pretty(&serde_json::to_value(view.to_record()).expect("records serialize")),
                Format::Dot => view.hasse_dot(),
                Format::Text => {
                    let mut s = format!("{} primes over {field} with odd primes up to {bound}\n", view.len());
                    for p in view.primes() {
                        let _ = writeln!(s, "{p}  (char {})", p.char());
                    }
                    s
                }
            }))
        }
        Command::Member { field, prime, element } => {
            let x = evaluate(*field, element)?;
            Ok(Output::ok(format!("{}\n", member(&x, prime)?)))
        }
        Command::Eval { field, element, format } => eval_report(*field, element, *format),
        Command::Verify { field, suites, samples, seed, bound, format } => {
            verify(*field, suites, *samples, *seed, *bound, *format)
        }
        Command::Hasse { field, bound } => Ok(Output::ok(enumerate(*field, *bound)?.hasse_dot())),
        Command::Equiv { form1, form2, .. } => {
            let same = witt_equivalent(&GwClass::from_form(form1.clone()), &GwClass::from_form(form2.clone()))?;
            Ok(Output::ok(format!("{same}\n")))
        }
        Command::Signature { field, form, ordering } => {
            if !field.is_real() {
                return Err(Error::CapabilityUnsupported {
                    backend: field.to_string(),
                    operation: "signatures (the field has no orderings)".into(),
                });
            }
            Ok(Output::ok(match ordering {
                Some(o) => format!("{}\n", form.signature(o)?),
                None => {
                    let mut s = String::new();
                    for (o, v) in form.total_signature()? {
                        let _ = writeln!(s, "{o}: {v}");
                    }
                    s
                }
            }))
        }
    }
}

fn eval_report(field: FieldDescriptor, element: &KmwExpr, format: Format) -> Result<Output> {
    let x = evaluate(field, element)?;
    let normal = match x.to_expression() {
        Ok(e) => Some(e.to_string()),
        Err(Error::CapabilityUnsupported { .. }) => None,
        Err(e) => return Err(e),
    };
    let compat = match x.compatibility() {
        Compatibility::Verified => "verified",
        Compatibility::NecessaryOnly => "necessary conditions only",
    };
    let zero = x.is_zero();
    if format == Format::Json {
        let components: Vec<Value> = x
            .components()
            .iter()
            .map(|(n, c)| {
                json!({
                    "degree": n,
                    "lstar": c.lstar.class().to_string(),
                    "milnor": c.milnor.as_ref().map(|m| m.to_string()),
                })
            })
            .collect();
        let v = json!({
            "field": field,
            "expression": element.to_string(),
            "zero": zero.as_ref().ok(),
            "compatibility": compat,
            "components": components,
            "normal_form": normal,
        });
        return Ok(Output::ok(pretty(&v)));
    }
    let mut s = String::new();
    let _ = writeln!(s, "field: {field}");
    let _ = writeln!(s, "expression: {element}");
    match zero {
        Ok(true) => s.push_str("element: zero\n"),
        Ok(false) => s.push_str("element: nonzero\n"),
        Err(_) => s.push_str("element: zero test unavailable\n"),
    }
    if x.components().is_empty() {
        s.push_str("components: none\n");
    }
    for (n, c) in x.components() {
        let _ = write!(s, "degree {n}: L = {}", c.lstar.class());
        if let Some(m) = &c.milnor {
            let _ = write!(s, ", M = {m}");
        }
        s.push('\n');
    }
    let _ = writeln!(s, "compatibility: {compat}");
    match normal {
        Some(e) => {
            let _ = writeln!(s, "normal form: {e}");
        }
        None => s.push_str("normal form: unavailable over this field\n"),
    }
    Ok(Output::ok(s))
}

fn verify(
    field: FieldDescriptor,
    suites: &[Suite],
    samples: usize,
    seed: u64,
    bound: u64,
    format: Format,
) -> Result<Output> {
    let mut passed_all = true;
    let mut lines = String::new();
    let mut results = serde_json::Map::new();
    for &suite in suites {
        let (passed, summary, value) = match suite {
            Suite::Relations => {
                let r = check_defining_relations(field, samples, seed)?;
                let checks: usize = r.checked.values().sum();
                (r.passed(), format!("{checks} instances, {} failures", r.failures.len()), serde_json::to_value(&r))
            }
            Suite::Primality => {
                let r = check_primality(field, bound, samples, seed)?;
                let summary = format!("{} primes x {} pairs, {} violations", r.primes, r.pairs, r.violations.len());
                (r.passed(), summary, serde_json::to_value(&r))
            }
            Suite::Dual => {
                if !field.is_real() {
                    return Err(Error::CapabilityUnsupported {
                        backend: field.to_string(),
                        operation: "dual-route check (the field has no orderings)".into(),
                    });
                }
                let r = check_dual_route(field, samples, seed)?;
                (
                    r.passed(),
                    format!("{} samples, {} disagreements", r.samples, r.disagreements.len()),
                    serde_json::to_value(&r),
                )
            }
            Suite::Harrison => {
                let mut sampler = Sampler::new(field, seed);
                let units: Vec<_> = (0..samples).map(|_| sampler.unit()).collect();
                let r = harrison_checks(field, &units)?;
                (r.passed(), format!("{} units, {} failures", r.units, r.failures.len()), serde_json::to_value(&r))
            }
        };
        passed_all &= passed;
        let _ = writeln!(lines, "{}: {} ({summary})", suite.name(), if passed { "PASS" } else { "FAIL" });
        results.insert(suite.name().into(), value.expect("reports serialize"));
    }
    let stdout = if format == Format::Json {
        pretty(&json!({ "field": field, "seed": seed, "samples": samples, "passed": passed_all, "suites": results }))
    } else {
        format!("verify {field} seed {seed} samples {samples}\n{lines}")
    };
    Ok(Output { code: if passed_all { 0 } else { EXIT_VERIFY_FAILED }, stdout, stderr: String::new() })
}
