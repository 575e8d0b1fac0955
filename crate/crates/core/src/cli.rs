//! Command-line front end. [`run`] returns the process exit code:
//! 0 success, 1 usage, 2 parse, 3 validation or binding, 4 invariant breach.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::chain::{derive_ftf, enumerate_chains};
use crate::check::{find_suite, run_all, run_suite, SuiteReport};
use crate::closure::{resolve_matrix, warshall_closure, NumericMatrix};
use crate::error::Error;
use crate::expr::{multinomial_expand, parse_expr, FtfExpr, Notation, Term};
use crate::fixtures::{builtin_fixtures_with, FixtureCounts};
use crate::membership::{Assignment, Membership};
use crate::recursion::{eval_system, symbolic_expand};
use crate::system::{
    connection_matrix, format_registry, parse_registry, Cell, Severity, SystemRegistry,
};
use crate::trace::{trace_eval, TraceEvent};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_BREACH: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "fuzzchain",
    version,
    about = "Deep fuzzy systems: symbolic FTFs, budgeted calls, max-min closure"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Symbolic transmission function of a system
    Ftf {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        display: Display,
    },
    /// Connection matrix, symbolic or resolved to numbers
    Matrix {
        #[command(flatten)]
        source: Source,
        /// Substitute bindings and resolve calls
        #[arg(long)]
        resolve: bool,
        #[command(flatten)]
        bindings: Bindings,
        #[arg(long)]
        json: bool,
    },
    /// Numeric transmission value
    Eval {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        bindings: Bindings,
        #[arg(long)]
        json: bool,
    },
    /// Max-min closure of the resolved connection matrix
    Closure {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        bindings: Bindings,
        #[arg(long)]
        json: bool,
    },
    /// Stack trace of a budgeted evaluation
    Trace {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        bindings: Bindings,
        #[arg(long)]
        json: bool,
    },
    /// Call-free expansion of a deep system
    Expand {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        display: Display,
    },
    /// k-th power of an expression with its multinomial terms
    Power {
        /// Expression, e.g. "x1 + x2"
        #[arg(long)]
        expr: String,
        #[arg(long, short)]
        k: u32,
        /// raw, canonical or compact
        #[arg(long, default_value = "raw")]
        mode: Notation,
        #[command(flatten)]
        bindings: Bindings,
        #[arg(long)]
        json: bool,
    },
    /// Differential checks against brute-force oracles
    Check {
        #[arg(long, env = "FUZZCHAIN_SEED", default_value_t = 42)]
        seed: u64,
        /// Trials per randomised suite (suite defaults when omitted)
        #[arg(long)]
        trials: Option<u64>,
        /// Run a single suite
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Print the built-in systems as a definition file
    Fixtures {
        #[command(flatten)]
        counts: Counts,
    },
}

#[derive(Args, Debug)]
struct Counts {
    /// Declared count of psi1_rec's self-call
    #[arg(long, default_value_t = 2)]
    rec_count: u32,
    /// Counts of phi's calls to psi1..psi5, comma separated
    #[arg(long, value_name = "K1,..,K5", default_value = "1,1,1,1,1", value_parser = parse_phi_counts)]
    phi_counts: [u32; 5],
}

#[derive(Args, Debug)]
struct Source {
    /// Use the built-in systems (the default when no --file is given)
    #[arg(long)]
    fixtures: bool,
    /// Definition file; repeat to combine several
    #[arg(long = "file", value_name = "PATH")]
    files: Vec<PathBuf>,
    #[arg(long, short)]
    system: String,
    #[command(flatten)]
    counts: Counts,
}

#[derive(Args, Debug)]
struct Bindings {
    /// Variable binding `name=value`; repeatable
    #[arg(long = "set", value_name = "VAR=VALUE")]
    set: Vec<String>,
    /// Assignment file of `name = value` lines
    #[arg(long, value_name = "PATH")]
    assign: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Display {
    /// raw, canonical or compact
    #[arg(long, default_value = "raw")]
    mode: Notation,
    /// Apply absorption (implies canonical term order)
    #[arg(long)]
    simplify: bool,
    #[arg(long)]
    json: bool,
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Syntax { .. } => EXIT_PARSE,
            Error::InvalidMembership(_)
            | Error::MissingBinding(_)
            | Error::DuplicateSystem(_)
            | Error::DuplicateEdge { .. }
            | Error::SelfLoop { .. }
            | Error::InvalidTerminals { .. }
            | Error::UnknownSystem(_) => EXIT_INVALID,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<i32, Failure>;

fn io_failure(path: &std::path::Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_PARSE,
        message: format!("cannot read {}: {e}", path.display()),
    }
}

/// Parses `args` (program name first) and runs one subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let mut buf = String::new();
    let code = match dispatch(cli.command, &mut buf, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    };
    if out
        .write_all(buf.as_bytes())
        .and_then(|_| out.flush())
        .is_err()
    {
        return EXIT_USAGE;
    }
    code
}

fn parse_phi_counts(text: &str) -> Result<[u32; 5], String> {
    let parts: Vec<u32> = text
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<u32>| format!("expected 5 counts, got {}", v.len()))
}

fn counts(c: &Counts) -> FixtureCounts {
    FixtureCounts {
        phi: c.phi_counts,
        rec: c.rec_count,
    }
}

fn load(source: &Source, err: &mut dyn Write) -> Result<SystemRegistry, Failure> {
    let mut r = if source.fixtures || source.files.is_empty() {
        builtin_fixtures_with(counts(&source.counts))
    } else {
        SystemRegistry::new()
    };
    for path in &source.files {
        let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
        let parsed = parse_registry(&text).map_err(|e| {
            let f = Failure::from(e);
            Failure {
                message: format!("{}: {}", path.display(), f.message),
                ..f
            }
        })?;
        for s in parsed.iter() {
            r.insert(s.clone())?;
        }
    }
    let diagnostics = r.validate();
    for d in &diagnostics {
        let _ = writeln!(err, "{d}");
    }
    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        return Err(Failure {
            code: EXIT_INVALID,
            message: "registry does not validate".into(),
        });
    }
    r.get(&source.system)?;
    Ok(r)
}

fn assignment(b: &Bindings) -> Result<Assignment, Failure> {
    let mut sigma = match &b.assign {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
            Assignment::parse_file(&text)?
        }
        None => Assignment::new(),
    };
    for s in &b.set {
        let (name, v) = Assignment::parse_binding(s)?;
        sigma.set(name, v);
    }
    Ok(sigma)
}

fn num(v: Membership) -> Value {
    json!(v.value())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialise");
    s.push('\n');
    s
}

fn display_expr(e: &FtfExpr, d: &Display) -> FtfExpr {
    if d.simplify {
        e.simplified()
    } else if d.mode == Notation::Canonical {
        e.canonical()
    } else {
        e.clone()
    }
}

fn terms_json(e: &FtfExpr) -> Value {
    Value::Array(
        e.terms()
            .iter()
            .map(|t| Value::Array(t.atoms().iter().map(|a| json!(a.to_string())).collect()))
            .collect(),
    )
}

fn dispatch(command: Command, out: &mut String, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Ftf { source, display } => {
            let r = load(&source, err)?;
            let s = r.get(&source.system)?;
            let e = display_expr(&derive_ftf(s), &display);
            if display.json {
                let chains: Vec<Value> = enumerate_chains(s)
                    .iter()
                    .map(|c| json!(c.render(s)))
                    .collect();
                out.push_str(&pretty(&json!({
                    "system": s.name(),
                    "chains": chains,
                    "expr": e.render(display.mode),
                    "terms": terms_json(&e),
                })));
            } else {
                out.push_str(&e.render(display.mode));
                out.push('\n');
            }
        }
        Command::Matrix {
            source,
            resolve,
            bindings,
            json,
        } => {
            let r = load(&source, err)?;
            let s = r.get(&source.system)?;
            if resolve {
                let sigma = assignment(&bindings)?;
                let m = resolve_matrix(&r, s, &sigma)?;
                emit_numeric(out, s.name(), &m, json);
            } else {
                let m = connection_matrix(s);
                if json {
                    let rows: Vec<Value> = (0..m.size())
                        .map(|i| {
                            Value::Array(
                                m.row(i)
                                    .iter()
                                    .map(|c| match c {
                                        Cell::Label(a) => json!(a.to_string()),
                                        other => json!(other.to_string()),
                                    })
                                    .collect(),
                            )
                        })
                        .collect();
                    out.push_str(&pretty(&json!({
                        "system": s.name(),
                        "vertices": m.vertices(),
                        "rows": rows,
                    })));
                } else {
                    out.push_str(&m.render());
                }
            }
        }
        Command::Eval {
            source,
            bindings,
            json,
        } => {
            let r = load(&source, err)?;
            let sigma = assignment(&bindings)?;
            let v = eval_system(&r, &source.system, &sigma)?;
            if json {
                out.push_str(&pretty(
                    &json!({ "system": source.system, "value": num(v) }),
                ));
            } else {
                out.push_str(&format!("{v}\n"));
            }
        }
        Command::Closure {
            source,
            bindings,
            json,
        } => {
            let r = load(&source, err)?;
            let s = r.get(&source.system)?;
            let sigma = assignment(&bindings)?;
            let c = warshall_closure(&resolve_matrix(&r, s, &sigma)?);
            let (i, o) = (s.input(), s.output());
            if json {
                let mut v = numeric_json(s.name(), &c);
                v["transmission"] = num(c.get(i, o));
                out.push_str(&pretty(&v));
            } else {
                out.push_str(&c.render());
                let names = s.vertices();
                out.push_str(&format!("{} -> {}: {}\n", names[i], names[o], c.get(i, o)));
            }
        }
        Command::Trace {
            source,
            bindings,
            json,
        } => {
            let r = load(&source, err)?;
            let sigma = assignment(&bindings)?;
            let t = trace_eval(&r, &source.system, &sigma)?;
            if !t.is_balanced() {
                return Err(Failure {
                    code: EXIT_BREACH,
                    message: "trace push/pop events do not balance".into(),
                });
            }
            if json {
                let events: Vec<Value> = t.events.iter().map(event_json).collect();
                out.push_str(&pretty(&json!({
                    "system": source.system,
                    "events": events,
                    "value": num(t.value),
                })));
            } else {
                out.push_str(&t.render());
            }
        }
        Command::Expand { source, display } => {
            let r = load(&source, err)?;
            let e = display_expr(&symbolic_expand(&r, &source.system)?, &display);
            if display.json {
                out.push_str(&pretty(&json!({
                    "system": source.system,
                    "expr": e.render(display.mode),
                    "terms": terms_json(&e),
                })));
            } else {
                out.push_str(&e.render(display.mode));
                out.push('\n');
            }
        }
        Command::Power {
            expr,
            k,
            mode,
            bindings,
            json,
        } => power(out, &expr, k, mode, &bindings, json)?,
        Command::Check {
            seed,
            trials,
            suite,
            json,
        } => {
            let reports: Vec<SuiteReport> = match suite {
                Some(name) => {
                    let s = find_suite(&name).ok_or_else(|| Failure {
                        code: EXIT_USAGE,
                        message: format!("unknown suite `{name}`"),
                    })?;
                    vec![run_suite(s, seed, trials)]
                }
                None => run_all(seed, trials),
            };
            if json {
                let suites: Vec<Value> = reports
                    .iter()
                    .map(|r| {
                        json!({
                            "name": r.name,
                            "trials": r.trials,
                            "passed": r.passed,
                            "failures": r.failures,
                        })
                    })
                    .collect();
                out.push_str(&pretty(&json!({ "seed": seed, "suites": suites })));
            } else {
                out.push_str(&format!("seed {seed}\n"));
                for r in &reports {
                    out.push_str(&format!("{r}\n"));
                    for f in &r.failures {
                        out.push_str(&format!("  {f}\n"));
                    }
                }
            }
            if reports.iter().any(|r| !r.ok()) {
                return Ok(EXIT_BREACH);
            }
        }
        Command::Fixtures { counts: c } => {
            out.push_str(&format_registry(&builtin_fixtures_with(counts(&c))));
        }
    }
    Ok(EXIT_OK)
}

fn numeric_json(system: &str, m: &NumericMatrix) -> Value {
    let rows: Vec<Value> = m
        .rows()
        .iter()
        .map(|r| Value::Array(r.iter().map(|&v| num(v)).collect()))
        .collect();
    json!({ "system": system, "vertices": m.labels(), "rows": rows })
}

fn emit_numeric(out: &mut String, system: &str, m: &NumericMatrix, json: bool) {
    if json {
        out.push_str(&pretty(&numeric_json(system, m)));
    } else {
        out.push_str(&m.render());
    }
}

fn event_json(e: &TraceEvent) -> Value {
    match e {
        TraceEvent::Enter { system, budget } => {
            json!({ "event": "enter", "system": system, "budget": budget })
        }
        TraceEvent::PushReturn { label } => json!({ "event": "push", "return": label }),
        TraceEvent::PopReturn { label } => json!({ "event": "pop", "return": label }),
        TraceEvent::Return { via, expr } => json!({ "event": "return", "via": via, "expr": expr }),
        TraceEvent::BranchResult { chain, expr, value } => {
            json!({ "event": "branch", "chain": chain, "expr": expr, "value": num(*value) })
        }
        TraceEvent::Exit { system, value } => {
            json!({ "event": "exit", "system": system, "value": num(*value) })
        }
    }
}

fn power(
    out: &mut String,
    text: &str,
    k: u32,
    mode: Notation,
    bindings: &Bindings,
    json: bool,
) -> Result<(), Failure> {
    let e = parse_expr(text)?;
    if !e.is_call_free() {
        return Err(Failure {
            code: EXIT_USAGE,
            message: "power needs a call-free expression".into(),
        });
    }
    let p = e.power(k)?;
    let entries = multinomial_expand(&e, k)?;
    let sigma = assignment(bindings)?;
    let values = if sigma.is_empty() {
        None
    } else {
        Some((e.eval_with(&sigma)?, p.eval_with(&sigma)?))
    };
    if let Some((a, b)) = values {
        if a != b {
            return Err(Failure {
                code: EXIT_BREACH,
                message: format!("power changed the value: {a} vs {b}"),
            });
        }
    }
    let term_text = |t: &Term| FtfExpr::new(vec![t.clone()]).render(mode);
    if json {
        let list: Vec<Value> = entries
            .iter()
            .map(|en| {
                json!({
                    "composition": en.composition,
                    "coefficient": en.coefficient.to_string(),
                    "term": term_text(&en.term),
                })
            })
            .collect();
        let mut v = json!({
            "expr": e.render(mode),
            "k": k,
            "power": p.render(mode),
            "entries": list,
        });
        if let Some((a, b)) = values {
            v["value"] = num(a);
            v["power_value"] = num(b);
        }
        out.push_str(&pretty(&v));
        return Ok(());
    }
    out.push_str(&format!("expr: {}\n", e.render(mode)));
    out.push_str(&format!("k: {k}\n"));
    out.push_str(&format!("power: {}\n", p.render(mode)));
    out.push_str("entries:\n");
    let rows: Vec<[String; 3]> = entries
        .iter()
        .map(|en| {
            let comp: Vec<String> = en.composition.iter().map(u32::to_string).collect();
            [
                format!("({})", comp.join(", ")),
                en.coefficient.to_string(),
                term_text(&en.term),
            ]
        })
        .collect();
    let w0 = rows.iter().map(|r| r[0].len()).max().unwrap_or(0);
    let w1 = rows.iter().map(|r| r[1].len()).max().unwrap_or(0);
    for [c, n, t] in &rows {
        out.push_str(&format!("  {c:<w0$}  {n:>w1$}  {t}\n"));
    }
    if let Some((a, b)) = values {
        out.push_str(&format!("value: {a}\npower value: {b}\n"));
    }
    Ok(())
}
