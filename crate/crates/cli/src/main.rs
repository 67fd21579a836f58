use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nilgenus::genus::{canonicalize_with_window, enumerate_genus_with, z_equivalent_with_window, DEFAULT_WINDOW};
use nilgenus::local::{decide_at_primes, decide_same_finite_quotients};
use nilgenus::orbits::{build_orbit_space, global_orbit_partition, MAX_WINDOW};
use nilgenus::params::{T123, T134, T235};
use nilgenus::selfcheck::{self, local_partition, Scale};
use nilgenus::{genus_size_table, modulus_profile, validate_membership, Error, GroupType, ParamTuple};
use serde_json::{json, Map, Value};

/// Same-finite-quotient tests and genus enumeration for torsion-free
/// nilpotent groups of types (2,1,1), (3,1,1), (2,1,1,1) and (2,1,2).
///
/// Parameter tuples are JSON objects such as
/// `{"type": "2,1,1", "t": {"123": 5, "134": 5, "124": 1}}`, given inline,
/// as a file path, or as `-` for standard input.
#[derive(Parser)]
#[command(name = "nilgenus", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a tuple parameterizes a group of its type.
    Validate {
        input: String,
        /// Also require the tuple to be the canonical representative.
        #[arg(long)]
        canonical: bool,
    },
    /// Canonical representative of the isomorphism class.
    Canonicalize {
        input: String,
        #[command(flatten)]
        window: WindowArg,
    },
    /// Decide whether two groups have the same finite quotients.
    Equiv {
        s: String,
        t: String,
        #[command(flatten)]
        primes: PrimesArg,
        #[command(flatten)]
        window: WindowArg,
    },
    /// Enumerate the genus of a group.
    Genus {
        input: String,
        #[command(flatten)]
        primes: PrimesArg,
        #[command(flatten)]
        window: WindowArg,
    },
    /// Genus sizes of the family t123 = t134 = p, t124 = 1.
    Table {
        #[arg(long = "type", value_name = "TYPE")]
        group_type: String,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
    /// Orbit partition of the (t124, t125) rectangle of a (2,1,2) tuple.
    Orbits {
        input: String,
        /// Show the partition under the local group at this prime instead.
        #[arg(long)]
        prime: Option<u64>,
        #[command(flatten)]
        window: WindowArg,
    },
    /// Run the oracle cross-validation suites.
    Selfcheck {
        #[arg(long, default_value = "quick")]
        scale: Scale,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Args)]
struct PrimesArg {
    /// Decide at these primes instead of the relevant ones (flagged in the output).
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
}

#[derive(Args)]
struct WindowArg {
    /// Starting entry bound for integral matrix searches.
    #[arg(long, default_value_t = DEFAULT_WINDOW, value_parser = clap::value_parser!(u64).range(1..=MAX_WINDOW))]
    window: u64,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Limit(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// A result document plus whether it reports a valid input.
struct Output {
    doc: Value,
    ok: bool,
}

fn read_tuple(arg: &str) -> Result<ParamTuple, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else if arg == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(format!("cannot read stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::Input(format!("cannot read {arg}: {e}")))?
    };
    Ok(ParamTuple::from_json_str(&text)?)
}

fn require_valid(t: &ParamTuple) -> Result<(), Failure> {
    let report = validate_membership(t, false);
    if report.valid {
        Ok(())
    } else {
        Err(Error::InvalidTuple(report).into())
    }
}

fn document(command: &str, verdict: Value, witnesses: Vec<Value>, caveats: Vec<String>, parameters: Value) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("verdict".into(), verdict);
    m.insert("witnesses".into(), Value::Array(witnesses));
    m.insert("caveats".into(), json!(caveats));
    m.insert("parameters".into(), parameters);
    m
}

fn run(command: Command) -> Result<Output, Failure> {
    match command {
        Command::Validate { input, canonical } => {
            let t = read_tuple(&input)?;
            let report = validate_membership(&t, canonical);
            let mut m = document("validate", json!(report.valid), vec![], vec![], json!({ "input": t.to_json(), "canonical": canonical }));
            if let Value::Object(r) = report.to_json() {
                m.extend(r);
            }
            Ok(Output { doc: Value::Object(m), ok: report.valid })
        }
        Command::Canonicalize { input, window } => {
            let t = read_tuple(&input)?;
            require_valid(&t)?;
            let c = canonicalize_with_window(&t, window.window)?;
            let z = z_equivalent_with_window(&t, &c, window.window)?;
            let witnesses = z.witness.iter().map(|w| w.to_json()).collect();
            let params = json!({ "input": t.to_json(), "window": window.window });
            let mut m = document("canonicalize", c.to_json(), witnesses, z.caveats, params);
            m.insert("changed".into(), json!(c != t));
            Ok(Output { doc: Value::Object(m), ok: true })
        }
        Command::Equiv { s, t, primes, window } => {
            let (s, t) = (read_tuple(&s)?, read_tuple(&t)?);
            require_valid(&s)?;
            require_valid(&t)?;
            if s.group_type() != t.group_type() {
                return Err(Failure::Input(format!(
                    "both tuples must have the same type, got ({}) and ({})",
                    s.group_type(),
                    t.group_type()
                )));
            }
            let d = match &primes.primes {
                Some(ps) => decide_at_primes(&s, &t, ps)?,
                None => decide_same_finite_quotients(&s, &t)?,
            };
            let mut caveats = d.caveats.clone();
            let isomorphic = match z_equivalent_with_window(&s, &t, window.window) {
                Ok(z) => {
                    caveats.extend(z.caveats.iter().cloned());
                    json!({ "verdict": z.equivalent, "witness": z.witness.as_ref().map(|w| w.to_json()) })
                }
                Err(Error::Limit(msg)) => {
                    caveats.push(format!("isomorphism test skipped: {msg}"));
                    Value::Null
                }
                Err(e) => return Err(e.into()),
            };
            caveats.sort();
            caveats.dedup();
            let witnesses = d.witnesses().into_iter().map(|w| w.to_json()).collect();
            let params = json!({
                "s": s.to_json(),
                "t": t.to_json(),
                "primes": d.per_prime.iter().map(|c| c.p).collect::<Vec<_>>(),
                "window": window.window,
            });
            let mut m = document("equiv", json!(d.equal), witnesses, caveats, params);
            m.insert("failing_prime".into(), json!(d.failing_prime()));
            m.insert("per_prime".into(), d.to_json()["per_prime"].clone());
            m.insert("isomorphic".into(), isomorphic);
            Ok(Output { doc: Value::Object(m), ok: true })
        }
        Command::Genus { input, primes, window } => {
            let t = read_tuple(&input)?;
            require_valid(&t)?;
            let g = enumerate_genus_with(&t, window.window, primes.primes.as_deref())?;
            let witnesses = g.witnesses.iter().map(|d| d.to_json()).collect();
            let params = json!({ "input": t.to_json(), "primes": primes.primes, "window": window.window });
            let mut m = document("genus", json!(g.size()), witnesses, g.caveats.clone(), params);
            m.insert("canonical_input".into(), g.input.to_json());
            m.insert("members".into(), json!(g.members.iter().map(ParamTuple::to_json).collect::<Vec<_>>()));
            Ok(Output { doc: Value::Object(m), ok: true })
        }
        Command::Table { group_type, primes } => {
            let gt: GroupType = group_type.parse()?;
            let rows = genus_size_table(gt, &primes)?;
            let table: Vec<Value> = rows.iter().map(|r| json!({ "p": r.p, "size": r.size })).collect();
            let sizes: Vec<usize> = rows.iter().map(|r| r.size).collect();
            let params = json!({ "type": gt.label(), "primes": primes, "family": "t123 = t134 = p, t124 = 1" });
            let mut m = document("table", json!(sizes), vec![], vec![], params);
            m.insert("rows".into(), Value::Array(table));
            Ok(Output { doc: Value::Object(m), ok: true })
        }
        Command::Orbits { input, prime, window } => {
            let t = read_tuple(&input)?;
            require_valid(&t)?;
            if t.group_type() != GroupType::T212 {
                return Err(Failure::Input(format!("orbits needs a (2,1,2) tuple, got ({})", t.group_type())));
            }
            let space = build_orbit_space(&t.get(T134), &t.get(T235), &t.get(T123))?;
            let mut caveats = Vec::new();
            let (orbits, extra) = match prime {
                Some(p) => {
                    let profile = modulus_profile(&t)?;
                    if !profile.relevant_primes.contains(&p) {
                        caveats.push(format!("{p} is not a relevant prime; the local partition is trivial or coarse"));
                    }
                    nilgenus::arith::is_prime(p)
                        .then_some(())
                        .ok_or_else(|| Failure::Input(format!("{p} is not prime")))?;
                    (local_partition(&space, p), json!({ "prime": p }))
                }
                None => {
                    let partition = global_orbit_partition(&space, window.window)?;
                    if !partition.stable {
                        caveats.push(format!("partition not stable up to entry bound {}", partition.window));
                    }
                    let extra = json!({ "window": partition.window, "stable": partition.stable });
                    (partition.orbits, extra)
                }
            };
            let params = json!({ "input": t.to_json(), "space": space.to_json(), "prime": prime, "window": window.window });
            let mut m = document("orbits", json!(orbits.len()), vec![], caveats, params);
            m.insert("orbits".into(), json!(orbits));
            m.insert("search".into(), extra);
            Ok(Output { doc: Value::Object(m), ok: true })
        }
        Command::Selfcheck { scale, inject_fault } => {
            let report = selfcheck::run(scale, selfcheck::Options { inject_fault });
            let failed = report.failed_suites();
            let caveats = if inject_fault { vec!["fault injected into the (2,1,1) decider".to_string()] } else { vec![] };
            let params = json!({ "scale": format!("{scale:?}").to_lowercase() });
            let mut m = document("selfcheck", json!(report.passed()), vec![], caveats, params);
            m.insert("failed_suites".into(), json!(failed));
            if let Value::Object(r) = report.to_json() {
                m.extend(r);
            }
            Ok(Output { doc: Value::Object(m), ok: report.passed() })
        }
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                match v {
                    Value::Object(_) | Value::Array(_) if !is_flat(v) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(v, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", inline(v))),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if is_flat(item) {
                    out.push_str(&format!("{pad}- {}\n", inline(item)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render_text(item, indent + 1, out);
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", inline(v))),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array()) || a.is_empty(),
        Value::Object(m) => m.is_empty(),
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        _ => v.to_string(),
    }
}

fn emit(format: Format, doc: &Value) {
    let mut text = match format {
        Format::Json => serde_json::to_string_pretty(doc).expect("serializable"),
        Format::Text => {
            let mut s = String::new();
            render_text(doc, 0, &mut s);
            s
        }
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    let _ = io::stdout().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = std::panic::catch_unwind(|| run(cli.command));
    let (doc, code) = match result {
        Ok(Ok(out)) => {
            let code = if out.ok { 0 } else { 1 };
            (out.doc, code)
        }
        Ok(Err(Failure::Input(msg))) => (json!({ "error": msg, "kind": "invalid input" }), 1),
        Ok(Err(Failure::Internal(msg))) => (json!({ "error": msg, "kind": "internal" }), 2),
        Err(_) => (json!({ "error": "internal error", "kind": "internal" }), 2),
    };
    if doc.get("error").is_some() {
        eprintln!("nilgenus: {}", doc["error"].as_str().unwrap_or_default());
    }
    emit(cli.format, &doc);
    ExitCode::from(code)
}
