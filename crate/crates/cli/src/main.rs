//! `vinberg`: runs the verification suites and prints human-readable
//! summaries, optionally writing a JSON run report.
//!
//! Exit codes: 0 when every check passes, 1 when any check fails, 2 on
//! usage errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use vinberg_core::action::RationalPoint;
use vinberg_core::asymptotics::{exponent_report, leading_exponent_check};
use vinberg_core::report::Report;
use vinberg_core::vinberg::{default_bound, localize, run_suite, SUITES};

#[derive(Parser)]
#[command(name = "vinberg", version, about = "Exact verification suites for the SL2 Vinberg semigroup")]
struct Cli {
    /// Print only one line per check.
    #[arg(long, global = true)]
    quiet: bool,
    /// Record wall-clock duration in the JSON report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite, or `all` of them.
    Verify {
        suite: String,
        /// Degree, level or weight bound; defaults per suite.
        #[arg(long, env = "VINBERG_BOUND")]
        bound: Option<u32>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Asymptotic exponents of Sym^m from n-coinvariants and the oracle.
    Exponents {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Fiber of the localization of V_m ⊠ V_k^* at a point.
    Localize {
        /// `m,k`
        #[arg(long)]
        rep: String,
        /// `a,b,c,d` with `p/q` entries.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct RunReport {
    version: &'static str,
    command: String,
    parameters: Value,
    checks: Vec<Value>,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    duration_ms: Option<u64>,
}

/// A usage error; reported on stderr with exit code 2.
struct Usage(String);

fn usage(msg: impl ToString) -> Usage {
    Usage(msg.to_string())
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn print_report(r: &Report, quiet: bool) {
    if quiet {
        let ok = r.items.iter().filter(|i| i.pass).count();
        println!("{} [{}] {}/{} items", r.check, if r.pass { "PASS" } else { "FAIL" }, ok, r.items.len());
    } else {
        print!("{}", r.summary());
    }
}

fn verify(suite: &str, bound: Option<u32>, quiet: bool) -> Result<(Value, Vec<Value>), Usage> {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(usage(format!("unknown suite `{suite}`; expected one of {}, all", SUITES.join(", "))));
    };
    let bounds: Vec<u32> =
        names.iter().map(|s| bound.unwrap_or_else(|| default_bound(s).expect("known suite"))).collect();
    // suites are independent; results are collected in the fixed suite order
    let results: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = names.iter().zip(&bounds).map(|(s, b)| scope.spawn(move || run_suite(s, *b))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread")).collect()
    });
    let mut checks = Vec::new();
    for (name, res) in names.iter().zip(results) {
        let report = res.map_err(|e| usage(format!("{name}: {e}")))?;
        print_report(&report, quiet);
        checks.push(to_value(&report));
    }
    let params: Value =
        names.iter().zip(&bounds).map(|(s, b)| (s.to_string(), json!(b))).collect::<serde_json::Map<_, _>>().into();
    Ok((json!({ "suite": suite, "bounds": params }), checks))
}

fn exponents(m: i64, quiet: bool) -> Result<(Value, Vec<Value>), Usage> {
    let m = u32::try_from(m).map_err(|_| usage(format!("--m must be a non-negative integer, got {m}")))?;
    let rep = exponent_report(m).map_err(usage)?;
    let check = leading_exponent_check(m).map_err(usage)?;
    let pairs: Vec<String> = rep.coinvariant_exponents.iter().map(|(l, k)| format!("({l},{k})")).collect();
    let oracle: Vec<String> = rep.oracle_exponents.iter().map(i64::to_string).collect();
    println!("coinvariant exponents: {{{}}}", pairs.join(", "));
    println!("oracle exponents: {{{}}}", oracle.join(", "));
    println!("leading exponent: {} [{}]", rep.leading, if rep.pass { "PASS" } else { "FAIL" });
    if !quiet {
        print!("{}", check.summary());
    }
    let mut exp = to_value(&rep);
    exp["pass"] = json!(rep.pass && check.pass);
    Ok((json!({ "m": m }), vec![exp, to_value(&check)]))
}

fn parse_rep(s: &str) -> Result<(usize, usize), Usage> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [m, k] => match (m.parse(), k.parse()) {
            (Ok(m), Ok(k)) => Ok((m, k)),
            _ => Err(usage(format!("--rep expects two non-negative integers `m,k`, got `{s}`"))),
        },
        _ => Err(usage(format!("--rep expects `m,k`, got `{s}`"))),
    }
}

fn localize_cmd(rep: &str, point: &str) -> Result<(Value, Vec<Value>), Usage> {
    let (m, k) = parse_rep(rep)?;
    let p = RationalPoint::parse(point).map_err(usage)?;
    let res = localize(m, k, &p).map_err(usage)?;
    println!("module: V{m} ⊠ V{k}*");
    println!("point: {} on {}", res.point, res.fiber);
    println!("stabilizer basis (F1, H1, E1, F2, H2, E2):");
    for v in &res.stabilizer {
        println!("  [{}]", v.join(", "));
    }
    println!("coinvariant dimension: {}", res.dim);
    if let Some(cartan) = &res.cartan {
        for (name, mat) in ["H1", "H2"].iter().zip(cartan) {
            let rows: Vec<String> = mat.iter().map(|r| format!("[{}]", r.join(", "))).collect();
            println!("induced {name}: [{}]", rows.join(", "));
        }
    }
    Ok((json!({ "rep": [m, k], "point": res.point }), vec![to_value(&res)]))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (command, outcome, json_path) = match &cli.command {
        Command::Verify { suite, bound, json } => ("verify", verify(suite, *bound, cli.quiet), json),
        Command::Exponents { m, json } => ("exponents", exponents(*m, cli.quiet), json),
        Command::Localize { rep, point, json } => ("localize", localize_cmd(rep, point), json),
    };
    let (parameters, checks) = match outcome {
        Ok(x) => x,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let pass = checks.iter().all(|c| c["pass"] == json!(true));
    let report = RunReport {
        version: env!("CARGO_PKG_VERSION"),
        command: command.to_string(),
        parameters,
        checks,
        pass,
        duration_ms: cli.timing.then(|| start.elapsed().as_millis() as u64),
    };
    if let Some(path) = json_path {
        let text = serde_json::to_string_pretty(&report).expect("run report serializes");
        if let Err(e) = std::fs::write(path, text + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if cli.timing {
        eprintln!("elapsed: {} ms", start.elapsed().as_millis());
    }
    println!("{}", if pass { "PASS" } else { "FAIL" });
    ExitCode::from(if pass { 0 } else { 1 })
}
