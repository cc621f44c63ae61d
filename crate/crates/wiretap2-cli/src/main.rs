//! wiretap2: decide, synthesize and verify secure multipath codes.
//!
//! Exit codes are part of the interface: 0 success/feasible, 1 usage error,
//! 2 parse or validation error, 3 infeasible tuple or failed verification,
//! 4 code construction failed, 5 internal error (a synthesized code failed
//! its own audit).

use std::fs;
use std::process::ExitCode;

use wiretap2::audit::{full_audit, render_table, AuditOptions, AuditReport};
use wiretap2::codec;
use wiretap2::synth::{reduce_key, synthesize, LinearCode, SynthError};
use wiretap2::{
    check_membership, minimize_key_rate, scale_to_integers, validate_instance, FeasibilityResult,
    KeyRateSolution, ProblemInstance, RateTuple, Rational, RegionQuery, RegionVariant,
};

const USAGE: &str = "\
usage: wiretap2 <command> [args] [flags]

commands:
  check <instance.json> <tuple.json> [--variant general|key-recovered]
      Decide whether the rate tuple is achievable; print witness or
      certificate as JSON. Exit 0 feasible, 3 infeasible.
  minimize-key <instance.json> <message-rate> [equivocations]
      Minimal key rate for the given message rate and comma-separated
      equivocation bounds. Exit 0 solvable, 3 infeasible.
  synthesize <instance.json> <tuple.json> --out <code.json>
      Build a code for an achievable tuple (smallest block length, surplus
      key discarded), audit it, and write it. Exit 3 infeasible, 4
      construction failed, 5 audit failed.
  verify <code.json> <instance.json>
      Re-audit a code file: decode identity, leakage budgets, entropy
      identities. JSON report on stdout, table on stderr. Exit 3 on fail.
  encode <code.json> <message> [key]
      Encode comma-separated symbols; prints the channel word.
  decode <code.json> <word>
      Decode a channel word; prints message and key.

flags:
  --variant general|key-recovered   region variant for check (default general)
  --cap <states>    enumeration cap for audits (default 2^20, env WIRETAP2_CAP)
  --seed <u64>      seed for sampled decode checks (default 0)
  --out <path>      output file for synthesize
";

struct Flags {
    variant: RegionVariant,
    cap: Option<u64>,
    seed: u64,
    out: Option<String>,
    positional: Vec<String>,
}

enum CliError {
    Usage(String),
    Parse(String),
}

fn parse_flags(args: &[String]) -> Result<Flags, CliError> {
    let mut flags = Flags {
        variant: RegionVariant::General,
        cap: None,
        seed: 0,
        out: None,
        positional: Vec::new(),
    };
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--variant" => {
                let v = it.next().ok_or_else(|| CliError::Usage("--variant needs a value".into()))?;
                flags.variant = match v.as_str() {
                    "general" => RegionVariant::General,
                    "key-recovered" => RegionVariant::KeyRecovered,
                    other => {
                        return Err(CliError::Usage(format!(
                            "unknown variant {:?}; use general or key-recovered",
                            other
                        )))
                    }
                };
            }
            "--cap" => {
                let v = it.next().ok_or_else(|| CliError::Usage("--cap needs a value".into()))?;
                flags.cap = Some(
                    v.parse().map_err(|_| CliError::Usage(format!("bad --cap value {:?}", v)))?,
                );
            }
            "--seed" => {
                let v = it.next().ok_or_else(|| CliError::Usage("--seed needs a value".into()))?;
                flags.seed =
                    v.parse().map_err(|_| CliError::Usage(format!("bad --seed value {:?}", v)))?;
            }
            "--out" => {
                let v = it.next().ok_or_else(|| CliError::Usage("--out needs a value".into()))?;
                flags.out = Some(v.clone());
            }
            other if other.starts_with("--") => {
                return Err(CliError::Usage(format!("unknown flag {:?}", other)));
            }
            other => flags.positional.push(other.to_string()),
        }
    }
    Ok(flags)
}

fn audit_options(flags: &Flags) -> AuditOptions {
    let mut opts = AuditOptions { seed: flags.seed, ..AuditOptions::default() };
    if let Ok(env_cap) = std::env::var("WIRETAP2_CAP") {
        if let Ok(v) = env_cap.parse::<u64>() {
            opts.enumeration_cap = v;
        }
    }
    if let Some(cap) = flags.cap {
        opts.enumeration_cap = cap;
    }
    opts
}

fn load_instance(path: &str) -> Result<ProblemInstance, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {}", path, e)))?;
    let inst: ProblemInstance = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {}", path, e)))?;
    let report = validate_instance(&inst);
    for w in &report.warnings {
        eprintln!("warning: {}", w);
    }
    if !report.is_ok() {
        return Err(CliError::Parse(format!(
            "{}: invalid instance: {}",
            path,
            report.violations.join("; ")
        )));
    }
    Ok(inst)
}

fn load_tuple(path: &str) -> Result<RateTuple, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {}", path, e)))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {}", path, e)))
}

fn load_code(path: &str) -> Result<LinearCode, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {}", path, e)))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {}", path, e)))
}

fn parse_symbols(text: &str) -> Result<Vec<u64>, CliError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| {
            s.trim().parse::<u64>().map_err(|_| CliError::Parse(format!("bad symbol {:?}", s)))
        })
        .collect()
}

fn parse_rational(text: &str) -> Result<Rational, CliError> {
    text.parse().map_err(|_| CliError::Parse(format!("bad rational {:?}", text)))
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serialization cannot fail"));
}

fn expect_positionals(flags: &Flags, min: usize, max: usize) -> Result<(), CliError> {
    let n = flags.positional.len();
    if n < min || n > max {
        return Err(CliError::Usage(format!(
            "expected {} argument(s), got {}",
            if min == max { min.to_string() } else { format!("{}..{}", min, max) },
            n
        )));
    }
    Ok(())
}

fn cmd_check(flags: &Flags) -> Result<u8, CliError> {
    expect_positionals(flags, 2, 2)?;
    let instance = load_instance(&flags.positional[0])?;
    let tuple = load_tuple(&flags.positional[1])?;
    let result = check_membership(&RegionQuery {
        instance: &instance,
        tuple: &tuple,
        variant: flags.variant,
    })
    .map_err(|e| CliError::Parse(e.to_string()))?;
    print_json(&result);
    Ok(if result.is_feasible() { 0 } else { 3 })
}

fn cmd_minimize_key(flags: &Flags) -> Result<u8, CliError> {
    expect_positionals(flags, 2, 3)?;
    let instance = load_instance(&flags.positional[0])?;
    let message_rate = parse_rational(&flags.positional[1])?;
    let equivocations: Vec<Rational> = match flags.positional.get(2) {
        Some(text) if !text.trim().is_empty() => text
            .split(',')
            .map(|s| parse_rational(s.trim()))
            .collect::<Result<_, _>>()?,
        _ => Vec::new(),
    };
    let solution = minimize_key_rate(&instance, &message_rate, &equivocations)
        .map_err(|e| CliError::Parse(e.to_string()))?;
    match solution {
        KeyRateSolution::Optimal { key_rate, witness } => {
            print_json(&serde_json::json!({
                "feasible": true,
                "message_rate": message_rate,
                "key_rate": key_rate,
                "witness": witness,
            }));
            Ok(0)
        }
        KeyRateSolution::Infeasible { certificate } => {
            print_json(&serde_json::json!({
                "feasible": false,
                "certificate": certificate,
            }));
            Ok(3)
        }
    }
}

fn cmd_synthesize(flags: &Flags) -> Result<u8, CliError> {
    expect_positionals(flags, 2, 2)?;
    let out = flags
        .out
        .as_ref()
        .ok_or_else(|| CliError::Usage("synthesize requires --out <code.json>".into()))?;
    let instance = load_instance(&flags.positional[0])?;
    let tuple = load_tuple(&flags.positional[1])?;
    let result = check_membership(&RegionQuery {
        instance: &instance,
        tuple: &tuple,
        variant: RegionVariant::General,
    })
    .map_err(|e| CliError::Parse(e.to_string()))?;
    let witness = match &result {
        FeasibilityResult::Feasible { witness } => witness.clone(),
        FeasibilityResult::Infeasible { .. } => {
            print_json(&result);
            return Ok(3);
        }
    };
    let reduced = reduce_key(&instance, &tuple, &witness)
        .map_err(|e| CliError::Parse(e.to_string()))?;
    let params = scale_to_integers(&reduced, &witness, &instance)
        .map_err(|e| CliError::Parse(e.to_string()))?;
    let code = match synthesize(&instance, &params) {
        Ok(code) => code,
        Err(e @ SynthError::ConstructionFailed { .. }) => {
            eprintln!("error: {}", e);
            return Ok(4);
        }
        Err(e) => return Err(CliError::Parse(e.to_string())),
    };
    let report = full_audit(&code, &instance, &params, &audit_options(flags));
    if !report.pass {
        eprintln!("error: synthesized code failed its audit");
        eprint!("{}", render_table(&report));
        return Ok(5);
    }
    let json = serde_json::to_string_pretty(&code).expect("serialization cannot fail");
    fs::write(out, json.as_bytes())
        .map_err(|e| CliError::Parse(format!("cannot write {}: {}", out, e)))?;
    print_json(&serde_json::json!({
        "out": out,
        "block_length": params.block_length,
        "message_symbols": params.message_symbols,
        "key_symbols": params.key_symbols,
        "channel_symbols": params.channel_symbols,
        "audit_pass": report.pass,
    }));
    Ok(0)
}

fn verify_shapes(code: &LinearCode, instance: &ProblemInstance) -> Result<(), CliError> {
    if code.field().q() != instance.q() {
        return Err(CliError::Parse(format!(
            "code field has q={}, instance has q={}",
            code.field().q(),
            instance.q()
        )));
    }
    if code.layout().len() != instance.channel_count() {
        return Err(CliError::Parse(format!(
            "code has {} channels, instance has {}",
            code.layout().len(),
            instance.channel_count()
        )));
    }
    if code.params().leak_budgets.len() != instance.set_count() {
        return Err(CliError::Parse(format!(
            "code has {} leak budgets, instance has {} wiretap sets",
            code.params().leak_budgets.len(),
            instance.set_count()
        )));
    }
    Ok(())
}

fn cmd_verify(flags: &Flags) -> Result<u8, CliError> {
    expect_positionals(flags, 2, 2)?;
    let code = load_code(&flags.positional[0])?;
    let instance = load_instance(&flags.positional[1])?;
    verify_shapes(&code, &instance)?;
    let report: AuditReport = full_audit(&code, &instance, code.params(), &audit_options(flags));
    print_json(&report);
    eprint!("{}", render_table(&report));
    Ok(if report.pass { 0 } else { 3 })
}

fn cmd_encode(flags: &Flags) -> Result<u8, CliError> {
    expect_positionals(flags, 2, 3)?;
    let code = load_code(&flags.positional[0])?;
    let message = parse_symbols(&flags.positional[1])?;
    let key = parse_symbols(flags.positional.get(2).map(String::as_str).unwrap_or(""))?;
    let word = codec::encode(&code, &message, &key).map_err(|e| CliError::Parse(e.to_string()))?;
    let rendered: Vec<String> = word.iter().map(|s| s.to_string()).collect();
    println!("{}", rendered.join(","));
    Ok(0)
}

fn cmd_decode(flags: &Flags) -> Result<u8, CliError> {
    expect_positionals(flags, 2, 2)?;
    let code = load_code(&flags.positional[0])?;
    let word = parse_symbols(&flags.positional[1])?;
    let (message, key) =
        codec::decode(&code, &word).map_err(|e| CliError::Parse(e.to_string()))?;
    let m: Vec<String> = message.iter().map(|s| s.to_string()).collect();
    let k: Vec<String> = key.iter().map(|s| s.to_string()).collect();
    println!("m: {}", m.join(","));
    println!("k: {}", k.join(","));
    Ok(0)
}

fn run() -> Result<u8, CliError> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() {
        return Err(CliError::Usage("missing command".into()));
    }
    let flags = parse_flags(&args[1..])?;
    match args[0].as_str() {
        "check" => cmd_check(&flags),
        "minimize-key" => cmd_minimize_key(&flags),
        "synthesize" => cmd_synthesize(&flags),
        "verify" => cmd_verify(&flags),
        "encode" => cmd_encode(&flags),
        "decode" => cmd_decode(&flags),
        "help" | "--help" | "-h" => {
            print!("{}", USAGE);
            Ok(0)
        }
        other => Err(CliError::Usage(format!("unknown command {:?}", other))),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {}", msg);
            eprint!("{}", USAGE);
            ExitCode::from(1)
        }
        Err(CliError::Parse(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}
