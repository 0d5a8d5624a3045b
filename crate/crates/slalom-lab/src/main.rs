//! Batch driver: seeded verification suites, instance generation, and
//! one-shot constructor witnesses, all emitting machine-readable JSON.
//!
//! Every flag can also come from the environment (prefix `SLALOM_LAB_`, e.g.
//! `SLALOM_LAB_SEED`) or from a `key=value` config file passed with
//! `--config`; explicit flags win over the environment, which wins over the
//! config file.
//!
//! Exit codes: 0 all checks passed, 1 verification failure, 2 usage error,
//! 3 malformed certificate.

use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Arg, ArgMatches, Command};

use slalom_lab::suites::{gen_instance, run_suite, SuiteSpec, SUITES};
use slalom_lab::witness::{witness, CONSTRUCTORS};
use slalom_lab::{Error, Result};

fn main() {
    std::process::exit(match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    });
}

fn common_args(cmd: Command) -> Command {
    cmd.arg(Arg::new("seed").long("seed").value_name("U64"))
        .arg(Arg::new("horizon").long("horizon").value_name("BLOCKS"))
        .arg(Arg::new("out").long("out").value_name("PATH"))
        .arg(Arg::new("config").long("config").value_name("FILE"))
}

fn cli() -> Command {
    let mut cmd = Command::new("slalom-lab")
        .about("exact-arithmetic verification suites for interval partitions, summable sequences, and block slaloms")
        .subcommand_required(true)
        .subcommand(
            common_args(Command::new("suite").about("run a named verification suite"))
                .arg(Arg::new("suite").long("suite").value_name("NAME"))
                .arg(Arg::new("instances").long("instances").value_name("N")),
        )
        .subcommand(
            common_args(Command::new("gen").about("generate a serialized instance"))
                .arg(Arg::new("kind").long("kind").value_name("KIND")),
        )
        .subcommand(Command::new("list").about("list suites, instance kinds, and constructors"));
    for c in CONSTRUCTORS {
        cmd = cmd.subcommand(common_args(
            Command::new(*c).about("emit this constructor's witness bundle"),
        ));
    }
    cmd
}

/// flag > environment (SLALOM_LAB_KEY) > config file > default.
fn setting(
    matches: &ArgMatches,
    config: &HashMap<String, String>,
    key: &str,
    default: &str,
) -> String {
    if let Some(v) = matches.try_get_one::<String>(key).ok().flatten() {
        return v.clone();
    }
    let env_key = format!("SLALOM_LAB_{}", key.to_uppercase());
    if let Ok(v) = std::env::var(env_key) {
        return v;
    }
    config.get(key).cloned().unwrap_or_else(|| default.into())
}

fn load_config(matches: &ArgMatches) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    let path = match matches.try_get_one::<String>("config").ok().flatten() {
        Some(p) => p.clone(),
        None => match std::env::var("SLALOM_LAB_CONFIG") {
            Ok(p) => p,
            Err(_) => return Ok(map),
        },
    };
    let text = std::fs::read_to_string(&path)?;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Usage(format!(
                "{path}:{}: expected key=value",
                lineno + 1
            )));
        };
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn parse_u64(s: &str, what: &str) -> Result<u64> {
    s.parse()
        .map_err(|_| Error::Usage(format!("bad {what}: {s:?}")))
}

fn emit(out: Option<String>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            let mut f = std::fs::File::create(PathBuf::from(path))?;
            f.write_all(content.as_bytes())?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run() -> Result<i32> {
    let matches = cli().get_matches();
    match matches.subcommand() {
        Some(("suite", m)) => {
            let config = load_config(m)?;
            let name = setting(m, &config, "suite", "");
            if name.is_empty() {
                return Err(Error::Usage(format!(
                    "--suite is required; known: {}",
                    SUITES.join(", ")
                )));
            }
            let spec = SuiteSpec::new(
                name,
                parse_u64(&setting(m, &config, "seed", "0"), "seed")?,
                parse_u64(&setting(m, &config, "horizon", "0"), "horizon")? as usize,
                parse_u64(&setting(m, &config, "instances", "0"), "instances")? as usize,
            );
            let report = run_suite(&spec)?;
            let out = setting(m, &config, "out", "");
            emit((!out.is_empty()).then_some(out), &report.render(&spec))?;
            Ok(if report.all_passed() { 0 } else { 1 })
        }
        Some(("gen", m)) => {
            let config = load_config(m)?;
            let kind = setting(m, &config, "kind", "");
            if kind.is_empty() {
                return Err(Error::Usage("--kind is required".into()));
            }
            let value = gen_instance(
                &kind,
                parse_u64(&setting(m, &config, "seed", "0"), "seed")?,
                parse_u64(&setting(m, &config, "horizon", "16"), "horizon")? as usize,
            )?;
            let out = setting(m, &config, "out", "");
            emit(
                (!out.is_empty()).then_some(out),
                &format!("{}\n", serde_json::to_string_pretty(&value)?),
            )?;
            Ok(0)
        }
        Some(("list", _)) => {
            println!("suites:");
            for s in SUITES {
                println!("  {s}");
            }
            println!("constructors:");
            for c in CONSTRUCTORS {
                println!("  {c}");
            }
            Ok(0)
        }
        Some((name, m)) if CONSTRUCTORS.contains(&name) => {
            let config = load_config(m)?;
            let value = witness(
                name,
                parse_u64(&setting(m, &config, "seed", "0"), "seed")?,
                parse_u64(&setting(m, &config, "horizon", "16"), "horizon")? as usize,
            )?;
            let out = setting(m, &config, "out", "");
            emit(
                (!out.is_empty()).then_some(out),
                &format!("{}\n", serde_json::to_string_pretty(&value)?),
            )?;
            Ok(0)
        }
        _ => Err(Error::Usage("unknown subcommand".into())),
    }
}
