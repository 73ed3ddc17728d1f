//! Command-line front end: every check exits 0 on pass, 1 on failure,
//! 2 on bad usage and 3 on internal errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rpv::binsplit::{bench, format_digits, oracle_digits};
use rpv::catalog::{default_catalog, load_catalog, verify_all, verify_entry, Catalog, VerifyReport};
use rpv::numerics::rational::parse_rational;
use rpv::numerics::Rational;
use rpv::special::{
    find_limit, limit_eval, rogers_domb_check, starting_formula, sun_2_11, sun_4_14,
    sun_s2_identity,
};
use rpv::transforms::{find_rule, rule_catalog, verify_rule_formal, TransformRule};
use rpv::translate::{points_for_target, replay, translate, Certificate};

#[derive(Parser)]
#[command(name = "rpv", version, about = "Verify and derive Ramanujan-type series for 1/π")]
struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
    /// Catalog file (overrides RPV_CATALOG).
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sum catalog entries against c/π and replay their certificates.
    Verify {
        #[arg(long)]
        id: Option<String>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        digits: u32,
        #[arg(long)]
        json: bool,
    },
    /// Transformation rules.
    Rules {
        #[command(subcommand)]
        action: RulesAction,
    },
    /// Transport a catalog entry through a rule, or replay a certificate.
    Translate {
        #[arg(long, required_unless_present = "replay")]
        source: Option<String>,
        #[arg(long, required_unless_present = "replay")]
        rule: Option<String>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational_arg, conflicts_with = "target_z")]
        x0: Option<Rational>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational_arg)]
        target_z: Option<Rational>,
        #[arg(long, conflicts_with_all = ["source", "rule", "x0", "target_z"])]
        replay: Option<PathBuf>,
    },
    /// π digits by binary splitting.
    Digits {
        #[arg(long)]
        id: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        digits: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Compare against the AGM oracle.
        #[arg(long)]
        check: bool,
    },
    /// Extrapolated limit of a weighted sum at the edge of convergence.
    Limit {
        #[arg(long)]
        id: String,
        #[arg(long)]
        tolerance: f64,
    },
    /// Checks around the central-binomial conjectures.
    Sun {
        #[arg(long, value_enum)]
        check: SunCheck,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        digits: u32,
    },
    /// Σ n·cₙ/2ⁿ = 2 sin(sπ)/π for the squared ₂F₁ coefficients.
    Start {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational_arg)]
        s: Rational,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        digits: u32,
    },
}

#[derive(Subcommand)]
enum RulesAction {
    /// Exact coefficient comparison of both sides.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u64).range(8..))]
        order: u64,
        #[arg(long)]
        rule: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SunCheck {
    #[value(name = "2.11")]
    S211,
    #[value(name = "4.14")]
    S414,
    #[value(name = "s2-identity")]
    S2Identity,
    #[value(name = "rogers")]
    Rogers,
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// A failed check (exit 1) or an internal error (exit 3).
enum Failure {
    Check,
    Internal(String),
}

type Outcome = Result<(), Failure>;

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure::Internal(e.to_string())
}

fn check(pass: bool) -> Outcome {
    if pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn catalog(path: &Option<PathBuf>) -> Result<Catalog, Failure> {
    match path {
        Some(p) => load_catalog(p),
        None => default_catalog(),
    }
    .map_err(internal)
}

fn run(cli: Cli) -> Outcome {
    let jobs = cli.jobs.map(|j| j as usize).unwrap_or_else(|| {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    });
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().map_err(internal)?;
    let rules = rule_catalog();
    match cli.command {
        Command::Verify { id, digits, json } => {
            let cat = catalog(&cli.catalog)?;
            let report = match id {
                Some(id) => {
                    let entry = cat.get(&id).ok_or_else(|| internal(format!("no catalog entry {id}")))?;
                    let e = verify_entry(&cat, entry, &rules, digits);
                    let passed = usize::from(e.pass);
                    VerifyReport { digits, passed, failed: 1 - passed, entries: vec![e], uncertified: vec![] }
                }
                None => verify_all(&cat, &rules, digits, jobs),
            };
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            check(report.all_pass())
        }
        Command::Rules { action: RulesAction::Verify { order, rule } } => {
            let selected: Vec<TransformRule> = match rule {
                Some(id) => vec![find_rule(&rules, &id).map_err(internal)?],
                None => rules,
            };
            let mut all = true;
            for r in &selected {
                let rep = verify_rule_formal(r, order as usize).map_err(internal)?;
                all &= rep.pass;
                let verdict = if rep.pass { "PASS" } else { "FAIL" };
                let mismatch = rep.first_mismatch.map(|n| format!(" first mismatch at x^{n}")).unwrap_or_default();
                println!("{verdict} {:<16} order {}{mismatch}", r.id, rep.order);
                if r.id.starts_with("warning") {
                    println!("     caveat: {}", r.note);
                }
            }
            check(all)
        }
        Command::Translate { source, rule, x0, target_z, replay: replay_path } => {
            if let Some(path) = replay_path {
                let text = std::fs::read_to_string(&path).map_err(internal)?;
                let cert = Certificate::from_text(&text).map_err(internal)?;
                let rep = replay(&cert, &rules);
                println!("{} replay {}: {}", if rep.pass { "PASS" } else { "FAIL" }, path.display(), rep.detail);
                return check(rep.pass);
            }
            let (source, rule) = (source.expect("clap enforces"), rule.expect("clap enforces"));
            let cat = catalog(&cli.catalog)?;
            let entry = cat.get(&source).ok_or_else(|| internal(format!("no catalog entry {source}")))?;
            let rule = find_rule(&rules, &rule).map_err(internal)?;
            let points = match (x0, target_z) {
                (Some(x), _) => vec![x],
                (None, Some(z)) => {
                    let pts = points_for_target(&entry.spec, &rule, &z);
                    if pts.is_empty() {
                        eprintln!("no rational x0 maps {} to {z} under {}", entry.spec.z, rule.id);
                        return Err(Failure::Check);
                    }
                    pts
                }
                (None, None) => return Err(internal("one of --x0 or --target-z is required")),
            };
            let mut all = true;
            for x in points {
                match translate(&entry.spec, &rule, &x) {
                    Ok(cert) => print!("{}", cert.to_text()),
                    Err(e) => {
                        eprintln!("refused at x0 = {x}: {e}");
                        all = false;
                    }
                }
            }
            check(all)
        }
        Command::Digits { id, digits, out, check: compare } => {
            let cat = catalog(&cli.catalog)?;
            let entry = cat.get(&id).ok_or_else(|| internal(format!("no catalog entry {id}")))?;
            let report = bench(entry, digits).map_err(internal)?;
            eprintln!(
                "{id}: {digits} digits, {} terms, {:.2?} (split {:.2?})",
                report.terms, report.total, report.split_time
            );
            let text = format_digits(&report.output);
            match &out {
                Some(path) => std::fs::write(path, format!("{text}\n")).map_err(internal)?,
                None => println!("{text}"),
            }
            if compare {
                let ok = oracle_digits(digits) == report.output;
                eprintln!("{} oracle agreement", if ok { "PASS" } else { "FAIL" });
                return check(ok);
            }
            Ok(())
        }
        Command::Limit { id, tolerance } => {
            let spec = find_limit(&id).ok_or_else(|| internal(format!("no limit {id}")))?;
            let rep = limit_eval(&spec, tolerance, 20).map_err(internal)?;
            println!(
                "{} {}: estimate {:.15}, target {:.15}, error {:.2e}, amplification {:.1}",
                if rep.pass { "PASS" } else { "FAIL" },
                rep.id,
                rep.estimate,
                rep.target,
                rep.error,
                rep.amplification
            );
            check(rep.pass)
        }
        Command::Sun { check: which, digits } => match which {
            SunCheck::S211 | SunCheck::S414 => {
                let rep = match which {
                    SunCheck::S211 => sun_2_11(digits),
                    _ => sun_4_14(digits),
                }
                .map_err(internal)?;
                println!(
                    "{} {}: sum {} target {} ({} digits); {}",
                    if rep.pass { "PASS" } else { "FAIL" },
                    rep.name,
                    rep.sum.to_decimal(digits.min(40)),
                    rep.target.to_decimal(digits.min(40)),
                    rep.digits_matched,
                    rep.detail
                );
                check(rep.pass)
            }
            SunCheck::S2Identity => {
                let rep = sun_s2_identity(300);
                println!("{} s2-identity: {rep:?}", if rep.pass { "PASS" } else { "FAIL" });
                check(rep.pass)
            }
            SunCheck::Rogers => {
                let rep = rogers_domb_check(digits).map_err(internal)?;
                println!(
                    "{} rogers-domb: formal to order {} {}, sum {} vs {}; transport: {}",
                    if rep.pass { "PASS" } else { "FAIL" },
                    rep.formal_order,
                    if rep.formal_pass { "ok" } else { "FAILED" },
                    rep.sum.to_decimal(digits.min(40)),
                    rep.target.to_decimal(digits.min(40)),
                    rep.transport
                );
                check(rep.pass)
            }
        },
        Command::Start { s, digits } => {
            let rep = starting_formula(&s, digits).map_err(internal)?;
            let exact = rep.exact.map(|c| format!(" = ({c})/π")).unwrap_or_default();
            println!(
                "{} s = {}: Σ n·cₙ/2ⁿ = {}, 2 sin(sπ)/π{exact} = {} ({} digits)",
                if rep.pass { "PASS" } else { "FAIL" },
                rep.s,
                rep.lhs.to_decimal(digits.min(60)),
                rep.target.to_decimal(digits.min(60)),
                rep.digits_matched
            );
            check(rep.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
