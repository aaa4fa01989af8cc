//! `ckq`: derive, contract, classify and verify quantum Cayley-Klein spaces.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ckq::classify::{classify, ClassifyRequest, Family, Scope};
use ckq::multiplier::{choose, j_one, j_zero, oracle_multiplier, theorem_multiplier, MultiplierChoice};
use ckq::perm::SigmaPermutation;
use ckq::presentation::Presentation;
use ckq::reference::{verify, VerifyOptions};
use ckq::scalar::{JAssignment, JValue};
use ckq::sphere::{kinematics_label, specialize_sphere, sphere_presentation};

#[derive(Parser)]
#[command(name = "ckq", version, about = "Quantum Cayley-Klein vector spaces and spheres")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Json => "json",
            Format::Latex => "tex",
        }
    }
}

#[derive(Args, Clone)]
struct Common {
    /// Truncation order in v.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(2..))]
    order: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also write the output to this directory.
    #[arg(long, env = "CKQ_OUTPUT_DIR")]
    output_dir: Option<PathBuf>,
    /// Seed for randomized checks; printed with the results.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Clone)]
struct Space {
    #[arg(long)]
    n: usize,
    /// Permutation such as `1,3,2` or a name such as `sigmaII`.
    #[arg(long)]
    sigma: String,
    #[arg(long, value_enum, default_value_t = MultiplierArg::Theorem)]
    multiplier: MultiplierArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MultiplierArg {
    Theorem,
    J0,
    Oracle,
}

impl From<MultiplierArg> for MultiplierChoice {
    fn from(m: MultiplierArg) -> Self {
        match m {
            MultiplierArg::Theorem => MultiplierChoice::Theorem,
            MultiplierArg::J0 => MultiplierChoice::J0,
            MultiplierArg::Oracle => MultiplierChoice::Oracle,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generic presentation of O^N(j;sigma).
    Derive {
        #[command(flatten)]
        space: Space,
        #[command(flatten)]
        common: Common,
    },
    /// Presentation specialized at an assignment.
    Contract {
        #[command(flatten)]
        space: Space,
        /// Comma-separated values of j1 … j(N-1): 1, i, iota or j.
        #[arg(long)]
        j: String,
        #[command(flatten)]
        common: Common,
    },
    /// Multiplier table for one permutation.
    Multiplier {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma: String,
        #[command(flatten)]
        common: Common,
    },
    /// Catalogued sphere, optionally contracted.
    Sphere {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma: String,
        #[arg(long, alias = "contract")]
        j: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Isomorphism classes at a contraction.
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        family: String,
        /// Parameter fixed to a value, e.g. `j1=iota`; others are 1.
        #[arg(long, default_value = "j1=iota")]
        fix: Vec<String>,
        /// Enumerate all of S(N) instead of the named permutations.
        #[arg(long)]
        all: bool,
        /// Also report classes under the extended search.
        #[arg(long)]
        extended: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Checks the engine against every reference result.
    VerifyPaper {
        #[command(flatten)]
        common: Common,
        #[arg(long, hide = true)]
        corrupt: Option<String>,
    },
}

enum Failure {
    Verification(String),
    Usage(String),
    Engine(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Engine(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Verification(m) => write!(f, "verification failed: {m}"),
            Failure::Usage(m) => write!(f, "error: {m}"),
            Failure::Engine(m) => write!(f, "engine error: {m}"),
        }
    }
}

fn usage(e: impl fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn engine(e: impl fmt::Display) -> Failure {
    Failure::Engine(e.to_string())
}

fn parse_sigma(n: usize, s: &str) -> Result<SigmaPermutation, Failure> {
    let sigma = match SigmaPermutation::by_name(n, s) {
        Some(p) => p,
        None => s.parse::<SigmaPermutation>().map_err(usage)?,
    };
    if sigma.n() != n {
        return Err(usage(format!("not a permutation of 1..{n}: {s}")));
    }
    Ok(sigma)
}

fn parse_assignment(n: usize, s: &str) -> Result<JAssignment, Failure> {
    let a = JAssignment::parse(s).map_err(usage)?;
    if a.len() + 1 != n {
        return Err(usage(format!("expected {} parameter value(s) for N={n}, got {}", n - 1, a.len())));
    }
    Ok(a)
}

fn check_n(n: usize) -> Result<(), Failure> {
    if !(2..=8).contains(&n) {
        return Err(usage(format!("N must be between 2 and 8, got {n}")));
    }
    Ok(())
}

/// Prints, and writes to the output directory when one is set.
fn emit(common: &Common, stem: &str, body: String) -> Result<(), Failure> {
    if let Some(dir) = &common.output_dir {
        std::fs::create_dir_all(dir).map_err(engine)?;
        let path = dir.join(format!("{stem}.{}", common.format.ext()));
        std::fs::write(&path, format!("{body}\n")).map_err(engine)?;
        eprintln!("wrote {}", path.display());
    }
    // a closed pipe downstream is not an error
    let _ = writeln!(std::io::stdout().lock(), "{body}");
    Ok(())
}

fn stem(cmd: &str, sigma: &SigmaPermutation, a: Option<&JAssignment>) -> String {
    let mut s = format!("{cmd}-{}", sigma.image().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(""));
    if let Some(a) = a {
        s.push('-');
        s.push_str(&a.tokens().replace(',', "_"));
    }
    s
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn derive(space: &Space, common: &Common, a: Option<&JAssignment>) -> Result<(), Failure> {
    check_n(space.n)?;
    let sigma = parse_sigma(space.n, &space.sigma)?;
    let j = choose(&sigma, space.multiplier.into());
    let mut p = Presentation::generate(&sigma, &j);
    if let Some(a) = a {
        p = p.specialize(a).map_err(engine)?;
    }
    let label = a.map(|a| kinematics_label(a, space.n)).filter(|l| !l.starts_with("S^"));
    let body = match common.format {
        Format::Text => {
            let mut s = p.to_text();
            if a.is_some() {
                let sp = p.to_series(common.order as usize).map_err(engine)?;
                s.push_str(&format!("\nrules to order {}:", common.order));
                for r in sp.rules_text() {
                    s.push_str(&format!("\n  {r}"));
                }
            }
            if let Some(l) = &label {
                s.push_str(&format!("\nkinematics: {l}"));
            }
            s
        }
        Format::Latex => {
            let mut s = p.to_latex();
            if let Some(l) = &label {
                s.push_str(&format!("\n% kinematics: {l}"));
            }
            s
        }
        Format::Json => {
            let sp = p.to_series(common.order as usize).map_err(engine)?;
            let mut v = sp.to_json();
            v["relations"] = json!(p
                .relations
                .iter()
                .map(|r| format!("{} = {}", r.lhs.render(&ckq::ncpoly::xi_name, false), r.rhs.render(&ckq::ncpoly::xi_name, false)))
                .collect::<Vec<_>>());
            if let Some(l) = &label {
                v["kinematics"] = json!(l);
            }
            pretty(&v)
        }
    };
    emit(common, &stem(if a.is_some() { "contract" } else { "derive" }, &sigma, a), body)
}

fn multiplier(n: usize, s: &str, common: &Common) -> Result<(), Failure> {
    check_n(n)?;
    let sigma = parse_sigma(n, s)?;
    let rows = [
        ("theorem", theorem_multiplier(&sigma)),
        ("j0", j_zero(&sigma)),
        ("j1", j_one(&sigma)),
        ("oracle", oracle_multiplier(&sigma)),
    ];
    let body = match common.format {
        Format::Text => {
            let mut out = vec![format!("sigma = {sigma}{}", sigma.name().map(|n| format!(" ({n})")).unwrap_or_default())];
            out.extend(rows.iter().map(|(k, m)| format!("{k:8} {m}")));
            out.join("\n")
        }
        Format::Json => pretty(&json!({
            "sigma": sigma.image(),
            "multipliers": rows.iter().map(|(k, m)| json!({"rule": k, "value": m.to_string(), "exponents": m.exponents()})).collect::<Vec<_>>(),
        })),
        Format::Latex => {
            let mut out = vec!["\\begin{tabular}{ll}".to_string()];
            out.extend(rows.iter().map(|(k, m)| format!("{k} & ${}$ \\\\", m.to_latex())));
            out.push("\\end{tabular}".into());
            out.join("\n")
        }
    };
    emit(common, &stem("multiplier", &sigma, None), body)
}

fn sphere(n: usize, s: &str, j: Option<&str>, common: &Common) -> Result<(), Failure> {
    check_n(n)?;
    let sigma = parse_sigma(n, s)?;
    let entry = sphere_presentation(&sigma).map_err(usage)?;
    let a = j.map(|j| parse_assignment(n, j)).transpose()?;
    let body = match &a {
        None => match common.format {
            Format::Text => entry.to_text(),
            _ => {
                let c = specialize_sphere(entry, &JAssignment::symbolic(n - 1), common.order as usize).map_err(engine)?;
                if common.format == Format::Json {
                    pretty(&c.to_json())
                } else {
                    c.to_latex()
                }
            }
        },
        Some(a) => {
            let c = specialize_sphere(entry, a, common.order as usize).map_err(engine)?;
            match common.format {
                Format::Text => c.to_text(),
                Format::Json => pretty(&c.to_json()),
                Format::Latex => c.to_latex(),
            }
        }
    };
    emit(common, &stem("sphere", &sigma, a.as_ref()), body)
}

fn parse_fix(n: usize, fix: &[String]) -> Result<JAssignment, Failure> {
    let mut v = vec![JValue::Unit; n - 1];
    for f in fix {
        let (k, val) = f.split_once('=').ok_or_else(|| usage(format!("expected jK=VALUE, got `{f}`")))?;
        let k: usize = k
            .trim()
            .strip_prefix('j')
            .and_then(|d| d.parse().ok())
            .filter(|&k| k >= 1 && k < n)
            .ok_or_else(|| usage(format!("unknown parameter `{k}` for N={n}")))?;
        v[k - 1] = val.trim().parse().map_err(usage)?;
    }
    Ok(JAssignment::new(v))
}

fn classify_cmd(n: usize, fam: &str, fix: &[String], all: bool, extended: bool, common: &Common) -> Result<(), Failure> {
    check_n(n)?;
    let family: Family = fam.parse().map_err(usage)?;
    let assignment = parse_fix(n, fix)?;
    let req = ClassifyRequest {
        n,
        family,
        assignment: assignment.clone(),
        order: common.order as usize,
        scope: if all { Scope::All } else { Scope::Named },
        extended,
    };
    let rep = classify(&req).map_err(|e| match e {
        ckq::classify::ClassifyError::Unsupported(m) => usage(m),
        e => engine(e),
    })?;
    let body = match common.format {
        Format::Text => rep.to_text(),
        Format::Json => pretty(&rep.to_json()),
        Format::Latex => rep.to_latex(),
    };
    let stem = format!("classify-{fam}-{n}-{}", assignment.tokens().replace(',', "_"));
    emit(common, &stem, body)
}

fn verify_cmd(common: &Common, corrupt: Option<String>) -> Result<(), Failure> {
    let board = verify(&VerifyOptions { order: common.order as usize, corrupt, only: None });
    let body = match common.format {
        Format::Text => format!("seed {}\n{}", common.seed, board.to_text()),
        Format::Json => {
            let mut v = board.to_json();
            v["seed"] = json!(common.seed);
            pretty(&v)
        }
        Format::Latex => board.to_latex(),
    };
    emit(common, "verify-paper", body)?;
    if board.all_ok() {
        Ok(())
    } else {
        let ids: Vec<&str> = board.failures().map(|c| c.id.as_str()).collect();
        Err(Failure::Verification(ids.join("; ")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Command::Derive { space, common } => derive(space, common, None),
        Command::Contract { space, j, common } => {
            parse_assignment(space.n, j).and_then(|a| derive(space, common, Some(&a)))
        }
        Command::Multiplier { n, sigma, common } => multiplier(*n, sigma, common),
        Command::Sphere { n, sigma, j, common } => sphere(*n, sigma, j.as_deref(), common),
        Command::Classify { n, family, fix, all, extended, common } => {
            classify_cmd(*n, family, fix, *all, *extended, common)
        }
        Command::VerifyPaper { common, corrupt } => verify_cmd(common, corrupt.clone()),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.code())
        }
    }
}
