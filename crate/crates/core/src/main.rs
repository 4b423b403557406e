use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use braidchain::braid::{Family, GroupSpec};
use braidchain::relations::{gen_chain_with, gen_glm, ChainParams, CopyFlavor, GroupData, Sign};
use braidchain::suite::{run_suite, SuiteConfig, SuiteName, DEFAULT_MAX_DEGREE};
use braidchain::Error;

const MAX_DEGREE_ENV: &str = "BRAIDCHAIN_MAX_DEGREE";

#[derive(Parser)]
#[command(
    name = "braidchain",
    version,
    about = "Exact braid matrices and q-deformed Weyl/Clifford algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the braid matrix of a group, its inverse and (optionally) its projectors.
    Rmatrix(RmatrixArgs),
    /// Print the defining relations of a single copy, a chain or the GL(M)-covariant algebra.
    Relations(RelationsArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Couplings {
    Unit,
    Symbolic,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write to this path instead of stdout (a directory for `rmatrix` text output).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RmatrixArgs {
    #[arg(long, value_parser = parse_family)]
    group: Family,
    /// Dimension of the defining representation.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    projectors: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct RelationsArgs {
    #[arg(long, value_parser = parse_family, default_value = "sl")]
    group: Family,
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = parse_sign, default_value = "weyl", conflicts_with = "eps")]
    sign: Sign,
    /// 1 uses the braid matrix in the cross relation, -1 its inverse.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    variant: i8,
    /// Build a braided chain of copies.
    #[arg(long, conflicts_with = "glm")]
    chain: bool,
    /// Number of copies.
    #[arg(long)]
    m: Option<usize>,
    /// Per-copy parities for a chain, e.g. `0,1` (0 = Weyl, 1 = Clifford).
    #[arg(long, value_delimiter = ',', requires = "chain")]
    eps: Option<Vec<u8>>,
    #[arg(long, value_enum, default_value = "unit")]
    couplings: Couplings,
    /// Build the GL(M) x SL(N)-covariant algebra.
    #[arg(long)]
    glm: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_suite, default_value = "all")]
    suite: SuiteName,
    #[arg(long, value_parser = parse_family)]
    group: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Highest degree for Poincare series comparisons.
    #[arg(long)]
    max_degree: Option<usize>,
    /// Record per-check wall time (output is then no longer reproducible).
    #[arg(long)]
    timings: bool,
    #[command(flatten)]
    out: OutputArgs,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<SuiteName, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::InvalidGroup(_) | Error::Parse { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Run(e.to_string()),
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Run(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn file_stem(label: &str) -> String {
    label.replace('\'', "_prime")
}

fn cmd_rmatrix(args: &RmatrixArgs) -> Result<bool, Failure> {
    let group = GroupSpec::new(args.group, args.n)?;
    let data = GroupData::build(group)?;
    let mut items: Vec<(String, String, serde_json::Value)> = vec![
        (
            "rhat".into(),
            data.rhat().dump(),
            json!({"nnz": data.rhat().nnz()}),
        ),
        (
            "rhat_inverse".into(),
            data.inverse.dump(),
            json!({"nnz": data.inverse.nnz()}),
        ),
    ];
    if args.projectors {
        for (entry, (label, p)) in data.braid.spectrum.iter().zip(&data.projectors.projectors) {
            items.push((
                format!("projector_{}", file_stem(&label.to_string())),
                p.dump(),
                json!({"label": label, "eigenvalue": entry.eigenvalue, "rank": p.rank()}),
            ));
        }
    }
    match args.out.format {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            for (name, dump, mut meta) in items {
                meta["dump"] = json!(dump);
                obj.insert(name, meta);
            }
            let doc = json!({"group": group, "matrices": obj});
            write_output(
                args.out.output.as_deref(),
                &(serde_json::to_string_pretty(&doc).unwrap() + "\n"),
            )?;
        }
        Format::Text => match &args.out.output {
            Some(dir) => {
                fs::create_dir_all(dir)
                    .map_err(|e| Failure::Run(format!("{}: {e}", dir.display())))?;
                for (name, dump, _) in items {
                    write_output(Some(&dir.join(format!("{name}.dump"))), &dump)?;
                }
            }
            None => {
                let mut s = String::new();
                for (name, dump, meta) in items {
                    s.push_str(&format!("# {name} {group} {meta}\n{dump}"));
                }
                write_output(None, &s)?;
            }
        },
    }
    Ok(true)
}

fn cmd_relations(args: &RelationsArgs) -> Result<bool, Failure> {
    if args.variant != 1 && args.variant != -1 {
        return Err(Failure::Usage("--variant must be 1 or -1".into()));
    }
    let pres = if args.glm {
        if args.group != Family::SL {
            return Err(Failure::Usage("--glm requires --group sl".into()));
        }
        let m = args
            .m
            .ok_or_else(|| Failure::Usage("--glm requires --m".into()))?;
        gen_glm(m, args.n, args.sign, args.variant == -1)?
    } else {
        let group = GroupSpec::new(args.group, args.n)?;
        let flavors: Vec<CopyFlavor> = match &args.eps {
            Some(eps) => {
                if let Some(m) = args.m {
                    if m != eps.len() {
                        return Err(Failure::Usage(format!(
                            "--eps lists {} parities but --m is {m}",
                            eps.len()
                        )));
                    }
                }
                if let Some(p) = eps.iter().find(|&&p| p > 1) {
                    return Err(Failure::Usage(format!(
                        "--eps entries must be 0 or 1, got {p}"
                    )));
                }
                eps.iter()
                    .map(|&p| CopyFlavor::new(Sign::from_parity(p), args.variant))
                    .collect()
            }
            None => {
                let m = args.m.unwrap_or(1);
                if m != 1 && !args.chain {
                    return Err(Failure::Usage("--m > 1 requires --chain or --glm".into()));
                }
                vec![CopyFlavor::new(args.sign, args.variant); m]
            }
        };
        let mut params = ChainParams::from_flavors(flavors);
        if let Couplings::Symbolic = args.couplings {
            params = params.with_generic_couplings();
        }
        gen_chain_with(&GroupData::build(group)?, &params)?
    };
    let text = match args.out.format {
        Format::Text => pres.dump(),
        Format::Json => serde_json::to_string_pretty(&pres.to_json()).unwrap() + "\n",
    };
    write_output(args.out.output.as_deref(), &text)?;
    Ok(true)
}

fn max_degree(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(d) = flag {
        return Ok(d);
    }
    match std::env::var(MAX_DEGREE_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::Usage(format!(
                "{MAX_DEGREE_ENV}='{v}' is not a non-negative integer"
            ))
        }),
        Err(_) => Ok(DEFAULT_MAX_DEGREE),
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool, Failure> {
    let mut cfg = SuiteConfig::new(args.suite);
    cfg.family = args.group;
    cfg.n = args.n;
    cfg.m = args.m;
    cfg.max_degree = max_degree(args.max_degree)?;
    cfg.timings = args.timings;
    let report = run_suite(&cfg)?;
    let text = match args.out.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    write_output(args.out.output.as_deref(), &text)?;
    Ok(report.all_passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Rmatrix(a) => cmd_rmatrix(a),
        Command::Relations(a) => cmd_relations(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
