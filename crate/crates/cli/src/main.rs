use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gerbecoh::document::{canonical_json, Document};
use gerbecoh::group::DEFAULT_MAX_ORDER;
use gerbecoh::selftest::{self, Config};
use gerbecoh::{fixtures, Error, Result};

mod commands;

use commands::{error_outcome, Flags, Outcome};

#[derive(Parser)]
#[command(name = "gerbecoh", version, about = "Exact group cohomology, gerbes and Brauer-Manin invariants")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    output: Output,

    /// Include representative cocycles and traces
    #[arg(long, global = true)]
    certificates: bool,

    /// Exit with status 1 when m_H is nonzero
    #[arg(long, global = true)]
    expect_zero: bool,

    /// Bound on the order of groups generated by permutations
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ORDER)]
    max_group_order: usize,

    /// On a degree-3 obstruction, retry with mu enlarged by factors up to T
    #[arg(long, global = true, value_name = "T")]
    mu_enlarge_bound: Option<u64>,

    /// Seed for the randomized parts of the self-test
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// H^n(G, M)
    Cohomology {
        file: PathBuf,
        #[arg(long)]
        module: Option<String>,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// Hom(M, mu) with its action
    Dual {
        file: PathBuf,
        #[arg(long)]
        module: Option<String>,
    },
    /// Classes vanishing at every place of the model
    Sha {
        file: PathBuf,
        #[arg(long)]
        module: Option<String>,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    #[command(subcommand)]
    Model(ModelCommand),
    #[command(subcommand)]
    Gerbe(GerbeCommand),
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Run the acceptance suite
    Selftest,
    /// Print the document of a built-in fixture
    Fixture { name: Option<String> },
    /// Run the tasks listed in a document
    Run { file: PathBuf },
    /// Print a document with every entity in resolved form
    Dump { file: PathBuf },
}

#[derive(Subcommand)]
enum ModelCommand {
    /// Check axioms A1-A3
    Check { file: PathBuf },
    /// Enumerate invariant assignments satisfying A1 and A2
    SearchInv { file: PathBuf },
}

#[derive(Subcommand)]
enum GerbeCommand {
    /// Class in H^2(G, H^ab)
    Class {
        file: PathBuf,
        #[arg(long)]
        extension: Option<String>,
    },
    /// Splittings over each decomposition group
    LocalSections {
        file: PathBuf,
        #[arg(long)]
        extension: Option<String>,
    },
    /// Pic and Br_a = H^1(G, Pic)
    Brauer {
        file: PathBuf,
        #[arg(long)]
        extension: Option<String>,
    },
    /// The Brauer-Manin functional m_H
    Mh {
        file: PathBuf,
        #[arg(long)]
        extension: Option<String>,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// m_H on E against m_H on its abelianization
    Thm41 {
        file: PathBuf,
        #[arg(long)]
        extension: Option<String>,
    },
}

fn load(path: &PathBuf, max_order: usize) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Document(format!("{}: {e}", path.display())))?;
    Document::parse_bounded(&text, max_order).map_err(|e| match e {
        Error::Document(msg) => Error::Document(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn fixture(name: Option<&str>) -> Result<Outcome> {
    let names = fixtures::frozen_names();
    match name {
        None => Ok(Outcome {
            report: serde_json::json!({ "fixtures": names }),
            text: names.iter().map(|n| format!("{n}\n")).collect(),
            exit: 0,
        }),
        Some(n) => {
            let doc = fixtures::frozen_document(n).ok_or_else(|| Error::Document(format!("unknown fixture '{n}'")))?;
            let json = doc.to_json();
            Ok(Outcome { report: serde_json::to_value(&doc).expect("serializable document"), text: format!("{json}\n"), exit: 0 })
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let flags = Flags { certificates: cli.certificates, expect_zero: cli.expect_zero, mu_enlarge_bound: cli.mu_enlarge_bound };
    let load = |f: &PathBuf| load(f, cli.max_group_order);
    match &cli.command {
        Command::Cohomology { file, module, degree } => commands::cohomology_cmd(&load(file)?, module.as_deref(), *degree, &flags),
        Command::Dual { file, module } => commands::dual_cmd(&load(file)?, module.as_deref()),
        Command::Sha { file, module, degree } => commands::sha_cmd(&load(file)?, module.as_deref(), *degree, &flags),
        Command::Model(ModelCommand::Check { file }) => commands::model_check(&load(file)?),
        Command::Model(ModelCommand::SearchInv { file }) => commands::model_search_inv(&load(file)?),
        Command::Gerbe(GerbeCommand::Class { file, extension }) => commands::gerbe_class(&load(file)?, extension.as_deref(), &flags),
        Command::Gerbe(GerbeCommand::LocalSections { file, extension }) => {
            commands::gerbe_local_sections(&load(file)?, extension.as_deref(), &flags)
        }
        Command::Gerbe(GerbeCommand::Brauer { file, extension }) => commands::gerbe_brauer(&load(file)?, extension.as_deref(), &flags),
        Command::Gerbe(GerbeCommand::Mh { file, extension }) => commands::gerbe_mh(&load(file)?, extension.as_deref(), &flags),
        Command::Verify(VerifyCommand::Thm41 { file, extension }) => commands::verify_thm41(&load(file)?, extension.as_deref()),
        Command::Run { file } => commands::run_tasks(&load(file)?, &flags),
        Command::Fixture { name } => fixture(name.as_deref()),
        Command::Dump { file } => {
            let spec = load(file)?.dump();
            Ok(Outcome { text: format!("{}\n", spec.to_json()), report: serde_json::to_value(&spec).expect("serializable document"), exit: 0 })
        }
        Command::Selftest => {
            let report = selftest::run(&Config { seed: cli.seed, ..Config::default() });
            Ok(Outcome {
                text: report.scoreboard(),
                exit: if report.passed { 0 } else { 1 },
                report: serde_json::to_value(&report).expect("serializable report"),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = dispatch(&cli).unwrap_or_else(error_outcome);
    match cli.output {
        Output::Json => println!("{}", canonical_json(&out.report)),
        Output::Text if out.report.get("error").is_some() => eprint!("{}", out.text),
        Output::Text => print!("{}", out.text),
    }
    ExitCode::from(out.exit as u8)
}
