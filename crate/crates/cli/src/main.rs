use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use openbook_core::dsl::parse_spec;
use openbook_core::report::{run_command, to_json, Command, Flags, SeedOrder};

#[derive(Parser)]
#[command(name = "openbook", version, about = "Heegaard diagrams, hat Floer homology and contact classes of open books")]
struct Cli {
    /// Spec file, or `-` for stdin.
    spec: PathBuf,
    #[command(subcommand)]
    command: Cmd,
    /// Coefficient cap per region in triangle searches.
    #[arg(long, global = true, default_value_t = 4)]
    cap: i64,
    #[arg(long, global = true, default_value_t = openbook_core::diagram::DEFAULT_WINDING_BUDGET)]
    winding_budget: usize,
    #[arg(long, global = true, default_value_t = openbook_core::floer::DEFAULT_NICE_BUDGET)]
    nice_budget: usize,
    #[arg(long, global = true, value_enum, default_value_t = Order::Lex)]
    seed_order: Order,
    /// Monodromy for single-word commands; defaults to the first word.
    #[arg(long, global = true)]
    word: Option<String>,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Lex,
    Input,
}

#[derive(Subcommand)]
enum Cmd {
    Build,
    Admissibility,
    Homology,
    Contact,
    Comult { g: String, h: String },
    Monoid { words: Vec<String> },
    ExportJson,
    ExportDot,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("OPENBOOK_LOG")).init();
    let cli = Cli::parse();
    let text = if cli.spec.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(&cli.spec)
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", cli.spec.display());
            return ExitCode::from(2);
        }
    };
    let spec = match parse_spec(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let command = match cli.command {
        Cmd::Build => Command::Build,
        Cmd::Admissibility => Command::Admissibility,
        Cmd::Homology => Command::Homology,
        Cmd::Contact => Command::Contact,
        Cmd::Comult { g, h } => Command::Comult { g, h },
        Cmd::Monoid { words } => Command::Monoid { words },
        Cmd::ExportJson => Command::ExportJson,
        Cmd::ExportDot => Command::ExportDot,
    };
    let flags = Flags {
        cap: cli.cap,
        winding_budget: cli.winding_budget,
        nice_budget: cli.nice_budget,
        seed_order: match cli.seed_order {
            Order::Lex => SeedOrder::Lex,
            Order::Input => SeedOrder::Input,
        },
        word: cli.word,
    };
    log::info!("running {}", command.name());
    match run_command(&command, &spec, &flags) {
        Ok(out) => {
            match (&out.report, cli.json) {
                (Some(r), true) => print!("{}", to_json(r)),
                _ => print!("{}", out.body),
            }
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
