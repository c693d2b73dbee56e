use clap::{Parser, Subcommand};
use merit_cli::{commands, server};
use merit_core::{EngineConfig, EventStore};
use std::net::SocketAddr;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "merit",
    version,
    about = "Reputation engine for collaborative article publishing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Serve the HTTP API over an event log
    Serve {
        /// Event log path; created if missing
        #[arg(long)]
        log: PathBuf,
        /// TOML config file
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the configured listen port (0 picks a free one)
        #[arg(long)]
        port: Option<u16>,
    },
    /// Replay an event log and print the resulting balances
    Replay {
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Pick the genuinely improved versions from a history document
    Select {
        /// History JSON file, `-` for stdin
        #[arg(long)]
        history: PathBuf,
    },
    /// Preview the publication point split for a history document
    Allocate {
        /// History JSON file, `-` for stdin
        #[arg(long)]
        history: PathBuf,
        /// Engagement threshold, e.g. "1/2" or "0.5"
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Recommend accepting or rejecting a publish request
    Review {
        /// History JSON file, `-` for stdin
        #[arg(long)]
        history: PathBuf,
        /// The version the request asks to publish
        #[arg(long)]
        index: usize,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Serve { log, config, port } => {
            tracing_subscriber::fmt()
                .with_writer(std::io::stderr)
                .init();
            let config = EngineConfig::load(config.as_deref())?;
            let mut listen: SocketAddr = config.service.listen.parse().map_err(|_| {
                anyhow::anyhow!("invalid listen address `{}`", config.service.listen)
            })?;
            if let Some(port) = port {
                listen.set_port(port);
            }
            let store = EventStore::open(&log, config)?;
            let runtime = tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()?;
            runtime.block_on(server::run(store, listen))
        }
        Command::Replay { log, config } => {
            println!("{}", commands::run_replay(&log, config.as_deref())?);
            Ok(())
        }
        Command::Select { history } => {
            println!("{}", commands::run_select(&history)?);
            Ok(())
        }
        Command::Allocate {
            history,
            epsilon,
            config,
        } => {
            println!(
                "{}",
                commands::run_allocate(&history, epsilon.as_deref(), config.as_deref())?
            );
            Ok(())
        }
        Command::Review { history, index } => {
            println!("{}", commands::run_review(&history, index)?);
            Ok(())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("{}", serde_json::json!({ "error": format!("{err:#}") }));
        std::process::exit(1);
    }
}
