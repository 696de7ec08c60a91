use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use graphpdp_core::graph::GraphFormat;
use graphpdp_core::matcher::DEFAULT_VARLEN_CAP;

#[derive(Debug, Parser)]
#[command(name = "graphpdp", version, about = "Graph-aware XACML policy decision point")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate every policy in a directory.
    Validate {
        #[arg(long)]
        policies: PathBuf,
    },
    /// Filter a source graph down to the entities named by the first Meta.
    BuildGraph {
        #[arg(long)]
        policies: PathBuf,
        #[arg(long)]
        source: PathBuf,
        #[arg(long, default_value = "json")]
        format: GraphFormat,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate one request and print the response.
    Eval {
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long)]
        request: PathBuf,
    },
    /// Print the Cypher intersection query for one rule and a request.
    EmitCypher {
        #[arg(long)]
        policies: PathBuf,
        #[arg(long)]
        request: PathBuf,
        #[arg(long)]
        rule: String,
    },
    /// Serve decisions over HTTP.
    Serve {
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    #[arg(long)]
    pub policies: PathBuf,
    /// A subset graph, used as is.
    #[arg(long, conflicts_with = "source", required_unless_present = "source")]
    pub graph: Option<PathBuf>,
    /// A source graph, filtered by the first Meta before use.
    #[arg(long)]
    pub source: Option<PathBuf>,
    /// Graph file format. For csv the path is a directory holding
    /// `vertices.csv` and `edges.csv`.
    #[arg(long, default_value = "json")]
    pub format: GraphFormat,
    #[arg(long, default_value_t = DEFAULT_VARLEN_CAP, value_parser = clap::value_parser!(u32).range(1..))]
    pub varlen_cap: u32,
}
