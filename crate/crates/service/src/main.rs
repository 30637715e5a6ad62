use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use semascope_service::{start, ServiceConfig};

/// Serves parse, diff, table-of-contents and tag lookups over HTTP.
#[derive(Parser)]
#[command(name = "semascoped", version)]
struct Args {
    #[arg(long, default_value = "127.0.0.1:7878")]
    listen: SocketAddr,
    /// Tag store file; created when missing.
    #[arg(long, default_value = "semascope-tags.redb")]
    store: PathBuf,
    #[arg(long, default_value_t = 10 * 1024 * 1024, value_parser = clap::value_parser!(u64).range(1..))]
    max_body_bytes: u64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    timeout_secs: u64,
    /// Language registry file.
    #[arg(long, env = "SEMASCOPE_CONFIG")]
    config: Option<PathBuf>,
}

#[tokio::main]
async fn main() -> ExitCode {
    let args = Args::parse();
    let config = ServiceConfig {
        listen: args.listen,
        store_path: args.store,
        max_body_bytes: usize::try_from(args.max_body_bytes).unwrap_or(usize::MAX),
        timeout: Duration::from_secs(args.timeout_secs),
        registry_path: args.config,
    };
    let shutdown = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    let (addr, server) = match start(config, shutdown).await {
        Ok(started) => started,
        Err(e) => {
            eprintln!("semascoped: {e}");
            return ExitCode::FAILURE;
        }
    };
    // Tests and supervisors read the bound address from this line.
    println!("listening on {addr}");
    if let Err(e) = server.await {
        eprintln!("semascoped: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
