use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;

use clap::Parser;
use hre_service::{router, ServiceConfig};
use tracing_subscriber::EnvFilter;

#[derive(Parser)]
#[command(name = "hre-service", version, about = "HTTP API for HRE ranking")]
struct Opts {
    #[arg(long, env = "HRE_BIND", default_value = "127.0.0.1")]
    bind: IpAddr,
    #[arg(long, env = "HRE_PORT", default_value_t = 8080)]
    port: u16,
    /// Static UI assets served at `/`.
    #[arg(long, env = "HRE_ASSET_DIR")]
    asset_dir: Option<PathBuf>,
    /// Origin allowed by CORS; any origin when unset.
    #[arg(long, env = "HRE_UI_ORIGIN")]
    ui_origin: Option<String>,
    /// Enable the in-memory session store.
    #[arg(long, env = "HRE_SESSIONS")]
    sessions: bool,
}

#[tokio::main]
async fn main() -> std::io::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .init();
    let opts = Opts::parse();
    let config = ServiceConfig {
        ui_origin: opts.ui_origin,
        asset_dir: opts.asset_dir,
        sessions: opts.sessions,
    };
    let addr = SocketAddr::new(opts.bind, opts.port);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(%addr, sessions = config.sessions, "listening");
    axum::serve(listener, router(&config)).await
}
