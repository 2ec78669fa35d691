//! JSON REST service around the `netdiff-core` engine.
//!
//! An experiment is a token-keyed session holding one network and any number
//! of attached models. Clients create an experiment, provision a network,
//! attach models and then step them through the iterator endpoint. See
//! [`resources::CATALOGUE`] for the full route list.

mod api;
mod error;
pub mod exploratory;
pub mod network;
pub mod resources;
pub mod store;

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

pub use api::router;
pub use error::{ApiError, ApiResult};
use exploratory::Exploratory;
use store::{Clock, Store, SystemClock};

pub const DEFAULT_TTL: Duration = Duration::from_secs(3600);

#[derive(Clone, Debug)]
pub struct ServerConfig {
    pub listen: SocketAddr,
    pub ttl: Duration,
    /// Extra exploratory JSON files.
    pub exploratories: Option<PathBuf>,
    /// Write-through trajectory files, one directory per token.
    pub snapshots: Option<PathBuf>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig { listen: ([127, 0, 0, 1], 8080).into(), ttl: DEFAULT_TTL, exploratories: None, snapshots: None }
    }
}

pub(crate) struct Shared {
    pub store: Store,
    pub exploratories: BTreeMap<String, Exploratory>,
    pub snapshots: Option<PathBuf>,
}

#[derive(Clone)]
pub struct AppState(pub(crate) Arc<Shared>);

impl AppState {
    pub fn new(config: &ServerConfig) -> std::io::Result<Self> {
        Self::with_clock(config, Arc::new(SystemClock::new()))
    }

    pub fn with_clock(config: &ServerConfig, clock: Arc<dyn Clock>) -> std::io::Result<Self> {
        Ok(AppState(Arc::new(Shared {
            store: Store::new(config.ttl, clock),
            exploratories: exploratory::load(config.exploratories.as_deref())?,
            snapshots: config.snapshots.clone(),
        })))
    }

    pub fn store(&self) -> &Store {
        &self.0.store
    }

    /// Drops expired experiments along with their snapshot directories.
    pub fn purge_expired(&self) -> usize {
        let dead = self.0.store.purge_expired();
        for token in &dead {
            api::remove_snapshots(&self.0, token);
        }
        dead.len()
    }
}

/// Binds `config.listen` and serves until ctrl-c.
pub async fn serve(config: ServerConfig) -> std::io::Result<()> {
    let state = AppState::new(&config)?;
    let listener = tokio::net::TcpListener::bind(config.listen).await?;
    tracing::info!(addr = %listener.local_addr()?, ttl_s = config.ttl.as_secs(), "listening");
    let purger = state.clone();
    let period = (config.ttl / 4).clamp(Duration::from_secs(1), Duration::from_secs(60));
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(period);
        loop {
            tick.tick().await;
            let n = purger.purge_expired();
            if n > 0 {
                tracing::info!(expired = n, "purged experiments");
            }
        }
    });
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
