use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use base64::engine::general_purpose::URL_SAFE_NO_PAD;
use base64::Engine as _;
use netdiff_core::engine::{Simulation, Topology};
use rand::RngCore;

use crate::error::{ApiError, ApiResult};

/// Monotonic time source; injectable so expiry can be tested without sleeping.
pub trait Clock: Send + Sync {
    fn now(&self) -> Duration;
}

pub struct SystemClock(Instant);

impl SystemClock {
    pub fn new() -> Self {
        SystemClock(Instant::now())
    }
}

impl Default for SystemClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for SystemClock {
    fn now(&self) -> Duration {
        self.0.elapsed()
    }
}

/// Clock that only moves when told to.
#[derive(Default)]
pub struct ManualClock(AtomicU64);

impl ManualClock {
    pub fn advance(&self, by: Duration) {
        self.0.fetch_add(by.as_millis() as u64, Ordering::SeqCst);
    }
}

impl Clock for ManualClock {
    fn now(&self) -> Duration {
        Duration::from_millis(self.0.load(Ordering::SeqCst))
    }
}

pub struct ModelSlot {
    pub name: String,
    pub sim: Simulation,
}

#[derive(Default)]
pub struct Experiment {
    pub network: Option<Arc<Topology>>,
    /// Keyed by numeric instance id; exposed as the decimal string.
    pub models: BTreeMap<u32, ModelSlot>,
    pub next_model: u32,
    pub exploratory: Option<String>,
}

impl Experiment {
    /// Ids named by `filter`, or every model when absent.
    pub fn select(&self, filter: Option<&[String]>) -> ApiResult<Vec<u32>> {
        match filter {
            None => Ok(self.models.keys().copied().collect()),
            Some(ids) => ids
                .iter()
                .map(|id| {
                    id.parse::<u32>()
                        .ok()
                        .filter(|k| self.models.contains_key(k))
                        .ok_or_else(|| ApiError::not_found(format!("no model with id `{id}` in this experiment")))
                })
                .collect(),
        }
    }
}

struct Entry {
    experiment: Arc<tokio::sync::Mutex<Experiment>>,
    last_touched: Duration,
}

/// Live experiments by token.
pub struct Store {
    ttl: Duration,
    clock: Arc<dyn Clock>,
    entries: Mutex<HashMap<String, Entry>>,
}

impl Store {
    pub fn new(ttl: Duration, clock: Arc<dyn Clock>) -> Self {
        Store { ttl, clock, entries: Mutex::new(HashMap::new()) }
    }

    pub fn ttl(&self) -> Duration {
        self.ttl
    }

    fn fresh_token() -> String {
        let mut bytes = [0u8; 16];
        rand::thread_rng().fill_bytes(&mut bytes);
        URL_SAFE_NO_PAD.encode(bytes)
    }

    pub fn create(&self) -> String {
        let now = self.clock.now();
        let mut entries = self.entries.lock().unwrap();
        loop {
            let token = Self::fresh_token();
            if !entries.contains_key(&token) {
                let experiment = Arc::new(tokio::sync::Mutex::new(Experiment::default()));
                entries.insert(token.clone(), Entry { experiment, last_touched: now });
                return token;
            }
        }
    }

    /// The experiment behind `token`, refreshing its expiry. Expired entries are dropped here.
    pub fn get(&self, token: &str) -> ApiResult<Arc<tokio::sync::Mutex<Experiment>>> {
        let now = self.clock.now();
        let mut entries = self.entries.lock().unwrap();
        match entries.get_mut(token) {
            Some(e) if now.saturating_sub(e.last_touched) <= self.ttl => {
                e.last_touched = now;
                Ok(Arc::clone(&e.experiment))
            }
            Some(_) => {
                entries.remove(token);
                Err(ApiError::invalid_token())
            }
            None => Err(ApiError::invalid_token()),
        }
    }

    pub fn remove(&self, token: &str) -> ApiResult<()> {
        self.get(token)?;
        self.entries.lock().unwrap().remove(token);
        Ok(())
    }

    /// Drops every expired experiment and returns their tokens.
    pub fn purge_expired(&self) -> Vec<String> {
        let now = self.clock.now();
        let mut entries = self.entries.lock().unwrap();
        let dead: Vec<String> = entries
            .iter()
            .filter(|(_, e)| now.saturating_sub(e.last_touched) > self.ttl)
            .map(|(t, _)| t.clone())
            .collect();
        for t in &dead {
            entries.remove(t);
        }
        dead
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
