use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::StatusCode;
use axum::routing::{get, post, put};
use axum::{Json, Router};
use netdiff_core::engine::{IterationDelta, ModelConfig, Simulation, Topology};
use netdiff_core::graph::generators::GENERATORS;
use netdiff_core::models::registry;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use tokio::sync::OwnedMutexGuard;

use crate::error::{ApiError, ApiResult};
use crate::network::{self, NetworkSpec};
use crate::resources::{CATALOGUE, CATEGORIES};
use crate::store::{Experiment, ModelSlot};
use crate::{AppState, Shared};

const BODY_LIMIT: usize = 256 << 20;

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/experiment", post(create).delete(destroy).get(describe))
        .route("/api/experiment/trajectory", get(trajectory))
        .route("/api/experiment/reset", post(reset))
        .route("/api/exploratories", get(list_exploratories))
        .route("/api/exploratories/{id}", post(load_exploratory))
        .route("/api/resources", get(resources))
        .route("/api/networks", get(list_networks).put(provision))
        .route("/api/models", get(list_models))
        .route("/api/models/{name}", put(attach))
        .route("/api/iterators", post(iterate))
        .layer(DefaultBodyLimit::max(BODY_LIMIT))
        .with_state(state)
}

fn parse<T: DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "parse_error", e.to_string()))
}

/// Runs CPU-bound work off the async workers.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> ApiResult<T> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError::internal(e.to_string()))?
}

async fn lock(shared: &Shared, token: &str) -> ApiResult<OwnedMutexGuard<Experiment>> {
    Ok(shared.store.get(token)?.lock_owned().await)
}

fn snapshot_dir(shared: &Shared, token: &str) -> Option<PathBuf> {
    shared.snapshots.as_ref().map(|d| d.join(token))
}

pub(crate) fn remove_snapshots(shared: &Shared, token: &str) {
    if let Some(dir) = snapshot_dir(shared, token) {
        if let Err(e) = std::fs::remove_dir_all(&dir) {
            if e.kind() != std::io::ErrorKind::NotFound {
                tracing::warn!(dir = %dir.display(), error = %e, "could not remove snapshots");
            }
        }
    }
}

fn write_snapshot(dir: &Option<PathBuf>, id: u32, sim: &Simulation) -> ApiResult<()> {
    let Some(dir) = dir else { return Ok(()) };
    std::fs::create_dir_all(dir)
        .and_then(|_| std::fs::write(dir.join(format!("{id}.trajectory.json")), sim.trajectory().to_json()))
        .map_err(|e| ApiError::internal(format!("snapshot write failed: {e}")))
}

fn token_of(query: &HashMap<String, String>, body: &Bytes) -> ApiResult<String> {
    if let Some(t) = query.get("token") {
        return Ok(t.clone());
    }
    #[derive(Deserialize)]
    struct TokenOnly {
        token: String,
    }
    if body.is_empty() {
        return Err(ApiError::bad_request("missing `token`"));
    }
    Ok(parse::<TokenOnly>(body)?.token)
}

fn model_summary(id: u32, slot: &ModelSlot) -> Value {
    let model = slot.sim.model();
    let statuses = model.meta().statuses;
    let counts: Map<String, Value> =
        statuses.iter().zip(&slot.sim.state().counts).map(|(s, &c)| ((*s).to_string(), json!(c))).collect();
    json!({
        "model_id": id.to_string(),
        "name": slot.name,
        "seed": slot.sim.seed(),
        "config": model.config(),
        "statuses": statuses,
        "time_unit": model.time_unit(),
        "iteration": slot.sim.state().iteration,
        "counts": counts,
    })
}

fn experiment_summary(token: &str, exp: &Experiment) -> Value {
    let models: Map<String, Value> =
        exp.models.iter().map(|(id, slot)| (id.to_string(), model_summary(*id, slot))).collect();
    json!({
        "token": token,
        "network": exp.network.as_deref().map(network::summary),
        "exploratory": exp.exploratory,
        "models": models,
    })
}

async fn create(State(state): State<AppState>) -> (StatusCode, Json<Value>) {
    let token = state.0.store.create();
    tracing::debug!(%token, "experiment created");
    (StatusCode::CREATED, Json(json!({ "token": token })))
}

async fn destroy(
    State(state): State<AppState>,
    Query(query): Query<HashMap<String, String>>,
    body: Bytes,
) -> ApiResult<Json<Value>> {
    let token = token_of(&query, &body)?;
    // Wait for in-flight work on this experiment before dropping it.
    let _guard = lock(&state.0, &token).await?;
    state.0.store.remove(&token)?;
    remove_snapshots(&state.0, &token);
    Ok(Json(json!({ "deleted": token })))
}

async fn describe(State(state): State<AppState>, Query(query): Query<HashMap<String, String>>) -> ApiResult<Json<Value>> {
    let token = token_of(&query, &Bytes::new())?;
    let exp = lock(&state.0, &token).await?;
    Ok(Json(experiment_summary(&token, &exp)))
}

async fn trajectory(State(state): State<AppState>, Query(query): Query<HashMap<String, String>>) -> ApiResult<Json<Value>> {
    let token = token_of(&query, &Bytes::new())?;
    let model = query.get("model").ok_or_else(|| ApiError::bad_request("missing `model`"))?;
    let exp = lock(&state.0, &token).await?;
    let id = exp.select(Some(std::slice::from_ref(model)))?[0];
    let traj = exp.models[&id].sim.trajectory();
    Ok(Json(serde_json::to_value(traj).map_err(|e| ApiError::internal(e.to_string()))?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ResetBody {
    token: String,
    #[serde(default)]
    models: Option<Vec<String>>,
    #[serde(default)]
    network: bool,
}

async fn reset(State(state): State<AppState>, body: Bytes) -> ApiResult<Json<Value>> {
    let req: ResetBody = parse(&body)?;
    let mut exp = lock(&state.0, &req.token).await?;
    if req.network {
        if req.models.is_some() {
            return Err(ApiError::bad_request("`network: true` resets every model; drop the `models` filter"));
        }
        *exp = Experiment::default();
        remove_snapshots(&state.0, &req.token);
        return Ok(Json(json!({ "reset": [], "network": null })));
    }
    let ids = exp.select(req.models.as_deref())?;
    let dir = snapshot_dir(&state.0, &req.token);
    blocking(move || {
        for &id in &ids {
            let slot = exp.models.get_mut(&id).expect("selected id exists");
            slot.sim.reset();
            write_snapshot(&dir, id, &slot.sim)?;
        }
        let reset: Vec<String> = ids.iter().map(u32::to_string).collect();
        Ok(Json(json!({ "reset": reset })))
    })
    .await
}

#[derive(Deserialize)]
struct NetworkBody {
    token: String,
    #[serde(flatten)]
    spec: NetworkSpec,
}

async fn provision(State(state): State<AppState>, body: Bytes) -> ApiResult<Json<Value>> {
    let req: NetworkBody = parse(&body)?;
    let mut exp = lock(&state.0, &req.token).await?;
    if exp.network.is_some() {
        return Err(ApiError::conflict("the experiment already has a network; reset with `network: true` first"));
    }
    let topology = blocking(move || Ok(req.spec.build()?)).await?;
    let summary = network::summary(&topology);
    exp.network = Some(Arc::new(topology));
    Ok(Json(summary))
}

async fn list_networks() -> Json<Value> {
    Json(json!({
        "generators": GENERATORS,
        "sources": ["upload", "generator", "temporal", "snapshots"],
    }))
}

async fn list_models() -> Json<Value> {
    let models: Vec<Value> = registry::all()
        .map(|d| {
            let mut v = serde_json::to_value(d.meta()).unwrap_or(Value::Null);
            v["example_config"] = json!(registry::example_config(d.meta().name));
            v
        })
        .collect();
    Json(json!({ "models": models }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AttachBody {
    token: String,
    #[serde(default)]
    config: ModelConfig,
}

/// Seeds drawn by the server stay below 2^53 so JSON clients read them back exactly.
fn draw_seed() -> u64 {
    rand::random::<u64>() >> 11
}

fn attach_one(topology: &Arc<Topology>, name: &str, mut config: ModelConfig) -> ApiResult<ModelSlot> {
    let seed = *config.seed.get_or_insert_with(draw_seed);
    let sim = Simulation::new(Arc::clone(topology), name, config, seed)?;
    Ok(ModelSlot { name: name.to_string(), sim })
}

async fn attach(State(state): State<AppState>, Path(name): Path<String>, body: Bytes) -> ApiResult<Json<Value>> {
    let req: AttachBody = parse(&body)?;
    if registry::get(&name).is_none() {
        return Err(netdiff_core::Error::UnknownModel(name).into());
    }
    let mut exp = lock(&state.0, &req.token).await?;
    let topology = exp
        .network
        .clone()
        .ok_or_else(|| ApiError::new(StatusCode::CONFLICT, "no_network", "provision a network before attaching models"))?;
    let slot = blocking(move || attach_one(&topology, &name, req.config)).await?;
    let id = exp.next_model;
    exp.next_model += 1;
    let summary = model_summary(id, &slot);
    exp.models.insert(id, slot);
    Ok(Json(summary))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IterateBody {
    token: String,
    #[serde(default)]
    models: Option<Vec<String>>,
    #[serde(default)]
    bunch: Option<usize>,
}

async fn iterate(State(state): State<AppState>, body: Bytes) -> ApiResult<Json<Value>> {
    let req: IterateBody = parse(&body)?;
    let mut exp = lock(&state.0, &req.token).await?;
    if exp.models.is_empty() {
        return Err(ApiError::new(StatusCode::CONFLICT, "no_models", "attach a model before iterating"));
    }
    let ids = exp.select(req.models.as_deref())?;
    let bunch = req.bunch.unwrap_or(1);
    if bunch == 0 {
        return Err(ApiError::bad_request("`bunch` must be at least 1"));
    }
    // Refuse up front so a failing request leaves every model untouched.
    for &id in &ids {
        let sim = &exp.models[&id].sim;
        if let Some(h) = sim.model().horizon() {
            if sim.state().iteration + bunch as u64 > h {
                return Err(netdiff_core::Error::Simulation(format!(
                    "model {id} has {} iterations left, {bunch} requested",
                    h.saturating_sub(sim.state().iteration)
                ))
                .into());
            }
        }
    }
    let dir = snapshot_dir(&state.0, &req.token);
    blocking(move || {
        let mut out = BTreeMap::<String, Vec<IterationDelta>>::new();
        for &id in &ids {
            let slot = exp.models.get_mut(&id).expect("selected id exists");
            out.insert(id.to_string(), slot.sim.iteration_bunch(bunch)?);
            write_snapshot(&dir, id, &slot.sim)?;
        }
        Ok(Json(json!({ "iterations": out })))
    })
    .await
}

async fn list_exploratories(State(state): State<AppState>) -> Json<Value> {
    let list: Vec<Value> = state
        .0
        .exploratories
        .values()
        .map(|e| {
            json!({
                "id": e.id,
                "description": e.description,
                "models": e.models.iter().map(|m| &m.name).collect::<Vec<_>>(),
            })
        })
        .collect();
    Json(json!({ "exploratories": list }))
}

async fn load_exploratory(State(state): State<AppState>, Path(id): Path<String>, body: Bytes) -> ApiResult<Json<Value>> {
    #[derive(Deserialize)]
    struct LoadBody {
        token: String,
    }
    let req: LoadBody = parse(&body)?;
    let scenario =
        state.0.exploratories.get(&id).cloned().ok_or_else(|| ApiError::not_found(format!("no exploratory `{id}`")))?;
    let mut exp = lock(&state.0, &req.token).await?;
    if exp.network.is_some() || !exp.models.is_empty() {
        return Err(ApiError::conflict("exploratories load into an empty experiment; reset with `network: true` first"));
    }
    // Build everything before touching the experiment so a failure leaves it empty.
    let (topology, slots) = blocking(move || {
        let topology = Arc::new(scenario.network.build()?);
        let slots = scenario
            .models
            .into_iter()
            .map(|m| attach_one(&topology, &m.name, m.config))
            .collect::<ApiResult<Vec<_>>>()?;
        Ok((topology, slots))
    })
    .await?;
    exp.network = Some(topology);
    for slot in slots {
        let id = exp.next_model;
        exp.next_model += 1;
        exp.models.insert(id, slot);
    }
    exp.exploratory = Some(id);
    Ok(Json(experiment_summary(&req.token, &exp)))
}

async fn resources() -> Json<Value> {
    let categories: Map<String, Value> = CATEGORIES
        .iter()
        .map(|c| (c.to_string(), json!(CATALOGUE.iter().filter(|e| e.category == *c).collect::<Vec<_>>())))
        .collect();
    Json(json!({ "categories": categories }))
}
