use serde::Serialize;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Endpoint {
    pub category: &'static str,
    pub method: &'static str,
    pub path: &'static str,
    pub description: &'static str,
}

const fn ep(category: &'static str, method: &'static str, path: &'static str, description: &'static str) -> Endpoint {
    Endpoint { category, method, path, description }
}

/// Every route the router serves, grouped by category.
pub const CATALOGUE: &[Endpoint] = &[
    ep("Experiments", "POST", "/api/experiment", "Create an empty experiment and return its token"),
    ep("Experiments", "DELETE", "/api/experiment", "Destroy the experiment named by `token` and its snapshot files"),
    ep("Experiments", "GET", "/api/experiment", "Describe the experiment: network summary and attached models (`?token=`)"),
    ep("Experiments", "GET", "/api/experiment/trajectory", "Trajectory JSON of one model so far (`?token=&model=`)"),
    ep("Experiments", "POST", "/api/experiment/reset", "Return selected models (default all) to iteration 0; `network: true` also drops the network and models"),
    ep("Exploratories", "GET", "/api/exploratories", "List packaged scenarios"),
    ep("Exploratories", "POST", "/api/exploratories/{id}", "Load a scenario's network and models into an empty experiment"),
    ep("Resources", "GET", "/api/resources", "This catalogue"),
    ep("Networks", "GET", "/api/networks", "List graph generators and accepted network sources"),
    ep("Networks", "PUT", "/api/networks", "Provision the network from `upload`, `generator`, `temporal` or `snapshots`"),
    ep("Models", "GET", "/api/models", "List registered models with statuses and parameters"),
    ep("Models", "PUT", "/api/models/{name}", "Attach a configured model; returns its instance id and seed"),
    ep("Iterators", "POST", "/api/iterators", "Advance selected models (default all) by `bunch` iterations (default 1)"),
];

pub const CATEGORIES: &[&str] = &["Experiments", "Exploratories", "Resources", "Networks", "Models", "Iterators"];
