//! Compartmental epidemic models: SI, SIS, SIR, SEIS, SEIR and SWIR.
//!
//! Infection is per contact: each infected in-neighbour is an independent
//! trial with probability `beta`, so a susceptible node with `k` infected
//! in-neighbours is infected with probability `1 - (1 - beta)^k`. A node that
//! changes compartment in iteration `t` is first eligible for its next
//! transition in iteration `t + 1`.

use super::{
    any_success, ModelDefinition, ModelMeta, ParamScope, ParamSpec, ResolvedParams, Rule, Schedule, Status,
    StepContext, TopologyKind,
};
use crate::engine::Topology;
use crate::graph::NodeId;
use crate::{Error, Result};

const S: Status = 0;

pub(crate) const BETA: ParamSpec =
    ParamSpec::probability("beta", ParamScope::Model, "infection probability per infected contact");
pub(crate) const GAMMA: ParamSpec = ParamSpec::probability("gamma", ParamScope::Model, "removal probability I -> R");
pub(crate) const LAMBDA: ParamSpec =
    ParamSpec::probability("lambda", ParamScope::Model, "re-susceptibility probability I -> S");
const EPSILON: ParamSpec = ParamSpec::probability("epsilon", ParamScope::Model, "incubation probability E -> I");
const KAPPA: ParamSpec = ParamSpec::probability("kappa", ParamScope::Model, "S -> I probability per infected contact");
const MU: ParamSpec = ParamSpec::probability("mu", ParamScope::Model, "S -> W probability per infected contact");
const NU: ParamSpec = ParamSpec::probability("nu", ParamScope::Model, "W -> I probability per infected contact");

/// Shared kernel of the S(E)I{S,R} family.
#[derive(Clone, Debug)]
pub(crate) struct Compartmental {
    beta: f64,
    infected: Status,
    exposed: Option<(Status, f64)>,
    /// Exit transition of the infected compartment and its probability.
    exit: Option<(Status, f64)>,
}

impl Compartmental {
    pub(crate) fn si(beta: f64) -> Self {
        Compartmental { beta, infected: 1, exposed: None, exit: None }
    }

    pub(crate) fn sis(beta: f64, lambda: f64) -> Self {
        Compartmental { beta, infected: 1, exposed: None, exit: Some((S, lambda)) }
    }

    pub(crate) fn sir(beta: f64, gamma: f64) -> Self {
        Compartmental { beta, infected: 1, exposed: None, exit: Some((2, gamma)) }
    }

    fn seis(beta: f64, epsilon: f64, lambda: f64) -> Self {
        Compartmental { beta, infected: 2, exposed: Some((1, epsilon)), exit: Some((S, lambda)) }
    }

    fn seir(beta: f64, epsilon: f64, gamma: f64) -> Self {
        Compartmental { beta, infected: 2, exposed: Some((1, epsilon)), exit: Some((3, gamma)) }
    }
}

impl Rule for Compartmental {
    fn schedule(&self) -> Schedule {
        Schedule::Synchronous { stochastic: true }
    }

    #[inline]
    fn node_update(&self, ctx: &StepContext<'_>, node: NodeId, u: f64) -> Option<Status> {
        let status = ctx.statuses[node as usize];
        if status == S {
            if self.beta <= 0.0 {
                return None;
            }
            let k = ctx.count_in(node, self.infected);
            return (u < any_success(self.beta, k)).then(|| self.exposed.map_or(self.infected, |(e, _)| e));
        }
        if status == self.infected {
            return self.exit.and_then(|(to, p)| (u < p).then_some(to));
        }
        match self.exposed {
            Some((e, epsilon)) if status == e => (u < epsilon).then_some(self.infected),
            _ => None,
        }
    }
}

macro_rules! compartmental_model {
    ($ty:ident, $meta:ident, $name:literal, $desc:literal, [$($status:literal),+], $seed:expr, [$($param:expr),+], |$p:ident| $build:expr) => {
        pub struct $ty;

        pub static $meta: ModelMeta = ModelMeta {
            name: $name,
            description: $desc,
            statuses: &[$($status),+],
            seed_status: Some($seed),
            params: &[$($param),+],
            topology: TopologyKind::Static,
            micro: false,
        };

        impl ModelDefinition for $ty {
            fn meta(&self) -> &ModelMeta {
                &$meta
            }

            fn build(&self, _topology: &Topology, $p: &ResolvedParams) -> Result<Box<dyn Rule>> {
                Ok(Box::new($build))
            }
        }
    };
}

compartmental_model!(
    SiModel, SI_META, "SI", "S -> I on infected contact",
    ["Susceptible", "Infected"], 1, [BETA],
    |p| Compartmental::si(p.get("beta"))
);
compartmental_model!(
    SisModel, SIS_META, "SIS", "S -> I -> S",
    ["Susceptible", "Infected"], 1, [BETA, LAMBDA],
    |p| Compartmental::sis(p.get("beta"), p.get("lambda"))
);
compartmental_model!(
    SirModel, SIR_META, "SIR", "S -> I -> R",
    ["Susceptible", "Infected", "Removed"], 1, [BETA, GAMMA],
    |p| Compartmental::sir(p.get("beta"), p.get("gamma"))
);
compartmental_model!(
    SeisModel, SEIS_META, "SEIS", "S -> E -> I -> S",
    ["Susceptible", "Exposed", "Infected"], 2, [BETA, EPSILON, LAMBDA],
    |p| Compartmental::seis(p.get("beta"), p.get("epsilon"), p.get("lambda"))
);
compartmental_model!(
    SeirModel, SEIR_META, "SEIR", "S -> E -> I -> R",
    ["Susceptible", "Exposed", "Infected", "Removed"], 2, [BETA, EPSILON, GAMMA],
    |p| Compartmental::seir(p.get("beta"), p.get("epsilon"), p.get("gamma"))
);

const W: Status = 1;
const I: Status = 2;
const R: Status = 3;

/// SWIR: each infected contact of a susceptible node is a single draw that
/// yields I with `kappa`, W with `mu`, or nothing. A weakened node turns
/// infected with `nu` per infected contact. Infected nodes are removed after
/// one iteration.
#[derive(Clone, Debug)]
struct Swir {
    kappa: f64,
    mu: f64,
    nu: f64,
}

impl Rule for Swir {
    fn schedule(&self) -> Schedule {
        Schedule::Synchronous { stochastic: true }
    }

    fn node_update(&self, ctx: &StepContext<'_>, node: NodeId, u: f64) -> Option<Status> {
        match ctx.statuses[node as usize] {
            S => {
                let k = ctx.count_in(node, I);
                if k == 0 {
                    return None;
                }
                // With k contacts: P(some contact gives I) = 1-(1-kappa)^k,
                // P(no I but some W) = (1-kappa)^k - (1-kappa-mu)^k.
                if u < any_success(self.kappa, k) {
                    Some(I)
                } else if u < any_success(self.kappa + self.mu, k) {
                    Some(W)
                } else {
                    None
                }
            }
            W => {
                let k = ctx.count_in(node, I);
                (u < any_success(self.nu, k)).then_some(I)
            }
            I => Some(R),
            _ => None,
        }
    }
}

pub struct SwirModel;

pub static SWIR_META: ModelMeta = ModelMeta {
    name: "SWIR",
    description: "S -> I -> R and S -> W -> I -> R",
    statuses: &["Susceptible", "Weakened", "Infected", "Removed"],
    seed_status: Some(I),
    params: &[KAPPA, MU, NU],
    topology: TopologyKind::Static,
    micro: false,
};

impl ModelDefinition for SwirModel {
    fn meta(&self) -> &ModelMeta {
        &SWIR_META
    }

    fn build(&self, _topology: &Topology, p: &ResolvedParams) -> Result<Box<dyn Rule>> {
        let (kappa, mu, nu) = (p.get("kappa"), p.get("mu"), p.get("nu"));
        if kappa + mu > 1.0 + 1e-12 {
            return Err(Error::config("model_params.mu", format!("kappa + mu must not exceed 1 (got {})", kappa + mu)));
        }
        Ok(Box::new(Swir { kappa, mu, nu }))
    }
}
