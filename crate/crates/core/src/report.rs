//! Serializable summary of a solve, shared by the command line and tests.

use serde::Serialize;

use crate::search::{HcpSolution, SolverParams};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamsRecord {
    pub label: String,
    pub preferred_ratio: f64,
    pub restarts: usize,
    pub bad_perturbations: usize,
    pub time_limit_secs: f64,
    pub workers: usize,
}

impl From<&SolverParams> for ParamsRecord {
    fn from(p: &SolverParams) -> Self {
        ParamsRecord {
            label: p.label(),
            preferred_ratio: p.preferred_ratio,
            restarts: p.max_initial_trees,
            bad_perturbations: p.max_bad_perturbations,
            time_limit_secs: p.time_limit.as_secs_f64(),
            workers: p.workers,
        }
    }
}

/// One solved instance. Wall-clock fields are optional so that records of
/// identical runs can be compared byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub hcn_estimate: usize,
    /// 1-based, like the instance files.
    pub added_edges: Vec<(usize, usize)>,
    pub path_count: usize,
    pub components: usize,
    pub seed: u64,
    pub params: ParamsRecord,
    pub restarts_used: usize,
    pub perturbations_used: usize,
    pub interrupted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_secs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_found_secs: Option<f64>,
}

impl ResultRecord {
    pub fn new(
        instance: &str,
        g: &crate::Graph,
        params: &SolverParams,
        sol: &HcpSolution,
        with_timing: bool,
    ) -> Self {
        ResultRecord {
            instance: instance.to_string(),
            n: g.n(),
            m: g.m(),
            hcn_estimate: sol.hcn_estimate,
            added_edges: sol.added_edges.iter().map(|e| (e.u + 1, e.v + 1)).collect(),
            path_count: sol.partition.path_count(),
            components: g.components().len(),
            seed: params.seed,
            params: params.into(),
            restarts_used: sol.restarts_used,
            perturbations_used: sol.perturbations_used,
            interrupted: sol.interrupted,
            elapsed_secs: with_timing.then_some(sol.elapsed.as_secs_f64()),
            first_found_secs: with_timing.then_some(sol.first_found.as_secs_f64()),
        }
    }
}
