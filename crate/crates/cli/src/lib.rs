//! Reports, file formats, and orchestration around the core engine: JSON
//! schemas for quivers, seeds, check reports and step traces, DOT export,
//! and a bounded worker pool for running independent checks.

use std::collections::BTreeMap;
use std::sync::mpsc;
use std::thread;

use serde::{Deserialize, Serialize};

use gcn_core::pit::{CheckReport, CheckStatus};
use gcn_core::plans::StepRecord;
use gcn_core::quiver::{Quiver, Seed, VertexLabel};
use gcn_core::scalar::Scalar;
use gcn_core::suites::{self, SuiteConfig};

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct VertexJson {
    pub label: String,
    pub d: usize,
    pub frozen: bool,
    pub isolated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variable: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ArrowJson {
    pub from: String,
    pub to: String,
    pub mult: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct StringJson {
    pub vertex: String,
    pub coefficients: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct QuiverJson {
    pub name: String,
    pub vertices: Vec<VertexJson>,
    pub arrows: Vec<ArrowJson>,
    pub opposite_pairs: Vec<(String, String)>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub strings: Vec<StringJson>,
}

/// Human-readable names of the variables attached to the quivers we emit.
pub fn variable_name(n: usize, label: VertexLabel) -> Option<String> {
    Some(match label {
        VertexLabel::Left(k, l) => format!("phi[{k},{l}]"),
        VertexLabel::Right(i, j) => format!("g[{i},{j}]"),
        VertexLabel::TMinus(k) => format!("f[{}]", 2 * k as usize - 1),
        VertexLabel::TPlus(k) => format!("f[{}]", 2 * k as usize),
        VertexLabel::A => format!("x[1,{n}]"),
        VertexLabel::B => String::from("det"),
        VertexLabel::C => format!("x[{n},1]"),
        VertexLabel::D => format!("g[{},{}]", n - 1, n - 1),
        VertexLabel::Coeff(r) => format!("c[{r}]"),
        VertexLabel::Zero => String::from("det"),
        VertexLabel::Custom(_) => return None,
    })
}

pub fn quiver_to_json(q: &Quiver, name: &str, n: usize, seed: Option<&Seed>) -> QuiverJson {
    let vertices = q
        .vertices()
        .map(|v| {
            let info = q.info(v);
            VertexJson {
                label: format!("{}", info.label),
                d: info.mult,
                frozen: info.frozen,
                isolated: info.isolated,
                variable: variable_name(n, info.label),
            }
        })
        .collect();
    let mut arrows = Vec::new();
    for v in q.vertices() {
        for u in q.vertices() {
            let c = q.arrows(v, u);
            if c > 0 {
                arrows.push(ArrowJson {
                    from: format!("{}", q.info(v).label),
                    to: format!("{}", q.info(u).label),
                    mult: c,
                });
            }
        }
    }
    let opposite_pairs = q
        .opposite_pairs
        .iter()
        .map(|&(a, b)| (format!("{}", q.info(a).label), format!("{}", q.info(b).label)))
        .collect();
    let strings = match seed {
        Some(s) => s
            .quiver
            .vertices()
            .filter_map(|v| {
                s.strings[v].as_ref().map(|st| StringJson {
                    vertex: format!("{}", s.quiver.info(v).label),
                    coefficients: st.coeffs.iter().map(|c| format!("{c}")).collect(),
                })
            })
            .collect(),
        None => Vec::new(),
    };
    QuiverJson { name: String::from(name), vertices, arrows, opposite_pairs, strings }
}

pub fn quiver_to_dot(q: &Quiver, name: &str, n: usize) -> String {
    gcn_core::quiver::to_dot(q, name, &|l| variable_name(n, l))
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ReportJson {
    pub name: String,
    pub n: usize,
    pub trials: usize,
    pub resamples: usize,
    pub status: String,
    pub degree_bound: u64,
    pub failure_bound: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_point: Option<String>,
}

pub fn report_json(r: &CheckReport) -> ReportJson {
    ReportJson {
        name: r.name.clone(),
        n: r.n,
        trials: r.trials,
        resamples: r.resamples,
        status: match r.status {
            CheckStatus::Pass => "pass".into(),
            CheckStatus::Fail => "fail".into(),
            CheckStatus::Inconclusive => "inconclusive".into(),
        },
        degree_bound: r.degree_bound,
        failure_bound: r.failure_bound.clone(),
        failing_point: r.failing_point.clone(),
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct StepJson {
    pub step: usize,
    pub vertex: String,
    pub relation: String,
    pub predicted: String,
    pub predicted_hash: String,
    pub produced_hash: String,
    pub ok: bool,
}

pub fn step_json(s: &StepRecord) -> StepJson {
    StepJson {
        step: s.index,
        vertex: s.vertex.clone(),
        relation: s.tag.as_str().into(),
        predicted: s.predicted.clone(),
        predicted_hash: format!("{:016x}", s.predicted_hash),
        produced_hash: format!("{:016x}", s.produced_hash),
        ok: s.ok,
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct OmegaJson {
    pub first: String,
    pub second: String,
    pub omega: String,
}

pub fn omega_json(n: usize, seed: u64) -> Vec<OmegaJson> {
    suites::omega_matrix(n, seed)
        .into_iter()
        .map(|(a, b, w)| OmegaJson { first: a, second: b, omega: format!("{w}") })
        .collect()
}

/// Omega matrix as CSV (pair per line).
pub fn omega_csv(n: usize, seed: u64) -> String {
    let mut s = String::from("first,second,omega\n");
    for (a, b, w) in suites::omega_matrix(n, seed) {
        s.push_str(&format!("{a},{b},{w}\n"));
    }
    s
}

/// Named suite runners for the CLI and the worker pool.
pub type SuiteFn = fn(&SuiteConfig) -> Vec<CheckReport>;

pub fn suite_by_name(name: &str) -> Option<SuiteFn> {
    Some(match name {
        "pullback-expressions" => suites::suite_pullback_expressions,
        "exchange" => suites::suite_exchange,
        "plucker-dj" => suites::suite_plucker_dj,
        "compatibility" => suites::suite_compatibility,
        "poisson-maps" => suites::suite_poisson_maps,
        "row-brackets" => suites::suite_row_brackets,
        "homogeneity" => suites::suite_homogeneity,
        "maps" => suites::suite_maps,
        "golden" => suites::suite_golden,
        "properties" => suites::suite_properties,
        _ => return None,
    })
}

pub const ALL_SUITES: &[&str] = &[
    "pullback-expressions",
    "exchange",
    "plucker-dj",
    "compatibility",
    "poisson-maps",
    "row-brackets",
    "homogeneity",
    "maps",
    "golden",
    "properties",
];

/// Run a set of suites on a bounded worker pool; results are keyed by
/// suite name so output order is deterministic.
pub fn run_suites_pooled(
    names: &[String],
    cfg: SuiteConfig,
    workers: usize,
) -> BTreeMap<String, Vec<CheckReport>> {
    let (tx, rx) = mpsc::channel::<(String, Vec<CheckReport>)>();
    let queue: Vec<String> = names.to_vec();
    let chunk = queue.len().div_ceil(workers.max(1));
    thread::scope(|scope| {
        for part in queue.chunks(chunk.max(1)) {
            let tx = tx.clone();
            let part = part.to_vec();
            scope.spawn(move || {
                for name in part {
                    if let Some(f) = suite_by_name(&name) {
                        let reports = f(&cfg);
                        let _ = tx.send((name, reports));
                    }
                }
            });
        }
        drop(tx);
    });
    let mut out = BTreeMap::new();
    while let Ok((name, reports)) = rx.recv() {
        out.insert(name, reports);
    }
    // The negative control runs with every full pass.
    out.entry(String::from("negative-control"))
        .or_insert_with(|| vec![suites::negative_control(&cfg)]);
    out
}

/// A deterministic generic sample for CLI commands.
pub fn sample_matrix(n: usize, seed: u64) -> gcn_core::matrix::ExactMatrix {
    let mut rng = gcn_core::pit::Rng::for_job(seed, "cli-sample");
    suites::generic_for_maps(&mut rng, n)
}

pub fn scalar_str(s: &Scalar) -> String {
    format!("{s}")
}
