//! JSON report payloads. Field order is declaration order, so reports are
//! byte-stable across runs.

use kp_core::algebra::AlgebraElem;
use kp_core::graph::KGraph;
use kp_core::ideal::Verdict;
use kp_core::matrix::Matrix;
use kp_core::ring::{Laurent, Ring, RingKind};
use serde::Serialize;

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    schema: u32,
    command: &'a str,
    graph: &'a str,
    warnings: &'a [String],
    result: &'a T,
}

pub fn emit<T: Serialize>(command: &str, graph: &KGraph, warnings: Vec<String>, payload: &T) {
    let rep = Report {
        schema: 1,
        command,
        graph: graph.fingerprint(),
        warnings: &warnings,
        result: payload,
    };
    println!("{}", serde_json::to_string_pretty(&rep).expect("serializable"));
}

#[derive(Serialize)]
pub struct ValidateReport {
    pub rank: usize,
    pub vertices: usize,
    pub edges: usize,
    pub squares: usize,
    pub locally_convex: bool,
}

#[derive(Serialize)]
pub struct PredicateOutcome {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl PredicateOutcome {
    pub fn holds() -> Self {
        PredicateOutcome {
            verdict: "holds".into(),
            detail: None,
        }
    }
    pub fn holds_with(detail: String) -> Self {
        PredicateOutcome {
            verdict: "holds".into(),
            detail: Some(detail),
        }
    }
    pub fn fails(detail: String) -> Self {
        PredicateOutcome {
            verdict: "fails".into(),
            detail: Some(detail),
        }
    }
    pub fn unknown(detail: String) -> Self {
        PredicateOutcome {
            verdict: "unknown".into(),
            detail: Some(detail),
        }
    }
}

#[derive(Serialize, Default)]
pub struct CheckReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_convex: Option<PredicateOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aperiodic: Option<PredicateOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cofinal: Option<PredicateOutcome>,
}

#[derive(Serialize)]
pub struct PathsReport {
    pub count: usize,
    pub paths: Vec<String>,
}

#[derive(Serialize)]
pub struct MinextReport {
    pub count: usize,
    pub pairs: Vec<(String, String)>,
}

#[derive(Serialize)]
pub struct ElemJson {
    pub ring: String,
    pub level: String,
    pub terms: Vec<(String, String, String)>,
}

pub fn elem_report<R: Ring + PartialEq>(
    g: &KGraph,
    ring: &R,
    kind: &RingKind,
    elem: &AlgebraElem<R>,
) -> ElemJson {
    ElemJson {
        ring: kind.display(),
        level: format!("{}", elem.level()),
        terms: elem
            .terms()
            .iter()
            .map(|((a, b), r)| (a.display(g), b.display(g), ring.display(r)))
            .collect(),
    }
}

#[derive(Serialize)]
pub struct LatticeJson {
    pub sets: Vec<Vec<String>>,
    pub hasse: Vec<(usize, usize)>,
}

#[derive(Serialize)]
pub struct MemberReport {
    pub set: Vec<String>,
    pub member: bool,
    pub element: ElemJson,
}

#[derive(Serialize)]
pub struct SimpleReport {
    pub ring: String,
    pub basically_simple: VerdictJson,
    pub simple: VerdictJson,
}

#[derive(Serialize)]
pub struct VerdictJson {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

pub fn verdict_json(v: &Verdict) -> VerdictJson {
    match v {
        Verdict::Holds => VerdictJson {
            verdict: "holds".into(),
            detail: None,
        },
        Verdict::Fails(d) => VerdictJson {
            verdict: "fails".into(),
            detail: Some(d.clone()),
        },
        Verdict::Unknown(d) => VerdictJson {
            verdict: "unknown".into(),
            detail: Some(d.clone()),
        },
    }
}

#[derive(Serialize)]
pub struct VertexClass {
    pub name: String,
    pub base: String,
    pub excess: String,
}

#[derive(Serialize)]
pub struct DesourcifyReport {
    pub bound: String,
    pub graph_text: String,
    pub vertex_table: Vec<VertexClass>,
    pub iota: Vec<(String, String)>,
    pub interior_sources: Vec<String>,
}

#[derive(Serialize)]
pub struct BratteliBuildReport {
    pub depth: usize,
    pub graph_text: String,
    pub orders: Vec<(String, u64)>,
}

#[derive(Serialize)]
pub struct GeneratorImage {
    pub generator: String,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Serialize)]
pub struct BratteliIsoReport {
    pub depth: usize,
    pub ring: String,
    pub labels: Vec<String>,
    pub generators: Vec<GeneratorImage>,
}

pub fn matrix_json<R: Ring>(laurent: &Laurent<R>, m: &Matrix<Laurent<R>>) -> Vec<Vec<String>> {
    (0..m.size())
        .map(|r| {
            (0..m.size())
                .map(|c| laurent.display(m.at(r, c)))
                .collect()
        })
        .collect()
}

#[derive(Serialize)]
pub struct OracleDiffReport {
    pub pairs: usize,
    pub window: u32,
    pub seed: u64,
    pub additive_failures: usize,
    pub multiplicative_failures: usize,
    pub equality_failures: usize,
}

#[derive(Serialize, Default)]
pub struct RelationJson {
    pub checked: usize,
    pub failures: Vec<String>,
}
