//! kp-lab: batch computations on higher-rank graphs and their Kumjian-Pask
//! algebras. Reports are deterministic JSON on stdout; exit code 0 means
//! success, 1 a violated property, 2 an input error, 3 an inconclusive
//! bounded search.

mod expr;
mod report;

use clap::{Parser, Subcommand};
use expr::{parse_path, ExprParser, ScalarLit};
use kp_core::algebra::{verify_kp_relations, AlgebraElem};
use kp_core::boundary::{is_aperiodic, is_cofinal, Aperiodicity};
use kp_core::bratteli::{build_bratteli, orders, parse_bratteli_spec, truncate_depth, MatrixAlgebraIso};
use kp_core::degree::Degree;
use kp_core::desourcify::build_truncated;
use kp_core::error::{KpError, Result};
use kp_core::graph::KGraph;
use kp_core::ideal::{enumerate_sat_her, IdealHandle, Verdict};
use kp_core::path::{min_common_ext, paths_le, paths_of_degree, Path};
use kp_core::rep::BoundaryRep;
use kp_core::ring::{Integers, Laurent, Mod, Rationals, Ring, RingKind};
use kp_core::textio::{parse_graph_spec, serialize_graph_spec};
use rand::{Rng, SeedableRng};
use report::*;
use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "kp-lab", version, about = "Kumjian-Pask algebra workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a graph file; optionally emit Graphviz.
    Validate {
        graph: String,
        /// print the colored graph in dot format instead of a report
        #[arg(long)]
        dot: bool,
        /// print the canonical serialization instead of a report
        #[arg(long)]
        canonical: bool,
    },
    /// Check graph predicates.
    Check {
        graph: String,
        #[arg(long)]
        local_convex: bool,
        #[arg(long)]
        aperiodic: bool,
        #[arg(long)]
        cofinal: bool,
        /// bound for the aperiodicity search, e.g. 3,3
        #[arg(long)]
        bound: Option<String>,
    },
    /// List vLambda^n or vLambda^{<=n}.
    Paths {
        graph: String,
        #[arg(long)]
        vertex: String,
        /// degree vector, e.g. 1,1
        #[arg(long)]
        degree: String,
        /// list the extension-blocking set instead of the exact-degree set
        #[arg(long)]
        le: bool,
    },
    /// Minimal common extensions of two paths.
    Minext {
        graph: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Evaluate an algebra expression to its normal form.
    Eval {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        ring: String,
        expr: String,
    },
    /// The lattice of saturated hereditary vertex sets.
    HsLattice { graph: String },
    /// Basic graded ideal membership.
    IdealMember {
        graph: String,
        #[arg(long)]
        ring: String,
        /// comma-separated generating vertices (saturated hereditary)
        #[arg(long)]
        set: String,
        #[arg(long)]
        expr: String,
    },
    /// Simplicity and basic simplicity.
    Simple {
        graph: String,
        #[arg(long)]
        ring: String,
        #[arg(long)]
        bound: Option<String>,
    },
    /// Materialize the desourcification up to an excess bound.
    Desourcify {
        graph: String,
        /// excess bound per color, e.g. 3,3
        #[arg(long)]
        bound: String,
    },
    /// Rank-2 Bratteli diagram commands.
    Bratteli {
        #[command(subcommand)]
        sub: BratteliCmd,
    },
    /// Differential test of the engine against the boundary-path
    /// representation.
    OracleDiff {
        graph: String,
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 6)]
        window: u32,
        #[arg(long, default_value_t = 50)]
        pairs: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// maximum degree of random paths, e.g. 2,2
        #[arg(long, default_value = "2,2")]
        max_degree: String,
    },
    /// Verify the defining relations up to a bound.
    VerifyRelations {
        graph: String,
        #[arg(long)]
        ring: String,
        #[arg(long, default_value = "2,2")]
        bound: String,
    },
}

#[derive(Subcommand)]
enum BratteliCmd {
    /// Build the 2-graph of a Bratteli spec and print it.
    Build {
        spec: String,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// The matrix-algebra image of the generators of a depth truncation.
    Iso {
        spec: String,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        ring: String,
    },
}

fn parse_degree(text: &str, rank: usize) -> Result<Degree> {
    let coords: Vec<u64> = text
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<u64>()
                .map_err(|_| KpError::Ring(format!("bad degree component '{c}'")))
        })
        .collect::<Result<_>>()?;
    if coords.len() != rank {
        return Err(KpError::Ring(format!(
            "degree '{text}' has {} components, rank is {rank}",
            coords.len()
        )));
    }
    Ok(Degree::from_u64s(&coords))
}

fn load_graph(path: &str) -> Result<Arc<KGraph>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| KpError::Ring(format!("cannot read {path}: {e}")))?;
    let spec = parse_graph_spec(&text)?;
    KGraph::build(&spec)
}

fn validate_threads_env() -> Result<Vec<String>> {
    let mut warnings = Vec::new();
    if let Ok(v) = std::env::var("KP_LAB_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| KpError::Ring(format!("KP_LAB_THREADS='{v}' is not a number")))?;
        if n == 0 {
            return Err(KpError::Ring("KP_LAB_THREADS must be positive".into()));
        }
        if n > 1 {
            warnings.push(
                "KP_LAB_THREADS accepted; output is deterministic regardless of thread count"
                    .to_string(),
            );
        }
    }
    Ok(warnings)
}

/// Dispatch a closure over the runtime-selected coefficient ring.
macro_rules! with_ring {
    ($kind:expr, $ring:ident => $body:expr) => {
        match &$kind {
            RingKind::Integers => {
                let $ring = Integers;
                $body
            }
            RingKind::Rationals => {
                let $ring = Rationals;
                $body
            }
            RingKind::Mod(n) => {
                let $ring = Mod::new(*n)?;
                $body
            }
            RingKind::LaurentRationals => {
                let $ring = Laurent::new(Rationals);
                $body
            }
            RingKind::LaurentMod(n) => {
                let $ring = Laurent::new(Mod::new(*n)?);
                $body
            }
        }
    };
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let warnings = validate_threads_env()?;
    match cli.command {
        Command::Validate {
            graph,
            dot,
            canonical,
        } => {
            let g = load_graph(&graph)?;
            if dot {
                print!("{}", to_dot(&g));
                return Ok(ExitCode::SUCCESS);
            }
            if canonical {
                print!("{}", serialize_graph_spec(&g.spec()));
                return Ok(ExitCode::SUCCESS);
            }
            let payload = ValidateReport {
                rank: g.rank(),
                vertices: g.vertex_count(),
                edges: g.edge_count(),
                squares: g.square_list().len(),
                locally_convex: g.is_locally_convex().is_ok(),
            };
            emit("validate", &g, warnings, &payload);
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            graph,
            local_convex,
            aperiodic,
            cofinal,
            bound,
        } => {
            let g = load_graph(&graph)?;
            let mut payload = CheckReport::default();
            let mut warn = warnings;
            let mut violated = false;
            let mut unknown = false;
            if local_convex {
                match g.is_locally_convex() {
                    Ok(()) => payload.local_convex = Some(PredicateOutcome::holds()),
                    Err(w) => {
                        violated = true;
                        payload.local_convex = Some(PredicateOutcome::fails(format!(
                            "witness vertex {} colors ({},{}) edges ({},{})",
                            g.vertex_name(w.vertex),
                            w.color_i + 1,
                            w.color_j + 1,
                            g.edge(w.lambda).name,
                            g.edge(w.mu).name
                        )));
                    }
                }
            }
            let bound = bound
                .map(|b| parse_degree(&b, g.rank()))
                .transpose()?;
            if aperiodic {
                match is_aperiodic(&g, bound.as_ref()) {
                    Aperiodicity::Yes(w) => {
                        payload.aperiodic = Some(PredicateOutcome::holds_with(format!(
                            "{} witnesses",
                            w.len()
                        )))
                    }
                    Aperiodicity::No {
                        vertex,
                        alpha,
                        beta,
                        witness,
                    } => {
                        violated = true;
                        payload.aperiodic = Some(PredicateOutcome::fails(format!(
                            "at {}: {} and {} glue onto {}",
                            g.vertex_name(vertex),
                            alpha.display(&g),
                            beta.display(&g),
                            witness.display(&g)
                        )));
                    }
                    Aperiodicity::Unknown(msg) => {
                        unknown = true;
                        payload.aperiodic = Some(PredicateOutcome::unknown(msg.clone()));
                        warn.push(msg);
                    }
                }
            }
            if cofinal {
                match is_cofinal(&g)? {
                    Ok(()) => payload.cofinal = Some(PredicateOutcome::holds()),
                    Err((x, v)) => {
                        violated = true;
                        payload.cofinal = Some(PredicateOutcome::fails(format!(
                            "vertex {} cannot reach {}",
                            g.vertex_name(v),
                            x.display(&g)
                        )));
                    }
                }
            }
            emit("check", &g, warn, &payload);
            Ok(exit_for(violated, unknown))
        }
        Command::Paths {
            graph,
            vertex,
            degree,
            le,
        } => {
            let g = load_graph(&graph)?;
            let v = g
                .vertex_by_name(&vertex)
                .ok_or(KpError::UnknownVertex(vertex))?;
            let n = parse_degree(&degree, g.rank())?;
            let set = if le {
                paths_le(&g, v, &n)
            } else {
                paths_of_degree(&g, v, &n)
            };
            let payload = PathsReport {
                count: set.len(),
                paths: set.iter().map(|p| p.display(&g)).collect(),
            };
            emit("paths", &g, warnings, &payload);
            Ok(ExitCode::SUCCESS)
        }
        Command::Minext { graph, left, right } => {
            let g = load_graph(&graph)?;
            let l = parse_path(&g, &left)?;
            let r = parse_path(&g, &right)?;
            let ext = min_common_ext(&g, &l, &r);
            let payload = MinextReport {
                count: ext.len(),
                pairs: ext
                    .iter()
                    .map(|(a, b)| (a.display(&g), b.display(&g)))
                    .collect(),
            };
            emit("minext", &g, warnings, &payload);
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { graph, ring, expr } => {
            let g = load_graph(&graph)?;
            let kind = RingKind::parse(&ring)?;
            with_ring!(kind, r => {
                let elem = ExprParser::parse(g.clone(), r.clone(), &expr)?;
                let payload = elem_report(&g, &r, &kind, &elem);
                emit("eval", &g, warnings, &payload);
            });
            Ok(ExitCode::SUCCESS)
        }
        Command::HsLattice { graph } => {
            let g = load_graph(&graph)?;
            let lat = enumerate_sat_her(&g);
            let payload = LatticeJson {
                sets: lat
                     .sets
                    .iter()
                    .map(|s| s.iter().map(|v| g.vertex_name(*v).to_string()).collect())
                    .collect(),
                hasse: lat.hasse.clone(),
            };
            emit("hs-lattice", &g, warnings, &payload);
            Ok(ExitCode::SUCCESS)
        }
        Command::IdealMember {
            graph,
            ring,
            set,
            expr,
        } => {
            let g = load_graph(&graph)?;
            let kind = RingKind::parse(&ring)?;
            let verts: BTreeSet<_> = set
                .split(',')
                .map(|n| {
                    g.vertex_by_name(n.trim())
                        .ok_or_else(|| KpError::UnknownVertex(n.trim().into()))
                })
                .collect::<Result<_>>()?;
            let handle = IdealHandle::new(g.clone(), verts)?;
            let member = with_ring!(kind, r => {
                let elem = ExprParser::parse(g.clone(), r.clone(), &expr)?;
                let member = handle.contains(&elem)?;
                let payload = MemberReport {
                    set: handle
                        .generators()
                        .iter()
                        .map(|v| g.vertex_name(*v).to_string())
                        .collect(),
                    member,
                    element: elem_report(&g, &r, &kind, &elem),
                };
                emit("ideal-member", &g, warnings, &payload);
                member
            });
            Ok(exit_for(!member, false))
        }
        Command::Simple { graph, ring, bound } => {
            let g = load_graph(&graph)?;
            let kind = RingKind::parse(&ring)?;
            let bound = bound.map(|b| parse_degree(&b, g.rank())).transpose()?;
            let (basic, verdict) = with_ring!(kind, r => {
                (
                    kp_core::ideal::is_basically_simple(&g, bound.as_ref())?,
                    kp_core::ideal::is_simple(&g, &r, bound.as_ref())?,
                )
            });
            let payload = SimpleReport {
                ring: kind.display(),
                basically_simple: verdict_json(&basic),
                simple: verdict_json(&verdict),
            };
            emit("simple", &g, warnings, &payload);
            let unknown = matches!(verdict, Verdict::Unknown(_));
            Ok(exit_for(matches!(verdict, Verdict::Fails(_)), unknown))
        }
        Command::Desourcify { graph, bound } => {
            let g = load_graph(&graph)?;
            let b = parse_degree(&bound, g.rank())?;
            let dsc = build_truncated(&g, &b)?;
            let missing = dsc.check_no_sources();
            let payload = DesourcifyReport {
                bound: bound.clone(),
                graph_text: serialize_graph_spec(&dsc.graph.spec()),
                vertex_table: dsc
                    .graph
                    .vertices()
                    .map(|v| {
                        let dv = dsc.dvertex(v);
                        VertexClass {
                            name: dsc.graph.vertex_name(v).to_string(),
                            base: g.vertex_name(dv.base).to_string(),
                            excess: format!("{}", dv.excess),
                        }
                    })
                    .collect(),
                iota: g
                    .vertices()
                    .map(|w| {
                        (
                            g.vertex_name(w).to_string(),
                            dsc.graph.vertex_name(dsc.iota_vertex(w)).to_string(),
                        )
                    })
                    .collect(),
                interior_sources: missing.clone(),
            };
            emit("desourcify", &g, warnings, &payload);
            Ok(exit_for(!missing.is_empty(), false))
        }
        Command::Bratteli { sub } => match sub {
            BratteliCmd::Build { spec, depth } => {
                let text = std::fs::read_to_string(&spec)
                    .map_err(|e| KpError::Ring(format!("cannot read {spec}: {e}")))?;
                let parsed = parse_bratteli_spec(&text)?;
                let built = match depth {
                    Some(d) => truncate_depth(&parsed, d)?,
                    None => build_bratteli(&parsed)?,
                };
                let payload = BratteliBuildReport {
                    depth: built.depth,
                    graph_text: serialize_graph_spec(&built.graph.spec()),
                    orders: orders(&parsed)?.into_iter().collect(),
                };
                emit("bratteli-build", &built.graph, warnings, &payload);
                Ok(ExitCode::SUCCESS)
            }
            BratteliCmd::Iso { spec, depth, ring } => {
                let text = std::fs::read_to_string(&spec)
                    .map_err(|e| KpError::Ring(format!("cannot read {spec}: {e}")))?;
                let parsed = parse_bratteli_spec(&text)?;
                let built = truncate_depth(&parsed, depth)?;
                let kind = match RingKind::parse(&ring)? {
                    RingKind::LaurentRationals => RingKind::Rationals,
                    RingKind::LaurentMod(n) => RingKind::Mod(n),
                    other => other,
                };
                with_ring!(kind, r => {
                    let iso = MatrixAlgebraIso::new(built.graph.clone(), r.clone())?;
                    let laurent = Laurent::new(r.clone());
                    let mut generators = Vec::new();
                    for v in built.graph.vertices() {
                        let a = AlgebraElem::gen_p(built.graph.clone(), r.clone(), v);
                        generators.push(GeneratorImage {
                            generator: format!("p({})", built.graph.vertex_name(v)),
                            matrix: matrix_json(&laurent, &iso.apply(&a)?),
                        });
                    }
                    for color in 0..built.graph.rank() {
                        for &e in built.graph.edges_of_color(color) {
                            let pth = Path::single_edge(&built.graph, e);
                            let a = AlgebraElem::gen_s(built.graph.clone(), r.clone(), &pth);
                            generators.push(GeneratorImage {
                                generator: format!("s({})", built.graph.edge(e).name),
                                matrix: matrix_json(&laurent, &iso.apply(&a)?),
                            });
                        }
                    }
                    let payload = BratteliIsoReport {
                        depth,
                        ring: format!("Laurent({})", kind.display()),
                        labels: iso.labels(),
                        generators,
                    };
                    emit("bratteli-iso", &built.graph, warnings, &payload);
                });
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::OracleDiff {
            graph,
            ring,
            window,
            pairs,
            seed,
            max_degree,
        } => {
            let g = load_graph(&graph)?;
            let kind = RingKind::parse(&ring)?;
            let maxd = parse_degree(&max_degree, g.rank())?;
            let mut payload = OracleDiffReport {
                pairs: pairs as usize,
                window,
                seed,
                additive_failures: 0,
                multiplicative_failures: 0,
                equality_failures: 0,
            };
            with_ring!(kind, r => {
                let rep = BoundaryRep::new(g.clone(), r.clone(), window)?;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..pairs {
                    let a = random_element(&mut rng, &g, &r, &maxd)?;
                    let b = random_element(&mut rng, &g, &r, &maxd)?;
                    let margin = rep.spread(&a) + rep.spread(&b);
                    let ma = rep.apply(&a)?;
                    let mb = rep.apply(&b)?;
                    let sum = a.add(&b)?;
                    if !rep.eq_on_interior(&rep.apply(&sum)?, &rep.matrix_add(&ma, &mb), margin) {
                        payload.additive_failures += 1;
                    }
                    let prod = a.mul(&b)?;
                    if !rep.eq_on_interior(&rep.apply(&prod)?, &rep.matrix_mul(&ma, &mb), margin) {
                        payload.multiplicative_failures += 1;
                    }
                    let engine_eq = a.equals(&b)?;
                    let oracle_eq = rep.equal_oracle(&a, &b)?;
                    if engine_eq != oracle_eq {
                        payload.equality_failures += 1;
                    }
                }
            });
            let bad = payload.additive_failures
                + payload.multiplicative_failures
                + payload.equality_failures;
            emit("oracle-diff", &g, warnings, &payload);
            Ok(exit_for(bad > 0, false))
        }
        Command::VerifyRelations { graph, ring, bound } => {
            let g = load_graph(&graph)?;
            let kind = RingKind::parse(&ring)?;
            let b = parse_degree(&bound, g.rank())?;
            let payload = with_ring!(kind, r => {
                let rep = verify_kp_relations(&g, &r, &b);
                RelationJson {
                    checked: rep.total_checked(),
                    failures: rep.failures.clone(),
                }
            });
            let bad = !payload.failures.is_empty();
            emit("verify-relations", &g, warnings, &payload);
            Ok(exit_for(bad, false))
        }
    }
}

fn exit_for(violated: bool, unknown: bool) -> ExitCode {
    if violated {
        ExitCode::from(1)
    } else if unknown {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}

/// A random normal-form element with a handful of spanning terms.
fn random_element<R: Ring + PartialEq + ScalarLit>(
    rng: &mut impl Rng,
    g: &Arc<KGraph>,
    ring: &R,
    maxd: &Degree,
) -> Result<AlgebraElem<R>> {
    // candidate ghost sides: extension-blocking paths below the bound
    let mut betas = Vec::new();
    for v in g.vertices() {
        betas.extend(paths_le(g, v, maxd));
    }
    let mut terms = Vec::new();
    let count = rng.gen_range(1..=3);
    for _ in 0..count {
        let beta = betas[rng.gen_range(0..betas.len())].clone();
        // a matching alpha shares the source
        let mut alphas = Vec::new();
        for v in g.vertices() {
            for m in kp_core::degree::degree_box(maxd) {
                for p in paths_of_degree(g, v, &m) {
                    if p.source(g) == beta.source(g) {
                        alphas.push(p);
                    }
                }
            }
        }
        let alpha = alphas[rng.gen_range(0..alphas.len())].clone();
        let coeff = ring.scalar(rng.gen_range(1..=4), None, None)?;
        terms.push((alpha, beta, coeff));
    }
    AlgebraElem::from_terms(g.clone(), ring.clone(), maxd.clone(), terms)
}

fn to_dot(g: &KGraph) -> String {
    let colors = ["blue", "red", "green", "orange", "purple"];
    let mut out = String::from("digraph kgraph {\n");
    for v in g.vertices() {
        out.push_str(&format!("  \"{}\";\n", g.vertex_name(v)));
    }
    for color in 0..g.rank() {
        for &e in g.edges_of_color(color) {
            let d = g.edge(e);
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\", color={}];\n",
                g.vertex_name(d.range),
                g.vertex_name(d.source),
                d.name,
                colors[color % colors.len()]
            ));
        }
    }
    out.push_str("}\n");
    out
}
