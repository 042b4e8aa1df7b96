//! Command-line front end. Every subcommand yields an [`Outcome`]: rendered
//! output in the requested format plus the process exit code.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::corr::{hilbert, CorrMorphism, CorrespondenceJson, MorphismJson, PresentedCorrespondence};
use crate::error::{Error, Result};
use crate::graph::{enumerate_obstruction, k_theory, DirectedGraph, GraphJson, IntMatrix, ObstructionConfig};
use crate::labelled::{LabelledSpace, LabelledSpaceJson, SpaceOptions};
use crate::report::Report;
use crate::spheres::{self, build, mirror, SphereConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAILED_CHECK: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    /// Newline-delimited JSON records.
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "cstar-corr", version, about = "Exact checks for graph algebras, labelled spaces and C*-correspondences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed for randomized runs; every subcommand here is deterministic.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,
    /// Cap on the number of sets in an accommodating closure.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// K-theory of a graph algebra from a graph JSON file.
    Ktheory { file: PathBuf },
    /// Closure and resolving properties of a labelled space JSON file.
    LabelledCheck { file: PathBuf },
    /// Every sphere identity for rank n at truncation N.
    VerifySphere {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = SphereConfig::DEFAULT_TRUNC)]
        trunc: usize,
    },
    /// Sweep of candidate graphs for the two-sink K0 obstruction.
    Obstruction {
        #[arg(long, default_value_t = 5)]
        max_vertices: usize,
        #[arg(long, default_value_t = 1)]
        max_multiplicity: u32,
    },
    /// Checks a morphism file, or validates a correspondence file.
    CorrCheck { file: PathBuf },
    /// Writes a constructed object as JSON.
    Export {
        #[arg(value_enum)]
        object: Object,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = SphereConfig::DEFAULT_TRUNC)]
        trunc: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Object {
    /// The graph `M_n`.
    DiscGraph,
    /// The odd-sphere graph with edges `e_{i,j}`, `i ≤ j`.
    SphereGraph,
    LoopGraph,
    /// The correspondence `(X, A)` of `M_n`.
    XA,
    /// The truncated correspondence `(Y, B)`.
    YB,
    /// The correspondence `(Z, C)` of the odd-sphere graph.
    ZC,
    Psi,
    Omega,
    /// The restricted direct sum of `(X, A)` and `(Y, B)`.
    MirrorSum,
    /// The labelled space `(E_n, 𝓛, 𝓑)`.
    En,
    /// The isometric embedding `C → C^2`.
    HilbertEmbedding,
}

#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        Error::Budget(_) => EXIT_BUDGET,
        _ => EXIT_VALIDATION,
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| match Error::from(e) {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn report_outcome(rep: &Report, format: Format) -> Outcome {
    let output = match format {
        Format::Text => rep.text(),
        Format::Json => rep.to_ndjson(),
    };
    Outcome {
        output,
        code: if rep.all_passed() { EXIT_PASS } else { EXIT_FAILED_CHECK },
    }
}

fn matrix_text(m: &IntMatrix) -> String {
    let width = m
        .data
        .iter()
        .flatten()
        .map(|x| x.to_string().len())
        .chain(m.col_labels.iter().map(String::len))
        .max()
        .unwrap_or(1);
    let lw = m.row_labels.iter().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    let _ = write!(out, "  {:lw$} ", "");
    for c in &m.col_labels {
        let _ = write!(out, " {c:>width$}");
    }
    out.push('\n');
    for (label, row) in m.row_labels.iter().zip(&m.data) {
        let _ = write!(out, "  {label:lw$} ");
        for x in row {
            let _ = write!(out, " {:>width$}", x.to_string());
        }
        out.push('\n');
    }
    out
}

fn cmd_ktheory(file: &Path, format: Format) -> Result<Outcome> {
    let doc: GraphJson = parse(file)?;
    let g = DirectedGraph::from_json(&doc)?;
    let k = k_theory(&g);
    let output = match format {
        Format::Json => json_line(&k),
        Format::Text => {
            let diag: Vec<String> = k.snf_diagonal.iter().map(|d| d.to_string()).collect();
            format!(
                "{}\npresentation ({}):\n{}SNF diagonal: [{}]\n",
                k.text(),
                k.convention,
                matrix_text(&k.presentation),
                diag.join(", ")
            )
        }
    };
    Ok(Outcome { output, code: EXIT_PASS })
}

#[derive(Serialize)]
struct LabelledSummary {
    members: usize,
    atoms: usize,
    horizon: u32,
    left_resolving: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    left_resolving_witness: Option<crate::labelled::ResolvingWitness>,
    weakly_left_resolving: bool,
    pairs_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    weak_witness: Option<crate::labelled::WeakWitness>,
}

fn cmd_labelled_check(file: &Path, budget: Option<usize>, format: Format) -> Result<Outcome> {
    let doc: LabelledSpaceJson = parse(file)?;
    let graph = crate::labelled::LabelledGraph::from_json(&doc.graph)?;
    let gens = doc.family.iter().map(|s| graph.parse_set(s)).collect::<Result<Vec<_>>>()?;
    let space = LabelledSpace::with_options(graph, gens, &SpaceOptions { horizon: doc.horizon, budget })?;
    let (lr, lr_witness) = space.graph().is_left_resolving();
    let weak = space.is_weakly_left_resolving()?;
    let summary = LabelledSummary {
        members: space.members().len(),
        atoms: space.atoms().len(),
        horizon: space.horizon(),
        left_resolving: lr,
        left_resolving_witness: lr_witness,
        weakly_left_resolving: weak.holds,
        pairs_checked: weak.pairs_checked,
        weak_witness: weak.witness,
    };
    let output = match format {
        Format::Json => json_line(&summary),
        Format::Text => {
            let mut out = format!(
                "closure: {} sets, {} atoms (horizon {})\n",
                summary.members, summary.atoms, summary.horizon
            );
            let head = if lr { "left-resolving: true" } else { "not left-resolving" };
            let _ = writeln!(out, "{head}; weakly left-resolving: {}", weak.holds);
            if let Some(w) = &summary.left_resolving_witness {
                let _ = writeln!(out, "  {} receives two edges labelled {}", w.vertex, w.label);
            }
            if let Some(w) = &summary.weak_witness {
                let _ = writeln!(
                    out,
                    "  witness (A, B, a) = ({}, {}, {}): r(A,a) ∩ r(B,a) = {} but r(A ∩ B, a) = {}",
                    w.a, w.b, w.label, w.lhs, w.rhs
                );
            }
            out
        }
    };
    Ok(Outcome { output, code: EXIT_PASS })
}

fn cmd_verify_sphere(n: usize, trunc: usize, format: Format) -> Result<Outcome> {
    let rep = spheres::verify_sphere_suite(&SphereConfig::new(n, trunc)?)?;
    Ok(report_outcome(&rep, format))
}

fn cmd_obstruction(max_vertices: usize, max_multiplicity: u32, format: Format) -> Result<Outcome> {
    let cfg = ObstructionConfig {
        max_multiplicity,
        ..ObstructionConfig::new(max_vertices)
    };
    let rep = enumerate_obstruction(&cfg)?;
    let output = match format {
        Format::Json => json_line(&rep),
        Format::Text => {
            let mut out = format!("{}\n", rep.text());
            for s in &rep.by_size {
                let _ = writeln!(out, "  {} vertices: {} candidates, {} up to isomorphism", s.vertices, s.candidates, s.iso_classes);
            }
            for g in &rep.counterexamples {
                let _ = writeln!(out, "  counterexample: {}", serde_json::to_string(g).expect("serializable"));
            }
            out
        }
    };
    Ok(Outcome {
        output,
        code: if rep.holds() { EXIT_PASS } else { EXIT_FAILED_CHECK },
    })
}

/// Morphism checks render condition names as `(C1)` … `(C4)`.
fn morphism_text(rep: &Report) -> String {
    let mut out = format!("{}\n", rep.title);
    for (name, s) in rep.summary() {
        let shown = if name.len() == 2 && name.starts_with('C') { format!("({name})") } else { name };
        let verdict = if s.failed > 0 { "FAIL" } else { "pass" };
        let _ = writeln!(out, "  {shown}: {verdict} ({} passed, {} failed)", s.passed, s.failed);
        if let Some(w) = &s.first_failure {
            let _ = writeln!(out, "    witness: {w}");
        }
    }
    out
}

fn cmd_corr_check(file: &Path, format: Format) -> Result<Outcome> {
    let value: serde_json::Value = parse(file)?;
    if value.get("source").is_some() {
        let doc: MorphismJson = serde_json::from_value(value)?;
        let rep = CorrMorphism::from_json(&doc)?.check()?;
        return Ok(match format {
            Format::Json => report_outcome(&rep, format),
            Format::Text => Outcome {
                output: morphism_text(&rep),
                code: if rep.all_passed() { EXIT_PASS } else { EXIT_FAILED_CHECK },
            },
        });
    }
    let doc: CorrespondenceJson = serde_json::from_value(value)?;
    let c = PresentedCorrespondence::from_json(&doc)?;
    let v = c.validate();
    if !v.is_valid() {
        return Err(Error::invalid("correspondence", format!("{:?}", v.violations)));
    }
    let ka = c.kernel_and_jx()?;
    let a = c.algebra();
    let show = |xs: Vec<crate::algebra::AlgElement>| xs.iter().map(|e| a.display(e)).collect::<Vec<_>>();
    let mut rep = Report::new(format!("correspondence with {} generators, rank {}", c.generators().len(), c.dim()));
    rep.pass("axioms", "tables");
    rep.note(format!("ker φ atoms: {:?}", show(ka.kernel_elems())));
    rep.note(format!("J_X atoms: {:?}", show(ka.jx_elems())));
    Ok(report_outcome(&rep, format))
}

fn cmd_export(object: Object, n: usize, trunc: usize) -> Result<Outcome> {
    let cfg = SphereConfig::new(n, trunc)?;
    let output = match object {
        Object::DiscGraph => pretty(&build::build_disc_graph(&cfg).to_json()),
        Object::SphereGraph => pretty(&build::build_odd_sphere_graph(&cfg).to_json()),
        Object::LoopGraph => pretty(&build::loop_graph().to_json()),
        Object::XA => pretty(&build::build_x_a(&cfg)?.to_json()),
        Object::YB => pretty(&build::build_y_b(&cfg)?.to_json()),
        Object::ZC => pretty(&build::build_z_c(&cfg)?.to_json()),
        Object::Psi => pretty(&build::gluing_data(&cfg)?.psi.to_json()?),
        Object::Omega => pretty(&build::gluing_data(&cfg)?.omega.to_json()?),
        Object::MirrorSum => {
            let g = build::gluing_data(&cfg)?;
            pretty(&mirror::build_mirror_sum(&cfg, &g)?.sum.corr.to_json())
        }
        Object::En => pretty(&mirror::build_en_space(&cfg)?.to_json()),
        Object::HilbertEmbedding => pretty(&hilbert::isometric_embedding()?.to_json()?),
    };
    Ok(Outcome { output, code: EXIT_PASS })
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let f = cli.format;
    match &cli.command {
        Command::Ktheory { file } => cmd_ktheory(file, f),
        Command::LabelledCheck { file } => cmd_labelled_check(file, cli.budget, f),
        Command::VerifySphere { n, trunc } => cmd_verify_sphere(*n, *trunc, f),
        Command::Obstruction { max_vertices, max_multiplicity } => cmd_obstruction(*max_vertices, *max_multiplicity, f),
        Command::CorrCheck { file } => cmd_corr_check(file, f),
        Command::Export { object, n, trunc } => cmd_export(*object, *n, *trunc),
    }
}

/// Runs one invocation on a pool of `--jobs` workers. Errors become an
/// outcome carrying the message and the matching exit code.
pub fn run(cli: &Cli) -> Outcome {
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            return Outcome {
                output: format!("error: thread pool: {e}\n"),
                code: EXIT_VALIDATION,
            }
        }
    };
    pool.install(|| match dispatch(cli) {
        Ok(o) => o,
        Err(e) => Outcome {
            output: format!("error: {e}\n"),
            code: exit_code(&e),
        },
    })
}
