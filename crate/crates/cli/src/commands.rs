use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use ehf_core::coloring::{audit_nice_order, color_graph, SpecialLabels};
use ehf_core::detect::{
    classify_basic, find_clique_cutset, find_even_hole, find_star_cutset, BasicKind, HoleWitness,
    StarCutsetWitness,
};
use ehf_core::generators::{
    generate_corpus, long_pyramid, random_extended_basic, tight_chromatic_graph,
    unbounded_cwd_graph, NamedGraph,
};
use ehf_core::oracle::{
    brute_chromatic, brute_has_even_hole, brute_rank_width, brute_star_cutset, OracleBudget,
};
use ehf_core::rankdec::{decomposition_width, rank_decomposition, RankDecompositionReport};
use ehf_core::twojoin::{audit_tree, build_decomposition_tree, DecompView};
use ehf_core::Graph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::io::{write_edge_list, GraphFile};

#[derive(Clone, Copy, Debug, Default)]
pub struct Flags {
    pub verify: bool,
    pub oracle: bool,
}

/// Exit status of a successful run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    InClass,
    OutOfClass,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::InClass => 0,
            Status::OutOfClass => 2,
        }
    }
}

/// JSON for standard output plus a one-line summary for standard error.
#[derive(Debug)]
pub struct Outcome {
    pub status: Status,
    pub report: Value,
    pub summary: String,
}

fn budget() -> Result<OracleBudget> {
    Ok(OracleBudget::from_env()?)
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub name: Option<String>,
    pub n: usize,
    pub m: usize,
    pub connected: bool,
    pub even_hole_free: bool,
    pub even_hole: Option<HoleWitness>,
    /// `None` when the graph is disconnected.
    pub star_cutset: Option<StarCutsetWitness>,
    pub clique_cutset: Option<StarCutsetWitness>,
    pub basic_kind: BasicKind,
    pub in_class: bool,
    /// Which test excludes the graph from the class.
    pub failing: Option<&'static str>,
}

pub fn check_report(f: &GraphFile, flags: Flags) -> Result<CheckReport> {
    let g = &f.graph;
    let connected = g.is_connected();
    let even_hole = find_even_hole(g)?;
    let (star, clique) = if connected && g.n() > 0 {
        (find_star_cutset(g)?, find_clique_cutset(g)?)
    } else {
        (None, None)
    };
    if flags.verify {
        if let Some(h) = &even_hole {
            ensure!(
                h.is_valid(g) && h.cycle.len() % 2 == 0,
                "invalid even hole witness {:?}",
                h.cycle
            );
        }
        for w in star.iter().chain(&clique) {
            ensure!(
                w.is_valid(g),
                "invalid cutset witness centered at {}",
                w.center
            );
        }
        if let Some(w) = &clique {
            ensure!(g.is_clique(&w.set), "clique cutset witness is not a clique");
        }
    }
    if flags.oracle {
        let b = budget()?;
        let slow = brute_has_even_hole(g, &b)?;
        ensure!(
            slow == even_hole.is_some(),
            "even hole detector disagrees with the oracle"
        );
        if connected && g.n() > 0 {
            let slow = brute_star_cutset(g, &b)?;
            ensure!(
                slow.is_some() == star.is_some(),
                "star cutset detector disagrees with the oracle"
            );
        }
    }
    let failing = if !connected {
        Some("connected")
    } else if even_hole.is_some() {
        Some("even_hole_free")
    } else if star.is_some() {
        Some("star_cutset")
    } else {
        None
    };
    Ok(CheckReport {
        name: f.name.clone(),
        n: g.n(),
        m: g.edge_count(),
        connected,
        even_hole_free: even_hole.is_none(),
        even_hole,
        star_cutset: star,
        clique_cutset: clique,
        basic_kind: classify_basic(g),
        in_class: failing.is_none(),
        failing,
    })
}

fn label(f: &GraphFile) -> String {
    f.name
        .clone()
        .unwrap_or_else(|| format!("graph on {} vertices", f.graph.n()))
}

pub fn check(f: &GraphFile, flags: Flags) -> Result<Outcome> {
    let r = check_report(f, flags)?;
    let summary = match r.failing {
        None => format!("{}: in class ({})", label(f), r.basic_kind.tag()),
        Some(why) => format!("{}: out of class ({why})", label(f)),
    };
    Ok(Outcome {
        status: if r.in_class {
            Status::InClass
        } else {
            Status::OutOfClass
        },
        report: serde_json::to_value(&r)?,
        summary,
    })
}

/// Runs the class test; `Err(outcome)` reports an out-of-class graph.
fn require_class(f: &GraphFile, flags: Flags) -> Result<std::result::Result<(), Outcome>> {
    let r = check_report(
        f,
        Flags {
            oracle: false,
            ..flags
        },
    )?;
    if r.in_class {
        return Ok(Ok(()));
    }
    let why = r.failing.unwrap_or("unknown");
    Ok(Err(Outcome {
        status: Status::OutOfClass,
        summary: format!("{}: out of class ({why})", label(f)),
        report: json!({ "name": f.name, "in_class": false, "failing": why, "check": r }),
    }))
}

pub fn color(f: &GraphFile, flags: Flags) -> Result<Outcome> {
    if let Err(out) = require_class(f, flags)? {
        return Ok(out);
    }
    let g = &f.graph;
    let r = color_graph(g)?;
    ensure!(
        r.colors_used <= r.bound,
        "used {} colors, above the bound {}",
        r.colors_used,
        r.bound
    );
    if flags.verify {
        audit_nice_order(g, &SpecialLabels::empty(g.n()), &r.order.0)?;
        ensure!(r.coloring.is_proper(g), "coloring is not proper");
    }
    let chromatic = if flags.oracle {
        Some(brute_chromatic(g, &budget()?)?)
    } else {
        None
    };
    if let Some(chi) = chromatic {
        ensure!(
            chi <= r.colors_used,
            "oracle chromatic number {chi} exceeds the coloring"
        );
    }
    let summary = format!(
        "{}: {} colors, omega {}, bound {}",
        label(f),
        r.colors_used,
        r.omega,
        r.bound
    );
    let mut report = serde_json::to_value(&r)?;
    report["name"] = json!(f.name);
    report["chromatic_number"] = json!(chromatic);
    Ok(Outcome {
        status: Status::InClass,
        report,
        summary,
    })
}

#[derive(Debug, Serialize)]
struct RankReport {
    name: Option<String>,
    n: usize,
    decomposition: RankDecompositionReport,
    rank_width: Option<usize>,
}

pub fn rankdec(f: &GraphFile, flags: Flags, dot: Option<&Path>) -> Result<Outcome> {
    if let Err(out) = require_class(f, flags)? {
        return Ok(out);
    }
    let g = &f.graph;
    let d = rank_decomposition(g)?;
    let report = d.report(g);
    ensure!(
        report.width <= 3,
        "decomposition has width {}",
        report.width
    );
    if flags.verify {
        ensure!(
            decomposition_width(g, &d)? == report.width,
            "width mismatch"
        );
    }
    let rank_width = if flags.oracle {
        Some(brute_rank_width(g, &budget()?)?)
    } else {
        None
    };
    if let Some(rw) = rank_width {
        ensure!(
            rw <= report.width,
            "oracle rank-width {rw} exceeds the decomposition"
        );
    }
    if let Some(path) = dot {
        std::fs::write(path, d.to_dot(g)).with_context(|| format!("writing {}", path.display()))?;
    }
    let summary = format!("{}: rank-decomposition of width {}", label(f), report.width);
    let r = RankReport {
        name: f.name.clone(),
        n: g.n(),
        decomposition: report,
        rank_width,
    };
    Ok(Outcome {
        status: Status::InClass,
        report: serde_json::to_value(&r)?,
        summary,
    })
}

#[derive(Debug, Serialize)]
struct DecomposeReport {
    name: Option<String>,
    depth: usize,
    leaves: usize,
    tree: DecompView,
}

pub fn decompose(f: &GraphFile, flags: Flags) -> Result<Outcome> {
    if let Err(out) = require_class(f, flags)? {
        return Ok(out);
    }
    let t = build_decomposition_tree(&f.graph)?;
    if flags.verify {
        if let Err(e) = audit_tree(&t) {
            bail!("decomposition tree audit failed: {e}");
        }
    }
    let r = DecomposeReport {
        name: f.name.clone(),
        depth: t.depth(),
        leaves: t.leaves().len(),
        tree: t.view(),
    };
    let summary = format!(
        "{}: decomposition tree of depth {} with {} leaves",
        label(f),
        r.depth,
        r.leaves
    );
    Ok(Outcome {
        status: Status::InClass,
        report: serde_json::to_value(&r)?,
        summary,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    /// Tight family for the coloring bound; needs --k >= 3.
    Tight,
    /// Cycle of cliques; needs an even --k >= 4.
    Cwd,
    /// Long pyramid; needs --lengths a,b,c.
    Pyramid,
    /// Random extended basic graph; uses --branches and --seed.
    Extended,
    /// Seeded corpus of composed graphs; uses --count, --min, --max, --seed.
    Corpus,
}

#[derive(Clone, Debug)]
pub struct GenerateParams {
    pub family: Family,
    pub k: Option<usize>,
    pub lengths: Vec<usize>,
    pub branches: usize,
    pub count: usize,
    pub min: usize,
    pub max: usize,
    pub seed: u64,
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
struct Written {
    name: String,
    n: usize,
    m: usize,
    graph_file: PathBuf,
    names_file: Option<PathBuf>,
}

fn write_graph(out: &Path, name: &str, g: &Graph, names: Option<&[String]>) -> Result<Written> {
    let graph_file = out.join(format!("{name}.txt"));
    let text = write_edge_list(&GraphFile::new(Some(name.to_string()), g.clone()));
    std::fs::write(&graph_file, text)
        .with_context(|| format!("writing {}", graph_file.display()))?;
    let names_file = match names {
        Some(names) => {
            let path = out.join(format!("{name}.names.json"));
            std::fs::write(&path, serde_json::to_string_pretty(names)? + "\n")?;
            Some(path)
        }
        None => None,
    };
    Ok(Written {
        name: name.to_string(),
        n: g.n(),
        m: g.edge_count(),
        graph_file,
        names_file,
    })
}

pub fn generate(p: &GenerateParams) -> Result<Outcome> {
    std::fs::create_dir_all(&p.out).with_context(|| format!("creating {}", p.out.display()))?;
    let need_k = || p.k.context("this family needs --k");
    let single = |name: String, ng: NamedGraph| -> Result<Vec<Written>> {
        Ok(vec![write_graph(
            &p.out,
            &name,
            &ng.graph,
            Some(&ng.names),
        )?])
    };
    let mut quarantined = 0;
    let written = match p.family {
        Family::Tight => {
            let k = need_k()?;
            single(format!("tight-{k}"), tight_chromatic_graph(k)?)?
        }
        Family::Cwd => {
            let k = need_k()?;
            single(format!("cwd-{k}"), unbounded_cwd_graph(k)?)?
        }
        Family::Pyramid => {
            let &[a, b, c] = p.lengths.as_slice() else {
                bail!("--lengths needs exactly three values");
            };
            single(format!("pyramid-{a}-{b}-{c}"), long_pyramid(a, b, c)?)?
        }
        Family::Extended => {
            ensure!(p.branches >= 2, "--branches must be at least 2");
            let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
            single(
                format!("extended-{}-{}", p.branches, p.seed),
                random_extended_basic(&mut rng, p.branches),
            )?
        }
        Family::Corpus => {
            ensure!(p.min <= p.max, "--min exceeds --max");
            let (kept, bad) = generate_corpus(p.seed, p.count, p.min..=p.max);
            let mut out = Vec::new();
            for inst in &kept {
                out.push(write_graph(&p.out, &inst.name, &inst.graph, None)?);
            }
            quarantined = bad.len();
            let triage: Vec<Value> = bad
                .iter()
                .map(|q| json!({ "name": q.name, "reason": q.reason, "n": q.graph.n(), "edges": q.graph.edges().collect::<Vec<_>>() }))
                .collect();
            std::fs::write(
                p.out.join("quarantine.json"),
                serde_json::to_string_pretty(&triage)? + "\n",
            )?;
            out
        }
    };
    let summary = format!(
        "wrote {} graphs to {} ({quarantined} quarantined)",
        written.len(),
        p.out.display()
    );
    Ok(Outcome {
        status: Status::InClass,
        report: json!({ "written": written, "quarantined": quarantined }),
        summary,
    })
}
