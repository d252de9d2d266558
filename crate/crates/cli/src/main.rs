//! `recolor-lab`: batch front end for recolor-core. Every command prints one
//! JSON document; only `emit` prints raw graph text.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use recolor_core::coloring::{chromatic_number, count_colorings, for_each_coloring, Color, Coloring};
use recolor_core::io::{emit_graph, emit_graph6, parse_graph, Format};
use recolor_core::modules::{all_nontrivial_modules, clique_skeleton, is_prime, skeleton};
use recolor_core::patterns::{
    check_p5free_bipartite_staircase, find_tight_clique_cutset, forbidden_witnesses, has_universal_vertex,
    in_class, is_bipartite, is_chordal, is_co_bipartite, is_matched_co_bipartite, is_thin_spider, ClassSpec,
    PatternLibrary,
};
use recolor_core::planner::{plan_recoloring, Budget};
use recolor_core::reconfig::{census, find_path, BUDGET_ENV};
use recolor_core::verify::{self, CampaignReport};
use recolor_core::{Error, Graph};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "recolor-lab", version, about = "Exact tools for coloring reconfiguration graphs")]
struct Cli {
    /// Graph file; standard input when absent.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Input format: edge-list or graph6. Guessed from the text by default.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Census guard in stored colorings; overrides the environment.
    #[arg(long, global = true)]
    mem_budget: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Read a graph and echo it in canonical form.
    Parse,
    /// Print the graph as text in the given format.
    Emit {
        #[arg(long, default_value = "edge-list")]
        to: String,
    },
    /// Maximal modules, skeleton and clique skeleton.
    Decompose,
    Prime,
    Skeleton,
    CliqueSkeleton,
    /// Replace vertex v by a clique of sizes[v] vertices.
    Blowup {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
    },
    Sibling,
    Classify,
    Chi,
    /// Proper k-colorings in lexicographic order.
    Enumerate {
        #[arg(long)]
        k: Color,
        /// List at most this many; the count is exact regardless.
        #[arg(long, default_value_t = 1000)]
        limit: usize,
    },
    /// Census of R_k(G) for one k or a range lo:hi.
    Mixing {
        #[arg(long, conflicts_with = "range", required_unless_present = "range")]
        k: Option<Color>,
        #[arg(long)]
        range: Option<String>,
    },
    /// Shortest walk between two colorings by breadth-first search.
    Path {
        #[arg(long)]
        k: Color,
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
    },
    /// Walk between two colorings by decomposition.
    Plan {
        #[arg(long)]
        ell: Color,
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        /// Include the rule tree.
        #[arg(long)]
        trace: bool,
    },
    #[command(subcommand)]
    Verify(Campaign),
}

#[derive(Args)]
struct Orders {
    #[arg(long, default_value_t = 5)]
    n_max: usize,
    #[arg(long, default_value_t = 1)]
    ell_extra: usize,
}

#[derive(Subcommand)]
enum Campaign {
    /// Recolorability over a forbidden-pattern class.
    Class {
        /// Comma-separated patterns, e.g. P5,diamond; "all" for every graph.
        #[arg(long, default_value = "all")]
        class: String,
        #[command(flatten)]
        orders: Orders,
        /// Sample this many random members on --random-n vertices instead.
        #[arg(long, requires_all = ["random_n", "seed"])]
        count: Option<usize>,
        #[arg(long)]
        random_n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    Skeleton {
        #[command(flatten)]
        orders: Orders,
    },
    Sibling {
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value_t = 4)]
        k: Color,
        #[arg(long)]
        seed: u64,
    },
    Hereditary {
        #[command(flatten)]
        orders: Orders,
    },
    Conjecture {
        /// Largest prime graph order.
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long, default_value_t = 2)]
        mult_max: usize,
        #[arg(long, default_value_t = 1)]
        ell_extra: usize,
    },
    Figure2,
    Structure {
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        #[arg(long, default_value_t = 8)]
        staircase_n_max: usize,
    },
}

enum Failure {
    Usage(String),
    Guard(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::StateSpaceTooLarge { .. }
            | Error::BudgetExhausted(_)
            | Error::TooLarge { .. }
            | Error::PatternTooLarge(_) => Failure::Guard(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Out = Result<Value, Failure>;

fn read_text(path: Option<&Path>) -> Result<String, Failure> {
    let mut s = String::new();
    match path {
        Some(p) => s = fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        None => {
            io::stdin().read_to_string(&mut s)?;
        }
    }
    Ok(s)
}

/// A lone token on the first line can only be graph6; an edge list opens
/// with two numbers.
fn guess_format(text: &str) -> Format {
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    if first.split_whitespace().count() == 1 {
        Format::Graph6
    } else {
        Format::EdgeList
    }
}

fn read_graph(cli: &Cli) -> Result<Graph, Failure> {
    let text = read_text(cli.input.as_deref())?;
    let format = match &cli.format {
        Some(f) => f.parse::<Format>()?,
        None => guess_format(&text),
    };
    Ok(parse_graph(&text, format)?)
}

fn read_coloring(path: &Path, g: &Graph, k: Color) -> Result<Coloring, Failure> {
    let text = read_text(Some(path))?;
    let colors: Vec<Color> = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: expected a JSON array of colors: {e}", path.display())))?;
    if colors.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: colors.len(),
        }
        .into());
    }
    Ok(Coloring::new(colors, k)?)
}

fn sets(v: &[recolor_core::VertexSet]) -> Vec<Vec<usize>> {
    v.iter().map(|s| s.to_vec()).collect()
}

fn graph_json(g: &Graph) -> Value {
    json!({ "n": g.n(), "edges": g.edges(), "graph6": emit_graph6(g) })
}

fn decompose(g: &Graph) -> Out {
    if g.n() == 0 || !g.is_connected() || !g.complement().is_connected() {
        return Ok(json!({
            "eligible": false,
            "components": sets(&g.components()),
            "co_components": sets(&g.complement().components()),
        }));
    }
    let map = clique_skeleton(g)?;
    Ok(json!({
        "eligible": true,
        "prime": map.source_blocks.m() == g.n(),
        "blocks": sets(&map.source_blocks.blocks),
        "skeleton": graph_json(&map.skeleton),
        "clique_skeleton": graph_json(&map.host),
        "sizes": map.sizes,
    }))
}

fn prime(g: &Graph) -> Out {
    let p = is_prime(g);
    let module = if p || g.n() > 20 {
        None
    } else {
        all_nontrivial_modules(g)?.into_iter().min_by_key(|m| m.len()).map(|m| m.to_vec())
    };
    Ok(json!({ "prime": p, "smallest_module": module }))
}

fn classify(g: &Graph) -> Out {
    let lib = PatternLibrary::new();
    let all: Vec<_> = lib.iter().map(|(p, _)| p).collect();
    let spec = ClassSpec::new(all)?;
    let witnesses: serde_json::Map<String, Value> = forbidden_witnesses(g, &spec)
        .into_iter()
        .map(|(p, w)| (p.as_str().to_string(), json!(w)))
        .collect();
    let classes: serde_json::Map<String, Value> = [
        ClassSpec::p5_diamond_free(),
        ClassSpec::p5_house_bull_free(),
        ClassSpec::semi_p4_sparse(),
        ClassSpec::p5_house_free(),
        ClassSpec::p5_house_c5_free(),
        ClassSpec::two_k2_free(),
        ClassSpec::diamond_free(),
        ClassSpec::p5_free(),
    ]
    .iter()
    .map(|s| (s.label(), json!(in_class(g, s))))
    .collect();
    let bip = is_bipartite(g).is_some();
    Ok(json!({
        "classes": classes,
        "witnesses": witnesses,
        "prime": is_prime(g),
        "bipartite": bip,
        "co_bipartite": is_co_bipartite(g),
        "matched_co_bipartite": is_matched_co_bipartite(g)?,
        "chordal": is_chordal(g),
        "thin_spider": is_thin_spider(g)?,
        "staircase": bip && check_p5free_bipartite_staircase(g)?,
        "tight_clique_cutset": find_tight_clique_cutset(g)?.map(|q| q.to_vec()),
        "universal_vertex": has_universal_vertex(g),
    }))
}

fn enumerate(g: &Graph, k: Color, limit: usize) -> Out {
    let count = count_colorings(g, k, u64::MAX).expect("unbounded count");
    let mut listed = Vec::new();
    for_each_coloring(g, k, |c| {
        listed.push(c.to_vec());
        listed.len() < limit
    });
    Ok(json!({ "k": k, "count": count, "colorings": listed }))
}

fn parse_range(s: &str) -> Result<(Color, Color), Failure> {
    let bad = || Failure::Usage(format!("range {s:?} is not lo:hi"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let (lo, hi): (Color, Color) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn mixing(g: &Graph, k: Option<Color>, range: Option<&str>) -> Out {
    let (lo, hi) = match (k, range) {
        (Some(k), _) => (k, k),
        (None, Some(r)) => parse_range(r)?,
        (None, None) => return Err(Failure::Usage("give --k or --range".into())),
    };
    let mut reports = Vec::new();
    for k in lo..=hi {
        reports.push(census(g, k)?);
    }
    if k.is_some() {
        return Ok(serde_json::to_value(&reports[0]).expect("serializable"));
    }
    Ok(json!({ "reports": reports }))
}

fn run_campaign(c: &Campaign) -> Result<CampaignReport, Failure> {
    Ok(match c {
        Campaign::Class {
            class,
            orders,
            count,
            random_n,
            seed,
        } => {
            let spec = ClassSpec::parse(class)?;
            match (count, random_n, seed) {
                (Some(count), Some(n), Some(seed)) => {
                    verify::campaign_class_random(&spec, *n, *count, *seed, orders.ell_extra)?
                }
                _ => verify::campaign_class_recolorable(&spec, orders.n_max, orders.ell_extra)?,
            }
        }
        Campaign::Skeleton { orders } => verify::campaign_skeleton_equivalence(orders.n_max, orders.ell_extra)?,
        Campaign::Sibling { n_max, k, seed } => verify::campaign_sibling(*n_max, *k, *seed)?,
        Campaign::Hereditary { orders } => verify::campaign_hereditary_reduction(orders.n_max, orders.ell_extra)?,
        Campaign::Conjecture {
            n_max,
            mult_max,
            ell_extra,
        } => verify::campaign_conjecture(*n_max, *mult_max, *ell_extra)?,
        Campaign::Figure2 => verify::figure2_reproduction()?,
        Campaign::Structure { n_max, staircase_n_max } => verify::campaign_structure(*n_max, *staircase_n_max)?,
    })
}

/// Runs the command. The flag is true when a gate failed.
fn dispatch(cli: &Cli) -> Result<(Value, bool), Failure> {
    let value = match &cli.cmd {
        Cmd::Verify(c) => {
            let r = run_campaign(c)?;
            let failed = r.gate_failed();
            return Ok((serde_json::to_value(&r).expect("serializable"), failed));
        }
        Cmd::Parse => {
            let g = read_graph(cli)?;
            json!({ "graph": graph_json(&g), "edge_count": g.edge_count() })
        }
        Cmd::Emit { .. } => unreachable!("handled in main"),
        Cmd::Decompose => decompose(&read_graph(cli)?)?,
        Cmd::Prime => prime(&read_graph(cli)?)?,
        Cmd::Skeleton => {
            let (sk, part) = skeleton(&read_graph(cli)?)?;
            json!({ "skeleton": graph_json(&sk), "blocks": sets(&part.blocks) })
        }
        Cmd::CliqueSkeleton => {
            let g = read_graph(cli)?;
            let map = clique_skeleton(&g)?;
            json!({
                "host": graph_json(&map.host),
                "cliques": sets(&map.cliques),
                "sizes": map.sizes,
                "blocks": sets(&map.source_blocks.blocks),
            })
        }
        Cmd::Blowup { sizes } => json!({ "graph": graph_json(&read_graph(cli)?.blowup(sizes)?) }),
        Cmd::Sibling => json!({ "graph": graph_json(&read_graph(cli)?.sibling()) }),
        Cmd::Classify => classify(&read_graph(cli)?)?,
        Cmd::Chi => {
            let (chi, c) = chromatic_number(&read_graph(cli)?)?;
            json!({ "chi": chi, "coloring": c })
        }
        Cmd::Enumerate { k, limit } => enumerate(&read_graph(cli)?, *k, *limit)?,
        Cmd::Mixing { k, range } => mixing(&read_graph(cli)?, *k, range.as_deref())?,
        Cmd::Path { k, from, to } => {
            let g = read_graph(cli)?;
            let (a, b) = (read_coloring(from, &g, *k)?, read_coloring(to, &g, *k)?);
            let p = find_path(&g, *k, &a, &b)?;
            json!({
                "k": k,
                "connected": p.is_some(),
                "length": p.as_ref().map(|p| p.len()),
                "schedule": p.map(|p| p.steps),
            })
        }
        Cmd::Plan { ell, from, to, trace } => {
            let g = read_graph(cli)?;
            let (a, b) = (read_coloring(from, &g, *ell)?, read_coloring(to, &g, *ell)?);
            match plan_recoloring(&g, *ell, &a, &b, Budget::default()) {
                Ok((s, t)) => json!({
                    "ell": ell,
                    "found": true,
                    "length": s.len(),
                    "schedule": s.steps,
                    "trace": if *trace { Some(t) } else { None },
                }),
                Err(Error::NoPath(why)) => json!({ "ell": ell, "found": false, "reason": why }),
                Err(e) => return Err(e.into()),
            }
        }
    };
    Ok((value, false))
}

fn write_out(cli: &Cli, text: &str) -> io::Result<()> {
    match &cli.out {
        Some(p) => fs::write(p, text),
        None => {
            let mut s = io::stdout().lock();
            s.write_all(text.as_bytes())?;
            s.flush()
        }
    }
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Parse => "parse",
        Cmd::Emit { .. } => "emit",
        Cmd::Decompose => "decompose",
        Cmd::Prime => "prime",
        Cmd::Skeleton => "skeleton",
        Cmd::CliqueSkeleton => "clique-skeleton",
        Cmd::Blowup { .. } => "blowup",
        Cmd::Sibling => "sibling",
        Cmd::Classify => "classify",
        Cmd::Chi => "chi",
        Cmd::Enumerate { .. } => "enumerate",
        Cmd::Mixing { .. } => "mixing",
        Cmd::Path { .. } => "path",
        Cmd::Plan { .. } => "plan",
        Cmd::Verify(_) => "verify",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(b) = cli.mem_budget {
        // set before any worker thread starts
        std::env::set_var(BUDGET_ENV, b.to_string());
    }
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .expect("global pool is set once");
    }

    if let Cmd::Emit { to } = &cli.cmd {
        let r = to
            .parse::<Format>()
            .map_err(Failure::from)
            .and_then(|f| Ok(emit_graph(&read_graph(&cli)?, f)));
        return match r {
            Ok(text) => match write_out(&cli, &format!("{}\n", text.trim_end())) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            },
            Err(f) => fail(f),
        };
    }

    let t = Instant::now();
    let (result, gate_failed) = match dispatch(&cli) {
        Ok(x) => x,
        Err(f) => return fail(f),
    };
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command_name(&cli.cmd),
        "result": result,
        "meta": { "timestamp": stamp, "elapsed_ms": t.elapsed().as_millis() as u64 },
    });
    let text = serde_json::to_string(&doc).expect("serializable") + "\n";
    if let Err(e) = write_out(&cli, &text) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if gate_failed {
        eprintln!("must-pass campaign failed");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}

fn fail(f: Failure) -> ExitCode {
    match f {
        Failure::Usage(m) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Failure::Guard(m) => {
            eprintln!("resource guard: {m}");
            ExitCode::from(3)
        }
    }
}
