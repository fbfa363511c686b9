//! `spine` command line: extract backbones, decompose component structure,
//! evaluate (original, backbone) pairs, and run fraction sweeps.
//!
//! Exit codes: 0 success, 2 usage or input parsing, 3 semantic validation
//! (containment, empty graphs), 4 numerical failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spine::community::Partition;
use spine::components::extract_component_structure;
use spine::datasets;
use spine::distances::{laplacian_spectrum, netlsd_signature, netlsd_times};
use spine::error::Error;
use spine::filters::{Backbone, FilterKind, Provenance, Selection};
use spine::graph::{load_edge_list, Graph, ParseOptions};
use spine::multilevel::{extract_backbone, ExtractionMode, ExtractionPlan, SeedPolicy};
use spine::report::{evaluate_with_partition, sweep, write_sweep_csv, EvaluationOptions};

const EXIT_USAGE: u8 = 2;
const EXIT_SEMANTIC: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "spine",
    about = "Weighted-network backbone extraction and evaluation",
    version
)]
struct Cli {
    /// Increase log verbosity (-v: info, -vv: debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract a backbone and write `backbone.edges` + `provenance.json`.
    Extract(ExtractArgs),
    /// Decompose a graph into local/global components.
    Components(ComponentsArgs),
    /// Evaluate a backbone against its original graph.
    Evaluate(EvaluateArgs),
    /// Run both extraction modes over a list of fractions; write `sweep.csv`.
    Sweep(SweepArgs),
    /// Write the bundled datasets into a directory.
    Datasets(DatasetsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    /// Global threshold (keep heaviest edges).
    Gt,
    /// Disparity filter.
    Df,
}

impl From<FilterArg> for FilterKind {
    fn from(f: FilterArg) -> FilterKind {
        match f {
            FilterArg::Gt => FilterKind::GlobalThreshold,
            FilterArg::Df => FilterKind::Disparity,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Classical,
    Multilevel,
}

impl From<ModeArg> for ExtractionMode {
    fn from(m: ModeArg) -> ExtractionMode {
        match m {
            ModeArg::Classical => ExtractionMode::Classical,
            ModeArg::Multilevel => ExtractionMode::Multilevel,
        }
    }
}

#[derive(Args)]
struct CommonIo {
    /// Input edge-list file.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Output directory (created if missing).
    #[arg(long = "out", value_name = "DIR")]
    out: PathBuf,
    /// Louvain seed: an integer or `auto` (best of 10). Falls back to the
    /// SPINE_SEED environment variable, then `auto`.
    #[arg(long)]
    seed: Option<String>,
    /// Print a machine-readable JSON summary to stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExtractArgs {
    #[command(flatten)]
    io: CommonIo,
    #[arg(long, value_enum)]
    filter: FilterArg,
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Fraction of edges to keep (budget mode).
    #[arg(long)]
    fraction: Option<f64>,
    /// Disparity-filter significance level (alpha mode).
    #[arg(long)]
    alpha: Option<f64>,
    /// Also write a `backbone.nodes.tsv` id/label sidecar.
    #[arg(long)]
    nodes_tsv: bool,
}

#[derive(Args)]
struct ComponentsArgs {
    #[command(flatten)]
    io: CommonIo,
    /// Also write `<name>.nodes.tsv` sidecars for every component.
    #[arg(long)]
    nodes_tsv: bool,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Original edge-list file.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Backbone edge-list file (must be contained in the original).
    #[arg(long, value_name = "FILE")]
    backbone: PathBuf,
    #[arg(long = "out", value_name = "DIR")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<String>,
    /// Compute spectral distances regardless of graph size.
    #[arg(long)]
    force_spectral: bool,
    /// Dump Laplacian spectra and NetLSD signatures for plotting.
    #[arg(long)]
    dump_spectra: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    io: CommonIo,
    #[arg(long, value_enum)]
    filter: FilterArg,
    /// Fractions: comma list (`0.1,0.2,0.3`) or range `start:end:step`.
    #[arg(long)]
    fractions: String,
    /// Worker threads for the sweep fan-out (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    force_spectral: bool,
}

#[derive(Args)]
struct DatasetsArgs {
    #[arg(long = "out", value_name = "DIR")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) | Error::Parse { .. } | Error::InvalidPlan(_) => EXIT_USAGE,
        Error::InvalidGraph(_) | Error::EmptyGraph(_) | Error::Containment(_) => EXIT_SEMANTIC,
        Error::Numerical { .. } => EXIT_NUMERICAL,
    }
}

fn run(command: Command) -> spine::Result<()> {
    match command {
        Command::Extract(args) => cmd_extract(args),
        Command::Components(args) => cmd_components(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Datasets(args) => cmd_datasets(args),
    }
}

fn parse_seed(seed: &Option<String>) -> spine::Result<SeedPolicy> {
    let value = match seed {
        Some(s) => s.clone(),
        None => std::env::var("SPINE_SEED").unwrap_or_else(|_| "auto".to_owned()),
    };
    if value == "auto" {
        return Ok(SeedPolicy::Auto);
    }
    value
        .parse::<u64>()
        .map(SeedPolicy::Fixed)
        .map_err(|_| Error::InvalidPlan(format!("seed must be an integer or `auto`, got `{value}`")))
}

fn parse_fractions(input: &str) -> spine::Result<Vec<f64>> {
    let bad = |msg: String| Error::InvalidPlan(msg);
    let values: Vec<f64> = if input.contains(':') {
        let parts: Vec<&str> = input.split(':').collect();
        if parts.len() != 3 {
            return Err(bad(format!("range must be start:end:step, got `{input}`")));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| bad(format!("cannot parse `{s}` as a number")))
        };
        let (start, end, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
        if step <= 0.0 {
            return Err(bad("step must be positive".to_owned()));
        }
        let mut out = Vec::new();
        let mut i = 0usize;
        loop {
            let f = start + step * i as f64;
            if f > end + 1e-9 {
                break;
            }
            out.push((f * 1e9).round() / 1e9);
            i += 1;
        }
        out
    } else {
        input.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| bad(format!("cannot parse fraction `{s}`")))
            })
            .collect::<spine::Result<_>>()?
    };
    if values.is_empty() {
        return Err(bad("empty fractions list".to_owned()));
    }
    Ok(values)
}

fn load_input(path: &Path) -> spine::Result<Graph> {
    let (graph, summary) = load_edge_list(path, &ParseOptions::default())?;
    if summary.dropped_self_loops > 0 || summary.merged_parallel > 0 {
        log::info!(
            "loaded `{}`: dropped {} self-loops, merged {} parallel edges",
            graph.name(),
            summary.dropped_self_loops,
            summary.merged_parallel
        );
    }
    Ok(graph)
}

fn ensure_out_dir(dir: &Path) -> spine::Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn write_json<P: AsRef<Path>, T: serde::Serialize>(path: P, value: &T) -> spine::Result<()> {
    let mut file = fs::File::create(path)?;
    let text = serde_json::to_string_pretty(value).expect("report types serialize");
    file.write_all(text.as_bytes())?;
    file.write_all(b"\n")?;
    Ok(())
}

fn selection_from(fraction: Option<f64>, alpha: Option<f64>) -> spine::Result<Selection> {
    match (fraction, alpha) {
        (Some(_), Some(_)) => Err(Error::InvalidPlan(
            "--fraction and --alpha are mutually exclusive".to_owned(),
        )),
        (Some(f), None) => Ok(Selection::Fraction(f)),
        (None, Some(a)) => Ok(Selection::Alpha(a)),
        (None, None) => Err(Error::InvalidPlan(
            "one of --fraction or --alpha is required".to_owned(),
        )),
    }
}

fn cmd_extract(args: ExtractArgs) -> spine::Result<()> {
    let selection = selection_from(args.fraction, args.alpha)?;
    let plan = ExtractionPlan {
        filter: args.filter.into(),
        selection,
        partition_seed: parse_seed(&args.io.seed)?,
        mode: args.mode.into(),
    };
    plan.validate()?;
    let graph = load_input(&args.io.input)?;
    let backbone = extract_backbone(&graph, &plan)?;

    ensure_out_dir(&args.io.out)?;
    let edges_path = args.io.out.join("backbone.edges");
    let mut file = fs::File::create(&edges_path)?;
    backbone.graph.write_edge_list(&mut file)?;
    write_json(args.io.out.join("provenance.json"), &backbone.provenance)?;
    if args.nodes_tsv {
        let mut tsv = fs::File::create(args.io.out.join("backbone.nodes.tsv"))?;
        backbone.graph.write_nodes_tsv(&mut tsv)?;
    }

    if args.io.json {
        println!(
            "{}",
            serde_json::json!({
                "nodes": backbone.graph.node_count(),
                "edges": backbone.graph.edge_count(),
                "output": edges_path,
            })
        );
    } else {
        println!(
            "backbone: {} nodes, {} edges -> {}",
            backbone.graph.node_count(),
            backbone.graph.edge_count(),
            edges_path.display()
        );
    }
    Ok(())
}

#[derive(serde::Serialize)]
struct ComponentManifestEntry {
    kind: String,
    index: usize,
    file: String,
    nodes: usize,
    edges: usize,
}

#[derive(serde::Serialize)]
struct ComponentManifest {
    graph: String,
    partition_seed: Option<u64>,
    communities: usize,
    locals: usize,
    globals: usize,
    components: Vec<ComponentManifestEntry>,
}

fn resolve_partition_cli(g: &Graph, policy: SeedPolicy) -> spine::Result<(Partition, Option<u64>)> {
    match policy {
        SeedPolicy::Fixed(s) => Ok((spine::community::louvain(g, s)?, Some(s))),
        SeedPolicy::Auto => {
            let (p, s) = spine::community::louvain_best_of(g, spine::community::AUTO_SEED_RUNS)?;
            Ok((p, Some(s)))
        }
    }
}

fn cmd_components(args: ComponentsArgs) -> spine::Result<()> {
    let graph = load_input(&args.io.input)?;
    let (partition, seed) = resolve_partition_cli(&graph, parse_seed(&args.io.seed)?)?;
    let structure = extract_component_structure(&graph, &partition)?;

    ensure_out_dir(&args.io.out)?;
    let mut entries = Vec::new();
    for (kind, index, component) in structure.all() {
        let file = format!("{}_{index}.edges", kind.as_str());
        let mut out = fs::File::create(args.io.out.join(&file))?;
        component.write_edge_list(&mut out)?;
        if args.nodes_tsv {
            let mut tsv =
                fs::File::create(args.io.out.join(format!("{}_{index}.nodes.tsv", kind.as_str())))?;
            component.write_nodes_tsv(&mut tsv)?;
        }
        entries.push(ComponentManifestEntry {
            kind: kind.as_str().to_owned(),
            index,
            file,
            nodes: component.node_count(),
            edges: component.edge_count(),
        });
    }
    let mut partition_file = fs::File::create(args.io.out.join("partition.tsv"))?;
    partition.write_tsv(&graph, &mut partition_file)?;

    let manifest = ComponentManifest {
        graph: graph.name().to_owned(),
        partition_seed: seed,
        communities: partition.community_count(),
        locals: structure.locals.len(),
        globals: structure.globals.len(),
        components: entries,
    };
    write_json(args.io.out.join("manifest.json"), &manifest)?;

    if args.io.json {
        println!(
            "{}",
            serde_json::json!({
                "locals": structure.locals.len(),
                "globals": structure.globals.len(),
                "communities": partition.community_count(),
            })
        );
    } else {
        println!(
            "components: {} locals, {} globals ({} communities)",
            structure.locals.len(),
            structure.globals.len(),
            partition.community_count()
        );
    }
    Ok(())
}

fn dump_spectra(graph: &Graph, tag: &str, dir: &Path) -> spine::Result<()> {
    let spectrum = laplacian_spectrum(graph)?;
    let mut eig = fs::File::create(dir.join(format!("{tag}.spectrum.txt")))?;
    for l in &spectrum.eigenvalues {
        writeln!(eig, "{l}")?;
    }
    let times = netlsd_times();
    let signature = netlsd_signature(&spectrum, &times);
    let mut csv = fs::File::create(dir.join(format!("{tag}.netlsd.csv")))?;
    writeln!(csv, "t,h")?;
    for (t, h) in times.iter().zip(signature.iter()) {
        writeln!(csv, "{t},{h}")?;
    }
    Ok(())
}

fn cmd_evaluate(args: EvaluateArgs) -> spine::Result<()> {
    let original = load_input(&args.input)?;
    let backbone_graph = load_input(&args.backbone)?;
    let options = EvaluationOptions {
        seed_policy: parse_seed(&args.seed)?,
        force_spectral: args.force_spectral,
        ..EvaluationOptions::default()
    };
    // A backbone loaded from disk carries only file provenance.
    let backbone = Backbone {
        provenance: Provenance {
            method: "file".to_owned(),
            mode: "file".to_owned(),
            fraction: None,
            alpha: None,
            partition_seed: None,
            seed_policy: None,
            source: args.backbone.display().to_string(),
            tiebreak_version: spine::filters::TIEBREAK_VERSION.to_owned(),
            components: Vec::new(),
        },
        graph: backbone_graph,
    };
    let (partition, seed) = resolve_partition_cli(&original, options.seed_policy)?;
    let report = evaluate_with_partition(&original, &backbone, &partition, seed, &options)?;

    ensure_out_dir(&args.out)?;
    write_json(args.out.join("report.json"), &report)?;
    if args.dump_spectra {
        dump_spectra(&original, "original", &args.out)?;
        dump_spectra(&backbone.graph, "backbone", &args.out)?;
    }

    if args.json {
        println!("{}", serde_json::to_string(&report).expect("serializable"));
    } else {
        println!("evaluation of `{}` vs `{}`:", original.name(), backbone.graph.name());
        println!("  preserved nodes    {:.4}", report.preserved_node_fraction);
        println!("  preserved weight   {:.4}", report.preserved_weight_fraction);
        println!("  ks degree          {:.4}", report.ks_degree);
        println!("  ks weight          {:.4}", report.ks_weight);
        println!("  portrait div.      {:.4}", report.portrait_divergence);
        match report.laplacian_distance {
            Some(d) => println!("  laplacian dist.    {d:.4}"),
            None => println!("  laplacian dist.    (skipped)"),
        }
        match report.netlsd_distance {
            Some(d) => println!("  netlsd dist.       {d:.4}"),
            None => println!("  netlsd dist.       (skipped)"),
        }
        println!("  modularity         {:.4} -> {:.4}", report.modularity_original, report.modularity_backbone);
        println!(
            "  inter/intra        {:.2}/{:.2} -> {:.2}/{:.2}",
            report.inter_intra.original.inter,
            report.inter_intra.original.intra,
            report.inter_intra.backbone_original_partition.inter,
            report.inter_intra.backbone_original_partition.intra
        );
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> spine::Result<()> {
    let fractions = parse_fractions(&args.fractions)?;
    let graph = load_input(&args.io.input)?;
    let options = EvaluationOptions {
        seed_policy: parse_seed(&args.io.seed)?,
        force_spectral: args.force_spectral,
        ..EvaluationOptions::default()
    };
    let rows = if let Some(jobs) = args.jobs {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidPlan(format!("cannot build worker pool: {e}")))?;
        pool.install(|| sweep(&graph, args.filter.into(), &fractions, &options))?
    } else {
        sweep(&graph, args.filter.into(), &fractions, &options)?
    };

    ensure_out_dir(&args.io.out)?;
    let csv_path = args.io.out.join("sweep.csv");
    let mut file = fs::File::create(&csv_path)?;
    write_sweep_csv(&rows, &mut file)?;

    if args.io.json {
        println!(
            "{}",
            serde_json::json!({ "rows": rows.len(), "output": csv_path })
        );
    } else {
        println!("sweep: {} rows -> {}", rows.len(), csv_path.display());
    }
    Ok(())
}

fn cmd_datasets(args: DatasetsArgs) -> spine::Result<()> {
    ensure_out_dir(&args.out)?;
    for info in datasets::DATASETS {
        match info.contents {
            Some(text) => {
                let path = args.out.join(info.file_name);
                fs::write(&path, text)?;
                println!("wrote {} ({})", path.display(), info.description);
            }
            None => println!(
                "not bundled: {} ({}); run scripts/fetch-datasets.sh",
                info.file_name, info.description
            ),
        }
    }
    Ok(())
}
