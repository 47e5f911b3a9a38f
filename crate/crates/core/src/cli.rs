//! Command-line front end. Every subcommand loads inputs, calls library
//! operations and serializes their results; no analysis happens here.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::alignment::{self, build_all_matrices, AlignmentScore, IndexReport};
use crate::analytics::{self, Grouping};
use crate::corpus::{self, Corpus, CorpusError};
use crate::network::{self, PolicyNetwork};
use crate::reliability::{self, KappaWeights};
use crate::render::{self, GraphFormat, HeatmapGrid, LayoutSeed, Orientation, Palette};
use crate::taxonomy::{self, ComponentKind};

pub const SEED_ENV: &str = "COHERENCE_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Corpus { path: PathBuf, source: CorpusError },
    #[error("{0}")]
    Analysis(String),
    #[error("{0}")]
    Render(#[from] render::RenderError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Usage(_) => 2,
            CliError::Corpus { .. } | CliError::Analysis(_) | CliError::Render(_) => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "coherence-atlas", version, about = "Strategic-alignment analytics over coded strategy corpora")]
struct Cli {
    /// Human-readable tables instead of JSON where available.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a corpus file against the schema and coding rules.
    Validate { corpus: PathBuf },
    /// Inter-coder agreement between two independent codings.
    Reliability(ReliabilityArgs),
    /// Alignment matrices per strategy.
    Matrices {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        country: Option<String>,
    },
    /// Coherence indices per strategy.
    Indices {
        #[arg(long)]
        corpus: PathBuf,
    },
    /// Export a strategy network or a corpus co-occurrence network.
    Network(NetworkArgs),
    /// Community structure and centralities of one strategy network.
    Communities {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        country: String,
    },
    /// Group profiles by governance model, region or wave.
    Compare {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_enum)]
        group_by: GroupArg,
    },
    /// Share of strategies featuring each component of one kind.
    Prevalence {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Cross-kind pairs ranked by how many strategies align them.
    Pairs {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(0..=3))]
        min_score: u8,
        #[arg(long)]
        top: Option<usize>,
    },
    /// Correlate external indicators with a coherence index.
    Correlate(CorrelateArgs),
    /// Draw a figure as SVG.
    Render {
        #[command(subcommand)]
        figure: RenderCommand,
    },
    /// Run the whole pipeline into a directory of artifacts.
    Report {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Catalog operations.
    Taxonomy {
        #[command(subcommand)]
        action: TaxonomyCommand,
    },
}

#[derive(Debug, Args)]
struct ReliabilityArgs {
    #[arg(long)]
    coder_a: PathBuf,
    #[arg(long)]
    coder_b: PathBuf,
    /// Rulings that settle disagreements; enables writing the merged corpus.
    #[arg(long)]
    adjudications: Option<PathBuf>,
    /// Where to write the consensus corpus (requires the gate to pass).
    #[arg(long, requires = "adjudications")]
    merged_out: Option<PathBuf>,
    /// Quadratic rather than linear disagreement weights.
    #[arg(long)]
    quadratic: bool,
}

#[derive(Debug, Args)]
struct NetworkArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, conflicts_with = "cooccurrence", required_unless_present = "cooccurrence")]
    country: Option<String>,
    #[arg(long, value_enum)]
    cooccurrence: Option<KindArg>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Attach detected communities as a node attribute.
    #[arg(long)]
    communities: bool,
}

#[derive(Debug, Args)]
struct CorrelateArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// CSV with header `country,indicator,value`.
    #[arg(long)]
    indicators: PathBuf,
    #[arg(long, value_enum)]
    against: AgainstArg,
    /// Restrict to one indicator name.
    #[arg(long)]
    indicator: Option<String>,
}

#[derive(Debug, Subcommand)]
enum RenderCommand {
    /// Alignment matrix of one strategy.
    Heatmap {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        country: String,
        #[arg(long, value_enum, default_value = "of")]
        matrix: MatrixArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Network drawing of one strategy or a co-occurrence network.
    Network {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, conflicts_with = "cooccurrence", required_unless_present = "cooccurrence")]
        country: Option<String>,
        #[arg(long, value_enum)]
        cooccurrence: Option<KindArg>,
        #[arg(long)]
        min_weight: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One index per strategy as bars.
    Bars {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_enum, default_value = "coverage")]
        metric: AgainstArg,
        #[arg(long)]
        horizontal: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum TaxonomyCommand {
    /// Print the component catalog as JSON.
    Dump,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GroupArg {
    Model,
    Region,
    Wave,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Objective,
    Foresight,
    Instrument,
}

impl From<KindArg> for ComponentKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Objective => ComponentKind::Objective,
            KindArg::Foresight => ComponentKind::Foresight,
            KindArg::Instrument => ComponentKind::Instrument,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Graphml,
    Dot,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AgainstArg {
    Coverage,
    Mean,
    Sai,
}

impl AgainstArg {
    fn name(self) -> &'static str {
        match self {
            AgainstArg::Coverage => "alignment_coverage",
            AgainstArg::Mean => "mean_alignment",
            AgainstArg::Sai => "strategic_alignment",
        }
    }

    fn pick(self, r: &IndexReport) -> f64 {
        match self {
            AgainstArg::Coverage => r.alignment_coverage,
            AgainstArg::Mean => r.mean_alignment,
            AgainstArg::Sai => r.strategic_alignment,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MatrixArg {
    Of,
    Oi,
    Fi,
}

/// Entry point used by the binary: writes to the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Run with explicit output streams and return the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut ctx = Ctx { out, err, pretty: cli.pretty };
    match dispatch(cli.command, &mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            e.exit_code()
        }
    }
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    pretty: bool,
}

impl Ctx<'_> {
    fn emit_json<T: Serialize>(&mut self, value: &T) -> CliResult<()> {
        let text = if self.pretty {
            serde_json::to_string_pretty(value)
        } else {
            serde_json::to_string(value)
        }
        .expect("output serializes");
        self.emit_text(&(text + "\n"))
    }

    fn emit_text(&mut self, text: &str) -> CliResult<()> {
        self.out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })
    }

    fn warn(&mut self, message: &str) {
        let _ = writeln!(self.err, "warning: {message}");
    }
}

fn read(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    std::fs::write(path, bytes).map_err(io)
}

fn load(path: &Path, ctx: &mut Ctx) -> CliResult<Corpus> {
    let bytes = read(path)?;
    let corpus = corpus::load_corpus(&bytes).map_err(|source| CliError::Corpus {
        path: path.to_path_buf(),
        source,
    })?;
    for f in corpus::validate(&corpus).findings {
        ctx.warn(&format!("{}: {} ({})", path.display(), f.message, f.path));
    }
    Ok(corpus)
}

fn strategy<'c>(corpus: &'c Corpus, country: &str) -> CliResult<&'c corpus::CodedStrategy> {
    corpus
        .strategy(country)
        .ok_or_else(|| CliError::Usage(format!("country `{country}` is not in the corpus")))
}

fn seed(flag: Option<u64>) -> CliResult<LayoutSeed> {
    if let Some(s) = flag {
        return Ok(LayoutSeed(s));
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(LayoutSeed)
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}=`{v}` is not an unsigned 64-bit integer"))),
        Err(_) => Ok(LayoutSeed::default()),
    }
}

fn warn_degenerate(corpus: &Corpus, ctx: &mut Ctx) {
    for s in corpus.by_country() {
        let names = alignment::degenerate_indices(s);
        if !names.is_empty() {
            ctx.warn(&format!("{}: no data for {}; reported as 0", s.country(), names.join(", ")));
        }
    }
}

fn select_network(corpus: &Corpus, country: Option<&str>, kind: Option<KindArg>) -> CliResult<PolicyNetwork> {
    match (country, kind) {
        (Some(c), _) => Ok(network::build_policy_network(strategy(corpus, c)?)),
        (None, Some(k)) => Ok(network::build_cooccurrence_network(corpus, k.into())),
        (None, None) => Err(CliError::Usage("either --country or --cooccurrence is required".into())),
    }
}

fn dispatch(command: Command, ctx: &mut Ctx) -> CliResult<i32> {
    match command {
        Command::Validate { corpus } => cmd_validate(&corpus, ctx),
        Command::Reliability(args) => cmd_reliability(args, ctx),
        Command::Matrices { corpus, country } => {
            let c = load(&corpus, ctx)?;
            let selected = match &country {
                Some(name) => vec![strategy(&c, name)?],
                None => c.by_country(),
            };
            let out: Vec<_> = selected
                .into_iter()
                .map(|s| serde_json::json!({"country": s.country(), "matrices": build_all_matrices(s)}))
                .collect();
            ctx.emit_json(&out)?;
            Ok(0)
        }
        Command::Indices { corpus } => {
            let c = load(&corpus, ctx)?;
            warn_degenerate(&c, ctx);
            let reports = analytics::country_comparison(&c);
            if ctx.pretty {
                ctx.emit_text(&index_table(&reports))?;
            } else {
                ctx.emit_json(&reports)?;
            }
            Ok(0)
        }
        Command::Network(args) => {
            let c = load(&args.corpus, ctx)?;
            let net = select_network(&c, args.country.as_deref(), args.cooccurrence)?;
            let partition = args.communities.then(|| network::detect_communities(&net));
            let format = match args.format {
                FormatArg::Graphml => GraphFormat::GraphMl,
                FormatArg::Dot => GraphFormat::Dot,
                FormatArg::Json => GraphFormat::NodeLinkJson,
            };
            ctx.emit_text(&render::export_graph(&net, partition.as_ref(), format))?;
            Ok(0)
        }
        Command::Communities { corpus, country } => {
            let c = load(&corpus, ctx)?;
            let net = network::build_policy_network(strategy(&c, &country)?);
            ctx.emit_json(&network_summary(&country, &net))?;
            Ok(0)
        }
        Command::Compare { corpus, group_by } => {
            let c = load(&corpus, ctx)?;
            let grouping = match group_by {
                GroupArg::Model => Grouping::Model,
                GroupArg::Region => Grouping::Region,
                GroupArg::Wave => Grouping::Wave,
            };
            ctx.emit_json(&analytics::group_profile(&c, grouping))?;
            Ok(0)
        }
        Command::Prevalence { corpus, kind } => {
            let c = load(&corpus, ctx)?;
            let table = analytics::prevalence(&c, kind.into()).map_err(|e| CliError::Analysis(e.to_string()))?;
            if ctx.pretty {
                let mut s = String::new();
                for e in &table.entries {
                    let _ = writeln!(s, "{:<45} {:>3} {:>4}%", e.component.display_name(), e.count, e.percent_rounded);
                }
                ctx.emit_text(&s)?;
            } else {
                ctx.emit_json(&table)?;
            }
            Ok(0)
        }
        Command::Pairs { corpus, min_score, top } => {
            let c = load(&corpus, ctx)?;
            let score = AlignmentScore::new(min_score).expect("range checked by parser");
            let mut pairs = analytics::strongest_pairs(&c, score).map_err(|e| CliError::Analysis(e.to_string()))?;
            if let Some(k) = top {
                pairs.truncate(k);
            }
            ctx.emit_json(&pairs)?;
            Ok(0)
        }
        Command::Correlate(args) => cmd_correlate(args, ctx),
        Command::Render { figure } => cmd_render(figure, ctx),
        Command::Report { corpus, out, seed: flag } => {
            let manifest = write_report(&corpus, &out, seed(flag)?, ctx)?;
            ctx.emit_json(&serde_json::json!({
                "out": out.display().to_string(),
                "artifacts": manifest.artifacts.len(),
                "corpus_sha256": manifest.corpus_sha256,
            }))?;
            Ok(0)
        }
        Command::Taxonomy {
            action: TaxonomyCommand::Dump,
        } => {
            ctx.emit_json(&taxonomy::dump())?;
            Ok(0)
        }
    }
}

fn cmd_validate(path: &Path, ctx: &mut Ctx) -> CliResult<i32> {
    let bytes = read(path)?;
    let parsed = corpus::parse_corpus(&bytes).map_err(|source| CliError::Corpus {
        path: path.to_path_buf(),
        source,
    })?;
    let report = corpus::validate(&parsed);
    if ctx.pretty {
        ctx.emit_text(&format!("{}: {report}\n", path.display()))?;
    } else {
        ctx.emit_json(&serde_json::json!({
            "file": path.display().to_string(),
            "strategies": parsed.len(),
            "errors": report.error_count(),
            "warnings": report.warning_count(),
            "findings": report.findings,
        }))?;
    }
    Ok(if report.has_errors() { 1 } else { 0 })
}

fn cmd_reliability(args: ReliabilityArgs, ctx: &mut Ctx) -> CliResult<i32> {
    let a = load(&args.coder_a, ctx)?;
    let b = load(&args.coder_b, ctx)?;
    let weights = if args.quadratic { KappaWeights::Quadratic } else { KappaWeights::Linear };
    let report = reliability::reliability_report_with(&a, &b, weights).map_err(|e| CliError::Analysis(e.to_string()))?;
    let mut merged_written = None;
    if let Some(adj_path) = &args.adjudications {
        let adjudications = corpus::load_adjudications(&read(adj_path)?).map_err(|source| CliError::Corpus {
            path: adj_path.clone(),
            source,
        })?;
        let merged = corpus::merge_coders(&a, &b, &adjudications)
            .map_err(|e| CliError::Analysis(format!("{}: {e}", adj_path.display())))?;
        if let Some(dest) = &args.merged_out {
            if report.passes_gate {
                write(dest, merged.to_json().as_bytes())?;
                merged_written = Some(dest.display().to_string());
            } else {
                ctx.warn("reliability gate not met; consensus corpus not written");
            }
        }
    }
    if ctx.pretty {
        ctx.emit_text(&format!(
            "identification kappa  {:.4} ({} decisions)\nalignment kappa ({})  {:.4} ({} decisions)\ngate (> {})          {}\n",
            report.kappa_identification,
            report.n_identification_decisions,
            if args.quadratic { "quadratic" } else { "linear" },
            report.kappa_alignment_weighted,
            report.n_alignment_decisions,
            reliability::KAPPA_GATE,
            if report.passes_gate { "pass" } else { "FAIL" }
        ))?;
    } else {
        ctx.emit_json(&serde_json::json!({
            "reliability": report,
            "weights": weights,
            "merged_corpus": merged_written,
        }))?;
    }
    Ok(if report.passes_gate { 0 } else { 1 })
}

#[derive(Debug, Deserialize)]
struct IndicatorRow {
    country: String,
    indicator: String,
    value: f64,
}

#[derive(Debug, Serialize)]
struct CorrelationRow {
    indicator: String,
    against: &'static str,
    r: f64,
    p_two_tailed: f64,
    n: usize,
}

fn cmd_correlate(args: CorrelateArgs, ctx: &mut Ctx) -> CliResult<i32> {
    let c = load(&args.corpus, ctx)?;
    let bytes = read(&args.indicators)?;
    let bad = |m: String| CliError::Analysis(format!("{}: {m}", args.indicators.display()));
    let mut reader = csv::Reader::from_reader(bytes.as_slice());
    let header = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != ["country", "indicator", "value"] {
        return Err(bad("header must be `country,indicator,value`".into()));
    }
    let mut series: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
    for (i, row) in reader.deserialize::<IndicatorRow>().enumerate() {
        let row = row.map_err(|e| bad(format!("row {}: {e}", i + 2)))?;
        if c.strategy(&row.country).is_none() {
            ctx.warn(&format!("{}: country `{}` is not in the corpus", args.indicators.display(), row.country));
            continue;
        }
        if series.entry(row.indicator.clone()).or_default().insert(row.country.clone(), row.value).is_some() {
            return Err(bad(format!("duplicate value for {} / {}", row.country, row.indicator)));
        }
    }
    if let Some(name) = &args.indicator {
        series.retain(|k, _| k == name);
        if series.is_empty() {
            return Err(bad(format!("indicator `{name}` not found")));
        }
    }
    let index: BTreeMap<String, f64> = analytics::country_comparison(&c)
        .iter()
        .map(|r| (r.country.clone(), args.against.pick(r)))
        .collect();
    let mut rows = Vec::new();
    for (name, values) in &series {
        let (x, y): (Vec<f64>, Vec<f64>) = values.iter().map(|(country, v)| (*v, index[country])).unzip();
        let result = analytics::correlate(&x, &y).map_err(|e| bad(format!("indicator `{name}`: {e}")))?;
        rows.push(CorrelationRow {
            indicator: name.clone(),
            against: args.against.name(),
            r: result.r,
            p_two_tailed: result.p_two_tailed,
            n: result.n,
        });
    }
    if ctx.pretty {
        let mut s = String::new();
        for r in &rows {
            let _ = writeln!(s, "{:<30} vs {:<20} r={:+.3} p={:.4} n={}", r.indicator, r.against, r.r, r.p_two_tailed, r.n);
        }
        ctx.emit_text(&s)?;
    } else {
        ctx.emit_json(&rows)?;
    }
    Ok(0)
}

fn bars_for(reports: &[IndexReport], metric: AgainstArg) -> Vec<(String, f64)> {
    reports.iter().map(|r| (r.country.clone(), metric.pick(r))).collect()
}

fn cmd_render(figure: RenderCommand, ctx: &mut Ctx) -> CliResult<i32> {
    let (svg, dest) = match figure {
        RenderCommand::Heatmap {
            corpus,
            country,
            matrix,
            out,
        } => {
            let c = load(&corpus, ctx)?;
            let matrices = build_all_matrices(strategy(&c, &country)?);
            let m = &matrices[matrix as usize];
            let grid = HeatmapGrid::from_matrix(format!("{country}: {}", m.name()), m);
            (render::render_heatmap(&grid, &Palette::default())?, out)
        }
        RenderCommand::Network {
            corpus,
            country,
            cooccurrence,
            min_weight,
            seed: flag,
            out,
        } => {
            let c = load(&corpus, ctx)?;
            let net = select_network(&c, country.as_deref(), cooccurrence)?;
            (render::render_network(&net, seed(flag)?, min_weight), out)
        }
        RenderCommand::Bars {
            corpus,
            metric,
            horizontal,
            out,
        } => {
            let c = load(&corpus, ctx)?;
            let reports = analytics::country_comparison(&c);
            let orientation = if horizontal { Orientation::Horizontal } else { Orientation::Vertical };
            (render::render_bars(metric.name(), &bars_for(&reports, metric), orientation)?, out)
        }
    };
    match dest {
        Some(path) => write(&path, svg.as_bytes())?,
        None => ctx.emit_text(&svg)?,
    }
    Ok(0)
}

fn index_table(reports: &[IndexReport]) -> String {
    let mut s = format!(
        "{:<16} {:>8} {:>8} {:>8} {:>8} {:>8}\n",
        "country", "OCI", "ISI", "SAI", "coverage", "mean"
    );
    for r in reports {
        let _ = writeln!(
            s,
            "{:<16} {:>8.3} {:>8.3} {:>8.3} {:>8.3} {:>8.3}",
            r.country,
            r.objective_coverage,
            r.implementation_specificity,
            r.strategic_alignment,
            r.alignment_coverage,
            r.mean_alignment
        );
    }
    s
}

#[derive(Debug, Serialize)]
struct NodeSummary {
    component: taxonomy::ComponentId,
    size: f64,
    community: usize,
    degree: f64,
    betweenness: f64,
    eigenvector: f64,
}

#[derive(Debug, Serialize)]
struct NetworkSummary {
    name: String,
    nodes: Vec<NodeSummary>,
    edges: usize,
    communities: usize,
    profile: network::NetworkProfile,
}

fn network_summary(name: &str, net: &PolicyNetwork) -> NetworkSummary {
    let partition = network::detect_communities(net);
    let c = network::centralities(net);
    NetworkSummary {
        name: name.to_string(),
        nodes: net
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| NodeSummary {
                component: n.component,
                size: n.size,
                community: partition.assignment[i],
                degree: c.degree[i],
                betweenness: c.betweenness[i],
                eigenvector: c.eigenvector[i],
            })
            .collect(),
        edges: net.edge_count(),
        communities: partition.community_count(),
        profile: network::network_profile(net),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Index of everything a report run wrote, with content digests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportManifest {
    pub tool: String,
    pub version: String,
    pub corpus_sha256: String,
    pub layout_seed: u64,
    pub artifacts: Vec<ManifestEntry>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// File-system-safe, lower-case directory name for a country.
fn slug(country: &str) -> String {
    let mut s = String::new();
    for ch in country.chars() {
        if ch.is_ascii_alphanumeric() {
            s.push(ch.to_ascii_lowercase());
        } else if !s.ends_with('_') {
            s.push('_');
        }
    }
    let s = s.trim_matches('_').to_string();
    if s.is_empty() { "strategy".into() } else { s }
}

struct ReportWriter {
    root: PathBuf,
    files: BTreeMap<String, Vec<u8>>,
}

impl ReportWriter {
    fn add(&mut self, rel: impl Into<String>, bytes: impl Into<Vec<u8>>) {
        let rel = rel.into();
        let previous = self.files.insert(rel.clone(), bytes.into());
        debug_assert!(previous.is_none(), "artifact {rel} written twice");
    }

    fn json<T: Serialize>(&mut self, rel: impl Into<String>, value: &T) {
        let mut text = serde_json::to_string_pretty(value).expect("artifact serializes");
        text.push('\n');
        self.add(rel, text);
    }

    fn finish(self, manifest_head: ReportManifest) -> CliResult<ReportManifest> {
        let mut manifest = manifest_head;
        for (rel, bytes) in &self.files {
            write(&self.root.join(rel), bytes)?;
            manifest.artifacts.push(ManifestEntry {
                path: rel.clone(),
                sha256: sha256_hex(bytes),
                bytes: bytes.len() as u64,
            });
        }
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        text.push('\n');
        write(&self.root.join(MANIFEST_FILE), text.as_bytes())?;
        Ok(manifest)
    }
}

fn write_report(corpus_path: &Path, out: &Path, seed: LayoutSeed, ctx: &mut Ctx) -> CliResult<ReportManifest> {
    let bytes = read(corpus_path)?;
    let c = load(corpus_path, ctx)?;
    warn_degenerate(&c, ctx);
    let analysis = |e: analytics::AnalyticsError| CliError::Analysis(format!("{}: {e}", corpus_path.display()));
    let palette = Palette::default();
    let mut w = ReportWriter {
        root: out.to_path_buf(),
        files: BTreeMap::new(),
    };

    let csv = corpus::export_csv(&c);
    w.add("corpus/codings.csv", csv.codings);
    w.add("corpus/cells.csv", csv.cells);

    let mut used = BTreeSet::new();
    for s in c.by_country() {
        let base = slug(s.country());
        let mut dir = base.clone();
        let mut k = 2;
        while !used.insert(dir.clone()) {
            dir = format!("{base}_{k}");
            k += 1;
        }
        let dir = format!("countries/{dir}");
        for m in build_all_matrices(s) {
            w.add(format!("{dir}/{}.csv", m.name()), m.to_csv());
            let grid = HeatmapGrid::from_matrix(format!("{}: {}", s.country(), m.name()), &m);
            w.add(format!("{dir}/{}.svg", m.name()), render::render_heatmap(&grid, &palette)?);
        }
        w.json(format!("{dir}/indices.json"), &alignment::index_report(s));
        w.json(format!("{dir}/foresight_sophistication.json"), &alignment::foresight_sophistication(s));
        let net = network::build_policy_network(s);
        add_network(&mut w, &format!("{dir}/network"), s.country(), &net, seed);
    }

    for kind in ComponentKind::ALL {
        let net = network::build_cooccurrence_network(&c, kind);
        add_network(&mut w, &format!("networks/cooccurrence_{kind}"), kind.as_str(), &net, seed);

        let table = analytics::prevalence(&c, kind).map_err(analysis)?;
        let series: Vec<(String, f64)> = table
            .entries
            .iter()
            .map(|e| (e.component.display_name().to_string(), e.percent))
            .collect();
        w.add(
            format!("prevalence/{kind}.svg"),
            render::render_bars(&format!("{kind} prevalence (%)"), &series, Orientation::Horizontal)?,
        );
        w.json(format!("prevalence/{kind}.json"), &table);
    }

    let reports = analytics::country_comparison(&c);
    w.json("indices.json", &reports);
    w.add(
        "comparison.svg",
        render::render_heatmap(&HeatmapGrid::from_index_reports("index comparison", &reports), &palette)?,
    );
    for metric in [AgainstArg::Coverage, AgainstArg::Mean, AgainstArg::Sai] {
        w.add(
            format!("bars/{}.svg", metric.name()),
            render::render_bars(metric.name(), &bars_for(&reports, metric), Orientation::Vertical)?,
        );
    }

    for (name, grouping) in [("model", Grouping::Model), ("region", Grouping::Region), ("wave", Grouping::Wave)] {
        let profiles = analytics::group_profile(&c, grouping);
        for p in &profiles {
            for m in &p.mean_matrices {
                let label = slug(p.key.label());
                w.add(format!("groups/{name}/{label}_{}.csv", m.name()), m.to_csv());
                let grid = HeatmapGrid::from_mean_matrix(format!("{}: {}", p.key.label(), m.name()), m);
                w.add(format!("groups/{name}/{label}_{}.svg", m.name()), render::render_heatmap(&grid, &palette)?);
            }
        }
        w.json(format!("groups/{name}.json"), &profiles);
    }

    w.json("strongest_pairs.json", &analytics::strongest_pairs(&c, AlignmentScore::STRONG).map_err(analysis)?);
    w.json("temporal_trends.json", &analytics::temporal_trends(&c));

    w.finish(ReportManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        corpus_sha256: sha256_hex(&bytes),
        layout_seed: seed.0,
        artifacts: Vec::new(),
    })
}

fn add_network(w: &mut ReportWriter, stem: &str, name: &str, net: &PolicyNetwork, seed: LayoutSeed) {
    let partition = network::detect_communities(net);
    for format in [GraphFormat::GraphMl, GraphFormat::Dot, GraphFormat::NodeLinkJson] {
        w.add(
            format!("{stem}.{}", format.extension()),
            render::export_graph(net, Some(&partition), format),
        );
    }
    w.add(format!("{stem}.svg"), render::render_network(net, seed, None));
    w.json(format!("{stem}_summary.json"), &network_summary(name, net));
}
