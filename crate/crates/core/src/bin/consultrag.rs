use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use futures::StreamExt;

use consultrag::answer::{QueryRequest, StructuredAnswer};
use consultrag::config::Config;
use consultrag::index::VectorIndex;
use consultrag::ingest::store::read_records;
use consultrag::ingest::{
    import_dump, ingest_normalized, CorpusStore, DumpFormat, FeedbackClient, IngestReport, StakeholderGroup,
};
use consultrag::pipeline::{build_index, Corpus, QueryOutcome};
use consultrag::service::{self, ApiQuery};

#[derive(Parser)]
#[command(name = "consultrag", version, about = "Grounded answers over public-consultation feedback")]
struct Cli {
    /// TOML config file; `CONSULTRAG_*` variables override it.
    #[arg(long, global = true, env = "CONSULTRAG_CONFIG")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the HTTP API.
    Serve,
    /// Answer one question and print the result.
    Query(QueryArgs),
    #[command(subcommand)]
    Ingest(IngestCommand),
    #[command(subcommand)]
    Index(IndexCommand),
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long)]
    question: String,
    /// Stakeholder group filter; repeat or comma-separate.
    #[arg(long, value_delimiter = ',')]
    whom: Vec<String>,
    /// Topic filter; repeat or comma-separate.
    #[arg(long, value_delimiter = ',')]
    about: Vec<String>,
    #[arg(long)]
    k: Option<usize>,
    /// Answer language (ISO 639-1); defaults to the question's language.
    #[arg(long)]
    language: Option<String>,
    /// Local embedder and extractive answers only; no network.
    #[arg(long)]
    offline: bool,
    /// Print the answer as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum IngestCommand {
    /// Fetch one initiative's feedback from the portal API.
    Fetch {
        #[arg(long)]
        initiative: String,
        /// Corpus store to append to; defaults to the configured corpus.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        page_size: Option<usize>,
    },
    /// Import a JSON-lines dump.
    Import {
        #[arg(long)]
        file: PathBuf,
        /// Corpus store to append to; defaults to the configured corpus.
        #[arg(long)]
        store: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum IndexCommand {
    /// Embed the corpus and write the index file.
    Build {
        /// Defaults to the configured index path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print header and metadata counts of an index file.
    Stats {
        /// Defaults to the configured index path.
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

type Failure = Box<dyn std::error::Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let default_level = if matches!(cli.command, Command::Serve) { "info" } else { "warn" };
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new(default_level)),
        )
        .with_writer(std::io::stderr)
        .init();

    let cfg = match &cli.config {
        Some(p) => Config::load(p),
        None => Config::from_env(),
    };
    let cfg = match cfg {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };

    let rt = match cli.command {
        Command::Serve => tokio::runtime::Builder::new_multi_thread().enable_all().build(),
        _ => tokio::runtime::Builder::new_current_thread().enable_all().build(),
    }
    .expect("tokio runtime");

    let result = rt.block_on(async move {
        match cli.command {
            Command::Serve => service::serve(cfg).await.map(|_| ExitCode::SUCCESS).map_err(Failure::from),
            Command::Query(args) => run_query(cfg, args).await,
            Command::Ingest(cmd) => run_ingest(cfg, cmd).await,
            Command::Index(cmd) => run_index(cfg, cmd).await,
        }
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

async fn run_query(mut cfg: Config, args: QueryArgs) -> Result<ExitCode, Failure> {
    if args.offline {
        cfg.make_offline();
    }
    let engine = cfg.build_engine().await?;
    let api = ApiQuery {
        question: args.question,
        whom: args.whom,
        about: args.about,
        k: args.k,
        language: args.language,
        session_id: None,
    };
    let req = service::to_request(&api, &engine.corpus().vocabularies(), engine.settings().default_k)
        .map_err(|e| e.to_string())?;
    let outcome = engine.answer(&req).await?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&outcome)?);
    } else {
        print!("{}", render(&req, &outcome));
    }
    Ok(ExitCode::SUCCESS)
}

fn render(req: &QueryRequest, o: &QueryOutcome) -> String {
    use std::fmt::Write;
    let a: &StructuredAnswer = &o.answer;
    let mut s = String::new();
    let _ = writeln!(s, "Question: {}", req.question);
    let st = o.retrieval_stats;
    let _ = writeln!(
        s,
        "Retrieval: {} candidates, {} after filter, {} after re-rank (k={})\n",
        st.candidates, st.after_filter, st.after_rerank, o.k_used
    );
    if a.insufficient_evidence {
        let reason = a
            .insufficiency_reason
            .and_then(|r| serde_json::to_value(r).ok())
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        let _ = writeln!(s, "No grounded answer available: insufficient evidence ({reason}).");
        return s;
    }
    let _ = writeln!(s, "OVERVIEW\n{}\n", a.overview);
    let _ = writeln!(s, "INSIGHTS BY GROUP");
    for (g, points) in &a.group_insights {
        let _ = writeln!(s, "  {g}");
        for p in points {
            let _ = writeln!(s, "    - {p}");
        }
    }
    let _ = writeln!(s, "\nRECOMMENDATIONS");
    for (i, r) in a.recommendations.iter().enumerate() {
        let _ = writeln!(s, "  {}. {r}", i + 1);
    }
    let _ = writeln!(s, "\nSOURCES");
    for (i, src) in a.sources.iter().enumerate() {
        let _ = writeln!(
            s,
            "  [{}] {} | {} | {} | {} | {} | {}\n      {}",
            i + 1,
            src.record_id,
            src.stakeholder_group,
            src.organization_name.as_deref().unwrap_or("-"),
            src.country,
            src.language,
            src.initiative_title,
            src.excerpt
        );
    }
    if a.localization_failed {
        let _ = writeln!(s, "\n(answer left in `{}`: translation unavailable)", a.language);
    }
    s
}

fn report_exit(report: &IngestReport) -> ExitCode {
    println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
    if report.rejected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

async fn run_ingest(cfg: Config, cmd: IngestCommand) -> Result<ExitCode, Failure> {
    match cmd {
        IngestCommand::Import { file, store } => {
            let mut store = CorpusStore::open(store.unwrap_or_else(|| cfg.paths.corpus.clone()))?;
            let report = import_dump(&file, DumpFormat::JsonLines, &mut store)?;
            Ok(report_exit(&report))
        }
        IngestCommand::Fetch { initiative, out, page_size } => {
            let client = FeedbackClient::new(cfg.fetch.fetch_config())?;
            let meta = client.initiative(&initiative).await?;
            let mut stream = client.feedback_stream(&initiative, page_size.unwrap_or(cfg.fetch.page_size));
            let mut candidates = Vec::new();
            let mut failure = None;
            while let Some(item) = stream.next().await {
                match item {
                    Ok(raw) => candidates.push(Ok((raw, meta.clone()))),
                    Err(e) => failure = Some(e),
                }
            }
            // Whatever arrived is kept; re-running is safe because ingestion
            // deduplicates against the store.
            let mut store = CorpusStore::open(out.unwrap_or_else(|| cfg.paths.corpus.clone()))?;
            let report = ingest_normalized(candidates, &mut store)?;
            match failure {
                None => Ok(report_exit(&report)),
                Some(e) => {
                    println!("{}", serde_json::to_string_pretty(&report)?);
                    match e.cursor() {
                        Some(page) => eprintln!("error: fetch stopped at page {page}: {e}"),
                        None => eprintln!("error: {e}"),
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
    }
}

fn index_path(explicit: Option<PathBuf>, cfg: &Config) -> Result<PathBuf, Failure> {
    explicit.or_else(|| cfg.paths.index.clone()).ok_or_else(|| "no index path: pass one or set paths.index".into())
}

async fn run_index(cfg: Config, cmd: IndexCommand) -> Result<ExitCode, Failure> {
    match cmd {
        IndexCommand::Build { out } => {
            let out = index_path(out, &cfg)?;
            let corpus = Corpus::new(read_records(&cfg.paths.corpus)?);
            let embedder = cfg.embedding.build()?;
            let index = build_index(&corpus, embedder.as_ref()).await?;
            index.save(&out)?;
            println!(
                "{}",
                serde_json::json!({ "path": out, "dim": index.dim(), "count": index.len(), "embedder": embedder.describe() })
            );
            Ok(ExitCode::SUCCESS)
        }
        IndexCommand::Stats { file } => {
            let path = index_path(file, &cfg)?;
            println!("{}", serde_json::to_string_pretty(&stats(&path)?)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn stats(path: &Path) -> Result<serde_json::Value, Failure> {
    let index = VectorIndex::load(path, None)?;
    let mut groups = std::collections::BTreeMap::<StakeholderGroup, usize>::new();
    let mut initiatives = std::collections::BTreeMap::<String, usize>::new();
    let mut truncated = 0;
    for c in index.chunks() {
        *groups.entry(c.meta.stakeholder_group).or_default() += 1;
        *initiatives.entry(c.meta.initiative_id.clone()).or_default() += 1;
        truncated += usize::from(c.truncated);
    }
    Ok(serde_json::json!({
        "path": path,
        "format_version": consultrag::index::FORMAT_VERSION,
        "dim": index.dim(),
        "count": index.len(),
        "truncated": truncated,
        "stakeholder_groups": groups,
        "initiatives": initiatives,
    }))
}
