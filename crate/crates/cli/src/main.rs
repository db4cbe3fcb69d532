use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hybrid_sampling::geo::{write_venues, Venue};
use hybrid_sampling::harness::{
    emit_figure_data, prepare_network, run_experiment, write_hybrid_files, Budget,
    ExperimentConfig, ResultTable,
};
use hybrid_sampling::ingest::write_edge_list;
use hybrid_sampling::synth::{build_synthetic_hybrid, synthetic_city, CityConfig, SynthConfig};
use hybrid_sampling::{Error, Method};

#[derive(Parser)]
#[command(
    name = "hsa",
    version,
    about = "Sampling experiments on hybrid social-affiliation networks"
)]
struct Cli {
    /// Log progress (repeat for more detail).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic network to plain-text files.
    Generate(GenerateArgs),
    /// Print the exact label distribution of the configured network.
    Truth(TruthArgs),
    /// Run an experiment and write its result table.
    Run(RunArgs),
    /// Turn result tables into tidy figure data.
    Figdata(FigdataArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[command(subcommand)]
    kind: GenerateKind,
}

#[derive(Subcommand)]
enum GenerateKind {
    /// Three-BA-graph hybrid: target.txt, auxiliary.txt, affiliation.txt.
    Synthetic {
        #[arg(long, default_value_t = 10_000)]
        n_per_graph: usize,
        #[arg(long, default_value_t = 20_000)]
        extra_pairs: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// LBSN-style city: social.txt, checkins.tsv, venues.txt.
    City {
        #[arg(long, default_value_t = 1_000)]
        users: usize,
        #[arg(long, default_value_t = 1_000)]
        venues: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct TruthArgs {
    #[arg(long)]
    config: PathBuf,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Replace the configured methods.
    #[arg(long = "method", value_delimiter = ',')]
    methods: Vec<Method>,
    #[arg(long, value_delimiter = ',')]
    alpha: Vec<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Budgets such as `2000`, `2%` or `0.02`.
    #[arg(long, value_delimiter = ',')]
    budget: Vec<Budget>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FigdataArgs {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Result tables written by `run`.
    #[arg(required = true)]
    tables: Vec<PathBuf>,
}

enum Failure {
    Config(Error),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config_error() {
            Failure::Config(e)
        } else {
            Failure::Runtime(e)
        }
    }
}

fn load_config(path: &Path) -> Result<ExperimentConfig, Failure> {
    ExperimentConfig::load(path).map_err(Failure::Config)
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Failure + '_ {
    move |e| {
        Failure::Runtime(Error::Io {
            path: path.to_path_buf(),
            source: e,
        })
    }
}

fn generate(kind: GenerateKind) -> Result<(), Failure> {
    match kind {
        GenerateKind::Synthetic {
            n_per_graph,
            extra_pairs,
            seed,
            out,
        } => {
            let cfg = SynthConfig::with_size(n_per_graph, extra_pairs, seed);
            cfg.validate().map_err(Failure::Config)?;
            let s = build_synthetic_hybrid(&cfg)?;
            std::fs::create_dir_all(&out).map_err(io_err(&out))?;
            let paths = ["target.txt", "auxiliary.txt", "affiliation.txt"].map(|f| out.join(f));
            write_hybrid_files(&s.network, &paths[0], &paths[1], &paths[2])?;
            for p in &paths {
                println!("{}", p.display());
            }
        }
        GenerateKind::City {
            users,
            venues,
            seed,
            out,
        } => {
            let cfg = CityConfig {
                users,
                venues,
                ..CityConfig::small(seed)
            };
            let c = synthetic_city(&cfg)?;
            std::fs::create_dir_all(&out).map_err(io_err(&out))?;
            let social = out.join("social.txt");
            write_edge_list(&social, c.network.target(), None)?;
            let mut coords: Vec<Venue> = c.venues.iter().copied().collect();
            coords.sort_by_key(|v| v.id);
            let venue_file = out.join("venues.txt");
            write_venues(&venue_file, &coords)?;
            let checkins = out.join("checkins.tsv");
            let f = File::create(&checkins).map_err(io_err(&checkins))?;
            let mut w = BufWriter::new(f);
            for (u, v) in c.network.affiliation().edges() {
                let p = coords[v];
                writeln!(w, "{u}\t0\t{}\t{}\t{v}", p.lat, p.lon).map_err(io_err(&checkins))?;
            }
            w.flush().map_err(io_err(&checkins))?;
            for p in [&social, &checkins, &venue_file] {
                println!("{}", p.display());
            }
        }
    }
    Ok(())
}

fn truth(args: TruthArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.config)?;
    let prep = prepare_network(&cfg.network, cfg.labels)?;
    let mut text = String::from("label,theta,theta_covered\n");
    let mut labels: Vec<_> = prep
        .truth
        .labels()
        .chain(prep.covered_truth.labels())
        .collect();
    labels.sort_unstable();
    labels.dedup();
    for l in labels {
        text.push_str(&format!(
            "{l},{},{}\n",
            prep.truth.get(l),
            prep.covered_truth.get(l)
        ));
    }
    match &args.output {
        Some(p) => std::fs::write(p, text).map_err(io_err(p))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let mut cfg = load_config(&args.config)?;
    if !args.methods.is_empty() {
        cfg.methods = args.methods;
    }
    if !args.alpha.is_empty() {
        cfg.alpha = args.alpha;
    }
    if args.beta.is_some() {
        cfg.beta = args.beta;
    }
    if !args.budget.is_empty() {
        cfg.budget = args.budget;
    }
    cfg.runs = args.runs.unwrap_or(cfg.runs);
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    if args.output.is_some() {
        cfg.output = args.output;
    }
    cfg.validate().map_err(Failure::Config)?;
    let table = run_experiment(&cfg)?;
    if cfg.output.is_none() {
        table.write_csv(std::io::stdout().lock())?;
    }
    Ok(())
}

fn figdata(args: FigdataArgs) -> Result<(), Failure> {
    let tables = args
        .tables
        .iter()
        .map(|p| ResultTable::read_csv(p))
        .collect::<Result<Vec<_>, _>>()
        .map_err(Failure::Config)?;
    for p in emit_figure_data(&tables, &args.out)? {
        println!("{}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let result = match cli.command {
        Command::Generate(a) => generate(a.kind),
        Command::Truth(a) => truth(a),
        Command::Run(a) => run(a),
        Command::Figdata(a) => figdata(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("hsa: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("hsa: {e}");
            ExitCode::from(2)
        }
    }
}
