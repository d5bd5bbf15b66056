use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use churn_kit::dataset::YearMonth;
use churn_kit::pipeline::{
    generate_synthetic, run_experiment, ClassifierKind, ConfigMap, ExperimentConfig, GeneratorSpec,
    SuiteConfig, DATA_DIR_ENV,
};
use churn_kit::sampler::SamplerKind;
use churn_kit::Result;

#[derive(Parser)]
#[command(name = "churn", version, about = "Two-month-ahead churn experiments on monthly CSV extracts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write synthetic monthly extracts.
    Gen(GenArgs),
    /// Train on one month, test on another.
    Run(RunArgs),
    /// Run a grid of experiments described by a key = value file.
    Suite(SuiteArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 20_000)]
    customers: usize,
    /// Inclusive range FROM:TO, e.g. 201505:201512.
    #[arg(long)]
    months: String,
    #[arg(long, default_value_t = 0.07)]
    churn_rate: f64,
    #[arg(long, default_value_t = 0.5)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MethodArgs {
    #[arg(long)]
    k_smote: Option<usize>,
    #[arg(long)]
    m_borderline: Option<usize>,
    #[arg(long)]
    target_ratio: Option<f64>,
    #[arg(long)]
    trees: Option<usize>,
    #[arg(long)]
    svm_c: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Leave timing columns empty so reports are byte-reproducible.
    #[arg(long)]
    no_timings: bool,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    train_month: YearMonth,
    #[arg(long)]
    test_month: YearMonth,
    #[arg(long, default_value = "none")]
    sampler: SamplerKind,
    #[arg(long, default_value = "rf")]
    classifier: ClassifierKind,
    /// Use class-weighted Gini and voting (turns `rf` into `rf-cost-sensitive`).
    #[arg(long)]
    cost_sensitive: bool,
    #[arg(long, env = DATA_DIR_ENV)]
    data: PathBuf,
    #[arg(long, default_value = "churn-out")]
    out: PathBuf,
    #[command(flatten)]
    method: MethodArgs,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, env = DATA_DIR_ENV)]
    data: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    months: Option<String>,
    #[arg(long)]
    samplers: Option<String>,
    #[arg(long)]
    classifiers: Option<String>,
    #[command(flatten)]
    method: MethodArgs,
}

fn parse_range(v: &str) -> Result<Vec<YearMonth>> {
    let (a, b) = v
        .split_once(':')
        .ok_or_else(|| churn_kit::Error::InvalidMonth(format!("expected FROM:TO, got {v:?}")))?;
    Ok(YearMonth::range(a.parse()?, b.parse()?))
}

fn gen(args: GenArgs) -> Result<()> {
    let mut spec = GeneratorSpec::new(args.customers, parse_range(&args.months)?, args.seed);
    spec.churn_rate = args.churn_rate;
    spec.noise_level = args.noise;
    let paths = generate_synthetic(&spec, &args.out)?;
    println!("wrote {} month files to {}", paths.len(), args.out.display());
    Ok(())
}

fn run(args: RunArgs) -> Result<()> {
    let mut cfg = ExperimentConfig::new(args.data, args.train_month, args.test_month);
    cfg.sampler = args.sampler;
    cfg.classifier.kind = match (args.classifier, args.cost_sensitive) {
        (ClassifierKind::Rf, true) => ClassifierKind::RfCostSensitive,
        (k, _) => k,
    };
    cfg.output_dir = args.out;
    let m = args.method;
    if let Some(v) = m.k_smote {
        cfg.sampler_config.k_smote = v;
    }
    if let Some(v) = m.m_borderline {
        cfg.sampler_config.m_borderline = v;
    }
    if let Some(v) = m.target_ratio {
        cfg.sampler_config.target_ratio = v;
    }
    if let Some(v) = m.trees {
        cfg.classifier.n_trees = v;
    }
    if let Some(v) = m.svm_c {
        cfg.classifier.svm_c = v;
    }
    if let Some(v) = m.seed {
        cfg.seed = v;
    }
    cfg.record_timings = !m.no_timings;
    let report = run_experiment(&cfg)?;
    print!("{}", churn_kit::pipeline::render_markdown(std::slice::from_ref(&report.row)));
    println!("report: {}", cfg.report_path().display());
    Ok(())
}

fn suite(args: SuiteArgs) -> Result<()> {
    let mut map = ConfigMap::load(&args.config)?;
    let overrides = [
        ("data_dir", args.data.map(|p| p.display().to_string())),
        ("output_dir", args.out.map(|p| p.display().to_string())),
        ("months", args.months),
        ("samplers", args.samplers),
        ("classifiers", args.classifiers),
        ("k_smote", args.method.k_smote.map(|v| v.to_string())),
        ("m_borderline", args.method.m_borderline.map(|v| v.to_string())),
        ("target_ratio", args.method.target_ratio.map(|v| v.to_string())),
        ("trees", args.method.trees.map(|v| v.to_string())),
        ("svm_c", args.method.svm_c.map(|v| v.to_string())),
        ("seed", args.method.seed.map(|v| v.to_string())),
        ("record_timings", args.method.no_timings.then(|| "false".to_string())),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            map.set(key, v);
        }
    }
    if map.get("months").is_some() && map.get("train_months").is_some() {
        return Err(churn_kit::Error::Config {
            line: 0,
            msg: "`--months` conflicts with `train_months` in the file".into(),
        });
    }
    let cfg = SuiteConfig::from_map(&map)?;
    let (report, paths) = cfg.run_and_write()?;
    for p in &paths {
        println!("wrote {}", p.display());
    }
    if report.failures() > 0 {
        eprintln!("{} experiment(s) failed; see the status column", report.failures());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Run(a) => run(a),
        Command::Suite(a) => suite(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("churn: error: {e}");
            ExitCode::FAILURE
        }
    }
}
