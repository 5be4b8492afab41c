use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wtgep::dwt::{self, Extension};
use wtgep::evolution::GenerationRecord;
use wtgep::forecast::{run_with, GepTrainer};
use wtgep::genome::{Chromosome, ConstStyle, Program};
use wtgep_cli::{config, grid, load_csv, output, resolve, BasisChoice, CliError, GridSpec, Overrides, Result};

/// Wavelet-decomposed gene expression programming forecaster.
#[derive(Parser)]
#[command(name = "wtgep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit and evaluate one configuration.
    Run(RunArgs),
    /// Sweep bases x levels x seeds and write grid.csv.
    Grid(GridArgs),
    /// Write the wavelet components of a series to components.csv.
    Decompose(DecomposeArgs),
    /// Print the expression encoded by a chromosome file.
    Decode(DecodeArgs),
}

#[derive(Args)]
struct Input {
    /// CSV file with a header row.
    input: PathBuf,
    /// Value column (default: the last column).
    #[arg(long)]
    column: Option<String>,
    /// TOML file with run settings; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ModelArgs {
    /// Boundary handling of the transform: symmetric or periodization.
    #[arg(long, value_parser = parse_extension)]
    extension: Option<Extension>,
    #[arg(long)]
    train_fraction: Option<f64>,
    /// Population size.
    #[arg(long)]
    pop: Option<usize>,
    /// Maximum number of generations.
    #[arg(long)]
    gens: Option<usize>,
    /// Normal genes per chromosome.
    #[arg(long)]
    genes: Option<usize>,
    /// Decompose only the history before each forecast origin.
    #[arg(long)]
    strict_causal: bool,
    /// Drop the random numerical constants from the genes.
    #[arg(long)]
    no_constants: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    input: Input,
    /// haar, db10, sym8, coif5 or none.
    #[arg(long)]
    basis: Option<BasisChoice>,
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    model: ModelArgs,
    /// Print progress to stderr every N generations.
    #[arg(long, value_name = "N")]
    progress: Option<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct GridArgs {
    #[command(flatten)]
    input: Input,
    /// Comma-separated bases.
    #[arg(long, value_delimiter = ',', default_value = "haar,db10,sym8,coif5")]
    basis: Vec<BasisChoice>,
    /// Comma-separated decomposition depths.
    #[arg(long, value_delimiter = ',', default_value = "4,5")]
    levels: Vec<usize>,
    /// Comma-separated seeds (default: the configured seed).
    #[arg(long, value_delimiter = ',')]
    seed: Vec<u64>,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct DecomposeArgs {
    /// CSV file with a header row.
    input: PathBuf,
    #[arg(long)]
    column: Option<String>,
    #[arg(long, default_value = "coif5")]
    basis: dwt::Basis,
    #[arg(long, default_value_t = 4)]
    levels: usize,
    #[arg(long, value_parser = parse_extension, default_value = "symmetric")]
    extension: Extension,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct DecodeArgs {
    /// Chromosome in the text format written to models.txt.
    chromosome: PathBuf,
    /// Print constant values instead of their labels.
    #[arg(long)]
    values: bool,
}

fn parse_extension(s: &str) -> Result<Extension, String> {
    match s {
        "symmetric" => Ok(Extension::Symmetric),
        "periodization" | "per" => Ok(Extension::Periodization),
        _ => Err(format!("unknown extension '{s}' (expected symmetric or periodization)")),
    }
}

fn overrides(input: &Input, model: &ModelArgs) -> Overrides {
    Overrides {
        column: input.column.clone(),
        extension: model.extension,
        train_fraction: model.train_fraction,
        population: model.pop,
        generations: model.gens,
        genes: model.genes,
        strict_causal: model.strict_causal,
        no_constants: model.no_constants,
        ..Overrides::default()
    }
}

fn file_config(path: Option<&Path>) -> Result<Option<toml::Table>> {
    path.map(config::read_config).transpose()
}

fn thread_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {} worker threads: {e}", jobs.unwrap_or(0))))
}

fn run(args: RunArgs) -> Result<()> {
    let mut flags = overrides(&args.input, &args.model);
    flags.basis = args.basis;
    flags.levels = args.levels;
    flags.seed = args.seed;
    let resolved = resolve(file_config(args.input.config.as_deref())?, &flags)?;
    let dataset = load_csv(&args.input.input, resolved.column.as_deref())?;
    let every = args.progress.unwrap_or(0);
    let progress = |component: usize, rec: &GenerationRecord<'_>| {
        if every > 0 && rec.generation.is_multiple_of(every) {
            let expr = Program::decode(rec.best).to_infix(ConstStyle::Value);
            eprintln!("component {component} generation {} fitness {:.6} {expr}", rec.generation, rec.best_fitness);
        }
    };
    let trainer = GepTrainer { progress: Some(&progress) };
    let report = thread_pool(args.model.jobs)?.install(|| run_with(&dataset, &resolved.forecast, &trainer))?;
    output::write_run(&args.out, &report)?;
    print!("{}", output::summary_table(&report));
    Ok(())
}

fn grid(args: GridArgs) -> Result<()> {
    let mut flags = overrides(&args.input, &args.model);
    // The swept dimensions are set per cell; only a valid base is needed here.
    flags.basis = Some(BasisChoice::None);
    flags.levels = Some(0);
    let resolved = resolve(file_config(args.input.config.as_deref())?, &flags)?;
    let dataset = load_csv(&args.input.input, resolved.column.as_deref())?;
    let seeds = if args.seed.is_empty() { vec![resolved.forecast.evolution.rng_seed] } else { args.seed };
    let spec = GridSpec { bases: args.basis, levels: args.levels, seeds };
    let results = thread_pool(args.model.jobs)?.install(|| grid::run_grid(&dataset, &resolved.forecast, &spec))?;
    std::fs::create_dir_all(&args.out).map_err(|source| CliError::Io { path: args.out.clone(), source })?;
    grid::write_grid(&args.out.join("grid.csv"), &results)?;
    let failed = results.iter().filter(|r| r.outcome.is_err()).count();
    for r in &results {
        let c = r.cell;
        match &r.outcome {
            Ok((fit, pred)) => println!(
                "{:<6} {:>2} {:>6}  fit {:>10.3} {:>10.3}  pred {:>10.3} {:>10.3}",
                c.basis, c.levels, c.seed, fit.rmse, fit.mae, pred.rmse, pred.mae
            ),
            Err(e) => println!("{:<6} {:>2} {:>6}  failed: {e}", c.basis, c.levels, c.seed),
        }
    }
    if let Some(i) = grid::best_cell(&results) {
        let c = results[i].cell;
        println!("best: {} with {} levels, seed {}", c.basis, c.levels, c.seed);
    }
    if failed == results.len() {
        return Err(CliError::GridFailed(failed));
    }
    Ok(())
}

fn decompose(args: DecomposeArgs) -> Result<()> {
    let dataset = load_csv(&args.input, args.column.as_deref())?;
    let parts = dwt::components(&dataset.values, &args.basis.filter_bank(), args.levels, args.extension)?;
    output::write_components(&args.out, &dataset, &parts)
}

fn decode(args: DecodeArgs) -> Result<()> {
    let path = &args.chromosome;
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
    let chromosome: Chromosome = text.parse()?;
    let style = if args.values { ConstStyle::Value } else { ConstStyle::Label };
    println!("{}", Program::decode(&chromosome).to_infix(style));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Grid(a) => grid(a),
        Command::Decompose(a) => decompose(a),
        Command::Decode(a) => decode(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::FAILURE
        }
    }
}
