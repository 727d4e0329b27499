use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use revealed_lp::config::parse_family;
use revealed_lp::io::{emit, read_instance, read_json, write_json, Format};
use revealed_lp::{run, HarnessError, Kind, LearnerKind, RunConfig};
use revealed_lp_core::env::{generate_instance, Family};
use revealed_lp_core::geometry::validate_assumptions;

#[derive(Parser)]
#[command(name = "revealed-lp", version, about = "Online learners for linear programs with revealed optima")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one episode and write its log.
    Run(RunArgs),
    /// Check an instance file against the structural assumptions.
    Validate { instance: PathBuf },
    /// Generate a valid known-objective instance.
    GenInstance {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 5)]
        m: usize,
        #[arg(long = "N", default_value_t = 4)]
        bits: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(value_enum)]
    kind: Kind,
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    days: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long = "N")]
    bits: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum)]
    learner: Option<LearnerKind>,
    /// Constraint stream: grid_normals, vertex_anchored or edge_biased.
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Log destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Evaluate the setting's bounds; exit 2 if any fails.
    #[arg(long)]
    check_bounds: bool,
}

impl RunArgs {
    fn config(&self) -> revealed_lp::Result<RunConfig> {
        let base = match &self.config {
            Some(path) => read_json::<RunConfig>(path).map_err(|e| HarnessError::Config(e.to_string()))?,
            None => RunConfig::default(),
        };
        let flags = RunConfig {
            kind: Some(self.kind),
            seed: self.seed.unwrap_or(0),
            d: self.d,
            m: self.m,
            bits: self.bits,
            n: self.n,
            days: self.days,
            learner: self.learner,
            family: self.family,
            instance: self.instance.clone(),
            ..Default::default()
        };
        let mut cfg = base.merged(flags);
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        Ok(cfg)
    }
}

fn execute(cli: Cli) -> revealed_lp::Result<u8> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.config()?;
            let report = run(&cfg)?;
            emit(report.log(), args.format, args.out.as_deref())?;
            if !args.check_bounds {
                return Ok(0);
            }
            let checks = report.checks();
            for c in &checks {
                eprintln!("{}", c.line());
            }
            Ok(if checks.iter().all(|c| c.passed) { 0 } else { 2 })
        }
        Command::Validate { instance } => {
            let inst = read_instance(&instance).map_err(|e| HarnessError::Config(e.to_string()))?;
            let report = validate_assumptions(&inst.polytope, inst.bits);
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            Ok(if report.all_passed() { 0 } else { 3 })
        }
        Command::GenInstance { seed, d, m, bits, out } => {
            let inst = generate_instance(seed, d, m, bits)?.instance();
            match out {
                Some(path) => write_json(&inst, &path)?,
                None => println!("{}", serde_json::to_string_pretty(&inst).expect("instance serializes")),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
