use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use allelofear::io::commands::cmd_verify_with;
use allelofear::io::config::Analysis;
use allelofear::io::{run_config, Format, RunConfig, Suite};
use allelofear::{Error, Result};

#[derive(Parser)]
#[command(
    name = "allelofear",
    version,
    about = "Equilibria, bifurcations and dynamics of the allelopathic fear model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output.dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Artifact format; `report.json` is always written.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    Equilibria(Common),
    Simulate(Common),
    Bifurcation(Common),
    /// Run acceptance suites: thresholds, ode, pde, sandwich, wedge, oracles or all.
    Verify {
        suite: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("ALLELOFEAR_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("ALLELOFEAR_THREADS must be a count, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(e.to_string()))
}

fn load(common: &Common, expected: Analysis) -> Result<RunConfig> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config <path> is required".into()))?;
    let cfg = RunConfig::load(path)?;
    let found = cfg.validate()?;
    if found != expected {
        return Err(Error::Config(format!(
            "config selects `{}` but the command is `{}`",
            found.name(),
            expected.name()
        )));
    }
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<bool> {
    configure_threads()?;
    let (common, output) = match &cli.command {
        Command::Verify { suite, common } => {
            let cfg = match &common.config {
                Some(_) => Some(load(common, Analysis::Verify)?),
                None => None,
            };
            let suite = match (suite, &cfg) {
                (Some(s), _) => s.parse::<Suite>()?,
                (None, Some(c)) => c.verify.as_ref().map_or(Suite::All, |v| v.suite),
                (None, None) => Suite::All,
            };
            let out = cmd_verify_with(cfg.as_ref(), suite, |line| println!("{line}"))?;
            (common, (cfg, out))
        }
        Command::Equilibria(c) | Command::Simulate(c) | Command::Bifurcation(c) => {
            let expected = match &cli.command {
                Command::Equilibria(_) => Analysis::Equilibria,
                Command::Simulate(_) => Analysis::Simulate,
                _ => Analysis::Bifurcation,
            };
            let cfg = load(c, expected)?;
            let out = run_config(&cfg)?;
            (c, (Some(cfg), out))
        }
    };
    let (cfg, out) = output;
    let dir = common
        .out
        .clone()
        .or_else(|| cfg.as_ref().and_then(|c| c.output_dir().map(PathBuf::from)));
    let formats = match common.format {
        Some(FormatArg::Json) => vec![Format::Json],
        Some(FormatArg::Csv) => vec![Format::Csv],
        None => cfg.as_ref().map_or(vec![Format::Json, Format::Csv], |c| c.formats()),
    };
    match dir {
        Some(dir) => {
            for path in out.write(&dir, &formats)? {
                eprintln!("wrote {}", path.display());
            }
        }
        // verify already streamed its lines
        None if matches!(cli.command, Command::Verify { .. }) => {}
        None => print!("{}", out.envelope.to_json()),
    }
    if let Some(s) = &out.envelope.summary {
        eprintln!("{} passed, {} failed", s.passed, s.failed);
    }
    Ok(out.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
