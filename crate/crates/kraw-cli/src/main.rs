use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kraw_cli::checks;
use kraw_cli::config::Settings;
use kraw_cli::error::{CliError, CliResult};
use kraw_cli::sweep::{cmd_compare, cmd_eval, cmd_figure, cmd_regions, SweepSpec, Table};
use krawtchouk::RegionTag;

/// Exact Krawtchouk polynomials and their WKB approximations.
#[derive(Debug, Parser)]
#[command(name = "kraw", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Size N of the instance.
    #[arg(long = "N", global = true)]
    big_n: Option<usize>,
    /// Probability q, as a decimal or a fraction a/b.
    #[arg(long, global = true)]
    q: Option<String>,
    /// A single degree n.
    #[arg(long, global = true, conflicts_with = "n_range")]
    n: Option<usize>,
    /// A single abscissa x.
    #[arg(long, global = true, conflicts_with = "x_range")]
    x: Option<usize>,
    /// Inclusive abscissa range a:b.
    #[arg(long, global = true, value_parser = parse_range)]
    x_range: Option<RangeInclusive<usize>>,
    /// Inclusive degree range a:b.
    #[arg(long, global = true, value_parser = parse_range)]
    n_range: Option<RangeInclusive<usize>>,
    /// Force one region formula instead of the classifier.
    #[arg(long, global = true)]
    region: Option<RegionTag>,
    /// Settings file of key = value lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Significant digits for exact values.
    #[arg(long, global = true, default_value_t = 30)]
    digits: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact values K_n(x).
    Eval,
    /// Exact values against the region approximations.
    Compare,
    /// Region tag of every grid point.
    Regions,
    /// The comparison behind one of the figures 3 to 14.
    Figures { id: u8 },
    /// Runs the acceptance suite; exit status 2 on any failure.
    Check {
        /// Run only this criterion (1 to 7).
        #[arg(long)]
        criterion: Option<u8>,
        /// Also list every sub-check.
        #[arg(long)]
        verbose: bool,
    },
    /// Prints the default settings file.
    Defaults,
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("`{s}` is not of the form a:b"))?;
    let a: usize = a.trim().parse().map_err(|_| format!("bad range start `{a}`"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad range end `{b}`"))?;
    Ok(a..=b)
}

fn spec(cli: &Cli, settings: Settings) -> CliResult<SweepSpec> {
    let big_n = cli.big_n.ok_or_else(|| CliError::Usage("--N is required".into()))?;
    let q = cli.q.as_deref().ok_or_else(|| CliError::Usage("--q is required".into()))?;
    let mut spec = SweepSpec::new(big_n, q, settings)?;
    if let Some(n) = cli.n {
        spec.n = n..=n;
    }
    if let Some(r) = &cli.n_range {
        spec.n = r.clone();
    }
    if let Some(x) = cli.x {
        spec.x = x..=x;
    }
    if let Some(r) = &cli.x_range {
        spec.x = r.clone();
    }
    spec.region = cli.region;
    spec.digits = cli.digits;
    Ok(spec)
}

fn output(cli: &Cli) -> CliResult<Box<dyn Write>> {
    Ok(match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(cli: &Cli, table: &Table) -> CliResult<()> {
    let mut out = output(cli)?;
    table.write(&mut out)?;
    out.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> CliResult<ExitCode> {
    let settings = match &cli.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    match &cli.command {
        Command::Eval => emit(cli, &cmd_eval(&spec(cli, settings)?)?)?,
        Command::Compare => emit(cli, &cmd_compare(&spec(cli, settings)?)?)?,
        Command::Regions => emit(cli, &cmd_regions(&spec(cli, settings)?)?)?,
        Command::Figures { id } => emit(cli, &cmd_figure(*id, settings)?)?,
        Command::Defaults => {
            let mut out = output(cli)?;
            out.write_all(Settings::default().render().as_bytes())?;
            out.flush()?;
        }
        Command::Check { criterion, verbose } => {
            let ids: Vec<u8> = match criterion {
                Some(id) if (1..=7).contains(id) => vec![*id],
                Some(id) => return Err(CliError::Usage(format!("no criterion {id}; expected 1..=7"))),
                None => (1..=7).collect(),
            };
            let mut out = output(cli)?;
            let mut ok = true;
            for id in ids {
                let report = checks::run(id, &settings.classifier, &settings.tol);
                writeln!(out, "{}", report.line())?;
                for c in &report.checks {
                    if *verbose || !c.passed {
                        writeln!(out, "    {} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.key, c.detail)?;
                    }
                }
                ok &= report.passed();
            }
            out.flush()?;
            return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("kraw: {e}");
            ExitCode::from(1)
        }
    }
}
