mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use sushch_core::growth::{ball_sizes, exponents, exponents_text, Budget};
use sushch_core::mealy::export_dot;
use sushch_core::sushchansky::{preset, OrderType, PresetName, SushchanskyAutomaton};
use sushch_core::Alphabet;

use verify::{Knobs, Suite};

const MAX_RADIUS: usize = 40;
const MAX_DEPTH: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "sushch", version, about = "Sushchansky p-groups as automaton groups")]
struct Cli {
    /// Prime p; defaults to 3, or to the value in an order file.
    #[arg(long, global = true)]
    p: Option<u32>,
    /// `lex`, `lex-swapped`, or a path to an order JSON file.
    #[arg(long, global = true)]
    order: Option<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output path (a directory for `build`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the minimized automaton and print its parameters.
    Build,
    /// Run verification suites. Without --order, runs both bundled orders.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Tree depth for the orbit check (at most 8).
        #[arg(long, default_value_t = 5)]
        depth: usize,
        /// Word length for the tableau check (at most 8).
        #[arg(long, default_value_t = 6)]
        tableau_depth: usize,
        /// Random products in the tableau check.
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(0..=10_000))]
        samples: u64,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Ball sizes γ(n), optionally π(n), and the growth exponents.
    Growth {
        /// G_lambda, closure, K, H, H_<k> or L.
        #[arg(long, default_value = "G_lambda")]
        group: String,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        /// Also compute π(n), the largest element order in the ball.
        #[arg(long)]
        torsion: bool,
        /// Order search cap for --torsion (default p^7).
        #[arg(long)]
        torsion_cap: Option<u64>,
        #[arg(long)]
        exponents_only: bool,
        /// Stop after this many distinct elements.
        #[arg(long)]
        max_forms: Option<usize>,
        /// Time limit in seconds; overrides SUSHCH_BUDGET_SECS.
        #[arg(long)]
        budget_secs: Option<u64>,
    },
}

/// Failed checks (exit 1) versus bad input (exit 2).
enum Failure {
    Check,
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Build => build(cli),
        Command::Verify { suite, depth, tableau_depth, samples, seed } => {
            let (depth, tableau_depth) = (*depth, *tableau_depth);
            if !(2..=MAX_DEPTH).contains(&depth) || !(3..=MAX_DEPTH).contains(&tableau_depth) {
                return Err(anyhow::anyhow!(
                    "--depth must be in 2..={MAX_DEPTH} and --tableau-depth in 3..={MAX_DEPTH}"
                )
                .into());
            }
            let orders = match &cli.order {
                Some(o) => vec![(o.clone(), load_order(cli.p, o)?)],
                None => ["lex", "lex-swapped"]
                    .iter()
                    .map(|o| Ok((o.to_string(), load_order(cli.p, o)?)))
                    .collect::<anyhow::Result<_>>()?,
            };
            let report =
                verify::run(*suite, &orders, Knobs { depth, tableau_depth, samples: *samples as usize, seed: *seed });
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => json(&report)?,
                Format::Text => {
                    let mut s = String::new();
                    for c in &report.checks {
                        let status = if c.pass { "PASS" } else { "FAIL" };
                        s += &format!("{status} {} [{}] {}: {}\n", c.suite, c.order, c.name, c.detail);
                    }
                    s + &format!("{}\n", if report.pass { "all checks passed" } else { "some checks failed" })
                }
                f => return Err(anyhow::anyhow!("verify does not support --format {f:?}").into()),
            };
            emit(cli.out.as_deref(), &text)?;
            if report.pass {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Growth { group, radius, torsion, torsion_cap, exponents_only, max_forms, budget_secs } => {
            let lambda = load_order(cli.p, cli.order.as_deref().unwrap_or("lex"))?;
            let p = lambda.alphabet().p() as u32;
            let format = cli.format.unwrap_or(Format::Json);
            if *exponents_only {
                let e = exponents(p, (p * p) as usize).context("exponents")?;
                let text = match format {
                    Format::Json => json(&e)?,
                    Format::Text => exponents_text(&e),
                    f => return Err(anyhow::anyhow!("--exponents-only does not support --format {f:?}").into()),
                };
                return Ok(emit(cli.out.as_deref(), &text)?);
            }
            if *radius > MAX_RADIUS {
                return Err(anyhow::anyhow!("--radius must be at most {MAX_RADIUS}").into());
            }
            let name: PresetName = group.parse().map_err(anyhow::Error::from)?;
            let aut = SushchanskyAutomaton::build(&lambda);
            let g = preset(&aut, name).map_err(anyhow::Error::from)?;
            let mut budget = Budget::from_env();
            if let Some(m) = max_forms {
                budget.max_forms = *m;
            }
            if let Some(s) = budget_secs {
                budget.max_time = Duration::from_secs(*s);
            }
            let cap = torsion.then(|| torsion_cap.unwrap_or((p as u64).pow(7)));
            let report = ball_sizes(&g, *radius, cap, budget).context("growth")?;
            if report.partial {
                eprintln!(
                    "warning: budget exhausted; report is partial, complete up to radius {} of {radius}",
                    report.radius
                );
            }
            let text = match format {
                Format::Json => json(&report)?,
                Format::Csv => report.to_csv(),
                Format::Text => {
                    let gamma: Vec<String> = report.gamma.iter().map(u64::to_string).collect();
                    let mut s = format!(
                        "group={} radius={} partial={}\ngamma={}\n",
                        report.preset,
                        report.radius,
                        report.partial,
                        gamma.join(",")
                    );
                    if let Some(t) = &report.torsion {
                        let pi: Vec<String> = t.pi.iter().map(u64::to_string).collect();
                        s += &format!("pi={}\n", pi.join(","));
                    }
                    s + &report.exponents_text()
                }
                Format::Dot => return Err(anyhow::anyhow!("growth does not support --format dot").into()),
            };
            Ok(emit(cli.out.as_deref(), &text)?)
        }
    }
}

fn build(cli: &Cli) -> Result<(), Failure> {
    let lambda = load_order(cli.p, cli.order.as_deref().unwrap_or("lex"))?;
    let aut = SushchanskyAutomaton::build(&lambda);
    let m = aut.minimized();
    let uv = aut.uv();
    let summary = format!("states={} t={} u={} v={}", m.num_states(), uv.t, uv.u_string(), uv.v_string());
    let machine_json = json(&m.to_json(None))?;
    let dot = export_dot(&m, "A_uv");
    match (cli.format.unwrap_or(Format::Text), &cli.out) {
        (Format::Text, None) => println!("{summary}"),
        (Format::Text, Some(dir)) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            write(&dir.join("automaton.json"), &machine_json)?;
            write(&dir.join("automaton.dot"), &dot)?;
            println!("{summary}");
        }
        (Format::Json, out) => {
            eprintln!("{summary}");
            emit(out.as_deref(), &machine_json)?;
        }
        (Format::Dot, out) => {
            eprintln!("{summary}");
            emit(out.as_deref(), &dot)?;
        }
        (Format::Csv, _) => return Err(anyhow::anyhow!("build does not support --format csv").into()),
    }
    Ok(())
}

fn load_order(p: Option<u32>, source: &str) -> anyhow::Result<OrderType> {
    match source {
        "lex" | "lex-swapped" => {
            let alphabet = Alphabet::new(p.unwrap_or(3))?;
            Ok(OrderType::named(alphabet, source)?)
        }
        path => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading order file {path}"))?;
            let lambda = OrderType::parse_json(&text).with_context(|| format!("order file {path}"))?;
            let file_p = lambda.alphabet().p() as u32;
            if let Some(p) = p.filter(|&p| p != file_p) {
                bail!("--p {p} does not match p={file_p} in {path}");
            }
            Ok(lambda)
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
