use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use homdyn_cli::{run_source, write_file, CliError, Format, Registry, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "homdyn", version, about = "Homological invariants of graph maps and toral endomorphisms")]
struct Args {
    /// Subcommand (see the list below).
    command: String,
    /// Input file in the map language, or `-` for stdin.
    input: PathBuf,
    /// Map or matrix to use when the file defines several.
    #[arg(long)]
    map: Option<String>,
    /// Level or period.
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Maximum refinement depth for `shadow`.
    #[arg(long, default_value_t = homdyn::semiconj::DEFAULT_SHADOW_DEPTH)]
    depth: u32,
    /// Deck-translate window for `beta` figures.
    #[arg(long, default_value_t = 1)]
    window: u32,
    /// Norm used by `shadow`.
    #[arg(long, default_value = "adapted")]
    norm: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the table or report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the figure here (`rotset`, `beta`).
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Cap on enumerated itineraries, loops or graph nodes.
    #[arg(long)]
    budget: Option<usize>,
}

fn command_list(registry: &Registry) -> String {
    let mut s = String::from("Commands:\n");
    for c in registry.iter() {
        s.push_str(&format!("  {:<8} {}\n", c.name(), c.about()));
    }
    s.push_str("\nExit codes: 0 success, 1 input error, 2 verdict UNKNOWN, 3 budget exceeded");
    s
}

fn main() -> ExitCode {
    let registry = Registry::default();
    let cmd = <Args as clap::CommandFactory>::command().after_help(command_list(&registry));
    let args = match <Args as clap::FromArgMatches>::from_arg_matches(&cmd.get_matches()) {
        Ok(a) => a,
        Err(e) => e.exit(),
    };
    let cfg = RunConfig {
        k: args.k,
        depth: args.depth,
        window: args.window,
        norm: args.norm.clone(),
        format: args.format,
        out: args.out.clone(),
        svg: args.svg.clone(),
        budget: args.budget,
    };
    match run(&registry, &args, &cfg) {
        Ok(unknown) => ExitCode::from(if unknown { 2 } else { 0 }),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(registry: &Registry, args: &Args, cfg: &RunConfig) -> Result<bool, CliError> {
    let source = if args.input.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|source| CliError::Io {
            path: "<stdin>".into(),
            source,
        })?;
        s
    } else {
        std::fs::read_to_string(&args.input).map_err(|source| CliError::Io {
            path: args.input.display().to_string(),
            source,
        })?
    };
    let report = run_source(registry, &args.command, &source, args.map.as_deref(), cfg)?;
    match &cfg.out {
        Some(p) => write_file(p, &report.body)?,
        None => print!("{}", report.body),
    }
    if let (Some(p), Some(svg)) = (&cfg.svg, &report.svg) {
        write_file(p, svg)?;
    }
    Ok(report.unknown)
}
