use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use gauge_integrals::cli::{self, exit, Format, RunMode};

/// Dunford-McShane and Dunford-Henstock-Kurzweil integrals from a scenario file.
#[derive(Parser, Debug)]
#[command(name = "gauge-integrals", version)]
struct Args {
    /// Scenario file, or `-` for standard input.
    #[arg(long)]
    scenario: PathBuf,
    /// Comma-separated modes, overriding the scenario:
    /// dm_ext, dm_piece, dhk_ext, dhk_piece, t222, dunford_check, negvar.
    #[arg(long)]
    mode: Option<String>,
    /// Tolerance of every integral and check.
    #[arg(long)]
    tol: Option<f64>,
    /// Depth of the dyadic division used by piecewise routes.
    #[arg(long)]
    depth: Option<u32>,
    /// Seed of the random boxes and partitions drawn by the checks.
    #[arg(long)]
    seed: Option<u64>,
    /// text, json or csv.
    #[arg(long, default_value = "text")]
    format: String,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the division used by piecewise routes to standard error.
    #[arg(long)]
    dump_division: bool,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(exit::USAGE as u8)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let Some(format) = Format::parse(&args.format) else {
        return usage(format!("unknown format `{}`; expected text, json or csv", args.format));
    };
    let text = if args.scenario.as_os_str() == "-" {
        let mut s = String::new();
        if let Err(e) = std::io::Read::read_to_string(&mut std::io::stdin(), &mut s) {
            eprintln!("error: reading standard input: {e}");
            return ExitCode::from(exit::IO as u8);
        }
        s
    } else {
        match std::fs::read_to_string(&args.scenario) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {}: {e}", args.scenario.display());
                return ExitCode::from(exit::IO as u8);
            }
        }
    };
    let mut scenario = match cli::parse_scenario(&text) {
        Ok(s) => s,
        Err(e) => return usage(format!("{}: {e}", args.scenario.display())),
    };
    if let Some(list) = &args.mode {
        let mut modes = Vec::new();
        for m in list.split(',') {
            match RunMode::parse(m.trim()) {
                Some(mode) if !modes.contains(&mode) => modes.push(mode),
                Some(_) => {}
                None => return usage(format!("unknown mode `{}`", m.trim())),
            }
        }
        scenario.modes = modes;
    }
    if let Some(t) = args.tol {
        if !(t > 0.0 && t.is_finite()) {
            return usage("--tol must be positive");
        }
        scenario.tol = t;
    }
    if let Some(d) = args.depth {
        if d < 1 {
            return usage("--depth must be at least 1");
        }
        scenario.depth = d;
    }
    if let Some(s) = args.seed {
        scenario.seed = s;
    }

    let report = cli::run(&scenario);
    if args.dump_division {
        match &report.division {
            Some(d) => eprint!("{}", d.dump()),
            None => eprintln!("# no division"),
        }
    }
    if let Err(e) = cli::emit(&report, format, args.out.as_deref()) {
        eprintln!("error: writing report: {e}");
        return ExitCode::from(exit::IO as u8);
    }
    eprintln!("elapsed {:.3} s", report.wall_time.as_secs_f64());
    ExitCode::from(report.exit_code() as u8)
}
