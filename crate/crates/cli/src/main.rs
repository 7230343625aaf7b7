use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rrfilt::config::Config;
use rrfilt_cli::run::{run_session, RunOptions};
use rrfilt_cli::session::parse_session;

/// Run an rrfilt session script.
#[derive(Parser, Debug)]
#[command(name = "rrfilt", version)]
struct Args {
    /// Script file; `-` or omitted reads standard input.
    file: Option<PathBuf>,
    /// Seed for every randomized choice.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest power examined for Ratliff-Rush defects.
    #[arg(long, default_value_t = 12)]
    n_max: u32,
    /// Largest number of elements whose grade is computed directly.
    #[arg(long, default_value_t = 8)]
    koszul_cap: u32,
    /// Largest power in depth tables.
    #[arg(long, default_value_t = 4)]
    power_cap: u32,
    /// Stop at the first failing command.
    #[arg(long)]
    fail_fast: bool,
    /// Write JSON-lines reports to this path (`-` for standard output, which
    /// then carries no human-readable blocks).
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Evaluate commands in parallel; output order is unchanged.
    #[arg(long)]
    parallel: bool,
}

fn read_input(file: &Option<PathBuf>) -> io::Result<String> {
    match file {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match read_input(&args.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("rrfilt: cannot read input: {e}");
            return ExitCode::from(2);
        }
    };
    let session = match parse_session(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("rrfilt: {e}");
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions {
        config: Config {
            seed: args.seed,
            n_max: args.n_max,
            koszul_cap: args.koszul_cap,
            power_cap: args.power_cap,
            ..Config::default()
        },
        fail_fast: args.fail_fast,
        parallel: args.parallel,
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let json_to_stdout = args.json.as_ref().is_some_and(|p| p.as_os_str() == "-");
    let mut json_file = match &args.json {
        Some(p) if !json_to_stdout => match File::create(p) {
            Ok(f) => Some(BufWriter::new(f)),
            Err(e) => {
                eprintln!("rrfilt: cannot create {}: {e}", p.display());
                return ExitCode::from(2);
            }
        },
        _ => None,
    };
    let result = if json_to_stdout {
        run_session(&session, &opts, None, Some(&mut out))
    } else {
        let json = json_file.as_mut().map(|f| f as &mut dyn Write);
        run_session(&session, &opts, Some(&mut out), json)
    };
    let flushed = out
        .flush()
        .and_then(|_| json_file.map_or(Ok(()), |mut f| f.flush()));
    match result.and_then(|s| flushed.map(|_| s)) {
        Ok(summary) => ExitCode::from(summary.exit_code() as u8),
        Err(e) => {
            eprintln!("rrfilt: write failed: {e}");
            ExitCode::from(1)
        }
    }
}
