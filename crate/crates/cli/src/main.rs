use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use gevrey_cli::{exit, run_text, Failure, Format, Outcome, Overrides, Response};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

/// Gevrey regularity analyses for diagonal spectral operators.
#[derive(Debug, Parser)]
#[command(name = "gevrey", version)]
struct Args {
    /// Job file, or `-` for standard input.
    #[arg(long, default_value = "-")]
    input: String,
    /// Write the result here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Head length of closed-form vectors.
    #[arg(long)]
    truncation: Option<usize>,
    /// Seed for the randomized invariant suites.
    #[arg(long)]
    seed: Option<u64>,
}

fn read_input(path: &str) -> std::io::Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn emit(text: &str, output: &Option<PathBuf>) -> std::io::Result<()> {
    match output {
        Some(p) => std::fs::write(p, text),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let format = match args.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    if args.truncation == Some(0) {
        let f = Failure::invalid("--truncation must be at least 1");
        eprintln!("gevrey: {}", f.message);
        let _ = emit(&Response::failed(None, f).to_json(), &args.output);
        return ExitCode::from(exit::INVALID_INPUT as u8);
    }
    let outcome = match read_input(&args.input) {
        Ok(text) => run_text(&text, &Overrides { truncation: args.truncation, seed: args.seed }),
        Err(e) => {
            let f = Failure::invalid(format!("cannot read {}: {e}", args.input));
            Outcome { exit_code: f.exit_code(), response: Response::failed(None, f), csv: None }
        }
    };
    if let Response::Failed { error, .. } = &outcome.response {
        eprintln!("gevrey: {}", error.message);
    }
    let (text, code) = outcome.render(format);
    if let Err(e) = emit(&text, &args.output) {
        eprintln!("gevrey: cannot write output: {e}");
        return ExitCode::from(exit::INVALID_INPUT as u8);
    }
    ExitCode::from(code as u8)
}
