use std::process::ExitCode;

use clap::Parser;
use sgewalk_cli::{run, Cli, Format, EXIT_INPUT};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own usage errors would exit with 2, which means
            // "unknown" here
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(&cli);
    let summary = match cli.format {
        Format::Json => serde_json::to_string_pretty(&result.details).expect("serializable"),
        Format::Text | Format::Svg => result.summary.clone(),
    };
    match (&result.artifact, result.written.is_empty()) {
        // artifact goes to stdout, so keep the summary out of the way
        (Some(text), true) => {
            print!("{text}");
            eprintln!("{summary}");
        }
        _ if result.code == EXIT_INPUT => eprintln!("{summary}"),
        _ => {
            println!("{summary}");
            for path in &result.written {
                println!("wrote {}", path.display());
            }
        }
    }
    ExitCode::from(result.code)
}
