use std::process::ExitCode;

fn main() -> ExitCode {
    let code = match wva_cli::parse_args(std::env::args().skip(1)) {
        Ok(cfg) => wva_cli::execute(&cfg),
        Err(wva_cli::CliError::Help(text)) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
