use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    match tmpatterns_cli::run(std::env::args_os()) {
        Ok((result, json)) => {
            let out = result.render(json);
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = if result.status == tmpatterns_cli::Status::Error && !json {
                writeln!(std::io::stderr(), "{out}")
            } else {
                writeln!(std::io::stdout().lock(), "{out}")
            };
            ExitCode::from(result.status.exit_code() as u8)
        }
        Err(help) => {
            let _ = help.print();
            ExitCode::SUCCESS
        }
    }
}
