use std::panic;
use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args: Vec<String> = std::env::args().collect();
    match panic::catch_unwind(|| granulate::cli::run(args)) {
        Ok(code) => ExitCode::from(code as u8),
        Err(_) => {
            eprintln!("error: internal invariant violated (panic)");
            ExitCode::from(3)
        }
    }
}
