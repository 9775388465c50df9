use clap::Parser;
use ringconv::cli::{run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    let stdout = std::io::stdout();
    let code = match run(&config, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    };
    std::process::exit(code);
}
