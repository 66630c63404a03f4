use clap::Parser;

use qaoa_maxcut::cli::{self, Cli};

fn main() {
    // Die quietly when a downstream pipe closes, like other unix filters.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Err(err) = cli::run(cli) {
        eprintln!("error: {err}");
        std::process::exit(cli::exit_code(&err));
    }
}
