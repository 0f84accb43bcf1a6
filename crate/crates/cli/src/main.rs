use clap::Parser;

fn main() {
    let cli = match cepstex_cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { cepstex_cli::EXIT_USAGE } else { cepstex_cli::EXIT_OK };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    std::process::exit(cepstex_cli::execute(&cli));
}
