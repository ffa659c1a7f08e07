use clap::Parser;

fn main() {
    let cli = ldirc::cli::Cli::parse();
    let code = match ldirc::cli::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    std::process::exit(code);
}
