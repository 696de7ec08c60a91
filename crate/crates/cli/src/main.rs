use clap::Parser;

fn main() {
    let cli = graphpdp::Cli::parse();
    let code = graphpdp::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
