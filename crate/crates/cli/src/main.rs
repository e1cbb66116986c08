use clap::Parser;

fn main() {
    let cli = davlab::Cli::parse();
    let code = davlab::execute(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
