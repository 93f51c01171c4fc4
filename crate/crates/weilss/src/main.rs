fn main() -> std::process::ExitCode {
    weilss::run_cli()
}
