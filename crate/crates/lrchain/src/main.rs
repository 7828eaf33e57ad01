fn main() -> std::process::ExitCode {
    lrchain::cli::main()
}
