fn main() -> std::process::ExitCode {
    filtval::cli::main()
}
