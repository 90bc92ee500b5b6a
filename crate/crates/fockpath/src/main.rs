fn main() -> std::process::ExitCode {
    fockpath::cli::main()
}
