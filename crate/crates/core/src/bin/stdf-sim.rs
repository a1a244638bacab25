fn main() -> std::process::ExitCode {
    stdf::cli::main()
}
