fn main() -> std::process::ExitCode {
    lindecomp::cli::main()
}
