fn main() -> std::process::ExitCode {
    ganti::cli::main_entry()
}
