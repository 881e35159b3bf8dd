use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = quonlab_cli::run(std::env::args_os());
    if let Some(msg) = outcome.output.get("error").and_then(|e| e.as_str()) {
        eprintln!("{msg}");
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&outcome.output).expect("JSON values serialize")
    );
    ExitCode::from(outcome.code as u8)
}
