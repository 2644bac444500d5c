use std::process::ExitCode;

use monoapprox::Budget;
use monoapprox_cli::config::{parse_with_config, Command, ExperimentConfig};
use monoapprox_cli::{commands, verify, CliError};

fn run_verify(args: &monoapprox_cli::config::VerifyArgs) -> ExitCode {
    if args.list {
        for p in verify::properties() {
            println!("{:<12} {}", p.name, p.about);
        }
        return ExitCode::SUCCESS;
    }
    let budget = args.budget_cells.map_or_else(Budget::from_env, Budget::new);
    let results = match verify::run(args.only.as_deref(), &budget, args.seed.unwrap_or(0)) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let mut first_failure = None;
    for r in &results {
        let ms = r.elapsed.as_secs_f64() * 1e3;
        match &r.outcome {
            Ok(detail) => println!("PASS {:<12} {ms:>10.1} ms  {detail}", r.name),
            Err(_) => {
                println!("FAIL {:<12} {ms:>10.1} ms", r.name);
                first_failure.get_or_insert(r);
            }
        }
    }
    let passed = results.iter().filter(|r| r.outcome.is_ok()).count();
    println!("{passed}/{} properties passed", results.len());
    match first_failure {
        None => ExitCode::SUCCESS,
        Some(r) => {
            let cex = r.outcome.as_ref().err().expect("failure");
            let body = serde_json::json!({ "property": r.name, "counterexample": cex });
            println!("{}", serde_json::to_string_pretty(&body).expect("serializable"));
            ExitCode::FAILURE
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match parse_with_config(std::env::args_os().collect()) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let (name, args) = match &cli.command {
        Command::Verify(v) => return run_verify(v),
        Command::Approximate(a) => ("approximate", a),
        Command::Convergence(a) => ("convergence", a),
        Command::Bounds(a) => ("bounds", a),
    };
    let result = ExperimentConfig::resolve(name, args).and_then(|cfg| {
        let report = match name {
            "approximate" => commands::approximate(&cfg),
            "convergence" => commands::convergence(&cfg),
            _ => commands::bounds(&cfg),
        }?;
        report.emit(cfg.format, cfg.out.as_deref())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Usage(_) = e {
                eprintln!("run `monoapprox {name} --help` for usage");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
