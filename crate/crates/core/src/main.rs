use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use weakram::job::{exit_code, run, Command, JobSpec};
use weakram::Error;

#[derive(Clone, Copy, ValueEnum)]
enum Cmd {
    Analyze,
    Construct,
    Verify,
    AssocOrder,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Analyze => Command::Analyze,
            Cmd::Construct => Command::Construct,
            Cmd::Verify => Command::Verify,
            Cmd::AssocOrder => Command::AssocOrder,
        }
    }
}

/// Free generators of ideals in weakly ramified extensions of local fields.
#[derive(Parser)]
#[command(name = "weakram", version)]
struct Cli {
    command: Cmd,
    /// Job file with [base], [extension] and [task] sections.
    #[arg(long, required_unless_present = "batch")]
    spec: Option<PathBuf>,
    /// Certificate path (a directory in batch mode); stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Working precision, overriding the job file.
    #[arg(long)]
    precision: Option<i64>,
    /// Seed, overriding the job file.
    #[arg(long)]
    seed: Option<u64>,
    /// Run every `*.ini` job in a directory concurrently.
    #[arg(long, conflicts_with = "spec")]
    batch: Option<PathBuf>,
}

struct JobResult {
    code: i32,
    json: Option<String>,
    message: String,
}

fn run_file(path: &Path, cli: &Cli) -> JobResult {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return JobResult { code: 3, json: None, message: format!("{}: {e}", path.display()) },
    };
    let outcome = JobSpec::parse(&text).and_then(|mut spec| {
        if cli.precision.is_some() {
            spec.precision = cli.precision;
        }
        if let Some(s) = cli.seed {
            spec.seed = s;
        }
        run(&spec, cli.command.into())
    });
    match outcome {
        Ok(cert) => {
            let code = if cert.positive() { 0 } else { 2 };
            let message = format!(
                "{}: degree {}, e = {}, f = {}, |G_i| = {:?}, weakly ramified: {}{}",
                path.display(),
                cert.extension.tower.degree,
                cert.extension.tower.e,
                cert.extension.tower.f,
                cert.extension.filtration_orders,
                cert.extension.weakly_ramified,
                cert.verdict.map_or(String::new(), |v| format!(", verdict: {v}")),
            );
            JobResult { code, json: Some(cert.to_json()), message }
        }
        Err(e) => JobResult { code: exit_code(&e), json: None, message: format!("{}: {e}", path.display()) },
    }
}

fn write_out(path: &Path, json: &str) -> Result<(), Error> {
    std::fs::write(path, json).map_err(|e| Error::Unsupported(format!("{}: {e}", path.display())))
}

fn batch(dir: &Path, cli: &Cli) -> i32 {
    let mut files: Vec<PathBuf> = match std::fs::read_dir(dir) {
        Ok(rd) => {
            rd.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "ini")).collect()
        }
        Err(e) => {
            eprintln!("{}: {e}", dir.display());
            return 3;
        }
    };
    files.sort();
    let out_dir = cli.out.clone().unwrap_or_else(|| dir.to_path_buf());
    if let Err(e) = std::fs::create_dir_all(&out_dir) {
        eprintln!("{}: {e}", out_dir.display());
        return 1;
    }
    let results: Vec<JobResult> = std::thread::scope(|s| {
        let handles: Vec<_> = files.iter().map(|f| s.spawn(|| run_file(f, cli))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| JobResult { code: 1, json: None, message: "job panicked".into() }))
            .collect()
    });
    let mut status = 0;
    for (file, r) in files.iter().zip(results) {
        if let Some(json) = &r.json {
            let name = file.with_extension("json");
            let target = out_dir.join(name.file_name().expect("file name"));
            if let Err(e) = write_out(&target, json) {
                eprintln!("{e}");
                status = status.max(1);
            }
        }
        println!("[{}] {}", r.code, r.message);
        if status == 0 {
            status = r.code;
        }
    }
    status
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match (&cli.batch, &cli.spec) {
        (Some(dir), _) => batch(dir, &cli),
        (None, Some(spec)) => {
            let r = run_file(spec, &cli);
            match (&r.json, &cli.out) {
                (Some(json), Some(out)) => match write_out(out, json) {
                    Ok(()) => {
                        println!("{}", r.message);
                        r.code
                    }
                    Err(e) => {
                        eprintln!("{e}");
                        1
                    }
                },
                (Some(json), None) => {
                    print!("{json}");
                    r.code
                }
                (None, _) => {
                    eprintln!("{}", r.message);
                    r.code
                }
            }
        }
        (None, None) => 3,
    };
    ExitCode::from(code as u8)
}
