use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use clap::Parser;
use rayon::prelude::*;
use recollement_cli::{run_text, Report, RunOptions};

/// Runs recollement jobs and writes one JSON report per spec file.
#[derive(Debug, Parser)]
#[command(name = "recollement", version)]
struct Cli {
    /// Job spec file; repeat to run several jobs.
    #[arg(long, required = true)]
    spec: Vec<PathBuf>,
    /// Report path for a single job, or a directory for several. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the spec's dimension bound for the universes.
    #[arg(long)]
    dmax: Option<usize>,
    /// Depth bound for coresolutions.
    #[arg(long)]
    depth: Option<usize>,
    /// Highest Ext degree compared in the adjunction checks.
    #[arg(long = "n-max")]
    n_max: Option<usize>,
    /// Run constructions past failed hypotheses; the report is marked UNSOUND.
    #[arg(long)]
    force: bool,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

fn run_one(path: &Path, opts: RunOptions) -> anyhow::Result<Report> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    run_text(&text, opts).with_context(|| format!("running {}", path.display()))
}

fn out_path(cli: &Cli, spec: &Path) -> anyhow::Result<Option<PathBuf>> {
    let Some(out) = &cli.out else { return Ok(None) };
    if cli.spec.len() == 1 {
        return Ok(Some(out.clone()));
    }
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let Some(stem) = spec.file_stem() else {
        bail!("spec path {} has no file name", spec.display());
    };
    Ok(Some(out.join(stem).with_extension("json")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let opts = RunOptions {
        dmax: cli.dmax,
        depth: cli.depth,
        n_max: cli.n_max,
        force: cli.force,
    };
    let start = Instant::now();
    let results: Vec<(Duration, anyhow::Result<Report>)> = cli
        .spec
        .par_iter()
        .map(|p| {
            let t = Instant::now();
            let r = run_one(p, opts);
            (t.elapsed(), r)
        })
        .collect();

    let mut code = 0;
    let mut stdout = String::new();
    for (path, (elapsed, res)) in cli.spec.iter().zip(results) {
        let report = match res {
            Ok(r) => r,
            Err(e) => {
                eprintln!("{}: error: {e:#}", path.display());
                code = code.max(1);
                continue;
            }
        };
        let failed = report.verification.iter().filter(|e| e.verdict.is_failure()).count();
        eprintln!(
            "{}: {} {:?} ({} checks, {failed} failing, {:.2?})",
            path.display(),
            report.task,
            report.status,
            report.verification.len(),
            elapsed
        );
        for h in report.hypotheses.iter().filter(|h| h.verdict != recollement::report::Verdict::Pass) {
            eprintln!("  hypothesis {} {}: {}", h.name, h.verdict, h.witness);
        }
        let json = report.to_json();
        match out_path(&cli, path) {
            Ok(Some(p)) => {
                if let Err(e) = std::fs::write(&p, &json) {
                    eprintln!("{}: error: writing {}: {e}", path.display(), p.display());
                    code = code.max(1);
                    continue;
                }
            }
            Ok(None) => stdout.push_str(&json),
            Err(e) => {
                eprintln!("error: {e:#}");
                code = code.max(1);
                continue;
            }
        }
        code = code.max(report.status.exit_code());
    }
    print!("{stdout}");
    eprintln!("total {:.2?}", start.elapsed());
    ExitCode::from(code as u8)
}

