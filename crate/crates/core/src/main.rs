use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use koszul_core::cli::{
    emit_report, parse_presentation_file, parse_tasks, run_pipeline, Cache, Format, CACHE_ENV,
};
use koszul_core::grading::Window;

#[derive(Parser)]
#[command(
    name = "koszul",
    version,
    about = "Exact Koszul duality and cyclic homology computations"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run tasks on a presentation file and print the report.
    Compute {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, default_value_t = 4)]
        adams_max: i64,
        #[arg(long, default_value_t = -8, allow_negative_numbers = true)]
        hmin: i64,
        #[arg(long, default_value_t = 8, allow_negative_numbers = true)]
        hmax: i64,
        /// comma-separated task names, or `all`
        #[arg(long, default_value = "expand")]
        tasks: String,
        #[arg(long, default_value = "tsv")]
        format: Format,
        /// cache directory; falls back to $KOSZUL_CACHE_DIR
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let Command::Compute {
        algebra,
        adams_max,
        hmin,
        hmax,
        tasks,
        format,
        cache,
    } = Args::parse().command;

    let fail = |msg: String| {
        eprintln!("koszul: {msg}");
        ExitCode::from(2)
    };
    let text = match std::fs::read_to_string(&algebra) {
        Ok(t) => t,
        Err(e) => return fail(format!("{}: {e}", algebra.display())),
    };
    let file = match parse_presentation_file(&text) {
        Ok(f) => f,
        Err(e) => return fail(format!("{}:{e}", algebra.display())),
    };
    let tasks = match parse_tasks(&tasks) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    if adams_max < 0 || hmin > hmax {
        return fail("empty window".into());
    }
    let window = Window::symmetric(adams_max, hmin, hmax);
    let cache_dir = cache.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
    let cache = match cache_dir.map(Cache::new).transpose() {
        Ok(c) => c,
        Err(e) => return fail(format!("cache: {e}")),
    };
    let bundle = match run_pipeline(&file, &window, &tasks, cache.as_ref()) {
        Ok(b) => b,
        Err(e) => return fail(e.to_string()),
    };
    let bytes = emit_report(&bundle, format);
    if std::io::stdout().write_all(&bytes).is_err() {
        return ExitCode::from(2);
    }
    if bundle.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
