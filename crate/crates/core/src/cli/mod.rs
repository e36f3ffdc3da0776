//! Presentation files, the task pipeline with its on-disk cache, and report
//! emission.

mod parse;
mod pipeline;
mod report;

pub use parse::{
    parse_presentation, parse_presentation_file, render_presentation, render_presentation_file,
    ParseError, PresentationFile,
};
pub use pipeline::{parse_tasks, run_pipeline, Cache, PipelineError, Task, TaskFailure, VERSION};
pub use report::{
    emit_report, Check, CheckStatus, DimRow, DimTable, Format, Quantity, ReportBundle, Section,
    SCHEMA_VERSION,
};

/// Environment variable naming the cache directory when `--cache` is absent.
pub const CACHE_ENV: &str = "KOSZUL_CACHE_DIR";
