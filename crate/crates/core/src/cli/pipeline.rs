use std::cell::OnceCell;
use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::parse::{render_presentation_file, PresentationFile};
use super::report::{Check, DimTable, ReportBundle, Section, SCHEMA_VERSION};
use crate::algebra::{
    algebra_homology, classify_finiteness, expand_presentation, AlgebraWindow, FinitenessReport,
    Verdict,
};
use crate::bar::{
    bar_construction, compare_quadratic_vs_bar, double_dual_report, koszul_dual, quadratic_dual,
};
use crate::chern::{
    chern0, contravariant_chern0, loday_triangle_check, pairing, pairing_checks, unit_cocycle,
    K0Class,
};
use crate::cyclic::{
    cyclic_homology, hochschild_mixed, jones_mccleary_tables, CyclicVariant, MixedComplexWindow,
};
use crate::grading::{format_scalar, Window};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Pipeline stages, declared in dependency order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Task {
    Expand,
    Classify,
    Bar,
    Dual,
    DoubleDual,
    Hh,
    Hc,
    HcMinus,
    HcPer,
    HcCochain,
    JmCompare,
    QuadDual,
    Chern,
    Pairing,
    Triangle,
}

impl Task {
    pub const ALL: [Task; 15] = [
        Task::Expand,
        Task::Classify,
        Task::Bar,
        Task::Dual,
        Task::DoubleDual,
        Task::Hh,
        Task::Hc,
        Task::HcMinus,
        Task::HcPer,
        Task::HcCochain,
        Task::JmCompare,
        Task::QuadDual,
        Task::Chern,
        Task::Pairing,
        Task::Triangle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Expand => "expand",
            Task::Classify => "classify",
            Task::Bar => "bar",
            Task::Dual => "dual",
            Task::DoubleDual => "double-dual",
            Task::Hh => "hh",
            Task::Hc => "hc",
            Task::HcMinus => "hc-minus",
            Task::HcPer => "hc-per",
            Task::HcCochain => "hc-cochain",
            Task::JmCompare => "jm-compare",
            Task::QuadDual => "quad-dual",
            Task::Chern => "chern",
            Task::Pairing => "pairing",
            Task::Triangle => "triangle",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown task `{s}`"))
    }
}

/// Parses a comma-separated task list; `all` selects every task.
pub fn parse_tasks(list: &str) -> Result<BTreeSet<Task>, String> {
    let mut out = BTreeSet::new();
    for t in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if t == "all" {
            out.extend(Task::ALL);
        } else {
            out.insert(t.parse()?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskFailure {
    pub task: Task,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct PipelineError {
    pub failures: Vec<TaskFailure>,
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, e) in self.failures.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{}: {}", e.task, e.message)?;
        }
        Ok(())
    }
}

/// On-disk store of finished task sections, one JSON file per
/// (presentation, window, version, task). Writes go through a temporary file
/// and a rename, so readers never observe partial entries.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(file: &PresentationFile, w: &Window, task: Task) -> String {
        let mut h = Sha256::new();
        h.update(render_presentation_file(file).as_bytes());
        h.update(format!("\0{} {} {} {}", w.a_min, w.a_max, w.h_min, w.h_max).as_bytes());
        h.update(format!("\0{VERSION}\0{SCHEMA_VERSION}\0{task}").as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Option<Section> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn store(&self, key: &str, section: &Section) -> std::io::Result<()> {
        let tmp = self.dir.join(format!("{key}.{}.tmp", std::process::id()));
        fs::write(
            &tmp,
            serde_json::to_vec(section).expect("section serializes"),
        )?;
        fs::rename(tmp, self.path(key))
    }
}

struct Context<'a> {
    file: &'a PresentationFile,
    w: Window,
    alg: OnceCell<Result<AlgebraWindow, String>>,
    dual: OnceCell<Result<AlgebraWindow, String>>,
    mixed: OnceCell<Result<MixedComplexWindow, String>>,
    mixed_dual: OnceCell<Result<MixedComplexWindow, String>>,
    finiteness: OnceCell<FinitenessReport>,
}

impl Context<'_> {
    fn alg(&self) -> Result<&AlgebraWindow, String> {
        self.alg
            .get_or_init(|| {
                expand_presentation(&self.file.presentation, &self.w).map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn dual(&self) -> Result<&AlgebraWindow, String> {
        self.dual
            .get_or_init(|| {
                let alg = self.alg()?;
                koszul_dual(alg, &self.w)
                    .map(|d| d.algebra)
                    .map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn mixed(&self) -> Result<&MixedComplexWindow, String> {
        self.mixed
            .get_or_init(|| hochschild_mixed(self.alg()?, &self.w).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn mixed_dual(&self) -> Result<&MixedComplexWindow, String> {
        self.mixed_dual
            .get_or_init(|| hochschild_mixed(self.dual()?, &self.w).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn finiteness(&self) -> &FinitenessReport {
        self.finiteness
            .get_or_init(|| classify_finiteness(&self.file.presentation, self.alg().ok()))
    }

    fn run(&self, task: Task) -> Result<Section, String> {
        let mut s = Section::new(task.name());
        let w = &self.w;
        match task {
            Task::Expand => {
                let alg = self.alg()?;
                s.tables.push(DimTable::from_dims("A", &alg.dims()));
                s.tables
                    .push(DimTable::from_homology("H(A)", &algebra_homology(alg)));
                s.checks.push(Check::new(
                    "algebra axioms",
                    true,
                    "d² = 0, Leibniz, associativity, unit",
                ));
                if !self.file.expect.is_empty() {
                    let dims = alg.dims();
                    let mut bad = Vec::new();
                    for (d, n) in self.file.expect.iter().filter(|(d, _)| w.contains(**d)) {
                        let got = dims.get(d).copied().unwrap_or(0);
                        if got != *n {
                            bad.push(format!("{d}: expected {n}, found {got}"));
                        }
                    }
                    s.checks.push(Check::new(
                        "expected dimensions",
                        bad.is_empty(),
                        bad.join("; "),
                    ));
                }
            }
            Task::Classify => {
                let f = self.finiteness();
                s.quantity("strongly locally finite", f.strongly_locally_finite.name());
                s.quantity("Adams connected", f.adams_connected.name());
                s.quantity("weakly Adams connected", f.weakly_adams_connected.name());
                s.checks.push(Check::new(
                    "finiteness implications",
                    f.implications_hold(),
                    "Adams connected ⇒ strongly locally finite ⇒ weakly Adams connected",
                ));
            }
            Task::Bar => {
                let b = bar_construction(self.alg()?, w).map_err(|e| e.to_string())?;
                s.tables.push(DimTable::from_dims("B(A)", &b.dims()));
                s.tables
                    .push(DimTable::from_homology("H(B(A))", &b.homology()));
                let ok = b.check_coalgebra();
                s.checks.push(Check::new(
                    "dg coalgebra axioms",
                    ok.is_ok(),
                    ok.err().map(|e| e.to_string()).unwrap_or_default(),
                ));
            }
            Task::Dual => {
                let d = self.dual()?;
                s.tables.push(DimTable::from_dims("A^!", &d.dims()));
                s.tables
                    .push(DimTable::from_homology("H(A^!)", &algebra_homology(d)));
                s.checks.push(Check::new("dual algebra axioms", true, ""));
            }
            Task::DoubleDual => {
                let r = double_dual_report(self.alg()?, w).map_err(|e| e.to_string())?;
                s.tables
                    .push(DimTable::from_homology("H((A^!)^!)", &r.double_dual));
                s.checks
                    .push(Check::from_comparison("H((A^!)^!) = H(A)", &r.table));
            }
            Task::Hh => {
                let h = self.mixed()?.hochschild_homology().restrict(w);
                s.tables.push(DimTable::from_homology("HH", &h));
            }
            Task::Hc | Task::HcMinus | Task::HcPer | Task::HcCochain => {
                let v = match task {
                    Task::Hc => CyclicVariant::Cyclic,
                    Task::HcMinus => CyclicVariant::Negative,
                    Task::HcPer => CyclicVariant::Periodic,
                    _ => CyclicVariant::CochainCyclic,
                };
                let h = cyclic_homology(self.mixed()?, v, w);
                s.tables.push(DimTable::from_homology(v.name(), &h));
            }
            Task::JmCompare => {
                let r = jones_mccleary_tables(self.mixed()?, self.mixed_dual()?, w);
                s.tables
                    .push(DimTable::from_homology("HC-(A)", &r.negative_a));
                s.tables
                    .push(DimTable::from_homology("HC^(A^!)", &r.cochain_dual));
                s.tables
                    .push(DimTable::from_homology("HC-(A^!)", &r.negative_dual));
                s.tables
                    .push(DimTable::from_homology("HC^(A)", &r.cochain_a));
                s.checks
                    .push(Check::from_comparison("HC-_n(A) = HC^n(A^!)", &r.forward));
                s.checks
                    .push(Check::from_comparison("HC-_n(A^!) = HC^n(A)", &r.mirrored));
            }
            Task::QuadDual => {
                let p = &self.file.presentation;
                if p.is_quadratic() {
                    let q = quadratic_dual(p).map_err(|e| e.to_string())?;
                    for r in &q.relations {
                        s.quantity("quadratic dual relation", q.render(r));
                    }
                    let t = compare_quadratic_vs_bar(p, w).map_err(|e| e.to_string())?;
                    s.checks.push(Check::from_comparison(
                        "H(A^!) = T(V*)/(R⊥) per Adams degree",
                        &t,
                    ));
                } else {
                    s.checks.push(Check::skipped(
                        "H(A^!) = T(V*)/(R⊥) per Adams degree",
                        "not quadratic",
                    ));
                }
            }
            Task::Chern => {
                let alg = self.alg()?;
                let wac = &self.finiteness().weakly_adams_connected;
                if let Verdict::Unknown { reason } = wac {
                    s.quantity(
                        "warning",
                        format!("weakly Adams connected is unknown: {reason}"),
                    );
                }
                let r = contravariant_chern0(alg, wac, w).map_err(|e| e.to_string())?;
                for (i, label, c) in &r.class {
                    s.quantity(&format!("ch0(1·[k]) u^{i} {label}"), c.clone());
                }
                s.quantity("dim HC-_0(A^!)", r.negative_dual_dim.to_string());
                s.quantity("dim HC^0(A)", r.cochain_dim.to_string());
                if let Some(v) = &r.pairing {
                    s.quantity("<ε_(A^!), ch0(1·[k])>", format_scalar(v));
                }
                s.checks.push(Check::new(
                    "dim HC-_0(A^!) = dim HC^0(A)",
                    r.dims_agree(),
                    format!("{} vs {}", r.negative_dual_dim, r.cochain_dim),
                ));
                let mixed = self.mixed()?;
                let ok = chern0(alg, mixed, &K0Class::perf(1), None);
                s.checks.push(Check::new(
                    "ch0(1·[A]) is a (b + uB)-cycle",
                    ok.is_ok(),
                    ok.err().map(|e| e.to_string()).unwrap_or_default(),
                ));
            }
            Task::Pairing => {
                let alg = self.alg()?;
                let m = self.mixed()?;
                let eps = unit_cocycle(alg, m).map_err(|e| e.to_string())?;
                let one = chern0(alg, m, &K0Class::perf(1), None).map_err(|e| e.to_string())?;
                let v = pairing(m, &eps, &one).map_err(|e| e.to_string())?;
                s.quantity("<ε, 1>", format_scalar(&v));
                let r = pairing_checks(m, w, 20, 0x5eed);
                s.checks.push(Check::new(
                    "pairing descends and is compatible with differentials",
                    r.passes(),
                    if r.passes() {
                        format!("{} samples", r.boundary_samples)
                    } else {
                        r.failures.join("; ")
                    },
                ));
            }
            Task::Triangle => {
                let alg = self.alg()?;
                let wac = &self.finiteness().weakly_adams_connected;
                if let Verdict::Unknown { reason } = wac {
                    s.quantity(
                        "warning",
                        format!("weakly Adams connected is unknown: {reason}"),
                    );
                }
                let g =
                    loday_triangle_check(alg, wac, w, &K0Class::ground(1), &K0Class::perf(1), None)
                        .map_err(|e| e.to_string())?;
                s.quantity("<[k], [A]>_K", format_scalar(&g.generator_value));
                let mut bilinear = g.commutes();
                for (x, y) in [(0, 1), (2, 3), (-1, 4)] {
                    let r = loday_triangle_check(
                        alg,
                        wac,
                        w,
                        &K0Class::ground(x),
                        &K0Class::perf(y),
                        None,
                    )
                    .map_err(|e| e.to_string())?;
                    bilinear &= r.commutes()
                        && r.via_pairing == &g.generator_value * crate::grading::scalar(x * y);
                }
                s.checks.push(Check::new(
                    "triangle commutes and is bilinear",
                    bilinear,
                    "",
                ));
            }
        }
        Ok(s)
    }
}

/// Runs `tasks` in dependency order. Sections found in the cache are reused
/// as is; fresh ones are written back.
pub fn run_pipeline(
    file: &PresentationFile,
    w: &Window,
    tasks: &BTreeSet<Task>,
    cache: Option<&Cache>,
) -> Result<ReportBundle, PipelineError> {
    let ctx = Context {
        file,
        w: *w,
        alg: OnceCell::new(),
        dual: OnceCell::new(),
        mixed: OnceCell::new(),
        mixed_dual: OnceCell::new(),
        finiteness: OnceCell::new(),
    };
    let mut bundle = ReportBundle {
        schema_version: SCHEMA_VERSION,
        algebra: file.presentation.name.clone(),
        window: Some(*w),
        sections: Vec::new(),
    };
    let mut failures = Vec::new();
    for &task in tasks {
        let key = Cache::key(file, w, task);
        if let Some(s) = cache.and_then(|c| c.load(&key)) {
            bundle.sections.push(s);
            continue;
        }
        match ctx.run(task) {
            Ok(s) => {
                if let Some(c) = cache {
                    if let Err(e) = c.store(&key, &s) {
                        failures.push(TaskFailure {
                            task,
                            message: format!("cache write failed: {e}"),
                        });
                    }
                }
                bundle.sections.push(s);
            }
            Err(message) => failures.push(TaskFailure { task, message }),
        }
    }
    if failures.is_empty() {
        Ok(bundle)
    } else {
        Err(PipelineError { failures })
    }
}
