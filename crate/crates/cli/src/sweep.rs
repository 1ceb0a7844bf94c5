use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use qglue::asymptotics;
use qglue::coherent_info::{self, CoherentInfoResult, OptimizerConfig};
use qglue::nonadditivity::{self, AnsatzFamily, NonAddResult};
use qglue::qubit_models::{self, DampingKind};

use crate::config::Options;
use crate::format::{g17, opt};
use crate::grid::Grid;
use crate::{usage, UsageError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Amplitude,
    Dephrasure,
}

impl Model {
    fn kind(self) -> DampingKind {
        match self {
            Model::Amplitude => DampingKind::Amplitude,
            Model::Dephrasure => DampingKind::Dephasing,
        }
    }

    /// Where `Q¹(B_g)` switches off: `λ₀(p)` or `g(p)`.
    fn boundary(self, p: f64) -> qglue::Result<f64> {
        match self {
            Model::Amplitude => qubit_models::lambda0(p),
            Model::Dephrasure => qubit_models::g_curve(p),
        }
    }
}

impl FromStr for Model {
    type Err = UsageError;

    fn from_str(s: &str) -> Result<Self, UsageError> {
        match s {
            "amplitude" => Ok(Model::Amplitude),
            "dephrasure" => Ok(Model::Dephrasure),
            _ => usage(format!("unknown model '{s}' (amplitude | dephrasure)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Q1B,
    Q1C,
    Delta2,
    Delta2Star,
    Boundaries,
    AsymCompare,
}

impl FromStr for Quantity {
    type Err = UsageError;

    fn from_str(s: &str) -> Result<Self, UsageError> {
        match s {
            "q1B" => Ok(Quantity::Q1B),
            "q1C" => Ok(Quantity::Q1C),
            "delta2" => Ok(Quantity::Delta2),
            "delta2star" => Ok(Quantity::Delta2Star),
            "boundaries" => Ok(Quantity::Boundaries),
            "asym_compare" | "asym-compare" => Ok(Quantity::AsymCompare),
            _ => usage(format!(
                "unknown quantity '{s}' (q1B | q1C | delta2 | delta2star | boundaries | asym_compare)"
            )),
        }
    }
}

/// How the λ coordinate of each row is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaAxis {
    Absolute(Grid),
    /// `δλ` below the model's boundary, `λ = boundary(p) − δλ`.
    BelowBoundary(Grid),
    /// `λ = j(p)` (dephrasure only).
    JCurve,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRequest {
    pub model: Model,
    pub quantity: Quantity,
    /// Quantity compared against its asymptote when `quantity` is `AsymCompare`.
    pub compare: Quantity,
    pub p_grid: Grid,
    pub lambda: LambdaAxis,
    pub ansatz: Option<AnsatzFamily>,
    pub output: Option<PathBuf>,
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
    pub optimizer: OptimizerConfig,
}

fn parsed<T>(opts: &Options, key: &str) -> Result<Option<T>, UsageError>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    opts.get(key)
        .map(|v| v.parse::<T>().map_err(|e| UsageError(format!("--{key} '{v}': {e}"))))
        .transpose()
}

fn ansatz(s: &str) -> Result<AnsatzFamily, UsageError> {
    [
        AnsatzFamily::SigmaEps,
        AnsatzFamily::TauProduct,
        AnsatzFamily::RepetitionEta,
        AnsatzFamily::ZetaMix,
    ]
    .into_iter()
    .find(|f| f.name() == s)
    .map_or_else(|| usage(format!("unknown ansatz '{s}'")), Ok)
}

impl SweepRequest {
    /// Builds and validates a request from merged flag/config options.
    /// `quantity` comes from the options unless the subcommand fixes it.
    pub fn from_options(opts: &Options, fixed: Option<Quantity>) -> Result<Self, UsageError> {
        let model: Model = parsed(opts, "model")?.unwrap_or(Model::Amplitude);
        let quantity = match fixed {
            Some(q) => q,
            None => parsed(opts, "quantity")?.ok_or_else(|| UsageError("--quantity is required".into()))?,
        };
        let compare = if quantity == Quantity::AsymCompare {
            match (fixed, opts.get("quantity")) {
                (Some(_), Some(q)) => q.parse()?,
                _ => Quantity::Q1B,
            }
        } else {
            quantity
        };
        let p_grid: Grid = parsed(opts, "p")?.ok_or_else(|| UsageError("--p is required".into()))?;

        let lambda = match (opts.get("lambda").map(String::as_str), opts.get("delta-lambda")) {
            (Some(_), Some(_)) => return usage("--lambda and --delta-lambda are mutually exclusive"),
            (Some("j"), None) => LambdaAxis::JCurve,
            (Some(l), None) => LambdaAxis::Absolute(l.parse()?),
            (None, Some(d)) => LambdaAxis::BelowBoundary(d.parse()?),
            (None, None) if quantity == Quantity::Boundaries => LambdaAxis::Absolute(Grid::single(0.0)),
            (None, None) => return usage("one of --lambda or --delta-lambda is required"),
        };

        let mut optimizer = OptimizerConfig::default();
        if let Some(n) = parsed(opts, "grid-points")? {
            optimizer.coarse_grid_points = n;
        }
        if let Some(n) = parsed(opts, "starts")? {
            optimizer.multistart_count = n;
        }
        if let Some(s) = parsed(opts, "seed")? {
            optimizer.seed = s;
        }
        optimizer.validate().map_err(|e| UsageError(e.to_string()))?;

        let jobs: Option<usize> = parsed(opts, "jobs")?;
        if jobs == Some(0) {
            return usage("--jobs must be ≥ 1");
        }

        let req = SweepRequest {
            model,
            quantity,
            compare,
            p_grid,
            lambda,
            ansatz: opts.get("ansatz").map(|s| ansatz(s)).transpose()?,
            output: opts.get("out").filter(|o| o.as_str() != "-").map(PathBuf::from),
            jobs,
            optimizer,
        };
        req.check_combination()?;
        Ok(req)
    }

    fn check_combination(&self) -> Result<(), UsageError> {
        use Quantity::*;
        let amp = self.model == Model::Amplitude;
        match (self.quantity, self.compare) {
            (Delta2Star, _) if amp => return usage("delta2star is defined for the dephrasure model only"),
            (Boundaries, _) if !amp => return usage("boundaries are computed for the amplitude model only"),
            (AsymCompare, Delta2) if !amp => return usage("the δ₂ asymptote exists for the amplitude model only"),
            (AsymCompare, Delta2Star | Boundaries | AsymCompare) => {
                return usage("asym-compare takes --quantity q1B, q1C or delta2")
            }
            _ => {}
        }
        if self.lambda == LambdaAxis::JCurve && amp {
            return usage("--lambda j is the dephrasure j(p) curve");
        }
        if self.quantity == AsymCompare {
            match (self.compare, self.lambda) {
                (Q1C, LambdaAxis::Absolute(_)) => {}
                (Q1C, _) => return usage("asym-compare for q1C takes an absolute --lambda grid"),
                (_, LambdaAxis::BelowBoundary(_)) => {}
                _ => return usage("asym-compare for q1B/delta2 takes a --delta-lambda grid"),
            }
        }
        if self.ansatz.is_some() && !matches!(self.quantity, Delta2 | Delta2Star) {
            return usage("--ansatz applies to delta2 and delta2star only");
        }
        Ok(())
    }

    fn header(&self) -> &'static [&'static str] {
        match self.quantity {
            Quantity::Q1B | Quantity::Q1C => &["p", "lambda", "q1", "argopt_param", "evaluations", "status"],
            Quantity::Delta2 | Quantity::Delta2Star => {
                &["p", "lambda", "delta_lambda", "delta2", "best_ansatz_param", "status"]
            }
            Quantity::Boundaries => &["p", "lambda0", "lambda1", "status"],
            Quantity::AsymCompare => &["p", "delta_lambda", "numeric", "asymptote", "log_ratio", "status"],
        }
    }

    /// `(p, λ, δλ)` for every row; `δλ` is `None` when λ is given directly
    /// and the boundary is undefined at `p`.
    fn points(&self) -> Vec<(f64, f64, Option<f64>)> {
        let ps = self.p_grid.points();
        match self.lambda {
            LambdaAxis::Absolute(g) => ps
                .iter()
                .flat_map(|&p| {
                    let b = self.model.boundary(p).ok();
                    g.points().into_iter().map(move |l| (p, l, b.map(|b| b - l)))
                })
                .collect(),
            LambdaAxis::BelowBoundary(g) => ps
                .iter()
                .flat_map(|&p| {
                    let b = self.model.boundary(p).unwrap_or(f64::NAN);
                    g.points().into_iter().map(move |d| (p, b - d, Some(d)))
                })
                .collect(),
            LambdaAxis::JCurve => ps
                .iter()
                .map(|&p| (p, qubit_models::j_curve(p).unwrap_or(f64::NAN), None))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub key: (f64, f64),
    pub fields: Vec<String>,
    pub failed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: &'static [&'static str],
    pub rows: Vec<Row>,
}

impl Table {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.failed).count()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(&r.fields).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii csv")
    }

    /// Writes next to `path` and renames into place, so readers never see a
    /// partial file.
    pub fn write_atomic(&self, path: &Path) -> std::io::Result<()> {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(self.to_csv().as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    }
}

fn row(p: f64, second: f64, fields: Vec<String>, ok: bool) -> Row {
    Row {
        key: (p, second),
        fields,
        failed: !ok,
    }
}

fn failed_row(p: f64, second: f64, n: usize, err: &qglue::Error) -> Row {
    eprintln!("p = {p}, {second}: {err}");
    let mut fields = vec![g17(p), g17(second)];
    fields.resize(n - 1, String::new());
    fields.push("failed".into());
    row(p, second, fields, false)
}

fn q1_row(req: &SweepRequest, p: f64, l: f64) -> Row {
    let r: qglue::Result<CoherentInfoResult> = coherent_info::q1_glued(req.model.kind(), p, l, &req.optimizer);
    match r {
        Ok(r) => {
            let (q, arg) = if req.quantity == Quantity::Q1B {
                (r.q1_b, r.argmax_param)
            } else {
                (r.q1_c, r.argmin_param)
            };
            let fields = vec![g17(p), g17(l), g17(q), opt(arg), r.evaluations.to_string(), "ok".into()];
            row(p, l, fields, true)
        }
        Err(e) => failed_row(p, l, 6, &e),
    }
}

fn delta2_row(req: &SweepRequest, p: f64, l: f64, dl: Option<f64>) -> Row {
    let family = req.ansatz.unwrap_or(match (req.model, req.quantity) {
        (Model::Amplitude, _) => AnsatzFamily::SigmaEps,
        (Model::Dephrasure, Quantity::Delta2Star) => AnsatzFamily::ZetaMix,
        (Model::Dephrasure, _) => AnsatzFamily::RepetitionEta,
    });
    let r: qglue::Result<NonAddResult> = nonadditivity::delta2_with(req.model.kind(), family, p, l, &req.optimizer);
    match r {
        Ok(r) => {
            let fields = vec![
                g17(p),
                g17(l),
                opt(dl),
                g17(r.delta),
                g17(r.best_ansatz.value),
                "ok".into(),
            ];
            row(p, l, fields, true)
        }
        Err(e) => failed_row(p, l, 6, &e),
    }
}

fn boundary_row(req: &SweepRequest, p: f64) -> Row {
    let r = qubit_models::lambda0(p)
        .and_then(|l0| Ok((l0, nonadditivity::boundary_scan_lambda1(p, &req.optimizer)?)));
    match r {
        Ok((l0, l1)) => row(p, 0.0, vec![g17(p), g17(l0), g17(l1), "ok".into()], true),
        Err(e) => {
            eprintln!("p = {p}: {e}");
            row(p, 0.0, vec![g17(p), String::new(), String::new(), "failed".into()], false)
        }
    }
}

/// `delta_lambda` holds λ itself for `q1C`, whose asymptote is in `p` at
/// fixed λ.
fn asym_row(req: &SweepRequest, p: f64, l: f64, dl: Option<f64>) -> Row {
    let kind = req.model.kind();
    let x = if req.compare == Quantity::Q1C { l } else { dl.unwrap_or(f64::NAN) };
    let r = (|| -> qglue::Result<(f64, f64)> {
        Ok(match req.compare {
            Quantity::Q1B => (
                coherent_info::q1_glued(kind, p, l, &req.optimizer)?.q1_b,
                asymptotics::q1b_asymptote(kind, p, x)?,
            ),
            Quantity::Q1C => (
                coherent_info::q1_glued(kind, p, l, &req.optimizer)?.q1_c,
                asymptotics::q1c_asymptote(kind, p, l)?,
            ),
            _ => (
                nonadditivity::delta2_amplitude(p, l, &req.optimizer)?.delta,
                asymptotics::delta2_asymptote(p, x)?,
            ),
        })
    })();
    match r {
        Ok((numeric, asymptote)) => {
            let defined = numeric > 0.0 && asymptote > 0.0;
            let ratio = if defined { (numeric / asymptote).ln() } else { f64::NAN };
            let status = if defined { "ok" } else { "undefined" };
            let fields = vec![g17(p), g17(x), g17(numeric), g17(asymptote), g17(ratio), status.into()];
            row(p, x, fields, true)
        }
        Err(e) => failed_row(p, x, 6, &e),
    }
}

/// Evaluates every grid point (in parallel) and returns the rows sorted by
/// `(p, λ)`. Numeric failures become rows with status `failed`.
pub fn run_sweep(req: &SweepRequest) -> Result<Table, UsageError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = req.jobs {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| UsageError(format!("thread pool: {e}")))?;

    let mut rows: Vec<Row> = pool.install(|| {
        if req.quantity == Quantity::Boundaries {
            let ps = req.p_grid.points();
            return ps.par_iter().map(|&p| boundary_row(req, p)).collect();
        }
        req.points()
            .par_iter()
            .map(|&(p, l, dl)| match req.quantity {
                Quantity::Q1B | Quantity::Q1C => q1_row(req, p, l),
                Quantity::Delta2 | Quantity::Delta2Star => delta2_row(req, p, l, dl),
                _ => asym_row(req, p, l, dl),
            })
            .collect()
    });
    rows.sort_by(|a, b| a.key.0.total_cmp(&b.key.0).then(a.key.1.total_cmp(&b.key.1)));
    Ok(Table {
        header: req.header(),
        rows,
    })
}
