//! Scenario documents and the task runner behind the `freezelab` binary.
//!
//! A document names one task and carries either an inline edge-weighted
//! graph, a renewal potential, or a list of components for the face
//! construction. Running it writes `report.json` and, for curve-producing
//! tasks, CSV files into an output directory.

use std::fs;
use std::path::{Path, PathBuf};

use freezelab_core::construct::{self, Scenario};
use freezelab_core::ergopt::{self, FreezingReport};
use freezelab_core::renewal::{self, RenewalPotential, TailRule};
use freezelab_core::tol::{self, Tolerances};
use freezelab_core::transfer::{self, CURVE_COLUMNS};
use freezelab_core::{Error as CoreError, LocPotential, Sft};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const REPORT_FORMAT: &str = "freezelab-report/1";
pub const CSV_FORMAT: &str = "freezelab-csv/1";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: at `{field}`: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        field: String,
        message: String,
    },
    #[error("{0}")]
    Document(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] CoreError),
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    PressureCurve,
    FreezeDetect,
    Construct,
    Verify,
    SwitchingDemo,
    DensityDemo,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::PressureCurve => "pressure-curve",
            Task::FreezeDetect => "freeze-detect",
            Task::Construct => "construct",
            Task::Verify => "verify",
            Task::SwitchingDemo => "switching-demo",
            Task::DensityDemo => "density-demo",
        }
    }
}

/// `[i, j]` or `[i, j, w]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EdgeDoc {
    Weighted(usize, usize, f64),
    Plain(usize, usize),
}

/// Inline graph with optional edge weights (missing weights are 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SftDoc {
    pub vertices: usize,
    pub edges: Vec<EdgeDoc>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub window: Option<usize>,
}

impl SftDoc {
    /// The essential part of the graph and the weights of surviving edges.
    pub fn build(&self) -> Result<(Sft, LocPotential)> {
        let pairs: Vec<(usize, usize, f64)> = self
            .edges
            .iter()
            .map(|e| match *e {
                EdgeDoc::Weighted(i, j, w) => (i, j, w),
                EdgeDoc::Plain(i, j) => (i, j, 0.0),
            })
            .collect();
        let mut seen = std::collections::BTreeSet::new();
        for &(i, j, _) in &pairs {
            if !seen.insert((i, j)) {
                return Err(CliError::Document(format!("edge [{i}, {j}] listed twice")));
            }
        }
        let plain: Vec<(usize, usize)> = pairs.iter().map(|&(i, j, _)| (i, j)).collect();
        let sft = Sft::build_labeled(self.vertices, &plain, self.labels.clone())?;
        let mut weights = vec![0.0; sft.edge_count()];
        for &(i, j, w) in &pairs {
            let edge = sft
                .vertex_of_original(i)
                .zip(sft.vertex_of_original(j))
                .and_then(|(a, b)| sft.edge_index(a, b));
            if let Some(e) = edge {
                weights[e] = w;
            }
        }
        let phi = LocPotential::with_window(&sft, weights, self.window.unwrap_or(1))?;
        Ok((sft, phi))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenewalDoc {
    #[serde(default)]
    pub table: Vec<f64>,
    pub tail: TailRule,
}

impl RenewalDoc {
    pub fn build(&self) -> Result<RenewalPotential> {
        Ok(RenewalPotential::new(self.table.clone(), self.tail)?)
    }
}

/// `count` evenly spaced points from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_grid: Option<GridDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle_budget: Option<usize>,
    /// Density demo: weight of `1[symbol 1]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// Density demo: perturbation sizes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<Vec<f64>>,
    /// Finite-difference step.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub task: Task,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sft: Option<SftDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub renewal: Option<RenewalDoc>,
    /// Construct task: one weighted graph per component, joined disjointly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<SftDoc>>,
    /// Construct task: indices into `components`, or component indices of
    /// `sft`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face: Option<Vec<usize>>,
    #[serde(default)]
    pub params: Params,
}

impl ScenarioDoc {
    pub fn parse(text: &str, path: &str) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let doc: Self = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let field = e.path().to_string();
            let inner = e.into_inner();
            CliError::Parse {
                path: path.into(),
                line: inner.line(),
                column: inner.column(),
                field,
                message: inner.to_string(),
            }
        })?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    fn validate(&self) -> Result<()> {
        let need = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(CliError::Document(format!(
                    "task {} needs {what}",
                    self.task.name()
                )))
            }
        };
        match self.task {
            Task::PressureCurve | Task::FreezeDetect | Task::Verify => need(
                self.sft.is_some() != self.renewal.is_some(),
                "exactly one of `sft` or `renewal`",
            )?,
            Task::Construct => need(
                self.face.is_some() && (self.sft.is_some() != self.components.is_some()),
                "`face` and exactly one of `sft` or `components`",
            )?,
            Task::SwitchingDemo => {
                need(self.renewal.is_none(), "an `sft` (or none), not `renewal`")?
            }
            Task::DensityDemo => need(self.renewal.is_some(), "`renewal`")?,
        }
        if let Some(b) = &self.params.betas {
            if b.iter().any(|x| !x.is_finite() || *x < 0.0) || b.windows(2).any(|w| w[1] <= w[0]) {
                return Err(CliError::Document(
                    "params.betas must be finite, non-negative and increasing".into(),
                ));
            }
        }
        if self.params.betas.is_some() && self.params.beta_grid.is_some() {
            return Err(CliError::Document(
                "give `betas` or `beta_grid`, not both".into(),
            ));
        }
        if let Some(g) = self.params.beta_grid {
            if !(g.start >= 0.0 && g.stop > g.start && g.count >= 2 && g.stop.is_finite()) {
                return Err(CliError::Document(
                    "params.beta_grid needs 0 <= start < stop and count >= 2".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Command-line overrides of document parameters.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub beta_max: Option<f64>,
    pub tol: Option<f64>,
}

/// Outcome of a run: whether every verification passed, and the files written.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub passed: bool,
    pub files: Vec<PathBuf>,
}

#[derive(Serialize)]
struct Report<'a> {
    format: &'static str,
    task: &'static str,
    tolerances: Tolerances,
    seed: Option<u64>,
    params: &'a Params,
    result: Value,
    passed: bool,
}

struct Output {
    result: Value,
    passed: bool,
    csv: Vec<(&'static str, String)>,
}

fn json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn stamp(columns: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = format!("# {CSV_FORMAT}\n{columns}\n");
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

impl Params {
    fn grid(&self, default: &[f64]) -> Vec<f64> {
        if let Some(b) = &self.betas {
            return b.clone();
        }
        if let Some(g) = self.beta_grid {
            let n = g.count - 1;
            return (0..=n)
                .map(|k| g.start + (g.stop - g.start) * k as f64 / n as f64)
                .collect();
        }
        default.to_vec()
    }
}

fn default_grid() -> Vec<f64> {
    (0..=40).map(|k| k as f64 * 0.25).collect()
}

/// Runs the document and writes the report and CSV files to `out`.
pub fn run(doc: &ScenarioDoc, overrides: Overrides, out: &Path) -> Result<Outcome> {
    let mut params = doc.params.clone();
    if overrides.seed.is_some() {
        params.seed = overrides.seed;
    }
    if overrides.beta_max.is_some() {
        params.beta_max = overrides.beta_max;
    }
    if overrides.tol.is_some() {
        params.tol = overrides.tol;
    }
    let output = match doc.task {
        Task::PressureCurve => pressure_curve_task(doc, &params)?,
        Task::FreezeDetect => freeze_detect_task(doc, &params)?,
        Task::Construct => construct_task(doc, &params)?,
        Task::Verify => verify_task(doc, &params)?,
        Task::SwitchingDemo => switching_task(doc, &params)?,
        Task::DensityDemo => density_task(doc, &params)?,
    };
    let report = Report {
        format: REPORT_FORMAT,
        task: doc.task.name(),
        tolerances: Tolerances::default(),
        seed: params.seed,
        params: &params,
        result: output.result,
        passed: output.passed,
    };
    fs::create_dir_all(out).map_err(|source| CliError::Io {
        path: out.display().to_string(),
        source,
    })?;
    let mut files = Vec::new();
    let mut write = |name: &str, body: String| -> Result<()> {
        let path = out.join(name);
        fs::write(&path, body).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        files.push(path);
        Ok(())
    };
    let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
    text.push('\n');
    write("report.json", text)?;
    for (name, body) in output.csv {
        write(name, body)?;
    }
    Ok(Outcome {
        passed: output.passed,
        files,
    })
}

fn pressure_curve_task(doc: &ScenarioDoc, params: &Params) -> Result<Output> {
    let grid = params.grid(&default_grid());
    if let Some(s) = &doc.sft {
        let (sft, phi) = s.build()?;
        let curve = transfer::pressure_curve(&sft, &phi, &grid)?;
        let passed = curve.check().is_ok();
        let csv = curve.to_csv();
        let csv = format!("# {CSV_FORMAT}\n{csv}");
        return Ok(Output {
            result: json(&curve),
            passed,
            csv: vec![("curve.csv", csv)],
        });
    }
    let p = doc.renewal.as_ref().expect("validated").build()?;
    let tol = params.tol.unwrap_or(tol::RENEWAL);
    let pressures = grid
        .iter()
        .map(|&b| {
            if b == 0.0 {
                Ok(std::f64::consts::LN_2)
            } else {
                renewal::renewal_pressure(&p, b, tol)
            }
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let convex = pressures
        .windows(3)
        .all(|w| w[0] - 2.0 * w[1] + w[2] >= -10.0 * tol);
    let rows = grid
        .iter()
        .zip(&pressures)
        .map(|(b, p)| format!("{b},{p},0,{p},,,"));
    #[derive(Serialize)]
    struct Point {
        beta: f64,
        pressure: f64,
    }
    let points: Vec<Point> = grid
        .iter()
        .zip(&pressures)
        .map(|(&beta, &pressure)| Point { beta, pressure })
        .collect();
    Ok(Output {
        result: serde_json::json!({ "max_mean": 0.0, "residual_entropy": 0.0, "points": json(&points) }),
        passed: convex,
        csv: vec![("curve.csv", stamp(CURVE_COLUMNS, rows))],
    })
}

fn gap_csv(report: &FreezingReport) -> String {
    stamp(
        "beta,gap",
        report
            .gap_profile
            .iter()
            .map(|g| format!("{},{}", g.beta, g.gap)),
    )
}

fn freeze_detect_task(doc: &ScenarioDoc, params: &Params) -> Result<Output> {
    let beta_max = params.beta_max.unwrap_or(50.0);
    let tol = params.tol.unwrap_or(tol::FREEZING);
    let report = match (&doc.sft, &doc.renewal) {
        (Some(s), _) => {
            let (sft, phi) = s.build()?;
            ergopt::detect_freezing(&sft, &phi, beta_max, tol)?
        }
        (_, Some(r)) => renewal::detect_freezing(&r.build()?, beta_max, tol)?,
        _ => unreachable!("validated"),
    };
    Ok(Output {
        result: json(&report),
        passed: true,
        csv: vec![("gap.csv", gap_csv(&report))],
    })
}

fn construct_task(doc: &ScenarioDoc, params: &Params) -> Result<Output> {
    let face_parts = doc.face.clone().expect("validated");
    let scenario = match (&doc.components, &doc.sft) {
        (Some(parts), _) => {
            let built = parts
                .iter()
                .map(SftDoc::build)
                .collect::<Result<Vec<_>>>()?;
            Scenario::assemble("document", &built, &face_parts, params.seed)?
        }
        (_, Some(s)) => {
            let (sft, phi) = s.build()?;
            Scenario {
                name: "document".into(),
                seed: params.seed,
                sft,
                phi,
                face_components: face_parts,
            }
        }
        _ => unreachable!("validated"),
    };
    let face = scenario.face()?;
    let betas = params.grid(&[1.0, 2.0, 5.0, 10.0]);
    let normalized = construct::normalize_on_face(&scenario.sft, &scenario.phi, &face)?;
    let budget = params.cycle_budget.unwrap_or(tol::CYCLE_BUDGET);
    match construct::build_separator_with_cap(&scenario.sft, &normalized, &face, budget) {
        Ok(separator) => {
            let psi = normalized.combine(1.0, &separator.potential(&scenario.sft)?, -1.0)?;
            let lemma = construct::lemma31_report(&scenario.sft, &psi, &face, &betas)?;
            let rows = lemma.rows.iter().map(|r| {
                format!(
                    "{},{},{},{},{}",
                    r.beta, r.pressure, r.predicted, r.face_distance, r.passed
                )
            });
            let csv = stamp("beta,pressure,predicted,face_distance,passed", rows);
            Ok(Output {
                passed: lemma.passed,
                result: serde_json::json!({
                    "outcome": "feasible",
                    "face_components": scenario.face_components,
                    "face_entropies": face.entropies(),
                    "separator": json(&separator),
                    "psi": psi.weights(),
                    "lemma31": json(&lemma),
                }),
                csv: vec![("lemma31.csv", csv)],
            })
        }
        Err(CoreError::Infeasible { certificate }) => Ok(Output {
            passed: false,
            result: serde_json::json!({
                "outcome": "infeasible",
                "face_components": scenario.face_components,
                "certificate": certificate,
            }),
            csv: Vec::new(),
        }),
        Err(e) => Err(e.into()),
    }
}

fn verify_task(doc: &ScenarioDoc, params: &Params) -> Result<Output> {
    let seed = params.seed.unwrap_or(0);
    if let Some(r) = &doc.renewal {
        let p = r.build()?;
        let betas = params.grid(&[0.5, 1.0, 1.5]);
        let mut abramov = Vec::new();
        let mut passed = true;
        for &b in &betas {
            match renewal::abramov_check(&p, b) {
                Ok(rep) => {
                    passed &= rep.passed;
                    abramov.push(json(&rep));
                }
                Err(e @ (CoreError::InfiniteMeanReturn { .. } | CoreError::InvalidInput(_))) => {
                    abramov.push(serde_json::json!({ "beta": b, "diagnostic": e.to_string() }));
                }
                Err(e) => return Err(e.into()),
            }
        }
        let kink = match renewal::kink_check(&p, params.step.unwrap_or(1e-3)) {
            Ok(k) => json(&k),
            Err(e) => serde_json::json!({ "diagnostic": e.to_string() }),
        };
        return Ok(Output {
            result: serde_json::json!({ "abramov": abramov, "kink": kink }),
            passed,
            csv: Vec::new(),
        });
    }
    let (sft, phi) = doc.sft.as_ref().expect("validated").build()?;
    let betas = params.grid(&[0.5, 1.0, 2.0, 5.0]);
    let trials = params.trials.unwrap_or(200);
    let step = params.step.unwrap_or(1e-4);
    let mut passed = true;
    let mut variational = Vec::new();
    let mut derivative = Vec::new();
    for (k, &b) in betas.iter().enumerate() {
        let v = transfer::variational_check(&sft, &phi, b, trials, seed.wrapping_add(k as u64))?;
        passed &= v.passed;
        variational.push(json(&v));
        match transfer::derivative_check(&sft, &phi, b, step) {
            Ok(d) => {
                passed &= d.passed;
                derivative.push(json(&d));
            }
            Err(e @ (CoreError::NondifferentiablePoint { .. } | CoreError::InvalidInput(_))) => {
                derivative.push(serde_json::json!({ "beta0": b, "diagnostic": e.to_string() }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let mut grid = betas.clone();
    if grid[0] != 0.0 {
        grid.insert(0, 0.0);
    }
    let curve = transfer::pressure_curve(&sft, &phi, &grid)?;
    passed &= curve.check().is_ok();
    let budget = params.cycle_budget.unwrap_or(tol::CYCLE_BUDGET);
    let bowen = if sft.is_mixing() {
        let positive: Vec<f64> = grid.iter().copied().filter(|&b| b > 0.0).collect();
        let r = ergopt::bowen_gap_check(&sft, &phi, &positive, budget)?;
        json(&r)
    } else {
        Value::Null
    };
    Ok(Output {
        result: serde_json::json!({
            "variational": variational,
            "derivative": derivative,
            "convex": curve.check().is_ok(),
            "min_second_difference": curve.min_second_difference(),
            "bowen": bowen,
        }),
        passed,
        csv: vec![("curve.csv", format!("# {CSV_FORMAT}\n{}", curve.to_csv()))],
    })
}

fn switching_task(doc: &ScenarioDoc, params: &Params) -> Result<Output> {
    let a = match &doc.sft {
        Some(s) => s.build()?.0,
        None => Sft::full_shift(2)?,
    };
    let betas = params.grid(&[0.5, 0.9, 1.0, 1.1, 2.0, 5.0]);
    let report = construct::switching_scenario(&a, &betas)?;
    let (sft, phi, _, cb) = construct::switching_system(&a)?;
    let eq = transfer::equilibrium(&sft, &phi, 1.0)?;
    let delta_b = eq
        .tied
        .iter()
        .position(|&c| c == cb)
        .map(|i| eq.measures[i].clone())
        .ok_or_else(|| {
            CliError::Document("fixed point is not an equilibrium state at beta = 1".into())
        })?;
    let subset = construct::freezing_subset_check(&sft, &phi, &delta_b, &betas)?;
    let rows = report.rows.iter().map(|r| {
        format!(
            "{},{},{},{},{}",
            r.beta, r.pressure, r.pressure_a, r.pressure_b, r.winner
        )
    });
    Ok(Output {
        passed: report.passed && subset.passed,
        result: serde_json::json!({ "switching": json(&report), "freezing_subset": json(&subset) }),
        csv: vec![(
            "switching.csv",
            stamp("beta,pressure,pressure_a,pressure_b,winner", rows),
        )],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityRow {
    pub eps: f64,
    /// `|eps psi|`.
    pub perturbation: f64,
    pub beta0: f64,
    pub scaled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub c: f64,
    pub rows: Vec<DensityRow>,
    /// Spread of `beta0 * eps` over the rows.
    pub spread: f64,
    /// The product is asserted constant only for `c = 0`; otherwise the
    /// shift by `c` changes every loop sum and the law does not apply.
    pub scaling_asserted: bool,
    pub passed: bool,
}

/// Freezing point of `c 1[symbol 1] + eps psi` for each `eps`.
pub fn density_demo(c: f64, p: &RenewalPotential, eps: &[f64]) -> Result<DensityReport> {
    if eps.is_empty() {
        return Err(CliError::Document(
            "density demo needs at least one eps".into(),
        ));
    }
    let rows = eps
        .iter()
        .map(|&e| {
            let q = renewal::perturb_density(c, p, e)?;
            let beta0 = renewal::freezing_point(&q, tol::RENEWAL)?;
            Ok(DensityRow {
                eps: e,
                perturbation: p.scaled(e)?.sup_norm(),
                beta0,
                scaled: beta0 * e,
            })
        })
        .collect::<std::result::Result<Vec<_>, CoreError>>()?;
    let lo = rows.iter().map(|r| r.scaled).fold(f64::INFINITY, f64::min);
    let hi = rows
        .iter()
        .map(|r| r.scaled)
        .fold(f64::NEG_INFINITY, f64::max);
    let spread = hi - lo;
    let scaling_asserted = c == 0.0;
    Ok(DensityReport {
        c,
        rows,
        spread,
        scaling_asserted,
        passed: !scaling_asserted || spread <= 1e-6,
    })
}

fn density_task(doc: &ScenarioDoc, params: &Params) -> Result<Output> {
    let p = doc.renewal.as_ref().expect("validated").build()?;
    let eps = params.eps.clone().unwrap_or_else(|| vec![1.0, 0.5, 0.25]);
    let report = density_demo(params.c.unwrap_or(0.0), &p, &eps)?;
    let rows = report
        .rows
        .iter()
        .map(|r| format!("{},{},{},{}", r.eps, r.perturbation, r.beta0, r.scaled));
    Ok(Output {
        passed: report.passed,
        result: json(&report),
        csv: vec![(
            "density.csv",
            stamp("eps,perturbation,beta0,beta0_times_eps", rows),
        )],
    })
}

/// Exit status for an outcome: 0 when every check passed, 1 otherwise.
pub fn exit_code(outcome: &Outcome) -> i32 {
    if outcome.passed {
        0
    } else {
        1
    }
}

/// Convenience constructors used by tests and examples.
pub mod docs {
    use super::*;

    pub fn sft(vertices: usize, edges: &[(usize, usize, f64)]) -> SftDoc {
        SftDoc {
            vertices,
            edges: edges
                .iter()
                .map(|&(i, j, w)| EdgeDoc::Weighted(i, j, w))
                .collect(),
            labels: None,
            window: None,
        }
    }

    pub fn full_shift(value_on_one: f64) -> SftDoc {
        sft(
            2,
            &[
                (0, 0, 0.0),
                (0, 1, value_on_one),
                (1, 0, 0.0),
                (1, 1, value_on_one),
            ],
        )
    }

    pub fn zeta_family() -> RenewalDoc {
        RenewalDoc {
            table: vec![-std::f64::consts::LN_2],
            tail: TailRule::Log { scale: 1.0 },
        }
    }

    pub fn geometric_family() -> RenewalDoc {
        RenewalDoc {
            table: Vec::new(),
            tail: TailRule::Geometric {
                coeff: -1.0,
                ratio: 1.0,
            },
        }
    }

    pub fn scenario(task: Task) -> ScenarioDoc {
        ScenarioDoc {
            task,
            sft: None,
            renewal: None,
            components: None,
            face: None,
            params: Params::default(),
        }
    }
}
