//! Run configuration, table reproduction and curve export.
//!
//! All files are written with a fixed field order and every float rounded
//! to 10 significant digits, then printed as the shortest string that reads
//! back to the same `f64`, so identical configurations give byte-identical
//! output.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::alpha::{AlphaField, AlphaKind};
use crate::benchmarks::{compare_table, Benchmark};
use crate::error::{Error, Result};
use crate::ham::{generate_series, OperatorCoeffs, ProblemSpec, SeriesSolution};
use crate::poly::Poly;
use crate::residual::{averaged_residual, optimize_hbar, ResidualConfig};
use crate::term::Expression;

/// Default ℏ scan window.
pub const DEFAULT_WINDOW: [f64; 2] = [-2.0, 0.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    Problem1,
    Problem2,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Initial condition of a custom problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialGuess {
    /// `amplitude · sin(πx/L)`
    Sine { amplitude: f64 },
    /// Polynomial in x, ascending coefficients.
    Polynomial { coeffs: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub problem: ProblemKind,
    /// Diffusion coefficient; only read for `problem1`.
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "L")]
    pub length: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub alpha: AlphaKind,
    /// Operator coefficients; required for `custom`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorCoeffs>,
    /// Initial condition; required for `custom`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u0: Option<InitialGuess>,
    /// Number of series terms used for curves.
    pub terms: usize,
    pub grid: ResidualConfig,
    /// Fixed ℏ for solution curves instead of the optimized one.
    #[serde(default)]
    pub hbar: Option<f64>,
    pub window: [f64; 2],
    pub output_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
}

impl RunConfig {
    /// Defaults for one of the two reference problems.
    pub fn benchmark(b: Benchmark, literal_deltas: bool) -> Result<Self> {
        let problem = b.problem()?;
        let (kind, terms) = match b {
            Benchmark::Linear => (ProblemKind::Problem1, 5),
            Benchmark::Nonlinear => (ProblemKind::Problem2, 4),
        };
        Ok(Self {
            problem: kind,
            k: problem.ops.a,
            length: problem.length(),
            horizon: problem.horizon(),
            alpha: problem.field.kind,
            operator: None,
            u0: None,
            terms,
            grid: b.grid(&problem, literal_deltas),
            hbar: None,
            window: DEFAULT_WINDOW,
            output_dir: PathBuf::from("out"),
            formats: vec![OutputFormat::Json, OutputFormat::Csv],
        })
    }

    pub fn benchmark_kind(&self) -> Option<Benchmark> {
        match self.problem {
            ProblemKind::Problem1 => Some(Benchmark::Linear),
            ProblemKind::Problem2 => Some(Benchmark::Nonlinear),
            ProblemKind::Custom => None,
        }
    }

    /// Prefix for output file names.
    pub fn tag(&self) -> &'static str {
        match self.problem {
            ProblemKind::Problem1 => "problem1",
            ProblemKind::Problem2 => "problem2",
            ProblemKind::Custom => "custom",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, name: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!(
                    "{name} must be positive and finite, got {v}"
                )))
            }
        };
        positive(self.length, "L")?;
        positive(self.horizon, "T")?;
        if self.terms == 0 {
            return Err(Error::Config("terms must be at least 1".into()));
        }
        let [lo, hi] = self.window;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Config(format!(
                "scan window must satisfy lo < hi, got [{lo}, {hi}]"
            )));
        }
        if let Some(h) = self.hbar {
            if !h.is_finite() {
                return Err(Error::Config(format!("hbar must be finite, got {h}")));
            }
        }
        self.grid.validate()?;
        if self.problem == ProblemKind::Custom && (self.operator.is_none() || self.u0.is_none()) {
            return Err(Error::Config(
                "a custom problem needs both `operator` and `u0`".into(),
            ));
        }
        Ok(())
    }

    pub fn build_problem(&self) -> Result<ProblemSpec> {
        self.validate()?;
        let field = AlphaField::new(self.alpha, self.length, self.horizon)
            .map_err(|e| Error::Config(e.to_string()))?;
        let ops = match self.problem {
            ProblemKind::Problem1 => OperatorCoeffs {
                a: self.k,
                b: 0.0,
                c_nl: 0.0,
                d_lin: 0.0,
                e_quad: 0.0,
            },
            ProblemKind::Problem2 => OperatorCoeffs {
                a: 0.0,
                b: 1.0,
                c_nl: 1.0,
                d_lin: 1.0,
                e_quad: 1.0,
            },
            ProblemKind::Custom => self.operator.expect("checked by validate"),
        };
        let u0 = match (&self.u0, self.problem) {
            (Some(g), _) => initial_expression(g, self.length),
            (None, ProblemKind::Problem1) => Expression::sine(self.length, 1.0),
            (None, _) => Expression::polynomial(self.length, &Poly::var()),
        };
        ProblemSpec::new(field, ops, u0).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }
}

fn initial_expression(g: &InitialGuess, length: f64) -> Expression {
    match g {
        InitialGuess::Sine { amplitude } => Expression::sine(length, *amplitude),
        InitialGuess::Polynomial { coeffs } => {
            Expression::polynomial(length, &Poly::new(coeffs.clone()))
        }
    }
}

/// Rounds to 10 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.9e}").parse().expect("formatted float parses")
}

/// Shortest round-trip text of `round_sig(x)`.
pub fn fmt_float(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        return "0".into();
    }
    let s = format!("{r}");
    // fall back to exponent form when positional form would be long
    let e = format!("{r:e}");
    if e.len() < s.len() {
        e
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub terms: usize,
    pub e_min: f64,
    pub hbar_star: f64,
}

impl ReportRow {
    fn rounded(self) -> Self {
        Self {
            terms: self.terms,
            e_min: round_sig(self.e_min),
            hbar_star: round_sig(self.hbar_star),
        }
    }
}

/// A reproduced table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub problem: String,
    /// Rows where "N terms" means `u_0 + … + u_{N-1}`.
    pub rows: Vec<ReportRow>,
    /// Rows where "N terms" means `u_0 + … + u_N` (N corrections); `terms`
    /// holds N.
    pub rows_corrections: Vec<ReportRow>,
    pub grid_convention: String,
    pub spatial_derivative: String,
    pub notes: Vec<String>,
}

impl TableReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("terms,e_min,hbar_star\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{}\n",
                r.terms,
                fmt_float(r.e_min),
                fmt_float(r.hbar_star)
            ));
        }
        s
    }
}

fn optimized_row(series: &SeriesSolution, n: usize, cfg: &RunConfig) -> Result<ReportRow> {
    let rp = averaged_residual(series, n, &cfg.grid)?;
    let r = optimize_hbar(&rp, cfg.window)?;
    Ok(ReportRow {
        terms: n,
        e_min: r.e_min,
        hbar_star: r.hbar_star,
    })
}

/// Optimizes ℏ for each term count; rows keep full precision.
pub fn run_table(config: &RunConfig, term_counts: &[usize]) -> Result<TableReport> {
    let problem = config.build_problem()?;
    if term_counts.contains(&0) {
        return Err(Error::Config("term counts must be at least 1".into()));
    }
    let max = term_counts.iter().copied().max().unwrap_or(0);
    // the corrections reading needs one term more
    let mut rows = Vec::new();
    let mut rows_corrections = Vec::new();
    if max > 0 {
        let series = generate_series(&problem, max)?;
        for &n in term_counts {
            rows.push(optimized_row(&series, n, config)?);
            let row = optimized_row(&series, n + 1, config)?;
            rows_corrections.push(ReportRow { terms: n, ..row });
        }
    }
    let mut notes = Vec::new();
    if let Some(b) = config.benchmark_kind() {
        let triples: Vec<_> = rows
            .iter()
            .map(|r| (r.terms, r.e_min, r.hbar_star))
            .collect();
        let e_factor = match b {
            Benchmark::Linear => 10.0,
            Benchmark::Nonlinear => 3.0,
        };
        notes = compare_table(&triples, b.table(), 0.02, e_factor);
        if b == Benchmark::Linear {
            notes.push(
                "published spacings read dx = 10/34, dt = 1/34 on L = 1, T = 10; \
                 use --paper-literal-deltas to evaluate on that grid"
                    .into(),
            );
        }
    }
    Ok(TableReport {
        problem: config.tag().into(),
        rows,
        rows_corrections,
        grid_convention: config.grid.convention.as_str().into(),
        spatial_derivative: config.grid.spatial.as_str().into(),
        notes,
    })
}

fn output_dir(config: &RunConfig) -> PathBuf {
    match std::env::var_os("VOFHAM_OUT") {
        Some(d) if !d.is_empty() => PathBuf::from(d),
        _ => config.output_dir.clone(),
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

/// Writes the table in the configured formats with values rounded for output.
pub fn write_table(config: &RunConfig, report: &TableReport) -> Result<Vec<PathBuf>> {
    let dir = output_dir(config);
    let rounded = TableReport {
        rows: report.rows.iter().map(|r| r.rounded()).collect(),
        rows_corrections: report
            .rows_corrections
            .iter()
            .map(|r| r.rounded())
            .collect(),
        ..report.clone()
    };
    let mut out = Vec::new();
    for f in &config.formats {
        let (name, body) = match f {
            OutputFormat::Json => (format!("{}_table.json", config.tag()), rounded.to_json()),
            OutputFormat::Csv => (format!("{}_table.csv", config.tag()), rounded.to_csv()),
        };
        out.push(write_file(&dir, &name, &body)?);
    }
    Ok(out)
}

/// Sampled curves of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Curves {
    pub hbar: f64,
    /// `(ℏ, E(ℏ))` over the scan window.
    pub residual: Vec<(f64, f64)>,
    /// `(t, u(x_mid, t))` at the chosen ℏ.
    pub midline: Vec<(f64, f64)>,
    pub midline_x: f64,
    /// `(x, t, u(x, t))` on a square grid over the domain.
    pub surface: Vec<(f64, f64, f64)>,
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let n = n.max(2);
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

/// Residual curve plus solution samples of the `terms`-term partial sum,
/// at `config.hbar` or else at the optimized ℏ.
pub fn compute_curves(config: &RunConfig, points: usize) -> Result<Curves> {
    let problem = config.build_problem()?;
    let series = generate_series(&problem, config.terms)?;
    let rp = averaged_residual(&series, config.terms, &config.grid)?;
    let hbar = match config.hbar {
        Some(h) => h,
        None => optimize_hbar(&rp, config.window)?.hbar_star,
    };
    let [lo, hi] = config.window;
    let residual = rp.curve(lo, hi, points);
    let phi = series.partial_sum(config.terms)?;
    let field = &problem.field;
    let at = |x: f64, t: f64| -> Result<f64> {
        let v = phi.evaluate(field, x, t)?.eval(hbar);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numerical(format!(
                "u({x}, {t}) is not finite at hbar = {hbar}"
            )))
        }
    };
    let midline_x = 0.5 * problem.length();
    let midline = linspace(0.0, problem.horizon(), points)
        .map(|t| Ok((t, at(midline_x, t)?)))
        .collect::<Result<Vec<_>>>()?;
    let side = points.clamp(2, 101);
    let mut surface = Vec::with_capacity(side * side);
    for x in linspace(0.0, problem.length(), side) {
        for t in linspace(0.0, problem.horizon(), side) {
            surface.push((x, t, at(x, t)?));
        }
    }
    Ok(Curves {
        hbar,
        residual,
        midline,
        midline_x,
        surface,
    })
}

/// Writes `hbar,E`, `t,u` and `x,t,u` CSV files.
pub fn emit_curves(config: &RunConfig, points: usize) -> Result<(Curves, Vec<PathBuf>)> {
    let curves = compute_curves(config, points)?;
    let dir = output_dir(config);
    let tag = config.tag();
    let mut files = Vec::new();
    let mut s = String::from("hbar,E\n");
    for &(h, e) in &curves.residual {
        s.push_str(&format!("{},{}\n", fmt_float(h), fmt_float(e)));
    }
    files.push(write_file(&dir, &format!("{tag}_residual_curve.csv"), &s)?);
    let mut s = String::from("t,u\n");
    for &(t, u) in &curves.midline {
        s.push_str(&format!("{},{}\n", fmt_float(t), fmt_float(u)));
    }
    files.push(write_file(&dir, &format!("{tag}_midline.csv"), &s)?);
    let mut s = String::from("x,t,u\n");
    for &(x, t, u) in &curves.surface {
        s.push_str(&format!(
            "{},{},{}\n",
            fmt_float(x),
            fmt_float(t),
            fmt_float(u)
        ));
    }
    files.push(write_file(&dir, &format!("{tag}_surface.csv"), &s)?);
    Ok((curves, files))
}
