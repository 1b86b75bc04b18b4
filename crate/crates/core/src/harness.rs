//! Experiment runner: evaluates a moment integral along a schedule of tensor
//! powers by the exact, quadrature and asymptotic routes and assembles a
//! convergence report.

use std::path::Path;
use std::time::Instant;

use num::{BigInt, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{leading_term_i, leading_term_k, AsymptoticEstimate, ClassFunction};
use crate::charring::{exact_moment_against, exact_moment_capped, joint_gcd, CycleType, DEFAULT_SUPPORT_CAP};
use crate::error::{Error, Result};
use crate::linalg::ln_bigint_abs;
use crate::repweights::is_regular;
use crate::rootsys::{RootSystem, Weight};
use crate::torusquad::{grid_for, quad_moment, DEFAULT_LOG_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalPath {
    Exact,
    Quad,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

/// A convergence study, read from TOML.
///
/// ```toml
/// group = "A1"
/// lambda = "1"
/// a = "1"
/// b = ""
/// n = [2, 4, 8]          # or n_range = [2, 160, 2]
/// f = "0:1"
/// paths = ["exact", "asymptotic"]
/// format = "csv"
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub group: String,
    pub lambda: String,
    pub a: String,
    #[serde(default)]
    pub b: String,
    #[serde(default)]
    pub n: Vec<u64>,
    /// `[start, end, step]`, inclusive of `end` when reached.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_range: Option<[u64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    pub paths: Vec<EvalPath>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_log_cap: Option<f64>,
    /// Wall-clock timings make reports differ between runs; off by default.
    #[serde(default)]
    pub record_timings: bool,
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.schedule()?;
        if cfg.paths.is_empty() {
            return Err(Error::Config("at least one evaluation path is required".into()));
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// The N schedule: `n` followed by `n_range`, strictly increasing.
    pub fn schedule(&self) -> Result<Vec<u64>> {
        let mut out = self.n.clone();
        if let Some([start, end, step]) = self.n_range {
            if step == 0 {
                return Err(Error::Config("n_range step must be positive".into()));
            }
            out.extend((start..=end).step_by(step as usize));
        }
        if out.is_empty() {
            return Err(Error::Config("empty N schedule".into()));
        }
        if out[0] == 0 {
            return Err(Error::Config("N must be positive".into()));
        }
        if let Some(w) = out.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Config(format!("N schedule not strictly increasing at {} → {}", w[0], w[1])));
        }
        Ok(out)
    }
}

/// One named predicate with its outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Moment {
    /// `I_N(f, α)`, no conjugated factors.
    I,
    /// `K_N(f, α, β)`.
    K,
}

/// Every hypothesis of the leading-term formulas, evaluated exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisVerdict {
    pub moment: Moment,
    pub checks: Vec<Check>,
    /// Smallest `m > 0` with `mλ` in the root lattice (0 if undefined).
    pub root_lattice_order: u64,
    pub k_alpha: u64,
}

impl HypothesisVerdict {
    fn relevant(&self) -> &'static [&'static str] {
        match self.moment {
            Moment::I => &["dominant", "regular", "gcd_alpha"],
            Moment::K => &["dominant", "regular", "gcd_joint", "k_balance"],
        }
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Failing checks among those the selected formula needs.
    pub fn failing(&self) -> Vec<&Check> {
        self.relevant().iter().filter_map(|n| self.get(n)).filter(|c| !c.holds).collect()
    }

    pub fn applicable(&self) -> bool {
        self.failing().is_empty()
    }

    /// Whether `N k_α λ` lies in the root lattice; otherwise the leading
    /// term of `I_N` vanishes.
    pub fn lattice_holds(&self, n: u64) -> bool {
        self.root_lattice_order != 0 && (n * self.k_alpha).is_multiple_of(self.root_lattice_order)
    }
}

fn check(name: &'static str, holds: bool, detail: String) -> Check {
    Check { name, holds, detail }
}

pub fn check_hypotheses(rs: &RootSystem, lam: &Weight, a: &CycleType, b: &CycleType) -> HypothesisVerdict {
    let moment = if b.is_empty() { Moment::I } else { Moment::K };
    let rank_ok = lam.rank() == rs.rank();
    let dominant = rank_ok && rs.is_dominant(lam);
    let regular = dominant && is_regular(rs, lam);
    let ga = a.gcd_support();
    let gj = joint_gcd(a, b);
    let checks = vec![
        check(
            "dominant",
            dominant,
            if !rank_ok {
                format!("λ = {lam} has rank {}, group has rank {}", lam.rank(), rs.rank())
            } else if dominant {
                format!("λ = {lam} is dominant")
            } else {
                format!("λ = {lam} has a negative coordinate")
            },
        ),
        check(
            "regular",
            regular,
            if regular { format!("λ = {lam} is regular") } else { format!("λ = {lam} is not regular") },
        ),
        check("gcd_alpha", ga == 1, format!("gcd{{j : α_j ≠ 0}} = {ga}")),
        check("gcd_joint", gj == 1, format!("gcd{{j : α_j ≠ 0 or β_j ≠ 0}} = {gj}")),
        check(
            "k_balance",
            a.weight() == b.weight(),
            format!("k_α = {}, k_β = {}", a.weight(), b.weight()),
        ),
    ];
    let root_lattice_order = if rank_ok { rs.root_lattice_order(lam) } else { 0 };
    HypothesisVerdict { moment, checks, root_lattice_order, k_alpha: a.weight() }
}

/// One scheduled tensor power.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub n: u64,
    /// Exact integer as a decimal string.
    pub exact: Option<String>,
    pub quad: Option<f64>,
    pub quad_imag: Option<f64>,
    pub quad_grid: Option<Vec<u64>>,
    pub asymptotic: Option<AsymptoticEstimate>,
    /// `exact / leading` (quadrature value when no exact value), via logs.
    pub ratio: Option<f64>,
    pub abs_ratio_minus_one: Option<f64>,
    /// `|quad − exact| / max(1, |exact|)`.
    pub quad_exact_discrepancy: Option<f64>,
    pub lattice_condition: bool,
    pub errors: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub config: ExperimentConfig,
    pub hypotheses: HypothesisVerdict,
    /// `"ok"` or `"hypothesis-violated"` (or `"not-requested"`).
    pub asymptotic_status: String,
    pub rows: Vec<Row>,
    /// Slope of `ln|r−1|` against `ln N` on the upper half of the schedule.
    pub fitted_exponent: Option<f64>,
    pub fit_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_elapsed_ms: Option<f64>,
}

/// Least-squares slope of `y` against `x`; `None` for fewer than two
/// distinct abscissae.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Fitted error exponent from `(N, |r_N − 1|)` on the upper half of the
/// schedule, skipping rows without a ratio.
pub fn fitted_exponent(rows: &[(u64, Option<f64>)]) -> (Option<f64>, usize) {
    let start = rows.len() / 2;
    let pts: Vec<(f64, f64)> = rows[start..]
        .iter()
        .filter_map(|&(n, e)| e.filter(|e| *e > 0.0 && e.is_finite()).map(|e| ((n as f64).ln(), e.ln())))
        .collect();
    (fit_slope(&pts), pts.len())
}

/// `x / est` computed as `sign · exp(ln|x| − ln|est|)`.
fn log_ratio(ln_abs_x: f64, sign_x: f64, est: &AsymptoticEstimate) -> Option<f64> {
    if est.value == 0.0 || !est.log_abs_value.is_finite() {
        return None;
    }
    if sign_x == 0.0 {
        return Some(0.0);
    }
    Some(sign_x * est.value.signum() * (ln_abs_x - est.log_abs_value).exp())
}

struct Prepared {
    rs: RootSystem,
    lam: Weight,
    a: CycleType,
    b: CycleType,
    f: ClassFunction,
}

fn prepare(cfg: &ExperimentConfig) -> Result<Prepared> {
    let rs = RootSystem::parse(&cfg.group)?;
    let lam = Weight::parse(&cfg.lambda)?;
    rs.check_rank(&lam)?;
    if !rs.is_dominant(&lam) {
        return Err(Error::NotDominant { weight: lam.to_string() });
    }
    let a = CycleType::parse(&cfg.a)?;
    let b = if cfg.b.trim().is_empty() { CycleType::empty() } else { CycleType::parse(&cfg.b)? };
    if a.is_empty() && b.is_empty() {
        return Err(Error::Config("a and b are both empty".into()));
    }
    let f = match &cfg.f {
        Some(s) => ClassFunction::parse(s)?,
        None => ClassFunction::one(rs.rank()),
    };
    f.validate(&rs)?;
    Ok(Prepared { rs, lam, a, b, f })
}

/// Exact moment at tensor power `n`; `f` must have integer coefficients.
pub fn exact_value(
    rs: &RootSystem,
    lam: &Weight,
    a: &CycleType,
    b: &CycleType,
    n: u64,
    f: &ClassFunction,
    cap: usize,
) -> Result<BigInt> {
    let (a, b) = (a.scaled(n), b.scaled(n));
    if f.is_one() {
        return exact_moment_capped(rs, lam, &a, &b, cap);
    }
    let terms = f
        .integer_terms()
        .ok_or_else(|| Error::Config("the exact path needs integer coefficients in f".into()))?;
    terms.iter().try_fold(BigInt::zero(), |acc, (nu, c)| {
        Ok(acc + c * exact_moment_against(rs, lam, &a, &b, nu)?)
    })
}

fn run_row(cfg: &ExperimentConfig, p: &Prepared, verdict: &HypothesisVerdict, asym_ok: bool, n: u64) -> Row {
    let started = Instant::now();
    let mut errors = Vec::new();
    let wants = |path| cfg.paths.contains(&path);

    let exact = if wants(EvalPath::Exact) {
        match exact_value(&p.rs, &p.lam, &p.a, &p.b, n, &p.f, cfg.support_cap.unwrap_or(DEFAULT_SUPPORT_CAP)) {
            Ok(v) => Some(v),
            Err(e) => {
                errors.push(format!("exact: {e}"));
                None
            }
        }
    } else {
        None
    };

    let mut quad = None;
    if wants(EvalPath::Quad) {
        let res = grid_for(&p.rs, &p.lam, &p.a, &p.b, n, &p.f, cfg.grid.clone()).and_then(|g| {
            quad_moment(&p.rs, &p.lam, &p.a, &p.b, n, &p.f, &g, cfg.quad_log_cap.unwrap_or(DEFAULT_LOG_CAP))
        });
        match res {
            Ok(q) => quad = Some(q),
            Err(e) => errors.push(format!("quad: {e}")),
        }
    }

    let asymptotic = if wants(EvalPath::Asymptotic) && asym_ok {
        let est = if p.b.is_empty() {
            leading_term_i(&p.rs, &p.lam, &p.a, n, &p.f)
        } else {
            leading_term_k(&p.rs, &p.lam, &p.a, &p.b, n, &p.f)
        };
        match est {
            Ok(e) => Some(e),
            Err(e) => {
                errors.push(format!("asymptotic: {e}"));
                None
            }
        }
    } else {
        None
    };

    let ratio = asymptotic.as_ref().and_then(|est| match (&exact, &quad) {
        (Some(x), _) => {
            let sign = if x.is_zero() { 0.0 } else if x.is_negative() { -1.0 } else { 1.0 };
            log_ratio(ln_bigint_abs(x), sign, est)
        }
        (None, Some(q)) => log_ratio(q.value.abs().ln(), if q.value == 0.0 { 0.0 } else { q.value.signum() }, est),
        _ => None,
    });
    let quad_exact_discrepancy = match (&exact, &quad) {
        (Some(x), Some(q)) => {
            let xf = crate::linalg::rat_to_f64(&num::BigRational::from_integer(x.clone()));
            Some((q.value - xf).abs() / xf.abs().max(1.0))
        }
        _ => None,
    };

    Row {
        n,
        exact: exact.map(|x| x.to_string()),
        quad: quad.as_ref().map(|q| q.value),
        quad_imag: quad.as_ref().map(|q| q.imag),
        quad_grid: quad.map(|q| q.grid.sizes),
        asymptotic,
        abs_ratio_minus_one: ratio.map(|r| (r - 1.0).abs()),
        ratio,
        quad_exact_discrepancy,
        lattice_condition: verdict.lattice_holds(n),
        errors,
        elapsed_ms: cfg.record_timings.then(|| started.elapsed().as_secs_f64() * 1e3),
    }
}

/// Runs every requested path on every scheduled N. Per-row failures are
/// recorded in the row; only configuration errors abort.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    if cfg.paths.is_empty() {
        return Err(Error::Config("at least one evaluation path is required".into()));
    }
    let schedule = cfg.schedule()?;
    let started = Instant::now();
    let p = prepare(cfg)?;
    let hypotheses = check_hypotheses(&p.rs, &p.lam, &p.a, &p.b);
    let asym_ok = hypotheses.applicable();
    let asymptotic_status = if !cfg.paths.contains(&EvalPath::Asymptotic) {
        "not-requested"
    } else if asym_ok {
        "ok"
    } else {
        "hypothesis-violated"
    }
    .to_string();
    let rows: Vec<Row> = schedule.par_iter().map(|&n| run_row(cfg, &p, &hypotheses, asym_ok, n)).collect();
    let pairs: Vec<(u64, Option<f64>)> = rows.iter().map(|r| (r.n, r.abs_ratio_minus_one)).collect();
    let (fitted_exponent, fit_points) = fitted_exponent(&pairs);
    Ok(ConvergenceReport {
        config: cfg.clone(),
        hypotheses,
        asymptotic_status,
        rows,
        fitted_exponent,
        fit_points,
        total_elapsed_ms: cfg.record_timings.then(|| started.elapsed().as_secs_f64() * 1e3),
    })
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(ToString::to_string).unwrap_or_default()
}

impl ConvergenceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        let header = [
            "n",
            "exact",
            "quad",
            "quad_imag",
            "asymptotic",
            "log_abs_asymptotic",
            "ratio",
            "abs_ratio_minus_one",
            "lattice_condition",
            "errors",
        ];
        wtr.write_record(header).expect("in-memory write");
        for r in &self.rows {
            wtr.write_record([
                r.n.to_string(),
                opt(&r.exact),
                opt(&r.quad),
                opt(&r.quad_imag),
                opt(&r.asymptotic.as_ref().map(|a| a.value)),
                opt(&r.asymptotic.as_ref().map(|a| a.log_abs_value)),
                opt(&r.ratio),
                opt(&r.abs_ratio_minus_one),
                r.lattice_condition.to_string(),
                r.errors.join("; "),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(wtr.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
        }
    }

    pub fn write(&self, path: &Path, format: OutputFormat) -> Result<()> {
        std::fs::write(path, self.render(format)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}
