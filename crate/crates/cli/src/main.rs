use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use liemoments::asymptotics::{leading_term_i, leading_term_k, ClassFunction};
use liemoments::charring::{CycleType, DEFAULT_SUPPORT_CAP};
use liemoments::harness::{check_hypotheses, exact_value, run_experiment, ExperimentConfig, OutputFormat};
use liemoments::repweights::{weight_system, weyl_dimension};
use liemoments::torusquad::{grid_for, quad_moment, DEFAULT_LOG_CAP};
use liemoments::{RootSystem, Weight};

#[derive(Parser)]
#[command(name = "liemoments", version, about = "Moments of traces over compact Lie groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Root data and fundamental group of a group such as `A2` or `B2xG2`.
    Info {
        group: String,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Weight multiplicities of an irreducible representation.
    Weights {
        group: String,
        /// Highest weight in fundamental-weight coordinates, e.g. `1,0`.
        lambda: String,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Exact value from the character ring.
    Exact(Moment),
    /// Torus quadrature on an aliasing-free grid.
    Quad(Moment),
    /// Leading asymptotic term.
    Asym(Moment),
    /// Convergence study from a TOML config file.
    Converge {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<String>,
    },
}

#[derive(Args)]
struct Moment {
    #[arg(long)]
    group: String,
    #[arg(long)]
    lambda: String,
    /// Cycle type exponents `a_1,a_2,...`.
    #[arg(long)]
    a: String,
    #[arg(long, default_value = "")]
    b: String,
    #[arg(long = "N", default_value_t = 1)]
    n: u64,
    /// Class function `weight:coef;weight:coef`.
    #[arg(long)]
    f: Option<String>,
    /// Per-axis grid sizes, e.g. `64,64`.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
}

struct Parsed {
    rs: RootSystem,
    lam: Weight,
    a: CycleType,
    b: CycleType,
    f: ClassFunction,
}

impl Moment {
    fn parse(&self) -> Result<Parsed> {
        let rs = RootSystem::parse(&self.group)?;
        let lam = Weight::parse(&self.lambda)?;
        rs.check_rank(&lam)?;
        let a = CycleType::parse(&self.a)?;
        let b = if self.b.trim().is_empty() { CycleType::empty() } else { CycleType::parse(&self.b)? };
        let f = match &self.f {
            Some(s) => ClassFunction::parse(s)?,
            None => ClassFunction::one(rs.rank()),
        };
        f.validate(&rs)?;
        Ok(Parsed { rs, lam, a, b, f })
    }

    fn base(&self) -> Vec<(&'static str, Value)> {
        vec![
            ("group", json!(self.group)),
            ("lambda", json!(self.lambda)),
            ("a", json!(self.a)),
            ("b", json!(self.b)),
            ("N", json!(self.n)),
        ]
    }
}

fn render(fields: Vec<(&'static str, Value)>, format: &str) -> Result<String> {
    match format.parse::<OutputFormat>()? {
        OutputFormat::Json => {
            let map: serde_json::Map<String, Value> = fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
            Ok(serde_json::to_string_pretty(&Value::Object(map))?)
        }
        OutputFormat::Csv => {
            let mut wtr = csv::Writer::from_writer(Vec::new());
            wtr.write_record(fields.iter().map(|(k, _)| *k))?;
            wtr.write_record(fields.iter().map(|(_, v)| match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            }))?;
            Ok(String::from_utf8(wtr.into_inner()?)?)
        }
    }
}

fn emit(mut text: String, out: Option<&PathBuf>) -> Result<()> {
    if text.ends_with('\n') {
        text.pop();
    }
    match out {
        Some(path) => std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display())),
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => Ok(r?),
            }
        }
    }
}

fn info(group: &str, format: &str) -> Result<String> {
    let rs = RootSystem::parse(group)?;
    let pi = rs.fundamental_group();
    let fields = vec![
        ("group", json!(group)),
        ("factors", json!(rs.factors().iter().map(|f| f.to_string()).collect::<Vec<_>>())),
        ("rank", json!(rs.rank())),
        ("dim", json!(rs.dim_g())),
        ("positive_roots", json!(rs.num_positive_roots())),
        ("weyl_order", json!(rs.weyl_order().to_string())),
        ("cartan", json!(rs.cartan_matrix())),
        ("rho", json!(rs.rho().to_string())),
        ("fundamental_group_order", json!(pi.order)),
        ("fundamental_group_invariants", json!(pi.invariants)),
        ("fundamental_group_elements", json!(pi.elements.iter().map(|e| e.to_string()).collect::<Vec<_>>())),
    ];
    render(fields, format)
}

fn weights(group: &str, lambda: &str, format: &str) -> Result<String> {
    let rs = RootSystem::parse(group)?;
    let lam = Weight::parse(lambda)?;
    let dim = weyl_dimension(&rs, &lam)?;
    let ws = weight_system(&rs, &lam)?;
    let sorted = ws.sorted();
    match format.parse::<OutputFormat>()? {
        OutputFormat::Json => {
            let list: Vec<Value> =
                sorted.iter().map(|(w, m)| json!({"weight": w.to_string(), "multiplicity": m.to_string()})).collect();
            Ok(serde_json::to_string_pretty(&json!({
                "group": group,
                "lambda": lam.to_string(),
                "dimension": dim.to_string(),
                "weights": list,
            }))?)
        }
        OutputFormat::Csv => {
            let mut wtr = csv::Writer::from_writer(Vec::new());
            wtr.write_record(["weight", "multiplicity"])?;
            for (w, m) in sorted {
                wtr.write_record([w.to_string(), m.to_string()])?;
            }
            Ok(String::from_utf8(wtr.into_inner()?)?)
        }
    }
}

fn exact(m: &Moment) -> Result<String> {
    let p = m.parse()?;
    let value = exact_value(&p.rs, &p.lam, &p.a, &p.b, m.n, &p.f, DEFAULT_SUPPORT_CAP)?;
    let mut fields = m.base();
    fields.push(("exact", json!(value.to_string())));
    render(fields, &m.format)
}

fn parse_grid(s: &Option<String>) -> Result<Option<Vec<u64>>> {
    s.as_ref()
        .map(|g| {
            g.split(',')
                .map(|x| x.trim().parse::<u64>().with_context(|| format!("bad grid size {x:?}")))
                .collect()
        })
        .transpose()
}

fn quad(m: &Moment) -> Result<String> {
    let p = m.parse()?;
    let grid = grid_for(&p.rs, &p.lam, &p.a, &p.b, m.n, &p.f, parse_grid(&m.grid)?)?;
    let q = quad_moment(&p.rs, &p.lam, &p.a, &p.b, m.n, &p.f, &grid, DEFAULT_LOG_CAP)?;
    let mut fields = m.base();
    fields.push(("quad", json!(q.value)));
    fields.push(("imag", json!(q.imag)));
    fields.push(("grid", json!(q.grid.sizes)));
    fields.push(("bandwidth", json!(q.grid.bandwidth_bound)));
    render(fields, &m.format)
}

fn asym(m: &Moment) -> Result<String> {
    let p = m.parse()?;
    let verdict = check_hypotheses(&p.rs, &p.lam, &p.a, &p.b);
    let est = if p.b.is_empty() {
        leading_term_i(&p.rs, &p.lam, &p.a, m.n, &p.f)?
    } else {
        leading_term_k(&p.rs, &p.lam, &p.a, &p.b, m.n, &p.f)?
    };
    let mut fields = m.base();
    fields.push(("value", json!(est.value)));
    fields.push(("log_abs_value", json!(est.log_abs_value)));
    fields.push(("log_dim_power", json!(est.log_dim_power)));
    fields.push(("kappa_term", json!(est.kappa_term.to_string())));
    fields.push(("det_a", json!(est.det_a.to_string())));
    fields.push(("pi_sum", json!([est.pi_sum.re, est.pi_sum.im])));
    fields.push(("prefactor", json!(est.prefactor)));
    fields.push(("lattice_condition", json!(verdict.lattice_holds(m.n))));
    render(fields, &m.format)
}

fn converge(config: &std::path::Path, out: Option<&PathBuf>, format: Option<&str>) -> Result<()> {
    let cfg = ExperimentConfig::from_file(config)?;
    let format = match format {
        Some(f) => f.parse()?,
        None => cfg.format,
    };
    let report = run_experiment(&cfg)?;
    let out = out.cloned().or_else(|| cfg.output.as_ref().map(PathBuf::from));
    emit(report.render(format), out.as_ref())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Info { group, format } => emit(info(group, format)?, None),
        Command::Weights { group, lambda, format } => emit(weights(group, lambda, format)?, None),
        Command::Exact(m) => emit(exact(m)?, m.out.as_ref()),
        Command::Quad(m) => emit(quad(m)?, m.out.as_ref()),
        Command::Asym(m) => emit(asym(m)?, m.out.as_ref()),
        Command::Converge { config, out, format } => converge(config, out.as_ref(), format.as_deref()),
    }
}
