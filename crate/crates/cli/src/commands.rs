use serde::Serialize;

use dominance_core::distributions::RngStream;
use dominance_core::indices::{gamma_empirical, gamma_normal, pi_empirical, pi_normal, IndexKind};
use dominance_core::inference::{run_test, Method, TestReport, TestSpec};
use dominance_core::simulation::{contour_grid, reference_design, run_table, SimulationCell, TableRow};
use dominance_core::Empirical;

use crate::input::load_samples;
use crate::output::{format_float, to_csv, to_json, SCHEMA};
use crate::{Cli, CliError, Command, ContourArgs, Design, Format, IndexArgs, SimulateArgs, TestArgs};

/// Executes the command and returns the rendered document.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(k) = cli.global.threads {
        if k == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(k);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let format = cli.global.format;
    pool.install(|| match &cli.command {
        Command::Index(args) => index(args, format),
        Command::Test(args) => test(args, format),
        Command::Simulate(args) => simulate(args, format),
        Command::Contour(args) => contour(args, format),
    })
}

fn json<T: Serialize>(doc: &T) -> Result<String, CliError> {
    to_json(doc).map_err(|e| CliError::Output(e.to_string()))
}

fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    to_csv(header, rows).map_err(|e| CliError::Output(e.to_string()))
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::LeastFavorable => "least-favorable",
        Method::Bootstrap => "bootstrap",
        Method::PluginNormal => "plugin-normal",
    }
}

fn opt_float(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

#[derive(Serialize)]
struct NormalFit {
    mean_x: f64,
    sd_x: f64,
    mean_y: f64,
    sd_y: f64,
    pi: f64,
    gamma: f64,
}

impl NormalFit {
    fn of(x: &Empirical, y: &Empirical) -> Result<Self, CliError> {
        let (mean_x, sd_x) = (x.mean(), x.variance_ml().sqrt());
        let (mean_y, sd_y) = (y.mean(), y.variance_ml().sqrt());
        Ok(Self {
            mean_x,
            sd_x,
            mean_y,
            sd_y,
            pi: pi_normal(mean_x, sd_x, mean_y, sd_y)?,
            gamma: gamma_normal(mean_x, sd_x, mean_y, sd_y)?,
        })
    }
}

#[derive(Serialize)]
struct IndexDoc {
    schema: &'static str,
    command: &'static str,
    n: usize,
    m: usize,
    pi: f64,
    gamma_hat: f64,
    gamma_star: f64,
    crossing_mass: f64,
    psi_start: f64,
    psi_end: f64,
    psi_max_abs: f64,
    degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    normal: Option<NormalFit>,
}

fn index(args: &IndexArgs, format: Format) -> Result<String, CliError> {
    let (x, y) = load_samples(&args.samples.inputs)?;
    let curve = gamma_empirical(&x, &y);
    let doc = IndexDoc {
        schema: SCHEMA,
        command: "index",
        n: x.len(),
        m: y.len(),
        pi: pi_empirical(&x, &y),
        gamma_hat: curve.gamma_hat,
        gamma_star: curve.gamma_star,
        crossing_mass: curve.crossing_mass,
        psi_start: curve.psi_start(),
        psi_end: curve.psi_end(),
        psi_max_abs: curve.max_abs(),
        degenerate: curve.degenerate,
        normal: if args.assume_normal { Some(NormalFit::of(&x, &y)?) } else { None },
    };
    match format {
        Format::Json => json(&doc),
        Format::Csv => {
            let fit = doc.normal.as_ref();
            let pick = |f: fn(&NormalFit) -> f64| opt_float(fit.map(f));
            csv(
                &[
                    "n", "m", "pi", "gamma_hat", "gamma_star", "crossing_mass", "psi_start", "psi_end",
                    "psi_max_abs", "degenerate", "normal_mean_x", "normal_sd_x", "normal_mean_y", "normal_sd_y",
                    "normal_pi", "normal_gamma",
                ],
                [vec![
                    doc.n.to_string(),
                    doc.m.to_string(),
                    format_float(doc.pi),
                    format_float(doc.gamma_hat),
                    format_float(doc.gamma_star),
                    format_float(doc.crossing_mass),
                    format_float(doc.psi_start),
                    format_float(doc.psi_end),
                    format_float(doc.psi_max_abs),
                    doc.degenerate.to_string(),
                    pick(|f| f.mean_x),
                    pick(|f| f.sd_x),
                    pick(|f| f.mean_y),
                    pick(|f| f.sd_y),
                    pick(|f| f.pi),
                    pick(|f| f.gamma),
                ]],
            )
        }
    }
}

#[derive(Serialize)]
struct TestDoc {
    schema: &'static str,
    command: &'static str,
    seed: u64,
    replicates: usize,
    #[serde(flatten)]
    report: TestReport,
}

fn test(args: &TestArgs, format: Format) -> Result<String, CliError> {
    let mut spec = TestSpec::new(args.index, args.delta0, args.alpha, args.method)?.with_replicates(args.replicates)?;
    spec.bias_correct_gamma = args.bias_correct_gamma;
    let (x, y) = load_samples(&args.samples.inputs)?;
    let report = run_test(RngStream::new(args.seed, 0), &x, &y, &spec)?;
    match format {
        Format::Json => json(&TestDoc {
            schema: SCHEMA,
            command: "test",
            seed: args.seed,
            replicates: args.replicates,
            report,
        }),
        Format::Csv => {
            let r = &report;
            csv(
                &[
                    "index", "method", "n", "m", "delta0", "alpha", "seed", "B", "estimate_raw", "estimate_used",
                    "sigma_used", "statistic", "critical", "reject", "upper_bound", "lambda_nm", "degeneracy_flag",
                ],
                [vec![
                    r.index.to_string(),
                    method_name(r.method).to_string(),
                    r.n.to_string(),
                    r.m.to_string(),
                    format_float(r.delta0),
                    format_float(r.alpha),
                    args.seed.to_string(),
                    args.replicates.to_string(),
                    format_float(r.estimate_raw),
                    format_float(r.estimate_used),
                    format_float(r.sigma_used),
                    format_float(r.statistic),
                    format_float(r.critical),
                    r.reject.to_string(),
                    format_float(r.upper_bound),
                    format_float(r.lambda_nm),
                    r.degeneracy_flag.to_string(),
                ]],
            )
        }
    }
}

#[derive(Serialize)]
struct SimRow {
    #[serde(flatten)]
    cell: SimulationCell,
    rejections: Option<usize>,
    rate: Option<f64>,
    mc_se: Option<f64>,
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_s: Option<f64>,
}

impl SimRow {
    fn new(row: TableRow, timing: bool) -> Self {
        let (ok, error) = match row.outcome {
            Ok(o) => (Some(o), None),
            Err(e) => (None, Some(e)),
        };
        Self {
            cell: row.cell,
            rejections: ok.as_ref().map(|o| o.rejections),
            rate: ok.as_ref().map(|o| o.rate),
            mc_se: ok.as_ref().map(|o| o.mc_se),
            wall_time_s: if timing { ok.as_ref().map(|o| o.wall_time.as_secs_f64()) } else { None },
            error,
        }
    }

    fn fields(&self, timing: bool) -> Vec<String> {
        let c = &self.cell;
        let mut f = vec![
            format_float(c.mu),
            format_float(c.sigma),
            c.n.to_string(),
            c.m.to_string(),
            c.index.to_string(),
            format_float(c.delta0),
            format_float(c.alpha),
            method_name(c.method).to_string(),
            c.replicates.to_string(),
            c.reps.to_string(),
            c.seed.to_string(),
            self.rejections.map(|r| r.to_string()).unwrap_or_default(),
            opt_float(self.rate),
            opt_float(self.mc_se),
            self.error.clone().unwrap_or_default(),
        ];
        if timing {
            f.push(opt_float(self.wall_time_s));
        }
        f
    }
}

#[derive(Serialize)]
struct SimDoc {
    schema: &'static str,
    command: &'static str,
    rows: Vec<SimRow>,
}

fn simulation_cells(args: &SimulateArgs) -> Result<Vec<SimulationCell>, CliError> {
    if let Some(design) = args.design {
        if args.sizes.is_empty() {
            return Err(CliError::Usage("--sizes needs at least one size".into()));
        }
        let index = match design {
            Design::Table1 => IndexKind::Pi,
            Design::Table2 => IndexKind::Gamma,
        };
        let mut cells = reference_design(index, args.method, &args.sizes, args.replicates, args.reps, args.seed);
        for c in &mut cells {
            c.alpha = args.alpha;
        }
        return Ok(cells);
    }
    let missing = |name: &str| CliError::Usage(format!("--{name} is required without --design"));
    let n = args.n.ok_or_else(|| missing("n"))?;
    Ok(vec![SimulationCell {
        mu: args.mu.ok_or_else(|| missing("mu"))?,
        sigma: args.sigma.ok_or_else(|| missing("sigma"))?,
        n,
        m: args.m.unwrap_or(n),
        index: args.index,
        delta0: args.delta0.ok_or_else(|| missing("delta0"))?,
        alpha: args.alpha,
        method: args.method,
        replicates: args.replicates,
        reps: args.reps,
        seed: args.seed,
    }])
}

fn simulate(args: &SimulateArgs, format: Format) -> Result<String, CliError> {
    let cells = simulation_cells(args)?;
    for c in &cells {
        c.validate()?;
    }
    let rows: Vec<SimRow> = run_table(&cells)
        .rows
        .into_iter()
        .map(|r| SimRow::new(r, args.timing))
        .collect();
    match format {
        Format::Json => json(&SimDoc {
            schema: SCHEMA,
            command: "simulate",
            rows,
        }),
        Format::Csv => {
            let mut header = vec![
                "mu", "sigma", "n", "m", "index", "delta0", "alpha", "method", "B", "reps", "seed", "rejections",
                "rate", "mc_se", "error",
            ];
            if args.timing {
                header.push("wall_time_s");
            }
            csv(&header, rows.iter().map(|r| r.fields(args.timing)))
        }
    }
}

#[derive(Serialize)]
struct ContourDoc {
    schema: &'static str,
    command: &'static str,
    #[serde(flatten)]
    grid: dominance_core::simulation::ContourGrid,
}

fn contour(args: &ContourArgs, format: Format) -> Result<String, CliError> {
    let grid = contour_grid(args.index, args.mu_range, args.sigma_range)?;
    match format {
        Format::Json => json(&ContourDoc {
            schema: SCHEMA,
            command: "contour",
            grid,
        }),
        Format::Csv => csv(
            &["index", "mu", "sigma", "value"],
            grid.records()
                .map(|(mu, sigma, v)| vec![grid.index.to_string(), format_float(mu), format_float(sigma), format_float(v)]),
        ),
    }
}
