use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use akns_spectra::report::{self, CurveReport, Options};
use akns_spectra::spectral::DEFAULT_SEED;
use akns_spectra::{Error, SolutionSpec, Variant};
use clap::{Args, Parser, Subcommand, ValueEnum};

const PRECISION_VAR: &str = "AKNS_SPECTRA_PRECISION";

#[derive(Parser)]
#[command(
    name = "akns-spectra",
    version,
    about = "Spectral curves of AKNS-hierarchy solutions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the pipeline on one solution and emit a JSON report.
    Report(ReportArgs),
    /// Run every catalog solution and print a summary table.
    Verify(VerifyArgs),
    /// Sweep one parameter and emit curve data as CSV.
    Sweep(SweepArgs),
    /// Tabulate p(x, t) on a grid as CSV.
    Field(FieldArgs),
}

#[derive(Args, Clone, Default)]
struct Params {
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    k1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t3: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t4: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t5: Option<f64>,
    /// Force a = 1, b = 0.
    #[arg(long)]
    canonical: bool,
}

impl Params {
    fn apply(&self, variant: Variant) -> SolutionSpec {
        let mut s = SolutionSpec::new(variant);
        s.a = self.a.unwrap_or(s.a);
        s.b = self.b.unwrap_or(s.b);
        s.theta = self.theta.unwrap_or(s.theta);
        s.k1 = self.k1.unwrap_or(s.k1);
        for (slot, t) in s
            .times
            .iter_mut()
            .zip([self.t1, self.t2, self.t3, self.t4, self.t5])
        {
            *slot = t.unwrap_or(*slot);
        }
        // Rogue waves default to canonical; explicit a, b must pass validation.
        s.canonical = if variant.is_rogue() && (self.a.is_some() || self.b.is_some()) {
            self.canonical
        } else {
            s.canonical || self.canonical
        };
        s
    }
}

#[derive(Args)]
struct Tuning {
    /// Fix the genus instead of detecting it.
    #[arg(long)]
    genus: Option<usize>,
    /// Replace every check tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

impl Tuning {
    fn options(&self) -> Result<Options, Failure> {
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(Failure::usage(format!("--tol must be positive, got {t}")));
            }
        }
        Ok(Options {
            genus: self.genus,
            tol: self.tol,
            seed: self.seed,
        })
    }
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, value_parser = parse_variant)]
    solution: Variant,
    #[command(flatten)]
    params: Params,
    #[command(flatten)]
    tuning: Tuning,
    /// Write the report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Restrict to these solutions (comma separated).
    #[arg(long, value_parser = parse_variant, value_delimiter = ',')]
    only: Vec<Variant>,
    #[command(flatten)]
    params: Params,
    #[command(flatten)]
    tuning: Tuning,
    /// Write all reports as a JSON array.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepParam {
    K1,
    Theta,
    A,
    B,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_parser = parse_variant)]
    solution: Variant,
    #[arg(long, value_enum)]
    param: SweepParam,
    #[arg(long, allow_hyphen_values = true)]
    from: f64,
    #[arg(long, allow_hyphen_values = true)]
    to: f64,
    #[arg(long, default_value_t = 11)]
    steps: usize,
    #[command(flatten)]
    params: Params,
    #[command(flatten)]
    tuning: Tuning,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long, value_parser = parse_variant)]
    solution: Variant,
    #[command(flatten)]
    params: Params,
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    x_min: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    x_max: f64,
    #[arg(long, default_value_t = 101)]
    nx: usize,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    t_min: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    t_max: f64,
    #[arg(long, default_value_t = 21)]
    nt: usize,
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = Variant::ALL.iter().map(|v| v.name()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn verification(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_)
            | Error::ModulusOutOfRange(_)
            | Error::UnsupportedParametrization(_)
            | Error::UnsupportedFlow { .. }
            | Error::UnsupportedK(_)
            | Error::UnsupportedGenus(_) => 2,
            _ => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn check_precision() -> Result<(), Failure> {
    match std::env::var(PRECISION_VAR) {
        Err(_) => Ok(()),
        Ok(v) if v.is_empty() || v == "double" => Ok(()),
        Ok(v) if v == "extended" => Err(Failure::usage("extended precision not built")),
        Ok(v) => Err(Failure::usage(format!(
            "{PRECISION_VAR} must be double or extended, got {v:?}"
        ))),
    }
}

fn emit(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn first_failure(r: &CurveReport) -> String {
    match r.failures().first() {
        Some((name, c)) => format!("{name} = {:e} exceeds {:e}", c.value, c.tolerance),
        None => "none".into(),
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn cmd_report(args: &ReportArgs) -> Result<(), Failure> {
    let s = args.params.apply(args.solution);
    let r = report::run(&s, &args.tuning.options()?)?;
    let mut text = r.to_json();
    text.push('\n');
    emit(args.json.as_ref(), &text)?;
    if r.pass {
        Ok(())
    } else {
        Err(Failure::verification(format!(
            "verification failed: {}",
            first_failure(&r)
        )))
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let variants = if args.only.is_empty() {
        Variant::ALL.to_vec()
    } else {
        args.only.clone()
    };
    let opts = args.tuning.options()?;
    let mut table = format!(
        "{:<10} {:>5} {:>6} {:>10} {:>10} {:>10} {:>10} {:>10}\n",
        "solution", "genus", "pass", "flow", "appell", "baker", "spread", "curve"
    );
    let mut reports = Vec::new();
    let mut failed = Vec::new();
    let cases = variants.len();
    for v in variants {
        let s = args.params.apply(v);
        match report::run(&s, &opts) {
            Ok(r) => {
                let res = |k: &str| r.residuals.get(k).copied().unwrap_or(0.0);
                let flow = r
                    .residuals
                    .iter()
                    .filter(|(k, _)| k.starts_with("flow_"))
                    .fold(0.0f64, |m, (_, v)| m.max(*v));
                let _ = writeln!(
                    table,
                    "{:<10} {:>5} {:>6} {:>10.2e} {:>10.2e} {:>10.2e} {:>10.2e} {:>10.2e}",
                    v.name(),
                    r.genus,
                    if r.pass { "ok" } else { "FAIL" },
                    flow,
                    res("appell"),
                    res("baker_max").max(res("wronskian_max")),
                    res("x_spread").max(res("t_spread")),
                    res("curve_golden"),
                );
                if !r.pass {
                    failed.push(format!("{}: {}", v.name(), first_failure(&r)));
                }
                reports.push(r);
            }
            Err(e) => {
                let f = Failure::from(e);
                if f.code == 2 {
                    return Err(Failure::usage(format!("{}: {}", v.name(), f.message)));
                }
                let _ = writeln!(table, "{:<10} {:>5} {:>6} {}", v.name(), "-", "ERROR", f.message);
                failed.push(format!("{}: {}", v.name(), f.message));
            }
        }
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    let _ = writeln!(table, "{passed}/{cases} pass");
    print!("{table}");
    if let Some(p) = &args.json {
        let text = serde_json::to_string_pretty(&reports).expect("reports serialize");
        emit(Some(p), &(text + "\n"))?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::verification(format!(
            "failing cases:\n  {}",
            failed.join("\n  ")
        )))
    }
}

fn linspace(from: f64, to: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![from];
    }
    (0..n)
        .map(|i| from + (to - from) * i as f64 / (n - 1) as f64)
        .collect()
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    if !(args.from.is_finite() && args.to.is_finite()) {
        return Err(Failure::usage("sweep bounds must be finite"));
    }
    if args.steps < 2 || args.from == args.to {
        return Err(Failure::usage(format!(
            "empty sweep range {}..{} with {} steps",
            args.from, args.to, args.steps
        )));
    }
    let v = args.solution;
    match args.param {
        SweepParam::K1 if v != Variant::DnoidalWave => {
            return Err(Failure::usage("k1 sweeps need --solution dnoidal"))
        }
        SweepParam::Theta if !matches!(v, Variant::KuznetsovMa | Variant::AkhmedievBreather) => {
            return Err(Failure::usage("theta sweeps need --solution km or akhmediev"))
        }
        SweepParam::A | SweepParam::B if args.params.canonical => {
            return Err(Failure::usage("--canonical fixes a and b"))
        }
        _ => {}
    }
    let base = args.params.apply(v);
    let mut opts = args.tuning.options()?;
    let g = opts.genus.unwrap_or(base.genus_hint());
    opts.genus = Some(g);

    let mut out = String::from("param");
    for i in 0..=2 * g + 2 {
        let _ = write!(out, ",r{i}_re,r{i}_im");
    }
    out.push_str(",pass,branch_points\n");
    let mut failed = Vec::new();
    for value in linspace(args.from, args.to, args.steps) {
        let mut s = base;
        match args.param {
            SweepParam::K1 => s.k1 = value,
            SweepParam::Theta => s.theta = value,
            SweepParam::A => s.a = value,
            SweepParam::B => s.b = value,
        }
        let r = report::run(&s, &opts)?;
        out.push_str(&num(value));
        for z in &r.curve.coeffs {
            let _ = write!(out, ",{},{}", num(z.re), num(z.im));
        }
        let bp: Vec<String> = r
            .branch_points
            .iter()
            .map(|c| format!("{}:{}:{}", num(c.center.re), num(c.center.im), c.multiplicity))
            .collect();
        let _ = writeln!(out, ",{},{}", r.pass, bp.join(";"));
        if !r.pass {
            failed.push(format!("{value}: {}", first_failure(&r)));
        }
    }
    emit(args.csv.as_ref(), &out)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::verification(format!(
            "failing rows:\n  {}",
            failed.join("\n  ")
        )))
    }
}

fn cmd_field(args: &FieldArgs) -> Result<(), Failure> {
    let axis = |lo: f64, hi: f64, n: usize, name: &str| {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi || n == 0 || (n > 1 && lo == hi) {
            Err(Failure::usage(format!(
                "invalid {name} grid {lo}..{hi} with {n} points"
            )))
        } else {
            Ok(linspace(lo, hi, n))
        }
    };
    let xs = axis(args.x_min, args.x_max, args.nx, "x")?;
    let ts = axis(args.t_min, args.t_max, args.nt, "t")?;
    let s = args.params.apply(args.solution);
    let grid = s.field_grid(&xs, &ts)?;
    let mut out = String::from("x,t,re,im,abs\n");
    for (x, t, p) in grid {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            num(x),
            num(t),
            num(p.re),
            num(p.im),
            num(p.norm())
        );
    }
    emit(args.csv.as_ref(), &out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = check_precision().and_then(|()| match &cli.command {
        Command::Report(a) => cmd_report(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Field(a) => cmd_field(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("akns-spectra: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
