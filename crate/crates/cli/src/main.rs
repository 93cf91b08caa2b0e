use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use zap_core::acceptance::run_all;
use zap_core::asymptotics::{band_halfwidth, count_main, MainTermReport};
use zap_core::census::{beta_sum_check, census, expsum, littlewood_balance};
use zap_core::coefficients::{alpha, alpha_oracle, alpha_zero, CoeffIndex};
use zap_core::evaluator::{EvalConfig, PrecisionMode};
use zap_core::regions::{find_n_min, trivial_apoint, RegionBounds, TrivialBox};
use zap_core::report::{beta_histogram_svg, census_csv, curve_svg, expsum_csv, main_term_csv, num};
use zap_core::rootscan::APoint;
use zap_core::sweep::{manifest_path, read_points, run_scan, scan_sigma, verify_points, RunManifest, DEFAULT_WINDOW};
use zap_core::tunables::BETA_SUM_B;

const SIGMA_MARGIN: f64 = 0.25;
const HISTOGRAM_BINS: usize = 60;

/// a-points of ζ^(k): scanning, coefficient tables and statistics.
#[derive(Parser)]
#[command(name = "zap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Locate a-points on [t0, t1] into a JSONL file (resumable).
    Scan(ScanArgs),
    /// Free-region abscissas and the trivial a-point table.
    Regions(RegionsArgs),
    /// Exponential-sum coefficients as CSV.
    Coeffs(CoeffsArgs),
    /// Point count on (1, T) against its main term.
    Count(CountArgs),
    /// Three-band census of a height window.
    Census(WindowArgs),
    /// Σ x^ρ over (1, T) against its main term.
    Expsum(ExpsumArgs),
    /// Right-half β excess against the line integral.
    Littlewood(WindowArgs),
    /// Σ (β + b) over a window against its main term.
    Betasum(BetasumArgs),
    /// Trivial a-points near −2n.
    Trivial(TrivialArgs),
    /// Run the acceptance suite and print a pass/fail table.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct Target {
    #[arg(long)]
    k: u32,
    /// Target value as RE,IM.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    a: Complex64,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    target: Target,
    #[arg(long)]
    t0: f64,
    #[arg(long)]
    t1: f64,
    /// Worker threads (default: logical cores).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value = "points.jsonl")]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: f64,
    /// Left scan abscissa (default: free region minus a margin).
    #[arg(long, allow_hyphen_values = true)]
    sigma_lo: Option<f64>,
    /// Right scan abscissa (default: free region plus a margin).
    #[arg(long, allow_hyphen_values = true)]
    sigma_hi: Option<f64>,
    /// Stop after this many windows; a later run resumes.
    #[arg(long)]
    max_windows: Option<u64>,
}

#[derive(Args)]
struct RegionsArgs {
    #[command(flatten)]
    target: Target,
    /// Height up to which the left abscissa is probed.
    #[arg(long, default_value_t = 1000.0)]
    t_max: f64,
    /// Number of trivial boxes listed from n_min.
    #[arg(long, default_value_t = 21)]
    trivial: u32,
}

#[derive(Args)]
struct TrivialArgs {
    #[command(flatten)]
    target: Target,
    /// First n (default: smallest n from which every box has winding 1).
    #[arg(long)]
    n0: Option<u32>,
    #[arg(long)]
    n1: Option<u32>,
}

#[derive(Args)]
struct CoeffsArgs {
    #[command(flatten)]
    target: Target,
    /// Largest index listed.
    #[arg(long, default_value_t = 512)]
    max: u64,
    /// Print only this index (dyadic, e.g. 2 or 1.5).
    #[arg(long)]
    x: Option<f64>,
}

#[derive(Args)]
struct PointsArgs {
    /// Points JSONL written by `scan`.
    #[arg(long)]
    points: PathBuf,
    /// Write an SVG plot here.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    input: PointsArgs,
    /// Heights, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    t: Vec<f64>,
}

#[derive(Args)]
struct WindowArgs {
    #[command(flatten)]
    input: PointsArgs,
    #[arg(long)]
    t: f64,
    #[arg(long)]
    u: f64,
}

#[derive(Args)]
struct ExpsumArgs {
    #[command(flatten)]
    input: PointsArgs,
    #[arg(long)]
    x: f64,
    #[arg(long)]
    t: f64,
}

#[derive(Args)]
struct BetasumArgs {
    #[command(flatten)]
    window: WindowArgs,
    #[arg(long, default_value_t = BETA_SUM_B)]
    b: f64,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long)]
    jobs: Option<usize>,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected RE,IM, got {s:?}"))?;
    let p = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok(Complex64::new(p(re)?, p(im)?))
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn write_svg(path: &Option<PathBuf>, body: impl FnOnce() -> String) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, body()).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

/// Points of a scan plus the height range it covers.
struct Scanned {
    k: u32,
    a: Complex64,
    points: Vec<APoint>,
    covered: Option<(f64, f64)>,
}

impl Scanned {
    fn load(path: &Path) -> Result<Self> {
        let mpath = manifest_path(path);
        let manifest = if mpath.exists() {
            let m = RunManifest::load(&mpath).with_context(|| format!("reading {}", mpath.display()))?;
            verify_points(&m, path).with_context(|| format!("verifying {}", path.display()))?;
            if !m.finalized || !m.failed.is_empty() {
                bail!("scan in {} is incomplete; rerun `zap scan` to finish it", path.display());
            }
            Some(m)
        } else {
            None
        };
        let points = read_points(path).with_context(|| format!("reading {}", path.display()))?;
        let (k, a, covered) = match &manifest {
            Some(m) => (m.k, m.a(), Some((m.t0, m.t1))),
            None => {
                let p = points.first().ok_or_else(|| anyhow!("{} has no points and no manifest", path.display()))?;
                (p.k, Complex64::new(p.a_re, p.a_im), None)
            }
        };
        if let Some(p) = points.iter().find(|p| p.k != k || p.a_re != a.re || p.a_im != a.im) {
            bail!("mixed targets in {}: found k={} a={}+{}i", path.display(), p.k, p.a_re, p.a_im);
        }
        Ok(Scanned { k, a, points, covered })
    }

    fn require(&self, lo: f64, hi: f64) -> Result<()> {
        match self.covered {
            Some((t0, t1)) if lo < t0 || hi > t1 => {
                bail!("heights [{lo}, {hi}] exceed the scanned range [{t0}, {t1}]")
            }
            None => {
                eprintln!("warning: no manifest; coverage of [{lo}, {hi}] is not checked");
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn betas(&self, t: f64, u: f64) -> Vec<f64> {
        self.points.iter().filter(|p| p.gamma > t && p.gamma < t + u).map(|p| p.beta).collect()
    }
}

fn cmd_scan(args: ScanArgs, cfg: &EvalConfig) -> Result<bool> {
    let Target { k, a } = args.target;
    let (lo, hi) = match (args.sigma_lo, args.sigma_hi) {
        (Some(lo), Some(hi)) => (lo, hi),
        (lo, hi) => {
            let (dlo, dhi) = scan_sigma(k, a, args.t1.max(args.t0), SIGMA_MARGIN, cfg)?;
            (lo.unwrap_or(dlo), hi.unwrap_or(dhi))
        }
    };
    let mpath = manifest_path(&args.out);
    if mpath.exists() {
        let stored = RunManifest::load(&mpath)?;
        let requested = RunManifest {
            k,
            a_re: a.re,
            a_im: a.im,
            t0: args.t0,
            t1: args.t1,
            window: args.window,
            sigma_lo: lo,
            sigma_hi: hi,
            cfg: cfg.clone(),
            ..stored.clone()
        };
        stored.check_compatible(&requested)?;
        eprintln!("resuming {} ({} of {} windows done)", mpath.display(), stored.completed.len(), stored.window_count());
    } else {
        RunManifest::plan(k, a, args.t0, args.t1, args.window, lo, hi, cfg)?.store(&mpath)?;
    }
    let summary = run_scan(&mpath, &args.out, args.jobs.unwrap_or_else(default_jobs), args.max_windows)?;
    for f in &summary.failed {
        eprintln!("window {} failed: {}", f.id, f.error);
    }
    eprintln!(
        "{} windows processed, {} complete, {} failed{}",
        summary.processed,
        summary.completed,
        summary.failed.len(),
        if summary.finalized { ", file sorted" } else { "" }
    );
    Ok(summary.failed.is_empty())
}

fn trivial_table(rows: &[TrivialBox]) -> String {
    let mut s = String::from("n,beta,gamma,winding,newton_residual,abs_residual\n");
    for b in rows {
        let r = b.root.as_ref();
        let f = |v: Option<f64>| v.map(num).unwrap_or_default();
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            b.n,
            f(r.map(|r| r.beta)),
            f(r.map(|r| r.gamma)),
            b.winding,
            f(r.map(|r| r.newton_residual)),
            f(r.map(|r| r.abs_residual)),
        ));
    }
    s
}

fn trivial_rows(k: u32, a: Complex64, n0: u32, n1: u32, cfg: &EvalConfig) -> Result<Vec<TrivialBox>> {
    (n0..=n1).map(|n| Ok(trivial_apoint(k, a, n, cfg)?)).collect()
}

fn cmd_regions(args: RegionsArgs, cfg: &EvalConfig) -> Result<bool> {
    let Target { k, a } = args.target;
    let b = RegionBounds::compute(k, a, args.t_max, cfg)?;
    let n_min = find_n_min(k, a, 30, cfg)?;
    println!("k,a_re,a_im,e1,e2,e1_strict,e2_strict,e1_witness,t_max,n_min");
    println!(
        "{},{},{},{},{},{},{},{},{},{}",
        k,
        num(a.re),
        num(a.im),
        num(b.e1),
        num(b.e2),
        num(b.e1_strict),
        num(b.e2_strict),
        num(b.e1_witness),
        num(b.t_max),
        n_min
    );
    println!();
    if args.trivial > 0 {
        print!("{}", trivial_table(&trivial_rows(k, a, n_min, n_min + args.trivial - 1, cfg)?));
    }
    Ok(true)
}

fn cmd_trivial(args: TrivialArgs, cfg: &EvalConfig) -> Result<bool> {
    let Target { k, a } = args.target;
    let n0 = match args.n0 {
        Some(n) => n.max(2),
        None => find_n_min(k, a, 30, cfg)?,
    };
    let n1 = args.n1.unwrap_or(n0 + 20);
    if n1 < n0 {
        bail!("n1 = {n1} is below n0 = {n0}");
    }
    print!("{}", trivial_table(&trivial_rows(k, a, n0, n1, cfg)?));
    Ok(true)
}

fn cmd_coeffs(args: CoeffsArgs) -> Result<bool> {
    let Target { k, a } = args.target;
    let value = |x: &CoeffIndex| {
        if a.norm() == 0.0 {
            alpha_zero(k, x)
        } else if x.is_integer() {
            alpha(k, a, x.numerator)
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let indices: Vec<CoeffIndex> = match args.x {
        Some(x) => vec![CoeffIndex::from_f64(x).ok_or_else(|| anyhow!("{x} is not a positive dyadic rational"))?],
        None if a.norm() == 0.0 => {
            if args.max > 10_000 {
                bail!("--max is limited to 10000 for a = 0");
            }
            alpha_oracle(k, a, args.max).entries.into_keys().filter(|x| x.value() > 1.0).collect()
        }
        None => (2..=args.max).map(CoeffIndex::integer).collect(),
    };
    println!("index,alpha_re,alpha_im");
    for x in &indices {
        let v = value(x);
        println!("{x},{},{}", num(v.re), num(v.im));
    }
    Ok(true)
}

fn cmd_count(args: CountArgs) -> Result<bool> {
    let s = Scanned::load(&args.input.points)?;
    let mut rows = Vec::new();
    for &t in &args.t {
        if t <= 1.0 {
            bail!("T = {t} must exceed 1");
        }
        s.require(1.0, t)?;
        let n: u64 = s.points.iter().filter(|p| p.gamma > 1.0 && p.gamma < t).map(|p| p.multiplicity as u64).sum();
        rows.push((t, None, MainTermReport::real(n as f64, count_main(s.k, s.a, t), t.ln())));
    }
    print!("{}", main_term_csv(s.k, s.a.re, s.a.im, &rows));
    write_svg(&args.input.svg, || {
        let samples: Vec<(f64, f64)> = rows.iter().map(|(t, _, r)| (*t, r.ratio)).collect();
        curve_svg("count remainder / log T", "T", "ratio", &samples)
    })?;
    Ok(true)
}

fn cmd_census(args: WindowArgs) -> Result<bool> {
    let s = Scanned::load(&args.input.points)?;
    s.require(args.t, args.t + args.u)?;
    let r = census(s.k, s.a, args.t, args.u, &s.points)?;
    print!("{}", census_csv(&r));
    for (b, g) in &r.boundary {
        eprintln!("band edge point: beta={} gamma={}", num(*b), num(*g));
    }
    write_svg(&args.input.svg, || {
        beta_histogram_svg(
            &format!("beta, T={} U={}", args.t, args.u),
            &s.betas(args.t, args.u),
            HISTOGRAM_BINS,
            (0.5 - r.halfwidth, 0.5 + r.halfwidth),
        )
    })?;
    Ok(true)
}

fn cmd_expsum(args: ExpsumArgs) -> Result<bool> {
    let s = Scanned::load(&args.input.points)?;
    s.require(1.0, args.t)?;
    let x = CoeffIndex::from_f64(args.x).ok_or_else(|| anyhow!("{} is not a positive dyadic rational", args.x))?;
    let r = expsum(s.k, s.a, &x, args.t, &s.points)?;
    print!("{}", expsum_csv(&r));
    if args.input.svg.is_some() {
        let mut samples = Vec::new();
        let steps = 50;
        for i in 1..=steps {
            let t = 1.0 + (args.t - 1.0) * i as f64 / steps as f64;
            if t > std::f64::consts::E {
                samples.push((t, expsum(s.k, s.a, &x, t, &s.points)?.remainder_ratio));
            }
        }
        write_svg(&args.input.svg, || curve_svg(&format!("x = {x}"), "T", "remainder / log T", &samples))?;
    }
    Ok(true)
}

fn cmd_littlewood(args: WindowArgs, cfg: &EvalConfig) -> Result<bool> {
    let s = Scanned::load(&args.input.points)?;
    s.require(args.t, args.t + args.u)?;
    let r = littlewood_balance(s.k, s.a, args.t, args.u, &s.points, cfg)?;
    print!("{}", main_term_csv(s.k, s.a.re, s.a.im, &[(args.t, Some(args.u), r)]));
    write_svg(&args.input.svg, || {
        beta_histogram_svg(&format!("beta, T={} U={}", args.t, args.u), &s.betas(args.t, args.u), HISTOGRAM_BINS, (0.5, 0.5))
    })?;
    Ok(true)
}

fn cmd_betasum(args: BetasumArgs) -> Result<bool> {
    let w = args.window;
    let s = Scanned::load(&w.input.points)?;
    s.require(w.t, w.t + w.u)?;
    let r = beta_sum_check(s.k, s.a, args.b, w.t, w.u, &s.points);
    print!("{}", main_term_csv(s.k, s.a.re, s.a.im, &[(w.t, Some(w.u), r)]));
    let band = band_halfwidth(w.t).map(|h| (0.5 - h, 0.5 + h)).unwrap_or((0.5, 0.5));
    write_svg(&w.input.svg, || {
        beta_histogram_svg(&format!("beta, T={} U={}", w.t, w.u), &s.betas(w.t, w.u), HISTOGRAM_BINS, band)
    })?;
    Ok(true)
}

fn cmd_selftest(args: SelftestArgs, cfg: &EvalConfig) -> Result<bool> {
    let dir = std::env::temp_dir().join(format!("zap-selftest-{}", std::process::id()));
    fs::create_dir_all(&dir)?;
    let results = run_all(cfg, args.jobs.unwrap_or_else(default_jobs), &dir, |r| println!("{r}"));
    let _ = fs::remove_dir_all(&dir);
    let passed = results.iter().filter(|r| r.passed).count();
    println!("{passed}/{} criteria passed", results.len());
    Ok(passed == results.len())
}

fn run(cli: Cli, cfg: &EvalConfig) -> Result<bool> {
    match cli.command {
        Command::Scan(a) => cmd_scan(a, cfg),
        Command::Regions(a) => cmd_regions(a, cfg),
        Command::Coeffs(a) => cmd_coeffs(a),
        Command::Count(a) => cmd_count(a),
        Command::Census(a) => cmd_census(a),
        Command::Expsum(a) => cmd_expsum(a),
        Command::Littlewood(a) => cmd_littlewood(a, cfg),
        Command::Betasum(a) => cmd_betasum(a),
        Command::Trivial(a) => cmd_trivial(a, cfg),
        Command::Selftest(a) => cmd_selftest(a, cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let precision = match PrecisionMode::from_env() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: ZAP_PRECISION: {e}");
            return ExitCode::from(2);
        }
    };
    let cfg = EvalConfig::default().with_precision(precision);
    match run(cli, &cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
