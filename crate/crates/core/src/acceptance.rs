//! The acceptance suite: ten end-to-end checks run at desk scale, shared by
//! the `acceptance` test target and `zap selftest`.

use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use crate::asymptotics::count_main;
use crate::census::{beta_sum_check, census, expsum, littlewood_balance};
use crate::coefficients::{alpha, alpha_oracle, alpha_zero, alpha_zero_magnitude, CoeffIndex};
use crate::evaluator::{zeta, zeta_deriv, EvalConfig};
use crate::regions::{find_n_min, trivial_apoint, RegionBounds};
use crate::rootscan::{strip_count_check, APoint};
use crate::sweep::{run_scan, scan_in_memory, RunManifest, DEFAULT_WINDOW};
use crate::tunables::*;

type Fallible<T> = Result<T, Box<dyn std::error::Error + Send + Sync>>;

/// Margin added to the free abscissas when scanning.
const SIGMA_MARGIN: f64 = 0.25;

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<28} {:>8.1}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Located points on [1, t1], cached per (k, a).
pub struct ScanCache {
    cfg: EvalConfig,
    jobs: usize,
    scans: HashMap<(u32, u64, u64), (f64, Vec<APoint>)>,
}

impl ScanCache {
    pub fn new(cfg: EvalConfig, jobs: usize) -> Self {
        ScanCache { cfg, jobs, scans: HashMap::new() }
    }

    pub fn points(&mut self, k: u32, a: Complex64, t1: f64) -> Fallible<&[APoint]> {
        let key = (k, a.re.to_bits(), a.im.to_bits());
        let fresh = self.scans.get(&key).is_none_or(|(t, _)| *t < t1);
        if fresh {
            let (lo, hi) = RegionBounds::compute(k, a, t1, &self.cfg)?.scan_sigma(SIGMA_MARGIN);
            let m = RunManifest::plan(k, a, 1.0, t1, DEFAULT_WINDOW, lo, hi, &self.cfg)?;
            let (points, failed) = scan_in_memory(&m, self.jobs)?;
            if let Some(f) = failed.first() {
                return Err(format!("k={k} a={a}: {} windows failed, first {}: {}", failed.len(), f.id, f.error).into());
            }
            self.scans.insert(key, (t1, points));
        }
        Ok(&self.scans[&key].1)
    }
}

fn rel(x: Complex64, y: Complex64) -> f64 {
    (x - y).norm() / y.norm()
}

fn evaluator_exactness(cfg: &EvalConfig) -> Fallible<(bool, String)> {
    let start = Instant::now();
    let e2 = rel(zeta(c(2.0, 0.0), cfg)?, c(PI * PI / 6.0, 0.0));
    let em1 = rel(zeta(c(-1.0, 0.0), cfg)?, c(-1.0 / 12.0, 0.0));
    let mut e0 = 0.0f64;
    for &(x, y) in &[(0.5, 14.0), (-3.5, 20.0), (2.5, 7.0), (0.2, 100.0), (5.0, -3.0), (-7.0, 300.0)] {
        let s = c(x, y);
        e0 = e0.max(rel(zeta_deriv(0, s, cfg)?, zeta(s, cfg)?));
    }
    let h = 1e-4;
    let mut fd = 0.0f64;
    for i in 0..50 {
        let s = c(-1.0 + 3.0 * (i % 10) as f64 / 9.0, 1.37 + 8.0 * (i / 10) as f64);
        let d = (zeta_deriv(0, s + h, cfg)? - zeta_deriv(0, s - h, cfg)?) / (2.0 * h);
        fd = fd.max((d - zeta_deriv(1, s, cfg)?).norm());
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = e2 <= 1e-12 && em1 <= 1e-12 && e0 <= 1e-12 && fd <= 1e-5 && secs < 10.0;
    Ok((ok, format!("ζ(2) {e2:.1e}, ζ(−1) {em1:.1e}, k=0 {e0:.1e}, finite difference {fd:.1e} (≤1e-5)")))
}

fn coefficient_oracles() -> Fallible<(bool, String)> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (k, a) in [(1, c(1.0, 0.0)), (1, c(0.0, 1.0)), (2, c(1.0, 0.0))] {
        let table = alpha_oracle(k, a, 100);
        for x in 2..=100u64 {
            worst = worst.max(rel(alpha(k, a, x), table.get(&CoeffIndex::integer(x))));
        }
    }
    let mut worst_zero = 0.0f64;
    for k in [1, 2] {
        let table = alpha_oracle(k, c(0.0, 0.0), 100);
        for l2d in 0..=5u32 {
            for num in 1..=100u64 {
                let x = CoeffIndex::new(num, l2d);
                if x.log2_denominator != l2d || x.value() < 1.0 {
                    continue;
                }
                let scale = alpha_zero_magnitude(k, &x);
                let diff = (alpha_zero(k, &x) - table.get(&x)).norm();
                worst_zero = worst_zero.max(if scale > 0.0 { diff / scale } else { diff });
            }
        }
    }
    let l2 = std::f64::consts::LN_2;
    let one = c(1.0, 0.0);
    let f2 = (alpha(1, one, 2).re + l2 * l2).abs();
    let f4 = (alpha(1, one, 4).re - (-4.0 * l2 * l2 + l2.powi(3))).abs();
    let secs = start.elapsed().as_secs_f64();
    let ok = worst <= 1e-12 && worst_zero <= 1e-12 && f2 <= 1e-15 && f4 <= 1e-15 && secs < 30.0;
    Ok((
        ok,
        format!("a≠0 rel {worst:.1e}, a=0 scaled {worst_zero:.1e}, frozen x=2 {f2:.0e}, x=4 {f4:.0e}"),
    ))
}

fn counting_remainder(scans: &mut ScanCache, cases: &[(u32, Complex64)]) -> Fallible<(bool, String)> {
    let mut worst = 0.0f64;
    let mut at = String::new();
    let mut residual = 0.0f64;
    for &(k, a) in cases {
        let points = scans.points(k, a, 1000.0)?;
        residual = points.iter().map(|p| p.residual).fold(residual, f64::max);
        for t in [100.0, 300.0, 1000.0] {
            let n: f64 = points.iter().filter(|p| p.gamma > 1.0 && p.gamma < t).map(|p| p.multiplicity as f64).sum();
            let r = (n - count_main(k, a, t)).abs() / t.ln();
            if r >= worst {
                worst = r;
                at = format!("k={k} a={a} T={t} N={n}");
            }
        }
    }
    let ok = worst <= COUNT_REMAINDER_CAP && residual <= 1e-9;
    Ok((ok, format!("max ratio {worst:.3} at {at} (cap {COUNT_REMAINDER_CAP}); max residual {residual:.1e}")))
}

fn strips(cfg: &EvalConfig) -> Fallible<(bool, String)> {
    let start = Instant::now();
    let a = c(1.0, 0.0);
    let (lo, hi) = RegionBounds::compute(1, a, 1001.0, cfg)?.scan_sigma(SIGMA_MARGIN);
    let mut worst = 0.0f64;
    let mut at = 0.0;
    for i in 1..=20 {
        let t = 50.0 * i as f64;
        let r = strip_count_check(1, a, t, lo, hi, cfg)?;
        if r.ratio >= worst {
            worst = r.ratio;
            at = t;
        }
    }
    let ok = worst <= STRIP_RATIO_CAP && start.elapsed().as_secs_f64() < 600.0;
    Ok((ok, format!("max strip count / log T = {worst:.3} at T={at} (cap {STRIP_RATIO_CAP})")))
}

fn exponential_sums(scans: &mut ScanCache) -> Fallible<(bool, String)> {
    let t = 500.0;
    let mut parts = Vec::new();
    let mut ok = true;
    for (k, a, x) in [
        (1, c(1.0, 0.0), CoeffIndex::integer(2)),
        (1, c(1.0, 0.0), CoeffIndex::integer(4)),
        (1, c(0.0, 0.0), CoeffIndex::new(3, 1)),
        (1, c(1.0, 0.0), CoeffIndex::new(5, 1)),
    ] {
        let points = scans.points(k, a, 1000.0)?;
        let r = expsum(k, a, &x, t, points)?;
        ok &= r.remainder_ratio <= EXPSUM_CAP;
        parts.push(format!("a={a} x={x}: {:.2}", r.remainder_ratio));
    }
    Ok((ok, format!("{} (cap {EXPSUM_CAP})", parts.join(", "))))
}

fn band_census(scans: &mut ScanCache) -> Fallible<(bool, String)> {
    let (k, a, t, u) = (1, c(1.0, 0.0), 1000.0, 1000.0);
    let points = scans.points(k, a, t + u)?;
    let r = census(k, a, t, u, points)?;
    let partition = r.n1 + r.n2 + r.n3 == r.total;
    let counted: u64 = points.iter().filter(|p| p.gamma > t && p.gamma < t + u).map(|p| p.multiplicity as u64).sum();
    let share = r.n3 as f64 / r.total as f64;
    let bound = BETA_EXCESS_CAP * u * t.ln().ln();
    let ok = partition && counted == r.total && share >= CENTRAL_FRACTION_MIN && r.beta_excess <= bound;
    Ok((
        ok,
        format!(
            "n1={} n2={} n3={} total={} main={:.1}; n3/total {share:.4} (≥{CENTRAL_FRACTION_MIN}); 2πΣ(β−1/2) {:.2} ≤ {bound:.0}",
            r.n1, r.n2, r.n3, r.total, r.main_total, r.beta_excess
        ),
    ))
}

fn littlewood(scans: &mut ScanCache, cfg: &EvalConfig) -> Fallible<(bool, String)> {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for a in [c(2.0, 0.0), c(0.0, 1.0)] {
        let points = scans.points(1, a, 1000.0)?.to_vec();
        for (t, u) in [(100.0, 100.0), (100.0, 50.0), (150.0, 50.0)] {
            let r = littlewood_balance(1, a, t, u, &points, cfg)?;
            ok &= r.ratio <= LITTLEWOOD_CAP;
            parts.push(format!(
                "a={a} [{t},{}]: observed {:.3}, predicted {:.3}, ratio {:.3}",
                t + u, r.observed.re, r.predicted.re, r.ratio
            ));
        }
    }
    ok &= start.elapsed().as_secs_f64() < 600.0;
    Ok((ok, format!("{} (cap {LITTLEWOOD_CAP})", parts.join("; "))))
}

fn trivial_points(cfg: &EvalConfig) -> Fallible<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for a in [c(1.0, 0.0), c(0.0, 0.0)] {
        let n_min = find_n_min(1, a, 30, cfg)?;
        let mut worst = 0.0f64;
        let mut dist = Vec::new();
        for n in n_min..=n_min + 20 {
            let b = trivial_apoint(1, a, n, cfg)?;
            let root = b.root.ok_or("missing trivial root")?;
            ok &= b.winding == 1;
            worst = worst.max(root.newton_residual);
            dist.push(c(root.beta + 2.0 * n as f64, root.gamma).norm());
        }
        let tail = &dist[dist.len() - 10..];
        let monotone = tail.windows(2).all(|w| w[1] <= w[0]);
        ok &= worst <= 1e-9 && monotone;
        parts.push(format!(
            "a={a}: n_min {n_min}, Newton residual {worst:.1e}, distance {:.4}→{:.4} {}",
            tail[0],
            tail[9],
            if monotone { "non-increasing" } else { "NOT monotone" }
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn determinism(cfg: &EvalConfig, workdir: &Path) -> Fallible<(bool, String)> {
    let (k, a) = (1, c(1.0, 0.0));
    let (lo, hi) = RegionBounds::compute(k, a, 300.0, cfg)?.scan_sigma(SIGMA_MARGIN);
    let plan = RunManifest::plan(k, a, 1.0, 300.0, DEFAULT_WINDOW, lo, hi, cfg)?;
    fs::create_dir_all(workdir)?;
    let run = |name: &str, jobs: usize, interrupt: bool| -> Fallible<Vec<u8>> {
        let points = workdir.join(format!("{name}.jsonl"));
        let manifest = workdir.join(format!("{name}.manifest.json"));
        let _ = fs::remove_file(&points);
        plan.store(&manifest)?;
        if interrupt {
            run_scan(&manifest, &points, jobs, Some(7))?;
            // A torn write after the last checkpoint.
            let mut f = fs::OpenOptions::new().append(true).open(&points)?;
            std::io::Write::write_all(&mut f, b"{\"k\":1,\"a_re\":1.0000")?;
        }
        let summary = run_scan(&manifest, &points, jobs, None)?;
        if !summary.failed.is_empty() || !summary.finalized {
            return Err(format!("{name}: {summary:?}").into());
        }
        let bytes = fs::read(&points)?;
        let again = run_scan(&manifest, &points, jobs, None)?;
        if again.processed != 0 || fs::read(&points)? != bytes {
            return Err(format!("{name}: re-run of a finished scan changed the file").into());
        }
        Ok(bytes)
    };
    let one = run("jobs1", 1, false)?;
    let eight = run("jobs8", 8, false)?;
    let resumed = run("resumed", 3, true)?;
    let lines = one.iter().filter(|&&b| b == b'\n').count();
    let ok = one == eight && one == resumed && lines > 0;
    Ok((
        ok,
        format!(
            "{lines} points; jobs 1 vs 8 {}; interrupted+resumed {}",
            if one == eight { "identical" } else { "DIFFER" },
            if one == resumed { "identical" } else { "DIFFER" }
        ),
    ))
}

fn record(
    out: &mut Vec<CriterionResult>,
    id: u32,
    name: &'static str,
    report: &mut dyn FnMut(&CriterionResult),
    f: impl FnOnce() -> Fallible<(bool, String)>,
) {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let r = CriterionResult { id, name, passed, detail, elapsed: start.elapsed() };
    report(&r);
    out.push(r);
}

/// Runs every criterion, calling `report` as each finishes.
pub fn run_all(
    cfg: &EvalConfig,
    jobs: usize,
    workdir: &Path,
    mut report: impl FnMut(&CriterionResult),
) -> Vec<CriterionResult> {
    let mut out = Vec::new();
    let mut scans = ScanCache::new(cfg.clone(), jobs);
    let report = &mut report;
    record(&mut out, 1, "evaluator exactness", report, || evaluator_exactness(cfg));
    record(&mut out, 2, "coefficient oracles", report, coefficient_oracles);
    record(&mut out, 3, "counting remainder", report, || {
        let start = Instant::now();
        let cases = [
            (1, c(1.0, 0.0)),
            (1, c(0.0, 1.0)),
            (1, c(2.0, 0.0)),
            (2, c(1.0, 0.0)),
            (2, c(0.0, 1.0)),
            (2, c(2.0, 0.0)),
        ];
        scans.points(1, c(1.0, 0.0), 2000.0)?;
        let (ok, d) = counting_remainder(&mut scans, &cases)?;
        Ok((ok && start.elapsed().as_secs_f64() < 1200.0, d))
    });
    record(&mut out, 4, "counting remainder, a = 0", report, || {
        counting_remainder(&mut scans, &[(1, c(0.0, 0.0))])
    });
    record(&mut out, 5, "unit strips", report, || strips(cfg));
    record(&mut out, 6, "exponential sums", report, || exponential_sums(&mut scans));
    record(&mut out, 7, "band census", report, || band_census(&mut scans));
    record(&mut out, 8, "Littlewood balance", report, || littlewood(&mut scans, cfg));
    record(&mut out, 9, "trivial a-points", report, || trivial_points(cfg));
    record(&mut out, 10, "determinism", report, || determinism(cfg, workdir));
    out
}

/// β-sum diagnostic reported next to the suite (not one of the ten criteria).
pub fn beta_sum_diagnostic(scans: &mut ScanCache) -> Fallible<(bool, String)> {
    let (k, a, t, u) = (1, c(2.0, 0.0), 500.0, 500.0);
    let points = scans.points(k, a, t + u)?;
    let r = beta_sum_check(k, a, BETA_SUM_B, t, u, points);
    Ok((
        r.ratio <= BETA_SUM_CAP,
        format!("observed {:.3}, predicted {:.3}, ratio {:.3} (cap {BETA_SUM_CAP})", r.observed.re, r.predicted.re, r.ratio),
    ))
}
