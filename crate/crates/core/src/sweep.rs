//! Window-by-window scans with a checkpointed, append-only points file.
//!
//! A run is described by a [`RunManifest`] stored next to the points file.
//! Workers locate a-points window by window; a single writer appends each
//! finished window to the JSONL file, then rewrites the manifest with the
//! completed id and the hash of the file so far. Resuming truncates the file
//! to the last checkpoint and skips completed windows. Once every window is
//! done the file is rewritten sorted by height, so the final bytes do not
//! depend on the number of workers or on interruptions.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;
use thiserror::Error;

use crate::evaluator::EvalConfig;
use crate::rootscan::{edge_phase, locate, sort_points, APoint, ScanError, ScanWindow};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_WINDOW: f64 = 10.0;
/// Attempts at moving a window edge off an a-point.
const EDGE_NUDGES: u32 = 16;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("manifest does not match the requested run: {0}")]
    ManifestMismatch(String),
    #[error("points file checksum mismatch: manifest has {expected}, file has {found}")]
    Checksum { expected: String, found: String },
    #[error("unsupported schema version {0}")]
    Schema(u32),
    #[error("invalid window grid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Scan(#[from] ScanError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowFailure {
    pub id: u64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub k: u32,
    pub a_re: f64,
    pub a_im: f64,
    pub t0: f64,
    pub t1: f64,
    pub window: f64,
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub max_depth: u32,
    pub phase_step_cap: f64,
    /// Window i covers `[edges[i], edges[i+1]]`.
    pub edges: Vec<f64>,
    pub cfg: EvalConfig,
    pub completed: Vec<u64>,
    pub failed: Vec<WindowFailure>,
    /// Bytes of the points file covered by `points_sha256`.
    pub points_len: u64,
    pub points_sha256: String,
    /// Set once the points file holds the final sorted list.
    pub finalized: bool,
}

fn empty_hash() -> String {
    hex::encode(Sha256::digest(b""))
}

impl RunManifest {
    /// Lays out the window grid over `[t0, t1]`, moving every edge that
    /// passes through an a-point up by a multiple of 1e-6/√2.
    #[allow(clippy::too_many_arguments)]
    pub fn plan(
        k: u32,
        a: Complex64,
        t0: f64,
        t1: f64,
        window: f64,
        sigma_lo: f64,
        sigma_hi: f64,
        cfg: &EvalConfig,
    ) -> Result<Self, SweepError> {
        if !(t1 >= t0 && window > 0.0 && t0.is_finite() && t1.is_finite()) {
            return Err(SweepError::InvalidGrid(format!("t0 = {t0}, t1 = {t1}, window = {window}")));
        }
        let proto = ScanWindow::new(0, t0, t1, sigma_lo, sigma_hi);
        proto.validate()?;
        let mut edges = Vec::new();
        if t1 > t0 {
            let n = ((t1 - t0) / window).ceil() as usize;
            edges = (0..=n).map(|i| if i == n { t1 } else { t0 + i as f64 * window }).collect();
        }
        let cap = proto.phase_step_cap;
        let nudged: Vec<Result<f64, ScanError>> = edges
            .par_iter()
            .map(|&t| {
                let mut last = None;
                for m in 0..EDGE_NUDGES {
                    let e = t + m as f64 * FRAC_1_SQRT_2 * 1e-6;
                    match edge_phase(k, a, sigma_lo, sigma_hi, e, cap, cfg) {
                        Ok(_) => return Ok(e),
                        Err(err @ ScanError::BoundaryRoot { .. }) => last = Some(err),
                        Err(err) => return Err(err),
                    }
                }
                Err(last.expect("at least one attempt"))
            })
            .collect();
        let edges = nudged.into_iter().collect::<Result<Vec<_>, _>>()?;
        Ok(RunManifest {
            schema_version: SCHEMA_VERSION,
            k,
            a_re: a.re,
            a_im: a.im,
            t0,
            t1,
            window,
            sigma_lo,
            sigma_hi,
            max_depth: proto.max_depth,
            phase_step_cap: cap,
            edges,
            cfg: cfg.clone(),
            completed: Vec::new(),
            failed: Vec::new(),
            points_len: 0,
            points_sha256: empty_hash(),
            finalized: false,
        })
    }

    pub fn a(&self) -> Complex64 {
        Complex64::new(self.a_re, self.a_im)
    }

    pub fn window_count(&self) -> u64 {
        self.edges.len().saturating_sub(1) as u64
    }

    pub fn scan_window(&self, id: u64) -> ScanWindow {
        let i = id as usize;
        ScanWindow {
            max_depth: self.max_depth,
            phase_step_cap: self.phase_step_cap,
            ..ScanWindow::new(id, self.edges[i], self.edges[i + 1], self.sigma_lo, self.sigma_hi)
        }
    }

    pub fn pending(&self) -> Vec<u64> {
        let done: BTreeSet<u64> = self.completed.iter().copied().collect();
        (0..self.window_count()).filter(|id| !done.contains(id)).collect()
    }

    /// Checks that a stored manifest describes the same run as `other`.
    pub fn check_compatible(&self, other: &RunManifest) -> Result<(), SweepError> {
        let same = self.k == other.k
            && self.a_re == other.a_re
            && self.a_im == other.a_im
            && self.t0 == other.t0
            && self.t1 == other.t1
            && self.window == other.window
            && self.sigma_lo == other.sigma_lo
            && self.sigma_hi == other.sigma_hi
            && self.cfg == other.cfg;
        if same {
            Ok(())
        } else {
            Err(SweepError::ManifestMismatch(format!(
                "stored (k={}, a={}+{}i, t=[{}, {}], cfg={:?}) vs requested (k={}, a={}+{}i, t=[{}, {}], cfg={:?})",
                self.k, self.a_re, self.a_im, self.t0, self.t1, self.cfg,
                other.k, other.a_re, other.a_im, other.t0, other.t1, other.cfg
            )))
        }
    }

    pub fn load(path: &Path) -> Result<Self, SweepError> {
        let m: RunManifest = serde_json::from_str(&fs::read_to_string(path)?)?;
        if m.schema_version != SCHEMA_VERSION {
            return Err(SweepError::Schema(m.schema_version));
        }
        Ok(m)
    }

    /// Atomic write through a temporary file.
    pub fn store(&self, path: &Path) -> Result<(), SweepError> {
        let tmp = with_suffix(path, ".tmp");
        fs::write(&tmp, serde_json::to_string_pretty(self)? + "\n")?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Manifest path used for a points file.
pub fn manifest_path(points: &Path) -> PathBuf {
    with_suffix(points, ".manifest.json")
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// One JSONL record; every number carries 17 significant digits.
pub fn point_line(p: &APoint) -> String {
    let b = &p.cert_box;
    format!(
        "{{\"k\":{},\"a_re\":{},\"a_im\":{},\"beta\":{},\"gamma\":{},\"residual\":{},\"box\":{{\"sigma_lo\":{},\"sigma_hi\":{},\"t_lo\":{},\"t_hi\":{}}},\"window_id\":{},\"multiplicity\":{}}}\n",
        p.k,
        num(p.a_re),
        num(p.a_im),
        num(p.beta),
        num(p.gamma),
        num(p.residual),
        num(b.sigma_lo),
        num(b.sigma_hi),
        num(b.t_lo),
        num(b.t_hi),
        p.window_id,
        p.multiplicity
    )
}

pub fn read_points(path: &Path) -> Result<Vec<APoint>, SweepError> {
    let mut out = Vec::new();
    for line in BufReader::new(File::open(path)?).lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}

fn hasher_for_prefix(path: &Path, len: u64) -> Result<Sha256, SweepError> {
    let mut h = Sha256::new();
    let mut f = File::open(path)?.take(len);
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = f.read(&mut buf)?;
        if n == 0 {
            break;
        }
        h.update(&buf[..n]);
    }
    Ok(h)
}

fn hash_prefix(path: &Path, len: u64) -> Result<String, SweepError> {
    Ok(hex::encode(hasher_for_prefix(path, len)?.finalize()))
}

/// Verifies the points file against the manifest checksum.
pub fn verify_points(manifest: &RunManifest, points: &Path) -> Result<(), SweepError> {
    let len = fs::metadata(points)?.len();
    if len < manifest.points_len {
        return Err(SweepError::Checksum {
            expected: manifest.points_sha256.clone(),
            found: format!("file shorter than {} bytes", manifest.points_len),
        });
    }
    let found = hash_prefix(points, manifest.points_len)?;
    if found != manifest.points_sha256 {
        return Err(SweepError::Checksum { expected: manifest.points_sha256.clone(), found });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub processed: u64,
    pub completed: u64,
    pub failed: Vec<WindowFailure>,
    pub finalized: bool,
}

/// Locates every window in `ids` on a pool of `jobs` workers, handing each
/// result to `sink` on the calling thread in completion order. Stops
/// dispatching once `sink` returns `false`.
pub fn scan_windows(
    manifest: &RunManifest,
    ids: &[u64],
    jobs: usize,
    mut sink: impl FnMut(u64, Result<Vec<APoint>, ScanError>) -> Result<bool, SweepError>,
) -> Result<(), SweepError> {
    if ids.is_empty() {
        return Ok(());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| SweepError::InvalidGrid(e.to_string()))?;
    let stop = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel();
    let a = manifest.a();
    std::thread::scope(|scope| {
        let stop = &stop;
        scope.spawn(move || {
            pool.install(|| {
                ids.par_iter().with_max_len(1).for_each_with(tx, |tx, &id| {
                    if stop.load(Ordering::SeqCst) {
                        return;
                    }
                    let r = locate(manifest.k, a, &manifest.scan_window(id), &manifest.cfg);
                    let _ = tx.send((id, r));
                })
            });
        });
        let mut result = Ok(());
        for (id, r) in rx {
            if result.is_err() || stop.load(Ordering::SeqCst) {
                continue;
            }
            match sink(id, r) {
                Ok(true) => {}
                Ok(false) => stop.store(true, Ordering::SeqCst),
                Err(e) => {
                    stop.store(true, Ordering::SeqCst);
                    result = Err(e);
                }
            }
        }
        result
    })
}

/// Scans a planned grid in memory; returns the sorted points and the failures.
pub fn scan_in_memory(manifest: &RunManifest, jobs: usize) -> Result<(Vec<APoint>, Vec<WindowFailure>), SweepError> {
    let mut points = Vec::new();
    let mut failed = Vec::new();
    scan_windows(manifest, &manifest.pending(), jobs, |id, r| {
        match r {
            Ok(p) => points.extend(p),
            Err(e) => failed.push(WindowFailure { id, error: e.to_string() }),
        }
        Ok(true)
    })?;
    sort_points(&mut points);
    failed.sort_by_key(|f| f.id);
    Ok((points, failed))
}

/// Runs (or resumes) the scan stored at `manifest_path` into `points_path`.
/// `max_windows` limits how many windows this call processes.
pub fn run_scan(
    manifest_path: &Path,
    points_path: &Path,
    jobs: usize,
    max_windows: Option<u64>,
) -> Result<RunSummary, SweepError> {
    let mut manifest = RunManifest::load(manifest_path)?;
    if !points_path.exists() {
        if manifest.points_len > 0 {
            return Err(SweepError::Checksum {
                expected: manifest.points_sha256.clone(),
                found: "missing points file".into(),
            });
        }
        File::create(points_path)?;
    }
    verify_points(&manifest, points_path)?;
    let file = OpenOptions::new().write(true).open(points_path)?;
    file.set_len(manifest.points_len)?;
    drop(file);

    if manifest.finalized && manifest.pending().is_empty() {
        return Ok(RunSummary {
            processed: 0,
            completed: manifest.completed.len() as u64,
            failed: manifest.failed.clone(),
            finalized: true,
        });
    }

    let pending = manifest.pending();
    manifest.failed.clear();
    let budget = max_windows.unwrap_or(u64::MAX);
    let mut processed = 0u64;
    let mut out = OpenOptions::new().append(true).open(points_path)?;
    let mut hasher = hasher_for_prefix(points_path, manifest.points_len)?;
    {
        let manifest = &mut manifest;
        let snapshot = manifest.clone();
        scan_windows(&snapshot, &pending, jobs, |id, r| {
            if processed >= budget {
                return Ok(false);
            }
            match r {
                Ok(points) => {
                    let mut buf = String::new();
                    for p in &points {
                        buf.push_str(&point_line(p));
                    }
                    out.write_all(buf.as_bytes())?;
                    out.flush()?;
                    hasher.update(buf.as_bytes());
                    manifest.points_len += buf.len() as u64;
                    manifest.points_sha256 = hex::encode(hasher.clone().finalize());
                    manifest.completed.push(id);
                    manifest.completed.sort_unstable();
                }
                Err(e) => manifest.failed.push(WindowFailure { id, error: e.to_string() }),
            }
            manifest.failed.sort_by_key(|f| f.id);
            manifest.finalized = false;
            manifest.store(manifest_path)?;
            processed += 1;
            Ok(processed < budget)
        })?;
    }

    let failed_ids: BTreeSet<u64> = manifest.failed.iter().map(|f| f.id).collect();
    let all_attempted = manifest.pending().iter().all(|id| failed_ids.contains(id));
    if all_attempted {
        finalize(&mut manifest, manifest_path, points_path)?;
    }
    Ok(RunSummary {
        processed,
        completed: manifest.completed.len() as u64,
        failed: manifest.failed.clone(),
        finalized: manifest.finalized,
    })
}

/// Rewrites the points file sorted by height and records its hash.
fn finalize(manifest: &mut RunManifest, manifest_path: &Path, points_path: &Path) -> Result<(), SweepError> {
    let mut points = read_points(points_path)?;
    sort_points(&mut points);
    let body: String = points.iter().map(point_line).collect();
    let tmp = with_suffix(points_path, ".tmp");
    fs::write(&tmp, body.as_bytes())?;
    fs::rename(&tmp, points_path)?;
    manifest.points_len = body.len() as u64;
    manifest.points_sha256 = hex::encode(Sha256::digest(body.as_bytes()));
    manifest.finalized = true;
    manifest.store(manifest_path)
}

/// Scan abscissas for (k, a) up to height `t_max`: the free abscissas widened by `margin`.
pub fn scan_sigma(k: u32, a: Complex64, t_max: f64, margin: f64, cfg: &EvalConfig) -> Result<(f64, f64), crate::regions::RegionError> {
    Ok(crate::regions::RegionBounds::compute(k, a, t_max, cfg)?.scan_sigma(margin))
}
