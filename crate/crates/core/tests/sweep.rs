use num_complex::Complex64;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::PathBuf;
use zap_core::evaluator::EvalConfig;
use zap_core::rootscan::sort_points;
use zap_core::sweep::*;

fn workdir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("zap-sweep-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

fn plan(t1: f64) -> RunManifest {
    let cfg = EvalConfig::default();
    let a = Complex64::new(1.0, 0.0);
    let (lo, hi) = scan_sigma(1, a, t1, 0.25, &cfg).unwrap();
    RunManifest::plan(1, a, 1.0, t1, DEFAULT_WINDOW, lo, hi, &cfg).unwrap()
}

#[test]
fn empty_grid() {
    let d = workdir("empty");
    let cfg = EvalConfig::default();
    let m = RunManifest::plan(1, Complex64::new(1.0, 0.0), 40.0, 40.0, 10.0, -16.0, 2.25, &cfg).unwrap();
    assert_eq!(m.window_count(), 0);
    let (mp, pp) = (d.join("m.json"), d.join("p.jsonl"));
    m.store(&mp).unwrap();
    let s = run_scan(&mp, &pp, 2, None).unwrap();
    assert_eq!((s.processed, s.completed, s.finalized), (0, 0, true));
    assert_eq!(fs::read(&pp).unwrap().len(), 0);
    let stored = RunManifest::load(&mp).unwrap();
    verify_points(&stored, &pp).unwrap();
    let _ = fs::remove_dir_all(&d);
}

#[test]
fn invalid_grids() {
    let cfg = EvalConfig::default();
    let a = Complex64::new(1.0, 0.0);
    assert!(matches!(RunManifest::plan(1, a, 50.0, 40.0, 10.0, -16.0, 2.25, &cfg), Err(SweepError::InvalidGrid(_))));
    assert!(matches!(RunManifest::plan(1, a, 1.0, 40.0, 0.0, -16.0, 2.25, &cfg), Err(SweepError::InvalidGrid(_))));
    assert!(RunManifest::plan(1, a, 1.0, 40.0, 10.0, 2.0, -1.0, &cfg).is_err());
}

#[test]
fn edges_cover_the_range() {
    let m = plan(95.0);
    assert_eq!(m.window_count(), 10);
    assert_eq!(m.edges[0], 1.0);
    assert_eq!(*m.edges.last().unwrap(), 95.0);
    assert!(m.edges.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn compatibility() {
    let m = plan(60.0);
    m.check_compatible(&m.clone()).unwrap();
    let other_a = RunManifest { a_re: 2.0, ..m.clone() };
    assert!(matches!(m.check_compatible(&other_a), Err(SweepError::ManifestMismatch(_))));
    let mut cfg = m.cfg.clone();
    cfg.em_terms += 2;
    let other_cfg = RunManifest { cfg, ..m.clone() };
    assert!(matches!(m.check_compatible(&other_cfg), Err(SweepError::ManifestMismatch(_))));
}

#[test]
fn file_matches_in_memory_scan_and_resists_corruption() {
    let d = workdir("file");
    let m = plan(80.0);
    let (mut mem, failed) = scan_in_memory(&m, 2).unwrap();
    assert!(failed.is_empty());
    sort_points(&mut mem);
    let expected: String = mem.iter().map(point_line).collect();

    let (mp, pp) = (d.join("m.json"), d.join("p.jsonl"));
    m.store(&mp).unwrap();
    let s = run_scan(&mp, &pp, 1, Some(3)).unwrap();
    assert_eq!((s.processed, s.finalized), (3, false));

    // A torn append past the recorded length is dropped on resume.
    OpenOptions::new().append(true).open(&pp).unwrap().write_all(b"{\"k\":1,\"a_re\"").unwrap();
    let s = run_scan(&mp, &pp, 2, None).unwrap();
    assert!(s.finalized && s.failed.is_empty());
    assert_eq!(fs::read_to_string(&pp).unwrap(), expected);
    assert_eq!(read_points(&pp).unwrap().len(), mem.len());

    let mut bytes = fs::read(&pp).unwrap();
    let i = bytes.len() / 2;
    bytes[i] = if bytes[i] == b'1' { b'2' } else { b'1' };
    fs::write(&pp, &bytes).unwrap();
    let stored = RunManifest::load(&mp).unwrap();
    assert!(matches!(verify_points(&stored, &pp), Err(SweepError::Checksum { .. })));
    assert!(matches!(run_scan(&mp, &pp, 1, None), Err(SweepError::Checksum { .. })));

    fs::write(&mp, fs::read_to_string(&mp).unwrap().replace("\"schema_version\": 1", "\"schema_version\": 9")).unwrap();
    assert!(matches!(RunManifest::load(&mp), Err(SweepError::Schema(9))));
    let _ = fs::remove_dir_all(&d);
}

proptest::proptest! {
    #[test]
    fn point_lines_round_trip(beta in -1e3f64..1e3, gamma in -1e6f64..1e6, res in 0.0f64..1e-6, w in 0u64..1000) {
        let p = zap_core::rootscan::APoint {
            k: 2,
            a_re: beta / 7.0,
            a_im: gamma / 3.0,
            beta,
            gamma,
            residual: res,
            cert_box: zap_core::rootscan::Rect::new(beta - 3.5e-4, beta + 3.5e-4, gamma - 3.5e-4, gamma + 3.5e-4),
            window_id: w,
            multiplicity: 1,
        };
        let line = point_line(&p);
        let back: zap_core::rootscan::APoint = serde_json::from_str(&line).unwrap();
        proptest::prop_assert_eq!(&back, &p);
        proptest::prop_assert_eq!(point_line(&back), line);
    }
}
