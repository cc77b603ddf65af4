//! Command-line behavior: every subcommand runs, formats hold together,
//! and exit codes distinguish config, parse, and runtime failures.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use presstrack::io;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_presstrack"));
    c.env("PRESSTRACK_LOG", "quiet");
    c
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "command {:?} failed:\n{}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn small_config(dir: &Path, extra_sim: &str) -> PathBuf {
    let path = dir.join("config.json");
    let text = format!(
        r#"{{"sim": {{"n_persons": 2, "duration_s": 4.0, "seed": 12{extra_sim}}}}}"#
    );
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn simulate_writes_parseable_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let out_dir = dir.path().join("sim");
    run_ok(&["simulate", "--config", cfg.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()]);

    let (frames, fps) = io::read_psq(&out_dir.join("pressure.psq")).unwrap();
    assert_eq!(frames.len(), 100);
    assert_eq!(fps, 25.0);
    let gt = io::read_mot_csv(&out_dir.join("gt_dets.csv")).unwrap();
    assert!(!gt.is_empty());
    let anns = io::read_annotations(&out_dir.join("annotations.csv")).unwrap();
    assert!(!anns.is_empty());
    let trajs = io::read_trajectories(&out_dir.join("trajectories.csv")).unwrap();
    assert_eq!(trajs.len(), 2);
    assert!(out_dir.join("manifest.json").exists());
}

#[test]
fn simulate_same_seed_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        run_ok(&["simulate", "--config", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
    }
    for name in ["pressure.psq", "gt_dets.csv", "annotations.csv", "trajectories.csv"] {
        assert_eq!(
            std::fs::read(a.join(name)).unwrap(),
            std::fs::read(b.join(name)).unwrap(),
            "{name} differs between identical runs"
        );
    }
}

#[test]
fn labelgen_reproduces_simulator_labels() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let out_dir = dir.path().join("sim");
    run_ok(&["simulate", "--config", cfg.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()]);
    let labels = dir.path().join("labels.csv");
    run_ok(&[
        "labelgen",
        "--psq", out_dir.join("pressure.psq").to_str().unwrap(),
        "--annotations", out_dir.join("annotations.csv").to_str().unwrap(),
        "--out", labels.to_str().unwrap(),
    ]);
    // label generation recovers the simulator's own ground truth
    assert_eq!(
        std::fs::read(&labels).unwrap(),
        std::fs::read(out_dir.join("gt_dets.csv")).unwrap()
    );
}

#[test]
fn track_handles_empty_detections() {
    let dir = tempfile::tempdir().unwrap();
    let dets = dir.path().join("dets.csv");
    std::fs::write(&dets, "").unwrap();
    let out = dir.path().join("tracks.csv");
    run_ok(&["track", "--dets", dets.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "");
}

#[test]
fn both_strategies_run_on_the_same_input() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let out_dir = dir.path().join("sim");
    run_ok(&["simulate", "--config", cfg.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()]);
    let dets = dir.path().join("dets.csv");
    run_ok(&[
        "corrupt",
        "--gt", out_dir.join("gt_dets.csv").to_str().unwrap(),
        "--config", cfg.to_str().unwrap(),
        "--out", dets.to_str().unwrap(),
    ]);
    for strategy in ["uoe", "ioukalman"] {
        let out = dir.path().join(format!("tracks_{strategy}.csv"));
        run_ok(&[
            "track",
            "--dets", dets.to_str().unwrap(),
            "--strategy", strategy,
            "--out", out.to_str().unwrap(),
        ]);
        assert!(!io::read_mot_csv(&out).unwrap().is_empty());
    }
}

#[test]
fn eval_on_self_reports_perfect_tracking() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let out_dir = dir.path().join("sim");
    run_ok(&["simulate", "--config", cfg.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()]);
    let gt = out_dir.join("gt_dets.csv");
    let json_path = dir.path().join("report.json");
    let out = run_ok(&[
        "eval",
        "--gt", gt.to_str().unwrap(),
        "--hyp", gt.to_str().unwrap(),
        "--gt-traj", out_dir.join("trajectories.csv").to_str().unwrap(),
        "--est-traj", out_dir.join("trajectories.csv").to_str().unwrap(),
        "--json", json_path.to_str().unwrap(),
    ]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("mota 1.000000"), "{stdout}");
    assert!(stdout.contains("idf1 1.000000"), "{stdout}");
    assert!(stdout.contains("rte_percent 0.000000"), "{stdout}");
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(json["mot"]["mota"], 1.0);
    assert_eq!(json["traj"]["rte_percent"], 0.0);
}

#[test]
fn eval_hand_built_miss_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let gt = dir.path().join("gt.csv");
    let hyp = dir.path().join("hyp.csv");
    std::fs::write(
        &gt,
        "1,1,0.000000,0.000000,4.000000,4.000000,1.000000\n\
         2,1,0.000000,0.000000,4.000000,4.000000,1.000000\n\
         3,1,0.000000,0.000000,4.000000,4.000000,1.000000\n",
    )
    .unwrap();
    std::fs::write(
        &hyp,
        "1,9,0.000000,0.000000,4.000000,4.000000,1.000000\n\
         3,9,0.000000,0.000000,4.000000,4.000000,1.000000\n",
    )
    .unwrap();
    let out = run_ok(&["eval", "--gt", gt.to_str().unwrap(), "--hyp", hyp.to_str().unwrap()]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("mota 0.666667"), "{stdout}");
    assert!(stdout.contains("frag 1"), "{stdout}");
}

#[test]
fn render_emits_one_png_per_frame_with_stable_colors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let sim_dir = dir.path().join("sim");
    run_ok(&["simulate", "--config", cfg.to_str().unwrap(), "--out-dir", sim_dir.to_str().unwrap()]);
    let tracks = dir.path().join("tracks.csv");
    run_ok(&[
        "track",
        "--dets", sim_dir.join("gt_dets.csv").to_str().unwrap(),
        "--out", tracks.to_str().unwrap(),
    ]);
    let render_dir = dir.path().join("render");
    run_ok(&[
        "render",
        "--psq", sim_dir.join("pressure.psq").to_str().unwrap(),
        "--tracks", tracks.to_str().unwrap(),
        "--out-dir", render_dir.to_str().unwrap(),
        "--scale", "1",
    ]);
    let pngs: Vec<_> = std::fs::read_dir(&render_dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "png"))
        .collect();
    assert_eq!(pngs.len(), 100);

    // probe a box edge pixel for its id color
    let rows = io::read_mot_csv(&tracks).unwrap();
    let row = rows.iter().find(|r| r.frame == 1).expect("frame 1 has a track");
    let img = image::open(render_dir.join("frame_00001.png")).unwrap().to_rgb8();
    let px = img.get_pixel(row.x.round() as u32, row.y.round() as u32);
    assert_eq!(px.0, presstrack::render::id_color(row.id as u32));
}

#[test]
fn bench_reports_positive_throughput() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let out = run_ok(&[
        "bench",
        "--config", cfg.to_str().unwrap(),
        "--repeat", "2",
        "--out-dir", dir.path().to_str().unwrap(),
    ]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let fps_line = stdout
        .lines()
        .find(|l| l.starts_with("frames_per_s_mean"))
        .expect("bench prints mean throughput");
    let fps: f64 = fps_line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(fps > 0.0);
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn exit_codes_distinguish_failure_classes() {
    let dir = tempfile::tempdir().unwrap();

    // config error: invalid threshold ordering
    let bad_cfg = dir.path().join("bad.json");
    std::fs::write(&bad_cfg, r#"{"tracker": {"conf_discard": 0.9, "conf_spawn": 0.2}}"#).unwrap();
    let out = bin()
        .args(["simulate", "--config", bad_cfg.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));

    // parse error: malformed detections
    let bad_csv = dir.path().join("bad.csv");
    std::fs::write(&bad_csv, "not,a,valid,row\n").unwrap();
    let out = bin()
        .args(["track", "--dets", bad_csv.to_str().unwrap(), "--out", dir.path().join("t.csv").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));

    // runtime error: missing input file
    let out = bin()
        .args(["track", "--dets", dir.path().join("absent.csv").to_str().unwrap(), "--out", dir.path().join("t.csv").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));

    // unknown strategy is a config error
    let dets = dir.path().join("dets.csv");
    std::fs::write(&dets, "").unwrap();
    let out = bin()
        .args(["track", "--dets", dets.to_str().unwrap(), "--strategy", "sort", "--out", dir.path().join("t.csv").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shipped_default_config_parses_to_defaults() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.json");
    let cfg = io::read_config(&path).unwrap();
    assert_eq!(cfg, io::RunConfig::default());
}

#[test]
fn crops_archive_from_track_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let sim_dir = dir.path().join("sim");
    run_ok(&["simulate", "--config", cfg.to_str().unwrap(), "--out-dir", sim_dir.to_str().unwrap()]);
    let tracks = dir.path().join("tracks.csv");
    let crops = dir.path().join("crops");
    run_ok(&[
        "track",
        "--dets", sim_dir.join("gt_dets.csv").to_str().unwrap(),
        "--out", tracks.to_str().unwrap(),
        "--crops-dir", crops.to_str().unwrap(),
        "--psq", sim_dir.join("pressure.psq").to_str().unwrap(),
    ]);
    let centers = std::fs::read_to_string(crops.join("centers.csv")).unwrap();
    assert!(!centers.is_empty());
    let first = centers.lines().next().unwrap();
    let parts: Vec<&str> = first.split(',').collect();
    let (track_id, frame) = (parts[0], parts[1]);
    let pgm = crops.join(format!("track_{track_id}/frame_{frame}.pgm"));
    let (w, h, samples) = io::read_pgm(&pgm).unwrap();
    assert_eq!((w, h), (128, 128));
    assert!(samples.iter().any(|&s| s > 0), "crop is all zero");
}
