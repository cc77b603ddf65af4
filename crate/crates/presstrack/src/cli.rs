//! The `presstrack` command line: simulate, labelgen, corrupt, track, eval,
//! render, bench, and the pipeline convenience command chaining
//! simulate -> corrupt -> track -> eval.
//!
//! Every command writes a `manifest.json` next to its outputs with the
//! effective config, seeds, paths, and per-stage wall-clock timings, so any
//! published number can be regenerated with one command. The manifest's
//! timing fields are the only output that varies between identical runs.
//!
//! Exit codes: 0 success, 2 config errors, 3 input parse errors, 4 runtime
//! failures. Set `PRESSTRACK_LOG=quiet` to silence progress on stderr.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::geometry::BBox;
use crate::io::{self, IoError, MotCsvRow, RunConfig};
use crate::labelgen::{self, Connectivity, LabelError, RegionOptions, FULL_LOAD_PRESSURE};
use crate::metrics::{self, MetricsError, MotReport, TrajReport, Trajectory};
use crate::render;
use crate::simulate::{self, SimError};
use crate::tracker::{self, Detection, TrackError, TrackOutput};

#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration or flags (exit 2).
    Config(String),
    /// Malformed input file (exit 3).
    Parse(String),
    /// Everything else (exit 4).
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Runtime(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) | CliError::Parse(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Parse { .. } => CliError::Parse(e.to_string()),
            IoError::Schema { .. } => CliError::Config(e.to_string()),
            IoError::Io { .. } => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<TrackError> for CliError {
    fn from(e: TrackError) -> Self {
        match e {
            TrackError::UnknownStrategy { .. } | TrackError::InvalidConfig(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<LabelError> for CliError {
    fn from(e: LabelError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<image::ImageError> for CliError {
    fn from(e: image::ImageError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn quiet() -> bool {
    std::env::var("PRESSTRACK_LOG").map(|v| v == "quiet" || v == "0").unwrap_or(false)
}

macro_rules! progress {
    ($($arg:tt)*) => {
        if !quiet() {
            eprintln!($($arg)*);
        }
    };
}

/// Provenance record written next to every command's outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: Option<u64>,
    pub config: RunConfig,
    pub inputs: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    /// Wall-clock per stage; varies between runs and is excluded from
    /// byte-identity comparisons.
    pub timings_ms: Vec<(String, f64)>,
}

impl RunManifest {
    fn new(command: &str, config: RunConfig) -> Self {
        Self {
            tool: "presstrack",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed: None,
            config,
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
            timings_ms: Vec::new(),
        }
    }

    fn input(&mut self, name: &str, path: &Path) {
        self.inputs.insert(name.to_string(), path.display().to_string());
    }

    fn output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    fn write(&self, path: &Path) -> Result<(), CliError> {
        let json = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, json + "\n")?;
        Ok(())
    }
}

struct StageClock {
    start: Instant,
}

impl StageClock {
    fn start() -> Self {
        Self { start: Instant::now() }
    }

    fn lap(&mut self, manifest: &mut RunManifest, stage: &str) {
        let ms = self.start.elapsed().as_secs_f64() * 1e3;
        manifest.timings_ms.push((stage.to_string(), ms));
        self.start = Instant::now();
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "presstrack",
    version,
    about = "Footprint tracking toolkit for pressure-sensing floor mats"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Synthesize a walking sequence: pressure frames plus ground truth.
    Simulate {
        /// JSON run config; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
        /// Overrides the config's simulation seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Generate per-person ground-truth boxes from pressure + annotations.
    Labelgen {
        #[arg(long)]
        psq: PathBuf,
        #[arg(long)]
        annotations: PathBuf,
        /// Output detections CSV.
        #[arg(long)]
        out: PathBuf,
        /// Region threshold in raw pressure units (default: 2% of full load).
        #[arg(long)]
        tau: Option<f64>,
        /// Component connectivity: 4 or 8.
        #[arg(long, default_value_t = 8)]
        connectivity: u8,
    },
    /// Apply the detector noise model to ground-truth boxes.
    Corrupt {
        /// Ground-truth detections CSV.
        #[arg(long)]
        gt: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config's noise seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Associate detections into identity-stable tracks.
    Track {
        /// Detections CSV (id column ignored).
        #[arg(long)]
        dets: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Association strategy; overrides the config.
        #[arg(long)]
        strategy: Option<String>,
        /// Output tracks CSV.
        #[arg(long)]
        out: PathBuf,
        /// Also extract per-track 128x128 crops (requires --psq).
        #[arg(long)]
        crops_dir: Option<PathBuf>,
        #[arg(long)]
        psq: Option<PathBuf>,
    },
    /// Score tracking output (and optionally trajectories) against ground truth.
    Eval {
        #[arg(long)]
        gt: PathBuf,
        #[arg(long)]
        hyp: PathBuf,
        #[arg(long)]
        gt_traj: Option<PathBuf>,
        #[arg(long)]
        est_traj: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Also write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Render pressure frames with colored track boxes to PNG files.
    Render {
        #[arg(long)]
        psq: PathBuf,
        #[arg(long)]
        tracks: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Pixels per mat cell.
        #[arg(long, default_value_t = 3)]
        scale: u32,
    },
    /// Measure tracker throughput on a generated detection stream.
    Bench {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        repeat: u32,
        /// Where the bench manifest goes.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// simulate -> corrupt -> track -> eval in one deterministic run.
    Pipeline {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
        /// Overrides the config's simulation seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn load_config(path: Option<&PathBuf>) -> Result<RunConfig, CliError> {
    match path {
        Some(p) => Ok(io::read_config(p)?),
        None => Ok(RunConfig::default()),
    }
}

/// Parses argv and runs; returns the process exit code.
pub fn run_cli() -> i32 {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate { config, out_dir, seed } => cmd_simulate(config, out_dir, seed),
        Command::Labelgen { psq, annotations, out, tau, connectivity } => {
            cmd_labelgen(psq, annotations, out, tau, connectivity)
        }
        Command::Corrupt { gt, config, out, seed } => cmd_corrupt(gt, config, out, seed),
        Command::Track { dets, config, strategy, out, crops_dir, psq } => {
            cmd_track(dets, config, strategy, out, crops_dir, psq)
        }
        Command::Eval { gt, hyp, gt_traj, est_traj, config, json } => {
            cmd_eval(gt, hyp, gt_traj, est_traj, config, json)
        }
        Command::Render { psq, tracks, out_dir, scale } => cmd_render(psq, tracks, out_dir, scale),
        Command::Bench { config, repeat, out_dir } => cmd_bench(config, repeat, out_dir),
        Command::Pipeline { config, out_dir, seed } => cmd_pipeline(config, out_dir, seed),
    }
}

fn labels_as_rows(labels: &[Vec<(u32, BBox)>]) -> Vec<MotCsvRow> {
    labels
        .iter()
        .enumerate()
        .flat_map(|(i, frame_labels)| {
            frame_labels.iter().map(move |&(person, bbox)| MotCsvRow {
                frame: i as u32 + 1,
                id: person as i64,
                x: bbox.x,
                y: bbox.y,
                w: bbox.w,
                h: bbox.h,
                conf: 1.0,
            })
        })
        .collect()
}

fn cmd_simulate(config: Option<PathBuf>, out_dir: PathBuf, seed: Option<u64>) -> Result<(), CliError> {
    let mut cfg = load_config(config.as_ref())?;
    if let Some(s) = seed {
        cfg.sim.seed = s;
    }
    std::fs::create_dir_all(&out_dir)?;
    let mut manifest = RunManifest::new("simulate", cfg.clone());
    manifest.seed = Some(cfg.sim.seed);
    let mut clock = StageClock::start();

    let (frames, gt) = simulate::simulate(&cfg.sim)?;
    clock.lap(&mut manifest, "simulate");
    progress!("simulated {} frames, {} persons", frames.len(), cfg.sim.n_persons);

    let psq = out_dir.join("pressure.psq");
    io::write_psq(&psq, &frames, cfg.sim.fps)?;
    manifest.output(&psq);

    let gt_path = out_dir.join("gt_dets.csv");
    io::write_mot_csv(&gt_path, &labels_as_rows(&gt.labels))?;
    manifest.output(&gt_path);

    let ann_path = out_dir.join("annotations.csv");
    io::write_annotations(&ann_path, &gt.annotation_rows)?;
    manifest.output(&ann_path);

    let traj_path = out_dir.join("trajectories.csv");
    io::write_trajectories(&traj_path, &gt.trajectories)?;
    manifest.output(&traj_path);

    clock.lap(&mut manifest, "write");
    manifest.write(&out_dir.join("manifest.json"))?;
    Ok(())
}

fn cmd_labelgen(
    psq: PathBuf,
    annotations: PathBuf,
    out: PathBuf,
    tau: Option<f64>,
    connectivity: u8,
) -> Result<(), CliError> {
    let connectivity = match connectivity {
        4 => Connectivity::Four,
        8 => Connectivity::Eight,
        other => return Err(CliError::Config(format!("--connectivity must be 4 or 8, got {other}"))),
    };
    let tau = tau.unwrap_or(labelgen::DEFAULT_TAU);
    if tau <= 0.0 {
        return Err(CliError::Config(format!("--tau must be positive, got {tau}")));
    }
    let mut manifest = RunManifest::new("labelgen", RunConfig::default());
    manifest.input("psq", &psq);
    manifest.input("annotations", &annotations);
    let mut clock = StageClock::start();

    let (frames, _fps) = io::read_psq(&psq)?;
    let rows = io::read_annotations(&annotations)?;
    let grouped = labelgen::group_annotations(&rows, frames.len() as u32);
    clock.lap(&mut manifest, "read");

    let opts = RegionOptions { connectivity, ..Default::default() };
    let labels = labelgen::generate_labels(&frames, &grouped, tau, opts)?;
    clock.lap(&mut manifest, "labelgen");
    progress!("generated {} label boxes over {} frames", labels.len(), frames.len());

    let csv_rows: Vec<MotCsvRow> = labels.iter().map(MotCsvRow::from_label).collect();
    io::write_mot_csv(&out, &csv_rows)?;
    manifest.output(&out);
    clock.lap(&mut manifest, "write");
    manifest.write(&manifest_path_for(&out))?;
    Ok(())
}

fn cmd_corrupt(
    gt: PathBuf,
    config: Option<PathBuf>,
    out: PathBuf,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let mut cfg = load_config(config.as_ref())?;
    if let Some(s) = seed {
        cfg.noise.seed = s;
    }
    let mut manifest = RunManifest::new("corrupt", cfg.clone());
    manifest.seed = Some(cfg.noise.seed);
    manifest.input("gt", &gt);
    let mut clock = StageClock::start();

    let rows = io::read_mot_csv(&gt)?;
    let n_frames = rows.iter().map(|r| r.frame).max().unwrap_or(0) as usize;
    let mut labels: Vec<Vec<(u32, BBox)>> = vec![Vec::new(); n_frames];
    for r in &rows {
        labels[(r.frame - 1) as usize].push((r.id.max(0) as u32, r.bbox()));
    }
    clock.lap(&mut manifest, "read");

    let dets = simulate::corrupt_detections(&labels, cfg.sim.mat_height, cfg.sim.mat_width, &cfg.noise)?;
    clock.lap(&mut manifest, "corrupt");

    let out_rows: Vec<MotCsvRow> = dets
        .iter()
        .flatten()
        .map(MotCsvRow::from_detection)
        .collect();
    progress!("kept {} detections from {} ground-truth boxes", out_rows.len(), rows.len());
    io::write_mot_csv(&out, &out_rows)?;
    manifest.output(&out);
    clock.lap(&mut manifest, "write");
    manifest.write(&manifest_path_for(&out))?;
    Ok(())
}

fn cmd_track(
    dets: PathBuf,
    config: Option<PathBuf>,
    strategy: Option<String>,
    out: PathBuf,
    crops_dir: Option<PathBuf>,
    psq: Option<PathBuf>,
) -> Result<(), CliError> {
    let mut cfg = load_config(config.as_ref())?;
    if let Some(s) = strategy {
        cfg.tracker.strategy = s;
        cfg.tracker.validate()?;
    }
    let mut manifest = RunManifest::new("track", cfg.clone());
    manifest.input("dets", &dets);
    let mut clock = StageClock::start();

    let det_rows: Vec<Detection> =
        io::read_mot_csv(&dets)?.into_iter().map(MotCsvRow::to_detection).collect();
    clock.lap(&mut manifest, "read");

    let (rows, events) = tracker::run(&det_rows, &cfg.tracker)?;
    clock.lap(&mut manifest, "track");
    progress!(
        "tracked {} detections into {} rows ({} lifecycle events, strategy {})",
        det_rows.len(),
        rows.len(),
        events.len(),
        cfg.tracker.strategy
    );

    let csv_rows: Vec<MotCsvRow> = rows.iter().map(MotCsvRow::from_track).collect();
    io::write_mot_csv(&out, &csv_rows)?;
    manifest.output(&out);

    if let Some(crops_dir) = crops_dir {
        let psq = psq.ok_or_else(|| {
            CliError::Config("--crops-dir requires --psq for the pressure frames".to_string())
        })?;
        manifest.input("psq", &psq);
        let (frames, _) = io::read_psq(&psq)?;
        let (crops, warnings) = tracker::extract_crops(&frames, &rows)?;
        for w in &warnings {
            progress!(
                "warning: track {} frame {}: box exceeds the crop canvas, center-cropped",
                w.track_id,
                w.frame
            );
        }
        io::write_crops(&crops_dir, &crops, FULL_LOAD_PRESSURE)?;
        manifest.output(&crops_dir);
        clock.lap(&mut manifest, "crops");
    }

    manifest.write(&manifest_path_for(&out))?;
    Ok(())
}

/// Flat key-value text block for a tracking report.
pub fn mot_report_text(r: &MotReport) -> String {
    format!(
        "mota {:.6}\nmotp {:.6}\nfn {}\nfp {}\nidsw {}\nfrag {}\nidf1 {:.6}\nidp {:.6}\nidr {:.6}\ngt_count {}\n",
        r.mota, r.motp, r.fn_count, r.fp_count, r.idsw, r.frag, r.idf1, r.idp, r.idr, r.gt_count
    )
}

pub fn traj_report_text(r: &TrajReport) -> String {
    format!(
        "seg_first_two_mm {:.6}\nseg_whole_mm {:.6}\nrte_percent {:.6}\n",
        r.seg_first_two_mm, r.seg_whole_mm, r.rte_percent
    )
}

#[derive(Debug, Serialize)]
struct EvalReport {
    mot: MotReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    traj: Option<TrajReport>,
}

/// Averages trajectory metrics over person ids present in both files.
fn trajectory_report(
    gt: &[Trajectory],
    est: &[Trajectory],
    cfg: &RunConfig,
) -> Result<TrajReport, CliError> {
    let seg_opts = cfg.metrics.segment_options();
    let mut first_two = Vec::new();
    let mut whole = Vec::new();
    let mut rtes = Vec::new();
    for g in gt {
        if let Some(e) = est.iter().find(|e| e.person_id == g.person_id) {
            first_two.push(metrics::segment_error(g, e, metrics::AlignMode::FirstTwo, &seg_opts)?);
            whole.push(metrics::segment_error(g, e, metrics::AlignMode::Whole, &seg_opts)?);
            rtes.push(metrics::rte(g, e)?);
        }
    }
    if rtes.is_empty() {
        return Err(CliError::Runtime(
            "no person ids shared between the trajectory files".to_string(),
        ));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    Ok(TrajReport {
        seg_first_two_mm: mean(&first_two),
        seg_whole_mm: mean(&whole),
        rte_percent: mean(&rtes),
    })
}

fn cmd_eval(
    gt: PathBuf,
    hyp: PathBuf,
    gt_traj: Option<PathBuf>,
    est_traj: Option<PathBuf>,
    config: Option<PathBuf>,
    json: Option<PathBuf>,
) -> Result<(), CliError> {
    let cfg = load_config(config.as_ref())?;
    let mut manifest = RunManifest::new("eval", cfg.clone());
    manifest.input("gt", &gt);
    manifest.input("hyp", &hyp);
    let mut clock = StageClock::start();

    let gt_rows: Vec<_> = io::read_mot_csv(&gt)?.into_iter().map(MotCsvRow::to_mot).collect();
    let hyp_rows: Vec<_> = io::read_mot_csv(&hyp)?.into_iter().map(MotCsvRow::to_mot).collect();
    let mot = metrics::clearmot(&gt_rows, &hyp_rows, cfg.metrics.mot_options())?;
    clock.lap(&mut manifest, "clearmot");

    let traj = match (&gt_traj, &est_traj) {
        (Some(g), Some(e)) => {
            manifest.input("gt_traj", g);
            manifest.input("est_traj", e);
            let report = trajectory_report(&io::read_trajectories(g)?, &io::read_trajectories(e)?, &cfg)?;
            clock.lap(&mut manifest, "trajectory");
            Some(report)
        }
        (None, None) => None,
        _ => {
            return Err(CliError::Config(
                "--gt-traj and --est-traj must be given together".to_string(),
            ))
        }
    };

    let report = EvalReport { mot, traj };
    let mut text = mot_report_text(&report.mot);
    if let Some(t) = &report.traj {
        text.push_str(&traj_report_text(t));
    }
    print!("{text}");
    let json_doc = serde_json::to_string_pretty(&report).expect("report serializes");
    println!("{json_doc}");
    if let Some(path) = json {
        std::fs::write(&path, json_doc + "\n")?;
        manifest.output(&path);
        manifest.write(&manifest_path_for(&path))?;
    } else {
        manifest.write(&manifest_path_for(&hyp.with_extension("eval")))?;
    }
    Ok(())
}

fn cmd_render(psq: PathBuf, tracks: PathBuf, out_dir: PathBuf, scale: u32) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("render", RunConfig::default());
    manifest.input("psq", &psq);
    manifest.input("tracks", &tracks);
    std::fs::create_dir_all(&out_dir)?;
    let mut clock = StageClock::start();

    let (frames, _) = io::read_psq(&psq)?;
    let rows = io::read_mot_csv(&tracks)?;
    let mut by_frame: BTreeMap<u32, Vec<(u32, BBox)>> = BTreeMap::new();
    for r in &rows {
        by_frame.entry(r.frame).or_default().push((r.id.max(0) as u32, r.bbox()));
    }
    clock.lap(&mut manifest, "read");

    for frame in &frames {
        let boxes = by_frame.get(&frame.frame).map_or(&[][..], Vec::as_slice);
        let img = render::render_frame(frame, boxes, scale, FULL_LOAD_PRESSURE);
        let path = out_dir.join(format!("frame_{:05}.png", frame.frame));
        img.save(&path)?;
    }
    progress!("rendered {} frames to {}", frames.len(), out_dir.display());
    clock.lap(&mut manifest, "render");
    manifest.output(&out_dir);
    manifest.write(&out_dir.join("manifest.json"))?;
    Ok(())
}

fn cmd_bench(config: Option<PathBuf>, repeat: u32, out_dir: PathBuf) -> Result<(), CliError> {
    let cfg = match &config {
        Some(_) => load_config(config.as_ref())?,
        None => {
            // default benchmark sequence: 3 persons, 2660 frames
            let mut c = RunConfig::default();
            c.sim.duration_s = 2660.0 / c.sim.fps;
            c
        }
    };
    let repeat = repeat.max(1);
    std::fs::create_dir_all(&out_dir)?;
    let mut manifest = RunManifest::new("bench", cfg.clone());
    manifest.seed = Some(cfg.sim.seed);
    let mut clock = StageClock::start();

    let (_frames, gt) = simulate::simulate(&cfg.sim)?;
    let per_frame =
        simulate::corrupt_detections(&gt.labels, cfg.sim.mat_height, cfg.sim.mat_width, &cfg.noise)?;
    let dets: Vec<Detection> = per_frame.into_iter().flatten().collect();
    let n_frames = gt.labels.len();
    clock.lap(&mut manifest, "generate");

    let mut rates = Vec::with_capacity(repeat as usize);
    for i in 0..repeat {
        let t0 = Instant::now();
        let (rows, _) = tracker::run(&dets, &cfg.tracker)?;
        let dt = t0.elapsed().as_secs_f64();
        let fps = n_frames as f64 / dt;
        rates.push(fps);
        progress!("run {}: {} rows, {:.1} frames/s", i + 1, rows.len(), fps);
    }
    clock.lap(&mut manifest, "bench");
    let best = rates.iter().cloned().fold(0.0f64, f64::max);
    let worst = rates.iter().cloned().fold(f64::INFINITY, f64::min);
    let mean = rates.iter().sum::<f64>() / rates.len() as f64;
    let spread = if best > 0.0 { (best - worst) / best * 100.0 } else { 0.0 };
    println!("frames {n_frames}");
    println!("detections {}", dets.len());
    println!("repeats {repeat}");
    println!("frames_per_s_mean {mean:.1}");
    println!("frames_per_s_best {best:.1}");
    println!("frames_per_s_worst {worst:.1}");
    println!("spread_percent {spread:.1}");
    manifest.write(&out_dir.join("manifest.json"))?;
    Ok(())
}

fn cmd_pipeline(config: Option<PathBuf>, out_dir: PathBuf, seed: Option<u64>) -> Result<(), CliError> {
    let mut cfg = load_config(config.as_ref())?;
    if let Some(s) = seed {
        cfg.sim.seed = s;
    }
    std::fs::create_dir_all(&out_dir)?;
    let mut manifest = RunManifest::new("pipeline", cfg.clone());
    manifest.seed = Some(cfg.sim.seed);
    let mut clock = StageClock::start();

    // simulate
    let (frames, gt) = simulate::simulate(&cfg.sim)?;
    clock.lap(&mut manifest, "simulate");
    let psq = out_dir.join("pressure.psq");
    io::write_psq(&psq, &frames, cfg.sim.fps)?;
    manifest.output(&psq);
    let gt_path = out_dir.join("gt_dets.csv");
    let gt_rows = labels_as_rows(&gt.labels);
    io::write_mot_csv(&gt_path, &gt_rows)?;
    manifest.output(&gt_path);
    let ann_path = out_dir.join("annotations.csv");
    io::write_annotations(&ann_path, &gt.annotation_rows)?;
    manifest.output(&ann_path);
    let traj_path = out_dir.join("trajectories.csv");
    io::write_trajectories(&traj_path, &gt.trajectories)?;
    manifest.output(&traj_path);
    clock.lap(&mut manifest, "write_gt");

    // corrupt
    let per_frame =
        simulate::corrupt_detections(&gt.labels, cfg.sim.mat_height, cfg.sim.mat_width, &cfg.noise)?;
    let dets: Vec<Detection> = per_frame.into_iter().flatten().collect();
    let dets_path = out_dir.join("dets.csv");
    let det_rows: Vec<MotCsvRow> = dets.iter().map(MotCsvRow::from_detection).collect();
    io::write_mot_csv(&dets_path, &det_rows)?;
    manifest.output(&dets_path);
    clock.lap(&mut manifest, "corrupt");

    // track
    let (rows, _events) = tracker::run(&dets, &cfg.tracker)?;
    let tracks_path = out_dir.join("tracks.csv");
    let track_rows: Vec<MotCsvRow> = rows.iter().map(MotCsvRow::from_track).collect();
    io::write_mot_csv(&tracks_path, &track_rows)?;
    manifest.output(&tracks_path);
    clock.lap(&mut manifest, "track");

    // eval
    let gt_mot: Vec<_> = gt_rows.iter().map(|r| r.to_mot()).collect();
    let hyp_mot: Vec<_> = track_rows.iter().map(|r| r.to_mot()).collect();
    let mot = metrics::clearmot(&gt_mot, &hyp_mot, cfg.metrics.mot_options())?;
    let report = EvalReport { mot, traj: None };
    let text = mot_report_text(&report.mot);
    let report_txt = out_dir.join("report.txt");
    std::fs::write(&report_txt, &text)?;
    manifest.output(&report_txt);
    let report_json = out_dir.join("report.json");
    std::fs::write(&report_json, serde_json::to_string_pretty(&report).expect("serializes") + "\n")?;
    manifest.output(&report_json);
    clock.lap(&mut manifest, "eval");
    print!("{text}");

    progress!(
        "pipeline complete: {} frames, {} detections, {} track rows",
        frames.len(),
        dets.len(),
        rows.len()
    );
    manifest.write(&out_dir.join("manifest.json"))?;
    Ok(())
}

fn manifest_path_for(output: &Path) -> PathBuf {
    let mut name = output.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}

/// Used by the track/run surface to keep emitted rows convertible in tests.
pub fn track_outputs_to_rows(rows: &[TrackOutput]) -> Vec<MotCsvRow> {
    rows.iter().map(MotCsvRow::from_track).collect()
}
