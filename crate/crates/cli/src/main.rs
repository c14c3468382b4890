//! roundpoly: encode SVGs to the rounded-polygon token format and back,
//! simulate training-time degradation, stylize decoded geometry against a
//! source image, and pick the best of N candidates.
//!
//! Exit codes: 0 ok, 1 usage/input error, 2 degradation produced a blank.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use roundpoly::color::Rgb;
use roundpoly::config::{RunConfig, ScorerSpec};
use roundpoly::degrade::{degrade_outline, DegradeError};
use roundpoly::geom::Point;
use roundpoly::pipeline::{decode_tokens, encode_svg, roundtrip_fidelity};
use roundpoly::raster::{chamfer, mse, read_image, ssim, write_image, Raster};
use roundpoly::rounded::{
    baseline_path_string, compare_tokens, default_token_count, serialize, ParseMode, TokenDoc,
};
use roundpoly::stylize::{
    render_styled, styled_to_svg, stylize_scene, ColorAssignment, ColorProvenance, StyledScene,
};

#[derive(Parser)]
#[command(name = "roundpoly", version, about)]
struct Cli {
    /// Key=value config file; unset keys keep their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// RNG seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// SVG file -> rounded-polygon token file.
    Encode(EncodeArgs),
    /// Token file -> SVG, optionally stylized against a source image.
    Decode(DecodeArgs),
    /// SVG file -> degraded outline raster (PNG).
    Degrade(DegradeArgs),
    /// Pick the best of N candidate token files against a source image.
    Select(SelectArgs),
    /// Image (and point-set) metrics.
    Metrics(MetricsArgs),
    /// Encode then decode, reporting geometric fidelity.
    Roundtrip(RoundtripArgs),
    /// Print the effective configuration.
    Config,
}

#[derive(Args)]
struct EncodeArgs {
    input: PathBuf,
    output: PathBuf,
}

#[derive(Args)]
struct DecodeArgs {
    input: PathBuf,
    output: PathBuf,
    /// Source raster for color/z-order/stroke recovery.
    #[arg(long)]
    source: Option<PathBuf>,
    /// Fail on the first malformed vertex instead of recovering.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct DegradeArgs {
    input: PathBuf,
    output: PathBuf,
    /// Skip the degradation and render the clean outline.
    #[arg(long)]
    bypass: bool,
}

#[derive(Args)]
struct SelectArgs {
    /// Candidate token files, scored in the given order.
    #[arg(required = true)]
    candidates: Vec<PathBuf>,
    #[arg(long)]
    source: PathBuf,
    /// Where the winning candidate's styled SVG goes.
    #[arg(long)]
    out: PathBuf,
    /// neg-mse | ssim | external:<command>
    #[arg(long)]
    scorer: Option<String>,
}

#[derive(Args)]
struct MetricsArgs {
    image_a: PathBuf,
    image_b: PathBuf,
    /// Control-point files (one "x,y" pair per line) for Chamfer distance.
    #[arg(long)]
    points_a: Option<PathBuf>,
    #[arg(long)]
    points_b: Option<PathBuf>,
}

#[derive(Args)]
struct RoundtripArgs {
    input: PathBuf,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load_config(cli_config: &Option<PathBuf>, seed: Option<u64>) -> Result<RunConfig> {
    let mut cfg = match cli_config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            RunConfig::from_text(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(seed) = seed {
        cfg.rng_seed = seed;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = load_config(&cli.config, cli.seed)?;
    match cli.command {
        Command::Encode(args) => cmd_encode(&args, &cfg),
        Command::Decode(args) => cmd_decode(&args, &cfg),
        Command::Degrade(args) => cmd_degrade(&args, &cfg),
        Command::Select(args) => cmd_select(&args, &cfg),
        Command::Metrics(args) => cmd_metrics(&args),
        Command::Roundtrip(args) => cmd_roundtrip(&args, &cfg),
        Command::Config => {
            print!("{}", cfg.to_text());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_encode(args: &EncodeArgs, cfg: &RunConfig) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let encoded = encode_svg(&text, cfg)?;
    for w in &encoded.warnings {
        eprintln!("warning: {w}");
    }
    let doc = serialize(&encoded.polygons)?;
    std::fs::write(&args.output, &doc.text)
        .with_context(|| format!("writing {}", args.output.display()))?;

    let baseline: String = encoded
        .normalized
        .iter()
        .map(baseline_path_string)
        .collect::<Vec<_>>()
        .join("\n");
    let savings = compare_tokens(&doc, &baseline);
    for (i, count) in encoded.primitive_counts.iter().enumerate() {
        println!(
            "path {i}: {count} primitives, {} vertices",
            encoded.polygons[i].vertices.len()
        );
    }
    println!(
        "tokens: {} vs raw baseline {} ({:+.1}% savings)",
        default_token_count(&doc.text),
        default_token_count(&baseline),
        savings * 100.0
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_decode(args: &DecodeArgs, cfg: &RunConfig) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let doc = TokenDoc { text };
    let mode = if args.strict {
        ParseMode::Strict
    } else {
        ParseMode::Recovery
    };
    let (polys, diags) = decode_tokens(&doc, mode)?;
    for d in &diags {
        eprintln!(
            "warning: line {}, column {}: {}",
            d.line, d.column, d.message
        );
    }
    if polys.is_empty() {
        bail!("no decodable paths in {}", args.input.display());
    }
    let styled = match &args.source {
        Some(source_path) => {
            let source = read_image(source_path)?;
            let report = stylize_scene(&polys, &source);
            for d in &report.diagnostics {
                eprintln!("note: {d}");
            }
            report.scene
        }
        None => uniform_gray_scene(polys, cfg.mask_resolution),
    };
    std::fs::write(&args.output, styled_to_svg(&styled))
        .with_context(|| format!("writing {}", args.output.display()))?;
    Ok(ExitCode::SUCCESS)
}

fn uniform_gray_scene(
    polys: Vec<roundpoly::rounded::RoundedPolygon>,
    resolution: usize,
) -> StyledScene {
    let k = polys.len();
    StyledScene {
        colors: ColorAssignment {
            colors: vec![Rgb::new(128, 128, 128); k],
            provenance: vec![ColorProvenance::Unresolved; k],
        },
        order: (0..k).collect(),
        strokes: vec![None; k],
        source_resolution: resolution,
        polygons: polys,
    }
}

fn cmd_degrade(args: &DegradeArgs, cfg: &RunConfig) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let encoded = encode_svg(&text, cfg)?;
    let mut dcfg = cfg.degrade_config();
    if args.bypass {
        dcfg.bypass_probability = 1.0;
    }
    match degrade_outline(&encoded.polygons, &dcfg) {
        Ok((raster, record)) => {
            write_image(&raster, &args.output)?;
            eprintln!(
                "degrade: bypassed={} resolution={} sigma={:.3} contours={}",
                record.bypassed, record.resolution, record.blur_sigma, record.traced_contours
            );
            Ok(ExitCode::SUCCESS)
        }
        Err(DegradeError::DegradedToBlank) => {
            eprintln!("error: {}", DegradeError::DegradedToBlank);
            Ok(ExitCode::from(2))
        }
    }
}

fn cmd_select(args: &SelectArgs, cfg: &RunConfig) -> Result<ExitCode> {
    let source = read_image(&args.source)?;
    let scorer = match &args.scorer {
        Some(text) => parse_scorer(text)?,
        None => cfg.scorer.clone(),
    };

    struct Scored {
        score: f64,
        styled: Option<StyledScene>,
        note: Option<String>,
    }

    let results: Vec<Scored> = std::thread::scope(|scope| {
        let handles: Vec<_> = args
            .candidates
            .iter()
            .map(|path| {
                let source = &source;
                let scorer = &scorer;
                scope.spawn(move || match score_candidate(path, source, scorer) {
                    Ok((score, styled, note)) => Scored {
                        score,
                        styled: Some(styled),
                        note,
                    },
                    Err(e) => Scored {
                        score: f64::NEG_INFINITY,
                        styled: None,
                        note: Some(format!("{e:#}")),
                    },
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    for (i, (path, r)) in args.candidates.iter().zip(&results).enumerate() {
        println!("{i}\t{}\t{}", path.display(), fmt_score(r.score));
        if let Some(note) = &r.note {
            eprintln!("candidate {i}: {note}");
        }
    }
    let best = results
        .iter()
        .enumerate()
        .filter(|(_, r)| r.styled.is_some())
        .max_by(|(ia, a), (ib, b)| {
            a.score
                .partial_cmp(&b.score)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(ib.cmp(ia)) // earliest index wins ties
        });
    let Some((idx, winner)) = best else {
        bail!("all candidates failed to decode");
    };
    std::fs::write(&args.out, styled_to_svg(winner.styled.as_ref().unwrap()))
        .with_context(|| format!("writing {}", args.out.display()))?;
    println!(
        "selected {}\t{}\t{}",
        idx,
        args.candidates[idx].display(),
        fmt_score(winner.score)
    );
    Ok(ExitCode::SUCCESS)
}

fn fmt_score(v: f64) -> String {
    if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:.6}")
    }
}

fn parse_scorer(text: &str) -> Result<ScorerSpec> {
    match text {
        "neg-mse" => Ok(ScorerSpec::NegMse),
        "ssim" => Ok(ScorerSpec::Ssim),
        other => other
            .strip_prefix("external:")
            .map(|cmd| ScorerSpec::External(cmd.to_string()))
            .ok_or_else(|| anyhow!("unknown scorer {other:?}")),
    }
}

fn score_candidate(
    path: &Path,
    source: &Raster,
    scorer: &ScorerSpec,
) -> Result<(f64, StyledScene, Option<String>)> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let (polys, _) = decode_tokens(&TokenDoc { text }, ParseMode::Recovery)?;
    if polys.is_empty() {
        bail!("no decodable paths");
    }
    let report = stylize_scene(&polys, source);
    let size = report.scene.source_resolution;
    let rendered = render_styled(&report.scene, size, 1);
    let (score, note) = match scorer {
        ScorerSpec::NegMse => (-mse(&rendered, source)?, None),
        ScorerSpec::Ssim => (ssim(&rendered, source)?, None),
        ScorerSpec::External(cmd) => match run_external_scorer(cmd, &rendered, source) {
            Ok(v) => (v, None),
            Err(e) => (
                f64::NEG_INFINITY,
                Some(format!("external scorer failed: {e:#}")),
            ),
        },
    };
    Ok((score, report.scene, note))
}

/// Invoke `cmd` with two extra arguments (rendered PNG, source PNG); it must
/// print one number on stdout.
fn run_external_scorer(cmd: &str, rendered: &Raster, source: &Raster) -> Result<f64> {
    let dir = tempfile::tempdir()?;
    let rendered_path = dir.path().join("candidate.png");
    let source_path = dir.path().join("source.png");
    write_image(rendered, &rendered_path)?;
    write_image(source, &source_path)?;
    let mut parts = cmd.split_whitespace();
    let program = parts
        .next()
        .ok_or_else(|| anyhow!("empty scorer command"))?;
    let output = std::process::Command::new(program)
        .args(parts)
        .arg(&rendered_path)
        .arg(&source_path)
        .output()
        .with_context(|| format!("spawning {program}"))?;
    if !output.status.success() {
        bail!("scorer exited with {}", output.status);
    }
    let text = String::from_utf8_lossy(&output.stdout);
    text.split_whitespace()
        .next()
        .and_then(|t| t.parse::<f64>().ok())
        .ok_or_else(|| anyhow!("scorer printed no number: {text:?}"))
}

fn cmd_metrics(args: &MetricsArgs) -> Result<ExitCode> {
    let a = read_image(&args.image_a)?;
    let b = read_image(&args.image_b)?;
    let mut report = serde_json::Map::new();
    report.insert("mse".into(), mse(&a, &b)?.into());
    report.insert("ssim".into(), ssim(&a, &b)?.into());
    if let (Some(pa), Some(pb)) = (&args.points_a, &args.points_b) {
        let pts_a = read_points(pa)?;
        let pts_b = read_points(pb)?;
        report.insert("chamfer".into(), chamfer(&pts_a, &pts_b)?.into());
    }
    println!("{}", serde_json::Value::Object(report));
    Ok(ExitCode::SUCCESS)
}

fn read_points(path: &Path) -> Result<Vec<Point>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<f64> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| anyhow!("{}:{}: bad point {line:?}", path.display(), i + 1))?;
        if nums.len() != 2 {
            bail!("{}:{}: expected x,y", path.display(), i + 1);
        }
        points.push(Point::new(nums[0], nums[1]));
    }
    Ok(points)
}

fn cmd_roundtrip(args: &RoundtripArgs, cfg: &RunConfig) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let encoded = encode_svg(&text, cfg)?;
    let doc = serialize(&encoded.polygons)?;
    let (decoded, _) = decode_tokens(&doc, ParseMode::Recovery)?;
    let fidelity = roundtrip_fidelity(&encoded.normalized, &decoded, cfg.mask_resolution);

    let baseline: String = encoded
        .normalized
        .iter()
        .map(baseline_path_string)
        .collect::<Vec<_>>()
        .join("\n");
    let savings = compare_tokens(&doc, &baseline);

    let report = serde_json::json!({
        "paths": decoded.len(),
        "hausdorff": fidelity.hausdorff,
        "chamfer": fidelity.chamfer,
        "mask_iou": fidelity.mask_iou,
        "token_savings": savings,
    });
    match &args.report {
        Some(path) => std::fs::write(path, report.to_string())?,
        None => println!("{report}"),
    }
    Ok(ExitCode::SUCCESS)
}
