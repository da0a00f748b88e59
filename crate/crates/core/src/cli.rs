//! The `orthosfm` command-line tool.
//!
//! Exit codes: 0 solved, 2 infeasible, 3 degenerate, 1 usage or I/O error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::feasibility::{self, Verdict};
use crate::forward::{project_2d, project_3d};
use crate::io::{DimensionTable, Document, FeasibilityReport, PairCheck, Reconstruction};
use crate::oracle::{random_scene, AnyScene};
use crate::plot;
use crate::reconstruct2d::invert_2d;
use crate::reconstruct3d::{reconstruct_3d, solve_ullman_pair};
use crate::scene::PairCoefficients;
use crate::tol;

#[derive(Debug, Parser)]
#[command(
    name = "orthosfm",
    version,
    about = "Orthographic structure from motion for three points and three cameras"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random nondegenerate scene.
    Generate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
        dim: u8,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Project a scene file to image data.
    Project {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Reconstruct all scenes consistent with an image-data file.
    Reconstruct {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = tol::RESIDUAL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Classify image data (or a single pair system) as realizable or not.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = tol::RESIDUAL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimal point counts by dimension and number of cameras.
    Dims {
        #[arg(long, default_value_t = 4)]
        max_d: u32,
        #[arg(long, default_value_t = 4)]
        max_m: u32,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a scene or candidate file as SVG.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Text,
    Json,
    Csv,
}

/// Classification carried by the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Solved,
    Infeasible,
    Degenerate,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Solved => 0,
            Outcome::Infeasible => 2,
            Outcome::Degenerate => 3,
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn write_svg(path: Option<&PathBuf>, svg: impl FnOnce() -> String) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(p, svg())?;
    }
    Ok(())
}

fn scene_document(scene: AnyScene) -> Document {
    match scene {
        AnyScene::Plane(s) => Document::Scene2D(s),
        AnyScene::Space(s) => Document::Scene3D(s),
    }
}

fn svg_for(doc: &Document) -> Result<String> {
    Ok(match doc {
        Document::Scene2D(s) => plot::svg_scene_2d(s),
        Document::Scene3D(s) => plot::svg_scene_3d(s),
        Document::Candidates2D(r) => plot::svg_candidates_2d(&r.candidates, r.reason.as_deref().unwrap_or("")),
        Document::Candidates3D(r) => plot::svg_candidates_3d(&r.candidates, r.reason.as_deref().unwrap_or("")),
        other => return Err(Error::Schema(format!("cannot plot a {} document", other.kind()))),
    })
}

fn classify<T>(r: Result<T>) -> Result<(Outcome, Option<T>, Option<String>)> {
    match r {
        Ok(v) => Ok((Outcome::Solved, Some(v), None)),
        Err(Error::Infeasible(why)) => Ok((Outcome::Infeasible, None, Some(why))),
        Err(Error::Degenerate(why)) => Ok((Outcome::Degenerate, None, Some(why))),
        Err(e) => Err(e),
    }
}

fn reconstruction<S>(outcome: Outcome, set: Option<crate::CandidateSet<S>>, why: Option<String>) -> Reconstruction<S> {
    match (outcome, set) {
        (Outcome::Solved, Some(set)) => Reconstruction::solved(set),
        (Outcome::Degenerate, _) => Reconstruction::failed("degenerate", why.unwrap_or_default()),
        _ => Reconstruction::failed("infeasible", why.unwrap_or_default()),
    }
}

fn verdict_outcome(v: &Verdict) -> Outcome {
    match v {
        Verdict::Reconstructable { .. } => Outcome::Solved,
        Verdict::Infeasible { .. } => Outcome::Infeasible,
        Verdict::Degenerate { .. } => Outcome::Degenerate,
    }
}

fn verdict_word(v: &Verdict) -> &'static str {
    match v {
        Verdict::Reconstructable { .. } => "reconstructable",
        Verdict::Infeasible { .. } => "infeasible",
        Verdict::Degenerate { .. } => "degenerate",
    }
}

fn pair_check(cameras: [usize; 2], c: &PairCoefficients) -> PairCheck {
    PairCheck {
        cameras,
        lemma: feasibility::ullman_pair_solvable(c).ok(),
        solver: feasibility::pair_has_solution(c),
    }
}

/// Runs one command.
pub fn run(config: &RunConfig) -> Result<Outcome> {
    match &config.command {
        Command::Generate { seed, dim, out, plot } => {
            let doc = scene_document(random_scene(*seed, *dim)?);
            write_svg(plot.as_ref(), || svg_for(&doc).expect("scenes plot"))?;
            emit(out.as_deref(), &doc.to_json())?;
            Ok(Outcome::Solved)
        }
        Command::Project { input, out, plot } => {
            let scene = Document::read(input)?;
            let doc = match &scene {
                Document::Scene2D(s) => Document::Image2D(project_2d(s)),
                Document::Scene3D(s) => Document::Image3D(project_3d(s)),
                other => return Err(Error::Schema(format!("expected a scene, got {}", other.kind()))),
            };
            write_svg(plot.as_ref(), || svg_for(&scene).expect("scenes plot"))?;
            emit(out.as_deref(), &doc.to_json())?;
            Ok(Outcome::Solved)
        }
        Command::Reconstruct { input, tol, out, plot } => {
            let doc = Document::read(input)?;
            let (outcome, result) = if let Some(data) = doc.image_2d() {
                let (o, set, why) = classify(invert_2d(&data, *tol))?;
                (o, Document::Candidates2D(reconstruction(o, set, why)))
            } else if let Some(data) = doc.image_3d() {
                let (o, set, why) = classify(reconstruct_3d(&data, *tol))?;
                (o, Document::Candidates3D(reconstruction(o, set, why)))
            } else {
                return Err(Error::Schema(format!("expected image data, got {}", doc.kind())));
            };
            write_svg(plot.as_ref(), || svg_for(&result).expect("candidates plot"))?;
            emit(out.as_deref(), &result.to_json())?;
            Ok(outcome)
        }
        Command::Check { input, tol, out } => {
            let doc = Document::read(input)?;
            let report = if let Some(data) = doc.image_2d() {
                let verdict = feasibility::classify_2d(&data, *tol)?;
                FeasibilityReport {
                    dim: 2,
                    summary: verdict_word(&verdict).into(),
                    verdict,
                    pairs: Vec::new(),
                }
            } else if let Some(data) = doc.image_3d() {
                let verdict = feasibility::classify_3d(&data, *tol)?.verdict;
                let pairs = [[1, 2], [1, 3], [2, 3]].map(|[i, j]| pair_check([i, j], &data.pair_coefficients(i, j)));
                FeasibilityReport {
                    dim: 3,
                    summary: verdict_word(&verdict).into(),
                    verdict,
                    pairs: pairs.to_vec(),
                }
            } else if let Document::UllmanPair(c) = &doc {
                let check = pair_check([0, 0], c);
                let solvable = check.lemma.unwrap_or(check.solver);
                let verdict = match solve_ullman_pair(c) {
                    Ok(s) => Verdict::Reconstructable { candidates: s.len() },
                    Err(e) => Verdict::Infeasible { reason: e.to_string() },
                };
                let summary = if solvable { "solvable" } else { "unsolvable" };
                FeasibilityReport {
                    dim: 3,
                    summary: summary.into(),
                    verdict,
                    pairs: vec![check],
                }
            } else {
                return Err(Error::Schema(format!(
                    "expected image data or a pair system, got {}",
                    doc.kind()
                )));
            };
            let outcome = match report.summary.as_str() {
                "solvable" => Outcome::Solved,
                "unsolvable" => Outcome::Infeasible,
                _ => verdict_outcome(&report.verdict),
            };
            emit(out.as_deref(), &Document::Feasibility(report).to_json())?;
            Ok(outcome)
        }
        Command::Dims {
            max_d,
            max_m,
            format,
            out,
        } => {
            if *max_d < 2 || *max_m < 2 {
                return Err(Error::InvalidArgument("--max-d and --max-m must be at least 2".into()));
            }
            let rows = feasibility::dimension_table(*max_d, *max_m);
            let text = match format {
                TableFormat::Text => feasibility::render_table_text(&rows),
                TableFormat::Csv => feasibility::render_table_csv(&rows),
                TableFormat::Json => Document::Dims(DimensionTable { rows }).to_json(),
            };
            emit(out.as_deref(), &text)?;
            Ok(Outcome::Solved)
        }
        Command::Plot { input, out } => {
            let doc = Document::read(input)?;
            emit(out.as_deref(), &svg_for(&doc)?)?;
            Ok(Outcome::Solved)
        }
    }
}

/// Parses `args`, runs the command and maps the result to an exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&config) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
