//! JSON documents exchanged by the command-line tool.
//!
//! Every document carries a `schema` field naming its kind and version, e.g.
//! `{"schema": "image2d/1", "u": 1.0, ...}`. Field names match the Rust types.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::candidates::{Candidate, CandidateSet};
use crate::error::{Error, Result};
use crate::feasibility::{DimensionRow, Verdict};
use crate::scene::{ImageData2D, ImageData3D, PairCoefficients, Scene2D, Scene3D};

/// Readings of three planar cameras in general position: `readings[i][j]` is
/// the coordinate of point `i` along camera `j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawImage2D {
    pub readings: [[f64; 3]; 3],
}

/// Readings of three spatial cameras in general position: `readings[i][j]` is
/// the `(along p, along q)` image of point `i` in camera `j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawImage3D {
    pub readings: [[[f64; 2]; 3]; 3],
}

impl RawImage2D {
    /// Moves point 1 to the origin; camera 1 becomes the reference axis.
    pub fn normalize(&self) -> ImageData2D {
        let r = &self.readings;
        let rel = |i: usize, j: usize| r[i][j] - r[0][j];
        ImageData2D {
            u: rel(1, 0),
            v: rel(2, 0),
            a: rel(1, 1),
            b: rel(2, 1),
            c: rel(1, 2),
            d: rel(2, 2),
        }
    }
}

impl RawImage3D {
    pub fn normalize(&self) -> ImageData3D {
        let r = &self.readings;
        let rel = |i: usize, j: usize, k: usize| r[i][j][k] - r[0][j][k];
        let mut out = ImageData3D {
            xy: [[0.0; 2]; 2],
            a: [[0.0; 2]; 2],
            b: [[0.0; 2]; 2],
        };
        for i in 0..2 {
            out.xy[i] = [rel(i + 1, 0, 0), rel(i + 1, 0, 1)];
            for j in 0..2 {
                out.b[i][j] = rel(i + 1, j + 1, 0);
                out.a[i][j] = rel(i + 1, j + 1, 1);
            }
        }
        out
    }
}

/// Outcome of a reconstruction as written to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reconstruction<S> {
    /// `solved`, `infeasible` or `degenerate`.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub candidates: Vec<Candidate<S>>,
    #[serde(default)]
    pub ambiguity_note: Vec<[usize; 2]>,
}

impl<S> Reconstruction<S> {
    pub fn solved(set: CandidateSet<S>) -> Self {
        Reconstruction {
            status: "solved".into(),
            reason: None,
            candidates: set.candidates,
            ambiguity_note: set.ambiguity_note,
        }
    }

    pub fn failed(status: &str, reason: String) -> Self {
        Reconstruction {
            status: status.into(),
            reason: Some(reason),
            candidates: Vec::new(),
            ambiguity_note: Vec::new(),
        }
    }
}

/// Per-pair answer of the angle-interval test next to the solver's answer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairCheck {
    pub cameras: [usize; 2],
    /// `None` when the test is undefined (pole on the circle, zero denominator).
    pub lemma: Option<bool>,
    pub solver: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub dim: u8,
    /// One word: `reconstructable`, `infeasible`, `degenerate`, `solvable` or
    /// `unsolvable`.
    pub summary: String,
    pub verdict: Verdict,
    #[serde(default)]
    pub pairs: Vec<PairCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionTable {
    pub rows: Vec<DimensionRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "schema")]
pub enum Document {
    #[serde(rename = "scene2d/1")]
    Scene2D(Scene2D),
    #[serde(rename = "scene3d/1")]
    Scene3D(Scene3D),
    #[serde(rename = "image2d/1")]
    Image2D(ImageData2D),
    #[serde(rename = "image3d/1")]
    Image3D(ImageData3D),
    #[serde(rename = "image2d-raw/1")]
    RawImage2D(RawImage2D),
    #[serde(rename = "image3d-raw/1")]
    RawImage3D(RawImage3D),
    #[serde(rename = "ullman-pair/1")]
    UllmanPair(PairCoefficients),
    #[serde(rename = "candidates2d/1")]
    Candidates2D(Reconstruction<Scene2D>),
    #[serde(rename = "candidates3d/1")]
    Candidates3D(Reconstruction<Scene3D>),
    #[serde(rename = "feasibility/1")]
    Feasibility(FeasibilityReport),
    #[serde(rename = "dims/1")]
    Dims(DimensionTable),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Scene2D(_) => "scene2d/1",
            Document::Scene3D(_) => "scene3d/1",
            Document::Image2D(_) => "image2d/1",
            Document::Image3D(_) => "image3d/1",
            Document::RawImage2D(_) => "image2d-raw/1",
            Document::RawImage3D(_) => "image3d-raw/1",
            Document::UllmanPair(_) => "ullman-pair/1",
            Document::Candidates2D(_) => "candidates2d/1",
            Document::Candidates3D(_) => "candidates3d/1",
            Document::Feasibility(_) => "feasibility/1",
            Document::Dims(_) => "dims/1",
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    /// Planar image data, normalizing general-pose readings.
    pub fn image_2d(&self) -> Option<ImageData2D> {
        match self {
            Document::Image2D(d) => Some(*d),
            Document::RawImage2D(r) => Some(r.normalize()),
            _ => None,
        }
    }

    /// Spatial image data, normalizing general-pose readings.
    pub fn image_3d(&self) -> Option<ImageData3D> {
        match self {
            Document::Image3D(d) => Some(*d),
            Document::RawImage3D(r) => Some(r.normalize()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::{project_2d, project_3d};
    use crate::scene::{frame_from_angles, EulerFrame};

    #[test]
    fn documents_roundtrip() {
        let s2 = Scene2D::new(1.0, 0.5, -0.3, 0.8, 0.4, -1.0);
        let s3 = Scene3D::new(
            [0.1, 0.2, 0.3],
            [0.4, -0.5, 0.6],
            frame_from_angles(0.1, 0.2, 0.3),
            EulerFrame::identity(),
        );
        let docs = [
            Document::Scene2D(s2),
            Document::Scene3D(s3),
            Document::Image2D(project_2d(&s2)),
            Document::Image3D(project_3d(&s3)),
            Document::UllmanPair(PairCoefficients::new([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0])),
            Document::Candidates2D(Reconstruction::failed("infeasible", "why".into())),
        ];
        for d in docs {
            let text = d.to_json();
            assert!(text.contains(&format!("\"schema\": \"{}\"", d.kind())));
            let back = Document::from_json(&text).unwrap();
            match (&d, &back) {
                (Document::Scene3D(a), Document::Scene3D(b)) => assert!(a.distance(b) < 1e-15),
                _ => assert_eq!(d, back, "{text}"),
            }
        }
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(
            Document::from_json("{\"schema\": \"nope\"}"),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            Document::from_json("{\"schema\": \"image2d/1\", \"u\": 1}"),
            Err(Error::Schema(_))
        ));
        assert!(matches!(Document::from_json("[1,2]"), Err(Error::Schema(_))));
    }

    #[test]
    fn field_names_are_stable() {
        let text = Document::Image2D(ImageData2D {
            u: 1.0,
            v: 5.0,
            a: 0.0,
            b: 1.0,
            c: 1.0,
            d: 0.0,
        })
        .to_json();
        for key in ["\"u\"", "\"v\"", "\"a\"", "\"b\"", "\"c\"", "\"d\""] {
            assert!(text.contains(key));
        }
        let text = Document::Scene3D(Scene3D::new(
            [0.0; 3],
            [0.0; 3],
            EulerFrame::identity(),
            EulerFrame::identity(),
        ))
        .to_json();
        for key in ["\"P2\"", "\"P3\"", "\"cam2\"", "\"theta\"", "\"p_vec\""] {
            assert!(text.contains(key));
        }
    }

    #[test]
    fn raw_readings_are_translated() {
        let s = Scene2D::new(1.0, 0.5, -0.3, 0.8, 0.4, -1.0);
        let d = project_2d(&s);
        let shift = [0.7, -2.0, 3.5];
        let raw = RawImage2D {
            readings: [
                shift,
                [d.u + shift[0], d.a + shift[1], d.c + shift[2]],
                [d.v + shift[0], d.b + shift[1], d.d + shift[2]],
            ],
        };
        let n = raw.normalize();
        assert!((n.u - d.u).abs() < 1e-12 && (n.b - d.b).abs() < 1e-12 && (n.c - d.c).abs() < 1e-12);
    }
}
