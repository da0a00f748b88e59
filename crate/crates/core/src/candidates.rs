use serde::{Deserialize, Serialize};

use crate::scene::{Scene2D, Scene3D};

/// One reconstruction together with its max-abs reprojection residual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate<S> {
    pub scene: S,
    pub residual: f64,
}

/// Reconstructions of one data set, sorted by residual.
///
/// `ambiguity_note` lists index pairs `[i, j]` (`i < j`) whose scenes are
/// mirror images of each other under the global reflection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSet<S> {
    pub candidates: Vec<Candidate<S>>,
    pub ambiguity_note: Vec<[usize; 2]>,
}

/// Scenes that can be compared and mirrored.
pub trait Reflect: Sized {
    fn mirror(&self) -> Self;
    fn distance(&self, other: &Self) -> f64;
    /// Flat parameter vector used for deterministic tie-breaking.
    fn sort_key(&self) -> Vec<f64>;
}

impl Reflect for Scene2D {
    fn mirror(&self) -> Self {
        Scene2D::mirror(self)
    }
    fn distance(&self, other: &Self) -> f64 {
        Scene2D::distance(self, other)
    }
    fn sort_key(&self) -> Vec<f64> {
        vec![self.p, self.q, self.alpha, self.beta]
    }
}

impl Reflect for Scene3D {
    fn mirror(&self) -> Self {
        Scene3D::mirror(self)
    }
    fn distance(&self, other: &Self) -> f64 {
        Scene3D::distance(self, other)
    }
    fn sort_key(&self) -> Vec<f64> {
        let mut k = vec![self.p2[2], self.p3[2]];
        k.extend(self.cam2.p_vec.iter().chain(self.cam2.q_vec.iter()));
        k.extend(self.cam3.p_vec.iter().chain(self.cam3.q_vec.iter()));
        k
    }
}

impl<S: Reflect> CandidateSet<S> {
    pub fn empty() -> Self {
        CandidateSet {
            candidates: Vec::new(),
            ambiguity_note: Vec::new(),
        }
    }

    /// Keeps candidates with `residual <= accept`, merges duplicates closer than
    /// `same`, sorts by residual (ties broken on parameters) and records
    /// mirror pairs.
    pub fn assemble(raw: Vec<Candidate<S>>, accept: f64, same: f64) -> Self {
        let mut raw: Vec<_> = raw.into_iter().filter(|c| c.residual <= accept).collect();
        raw.sort_by(|x, y| {
            x.residual
                .total_cmp(&y.residual)
                .then_with(|| cmp_keys(&x.scene.sort_key(), &y.scene.sort_key()))
        });
        let mut kept: Vec<Candidate<S>> = Vec::new();
        for c in raw {
            if kept.iter().all(|k| k.scene.distance(&c.scene) > same) {
                kept.push(c);
            }
        }
        let mut pairs = Vec::new();
        for (i, first) in kept.iter().enumerate() {
            let m = first.scene.mirror();
            for (j, other) in kept.iter().enumerate().skip(i + 1) {
                if m.distance(&other.scene) <= same {
                    pairs.push([i, j]);
                }
            }
        }
        CandidateSet {
            candidates: kept,
            ambiguity_note: pairs,
        }
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Candidate<S>> {
        self.candidates.iter()
    }

    /// Smallest distance from `scene` to any candidate.
    pub fn nearest(&self, scene: &S) -> Option<f64> {
        self.candidates
            .iter()
            .map(|c| c.scene.distance(scene))
            .min_by(f64::total_cmp)
    }

    pub fn contains(&self, scene: &S, tol: f64) -> bool {
        self.nearest(scene).is_some_and(|d| d <= tol)
    }

    /// True when every candidate's mirror is also a candidate.
    pub fn closed_under_reflection(&self, tol: f64) -> bool {
        self.candidates.iter().all(|c| self.contains(&c.scene.mirror(), tol))
    }
}

fn cmp_keys(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assemble_filters_sorts_and_pairs() {
        let s = Scene2D::new(1.0, 0.5, -1.0, 0.25, 0.7, -1.2);
        let raw = vec![
            Candidate {
                scene: s.mirror(),
                residual: 2e-12,
            },
            Candidate {
                scene: s,
                residual: 1e-12,
            },
            Candidate {
                scene: s,
                residual: 3e-12,
            },
            Candidate {
                scene: Scene2D::new(1.0, 9.0, -1.0, 9.0, 0.1, 0.2),
                residual: 1.0,
            },
        ];
        let set = CandidateSet::assemble(raw, 1e-9, 1e-9);
        assert_eq!(set.len(), 2);
        assert_eq!(set.candidates[0].scene, s);
        assert_eq!(set.ambiguity_note, vec![[0, 1]]);
        assert!(set.closed_under_reflection(1e-12));
    }
}
