//! Which readings can be photographs of a real scene, and how many points a
//! given number of cameras needs.

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::reconstruct2d::invert_2d;
use crate::reconstruct3d::{reconstruct_3d, solve_ullman_pair};
use crate::scene::{ImageData2D, ImageData3D, PairCoefficients};
use crate::tol;

/// A closed subset of angles, stored as sorted disjoint arcs `[lo, hi]` in
/// `[-pi, pi]`. An arc crossing `pi` is split in two.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleInterval {
    pub arcs: Vec<[f64; 2]>,
    pub full: bool,
}

impl AngleInterval {
    pub fn full_circle() -> Self {
        AngleInterval {
            arcs: vec![[-PI, PI]],
            full: true,
        }
    }

    /// Arc `[lo, lo + len]` on the circle, normalized.
    pub fn arc(lo: f64, len: f64) -> Self {
        if len >= 2.0 * PI {
            return Self::full_circle();
        }
        let start = tol::wrap_angle(lo);
        let end = start + len;
        let arcs = if end > PI {
            vec![[-PI, end - 2.0 * PI], [start, PI]]
        } else {
            vec![[start, end]]
        };
        AngleInterval { arcs, full: false }
    }

    /// Connected components on the circle (an arc split at `pi` counts once).
    pub fn multiplicity(&self) -> usize {
        if self.full {
            return 1;
        }
        let n = self.arcs.len();
        let wraps = n > 1 && self.arcs[0][0] <= -PI && self.arcs[n - 1][1] >= PI;
        n - usize::from(wraps)
    }

    /// Total angular length.
    pub fn measure(&self) -> f64 {
        self.arcs.iter().map(|[a, b]| b - a).sum()
    }

    /// True when `angle` lies within `slack` of the set.
    pub fn contains(&self, angle: f64, slack: f64) -> bool {
        if self.full {
            return true;
        }
        let a = tol::wrap_angle(angle);
        self.arcs.iter().any(|&[lo, hi]| {
            (a >= lo - slack && a <= hi + slack)
                || tol::angle_diff(a, lo).abs() <= slack
                || tol::angle_diff(a, hi).abs() <= slack
        })
    }

    pub fn contains_interval(&self, other: &AngleInterval, slack: f64) -> bool {
        if self.full {
            return true;
        }
        if other.full {
            return false;
        }
        other
            .arcs
            .iter()
            .all(|&[lo, hi]| self.arcs.iter().any(|&[a, b]| lo >= a - slack && hi <= b + slack))
    }
}

const POLE_TOL: f64 = 1e-9;

/// The set `{ arg((e^{it} - A) / (e^{it} - B)) : t real }`.
///
/// Computed by sampling `t` on `samples` points, unwrapping the argument and
/// refining the extreme values by golden-section search. The image of the
/// circle is connected, so the result is a single arc, or the full circle when
/// the quotient winds around the origin (exactly one of `|A|`, `|B|` below 1).
pub fn angle_interval(a: Complex64, b: Complex64, samples: usize) -> Result<AngleInterval> {
    if samples < 360 {
        return Err(Error::InvalidArgument(format!(
            "need at least 360 samples, got {samples}"
        )));
    }
    if (a.norm() - 1.0).abs() <= POLE_TOL || (b.norm() - 1.0).abs() <= POLE_TOL {
        return Err(Error::PoleOnCircle);
    }
    let quotient_arg = |t: f64| {
        let z = Complex64::from_polar(1.0, t);
        ((z - a) / (z - b)).arg()
    };
    let step = 2.0 * PI / samples as f64;
    let mut unwrapped = Vec::with_capacity(samples + 1);
    let mut prev = quotient_arg(0.0);
    let mut acc = prev;
    unwrapped.push(acc);
    for k in 1..=samples {
        let cur = quotient_arg(k as f64 * step);
        acc += tol::angle_diff(cur, prev);
        prev = cur;
        unwrapped.push(acc);
    }
    let winding = ((unwrapped[samples] - unwrapped[0]) / (2.0 * PI)).round();
    if winding != 0.0 {
        return Ok(AngleInterval::full_circle());
    }
    let unwrapped = &unwrapped[..samples];
    let (kmin, _) = unwrapped.iter().enumerate().min_by(|x, y| x.1.total_cmp(y.1)).unwrap();
    let (kmax, _) = unwrapped.iter().enumerate().max_by(|x, y| x.1.total_cmp(y.1)).unwrap();
    let base = unwrapped[kmin];
    // offsets relative to the sampled minimum stay continuous near each extreme
    let rel = |t: f64| base + tol::angle_diff(quotient_arg(t), base);
    let lo = -golden_max(|t| -rel(t), (kmin as f64 - 1.0) * step, (kmin as f64 + 1.0) * step);
    let top = unwrapped[kmax];
    let rel_top = |t: f64| top + tol::angle_diff(quotient_arg(t), top);
    let hi = golden_max(rel_top, (kmax as f64 - 1.0) * step, (kmax as f64 + 1.0) * step);
    let lo = lo.min(base);
    let hi = hi.max(top);
    Ok(AngleInterval::arc(lo, hi - lo))
}

/// Maximum value of a unimodal `f` on `[a, b]`.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-10 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}

/// Samples used by [`ullman_pair_solvable`].
pub const LEMMA_SAMPLES: usize = 4096;

/// Angle-interval test for the pair system `a x + b y = c u + d v`,
/// `e x + f y = g u + h v` on two unit circles.
///
/// With `p = a + ib`, `q = c + id`, `r = e + if`, `s = g + ih`, the system is
/// solvable iff `arg(r/p)` or `arg(r/p) + pi` lies in `I(q/p, s/r)`.
pub fn ullman_pair_solvable(c: &PairCoefficients) -> Result<bool> {
    let p = Complex64::new(c.a, c.b);
    let q = Complex64::new(c.c, c.d);
    let r = Complex64::new(c.e, c.f);
    let s = Complex64::new(c.g, c.h);
    if p.norm() == 0.0 {
        return Err(Error::ZeroDenominator("a + ib"));
    }
    if r.norm() == 0.0 {
        return Err(Error::ZeroDenominator("e + if"));
    }
    let interval = angle_interval(q / p, s / r, LEMMA_SAMPLES)?;
    let phi = (r / p).arg();
    Ok(interval.contains(phi, 1e-9) || interval.contains(phi + PI, 1e-9))
}

/// Outcome of classifying one data set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Reconstructable { candidates: usize },
    Infeasible { reason: String },
    Degenerate { reason: String },
}

impl Verdict {
    fn from_result<T>(r: Result<T>, count: impl Fn(&T) -> usize) -> Result<Self> {
        match r {
            Ok(set) => Ok(Verdict::Reconstructable {
                candidates: count(&set),
            }),
            Err(Error::Infeasible(reason)) => Ok(Verdict::Infeasible { reason }),
            Err(Error::Degenerate(reason)) => Ok(Verdict::Degenerate { reason }),
            Err(e) => Err(e),
        }
    }

    pub fn is_reconstructable(&self) -> bool {
        matches!(self, Verdict::Reconstructable { .. })
    }
}

pub fn classify_2d(data: &ImageData2D, tol: f64) -> Result<Verdict> {
    Verdict::from_result(invert_2d(data, tol), |s| s.len())
}

/// Verdict for spatial data together with the lemma's answer for each of the
/// camera pairs (1,2), (1,3), (2,3).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report3D {
    pub verdict: Verdict,
    pub pairs_solvable: [Option<bool>; 3],
}

pub fn classify_3d(data: &ImageData3D, tol: f64) -> Result<Report3D> {
    let verdict = Verdict::from_result(reconstruct_3d(data, tol), |s| s.len())?;
    let pairs_solvable =
        [(1, 2), (1, 3), (2, 3)].map(|(i, j)| ullman_pair_solvable(&data.pair_coefficients(i, j)).ok());
    Ok(Report3D {
        verdict,
        pairs_solvable,
    })
}

/// Whether the pair solver finds any real solution; the reference the lemma
/// is checked against.
pub fn pair_has_solution(c: &PairCoefficients) -> bool {
    solve_ullman_pair(c).is_ok_and(|s| !s.is_empty())
}

/// Unknowns versus equations for `n` points and `m` cameras in dimension `d`.
///
/// Each camera has `f = d(d-1)/2 + (d-1)` parameters (a rotation and a
/// translation inside the image), each point `d` coordinates, and the gauge
/// group (rigid motions) removes `g = d + d(d-1)/2`. Every point gives `d - 1`
/// readings per camera.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionCount {
    pub d: u32,
    pub n: u32,
    pub m: u32,
    pub f: i64,
    pub g: i64,
    /// `n d + m f`
    pub lhs: i64,
    /// `(d-1) n m + g`
    pub rhs: i64,
    pub tight: bool,
}

impl DimensionCount {
    /// Enough readings to pin down the unknowns generically.
    pub fn determined(&self) -> bool {
        self.lhs <= self.rhs
    }
}

pub fn camera_parameters(d: u32) -> i64 {
    let d = i64::from(d);
    d * (d - 1) / 2 + (d - 1)
}

pub fn gauge_dimension(d: u32) -> i64 {
    let d = i64::from(d);
    d + d * (d - 1) / 2
}

pub fn sfm_inequality(d: u32, n: u32, m: u32) -> Result<DimensionCount> {
    if d < 2 || n < 1 || m < 1 {
        return Err(Error::InvalidArgument(format!(
            "need d >= 2, n >= 1, m >= 1; got d={d}, n={n}, m={m}"
        )));
    }
    let f = camera_parameters(d);
    let g = gauge_dimension(d);
    let (di, ni, mi) = (i64::from(d), i64::from(n), i64::from(m));
    let lhs = ni * di + mi * f;
    let rhs = (di - 1) * ni * mi + g;
    Ok(DimensionCount {
        d,
        n,
        m,
        f,
        g,
        lhs,
        rhs,
        tight: lhs == rhs,
    })
}

/// Point count balancing the dimension count: `n = (m f - g) / ((d-1) m - d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinPoints {
    /// Serialized as `"numer/denom"` (or `"n"` when integral).
    #[serde(with = "ratio_text")]
    pub exact: Ratio<i64>,
    pub ceiling: i64,
}

pub fn min_points(d: u32, m: u32) -> Result<MinPoints> {
    if d < 2 || m < 1 {
        return Err(Error::InvalidArgument(format!("need d >= 2, m >= 1; got d={d}, m={m}")));
    }
    let (di, mi) = (i64::from(d), i64::from(m));
    let den = (di - 1) * mi - di;
    if den == 0 {
        return Err(Error::NoFiniteAnswer { d, m });
    }
    let exact = Ratio::new(mi * camera_parameters(d) - gauge_dimension(d), den);
    Ok(MinPoints {
        exact,
        ceiling: exact.ceil().to_integer(),
    })
}

mod ratio_text {
    use num_rational::Ratio;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<i64>, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionRow {
    pub d: u32,
    pub m: u32,
    /// `None` where no finite count exists.
    pub n: Option<MinPoints>,
}

pub fn dimension_table(max_d: u32, max_m: u32) -> Vec<DimensionRow> {
    let mut rows = Vec::new();
    for d in 2..=max_d {
        for m in 2..=max_m {
            rows.push(DimensionRow {
                d,
                m,
                n: min_points(d, m).ok(),
            });
        }
    }
    rows
}

/// Aligned table: one row per dimension, one column per camera count.
pub fn render_table_text(rows: &[DimensionRow]) -> String {
    let mut ds: Vec<u32> = rows.iter().map(|r| r.d).collect();
    ds.dedup();
    let mut ms: Vec<u32> = rows.iter().map(|r| r.m).collect();
    ms.sort_unstable();
    ms.dedup();
    let mut out = format!("{:<5}", "dim");
    for m in &ms {
        out.push_str(&format!("{:>6}", format!("m={m}")));
    }
    out.push('\n');
    for d in ds {
        out.push_str(&format!("{d:<5}"));
        for m in &ms {
            let cell = rows
                .iter()
                .find(|r| r.d == d && r.m == *m)
                .and_then(|r| r.n)
                .map_or_else(|| "-".to_string(), |n| n.ceiling.to_string());
            out.push_str(&format!("{cell:>6}"));
        }
        out.push('\n');
    }
    out
}

pub fn render_table_csv(rows: &[DimensionRow]) -> String {
    let mut out = String::from("d,m,n_exact,n\n");
    for r in rows {
        match r.n {
            Some(n) => out.push_str(&format!("{},{},{},{}\n", r.d, r.m, n.exact, n.ceiling)),
            None => out.push_str(&format!("{},{},-,-\n", r.d, r.m)),
        }
    }
    out
}
