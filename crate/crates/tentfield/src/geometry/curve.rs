//! Sampled singular curves transverse to a coordinate direction.
//!
//! A curve is a finite ordered list of plane samples, all pairwise inside the
//! open double cone around the projected coordinate direction `P_V e_j`:
//!
//! ```text
//! |<gamma - gamma', e_j>| > (sqrt(6)/3) cos(theta0) |gamma - gamma'|
//! ```
//!
//! Since the cone half is convex, every pair of points on the induced
//! polyline satisfies the same strict inequality, and the `j`-th coordinate
//! is strictly monotone along the curve. Samples are stored with increasing
//! `j`-th coordinate (input in the reverse orientation is flipped).

use super::plane::{Axis, PlaneVector};
use crate::error::TentError;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Validation slack: a pair within this relative margin of cone equality is
/// rejected as degenerate rather than accepted.
pub const CONE_SLACK: f64 = 1e-12;

/// How the sample list is turned into a point set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveMode {
    /// The curve is the polyline through consecutive samples.
    Polyline,
    /// The curve is the bare sample set.
    PointCloud,
}

/// Result of a nearest-point query.
#[derive(Debug, Clone, Copy)]
pub struct NearestPoint {
    pub point: PlaneVector,
    /// Index of the segment (polyline) or sample (point cloud) attaining it.
    pub index: usize,
    /// Segment parameter in `[0, 1]`; always `0` in point-cloud mode.
    pub t: f64,
}

/// A sampled Lipschitz curve in the plane, uniformly transverse to `e_j`.
#[derive(Debug, Clone)]
pub struct SingularCurve {
    samples: Vec<PlaneVector>,
    cone_index: Axis,
    theta0: f64,
    mode: CurveMode,
    /// cos(theta0) * sqrt(6)/3, cached for the pair predicate.
    aperture: f64,
}

impl SingularCurve {
    /// Validates and builds a curve. The strict cone condition is checked on
    /// every sample pair; the first violating pair is reported.
    pub fn new(
        samples: Vec<PlaneVector>,
        cone_index: Axis,
        theta0: f64,
        mode: CurveMode,
    ) -> Result<Self, TentError> {
        use std::f64::consts::PI;
        if !(0.0..PI / 6.0).contains(&theta0) {
            return Err(TentError::domain(format!(
                "theta0 must lie in [0, pi/6), got {theta0}"
            )));
        }
        if samples.is_empty() {
            return Err(TentError::Curve("curve needs at least one sample".into()));
        }
        let aperture = (6.0_f64.sqrt() / 3.0) * theta0.cos();
        let j = cone_index;
        for i in 0..samples.len() {
            for k in (i + 1)..samples.len() {
                let d = samples[k].sub(samples[i]);
                let n = d.norm();
                if n == 0.0 {
                    return Err(TentError::CurvePair {
                        reason: "duplicate samples".into(),
                        i,
                        k,
                    });
                }
                // Strict inequality with rejection of near-equality slack.
                if d.coord(j).abs() - aperture * n <= CONE_SLACK * n {
                    return Err(TentError::CurvePair {
                        reason: format!(
                            "cone condition violated: |dj|/|d| = {:.17} vs aperture {:.17}",
                            d.coord(j).abs() / n,
                            aperture
                        ),
                        i,
                        k,
                    });
                }
            }
        }
        let mut samples = samples;
        if samples.len() >= 2 && samples[1].coord(j) < samples[0].coord(j) {
            samples.reverse();
        }
        // Monotonicity follows from the pairwise condition once oriented, but
        // an unordered input list would silently reorder geometry, so check.
        for w in samples.windows(2) {
            if w[1].coord(j) <= w[0].coord(j) {
                return Err(TentError::Curve(
                    "samples are not ordered along the curve (j-th coordinate not monotone)"
                        .into(),
                ));
            }
        }
        Ok(SingularCurve {
            samples,
            cone_index,
            theta0,
            mode,
            aperture,
        })
    }

    pub fn samples(&self) -> &[PlaneVector] {
        &self.samples
    }

    pub fn cone_index(&self) -> Axis {
        self.cone_index
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn mode(&self) -> CurveMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Range of the `j`-th coordinate over the curve.
    pub fn j_range(&self) -> (f64, f64) {
        let j = self.cone_index;
        (
            self.samples.first().unwrap().coord(j),
            self.samples.last().unwrap().coord(j),
        )
    }

    /// Distance from `beta` to the curve together with the nearest point.
    /// Ties are broken by the smallest `j`-th coordinate of the nearest point.
    pub fn distance(&self, beta: PlaneVector) -> (f64, NearestPoint) {
        let j = self.cone_index;
        let mut best = f64::INFINITY;
        let mut best_np = NearestPoint {
            point: self.samples[0],
            index: 0,
            t: 0.0,
        };
        let mut consider = |d: f64, np: NearestPoint| {
            if d < best || (d == best && np.point.coord(j) < best_np.point.coord(j)) {
                best = d;
                best_np = np;
            }
        };
        match self.mode {
            CurveMode::PointCloud => {
                for (i, &p) in self.samples.iter().enumerate() {
                    consider(beta.dist(p), NearestPoint { point: p, index: i, t: 0.0 });
                }
            }
            CurveMode::Polyline => {
                if self.samples.len() == 1 {
                    let p = self.samples[0];
                    consider(beta.dist(p), NearestPoint { point: p, index: 0, t: 0.0 });
                }
                for i in 0..self.samples.len().saturating_sub(1) {
                    let a = self.samples[i];
                    let b = self.samples[i + 1];
                    let d = b.sub(a);
                    let len2 = d.dot(d);
                    let t = if len2 > 0.0 {
                        (beta.sub(a).dot(d) / len2).clamp(0.0, 1.0)
                    } else {
                        0.0
                    };
                    let p = a.add(d.scale(t));
                    consider(beta.dist(p), NearestPoint { point: p, index: i, t });
                }
            }
        }
        (best, best_np)
    }

    /// Shorthand for the distance alone.
    pub fn dist(&self, beta: PlaneVector) -> f64 {
        self.distance(beta).0
    }

    /// Point on the curve at a given `j`-th coordinate, if the coordinate is
    /// inside the curve's range. Polyline mode interpolates; point-cloud mode
    /// returns the sample with that coordinate when one exists.
    pub fn point_at_j(&self, xj: f64) -> Option<PlaneVector> {
        let j = self.cone_index;
        let (lo, hi) = self.j_range();
        if xj < lo || xj > hi {
            return None;
        }
        match self.mode {
            CurveMode::PointCloud => self
                .samples
                .iter()
                .find(|p| p.coord(j) == xj)
                .copied(),
            CurveMode::Polyline => {
                let idx = self
                    .samples
                    .partition_point(|p| p.coord(j) < xj)
                    .min(self.samples.len() - 1);
                if self.samples[idx].coord(j) == xj || self.samples.len() == 1 {
                    return Some(self.samples[idx]);
                }
                let i = idx - 1;
                let a = self.samples[i];
                let b = self.samples[idx];
                let t = (xj - a.coord(j)) / (b.coord(j) - a.coord(j));
                Some(a.add(b.sub(a).scale(t)))
            }
        }
    }

    /// Extreme points of the curve intersected with the slab
    /// `{x : lo <= x_j <= hi}`, returned as `(gamma_minus, gamma_plus)` with
    /// the smaller and larger `j`-th coordinate.
    ///
    /// Polyline mode uses the endpoints of the intersection arc; point-cloud
    /// mode uses the extreme samples inside the slab. Returns `None` when the
    /// intersection is empty.
    pub fn strip_endpoints(&self, lo: f64, hi: f64) -> Option<(PlaneVector, PlaneVector)> {
        if lo > hi {
            return None;
        }
        let (jmin, jmax) = self.j_range();
        if hi < jmin || lo > jmax {
            return None;
        }
        match self.mode {
            CurveMode::PointCloud => {
                let idx = self.sample_indices_in_range(lo, hi);
                if idx.is_empty() {
                    return None;
                }
                // Samples are sorted by increasing j.
                Some((self.samples[idx[0]], self.samples[*idx.last().unwrap()]))
            }
            CurveMode::Polyline => {
                let a = self.point_at_j(lo.max(jmin))?;
                let b = self.point_at_j(hi.min(jmax))?;
                Some((a, b))
            }
        }
    }

    /// Indices of samples whose `j`-th coordinate lies in `[lo, hi]`.
    pub fn sample_indices_in_range(&self, lo: f64, hi: f64) -> Vec<usize> {
        let j = self.cone_index;
        let start = self.samples.partition_point(|p| p.coord(j) < lo);
        let end = self.samples.partition_point(|p| p.coord(j) <= hi);
        (start..end).collect()
    }

    /// Generates a random curve satisfying the strict cone condition with
    /// margin: each increment stays within `0.9 theta0` of the projected axis
    /// direction, so every sample pair is strictly transverse.
    pub fn random_transverse(
        rng: &mut impl Rng,
        cone_index: Axis,
        theta0: f64,
        n_samples: usize,
        origin: PlaneVector,
        step_scale: f64,
        mode: CurveMode,
    ) -> Result<Self, TentError> {
        if theta0 <= 0.0 {
            return Err(TentError::domain(
                "random curves need theta0 > 0 (the open cone is empty at 0)",
            ));
        }
        let axis_dir = {
            let mut e = [0.0; 3];
            e[cone_index.index()] = 1.0;
            super::plane::project_to_plane(e)
        };
        let axis_unit = axis_dir.scale(1.0 / axis_dir.norm());
        // Orthogonal unit direction in the plane.
        let uv = axis_unit.to_uv();
        let perp = PlaneVector::from_uv([-uv[1], uv[0]]);
        let mut samples = Vec::with_capacity(n_samples);
        let mut p = origin;
        samples.push(p);
        for _ in 1..n_samples {
            let ang = rng.gen_range(-0.9 * theta0..0.9 * theta0);
            let len = step_scale * rng.gen_range(0.5..1.5);
            let dir = axis_unit.scale(ang.cos()).add(perp.scale(ang.sin()));
            p = p.add(dir.scale(len));
            samples.push(p);
        }
        SingularCurve::new(samples, cone_index, theta0, mode)
    }
}

/// Serialized form of a curve file. Points are either full `R^3` triples or
/// planar `(u, v)` pairs when `basis` is `"uv"`.
#[derive(Debug, Serialize, Deserialize)]
pub struct CurveFile {
    pub cone_index: u8,
    pub theta0: f64,
    #[serde(default)]
    pub basis: Option<String>,
    #[serde(default)]
    pub mode: Option<CurveMode>,
    pub points: Vec<Vec<f64>>,
}

impl SingularCurve {
    /// Parses a curve from its JSON representation, validating geometry.
    pub fn from_json_str(text: &str) -> Result<Self, TentError> {
        let file: CurveFile = serde_json::from_str(text)?;
        let axis = Axis::from_index((file.cone_index as usize).wrapping_sub(1))
            .map_err(|_| TentError::invalid(format!("cone_index must be 1..3, got {}", file.cone_index)))?;
        let uv_basis = match file.basis.as_deref() {
            None | Some("xyz") => false,
            Some("uv") => true,
            Some(other) => {
                return Err(TentError::invalid(format!(
                    "unknown basis {other:?}, expected \"uv\" or \"xyz\""
                )))
            }
        };
        let mut samples = Vec::with_capacity(file.points.len());
        for (i, p) in file.points.iter().enumerate() {
            let v = if uv_basis {
                if p.len() != 2 {
                    return Err(TentError::invalid(format!(
                        "point {i} has {} coordinates, expected 2 in uv basis",
                        p.len()
                    )));
                }
                PlaneVector::from_uv([p[0], p[1]])
            } else {
                if p.len() != 3 {
                    return Err(TentError::invalid(format!(
                        "point {i} has {} coordinates, expected 3",
                        p.len()
                    )));
                }
                PlaneVector::new([p[0], p[1], p[2]])
                    .map_err(|e| TentError::invalid(format!("point {i}: {e}")))?
            };
            samples.push(v);
        }
        SingularCurve::new(
            samples,
            axis,
            file.theta0,
            file.mode.unwrap_or(CurveMode::Polyline),
        )
    }

    /// Serializes the curve to the JSON file format (full triples).
    pub fn to_json_string(&self) -> Result<String, TentError> {
        let file = CurveFile {
            cone_index: self.cone_index.index() as u8 + 1,
            theta0: self.theta0,
            basis: None,
            mode: Some(self.mode),
            points: self
                .samples
                .iter()
                .map(|p| p.coords().to_vec())
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }
}
