//! The sum-zero plane `V` in `R^3` and its isometric planar coordinates.

use crate::error::TentError;
use serde::{Deserialize, Serialize};

/// Relative tolerance accepted when validating the sum-zero constraint.
pub const SUM_ZERO_TOL: f64 = 1e-12;

/// One of the three coordinate directions of `R^3`, used to index the
/// transversality cone and the frequency coordinate of embeddings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Axis {
    E1,
    E2,
    E3,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::E1, Axis::E2, Axis::E3];

    /// Zero-based coordinate index.
    pub fn index(self) -> usize {
        match self {
            Axis::E1 => 0,
            Axis::E2 => 1,
            Axis::E3 => 2,
        }
    }

    pub fn from_index(i: usize) -> Result<Self, TentError> {
        match i {
            0 => Ok(Axis::E1),
            1 => Ok(Axis::E2),
            2 => Ok(Axis::E3),
            _ => Err(TentError::domain(format!("axis index {i} out of range"))),
        }
    }
}

impl TryFrom<u8> for Axis {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, String> {
        match v {
            1 => Ok(Axis::E1),
            2 => Ok(Axis::E2),
            3 => Ok(Axis::E3),
            _ => Err(format!("axis must be 1, 2, or 3, got {v}")),
        }
    }
}

impl From<Axis> for u8 {
    fn from(a: Axis) -> u8 {
        a.index() as u8 + 1
    }
}

/// A point of the plane `V = {x in R^3 : x_1 + x_2 + x_3 = 0}`.
///
/// Stored as the full `R^3` triple; the constructor enforces the sum-zero
/// constraint up to [`SUM_ZERO_TOL`] relative to the magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct PlaneVector {
    coords: [f64; 3],
}

impl PlaneVector {
    pub const ZERO: PlaneVector = PlaneVector { coords: [0.0; 3] };

    /// Builds a plane vector, verifying the sum-zero constraint.
    pub fn new(coords: [f64; 3]) -> Result<Self, TentError> {
        let sum = coords[0] + coords[1] + coords[2];
        let mag = coords.iter().map(|c| c.abs()).fold(0.0, f64::max).max(1.0);
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(TentError::domain("plane vector has non-finite coordinate"));
        }
        if sum.abs() > SUM_ZERO_TOL * mag {
            return Err(TentError::domain(format!(
                "coordinates sum to {sum:e}, not zero (tolerance {SUM_ZERO_TOL:e} relative)"
            )));
        }
        // Re-center exactly so downstream arithmetic never accumulates the slack.
        let m = sum / 3.0;
        Ok(PlaneVector {
            coords: [coords[0] - m, coords[1] - m, coords[2] - m],
        })
    }

    /// Coordinates in `R^3`.
    pub fn coords(self) -> [f64; 3] {
        self.coords
    }

    /// The `j`-th coordinate, which equals the inner product with `e_j`.
    pub fn coord(self, j: Axis) -> f64 {
        self.coords[j.index()]
    }

    /// Euclidean norm.
    pub fn norm(self) -> f64 {
        let [a, b, c] = self.coords;
        (a * a + b * b + c * c).sqrt()
    }

    pub fn dot(self, other: PlaneVector) -> f64 {
        self.coords[0] * other.coords[0]
            + self.coords[1] * other.coords[1]
            + self.coords[2] * other.coords[2]
    }

    pub fn sub(self, other: PlaneVector) -> PlaneVector {
        PlaneVector {
            coords: [
                self.coords[0] - other.coords[0],
                self.coords[1] - other.coords[1],
                self.coords[2] - other.coords[2],
            ],
        }
    }

    pub fn add(self, other: PlaneVector) -> PlaneVector {
        PlaneVector {
            coords: [
                self.coords[0] + other.coords[0],
                self.coords[1] + other.coords[1],
                self.coords[2] + other.coords[2],
            ],
        }
    }

    pub fn scale(self, t: f64) -> PlaneVector {
        PlaneVector {
            coords: [self.coords[0] * t, self.coords[1] * t, self.coords[2] * t],
        }
    }

    /// Distance to another plane point.
    pub fn dist(self, other: PlaneVector) -> f64 {
        self.sub(other).norm()
    }

    /// Planar coordinates with respect to the standard basis of `V`.
    pub fn to_uv(self) -> [f64; 2] {
        PlaneBasis::standard().to_uv(self)
    }

    /// Inverse of [`PlaneVector::to_uv`].
    pub fn from_uv(uv: [f64; 2]) -> PlaneVector {
        PlaneBasis::standard().from_uv(uv)
    }
}

impl TryFrom<[f64; 3]> for PlaneVector {
    type Error = String;
    fn try_from(c: [f64; 3]) -> Result<Self, String> {
        PlaneVector::new(c).map_err(|e| e.to_string())
    }
}

impl From<PlaneVector> for [f64; 3] {
    fn from(v: PlaneVector) -> [f64; 3] {
        v.coords
    }
}

/// Orthonormal basis of `V`:
/// `u1 = (1,-1,0)/sqrt(2)` and `u2 = (1,1,-2)/sqrt(6)`.
///
/// The induced coordinates are isometric, so planar Lebesgue measure in
/// `(u, v)` equals two dimensional Hausdorff measure on `V`.
#[derive(Debug, Clone, Copy)]
pub struct PlaneBasis {
    u1: [f64; 3],
    u2: [f64; 3],
}

impl PlaneBasis {
    pub fn standard() -> Self {
        let s2 = std::f64::consts::SQRT_2;
        let s6 = 6.0_f64.sqrt();
        PlaneBasis {
            u1: [1.0 / s2, -1.0 / s2, 0.0],
            u2: [1.0 / s6, 1.0 / s6, -2.0 / s6],
        }
    }

    pub fn u1(&self) -> PlaneVector {
        PlaneVector { coords: self.u1 }
    }

    pub fn u2(&self) -> PlaneVector {
        PlaneVector { coords: self.u2 }
    }

    pub fn to_uv(&self, x: PlaneVector) -> [f64; 2] {
        let c = x.coords();
        [
            c[0] * self.u1[0] + c[1] * self.u1[1] + c[2] * self.u1[2],
            c[0] * self.u2[0] + c[1] * self.u2[1] + c[2] * self.u2[2],
        ]
    }

    pub fn from_uv(&self, uv: [f64; 2]) -> PlaneVector {
        PlaneVector {
            coords: [
                uv[0] * self.u1[0] + uv[1] * self.u2[0],
                uv[0] * self.u1[1] + uv[1] * self.u2[1],
                uv[0] * self.u1[2] + uv[1] * self.u2[2],
            ],
        }
    }
}

/// Orthogonal projection of an arbitrary `R^3` vector onto `V`.
///
/// Subtracts the mean from every coordinate. The projection of a coordinate
/// direction has norm `sqrt(6)/3`, which is why that factor appears in the
/// transversality cone aperture.
pub fn project_to_plane(x: [f64; 3]) -> PlaneVector {
    let m = (x[0] + x[1] + x[2]) / 3.0;
    PlaneVector {
        coords: [x[0] - m, x[1] - m, x[2] - m],
    }
}
