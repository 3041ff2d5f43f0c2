//! Multiplier specifications: closed-form built-ins, sampled grids, and the
//! wrappers that scale or translate an existing symbol.
//!
//! A multiplier is a complex-valued function on the plane V. The built-in
//! family covers the structural examples: constants, the sign symbol
//! sgn(xi_1 - xi_2) of the bilinear Hilbert transform, difference symbols
//! mtilde(xi_1 - xi_2) composed from a 1-D profile, and point-singular
//! symbols e^{i k angle} that are smooth and homogeneous of degree zero away
//! from one point. Sampled grids carry arbitrary symbols by bilinear
//! interpolation between cell centers.
//!
//! Symbols singular on a null line take the value 0 there by convention; the
//! line carries no measure, so any finite value is equivalent under
//! quadrature.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bumps::VGrid;
use crate::error::TentError;
use crate::geometry::{Axis, PlaneVector};

/// One-dimensional profile for difference symbols t -> mtilde(t).
#[derive(Debug, Clone, PartialEq)]
pub enum Profile1D {
    /// sgn(t), with 0 at t = 0.
    Sign,
    /// e^{i tau log|t|}: unimodular off zero, oscillating without limit.
    LogPhase { tau: f64 },
}

impl Profile1D {
    pub fn eval(&self, t: f64) -> Complex64 {
        if t == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        match self {
            Profile1D::Sign => Complex64::new(t.signum(), 0.0),
            Profile1D::LogPhase { tau } => Complex64::from_polar(1.0, tau * t.abs().ln()),
        }
    }
}

/// Declared regularity of a symbol, carried as metadata for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Smoothness {
    SmoothEverywhere,
    SingularLine,
    SingularPoint,
    Sampled,
}

/// Symbol sampled on a plane grid, interpolated bilinearly between cell
/// centers. Points outside the convex hull of the centers are a domain
/// error rather than an extrapolation.
#[derive(Debug, Clone)]
pub struct SampledMultiplier {
    grid: VGrid,
    values: Vec<Complex64>,
}

impl SampledMultiplier {
    pub fn new(grid: VGrid, values: Vec<Complex64>) -> Result<Self, TentError> {
        if values.len() != grid.n_cells() {
            return Err(TentError::shape(format!(
                "sampled multiplier needs {} values for a {}x{} grid, got {}",
                grid.n_cells(),
                grid.n(),
                grid.n(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(TentError::invalid("sampled multiplier values must be finite"));
        }
        Ok(SampledMultiplier { grid, values })
    }

    /// Samples a closed-form symbol at the cell centers.
    pub fn from_fn(
        grid: VGrid,
        f: impl Fn(PlaneVector) -> Complex64,
    ) -> Result<Self, TentError> {
        let values = grid.cells().map(|c| f(grid.cell_center(c))).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &VGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn eval(&self, xi: PlaneVector) -> Result<Complex64, TentError> {
        let uv = xi.to_uv();
        let n = self.grid.n();
        let h = self.grid.cell_size();
        let c = self.grid.center();
        // Continuous index on the lattice of cell centers.
        let fu = (uv[0] - (c[0] - 0.5 * self.grid.extent() + 0.5 * h)) / h;
        let fv = (uv[1] - (c[1] - 0.5 * self.grid.extent() + 0.5 * h)) / h;
        let top = (n - 1) as f64;
        if !(0.0..=top).contains(&fu) || !(0.0..=top).contains(&fv) {
            return Err(TentError::domain(format!(
                "point ({}, {}) lies outside the sampled multiplier coverage",
                uv[0], uv[1]
            )));
        }
        let iu = (fu.floor() as usize).min(n - 2);
        let iv = (fv.floor() as usize).min(n - 2);
        let (su, sv) = (fu - iu as f64, fv - iv as f64);
        let at = |a: usize, b: usize| self.values[self.grid.flat(a, b)];
        Ok(at(iu, iv) * (1.0 - su) * (1.0 - sv)
            + at(iu + 1, iv) * su * (1.0 - sv)
            + at(iu, iv + 1) * (1.0 - su) * sv
            + at(iu + 1, iv + 1) * su * sv)
    }
}

/// A multiplier on the plane: built-in closed form, sampled grid, or a
/// scaled/translated wrapper around another spec.
#[derive(Debug, Clone)]
pub enum MultiplierSpec {
    One,
    Zero,
    /// sgn(xi_1 - xi_2), 0 on the null line.
    BhtSign,
    /// mtilde(xi_1 - xi_2) for a 1-D profile mtilde.
    LipDifference(Profile1D),
    /// e^{i k angle(xi - center)}: smooth and homogeneous of degree zero
    /// away from the center; k integer so the phase closes up.
    PointMikhlin { winding: i64, center: PlaneVector },
    Sampled(SampledMultiplier),
    Scaled(Complex64, Box<MultiplierSpec>),
    Translated(PlaneVector, Box<MultiplierSpec>),
}

impl MultiplierSpec {
    pub fn eval(&self, xi: PlaneVector) -> Result<Complex64, TentError> {
        match self {
            MultiplierSpec::One => Ok(Complex64::new(1.0, 0.0)),
            MultiplierSpec::Zero => Ok(Complex64::new(0.0, 0.0)),
            MultiplierSpec::BhtSign => {
                Ok(Profile1D::Sign.eval(xi.coord(Axis::E1) - xi.coord(Axis::E2)))
            }
            MultiplierSpec::LipDifference(p) => {
                Ok(p.eval(xi.coord(Axis::E1) - xi.coord(Axis::E2)))
            }
            MultiplierSpec::PointMikhlin { winding, center } => {
                let w = xi.sub(*center);
                if w.norm() == 0.0 {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                let uv = w.to_uv();
                Ok(Complex64::from_polar(
                    1.0,
                    *winding as f64 * uv[1].atan2(uv[0]),
                ))
            }
            MultiplierSpec::Sampled(g) => g.eval(xi),
            MultiplierSpec::Scaled(c, inner) => Ok(c * inner.eval(xi)?),
            MultiplierSpec::Translated(shift, inner) => inner.eval(xi.sub(*shift)),
        }
    }

    /// Wraps the spec so every value is multiplied by `c`.
    pub fn scaled(self, c: Complex64) -> MultiplierSpec {
        MultiplierSpec::Scaled(c, Box::new(self))
    }

    /// Wraps the spec so it evaluates the original at `xi - shift`.
    pub fn translated(self, shift: PlaneVector) -> MultiplierSpec {
        MultiplierSpec::Translated(shift, Box::new(self))
    }

    pub fn smoothness(&self) -> Smoothness {
        match self {
            MultiplierSpec::One | MultiplierSpec::Zero => Smoothness::SmoothEverywhere,
            MultiplierSpec::BhtSign | MultiplierSpec::LipDifference(_) => Smoothness::SingularLine,
            MultiplierSpec::PointMikhlin { .. } => Smoothness::SingularPoint,
            MultiplierSpec::Sampled(_) => Smoothness::Sampled,
            MultiplierSpec::Scaled(_, inner) | MultiplierSpec::Translated(_, inner) => {
                inner.smoothness()
            }
        }
    }
}

/// Named parameters of the built-in family, the `{name, params}` form used
/// by configuration files.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuiltinParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
    /// Center of a point singularity in (u, v) coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<[f64; 2]>,
}

/// Constructs a built-in multiplier from its name and parameters.
pub fn builtin(name: &str, params: &BuiltinParams) -> Result<MultiplierSpec, TentError> {
    match name {
        "one" => Ok(MultiplierSpec::One),
        "zero" => Ok(MultiplierSpec::Zero),
        "bht_sign" => Ok(MultiplierSpec::BhtSign),
        "lip_difference" => match params.profile.as_deref() {
            Some("sign") => Ok(MultiplierSpec::LipDifference(Profile1D::Sign)),
            Some("log_phase") => {
                let tau = params.tau.ok_or_else(|| {
                    TentError::config("log_phase profile needs a tau parameter")
                })?;
                if !tau.is_finite() {
                    return Err(TentError::config(format!("tau must be finite, got {tau}")));
                }
                Ok(MultiplierSpec::LipDifference(Profile1D::LogPhase { tau }))
            }
            Some(other) => Err(TentError::invalid(format!(
                "unknown 1-D profile {other:?}; expected \"sign\" or \"log_phase\""
            ))),
            None => Err(TentError::config(
                "lip_difference needs a profile parameter",
            )),
        },
        "point_mikhlin" => {
            let e = params
                .exponent
                .ok_or_else(|| TentError::config("point_mikhlin needs an exponent parameter"))?;
            let k = e.round();
            if !e.is_finite() || (e - k).abs() > 1e-9 {
                return Err(TentError::config(format!(
                    "point_mikhlin exponent must be an integer so the phase closes up, got {e}"
                )));
            }
            let center = PlaneVector::from_uv(params.center.unwrap_or([0.0, 0.0]));
            Ok(MultiplierSpec::PointMikhlin {
                winding: k as i64,
                center,
            })
        }
        other => Err(TentError::invalid(format!(
            "unknown multiplier builtin {other:?}"
        ))),
    }
}
