//! Model parameters, closed-form constants and the reduced bulk potential.
//!
//! Everything downstream works in the doubly rescaled variables: lengths in
//! units of `xi / sqrt(t)` and the order parameter in units of its bulk value.
//! Physical units only appear in [`PhysicalParams`] and [`ReducedGeometry`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How strictly the reduced temperature is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Validation {
    /// `t > 1`.
    #[default]
    Strict,
    /// `t >= 1`, for boundary probes only.
    Relaxed,
}

/// Material constants in SI units.
///
/// `a2`, `b2` and `c2` are the squared Landau coefficients (N/m^2, with `a2`
/// already evaluated at the working temperature), `l` the elastic constant (N)
/// and `r_real` the droplet radius (m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub a2: f64,
    pub b2: f64,
    pub c2: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "R_real")]
    pub r_real: f64,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("a2", self.a2),
            ("b2", self.b2),
            ("c2", self.c2),
            ("L", self.l),
            ("R_real", self.r_real),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }
}

/// Lengths of the droplet in physical and reduced units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedGeometry {
    /// Correlation length `sqrt(27 c2 L / b2^2)` in metres.
    pub xi: f64,
    /// Radius in units of `xi`.
    pub r_bar: f64,
    /// Radius in the working units, `sqrt(t) * r_bar`.
    pub r_tilde: f64,
}

/// Reduced temperature together with every derived constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub t: f64,
    pub h_plus: f64,
    pub lambda_t_sq: f64,
    #[serde(rename = "C_t")]
    pub c_t: f64,
    pub farfield_coeff: f64,
}

impl ModelParams {
    /// Derive all constants for reduced temperature `t` with strict validation.
    pub fn new(t: f64) -> Result<Self> {
        derive_model_params(t, Validation::Strict)
    }

    /// `h_plus / t`, the coefficient that multiplies the cubic coupling.
    pub fn cubic_ratio(&self) -> f64 {
        self.h_plus / self.t
    }

    /// Reduced bulk potential `f(h)`; zero at `h = 1`, positive elsewhere on `[0, 1)`.
    pub fn bulk_potential(&self, h: f64) -> f64 {
        let k = self.cubic_ratio();
        let q = self.h_plus * self.h_plus / (2.0 * self.t);
        let h2 = h * h;
        -0.5 * h2 - k * h2 * h + q * h2 * h2 + self.c_t
    }

    /// `f'(h)`.
    pub fn bulk_potential_derivative(&self, h: f64) -> f64 {
        let k = self.cubic_ratio();
        let q2 = self.h_plus * self.h_plus / self.t;
        -h - 3.0 * k * h * h + 2.0 * q2 * h * h * h
    }

    /// `f''(h)`.
    pub fn bulk_potential_second_derivative(&self, h: f64) -> f64 {
        let k = self.cubic_ratio();
        let q2 = self.h_plus * self.h_plus / self.t;
        -1.0 - 6.0 * k * h + 6.0 * q2 * h * h
    }

    /// Nonlinear part of the radial equation, `-h + h^3 + (3 h_+/t)(h^3 - h^2)`.
    ///
    /// Equals `f'(h)` identically because `2 h_+^2 - 3 h_+ = t`.
    pub fn bulk_force(&self, h: f64) -> f64 {
        let k3 = 3.0 * self.cubic_ratio();
        let h2 = h * h;
        -h + h2 * h + k3 * (h2 * h - h2)
    }

    /// Right-hand side of the radial equation as a first-order system.
    ///
    /// Returns `(dh, d2h)` with
    /// `d2h = -(2/r) dh + 6 h / r^2 - h + h^3 + (3 h_+/t)(h^3 - h^2)`.
    pub fn ode_rhs(&self, r: f64, h: f64, dh: f64) -> Result<(f64, f64)> {
        if r <= 0.0 {
            return Err(Error::SingularOrigin);
        }
        Ok((dh, self.second_derivative(r, h, dh)))
    }

    /// Unchecked form of [`ode_rhs`](Self::ode_rhs) for hot loops; `r` must be positive.
    #[inline]
    pub fn second_derivative(&self, r: f64, h: f64, dh: f64) -> f64 {
        -2.0 * dh / r + 6.0 * h / (r * r) + self.bulk_force(h)
    }

    /// Upper envelope `r^2 / (r^2 + t lambda_t^2)` of the hedgehog profile on large domains.
    pub fn upper_envelope(&self, r: f64) -> f64 {
        let r2 = r * r;
        r2 / (r2 + self.t * self.lambda_t_sq)
    }

    /// Lower envelope `r^2 / (r^2 + 14)`.
    pub fn lower_envelope(r: f64) -> f64 {
        let r2 = r * r;
        r2 / (r2 + 14.0)
    }

    /// Interval that contains the core amplitude `a2` on large domains.
    pub fn core_amplitude_bounds(&self) -> (f64, f64) {
        let t = self.t;
        let s = (9.0 + 8.0 * t).sqrt();
        (1.0 / 14.0, 1.0 / 3.0 + 3.0 / (8.0 * t) + s / (8.0 * t))
    }
}

/// Closed-form constants for reduced temperature `t`.
pub fn derive_model_params(t: f64, validation: Validation) -> Result<ModelParams> {
    let ok = match validation {
        Validation::Strict => t > 1.0,
        Validation::Relaxed => t >= 1.0,
    };
    if !t.is_finite() || !ok {
        return Err(Error::TemperatureOutOfRange { t });
    }
    let s = (9.0 + 8.0 * t).sqrt();
    let h_plus = (3.0 + s) / 4.0;
    let lambda_t_sq = 24.0 / (9.0 + 8.0 * t + 3.0 * s);
    let c_t = 0.5 + h_plus / t - h_plus * h_plus / (2.0 * t);
    let farfield_coeff = 6.0 / (2.0 + 3.0 * h_plus / t);
    Ok(ModelParams {
        t,
        h_plus,
        lambda_t_sq,
        c_t,
        farfield_coeff,
    })
}

/// Reduced temperature and droplet geometry from material constants.
pub fn nondimensionalize(p: &PhysicalParams, validation: Validation) -> Result<(f64, ReducedGeometry)> {
    p.validate()?;
    let t = 27.0 * p.a2 * p.c2 / (p.b2 * p.b2);
    let ok = match validation {
        Validation::Strict => t > 1.0,
        Validation::Relaxed => t >= 1.0,
    };
    if !ok {
        return Err(Error::TemperatureOutOfRange { t });
    }
    let xi = (27.0 * p.c2 * p.l / (p.b2 * p.b2)).sqrt();
    let r_bar = p.r_real / xi;
    Ok((
        t,
        ReducedGeometry {
            xi,
            r_bar,
            r_tilde: t.sqrt() * r_bar,
        },
    ))
}
