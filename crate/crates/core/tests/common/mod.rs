//! Direct three-dimensional tensor-energy oracle.

#![allow(dead_code)]

use hedgehog_core::quadrature::GaussRule;
use hedgehog_core::ModelParams;
use nalgebra::{Matrix3, Vector3};

pub fn uniaxial(n: &Vector3<f64>) -> Matrix3<f64> {
    n * n.transpose() - Matrix3::identity() / 3.0
}

/// `sqrt(3/2) h(|x|) (x x / |x|^2 - I/3)`.
pub fn hedgehog(h: impl Fn(f64) -> f64, x: &Vector3<f64>) -> Matrix3<f64> {
    let r = x.norm();
    (1.5f64).sqrt() * h(r) * uniaxial(&(x / r))
}

pub fn bulk(m: &ModelParams, q: &Matrix3<f64>) -> f64 {
    let tr2 = (q * q).trace();
    let tr3 = (q * q * q).trace();
    let hp_t = m.h_plus / m.t;
    -0.5 * tr2 - 6f64.sqrt() * hp_t * tr3 + 0.5 * m.h_plus * hp_t * tr2 * tr2 + m.c_t
}

/// `|grad Q|^2 / 2 + F_b(Q)` at `x` with central differences of step `d`.
pub fn density(m: &ModelParams, q: &impl Fn(&Vector3<f64>) -> Matrix3<f64>, x: &Vector3<f64>, d: f64) -> f64 {
    let mut grad2 = 0.0;
    for k in 0..3 {
        let mut e = Vector3::zeros();
        e[k] = d;
        let dq = (q(&(x + e)) - q(&(x - e))) / (2.0 * d);
        grad2 += dq.norm_squared();
    }
    0.5 * grad2 + bulk(m, &q(x))
}

/// Sphere average of `f(x)` over `|x| = r`, for fields symmetric about the z axis.
pub fn sphere_average(r: f64, f: impl Fn(&Vector3<f64>) -> f64) -> f64 {
    let rule = GaussRule::new(12);
    let cuts: Vec<f64> = (0..=8).map(|i| -1.0 + 0.25 * i as f64).collect();
    0.5 * rule.composite(&cuts, |c| {
        let s = (1.0 - c * c).max(0.0).sqrt();
        f(&Vector3::new(r * s, 0.0, r * c))
    })
}

pub fn zz() -> Matrix3<f64> {
    uniaxial(&Vector3::z())
}
