//! The `(t, r, alpha, beta)` chart on H.
//!
//! A point off the real axis is `p = t + r iota(alpha, beta)` where
//! `iota = (cos a sin b) i + (sin a sin b) j + (cos b) k` is a unit imaginary
//! quaternion. Conversions are total: on the real axis (`r == 0`) and on the
//! poles (`sin beta == 0`) the undetermined angles are set to zero.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalCoords {
    pub t: f64,
    pub r: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl SphericalCoords {
    pub const fn new(t: f64, r: f64, alpha: f64, beta: f64) -> Self {
        Self { t, r, alpha, beta }
    }

    pub fn sin_beta(&self) -> f64 {
        self.beta.sin()
    }

    pub fn to_quaternion(&self) -> Quaternion {
        from_spherical(*self)
    }

    /// `true` when the angular chart is singular here (real axis or pole).
    pub fn on_pole(&self) -> bool {
        self.r == 0.0 || self.beta == 0.0 || self.beta == PI
    }
}

pub fn to_spherical(p: Quaternion) -> SphericalCoords {
    let rho = p.x.hypot(p.y);
    let r = rho.hypot(p.z);
    if r == 0.0 {
        return SphericalCoords::new(p.w, 0.0, 0.0, 0.0);
    }
    // atan2 keeps beta well conditioned near the poles, unlike acos(z / r).
    let beta = rho.atan2(p.z);
    let alpha = if rho == 0.0 {
        0.0
    } else {
        let a = p.y.atan2(p.x);
        if a < 0.0 {
            let shifted = a + TAU;
            // a tiny negative angle rounds up to exactly 2pi
            if shifted >= TAU {
                0.0
            } else {
                shifted
            }
        } else {
            a
        }
    };
    SphericalCoords::new(p.w, r, alpha, beta)
}

pub fn from_spherical(c: SphericalCoords) -> Quaternion {
    let v = iota(c.alpha, c.beta);
    Quaternion::new(c.t, c.r * v.x, c.r * v.y, c.r * v.z)
}

pub fn iota(alpha: f64, beta: f64) -> Quaternion {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    Quaternion::pure(ca * sb, sa * sb, cb)
}

pub fn iota_alpha(alpha: f64, beta: f64) -> Quaternion {
    let (sa, ca) = alpha.sin_cos();
    let sb = beta.sin();
    Quaternion::pure(-sa * sb, ca * sb, 0.0)
}

pub fn iota_beta(alpha: f64, beta: f64) -> Quaternion {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    Quaternion::pure(ca * cb, sa * cb, -sb)
}

/// `(iota_alpha)^{-1} = -iota_alpha / sin^2 beta`; singular on the poles.
pub fn inv_iota_alpha(alpha: f64, beta: f64) -> Result<Quaternion> {
    let sb = beta.sin();
    if sb == 0.0 {
        return Err(Error::PoleSingularity { beta });
    }
    Ok(-iota_alpha(alpha, beta) / (sb * sb))
}

/// `(iota_beta)^{-1} = -iota_beta`, since `iota_beta` is a unit imaginary.
pub fn inv_iota_beta(alpha: f64, beta: f64) -> Quaternion {
    -iota_beta(alpha, beta)
}

/// Jacobian `r^2 sin(beta)` of `(t, r, alpha, beta) -> (t, x, y, z)`.
pub fn volume_weight(c: SphericalCoords) -> f64 {
    c.r * c.r * c.beta.sin()
}
