use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A complex-holomorphic stem `F(z)` with real coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stem {
    Const(f64),
    /// `z^n`
    Power(u32),
    Exp,
    Reciprocal,
}

impl Stem {
    /// `(F(z), F'(z))`.
    pub fn eval(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        Ok(match *self {
            Stem::Const(c) => (Complex64::new(c, 0.0), Complex64::new(0.0, 0.0)),
            Stem::Power(0) => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            Stem::Power(n) => {
                let lower = z.powu(n - 1);
                (lower * z, lower * n as f64)
            }
            Stem::Exp => {
                let e = z.exp();
                (e, e)
            }
            Stem::Reciprocal => {
                if z.norm_sqr() == 0.0 {
                    return Err(Error::ReciprocalPole);
                }
                let inv = z.inv();
                (inv, -inv * inv)
            }
        })
    }

    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok(match *self {
            Stem::Const(c) => Complex64::new(c, 0.0),
            Stem::Power(n) => z.powu(n),
            Stem::Exp => z.exp(),
            Stem::Reciprocal => {
                if z.norm_sqr() == 0.0 {
                    return Err(Error::ReciprocalPole);
                }
                z.inv()
            }
        })
    }

    /// Real-valued on the real axis and defined there.
    pub fn is_constant(&self) -> bool {
        matches!(self, Stem::Const(_) | Stem::Power(0))
    }
}

impl fmt::Display for Stem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stem::Const(c) => write!(f, "const:{c}"),
            Stem::Power(n) => write!(f, "poly:{n}"),
            Stem::Exp => f.write_str("exp"),
            Stem::Reciprocal => f.write_str("reciprocal"),
        }
    }
}
