//! Quaternion algebra over `f64`.
//!
//! A [`Quaternion`] is a plain copyable value `w + x i + y j + z k`. The scalar
//! part `w` doubles as the `t` coordinate of a point in H.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    /// The basis `1, i, j, k` in coordinate order `(t, x, y, z)`.
    pub const BASIS: [Quaternion; 4] = [Self::ONE, Self::I, Self::J, Self::K];

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    pub const fn pure(x: f64, y: f64, z: f64) -> Self {
        Self::new(0.0, x, y, z)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    /// Vector part `(x, y, z)`.
    pub fn vector(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Multiplicative inverse `conj(q) / |q|^2`.
    pub fn inv(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::ZeroDivisor);
        }
        Ok(self.conj() / n2)
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Largest absolute component difference.
    pub fn max_abs_diff(self, other: Self) -> f64 {
        let d = self - other;
        d.w.abs().max(d.x.abs()).max(d.y.abs()).max(d.z.abs())
    }
}

impl From<[f64; 4]> for Quaternion {
    fn from(a: [f64; 4]) -> Self {
        Self::from_array(a)
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Self::real(w)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.w + rhs.w,
            self.x + rhs.x,
            self.y + rhs.y,
            self.z + rhs.z,
        )
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.w - rhs.w,
            self.x - rhs.x,
            self.y - rhs.y,
            self.z - rhs.z,
        )
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let a = self;
        Self::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q.scale(self)
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

pub fn q_add(a: Quaternion, b: Quaternion) -> Quaternion {
    a + b
}

pub fn q_mul(a: Quaternion, b: Quaternion) -> Quaternion {
    a * b
}

pub fn q_conj(a: Quaternion) -> Quaternion {
    a.conj()
}

pub fn q_norm(a: Quaternion) -> f64 {
    a.norm()
}

pub fn q_inv(a: Quaternion) -> Result<Quaternion> {
    a.inv()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const E: [Quaternion; 4] = Quaternion::BASIS;

    /// Product via the 4x4 left-multiplication matrix, expanded by distributivity
    /// over the basis table.
    fn table_product(a: Quaternion, b: Quaternion) -> Quaternion {
        // basis products e_m e_n = sign * e_idx
        const TABLE: [[(f64, usize); 4]; 4] = [
            [(1.0, 0), (1.0, 1), (1.0, 2), (1.0, 3)],
            [(1.0, 1), (-1.0, 0), (1.0, 3), (-1.0, 2)],
            [(1.0, 2), (-1.0, 3), (-1.0, 0), (1.0, 1)],
            [(1.0, 3), (1.0, 2), (-1.0, 1), (-1.0, 0)],
        ];
        let (a, b) = (a.to_array(), b.to_array());
        let mut out = [0.0; 4];
        for m in 0..4 {
            for n in 0..4 {
                let (s, idx) = TABLE[m][n];
                out[idx] += s * a[m] * b[n];
            }
        }
        Quaternion::from_array(out)
    }

    #[test]
    fn add_examples() {
        assert_eq!(q_add(E[0], E[1]), Quaternion::new(1.0, 1.0, 0.0, 0.0));
        let q = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(q + Quaternion::ZERO, q);
        assert_eq!(q + (-q), Quaternion::ZERO);
    }

    #[test]
    fn defining_relations() {
        assert_eq!(Quaternion::I * Quaternion::J, Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::I, -Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::K, Quaternion::I);
        assert_eq!(Quaternion::K * Quaternion::I, Quaternion::J);
        for u in [Quaternion::I, Quaternion::J, Quaternion::K] {
            assert_eq!(u * u, -Quaternion::ONE);
        }
        assert_eq!(
            Quaternion::I * Quaternion::J * Quaternion::K,
            -Quaternion::ONE
        );
    }

    #[test]
    fn one_plus_i_times_one_plus_j() {
        let a = Quaternion::ONE + Quaternion::I;
        let b = Quaternion::ONE + Quaternion::J;
        let oracle = table_product(a, b);
        assert_eq!(oracle, Quaternion::new(1.0, 1.0, 1.0, 1.0));
        assert_eq!(q_mul(a, b), oracle);
    }

    #[test]
    fn conj_norm_inv_examples() {
        assert_eq!(
            q_inv(Quaternion::pure(2.0, 0.0, 0.0)).unwrap(),
            Quaternion::pure(-0.5, 0.0, 0.0)
        );
        let q = Quaternion::new(1.0, 1.0, 1.0, 1.0);
        assert_eq!(q_conj(q), Quaternion::new(1.0, -1.0, -1.0, -1.0));
        assert_eq!(q_norm(q), 2.0);
        assert_eq!(q_inv(Quaternion::ZERO), Err(Error::ZeroDivisor));
    }

    #[test]
    fn serde_as_array() {
        let q = Quaternion::new(1.0, -2.0, 0.5, 4.0);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "[1.0,-2.0,0.5,4.0]");
        let back: Quaternion = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }

    fn quat() -> impl Strategy<Value = Quaternion> {
        prop::array::uniform4(-10.0f64..10.0).prop_map(Quaternion::from_array)
    }

    fn rel_err(a: Quaternion, b: Quaternion, scale: f64) -> f64 {
        a.max_abs_diff(b) / scale.max(f64::MIN_POSITIVE)
    }

    proptest! {
        #[test]
        fn product_matches_table(a in quat(), b in quat()) {
            let d = (a * b).max_abs_diff(table_product(a, b));
            prop_assert!(d <= 8.0 * f64::EPSILON * a.norm() * b.norm());
        }

        #[test]
        fn associative(a in quat(), b in quat(), c in quat()) {
            let scale = a.norm() * b.norm() * c.norm();
            prop_assert!(rel_err((a * b) * c, a * (b * c), scale) <= 32.0 * f64::EPSILON);
        }

        #[test]
        fn norm_multiplicative(a in quat(), b in quat()) {
            let lhs = (a * b).norm();
            let rhs = a.norm() * b.norm();
            prop_assert!((lhs - rhs).abs() <= 8.0 * f64::EPSILON * rhs.max(f64::MIN_POSITIVE));
        }

        #[test]
        fn conj_reverses_products(a in quat(), b in quat()) {
            let d = (a * b).conj().max_abs_diff(b.conj() * a.conj());
            prop_assert!(d <= 4.0 * f64::EPSILON * a.norm() * b.norm());
        }

        #[test]
        fn inverse_is_two_sided(a in quat()) {
            prop_assume!(a.norm() > 1e-3);
            let inv = a.inv().unwrap();
            prop_assert!((a * inv).max_abs_diff(Quaternion::ONE) <= 8.0 * f64::EPSILON * 4.0);
            prop_assert!((inv * a).max_abs_diff(Quaternion::ONE) <= 8.0 * f64::EPSILON * 4.0);
        }

        #[test]
        fn norm_squared_is_component_sum(a in quat()) {
            let n = a.norm();
            let s = a.w * a.w + a.x * a.x + a.y * a.y + a.z * a.z;
            prop_assert!((n * n - s).abs() <= 4.0 * f64::EPSILON * s);
        }
    }
}
