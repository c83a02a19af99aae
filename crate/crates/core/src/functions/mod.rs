//! Complex-like functions `f = u + iota v`.
//!
//! A [`ComplexLikePair`] is described entirely by two real scalar fields on the
//! `(t, r, alpha, beta)` chart. Internally the pair is handled as the complex
//! number `u + i v`, which makes the sum/product/inverse combinators ordinary
//! complex arithmetic: at a fixed point every value of the form `a + iota b`
//! lives in the commutative subalgebra spanned by `1` and `iota`.

mod spec;
mod stem;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

pub use self::spec::{catalog, GeneratorSpec};
pub use self::stem::Stem;
use crate::coords::{iota, to_spherical, SphericalCoords};
use crate::error::{Error, Result};
use crate::quat::Quaternion;

/// Index of each chart coordinate in [`ChartJet::d`].
pub const T: usize = 0;
pub const R: usize = 1;
pub const ALPHA: usize = 2;
pub const BETA: usize = 3;

/// Step of the fourth-order central differences used for pairs without
/// closed-form partials.
pub const CHART_FD_STEP: f64 = 1e-4;

/// Value `u + i v` and its first partials in `(t, r, alpha, beta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartJet {
    pub value: Complex64,
    pub d: [Complex64; 4],
}

impl ChartJet {
    pub fn constant(value: Complex64) -> Self {
        Self {
            value,
            d: [Complex64::new(0.0, 0.0); 4],
        }
    }

    pub fn u(&self) -> f64 {
        self.value.re
    }
    pub fn v(&self) -> f64 {
        self.value.im
    }
    pub fn du(&self, k: usize) -> f64 {
        self.d[k].re
    }
    pub fn dv(&self, k: usize) -> f64 {
        self.d[k].im
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            value: self.value + o.value,
            d: std::array::from_fn(|k| self.d[k] + o.d[k]),
        }
    }

    fn mul(&self, o: &Self) -> Self {
        Self {
            value: self.value * o.value,
            d: std::array::from_fn(|k| self.d[k] * o.value + self.value * o.d[k]),
        }
    }

    fn inv(&self) -> Result<Self> {
        if self.value.norm_sqr() == 0.0 {
            return Err(Error::ZeroFunctionValue);
        }
        let inv = self.value.inv();
        let inv2 = inv * inv;
        Ok(Self {
            value: inv,
            d: std::array::from_fn(|k| -self.d[k] * inv2),
        })
    }

    fn scale_inv_r2(&self, r: f64) -> Self {
        let r2 = r * r;
        let mut d: [Complex64; 4] = std::array::from_fn(|k| self.d[k] / r2);
        d[R] -= self.value * (2.0 / (r2 * r));
        Self {
            value: self.value / r2,
            d,
        }
    }
}

/// Where a pair's chart partials come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartialsSource {
    ClosedForm,
    FiniteDifference,
}

impl fmt::Display for PartialsSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartialsSource::ClosedForm => "closed-form",
            PartialsSource::FiniteDifference => "finite-difference",
        })
    }
}

pub type ScalarField = Arc<dyn Fn(&SphericalCoords) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Node {
    Intrinsic(Stem),
    ProductForm {
        radial: Stem,
        angular: Stem,
    },
    Custom {
        u: ScalarField,
        v: ScalarField,
        angular: bool,
    },
    Add(ComplexLikePair, ComplexLikePair),
    Mul(ComplexLikePair, ComplexLikePair),
    Inv(ComplexLikePair),
    ScaleInvR2(ComplexLikePair),
}

/// An immutable complex-like function; cheap to clone and share across threads.
#[derive(Clone)]
pub struct ComplexLikePair {
    node: Arc<Node>,
    label: Arc<str>,
}

impl fmt::Debug for ComplexLikePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ComplexLikePair").field(&self.label).finish()
    }
}

impl fmt::Display for ComplexLikePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn mercator(beta: f64) -> Result<f64> {
    let s = beta.sin();
    if s <= 0.0 {
        return Err(Error::MercatorSingularity { beta });
    }
    Ok((0.5 * beta).tan().ln())
}

fn z_of(c: &SphericalCoords) -> Complex64 {
    Complex64::new(c.t, c.r)
}

impl ComplexLikePair {
    fn from_node(node: Node, label: impl Into<Arc<str>>) -> Self {
        Self {
            node: Arc::new(node),
            label: label.into(),
        }
    }

    /// Intrinsic lift of a stem: `u + i v = F(t + i r)`.
    pub fn intrinsic(stem: Stem) -> Self {
        let label = match stem {
            Stem::Const(c) => format!("const:{c}"),
            Stem::Power(n) => format!("power:{n}"),
            Stem::Exp => "exp".to_string(),
            Stem::Reciprocal => "reciprocal".to_string(),
        };
        Self::from_node(Node::Intrinsic(stem), label)
    }

    /// A pair given by arbitrary scalar fields. Partials are taken by
    /// fourth-order central differences with step [`CHART_FD_STEP`].
    /// `angular` declares whether the fields depend on `alpha` or `beta`.
    pub fn custom<U, V>(name: &str, u: U, v: V, angular: bool) -> Self
    where
        U: Fn(&SphericalCoords) -> f64 + Send + Sync + 'static,
        V: Fn(&SphericalCoords) -> f64 + Send + Sync + 'static,
    {
        Self::from_node(
            Node::Custom {
                u: Arc::new(u),
                v: Arc::new(v),
                angular,
            },
            name,
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn partials_source(&self) -> PartialsSource {
        match &*self.node {
            Node::Intrinsic(_) | Node::ProductForm { .. } => PartialsSource::ClosedForm,
            Node::Custom { .. } => PartialsSource::FiniteDifference,
            Node::Add(a, b) | Node::Mul(a, b) => {
                if a.partials_source() == PartialsSource::ClosedForm
                    && b.partials_source() == PartialsSource::ClosedForm
                {
                    PartialsSource::ClosedForm
                } else {
                    PartialsSource::FiniteDifference
                }
            }
            Node::Inv(a) | Node::ScaleInvR2(a) => a.partials_source(),
        }
    }

    /// No dependence on `alpha`, `beta`: the pair is a function of `(t, r)` only.
    pub fn is_intrinsic(&self) -> bool {
        match &*self.node {
            Node::Intrinsic(_) => true,
            Node::ProductForm { .. } => false,
            Node::Custom { angular, .. } => !angular,
            Node::Add(a, b) | Node::Mul(a, b) => a.is_intrinsic() && b.is_intrinsic(),
            Node::Inv(a) | Node::ScaleInvR2(a) => a.is_intrinsic(),
        }
    }

    /// `v` vanishes identically in closed form, so `f` is defined on the real axis.
    pub fn real_on_axis(&self) -> bool {
        match &*self.node {
            Node::Intrinsic(s) => s.is_constant(),
            Node::Add(a, b) | Node::Mul(a, b) => a.real_on_axis() && b.real_on_axis(),
            Node::Inv(a) => a.real_on_axis(),
            _ => false,
        }
    }

    /// `(u, v)` at a chart point, as `u + i v`.
    pub fn value(&self, c: &SphericalCoords) -> Result<Complex64> {
        match &*self.node {
            Node::Intrinsic(s) => s.value(z_of(c)),
            Node::ProductForm { radial, angular } => {
                let w = Complex64::new(c.alpha, mercator(c.beta)?);
                Ok(radial.value(z_of(c))? * angular.value(w)?)
            }
            Node::Custom { u, v, .. } => Ok(Complex64::new(u(c), v(c))),
            Node::Add(a, b) => Ok(a.value(c)? + b.value(c)?),
            Node::Mul(a, b) => Ok(a.value(c)? * b.value(c)?),
            Node::Inv(a) => {
                let h = a.value(c)?;
                if h.norm_sqr() == 0.0 {
                    return Err(Error::ZeroFunctionValue);
                }
                Ok(h.inv())
            }
            Node::ScaleInvR2(a) => {
                if c.r == 0.0 {
                    return Err(Error::RealAxis);
                }
                Ok(a.value(c)? / (c.r * c.r))
            }
        }
    }

    /// Value and first chart partials.
    pub fn jet(&self, c: &SphericalCoords) -> Result<ChartJet> {
        match &*self.node {
            Node::Intrinsic(s) => {
                let (f, df) = s.eval(z_of(c))?;
                let zero = Complex64::new(0.0, 0.0);
                Ok(ChartJet {
                    value: f,
                    d: [df, df * Complex64::i(), zero, zero],
                })
            }
            Node::ProductForm { radial, angular } => {
                let sb = c.beta.sin();
                let w = Complex64::new(c.alpha, mercator(c.beta)?);
                let (f, df) = radial.eval(z_of(c))?;
                let (g, dg) = angular.eval(w)?;
                Ok(ChartJet {
                    value: f * g,
                    d: [
                        df * g,
                        df * g * Complex64::i(),
                        f * dg,
                        f * dg * Complex64::i() / sb,
                    ],
                })
            }
            Node::Custom { u, v, .. } => custom_jet(u, v, c),
            Node::Add(a, b) => Ok(a.jet(c)?.add(&b.jet(c)?)),
            Node::Mul(a, b) => Ok(a.jet(c)?.mul(&b.jet(c)?)),
            Node::Inv(a) => a.jet(c)?.inv(),
            Node::ScaleInvR2(a) => {
                if c.r == 0.0 {
                    return Err(Error::RealAxis);
                }
                Ok(a.jet(c)?.scale_inv_r2(c.r))
            }
        }
    }

    /// `f(p) = u + iota(alpha, beta) v`.
    pub fn eval(&self, p: Quaternion) -> Result<Quaternion> {
        let c = to_spherical(p);
        if c.r == 0.0 {
            if self.real_on_axis() {
                return Ok(Quaternion::real(self.value(&c)?.re));
            }
            return Err(Error::RealAxis);
        }
        let h = self.value(&c)?;
        Ok(assemble(h, &c))
    }

    /// The pair `(u / r^2, v / r^2)` with quotient-rule partials.
    pub fn scaled_by_inv_r2(&self) -> Self {
        Self::from_node(
            Node::ScaleInvR2(self.clone()),
            format!("scale_inv_r2({})", self.label),
        )
    }
}

/// `u + iota v` as a quaternion.
pub fn assemble(h: Complex64, c: &SphericalCoords) -> Quaternion {
    Quaternion::real(h.re) + iota(c.alpha, c.beta) * h.im
}

fn custom_jet(u: &ScalarField, v: &ScalarField, c: &SphericalCoords) -> Result<ChartJet> {
    let h = CHART_FD_STEP;
    if c.r <= 2.0 * h {
        return Err(Error::StepTooSmall {
            reach: 2.0 * h,
            distance: c.r,
        });
    }
    let at = |k: usize, off: f64| {
        let s = shift_coord(c, k, off);
        Complex64::new(u(&s), v(&s))
    };
    let d = std::array::from_fn(|k| {
        (at(k, -2.0 * h) - at(k, 2.0 * h) + (at(k, h) - at(k, -h)) * 8.0) / (12.0 * h)
    });
    Ok(ChartJet {
        value: Complex64::new(u(c), v(c)),
        d,
    })
}

/// `c` with chart coordinate `k` moved by `off`.
pub fn shift_coord(c: &SphericalCoords, k: usize, off: f64) -> SphericalCoords {
    let mut s = *c;
    match k {
        T => s.t += off,
        R => s.r += off,
        ALPHA => s.alpha += off,
        _ => s.beta += off,
    }
    s
}

pub fn eval(f: &ComplexLikePair, p: Quaternion) -> Result<Quaternion> {
    f.eval(p)
}

pub fn make_power(n: u32) -> ComplexLikePair {
    ComplexLikePair::intrinsic(Stem::Power(n))
}

pub fn make_exp() -> ComplexLikePair {
    ComplexLikePair::intrinsic(Stem::Exp)
}

pub fn make_reciprocal() -> ComplexLikePair {
    ComplexLikePair::intrinsic(Stem::Reciprocal)
}

pub fn make_constant(c: f64) -> ComplexLikePair {
    ComplexLikePair::intrinsic(Stem::Const(c))
}

/// `u + i v = F(t + i r) G(alpha + i ln tan(beta / 2))`.
///
/// Satisfies both Cauchy-Riemann pairs of the chart, so it is hyperholomorphic
/// without being intrinsic. `G` must be a polynomial, exponential or constant.
pub fn make_product_form(radial: Stem, angular: Stem) -> Result<ComplexLikePair> {
    if matches!(angular, Stem::Reciprocal) {
        return Err(Error::Parse {
            token: angular.to_string(),
            reason: "angular factor must be a polynomial, exp or constant stem".into(),
        });
    }
    Ok(ComplexLikePair::from_node(
        Node::ProductForm { radial, angular },
        format!("prodform({radial},{angular})"),
    ))
}

pub fn cl_add(f: &ComplexLikePair, g: &ComplexLikePair) -> ComplexLikePair {
    ComplexLikePair::from_node(Node::Add(f.clone(), g.clone()), format!("add({f},{g})"))
}

pub fn cl_mul(f: &ComplexLikePair, g: &ComplexLikePair) -> ComplexLikePair {
    ComplexLikePair::from_node(Node::Mul(f.clone(), g.clone()), format!("mul({f},{g})"))
}

pub fn cl_inv(f: &ComplexLikePair) -> ComplexLikePair {
    ComplexLikePair::from_node(Node::Inv(f.clone()), format!("inv({f})"))
}

/// `iota` itself: `u = 0`, `v = 1`.
pub fn make_iota() -> ComplexLikePair {
    ComplexLikePair::custom("iota", |_| 0.0, |_| 1.0, false)
}

/// `u = t`, `v = -r`, i.e. the conjugate `p -> conj(p)`. Violates the first
/// Cauchy-Riemann pair.
pub fn nonexample_conjugate() -> ComplexLikePair {
    ComplexLikePair::custom("nonex:conj", |c| c.t, |c| -c.r, false)
}

/// `u = r`, `v = 0`. Violates the first Cauchy-Riemann pair.
pub fn nonexample_radial() -> ComplexLikePair {
    ComplexLikePair::custom("nonex:radial", |c| c.r, |_| 0.0, false)
}
