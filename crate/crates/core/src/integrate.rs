//! Regions of H disjoint from the real axis, their boundary and volume
//! quadrature, and the two sides of the surface/volume integral theorem.
//!
//! Two region families are parametrized independently:
//!
//! * [`TorusRegion`]: the disk `(t - t0)^2 + (r - r0)^2 <= rho^2` in the
//!   `(t, r)` half-plane swept over the whole sphere of `iota`. Uses chart
//!   measures (`r^2 sin beta`).
//! * [`OffsetSphereRegion`]: a Euclidean 4-ball whose closure stays off the real
//!   axis. Uses hyperspherical angles about the centre.
//!
//! Periodic angles use the trapezoid rule; bounded ones use Gauss-Legendre, so
//! no node ever lands on a pole of a parametrization.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coords::{from_spherical, iota, to_spherical, SphericalCoords};
use crate::error::{Error, Result};
use crate::field::QuaternionField;
use crate::functions::ComplexLikePair;
use crate::operators::{fueter_cartesian, Side};
use crate::quadrature::{gauss_legendre_on, ordered_sum, periodic_trapezoid};
use crate::quat::Quaternion;
use crate::report::CheckReport;

/// Denominator floor of [`relative_mismatch`]. With a relative tolerance of
/// `1e-6` this holds integrals that vanish by symmetry to `1e-9` absolute.
pub const RELATIVE_FLOOR: f64 = 1e-3;

/// `|a - b| / max(|a|, |b|, RELATIVE_FLOOR)`.
pub fn relative_mismatch(a: Quaternion, b: Quaternion) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(RELATIVE_FLOOR)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusRegion {
    pub t0: f64,
    pub r0: f64,
    pub rho: f64,
}

impl TorusRegion {
    pub fn new(t0: f64, r0: f64, rho: f64) -> Result<Self> {
        if !(t0.is_finite() && r0.is_finite() && rho.is_finite()) || rho <= 0.0 {
            return Err(Error::RegionTouchesAxis(format!(
                "torus({t0},{r0},{rho}): need finite values and rho > 0"
            )));
        }
        if rho >= r0 {
            return Err(Error::RegionTouchesAxis(format!(
                "torus({t0},{r0},{rho}): need rho < r0"
            )));
        }
        Ok(Self { t0, r0, rho })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OffsetSphereRegion {
    pub center: Quaternion,
    pub rho: f64,
}

impl OffsetSphereRegion {
    pub fn new(center: Quaternion, rho: f64) -> Result<Self> {
        let rc = (center.x * center.x + center.y * center.y + center.z * center.z).sqrt();
        if !center.is_finite() || !rho.is_finite() || rho <= 0.0 {
            return Err(Error::RegionTouchesAxis(format!(
                "sphere: need finite centre and rho > 0, got rho = {rho}"
            )));
        }
        if rho >= rc {
            return Err(Error::RegionTouchesAxis(format!(
                "sphere: need rho < r(center) = {rc}, got rho = {rho}"
            )));
        }
        Ok(Self { center, rho })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Region {
    Torus(TorusRegion),
    OffsetSphere(OffsetSphereRegion),
}

impl Region {
    pub fn torus(t0: f64, r0: f64, rho: f64) -> Result<Self> {
        TorusRegion::new(t0, r0, rho).map(Region::Torus)
    }

    pub fn offset_sphere(center: Quaternion, rho: f64) -> Result<Self> {
        OffsetSphereRegion::new(center, rho).map(Region::OffsetSphere)
    }

    /// Smallest distance to the real axis over the closed region.
    pub fn min_r(&self) -> f64 {
        match self {
            Region::Torus(t) => t.r0 - t.rho,
            Region::OffsetSphere(s) => to_spherical(s.center).r - s.rho,
        }
    }

    pub fn contains(&self, q: Quaternion) -> bool {
        match self {
            Region::Torus(t) => {
                let c = to_spherical(q);
                (c.t - t.t0).powi(2) + (c.r - t.r0).powi(2) <= t.rho * t.rho
            }
            Region::OffsetSphere(s) => (q - s.center).norm() <= s.rho,
        }
    }

    /// Closed-form 3-volume of the boundary.
    pub fn boundary_area(&self) -> f64 {
        match self {
            Region::Torus(t) => 8.0 * PI * PI * t.rho * (t.r0 * t.r0 + 0.5 * t.rho * t.rho),
            Region::OffsetSphere(s) => 2.0 * PI * PI * s.rho.powi(3),
        }
    }

    /// Closed-form 4-volume.
    pub fn volume(&self) -> f64 {
        match self {
            Region::Torus(t) => {
                4.0 * PI * PI * t.rho * t.rho * (t.r0 * t.r0 + 0.25 * t.rho * t.rho)
            }
            Region::OffsetSphere(s) => 0.5 * PI * PI * s.rho.powi(4),
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Torus(t) => write!(f, "torus({},{},{})", t.t0, t.r0, t.rho),
            Region::OffsetSphere(s) => {
                let c = s.center;
                write!(f, "sphere({},{},{},{},{})", c.w, c.x, c.y, c.z, s.rho)
            }
        }
    }
}

impl FromStr for Region {
    type Err = Error;

    /// `torus(t0,r0,rho)` or `sphere(w,x,y,z,rho)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse {
            token: s.trim().to_string(),
            reason: why.to_string(),
        };
        let s_trim = s.trim();
        let open = s_trim.find('(').ok_or_else(|| bad("expected kind(args)"))?;
        if !s_trim.ends_with(')') {
            return Err(bad("missing `)`"));
        }
        let kind = s_trim[..open].trim();
        let args: Vec<f64> = s_trim[open + 1..s_trim.len() - 1]
            .split(',')
            .map(|a| a.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("arguments must be real numbers"))?;
        match (kind, args.as_slice()) {
            ("torus", [t0, r0, rho]) => Region::torus(*t0, *r0, *rho),
            ("sphere", [w, x, y, z, rho]) => {
                Region::offset_sphere(Quaternion::new(*w, *x, *y, *z), *rho)
            }
            ("torus", _) => Err(bad("torus takes 3 arguments (t0,r0,rho)")),
            ("sphere", _) => Err(bad("sphere takes 5 arguments (w,x,y,z,rho)")),
            _ => Err(bad("unknown region kind (expected torus or sphere)")),
        }
    }
}

/// Node counts of the tensor-product rule.
///
/// * `n_theta`: trapezoid nodes of the torus tube angle; Gauss nodes of the
///   first polar angle of the offset sphere.
/// * `n_alpha`: trapezoid nodes of the azimuth (both families).
/// * `n_beta`: Gauss nodes of the polar angle of the 2-sphere.
/// * `n_radial`: Gauss nodes of the radial variable of volume rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub n_theta: usize,
    pub n_alpha: usize,
    pub n_beta: usize,
    pub n_radial: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            n_theta: 64,
            n_alpha: 32,
            n_beta: 32,
            n_radial: 16,
        }
    }
}

impl QuadratureSpec {
    pub fn new(n_theta: usize, n_alpha: usize, n_beta: usize, n_radial: usize) -> Result<Self> {
        let s = Self {
            n_theta,
            n_alpha,
            n_beta,
            n_radial,
        };
        if [n_theta, n_alpha, n_beta, n_radial].iter().any(|n| *n < 4) {
            return Err(Error::InvalidSpec(format!(
                "{s}: every node count must be >= 4"
            )));
        }
        Ok(s)
    }

    pub fn doubled(&self) -> Self {
        Self {
            n_theta: 2 * self.n_theta,
            n_alpha: 2 * self.n_alpha,
            n_beta: 2 * self.n_beta,
            n_radial: 2 * self.n_radial,
        }
    }
}

impl fmt::Display for QuadratureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x{}x{}x{}",
            self.n_theta, self.n_alpha, self.n_beta, self.n_radial
        )
    }
}

impl FromStr for QuadratureSpec {
    type Err = Error;

    /// `n_theta x n_alpha x n_beta x n_radial`, e.g. `32x32x16x16`.
    fn from_str(s: &str) -> Result<Self> {
        let n: Vec<usize> = s
            .trim()
            .split('x')
            .map(|a| a.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| {
                Error::InvalidSpec(format!("`{s}`: expected four counts like 32x32x16x16"))
            })?;
        match n.as_slice() {
            [a, b, c, d] => Self::new(*a, *b, *c, *d),
            _ => Err(Error::InvalidSpec(format!(
                "`{s}`: expected four counts like 32x32x16x16"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceNode {
    pub point: Quaternion,
    /// Unit outward normal `n_0 + n_1 i + n_2 j + n_3 k`.
    pub normal: Quaternion,
    /// Surface element times rule weights.
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeNode {
    pub point: Quaternion,
    pub weight: f64,
}

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule {
    fn gauss(n: usize, a: f64, b: f64) -> Self {
        let (nodes, weights) = gauss_legendre_on(n, a, b);
        Self { nodes, weights }
    }

    fn periodic(n: usize) -> Self {
        let (nodes, weights) = periodic_trapezoid(n, 0.0, TAU);
        Self { nodes, weights }
    }

    fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// `omega(psi, b, a)`: point of the unit 3-sphere in `(t, x, y, z)` order.
fn hypersphere_point(psi: f64, b: f64, a: f64) -> Quaternion {
    let (sp, cp) = psi.sin_cos();
    let (sb, cb) = b.sin_cos();
    let (sa, ca) = a.sin_cos();
    Quaternion::new(cp, sp * cb, sp * sb * ca, sp * sb * sa)
}

pub fn surface_nodes(region: &Region, spec: &QuadratureSpec) -> Vec<SurfaceNode> {
    let alpha = Rule::periodic(spec.n_alpha);
    let beta = Rule::gauss(spec.n_beta, 0.0, PI);
    let mut out = Vec::new();
    match region {
        Region::Torus(tr) => {
            let theta = Rule::periodic(spec.n_theta);
            out.reserve(spec.n_theta * spec.n_alpha * spec.n_beta);
            for (th, wt) in theta.iter() {
                let (s, c) = th.sin_cos();
                let t = tr.t0 + tr.rho * c;
                let r = tr.r0 + tr.rho * s;
                for (b, wb) in beta.iter() {
                    for (a, wa) in alpha.iter() {
                        let unit = iota(a, b);
                        out.push(SurfaceNode {
                            point: from_spherical(SphericalCoords::new(t, r, a, b)),
                            normal: Quaternion::real(c) + unit * s,
                            weight: tr.rho * r * r * b.sin() * wt * wb * wa,
                        });
                    }
                }
            }
        }
        Region::OffsetSphere(sp) => {
            let psi = Rule::gauss(spec.n_theta, 0.0, PI);
            out.reserve(spec.n_theta * spec.n_alpha * spec.n_beta);
            let rho3 = sp.rho.powi(3);
            for (ps, wp) in psi.iter() {
                let sin_psi = ps.sin();
                for (b, wb) in beta.iter() {
                    for (a, wa) in alpha.iter() {
                        let omega = hypersphere_point(ps, b, a);
                        out.push(SurfaceNode {
                            point: sp.center + omega * sp.rho,
                            normal: omega,
                            weight: rho3 * sin_psi * sin_psi * b.sin() * wp * wb * wa,
                        });
                    }
                }
            }
        }
    }
    out
}

pub fn volume_nodes(region: &Region, spec: &QuadratureSpec) -> Vec<VolumeNode> {
    let alpha = Rule::periodic(spec.n_alpha);
    let beta = Rule::gauss(spec.n_beta, 0.0, PI);
    let mut out = Vec::new();
    match region {
        Region::Torus(tr) => {
            let radial = Rule::gauss(spec.n_radial, 0.0, tr.rho);
            let theta = Rule::periodic(spec.n_theta);
            out.reserve(spec.n_radial * spec.n_theta * spec.n_alpha * spec.n_beta);
            for (s, ws) in radial.iter() {
                for (th, wt) in theta.iter() {
                    let (sn, cs) = th.sin_cos();
                    let t = tr.t0 + s * cs;
                    let r = tr.r0 + s * sn;
                    for (b, wb) in beta.iter() {
                        for (a, wa) in alpha.iter() {
                            out.push(VolumeNode {
                                point: from_spherical(SphericalCoords::new(t, r, a, b)),
                                weight: s * r * r * b.sin() * ws * wt * wb * wa,
                            });
                        }
                    }
                }
            }
        }
        Region::OffsetSphere(sp) => {
            let radial = Rule::gauss(spec.n_radial, 0.0, sp.rho);
            let psi = Rule::gauss(spec.n_theta, 0.0, PI);
            out.reserve(spec.n_radial * spec.n_theta * spec.n_alpha * spec.n_beta);
            for (s, ws) in radial.iter() {
                for (ps, wp) in psi.iter() {
                    let sin_psi = ps.sin();
                    for (b, wb) in beta.iter() {
                        for (a, wa) in alpha.iter() {
                            out.push(VolumeNode {
                                point: sp.center + hypersphere_point(ps, b, a) * s,
                                weight: s.powi(3) * sin_psi * sin_psi * b.sin() * ws * wp * wb * wa,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

fn require_single_valued(f: &ComplexLikePair) -> Result<()> {
    if f.is_intrinsic() {
        Ok(())
    } else {
        Err(Error::NotSingleValued(f.label().to_string()))
    }
}

fn r_of(p: Quaternion) -> f64 {
    (p.x * p.x + p.y * p.y + p.z * p.z).sqrt()
}

/// `int_K n(p) f(p) / r^2 dS` (normal multiplies from the left).
pub fn lhs_integral(
    f: &ComplexLikePair,
    region: &Region,
    spec: &QuadratureSpec,
) -> Result<Quaternion> {
    boundary_integral(f, region, spec, Side::Left)
}

/// `int_K f(p) n(p) / r^2 dS` (normal multiplies from the right).
pub fn lhs_integral_right(
    f: &ComplexLikePair,
    region: &Region,
    spec: &QuadratureSpec,
) -> Result<Quaternion> {
    boundary_integral(f, region, spec, Side::Right)
}

pub fn boundary_integral(
    f: &ComplexLikePair,
    region: &Region,
    spec: &QuadratureSpec,
    side: Side,
) -> Result<Quaternion> {
    require_single_valued(f)?;
    let nodes = surface_nodes(region, spec);
    ordered_sum(&nodes, |node| {
        let value = f.eval(node.point)?;
        let r = r_of(node.point);
        let product = match side {
            Side::Left => node.normal * value,
            Side::Right => value * node.normal,
        };
        Ok(product * (node.weight / (r * r)))
    })
}

/// `-2 int_{K*} u iota / r^3 dV`.
pub fn rhs_integral(
    f: &ComplexLikePair,
    region: &Region,
    spec: &QuadratureSpec,
) -> Result<Quaternion> {
    require_single_valued(f)?;
    let nodes = volume_nodes(region, spec);
    let sum = ordered_sum(&nodes, |node| {
        let c = to_spherical(node.point);
        let u = f.value(&c)?.re;
        Ok(iota(c.alpha, c.beta) * (u * node.weight / (c.r * c.r * c.r)))
    })?;
    Ok(sum * -2.0)
}

/// `int_{K*} D_side(f / r^2) dV`, the middle term of the proof chain.
pub fn chain_integral(
    f: &ComplexLikePair,
    region: &Region,
    spec: &QuadratureSpec,
    side: Side,
) -> Result<Quaternion> {
    require_single_valued(f)?;
    let scaled = f.scaled_by_inv_r2();
    let nodes = volume_nodes(region, spec);
    ordered_sum(&nodes, |node| {
        Ok(fueter_cartesian(&scaled, node.point, side)?.value * node.weight)
    })
}

/// Both sides of the integral theorem plus the middle link of the chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralReport {
    pub generator: String,
    pub side: Side,
    pub lhs: Quaternion,
    pub rhs: Quaternion,
    pub middle: Quaternion,
    pub abs_diff: f64,
    pub rel_diff: f64,
    pub middle_lhs_rel_diff: f64,
    pub middle_rhs_rel_diff: f64,
    pub spec: QuadratureSpec,
    pub region: Region,
}

pub fn integral_theorem(
    f: &ComplexLikePair,
    region: &Region,
    spec: &QuadratureSpec,
    side: Side,
) -> Result<IntegralReport> {
    let lhs = boundary_integral(f, region, spec, side)?;
    let rhs = rhs_integral(f, region, spec)?;
    let middle = chain_integral(f, region, spec, side)?;
    Ok(IntegralReport {
        generator: f.label().to_string(),
        side,
        lhs,
        rhs,
        middle,
        abs_diff: (lhs - rhs).norm(),
        rel_diff: relative_mismatch(lhs, rhs),
        middle_lhs_rel_diff: relative_mismatch(middle, lhs),
        middle_rhs_rel_diff: relative_mismatch(middle, rhs),
        spec: *spec,
        region: *region,
    })
}

/// Divergence theorem for a quaternion-valued field: volume integral of the
/// divergence against the boundary flux, compared by [`relative_mismatch`].
pub fn gauss_check<F: QuaternionField>(
    field: &F,
    region: &Region,
    spec: &QuadratureSpec,
    tolerance: f64,
) -> CheckReport {
    let volume = ordered_sum(&volume_nodes(region, spec), |n| {
        Ok(field.divergence(n.point) * n.weight)
    })
    .unwrap_or(Quaternion::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN));
    let surface = ordered_sum(&surface_nodes(region, spec), |n| {
        Ok(field.flux(n.point, n.normal) * n.weight)
    })
    .unwrap_or(Quaternion::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN));
    let rel = relative_mismatch(volume, surface);
    CheckReport::from_residuals("gauss", &[rel], tolerance)
        .with("volume_side", volume.to_array().to_vec())
        .with("surface_side", surface.to_array().to_vec())
        .with("abs_diff", (volume - surface).norm())
        .with("region", region.to_string())
        .with("spec", spec.to_string())
}
