//! Residual suites over sample windows and certification of the integral
//! theorem. Every check returns a [`CheckReport`]; sample points are evaluated
//! in parallel and reduced in sample order, so reports are reproducible.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coords::{from_spherical, iota, to_spherical, SphericalCoords};
use crate::error::{Error, Result};
use crate::functions::{cl_add, cl_inv, cl_mul, ComplexLikePair, ALPHA, BETA, R, T};
use crate::integrate::{integral_theorem, QuadratureSpec, Region};
use crate::operators::{fueter_left_cartesian, fueter_of_laplacian_both, Side};
use crate::quat::Quaternion;
use crate::report::CheckReport;

/// Indicator below this counts as "identity holds".
pub const PASS_BAND: f64 = 1e-6;
/// Indicator above this counts as "identity violated".
pub const FAIL_BAND: f64 = 1e-2;
/// Mismatch floor below which no further reduction is demanded under refinement.
pub const CONVERGENCE_FLOOR: f64 = 1e-11;
/// Minimum reduction factor of the mismatch per doubling of the node counts.
pub const REQUIRED_REDUCTION: f64 = 4.0;
/// Default seed of [`SampleWindow`].
pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Identities involving first derivatives only.
    pub first_order: f64,
    /// Quadrature comparisons.
    pub quadrature: f64,
    /// Identities involving third derivatives.
    pub third_order: f64,
    /// Divergence-theorem self test.
    pub gauss: f64,
    /// Largest admissible fraction of disagreeing or indeterminate samples.
    pub equivalence_fraction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            first_order: 1e-8,
            quadrature: 1e-6,
            third_order: 1e-4,
            gauss: 1e-7,
            equivalence_fraction: 0.01,
        }
    }
}

/// Box in the chart `(t, r, alpha, beta)` sampled uniformly per coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleWindow {
    pub t: (f64, f64),
    pub r: (f64, f64),
    pub alpha: (f64, f64),
    pub beta: (f64, f64),
    pub count: usize,
    pub seed: u64,
}

impl Default for SampleWindow {
    fn default() -> Self {
        Self {
            t: (-2.0, 2.0),
            r: (0.5, 3.0),
            alpha: (0.2, TAU - 0.2),
            beta: (0.3, PI - 0.3),
            count: 200,
            seed: DEFAULT_SEED,
        }
    }
}

impl SampleWindow {
    pub fn validate(&self) -> Result<()> {
        let ordered = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && a <= b;
        if ![self.t, self.r, self.alpha, self.beta]
            .into_iter()
            .all(ordered)
        {
            return Err(Error::InvalidWindow(
                "every range must be finite with lo <= hi".into(),
            ));
        }
        if self.r.0 <= 0.0 {
            return Err(Error::InvalidWindow(format!(
                "r range must stay above 0, got lo = {}",
                self.r.0
            )));
        }
        if self.beta.0 <= 0.0 || self.beta.1 >= PI {
            return Err(Error::InvalidWindow(
                "beta range must lie strictly inside (0, pi)".into(),
            ));
        }
        if self.count == 0 {
            return Err(Error::InvalidWindow("count must be positive".into()));
        }
        Ok(())
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn with_count(self, count: usize) -> Self {
        Self { count, ..self }
    }

    pub fn with_t(self, lo: f64, hi: f64) -> Self {
        Self {
            t: (lo, hi),
            ..self
        }
    }

    pub fn with_r(self, lo: f64, hi: f64) -> Self {
        Self {
            r: (lo, hi),
            ..self
        }
    }

    /// Chart samples, deterministic in `seed`.
    pub fn coords(&self) -> Result<Vec<SphericalCoords>> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut draw = |(lo, hi): (f64, f64)| if lo == hi { lo } else { rng.gen_range(lo..hi) };
        Ok((0..self.count)
            .map(|_| {
                let t = draw(self.t);
                let r = draw(self.r);
                let alpha = draw(self.alpha);
                let beta = draw(self.beta);
                SphericalCoords::new(t, r, alpha, beta)
            })
            .collect())
    }

    pub fn points(&self) -> Result<Vec<Quaternion>> {
        Ok(self.coords()?.into_iter().map(from_spherical).collect())
    }
}

/// The four chart Cauchy-Riemann expressions
/// `[u_t - v_r, v_t + u_r, v_alpha / sin(beta) + u_beta, u_alpha / sin(beta) - v_beta]`.
pub fn cr_residuals(f: &ComplexLikePair, p: Quaternion) -> Result<[f64; 4]> {
    let c = to_spherical(p);
    if c.r == 0.0 {
        return Err(Error::RealAxis);
    }
    let sb = c.beta.sin();
    if sb == 0.0 {
        return Err(Error::PoleSingularity { beta: c.beta });
    }
    let j = f.jet(&c)?;
    Ok([
        j.du(T) - j.dv(R),
        j.dv(T) + j.du(R),
        j.dv(ALPHA) / sb + j.du(BETA),
        j.du(ALPHA) / sb - j.dv(BETA),
    ])
}

/// `|D_l f + 2 v / r|`.
pub fn hyperholomorphic_residual(f: &ComplexLikePair, p: Quaternion) -> Result<f64> {
    let c = to_spherical(p);
    if c.r == 0.0 {
        return Err(Error::RealAxis);
    }
    let v = f.value(&c)?.im;
    Ok((fueter_left_cartesian(f, p)?.value + Quaternion::real(2.0 * v / c.r)).norm())
}

/// `|D_l (f / r^2) + (2 / r^3) u iota|`.
pub fn cullen_lemma_residual(f: &ComplexLikePair, p: Quaternion) -> Result<f64> {
    let c = to_spherical(p);
    if c.r == 0.0 {
        return Err(Error::RealAxis);
    }
    let u = f.value(&c)?.re;
    let lhs = fueter_left_cartesian(&f.scaled_by_inv_r2(), p)?.value;
    Ok((lhs + iota(c.alpha, c.beta) * (2.0 * u / c.r.powi(3))).norm())
}

fn max_abs(r: [f64; 4]) -> f64 {
    r.iter().fold(0.0, |m: f64, x| {
        if m.is_nan() || x.is_nan() {
            f64::NAN
        } else {
            m.max(x.abs())
        }
    })
}

/// Residual per sample (NaN where evaluation failed) and the failures by index.
type Sampled = (Vec<f64>, Vec<(usize, Error)>);

/// Evaluate `residual` at every sample, in parallel, keeping sample order.
fn sample<F>(window: &SampleWindow, residual: F) -> Result<Sampled>
where
    F: Fn(Quaternion) -> Result<f64> + Sync,
{
    let points = window.points()?;
    let results: Vec<Result<f64>> = points.par_iter().map(|p| residual(*p)).collect();
    let mut values = Vec::with_capacity(results.len());
    let mut errors = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(v) => values.push(v),
            Err(e) => {
                values.push(f64::NAN);
                errors.push((i, e));
            }
        }
    }
    Ok((values, errors))
}

fn finish(
    report: CheckReport,
    f: &ComplexLikePair,
    window: &SampleWindow,
    errors: &[(usize, Error)],
) -> CheckReport {
    let report = report
        .with("generator", f.label())
        .with("window", serde_json::to_value(window).unwrap_or_default());
    match errors.first() {
        None => report,
        Some((i, e)) => report
            .with("error_count", errors.len())
            .fail_because(&format!("sample {i}: {e}")),
    }
}

fn pointwise_check<F>(
    name: &str,
    f: &ComplexLikePair,
    window: &SampleWindow,
    tol: f64,
    residual: F,
) -> Result<CheckReport>
where
    F: Fn(Quaternion) -> Result<f64> + Sync,
{
    let (values, errors) = sample(window, residual)?;
    let report = CheckReport::from_residuals(name, &values, tol)
        .with("method", f.partials_source().to_string());
    Ok(finish(report, f, window, &errors))
}

pub fn cr_check(
    f: &ComplexLikePair,
    window: &SampleWindow,
    tol: &Tolerances,
) -> Result<CheckReport> {
    pointwise_check("cr", f, window, tol.first_order, |p| {
        cr_residuals(f, p).map(max_abs)
    })
}

pub fn hyperholomorphic_check(
    f: &ComplexLikePair,
    window: &SampleWindow,
    tol: &Tolerances,
) -> Result<CheckReport> {
    pointwise_check("hyperholomorphic", f, window, tol.first_order, |p| {
        hyperholomorphic_residual(f, p)
    })
}

pub fn cullen_lemma_check(
    f: &ComplexLikePair,
    window: &SampleWindow,
    tol: &Tolerances,
) -> Result<CheckReport> {
    pointwise_check("cullen-lemma", f, window, tol.first_order, |p| {
        cullen_lemma_residual(f, p)
    })
}

/// Classification of one residual against the hysteresis band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Indicator {
    Holds,
    Violated,
    Indeterminate,
}

impl Indicator {
    pub fn of(residual: f64) -> Self {
        if residual < PASS_BAND {
            Indicator::Holds
        } else if residual > FAIL_BAND {
            Indicator::Violated
        } else {
            Indicator::Indeterminate
        }
    }
}

/// Per-sample agreement of the three characterizations (chart CR equations,
/// operator identity, scaled identity). The residual is the fraction of
/// samples where they disagree or one of them is inside the band.
pub fn equivalence_check(
    f: &ComplexLikePair,
    window: &SampleWindow,
    tol: &Tolerances,
) -> Result<CheckReport> {
    let points = window.points()?;
    let per_point: Vec<Result<[Indicator; 3]>> = points
        .par_iter()
        .map(|p| {
            Ok([
                Indicator::of(max_abs(cr_residuals(f, *p)?)),
                Indicator::of(hyperholomorphic_residual(f, *p)?),
                Indicator::of(cullen_lemma_residual(f, *p)?),
            ])
        })
        .collect();
    let (mut holds, mut violated, mut disagree, mut indeterminate) =
        (0usize, 0usize, 0usize, 0usize);
    let mut errors = Vec::new();
    for (i, r) in per_point.into_iter().enumerate() {
        match r {
            Ok(ind) if ind.contains(&Indicator::Indeterminate) => indeterminate += 1,
            Ok(ind) if ind.iter().all(|x| *x == Indicator::Holds) => holds += 1,
            Ok(ind) if ind.iter().all(|x| *x == Indicator::Violated) => violated += 1,
            Ok(_) => disagree += 1,
            Err(e) => errors.push((i, e)),
        }
    }
    let n = points.len();
    let fraction = (disagree + indeterminate + errors.len()) as f64 / n as f64;
    let verdict = if holds == n {
        "hyperholomorphic"
    } else if violated == n {
        "not hyperholomorphic"
    } else {
        "mixed"
    };
    let mut report =
        CheckReport::from_residuals("equivalence", &[fraction], tol.equivalence_fraction)
            .with("verdict", verdict)
            .with("agree_holds", holds)
            .with("agree_violated", violated)
            .with("disagree", disagree)
            .with("indeterminate", indeterminate)
            .with("pass_band", PASS_BAND)
            .with("fail_band", FAIL_BAND);
    report.sample_count = n;
    Ok(finish(report, f, window, &errors))
}

/// Residuals of `f + g`, `f g` and `1 / f` (the latter only where
/// `u^2 + v^2 > 1e-6`).
pub fn closure_check(
    f: &ComplexLikePair,
    g: &ComplexLikePair,
    window: &SampleWindow,
    tol: &Tolerances,
) -> Result<CheckReport> {
    let sum = cl_add(f, g);
    let product = cl_mul(f, g);
    let inverse = cl_inv(f);
    let (values, errors) = sample(window, |p| {
        let s = hyperholomorphic_residual(&sum, p)?;
        let m = hyperholomorphic_residual(&product, p)?;
        let h = f.value(&to_spherical(p))?;
        let i = if h.norm_sqr() > 1e-6 {
            hyperholomorphic_residual(&inverse, p)?
        } else {
            0.0
        };
        Ok(s.max(m).max(i))
    })?;
    let excluded = window
        .coords()?
        .iter()
        .filter(|c| f.value(c).map(|h| h.norm_sqr() <= 1e-6).unwrap_or(true))
        .count();
    let report = CheckReport::from_residuals("closure", &values, tol.first_order)
        .with("partner", g.label())
        .with("inverse_excluded", excluded);
    Ok(finish(report, f, window, &errors))
}

/// `max(|D_l Laplacian f|, |D_r Laplacian f|)` over the window.
pub fn fueter_theorem_check(
    f: &ComplexLikePair,
    window: &SampleWindow,
    tol: &Tolerances,
) -> Result<CheckReport> {
    pointwise_check("fueter-theorem", f, window, tol.third_order, |p| {
        let (l, r) = fueter_of_laplacian_both(f, p)?;
        Ok(l.value.norm().max(r.value.norm()))
    })
}

/// Both sides of the integral theorem and the middle link of the chain.
/// Residual is the relative mismatch of the two sides; the middle term must
/// agree with each within twice the tolerance.
pub fn integral_theorem_check(
    f: &ComplexLikePair,
    region: &Region,
    spec: &QuadratureSpec,
    side: Side,
    tol: &Tolerances,
) -> Result<CheckReport> {
    let r = integral_theorem(f, region, spec, side)?;
    let name = match side {
        Side::Left => "integral-theorem",
        Side::Right => "integral-theorem-right",
    };
    let mut report = CheckReport::from_residuals(name, &[r.rel_diff], tol.quadrature)
        .with("generator", f.label())
        .with("region", region.to_string())
        .with("spec", spec.to_string())
        .with("lhs", r.lhs.to_array().to_vec())
        .with("rhs", r.rhs.to_array().to_vec())
        .with("middle", r.middle.to_array().to_vec())
        .with("abs_diff", r.abs_diff)
        .with("rel_diff", r.rel_diff)
        .with("middle_lhs_rel_diff", r.middle_lhs_rel_diff)
        .with("middle_rhs_rel_diff", r.middle_rhs_rel_diff);
    report.sample_count = 1;
    let chain_tol = 2.0 * tol.quadrature;
    if r.middle_lhs_rel_diff > chain_tol || r.middle_rhs_rel_diff > chain_tol {
        report = report
            .fail_because("middle term of the chain disagrees with the boundary or volume side");
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub spec: QuadratureSpec,
    pub abs_diff: f64,
    /// `previous abs_diff / abs_diff`; absent on the first row.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub generator: String,
    pub region: Region,
    pub reports: Vec<CheckReport>,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceStudy {
    /// Header `spec,abs_diff,ratio`; the first ratio is empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("spec,abs_diff,ratio\n");
        for row in &self.rows {
            let ratio = row.ratio.map(|r| format!("{r:e}")).unwrap_or_default();
            out.push_str(&format!("{},{:e},{}\n", row.spec, row.abs_diff, ratio));
        }
        out
    }

    /// Each refinement from a mismatch above [`CONVERGENCE_FLOOR`] must reduce
    /// it by [`REQUIRED_REDUCTION`] or land below the floor. Residual per
    /// step is `new / old`, or 0 when the step is exempt.
    pub fn check(&self) -> CheckReport {
        let steps: Vec<f64> = self
            .rows
            .windows(2)
            .map(|w| {
                let (old, new) = (w[0].abs_diff, w[1].abs_diff);
                if old <= CONVERGENCE_FLOOR || new <= CONVERGENCE_FLOOR {
                    0.0
                } else {
                    new / old
                }
            })
            .collect();
        let mut report =
            CheckReport::from_residuals("convergence", &steps, 1.0 / REQUIRED_REDUCTION)
                .with("generator", self.generator.as_str())
                .with("region", self.region.to_string())
                .with("floor", CONVERGENCE_FLOOR)
                .with(
                    "specs",
                    self.rows
                        .iter()
                        .map(|r| r.spec.to_string())
                        .collect::<Vec<_>>(),
                )
                .with(
                    "abs_diff",
                    self.rows.iter().map(|r| r.abs_diff).collect::<Vec<_>>(),
                );
        if self.rows.len() < 2 {
            report = report.fail_because("need at least two specs");
        }
        report
    }
}

/// Integral-theorem mismatch over a sequence of specs.
pub fn convergence_study(
    f: &ComplexLikePair,
    region: &Region,
    specs: &[QuadratureSpec],
    side: Side,
    tol: &Tolerances,
) -> Result<ConvergenceStudy> {
    let mut reports = Vec::with_capacity(specs.len());
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(specs.len());
    for spec in specs {
        let report = integral_theorem_check(f, region, spec, side, tol)?;
        let abs_diff = report.metadata["abs_diff"].as_f64().unwrap_or(f64::NAN);
        let ratio = rows.last().map(|prev| prev.abs_diff / abs_diff);
        rows.push(ConvergenceRow {
            spec: *spec,
            abs_diff,
            ratio,
        });
        reports.push(report.with("ratio", ratio));
    }
    Ok(ConvergenceStudy {
        generator: f.label().to_string(),
        region: *region,
        reports,
        rows,
    })
}

/// Residual suites run per generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Cr,
    Hyperholomorphic,
    CullenLemma,
    Equivalence,
    Closure,
    FueterTheorem,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Cr,
        Suite::Hyperholomorphic,
        Suite::CullenLemma,
        Suite::Equivalence,
        Suite::Closure,
        Suite::FueterTheorem,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Cr => "cr",
            Suite::Hyperholomorphic => "hyperholomorphic",
            Suite::CullenLemma => "cullen-lemma",
            Suite::Equivalence => "equivalence",
            Suite::Closure => "closure",
            Suite::FueterTheorem => "fueter-theorem",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| Error::Parse {
                token: s.trim().to_string(),
                reason: "unknown suite".into(),
            })
    }
}
