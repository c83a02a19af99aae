use std::f64::consts::PI;

use hyperholo_core::functions::{make_constant, make_exp, make_power, make_reciprocal};
use hyperholo_core::integrate::{
    boundary_integral, chain_integral, integral_theorem, lhs_integral, lhs_integral_right,
    relative_mismatch, rhs_integral,
};
use hyperholo_core::quadrature::gauss_legendre_on;
use hyperholo_core::{ComplexLikePair, QuadratureSpec, Quaternion, Region, Side};

fn ball() -> Region {
    Region::offset_sphere(Quaternion::pure(2.0, 0.0, 0.0), 1.0).unwrap()
}

fn torus() -> Region {
    Region::torus(0.0, 2.0, 1.0).unwrap()
}

fn generators() -> Vec<ComplexLikePair> {
    vec![
        make_power(1),
        make_power(2),
        make_power(3),
        make_exp(),
        make_reciprocal(),
    ]
}

/// Boundary integral of `n / r^2` over the unit 3-sphere centred at `2i`, by slicing in `t`.
///
/// Each slice `t = sin(phi)` is a 2-sphere of radius `R = cos(phi)` centred at `2i`. By symmetry only
/// the real part of `n` (which is `t`) and the `i` part survive; the real part is odd in `t`. For the
/// `i` part, the 2-sphere integral of `(x - 2) / |x|^2` reduces to a 1D integral in the polar angle
/// about the `i` axis, done in closed form below.
fn v1_oracle() -> Quaternion {
    let (nodes, weights) = gauss_legendre_on(200, -PI / 2.0, PI / 2.0);
    let mut total = 0.0;
    for (phi, w) in nodes.iter().zip(&weights) {
        let r_slice = phi.cos();
        let a = 4.0 + r_slice * r_slice;
        let b = 4.0 * r_slice;
        // int_{-1}^{1} c / (a + b c) dc = 2/b - (a/b^2) ln((a+b)/(a-b))
        let inner = 2.0 / b - (a / (b * b)) * ((a + b) / (a - b)).ln();
        // 2 pi R^2 * inner, times dt = cos(phi) dphi; outward n has i-part c (cosine of polar angle).
        total += 2.0 * PI * r_slice * r_slice * inner * phi.cos() * w;
    }
    Quaternion::pure(total, 0.0, 0.0)
}

#[test]
fn constant_one_matches_slice_oracle() {
    let spec = QuadratureSpec::default();
    let f = make_constant(1.0);
    let v1 = v1_oracle();
    assert!(v1.x < 0.0);
    let lhs = lhs_integral(&f, &ball(), &spec).unwrap();
    let rhs = rhs_integral(&f, &ball(), &spec).unwrap();
    assert!(relative_mismatch(lhs, v1) < 1e-9, "{lhs:?} vs {v1:?}");
    assert!(relative_mismatch(rhs, v1) < 1e-9, "{rhs:?} vs {v1:?}");
    assert!(lhs.max_abs_diff(lhs_integral_right(&f, &ball(), &spec).unwrap()) < 1e-14);
}

fn tilted_ball() -> Region {
    Region::offset_sphere(Quaternion::new(0.5, 2.0, 0.3, -0.4), 1.2).unwrap()
}

#[test]
fn theorem_holds_on_offset_spheres() {
    let spec = QuadratureSpec::default();
    for f in generators() {
        let tilted = integral_theorem(&f, &tilted_ball(), &spec, Side::Left).unwrap();
        assert!(tilted.rhs.norm() > 1e-2, "{}: {tilted:?}", f.label());
        for side in [Side::Left, Side::Right] {
            let report = integral_theorem(&f, &ball(), &spec, side).unwrap();
            assert!(report.rel_diff < 1e-6, "{} {side:?}: {report:?}", f.label());
            assert!(
                report.middle_lhs_rel_diff < 2e-6,
                "{} {side:?}: {report:?}",
                f.label()
            );
            assert!(
                report.middle_rhs_rel_diff < 2e-6,
                "{} {side:?}: {report:?}",
                f.label()
            );
            let report = integral_theorem(&f, &tilted_ball(), &spec, side).unwrap();
            assert!(report.rel_diff < 1e-6, "{} {side:?}: {report:?}", f.label());
            assert!(report.middle_lhs_rel_diff < 2e-6 && report.middle_rhs_rel_diff < 2e-6);
        }
    }
}

#[test]
fn odd_powers_vanish_on_centred_ball() {
    let spec = QuadratureSpec::default();
    for f in [make_power(1), make_power(3), make_reciprocal()] {
        assert!(
            rhs_integral(&f, &ball(), &spec).unwrap().norm() < 1e-12,
            "{}",
            f.label()
        );
    }
    assert!(rhs_integral(&make_power(2), &ball(), &spec).unwrap().norm() > 1.0);
}

#[test]
fn exp_at_reference_spec() {
    let spec = QuadratureSpec::new(32, 32, 16, 16).unwrap();
    let r = integral_theorem(&make_exp(), &ball(), &spec, Side::Left).unwrap();
    assert!(r.rel_diff < 1e-6, "{r:?}");
}

#[test]
fn right_form_matches_for_power_one() {
    let spec = QuadratureSpec::default();
    let f = make_power(1);
    let lhs = lhs_integral_right(&f, &ball(), &spec).unwrap();
    let rhs = rhs_integral(&f, &ball(), &spec).unwrap();
    assert!((lhs - rhs).norm() < 1e-8);
}

#[test]
fn torus_integrals_vanish() {
    let spec = QuadratureSpec::default();
    for f in generators() {
        let l = boundary_integral(&f, &torus(), &spec, Side::Left).unwrap();
        let m = chain_integral(&f, &torus(), &spec, Side::Left).unwrap();
        let r = rhs_integral(&f, &torus(), &spec).unwrap();
        for q in [l, m, r] {
            assert!(q.norm() < 1e-9, "{}: {q:?}", f.label());
        }
    }
}

#[test]
fn mismatch_shrinks_under_refinement() {
    for f in generators() {
        let mut spec = QuadratureSpec::new(4, 4, 4, 4).unwrap();
        let mut prev = f64::INFINITY;
        for _ in 0..4 {
            let r = integral_theorem(&f, &tilted_ball(), &spec, Side::Left).unwrap();
            println!("{} {spec} {:.3e}", f.label(), r.abs_diff);
            assert!(
                prev <= 1e-11 || r.abs_diff <= prev / 4.0,
                "{} {spec}: {} after {prev}",
                f.label(),
                r.abs_diff
            );
            prev = r.abs_diff;
            spec = spec.doubled();
        }
    }
}
