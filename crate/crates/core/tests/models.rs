mod common;

use common::{random_fn, rng, smooth_random_fn};
use regupath_core::{l2_inner, l2_norm, EllipticModel, ForwardModel, GridFunction};

fn elliptic() -> EllipticModel {
    EllipticModel::with_source_fn(400, 1.0, 6.0, |t| 100.0 * (-10.0 * (t - 0.5) * (t - 0.5)).exp()).unwrap()
}

fn positive_coefficient(model: &EllipticModel, rng: &mut impl rand::Rng) -> GridFunction {
    smooth_random_fn(model.x_grid(), rng).map(|v| 1.5 + v.clamp(-1.4, 5.0))
}

#[test]
fn fredholm_is_linear() {
    let model = regupath_core::fredholm_model(101).unwrap();
    let mut r = rng(1);
    let x = random_fn(model.x_grid(), &mut r, -1.0, 1.0);
    let z = random_fn(model.x_grid(), &mut r, -1.0, 1.0);
    let lhs = model.apply(&x.axpy(-2.5, &z).unwrap()).unwrap();
    let rhs = model.apply(&x).unwrap().axpy(-2.5, &model.apply(&z).unwrap()).unwrap();
    assert!(l2_norm(&lhs.sub(&rhs).unwrap()) <= 1e-12 * l2_norm(&rhs));
    let d = model.derivative(&z, &x).unwrap();
    assert_eq!(d, model.apply(&x).unwrap());
}

#[test]
fn elliptic_adjoint_identity() {
    let model = elliptic();
    let mut r = rng(2);
    for _ in 0..20 {
        let c = positive_coefficient(&model, &mut r);
        let h = random_fn(model.x_grid(), &mut r, -1.0, 1.0);
        let w = random_fn(model.y_grid(), &mut r, -1.0, 1.0);
        let fh = model.derivative(&c, &h).unwrap();
        let fw = model.adjoint_derivative(&c, &w).unwrap();
        let lhs = l2_inner(&fh, &w).unwrap();
        let rhs = l2_inner(&h, &fw).unwrap();
        assert!((lhs - rhs).abs() <= 1e-10 * l2_norm(&fh) * l2_norm(&w), "{lhs} vs {rhs}");
    }
}

#[test]
fn elliptic_taylor_remainder_is_second_order() {
    let model = elliptic();
    let mut r = rng(3);
    let c = positive_coefficient(&model, &mut r);
    let h = smooth_random_fn(model.x_grid(), &mut r);
    let u = model.apply(&c).unwrap();
    let du = model.derivative(&c, &h).unwrap();
    let remainder = |s: f64| {
        let us = model.apply(&c.axpy(s, &h).unwrap()).unwrap();
        l2_norm(&us.sub(&u).unwrap().axpy(-s, &du).unwrap())
    };
    for s in [1e-1, 5e-2, 2.5e-2] {
        let ratio = remainder(s) / remainder(s / 2.0);
        assert!((ratio - 4.0).abs() <= 0.8, "s={s}: ratio {ratio}");
    }
}

#[test]
fn larger_coefficient_lowers_the_state() {
    // Nonnegative f and boundary data make u >= 0, and A(c)^{-1} is positive,
    // so F'(c) maps nonnegative directions to nonpositive states.
    let model = elliptic();
    let mut r = rng(4);
    let c = positive_coefficient(&model, &mut r);
    let u = model.apply(&c).unwrap();
    assert!(u.values().iter().all(|&v| v > 0.0));
    let bump = GridFunction::from_fn(model.x_grid(), |t| (-(t - 0.4).powi(2) * 50.0).exp());
    let du = model.derivative(&c, &bump).unwrap();
    assert!(du.values().iter().all(|&v| v <= 0.0));
    let u2 = model.apply(&c.add(&bump).unwrap()).unwrap();
    assert!(u2.values().iter().zip(u.values()).all(|(a, b)| a <= b));
}

#[test]
fn boundary_coefficients_do_not_matter() {
    let model = elliptic();
    let mut r = rng(5);
    let c = positive_coefficient(&model, &mut r);
    let mut v = c.values().to_vec();
    v[0] += 10.0;
    *v.last_mut().unwrap() += 10.0;
    let c2 = GridFunction::new(model.x_grid(), v).unwrap();
    assert_eq!(model.apply(&c).unwrap(), model.apply(&c2).unwrap());
    let w = random_fn(model.y_grid(), &mut r, -1.0, 1.0);
    let g = model.adjoint_derivative(&c, &w).unwrap();
    assert_eq!(g.values()[0], 0.0);
    assert_eq!(*g.values().last().unwrap(), 0.0);
}

#[test]
fn elliptic_rejects_negative_coefficient_but_projects() {
    let model = elliptic();
    let c = GridFunction::constant(model.x_grid(), -0.5);
    assert!(!model.domain_check(&c));
    assert!(model.apply(&c).is_err());
    let p = model.project(c);
    assert!(model.domain_check(&p));
}
