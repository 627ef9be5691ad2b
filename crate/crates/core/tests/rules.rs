use regupath_core::noise::make_noisy;
use regupath_core::rules::{discrepancy_select, hanke_raus_select};
use regupath_core::{
    compute_alpha_path, fredholm_model, lr_norm, Fidelity, ForwardModel, GridFunction, NoiseSpec, Penalty,
    SolveOptions,
};

fn brute_force_theta_argmin(thetas: &[(f64, f64)]) -> usize {
    let mut best = 0;
    for (i, &(alpha, theta)) in thetas.iter().enumerate() {
        let (ba, bt) = thetas[best];
        if theta < bt || (theta == bt && alpha > ba) {
            best = i;
        }
    }
    best
}

#[test]
fn hanke_raus_matches_recomputed_theta_table() {
    let model = fredholm_model(101).unwrap();
    let x = GridFunction::from_fn(model.x_grid(), |t| t * (1.0 - t).powi(2) * 8.0);
    let y = model.apply(&x).unwrap();
    for seed in 0..5 {
        let (y_noisy, _) = make_noisy(&y, &NoiseSpec::gaussian(0.02, seed), 2.0).unwrap();
        let fid = Fidelity::new(2.0, y_noisy.clone()).unwrap();
        let path = compute_alpha_path(&model, &fid, &Penalty::Quadratic, 1.0, 0.8, 35, &SolveOptions::default())
            .unwrap();
        let table: Vec<(f64, f64)> = path
            .iter()
            .map(|rec| {
                let res = lr_norm(&model.apply(&rec.x).unwrap().sub(&y_noisy).unwrap(), 2.0).unwrap();
                (rec.alpha, res * res / rec.alpha)
            })
            .collect();
        let outcome = hanke_raus_select(&path).unwrap();
        assert_eq!(outcome.index, brute_force_theta_argmin(&table), "seed {seed}");
        assert_eq!(outcome.alpha_star, path[outcome.index].alpha);
    }
}

#[test]
fn discrepancy_picks_largest_admissible_alpha() {
    let model = fredholm_model(101).unwrap();
    let x = GridFunction::from_fn(model.x_grid(), |t| (3.0 * t).sin());
    let y = model.apply(&x).unwrap();
    let (y_noisy, delta) = make_noisy(&y, &NoiseSpec::gaussian(0.01, 4), 2.0).unwrap();
    let fid = Fidelity::new(2.0, y_noisy).unwrap();
    let path =
        compute_alpha_path(&model, &fid, &Penalty::Quadratic, 1.0, 0.8, 40, &SolveOptions::default()).unwrap();
    for tau in [1.01, 1.615, 2.0, 4.0] {
        let o = discrepancy_select(&path, tau, delta).unwrap();
        assert!(!o.flags.no_qualifying_alpha);
        assert!(o.delta_star <= tau * delta);
        assert!(path[..o.index].iter().all(|r| r.residual > tau * delta));
    }
    let low = discrepancy_select(&path, 1e-3, delta).unwrap();
    assert!(low.flags.no_qualifying_alpha);
    assert_eq!(low.index, path.len() - 1);
}
