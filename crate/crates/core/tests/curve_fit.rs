use nlfm_core::fit::{fit_polynomial, fit_smoothing_spline, sse, DataSet, Model, SplineModel};
use nlfm_testkit::{
    compensated_sum, fd_smoothing_oracle_extrapolated, natural_spline_interpolate,
    normal_equations_polyfit, random_grid_data, rng, simpson,
};
use proptest::prelude::*;
use rand::Rng;

const GRID: usize = 500;

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[test]
fn polynomial_matches_normal_equations() {
    let mut r = rng(11);
    for _ in 0..10 {
        let mut x: Vec<f64> = (0..20).map(|_| r.gen_range(-3e-6..2e-6)).collect();
        x.sort_by(f64::total_cmp);
        let y: Vec<f64> = x.iter().map(|_| r.gen_range(-5e7..5e7)).collect();
        let data = DataSet::new(x.clone(), y.clone()).unwrap();
        let model = fit_polynomial(&data, 3).unwrap();
        let oracle = normal_equations_polyfit(&x, &y, 3, model.y_scale());
        for (got, want) in model.conditioned_coefficients().iter().zip(&oracle) {
            assert!(
                (got - want).abs() <= 1e-8 * max_abs(&oracle),
                "{got} vs {want}"
            );
        }
    }
}

#[test]
fn polynomial_residuals_are_orthogonal() {
    let mut r = rng(12);
    let mut x: Vec<f64> = (0..60).map(|_| r.gen_range(0.0..1e-5)).collect();
    x.sort_by(f64::total_cmp);
    let y: Vec<f64> = x
        .iter()
        .map(|&t| (3e5 * t).sin() * 4e7 + r.gen_range(-1e6..1e6))
        .collect();
    let data = DataSet::new(x.clone(), y.clone()).unwrap();
    let degree = 7;
    let model = fit_polynomial(&data, degree).unwrap();
    let y_norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    for p in 0..=degree {
        let u_p: Vec<f64> = x
            .iter()
            .map(|&xi| model.condition(xi).powi(p as i32))
            .collect();
        let dot: f64 = x
            .iter()
            .zip(&y)
            .zip(&u_p)
            .map(|((&xi, &yi), up)| (yi - model.eval(xi).unwrap()) * up)
            .sum();
        let up_norm = u_p.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(dot.abs() <= 1e-6 * y_norm * up_norm, "p={p}: {dot:e}");
    }
}

#[test]
fn polynomial_sse_matches_compensated_sum() {
    let mut r = rng(13);
    let x: Vec<f64> = (0..40)
        .map(|i| i as f64 * 0.1 + r.gen_range(0.0..0.05))
        .collect();
    let y: Vec<f64> = x.iter().map(|_| r.gen_range(-10.0..10.0)).collect();
    let data = DataSet::new(x.clone(), y.clone()).unwrap();
    let model = fit_polynomial(&data, 3).unwrap();
    let oracle = compensated_sum(
        x.iter()
            .zip(&y)
            .map(|(&xi, &yi)| (yi - model.eval(xi).unwrap()).powi(2)),
    );
    let got = sse(&model, &data).unwrap();
    assert!(((got - oracle) / oracle).abs() < 1e-12);
}

#[test]
fn polynomial_beats_perturbed_candidates() {
    let mut r = rng(14);
    let x: Vec<f64> = (0..25).map(|i| i as f64).collect();
    let y: Vec<f64> = x
        .iter()
        .map(|v| v.sqrt() + r.gen_range(-0.1..0.1))
        .collect();
    let data = DataSet::new(x, y).unwrap();
    let model = fit_polynomial(&data, 4).unwrap();
    let best = sse(&model, &data).unwrap();
    let raw = model.raw_coefficients();
    for _ in 0..20 {
        let perturbed: Vec<f64> = raw
            .iter()
            .map(|c| c * (1.0 + r.gen_range(-1e-3..1e-3)))
            .collect();
        let candidate =
            nlfm_core::fit::PolynomialModel::from_coefficients(perturbed, model.domain()).unwrap();
        assert!(sse(&candidate, &data).unwrap() >= best * (1.0 - 1e-12));
    }
}

proptest! {
    #[test]
    fn polynomial_exact_recovery(coeffs in prop::collection::vec(-5.0f64..5.0, 1..7)) {
        let degree = coeffs.len() - 1;
        let data = DataSet::from_pairs((0..30).map(|i| {
            let x = -1.0 + i as f64 / 14.5;
            (x, coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c))
        })).unwrap();
        let model = fit_polynomial(&data, degree).unwrap();
        let sum_y2: f64 = data.y().iter().map(|v| v * v).sum();
        prop_assert!(sse(&model, &data).unwrap() <= 1e-20 * sum_y2.max(1.0));
    }
}

fn spline_oracle_case(seed: u64, n: usize) -> (DataSet, Vec<f64>, f64) {
    let mut r = rng(seed);
    let span = r.gen_range(0.5..5.0);
    let x0 = r.gen_range(-2.0..2.0);
    let (nodes, x, y) = random_grid_data(n, GRID, x0, span, &mut r);
    let h = span / (GRID - 1) as f64;
    let lambda = 1e-3 * span.powi(3);
    let oracle = fd_smoothing_oracle_extrapolated(&nodes, &y, h, GRID, lambda);
    (DataSet::new(x, y).unwrap(), oracle, lambda)
}

#[test]
fn spline_matches_finite_difference_oracle() {
    let (data, oracle, lambda) = spline_oracle_case(21, 30);
    let model = fit_smoothing_spline(&data, lambda).unwrap();
    let scale = max_abs(&oracle);
    for (got, want) in model.values().iter().zip(&oracle) {
        assert!((got - want).abs() <= 1e-5 * scale, "{got} vs {want}");
    }
}

#[test]
fn spline_zero_lambda_matches_textbook_interpolant() {
    let mut r = rng(22);
    let (_, x, y) = random_grid_data(12, 500, 0.0, 3.0, &mut r);
    let data = DataSet::new(x.clone(), y.clone()).unwrap();
    let model = fit_smoothing_spline(&data, 0.0).unwrap();
    for w in x.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let want = natural_spline_interpolate(&x, &y, mid);
        assert!((model.eval(mid).unwrap() - want).abs() < 1e-11);
    }
    let sum_y2: f64 = y.iter().map(|v| v * v).sum();
    assert!(sse(&model, &data).unwrap() <= 1e-18 * sum_y2);
}

fn objective_at(model: &SplineModel, data: &DataSet, values: &[f64]) -> f64 {
    // J for the natural interpolating spline through perturbed knot values
    let perturbed = fit_smoothing_spline(
        &DataSet::new(model.knots().to_vec(), values.to_vec()).unwrap(),
        0.0,
    )
    .unwrap();
    model.lambda() * perturbed.roughness() + sse(&perturbed, data).unwrap()
}

#[test]
fn spline_is_a_minimizer() {
    let mut r = rng(23);
    let (_, x, y) = random_grid_data(25, 1000, 0.0, 2.0, &mut r);
    let data = DataSet::new(x, y).unwrap();
    let model = fit_smoothing_spline(&data, 1e-3 * 8.0).unwrap();
    let best = model.objective(&data).unwrap();
    assert!((objective_at(&model, &data, model.values()) - best).abs() <= 1e-10 * best);
    for _ in 0..10 {
        let values: Vec<f64> = model
            .values()
            .iter()
            .map(|v| v + 1e-3 * v.abs().max(1e-3) * r.gen_range(-1.0..1.0))
            .collect();
        assert!(objective_at(&model, &data, &values) >= best);
    }
}

#[test]
fn lambda_ladder_trades_fit_for_smoothness() {
    let mut r = rng(24);
    let (_, x, y) = random_grid_data(35, 2000, 1.0, 4.0, &mut r);
    let data = DataSet::new(x, y).unwrap();
    let span3 = data.span().powi(3);
    let mut previous: Option<(f64, f64)> = None;
    for e in 0..10 {
        let lambda = span3 * 10f64.powi(e - 7);
        let model = fit_smoothing_spline(&data, lambda).unwrap();
        let (rough, fit) = (model.roughness(), sse(&model, &data).unwrap());
        if let Some((pr, pf)) = previous {
            assert!(
                rough <= pr * (1.0 + 1e-12),
                "roughness rose at lambda {lambda:e}"
            );
            assert!(fit >= pf * (1.0 - 1e-12), "sse fell at lambda {lambda:e}");
        }
        previous = Some((rough, fit));
    }
}

#[test]
fn huge_lambda_approaches_least_squares_line() {
    let mut r = rng(25);
    let (_, x, y) = random_grid_data(30, 2000, -1.0, 2.0, &mut r);
    let data = DataSet::new(x, y).unwrap();
    let model = fit_smoothing_spline(&data, 1e9 * data.span().powi(3)).unwrap();
    let line = fit_polynomial(&data, 1).unwrap();
    let scale = max_abs(data.y());
    for (&xi, v) in data.x().iter().zip(model.values()) {
        assert!((v - line.eval(xi).unwrap()).abs() <= 1e-4 * scale);
    }
}

#[test]
fn spline_is_linear_in_y() {
    let mut r = rng(26);
    let (_, x, y1) = random_grid_data(20, 800, 0.0, 1.0, &mut r);
    let y2: Vec<f64> = x.iter().map(|_| r.gen_range(-2.0..2.0)).collect();
    let y12: Vec<f64> = y1.iter().zip(&y2).map(|(a, b)| a + b).collect();
    let fit = |y: &[f64]| {
        fit_smoothing_spline(&DataSet::new(x.clone(), y.to_vec()).unwrap(), 3e-3).unwrap()
    };
    let (m1, m2, m12) = (fit(&y1), fit(&y2), fit(&y12));
    let scale = max_abs(m12.values()).max(1.0);
    for i in 0..x.len() {
        let sum = m1.values()[i] + m2.values()[i];
        assert!((m12.values()[i] - sum).abs() <= 1e-10 * scale);
    }
}

#[test]
fn roughness_matches_quadrature() {
    let mut r = rng(27);
    let (_, x, y) = random_grid_data(15, 700, 0.0, 3.0, &mut r);
    let data = DataSet::new(x.clone(), y).unwrap();
    let model = fit_smoothing_spline(&data, 1e-2).unwrap();
    let numeric = simpson(
        |t| model.eval_second_derivative(t).unwrap().powi(2),
        x[0],
        x[x.len() - 1],
        100_000,
    );
    let exact = model.roughness();
    assert!(
        ((exact - numeric) / exact).abs() < 1e-6,
        "{exact} vs {numeric}"
    );
}

#[test]
fn single_segment_natural_spline_is_flat() {
    let data = DataSet::from_pairs([(0.0, 1.0), (2.0, 5.0)]).unwrap();
    let model = fit_smoothing_spline(&data, 0.0).unwrap();
    assert_eq!(model.roughness(), 0.0);
}

#[test]
fn spline_knot_evaluation_returns_stored_values() {
    let mut r = rng(28);
    let (_, x, y) = random_grid_data(18, 900, 0.0, 1.0, &mut r);
    let model = fit_smoothing_spline(&DataSet::new(x.clone(), y).unwrap(), 1e-4).unwrap();
    for (xi, v) in x.iter().zip(model.values()) {
        assert!((model.eval(*xi).unwrap() - v).abs() <= 1e-14 * v.abs().max(1.0));
    }
}
