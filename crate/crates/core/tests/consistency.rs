mod common;

use common::model;
use num_rational::Rational64;
use tf_ion::elimination::{eliminate, h_coefficients};
use tf_ion::oracle::{shoot, solve_for_n};
use tf_ion::{ExpansionConfig, KSeriesName, Method, Model, PipelineConfig, ShootConfig};

#[test]
fn n_series_reproduce_k_series_at_small_k() {
    let m = model();
    // The truncated N(K) costs about N_7 K^7 in N, amplified by dA/dN ~ a/N,
    // so K must be small for an 1e-8 comparison.
    let k_star = 0.02;
    let n_star = m.k_series.n.partial_sum(k_star, 6).unwrap();
    let a_k = (k_star / 2.0).powf(-2.0 / 3.0);
    let a_n = m.n_series.a.partial_sum(n_star, 5).unwrap();
    assert!((a_k - a_n).abs() < 1e-8, "{a_k} vs {a_n}");

    let b_k = a_k * m.k_series.ba.partial_sum(k_star, 6).unwrap();
    let b_n = m.n_series.b.partial_sum(n_star, 5).unwrap();
    assert!((b_k - b_n).abs() < 1e-8, "{b_k} vs {b_n}");
}

#[test]
fn h_series_of_computed_n() {
    let h = h_coefficients(&model().k_series.n).unwrap();
    assert_eq!(h.coeff(0), 1.0);
    assert!((h.coeff(1) - 0.634051).abs() < 5e-6);
}

#[test]
fn leading_coefficients_coincide() {
    let ns = &model().n_series;
    let lead = (2.0 * std::f64::consts::PI / 32.0).powf(2.0 / 3.0);
    for (label, s) in ns.columns() {
        let want = if label == "B" { 3.0 * lead } else { lead };
        assert!((s.coeff(0) - want).abs() < 1e-9, "{label}");
    }
}

#[test]
fn binding_needs_stripping() {
    let k = &model().k_series;
    assert_eq!(k.binding_over_a.coeff(0), 0.0);
    let b = eliminate(&k.binding_over_a, Rational64::new(-2, 3), &k.n).unwrap();
    assert_eq!(b.alpha(), Rational64::new(1, 3));
}

#[test]
fn coarse_grid_still_close() {
    let coarse = Model::run(PipelineConfig::new(6, 201)).unwrap();
    let fine = model();
    for name in KSeriesName::ALL {
        for (a, b) in coarse.k_series.get(name).coeffs().iter().zip(fine.k_series.get(name).coeffs()) {
            assert!((a - b).abs() < 1e-6, "{name}");
        }
    }
}

#[test]
fn higher_order_expansion() {
    let m = Model::run(PipelineConfig {
        expansion: ExpansionConfig { order: 8, grid: 20001 },
    })
    .unwrap();
    assert_eq!(m.n_series.order(), 7);
    let r = m.n_series.check_recursions();
    assert!(r.max() < 1e-8, "{r:?}");
}

#[test]
fn improved_inverse_radius_vanishes_at_one() {
    let ion = model().ion_series();
    let improved = ion.eval_state(1.0, 5, Method::Improved).unwrap();
    let taylor = ion.eval_state(1.0, 5, Method::Taylor).unwrap();
    assert_eq!(improved.inv_radius, 0.0);
    assert!(taylor.inv_radius > 0.05);
    // Close to N = 1 the improved radius grows without bound.
    let near = ion.eval_state(1.0 - 1e-9, 5, Method::Improved).unwrap();
    assert!(near.radius > 1e2);
}

#[test]
fn improved_state_invariants() {
    let ion = model().ion_series();
    for n in [0.05, 0.2, 0.5, 0.8, 0.95] {
        let st = ion.eval_state(n, 5, Method::Improved).unwrap();
        assert!((1.0 - st.ionization * st.radius - n).abs() < 1e-13);
        let rel = 3.0 / 7.0 * (st.slope - st.ionization * (1.0 - n));
        assert!((st.binding - rel).abs() < 1e-6 * st.binding.abs().max(1.0), "N = {n}");
        assert!(st.k > 0.0 && st.k < 1.0);
    }
}

#[test]
fn improved_matches_oracle_at_half() {
    let sol = solve_for_n(0.5, 1e-10, &ShootConfig::default()).unwrap();
    let st = model().ion_series().eval_state(sol.n, 5, Method::Improved).unwrap();
    for (got, want) in [
        (st.ionization, sol.ionization),
        (st.radius, sol.radius),
        (st.slope, sol.a),
        (st.binding, sol.binding),
    ] {
        assert!((got / want - 1.0).abs() < 1e-3, "{got} vs {want}");
    }
}

#[test]
fn empty_ion_trend() {
    let cfg = ShootConfig::default();
    let big = shoot(1e3, &cfg).unwrap();
    let small = shoot(10.0, &cfg).unwrap();
    assert!(big.n < small.n && big.radius < small.radius);
}

#[test]
fn single_precision_pipeline() {
    let m32 = tf_ion::Pipeline::<f32>::run(PipelineConfig::new(4, 2001)).unwrap();
    let m64 = Model::run(PipelineConfig::new(4, 2001)).unwrap();
    // Elimination divides by growing powers of N_1, so single precision only
    // holds the leading coefficients.
    for ((_, a), (_, b)) in m32.n_series.columns().iter().zip(m64.n_series.columns().iter()) {
        for (x, y) in a.coeffs().iter().zip(b.coeffs()).take(3) {
            assert!((*x as f64 - y).abs() < 1e-4, "{x} vs {y}");
        }
    }
    let st = m32.ion_series().eval_state(0.5f32, 3, Method::Improved).unwrap();
    assert!((st.n - 0.5).abs() < 1e-6 && st.slope > 1.5);
}
