mod common;

use weylkit_core::geometry::{
    conformal_rescale, difference_tensor, eps_connection, gauge_transform, levi_civita,
    nabla_g_residual, projective_shift, pure_trace, weyl_connection, Connection, ConnectionField,
    ConnectionSpec, OneFormSpec, WeylStructure,
};
use weylkit_core::synth::{random_expr, random_metric, random_one_form, random_point};
use weylkit_core::{Chart, ScalarExpr};

#[test]
fn weyl_connection_is_gauge_invariant() {
    let mut rng = common::rng(11);
    for case in 0..60 {
        let n = 3 + case % 2;
        let chart = Chart::new(n).unwrap();
        let g = random_metric(&mut rng, &chart, 0.05).unwrap();
        let phi = random_one_form(&mut rng, &chart, 0.5).unwrap();
        let ln_omega = random_expr(&mut rng, &chart, 3, 0.3);
        let g2 = conformal_rescale(&g, &ln_omega).unwrap();
        let phi2 = gauge_transform(&phi, &ln_omega).unwrap();
        for _ in 0..5 {
            let p = random_point(&mut rng, n, 0.5);
            let a = weyl_connection(&g, &phi, &p).unwrap();
            let b = weyl_connection(&g2, &phi2, &p).unwrap();
            let err = common::rel_err(a.entries(), b.entries());
            assert!(err <= 1e-9, "case {case}: relative error {err:e}");
        }
    }
}

#[test]
fn weyl_connection_satisfies_its_compatibility_condition() {
    let mut rng = common::rng(12);
    for case in 0..60 {
        let n = 3 + case % 3;
        let chart = Chart::new(n).unwrap();
        let w = WeylStructure::new(
            random_metric(&mut rng, &chart, 0.05).unwrap(),
            random_one_form(&mut rng, &chart, 0.5).unwrap(),
        )
        .unwrap();
        let p = random_point(&mut rng, n, 0.5);
        let r = w.compatibility_residual(&p).unwrap();
        assert!(r.max_abs() <= 1e-12, "case {case}: {:e}", r.max_abs());
    }
}

#[test]
fn exact_weyl_form_is_levi_civita_of_rescaled_metric() {
    // (g, dλ) is gauge equivalent to (e^{2λ} g, 0)
    let mut rng = common::rng(13);
    for case in 0..40 {
        let n = 3 + case % 2;
        let chart = Chart::new(n).unwrap();
        let g = random_metric(&mut rng, &chart, 0.05).unwrap();
        let lambda = random_expr(&mut rng, &chart, 3, 0.3);
        let phi = OneFormSpec::gradient(chart.clone(), &lambda).unwrap();
        let rescaled = conformal_rescale(&g, &lambda).unwrap();
        let p = random_point(&mut rng, n, 0.5);
        let a = weyl_connection(&g, &phi, &p).unwrap();
        let b = levi_civita(&rescaled, &p).unwrap();
        assert!(common::rel_err(a.entries(), b.entries()) <= 1e-10);
        assert_eq!(
            weyl_connection(&g, &OneFormSpec::zero(chart.clone()), &p).unwrap(),
            levi_civita(&g, &p).unwrap()
        );
    }
}

#[test]
fn levi_civita_is_metric_compatible() {
    let mut rng = common::rng(14);
    for _ in 0..30 {
        let chart = Chart::new(4).unwrap();
        let g = random_metric(&mut rng, &chart, 0.05).unwrap();
        let p = random_point(&mut rng, 4, 0.5);
        let f = levi_civita(&g, &p).unwrap();
        let r = nabla_g_residual(&g, &f, &OneFormSpec::zero(chart), &p).unwrap();
        assert!(r.max_abs() <= 1e-12);
    }
}

#[test]
fn projective_shift_differs_by_pure_trace() {
    let mut rng = common::rng(15);
    for case in 0..40 {
        let n = 3 + case % 3;
        let chart = Chart::new(n).unwrap();
        let texts: Vec<Vec<Vec<String>>> = (0..n)
            .map(|_| {
                let mut plane = vec![vec![String::new(); n]; n];
                for j in 0..n {
                    for k in j..n {
                        let e = random_expr(&mut rng, &chart, 2, 0.5)
                            .display(&chart)
                            .to_string();
                        plane[j][k] = e.clone();
                        plane[k][j] = e;
                    }
                }
                plane
            })
            .collect();
        let gamma = ConnectionSpec::parse(chart.clone(), &texts).unwrap();
        let psi = random_one_form(&mut rng, &chart, 0.5).unwrap();
        let shifted = projective_shift(&gamma, &psi).unwrap();
        let p = random_point(&mut rng, n, 0.5);
        let diff = shifted.at(&p).unwrap().sub(&gamma.at(&p).unwrap()).unwrap();
        let want = pure_trace(&psi.at(&p).unwrap());
        assert!(diff.max_abs_diff(&want).unwrap() <= 1e-14);

        let back = projective_shift(&shifted, &psi.negated()).unwrap();
        assert_eq!(back.at(&p).unwrap(), gamma.at(&p).unwrap());

        // the enum form agrees with the symbolic form
        let lazy = Connection::from(gamma.clone())
            .shifted(psi.clone())
            .unwrap();
        assert!(
            lazy.christoffel_at(&p)
                .unwrap()
                .max_abs_diff(&shifted.at(&p).unwrap())
                .unwrap()
                <= 1e-14
        );
    }
}

#[test]
fn weyl_connection_is_eps_with_opposite_phi() {
    // Γ(g, ω) = F + δω + δω - g ω^♯, i.e. the normal form with φ = -ω, η = ω
    let mut rng = common::rng(16);
    for _ in 0..30 {
        let chart = Chart::new(4).unwrap();
        let g = random_metric(&mut rng, &chart, 0.05).unwrap();
        let omega = random_one_form(&mut rng, &chart, 0.5).unwrap();
        let p = random_point(&mut rng, 4, 0.5);
        let a = weyl_connection(&g, &omega, &p).unwrap();
        let b = eps_connection(&g, &omega.negated(), &omega, &p).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() <= 1e-14);
        let d = difference_tensor(
            &Connection::Weyl(WeylStructure::new(g.clone(), omega).unwrap()),
            &g,
            &p,
        )
        .unwrap();
        assert_eq!(d.symmetries(), &[(1, 2)]);
    }
}

#[test]
fn rescaling_by_zero_is_identity() {
    let chart = Chart::new(3).unwrap();
    let mut rng = common::rng(17);
    let g = random_metric(&mut rng, &chart, 0.05).unwrap();
    let same = conformal_rescale(&g, &ScalarExpr::zero()).unwrap();
    let p = random_point(&mut rng, 3, 0.5);
    assert_eq!(same.at(&p).unwrap(), g.at(&p).unwrap());
}
