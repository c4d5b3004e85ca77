use hypstab::spectral::{count_negative_eigenvalues, morse_index, IndexOptions};
use hypstab::stability::{grad_condition_deficit, pointwise_stability_test};
use hypstab::{
    Helicoid, HyperbolicCatenoid, Scheme, SphericalCatenoid, SturmLiouvilleDisc, Verdict,
};
use proptest::prelude::*;

const INDEX_SAMPLES: [f64; 7] = [0.55, 0.6, 0.65, 0.7, 0.8, 1.0, 10.0];

#[test]
fn counts_saturate_under_refinement() {
    for a in INDEX_SAMPLES {
        let cat = SphericalCatenoid::new(a).unwrap();
        let coarse = morse_index(
            &cat,
            &IndexOptions {
                r: 10.0,
                n: 2000,
                ..IndexOptions::default()
            },
        )
        .unwrap();
        let fine = morse_index(
            &cat,
            &IndexOptions {
                r: 15.0,
                n: 4000,
                ..IndexOptions::default()
            },
        )
        .unwrap();
        for (c, f) in coarse.modes.iter().zip(&fine.modes) {
            assert_eq!(
                c.negative_count, f.negative_count,
                "a = {a}, m = {}",
                c.mode
            );
        }
        assert!(coarse.converged && fine.converged);
    }
}

#[test]
fn index_transition_matches_threshold() {
    let c0 = SphericalCatenoid::instability_threshold(1e-6).unwrap().c0;
    assert!(c0 > 0.70 && c0 < 0.76);
    let index = |a: f64| {
        morse_index(
            &SphericalCatenoid::new(a).unwrap(),
            &IndexOptions::default(),
        )
        .unwrap()
        .total_index
    };
    for a in [0.55, 0.6, 0.65, 0.7] {
        assert_eq!(index(a), 1, "a = {a}");
    }
    for a in [0.8, 1.0] {
        assert_eq!(index(a), 0, "a = {a}");
    }
    // Discrete transition point by bisection on the index.
    let (mut lo, mut hi) = (0.7, 0.8);
    for _ in 0..20 {
        let mid = 0.5 * (lo + hi);
        if index(mid) == 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((lo - c0).abs() < 0.05, "transition {lo} vs c0 {c0}");
    // F < 0 is only a sufficient condition for instability.
    assert!(lo >= c0);
}

#[test]
fn both_schemes_agree_on_catenoid_counts() {
    for a in INDEX_SAMPLES {
        let cat = SphericalCatenoid::new(a).unwrap();
        let g = morse_index(
            &cat,
            &IndexOptions {
                scheme: Scheme::Galerkin,
                ..IndexOptions::default()
            },
        )
        .unwrap();
        let f = morse_index(
            &cat,
            &IndexOptions {
                scheme: Scheme::FiniteDifference,
                ..IndexOptions::default()
            },
        )
        .unwrap();
        assert_eq!(g.total_index, f.total_index, "a = {a}");
        let (lg, lf) = (
            g.modes[0].lowest_eigenvalues[0],
            f.modes[0].lowest_eigenvalues[0],
        );
        assert!((lg - lf).abs() < 1e-2, "a = {a}: {lg} vs {lf}");
    }
}

#[test]
fn gradient_deficit_is_the_stability_functional() {
    for a in [0.55, 0.7, 0.75, 1.5] {
        let c = SphericalCatenoid::new(a).unwrap();
        let deficit = grad_condition_deficit(
            2,
            c.total_norm_a_sq(1e-11).unwrap().value,
            c.total_grad_norm_a_sq(1e-11).unwrap().value,
        )
        .unwrap();
        let f = c.stability_functional(1e-11).unwrap().value;
        assert!((deficit - f).abs() < 1e-6 * f.abs().max(1.0), "a = {a}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dirichlet_counts_never_drop_when_the_domain_grows(a in 0.52f64..1.2, r in 0.5f64..6.0) {
        let cat = SphericalCatenoid::new(a).unwrap();
        let per_unit = 200.0;
        let small = (r * per_unit).round() as usize;
        let big = ((r + 1.0) * per_unit).round() as usize;
        let rs = small as f64 / per_unit;
        let rb = big as f64 / per_unit;
        let cs = count_negative_eigenvalues(
            &hypstab::spectral::assemble_mode_operator(&cat, 0, rs, small.max(100), Scheme::Galerkin).unwrap(),
        );
        let cb = count_negative_eigenvalues(
            &hypstab::spectral::assemble_mode_operator(&cat, 0, rb, big.max(100), Scheme::Galerkin).unwrap(),
        );
        prop_assert!(cb >= cs);
    }

    #[test]
    fn constant_potential_counts_follow_the_spectrum(q in -20.0f64..20.0, r in 1.0f64..4.0) {
        // Dirichlet eigenvalues on [−R, R] are (kπ/2R)² + q.
        let d = SturmLiouvilleDisc::from_coefficients(|_| 1.0, |_| q, r, 1000, 0, Scheme::Galerkin).unwrap();
        let expected = (1..).take_while(|&k| (k as f64 * std::f64::consts::PI / (2.0 * r)).powi(2) + q < 0.0).count();
        let gap = (1..50)
            .map(|k| ((k as f64 * std::f64::consts::PI / (2.0 * r)).powi(2) + q).abs())
            .fold(f64::INFINITY, f64::min);
        prop_assume!(gap > 1e-2);
        prop_assert_eq!(count_negative_eigenvalues(&d), expected);
    }

    #[test]
    fn profile_samples_stay_bracketed(n in 2usize..6, t in 1.02f64..2.5) {
        let cat = HyperbolicCatenoid::new(n, t).unwrap();
        let profile = cat.integrate_profile(4.0, 1e-10).unwrap();
        for s in profile.samples() {
            prop_assert!(s.satisfies_bracket(cat.a()), "s = {}", s.s);
            let (closed, slope) = cat.norm_a_sq_forms(s);
            prop_assert!((closed - slope).abs() < 1e-8);
            prop_assert!(closed <= cat.sup_norm_a_sq() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn certificates_imply_the_pointwise_test(n in 2usize..10, t in 1.0001f64..3.0) {
        let cat = HyperbolicCatenoid::new(n, t).unwrap();
        if cat.is_stable_by_window() {
            prop_assert!(cat.is_stable_by_sharp_sup());
            let verdict = pointwise_stability_test(n, cat.sup_norm_a_sq()).unwrap().verdict;
            prop_assert_eq!(verdict, Verdict::StableCertified);
        }
    }

    #[test]
    fn helicoid_curvature_peaks_at_the_axis(alpha in -3.0f64..3.0, t in -4.0f64..4.0) {
        let h = Helicoid::new(alpha).unwrap();
        prop_assert!(h.norm_a_sq_from_forms(t) <= h.sup_norm_a_sq() * (1.0 + 1e-15));
        prop_assert!(h.norm_a_sq_from_forms(t) <= h.norm_a_sq(t) * (1.0 + 1e-15) + 1e-300);
    }
}
