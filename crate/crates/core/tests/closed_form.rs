use proptest::prelude::*;
use steklov::closed_form::{
    enumerate_spectrum, multiplicity, sigma_21_closed, sn_eigenvalue, steklov_eigenvalue, AnnulusSpec, Branch,
};
use steklov::{Problem, RadialProfile};

#[test]
fn planar_multiplicities() {
    assert_eq!(multiplicity(2, 0), 1);
    for l in 1..10 {
        assert_eq!(multiplicity(2, l), 2);
    }
    assert_eq!(multiplicity(3, 4), 9);
    assert_eq!(multiplicity(4, 2), 9);
}

#[test]
fn mixed_first_eigenvalue_is_rational() {
    // mu_1 = (1 - L^-2) / (L (1 + L^-2)) for n = 2.
    let spec = AnnulusSpec::new(2, 1.0, 5.0).unwrap();
    assert!((sn_eigenvalue(&spec, 1) - 24.0 / 130.0).abs() < 1e-15);
}

#[test]
fn spectrum_is_sorted_and_counted() {
    let spec = AnnulusSpec::new(3, 1.0, 2.0).unwrap();
    for problem in [Problem::Steklov, Problem::SteklovNeumann] {
        let lines = enumerate_spectrum(&spec, problem, 20).unwrap();
        assert!(lines.windows(2).all(|w| w[0].value <= w[1].value));
        assert!(lines.iter().map(|l| l.multiplicity).sum::<u64>() >= 20);
        assert_eq!(lines[0].value, 0.0);
    }
}

proptest! {
    #[test]
    fn eigenvalues_scale_inversely(n in 2usize..6, big_l in 1.05f64..20.0, t in 0.1f64..10.0, l in 1usize..6) {
        let unit = AnnulusSpec::new(n, 1.0, big_l).unwrap();
        let scaled = AnnulusSpec::new(n, t, t * big_l).unwrap();
        for branch in [Branch::Lower, Branch::Upper] {
            let a = steklov_eigenvalue(&unit, l, branch).unwrap();
            let b = steklov_eigenvalue(&scaled, l, branch).unwrap();
            prop_assert!((b * t / a - 1.0).abs() < 1e-10);
        }
        prop_assert!((sn_eigenvalue(&scaled, l) * t / sn_eigenvalue(&unit, l) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn branches_are_ordered(n in 2usize..6, big_l in 1.05f64..20.0, l in 1usize..8) {
        let spec = AnnulusSpec::new(n, 1.0, big_l).unwrap();
        let lower = steklov_eigenvalue(&spec, l, Branch::Lower).unwrap();
        let upper = steklov_eigenvalue(&spec, l, Branch::Upper).unwrap();
        prop_assert!(0.0 < lower && lower < upper);
        // Shrinking the Steklov boundary raises the eigenvalue.
        prop_assert!(lower <= sn_eigenvalue(&spec, l) * (1.0 + 1e-12));
    }

    #[test]
    fn closed_sigma21_matches_quadratic_root(n in 2usize..8, big_l in 1.01f64..50.0) {
        let spec = AnnulusSpec::new(n, 1.0, big_l).unwrap();
        let root = steklov_eigenvalue(&spec, 2, Branch::Lower).unwrap();
        prop_assert!((sigma_21_closed(&spec) / root - 1.0).abs() < 1e-10);
    }

    #[test]
    fn profile_satisfies_boundary_conditions(n in 2usize..6, big_l in 1.1f64..10.0, l in 1usize..5) {
        let spec = AnnulusSpec::new(n, 1.0, big_l).unwrap();
        let p = RadialProfile::steklov(&spec, l, Branch::Lower).unwrap();
        let sigma = p.eigenvalue();
        let (f1, d1) = p.eval(1.0).unwrap();
        let (fl, dl) = p.eval(big_l).unwrap();
        // Outward normal points inward on the inner sphere.
        prop_assert!((-d1 - sigma * f1).abs() < 1e-9 * (1.0 + f1.abs()));
        prop_assert!((dl - sigma * fl).abs() < 1e-9 * (1.0 + fl.abs()));
        let q = RadialProfile::steklov_neumann(&spec, l);
        let (_, dq1) = q.eval(1.0).unwrap();
        let (gl, dgl) = q.eval(big_l).unwrap();
        prop_assert!(dq1.abs() < 1e-9);
        prop_assert!((dgl - q.eigenvalue() * gl).abs() < 1e-9 * (1.0 + gl.abs()));
    }
}
