use steklov::fem::{convergence_study, solve, ReferenceKind};
use steklov::geometry::{DomainSpec, OuterShape};
use steklov::Problem;

#[test]
fn mixed_eigenvalues_dominate_steklov() {
    let spec = DomainSpec::new(OuterShape::Ellipse { semi_x: 3.0, semi_y: 8.33 }, [0.5, 1.0], 1.0).unwrap();
    let s = solve(&spec, Problem::Steklov, 0.25, 5).unwrap();
    let m = solve(&spec, Problem::SteklovNeumann, 0.25, 5).unwrap();
    for i in 0..5 {
        assert!(s.value(i) <= m.value(i) + 1e-10, "{i}: {} > {}", s.value(i), m.value(i));
    }
}

#[test]
fn eigenvalues_scale_inversely_with_the_domain() {
    let small = DomainSpec::new(OuterShape::Disk { radius: 5.0 }, [1.5, 0.0], 1.0).unwrap();
    let large = DomainSpec::new(OuterShape::Disk { radius: 10.0 }, [3.0, 0.0], 2.0).unwrap();
    let a = solve(&small, Problem::Steklov, 0.25, 4).unwrap();
    let b = solve(&large, Problem::Steklov, 0.5, 4).unwrap();
    for i in 1..4 {
        assert!((2.0 * b.value(i) / a.value(i) - 1.0).abs() < 5e-3, "{i}");
    }
}

#[test]
fn rectangle_is_translation_and_reflection_consistent() {
    let a = DomainSpec::new(OuterShape::Rectangle { width: 10.0, height: 6.0 }, [1.5, 0.5], 1.0).unwrap();
    let b = DomainSpec::new(OuterShape::Rectangle { width: 10.0, height: 6.0 }, [-1.5, -0.5], 1.0).unwrap();
    let x = solve(&a, Problem::SteklovNeumann, 0.25, 4).unwrap();
    let y = solve(&b, Problem::SteklovNeumann, 0.25, 4).unwrap();
    for i in 1..4 {
        assert!((x.value(i) / y.value(i) - 1.0).abs() < 5e-3);
    }
}

#[test]
fn richardson_study_off_center() {
    let spec = DomainSpec::new(OuterShape::Disk { radius: 5.0 }, [2.0, 0.0], 1.0).unwrap();
    let study = convergence_study(&spec, Problem::Steklov, &[0.5, 0.25, 0.125], 3).unwrap();
    assert_eq!(study.reference_kind, ReferenceKind::Richardson);
    let order = study.observed_order[1].unwrap();
    assert!(order > 1.5, "{order}");
    let errors: Vec<f64> = study.relative_errors.iter().map(|e| e[1]).collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
}
