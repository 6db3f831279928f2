use std::f64::consts::PI;

use proptest::prelude::*;
use steklov::geometry::{triangulate, BoundaryTag, DomainSpec, Mesh, OuterShape};

fn domains() -> Vec<DomainSpec> {
    vec![
        DomainSpec::annulus(1.0, 5.0).unwrap(),
        DomainSpec::new(OuterShape::Disk { radius: 5.0 }, [2.5, 0.0], 1.0).unwrap(),
        DomainSpec::new(OuterShape::Ellipse { semi_x: 3.0, semi_y: 8.33 }, [0.0, 4.0], 1.0).unwrap(),
        DomainSpec::new(OuterShape::Ellipse { semi_x: 3.0, semi_y: 8.33 }, [1.2, 1.2], 1.0).unwrap(),
        DomainSpec::new(OuterShape::Rectangle { width: 13.095, height: 6.0 }, [0.0, 0.0], 1.0).unwrap(),
    ]
}

#[test]
fn meshes_are_valid_at_every_level() {
    for spec in domains() {
        for h in [0.5, 0.25, 0.125] {
            let mesh = triangulate(&spec, h).unwrap();
            mesh.validate().unwrap();
            let s = mesh.stats();
            assert!(s.min_angle_deg >= 20.0, "{spec:?} h={h}: {}", s.min_angle_deg);
            assert!(s.max_edge <= 2.0 * h, "{spec:?} h={h}: {}", s.max_edge);
            assert_eq!(s.vertices + s.triangles, s.edges, "Euler characteristic");
            let inner = mesh.boundary_length(Some(BoundaryTag::Inner));
            assert!((inner / (2.0 * PI * spec.hole_radius) - 1.0).abs() < 0.1 * h * h, "h={h}: {inner}");
        }
    }
}

#[test]
fn area_converges_at_second_order() {
    let spec = DomainSpec::new(OuterShape::Ellipse { semi_x: 3.0, semi_y: 8.33 }, [0.0, 2.0], 1.0).unwrap();
    let errors: Vec<f64> =
        [0.5, 0.25, 0.125].iter().map(|&h| (triangulate(&spec, h).unwrap().area() - spec.area()).abs()).collect();
    let order = (errors[1] / errors[2]).log2();
    assert!(order >= 1.8, "errors {errors:?}, order {order}");
}

#[test]
fn text_round_trip() {
    let spec = DomainSpec::new(OuterShape::Disk { radius: 5.0 }, [1.0, -1.0], 1.0).unwrap();
    let mesh = triangulate(&spec, 0.5).unwrap();
    assert_eq!(Mesh::from_text(&mesh.to_text()).unwrap(), mesh);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_hole_positions_mesh(x in -1.5f64..1.5, y in -4.0f64..4.0, h in prop_oneof![Just(0.5), Just(0.35)]) {
        let spec = DomainSpec::new(OuterShape::Ellipse { semi_x: 3.0, semi_y: 8.33 }, [x, y], 1.0);
        prop_assume!(spec.as_ref().map(|s| s.clearance() >= 0.25).unwrap_or(false));
        let spec = spec.unwrap();
        let mesh = triangulate(&spec, h).unwrap();
        prop_assert!(mesh.validate().is_ok());
        let area = mesh.area();
        prop_assert!((area / spec.area() - 1.0).abs() < 0.02);
        for e in &mesh.boundary_edges {
            let p = mesh.vertices[e.a];
            let d = (p[0] - x).hypot(p[1] - y);
            match e.tag {
                BoundaryTag::Inner => prop_assert!((d - 1.0).abs() < 0.05),
                BoundaryTag::Outer => prop_assert!(d > 1.0 + 0.5 * spec.clearance() - 1e-9),
            }
        }
    }
}
