//! Quadrature of radial integrands built from a closed-form profile `f(r)`
//! over a mesh or its boundary.

use serde::{Deserialize, Serialize};

use super::mesh::{BoundaryTag, Mesh};
use super::Point;
use crate::analysis::energy_densities;
use crate::closed_form::RadialProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryPart {
    Outer,
    Inner,
    All,
}

impl BoundaryPart {
    fn admits(self, tag: BoundaryTag) -> bool {
        match self {
            BoundaryPart::Outer => tag == BoundaryTag::Outer,
            BoundaryPart::Inner => tag == BoundaryTag::Inner,
            BoundaryPart::All => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Volume,
    Boundary(BoundaryPart),
}

/// Integrand selector. Coordinate indices are 0 for x and 1 for y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialIntegrand {
    /// `f'^2 + (n-1) f^2 / r^2`
    F,
    /// `2 f f' + (n-1) f^2 / r`
    G,
    /// `f^2`
    FSquared,
    /// `f^2 x_i / r`
    FSquaredX(usize),
    /// `f^2 x_i x_j / r^2`
    FSquaredXX(usize, usize),
    /// `<grad f, grad(f x_i / r)>`
    GradFDotGradFX(usize),
    /// `<grad(f x_i / r), grad(f x_j / r)>`
    GradFXDotGradFX(usize, usize),
    /// `|grad(f x_i / r)|^2`
    GradFXSquared(usize),
}

impl RadialIntegrand {
    pub fn eval(self, profile: &RadialProfile, p: Point) -> f64 {
        let r = p[0].hypot(p[1]);
        let (f, df) = profile.eval_unchecked(r);
        let u = [p[0] / r, p[1] / r];
        // grad(f x_i / r) = f' u_i u + (f / r)(e_i - u_i u)
        let grad_fx = |i: usize| {
            let mut g = [0.0; 2];
            for (k, gk) in g.iter_mut().enumerate() {
                let delta = if i == k { 1.0 } else { 0.0 };
                *gk = df * u[i] * u[k] + f / r * (delta - u[i] * u[k]);
            }
            g
        };
        let dot = |a: [f64; 2], b: [f64; 2]| a[0] * b[0] + a[1] * b[1];
        match self {
            RadialIntegrand::F => energy_densities(profile, r).0,
            RadialIntegrand::G => energy_densities(profile, r).1,
            RadialIntegrand::FSquared => f * f,
            RadialIntegrand::FSquaredX(i) => f * f * u[i],
            RadialIntegrand::FSquaredXX(i, j) => f * f * u[i] * u[j],
            RadialIntegrand::GradFDotGradFX(i) => dot([df * u[0], df * u[1]], grad_fx(i)),
            RadialIntegrand::GradFXDotGradFX(i, j) => dot(grad_fx(i), grad_fx(j)),
            RadialIntegrand::GradFXSquared(i) => {
                let g = grad_fx(i);
                dot(g, g)
            }
        }
    }
}

/// Integrates `integrand` over the mesh (edge-midpoint rule, exact for
/// quadratics) or over tagged boundary edges (midpoint rule).
pub fn integrate(mesh: &Mesh, region: Region, integrand: RadialIntegrand, profile: &RadialProfile) -> f64 {
    let mid = |p: Point, q: Point| [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
    match region {
        Region::Volume => (0..mesh.triangles.len())
            .map(|t| {
                let [a, b, c] = mesh.triangle_points(t);
                let s: f64 = [mid(a, b), mid(b, c), mid(c, a)]
                    .into_iter()
                    .map(|p| integrand.eval(profile, p))
                    .sum();
                mesh.triangle_area(t) * s / 3.0
            })
            .sum(),
        Region::Boundary(part) => mesh
            .boundary_edges
            .iter()
            .filter(|e| part.admits(e.tag))
            .map(|e| {
                let p = mid(mesh.vertices[e.a], mesh.vertices[e.b]);
                mesh.edge_length(e) * integrand.eval(profile, p)
            })
            .sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{AnnulusSpec, Branch};
    use crate::geometry::{triangulate, DomainSpec, OuterShape};

    fn f11() -> RadialProfile {
        RadialProfile::steklov(&AnnulusSpec::new(2, 1.0, 5.0).unwrap(), 1, Branch::Lower).unwrap()
    }

    #[test]
    fn gradient_identity_sums_to_f() {
        // |grad(f x/r)|^2 + |grad(f y/r)|^2 = F in the plane.
        let f = f11();
        for p in [[1.3, 0.4], [-2.0, 3.1], [0.2, -4.5]] {
            let sum = RadialIntegrand::GradFXSquared(0).eval(&f, p) + RadialIntegrand::GradFXSquared(1).eval(&f, p);
            assert!((sum - RadialIntegrand::F.eval(&f, p)).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let f = f11();
        let g = |p: Point| {
            let r = p[0].hypot(p[1]);
            f.eval_unchecked(r).0 * p[0] / r
        };
        let p = [1.7, -0.9];
        let e = 1e-6;
        let gx = (g([p[0] + e, p[1]]) - g([p[0] - e, p[1]])) / (2.0 * e);
        let gy = (g([p[0], p[1] + e]) - g([p[0], p[1] - e])) / (2.0 * e);
        let r = p[0].hypot(p[1]);
        let df = f.eval_unchecked(r).1;
        let expect = df * (p[0] / r * gx + p[1] / r * gy);
        assert!((RadialIntegrand::GradFDotGradFX(0).eval(&f, p) - expect).abs() < 1e-7);
    }

    #[test]
    fn odd_integrals_vanish_on_concentric_annulus() {
        let mesh = triangulate(&DomainSpec::annulus(1.0, 5.0).unwrap(), 0.25).unwrap();
        let f = f11();
        let scale = integrate(&mesh, Region::Boundary(BoundaryPart::All), RadialIntegrand::FSquared, &f);
        let odd = integrate(&mesh, Region::Boundary(BoundaryPart::All), RadialIntegrand::FSquaredX(0), &f);
        assert!(odd.abs() < 10.0 * 0.25 * 0.25 * scale, "{odd} vs {scale}");
    }

    #[test]
    fn square_has_equal_second_moments() {
        let side = (25.0 * std::f64::consts::PI).sqrt();
        let spec = DomainSpec::new(OuterShape::Rectangle { width: side, height: side }, [0.0, 0.0], 1.0).unwrap();
        let mesh = triangulate(&spec, 0.25).unwrap();
        let f = f11();
        let xx = integrate(&mesh, Region::Volume, RadialIntegrand::FSquaredXX(0, 0), &f);
        let yy = integrate(&mesh, Region::Volume, RadialIntegrand::FSquaredXX(1, 1), &f);
        assert!((xx - yy).abs() < 10.0 * 0.0625 * xx.abs());
    }

    #[test]
    fn annulus_boundary_integral_matches_closed_form() {
        let mesh = triangulate(&DomainSpec::annulus(1.0, 5.0).unwrap(), 0.125).unwrap();
        let f = f11();
        let outer = integrate(&mesh, Region::Boundary(BoundaryPart::Outer), RadialIntegrand::FSquared, &f);
        let exact = 2.0 * std::f64::consts::PI * 5.0 * f.eval(5.0).unwrap().0.powi(2);
        assert!((outer / exact - 1.0).abs() < 2e-3, "{outer} {exact}");
    }
}
