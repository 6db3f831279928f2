//! Quadrature checks of the integral inequalities and symmetry identities
//! behind the isoperimetric bounds.

use serde::{Deserialize, Serialize};

use super::{ExperimentError, Result};
use crate::closed_form::{AnnulusSpec, Branch, RadialProfile};
use crate::geometry::{
    integrate, triangulate, volume_matched_outer_radius, BoundaryPart, DomainSpec, Mesh, RadialIntegrand, Region,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// `slack >= -tolerance`.
    Inequality,
    /// `|slack| <= tolerance`.
    Identity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralCheck {
    pub claim: String,
    pub kind: CheckKind,
    pub lhs: f64,
    pub rhs: f64,
    /// For inequalities, positive when the inequality holds.
    pub slack: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralReport {
    pub domain: DomainSpec,
    /// Outer radius of the volume-matched concentric annulus.
    pub annulus_outer_radius: f64,
    pub h: f64,
    /// Steklov eigenvalue of the annulus used in `f`.
    pub sigma11: f64,
    pub checks: Vec<IntegralCheck>,
    pub all_pass: bool,
}

impl IntegralReport {
    pub fn check(&self, claim: &str) -> Option<&IntegralCheck> {
        self.checks.iter().find(|c| c.claim == claim)
    }
}

/// Relative quadrature tolerance, multiplied by `h^2` and the magnitude of
/// the compared integrals.
const TOL_FACTOR: f64 = 10.0;

struct Checker {
    h: f64,
    checks: Vec<IntegralCheck>,
}

impl Checker {
    fn push(&mut self, claim: &str, kind: CheckKind, lhs: f64, rhs: f64, scale: f64) {
        let tolerance = TOL_FACTOR * self.h * self.h * scale.abs();
        let slack = lhs - rhs;
        let pass = match kind {
            CheckKind::Inequality => slack >= -tolerance,
            CheckKind::Identity => slack.abs() <= tolerance,
        };
        self.checks.push(IntegralCheck {
            claim: claim.to_string(),
            kind,
            lhs,
            rhs,
            slack,
            tolerance,
            pass,
        });
    }

    /// `big >= small`.
    fn at_least(&mut self, claim: &str, big: f64, small: f64) {
        self.push(claim, CheckKind::Inequality, big, small, big.abs().max(small.abs()));
    }

    fn equal(&mut self, claim: &str, a: f64, b: f64, scale: f64) {
        self.push(claim, CheckKind::Identity, a, b, scale);
    }
}

/// Compares `domain` (hole centered at the origin) with the concentric
/// annulus of equal area by quadrature of the radial first modes `f_{1,1}`
/// and its mixed-problem counterpart, and evaluates the symmetry identities
/// that the domain's symmetry order supports.
pub fn verify_integral_lemmas(domain: &DomainSpec, h: f64) -> Result<IntegralReport> {
    if domain.hole_center != [0.0, 0.0] {
        return Err(ExperimentError::Precondition(
            "integral checks need the hole centered at the origin".into(),
        ));
    }
    let r1 = domain.hole_radius;
    let big_l = volume_matched_outer_radius(domain);
    let annulus = AnnulusSpec::new(2, r1, big_l)?;
    let f = RadialProfile::steklov(&annulus, 1, Branch::Lower)?;
    let ft = RadialProfile::steklov_neumann(&annulus, 1);

    let mesh = triangulate(domain, h)?;
    let ref_mesh = triangulate(&DomainSpec::annulus(r1, big_l)?, h)?;
    let int = |m: &Mesh, region: Region, g: RadialIntegrand, p: &RadialProfile| integrate(m, region, g, p);
    let vol = Region::Volume;
    let outer = Region::Boundary(BoundaryPart::Outer);
    let all = Region::Boundary(BoundaryPart::All);
    use RadialIntegrand::*;

    let mut c = Checker { h, checks: Vec::new() };
    c.at_least("annulus_volume_F_dominates", int(&ref_mesh, vol, F, &f), int(&mesh, vol, F, &f));
    c.at_least(
        "outer_boundary_f2_dominates_annulus",
        int(&mesh, outer, FSquared, &f),
        int(&ref_mesh, outer, FSquared, &f),
    );
    c.at_least(
        "boundary_f2_dominates_annulus",
        int(&mesh, all, FSquared, &f),
        int(&ref_mesh, all, FSquared, &f),
    );
    c.at_least("annulus_volume_F_tilde_dominates", int(&ref_mesh, vol, F, &ft), int(&mesh, vol, F, &ft));
    c.at_least(
        "outer_boundary_f_tilde2_dominates_annulus",
        int(&mesh, outer, FSquared, &ft),
        int(&ref_mesh, outer, FSquared, &ft),
    );

    if domain.is_order2_symmetric() {
        let b_scale = int(&mesh, all, FSquared, &f);
        let v_scale = int(&mesh, vol, F, &f);
        for (i, axis) in ["x", "y"].iter().enumerate() {
            c.equal(&format!("boundary_f2_{axis}_vanishes"), int(&mesh, all, FSquaredX(i), &f), 0.0, b_scale);
            c.equal(&format!("volume_grad_f_grad_f{axis}_vanishes"), int(&mesh, vol, GradFDotGradFX(i), &f), 0.0, v_scale);
        }
    }
    if domain.is_order4_symmetric() {
        let b_scale = int(&mesh, all, FSquared, &f);
        let v_scale = int(&mesh, vol, F, &f);
        let v2_scale = int(&mesh, vol, FSquared, &f);
        c.equal("boundary_f2_xy_vanishes", int(&mesh, all, FSquaredXX(0, 1), &f), 0.0, b_scale);
        c.equal("volume_grad_fx_grad_fy_vanishes", int(&mesh, vol, GradFXDotGradFX(0, 1), &f), 0.0, v_scale);
        c.equal(
            "boundary_f2_x2_equals_y2",
            int(&mesh, all, FSquaredXX(0, 0), &f),
            int(&mesh, all, FSquaredXX(1, 1), &f),
            b_scale,
        );
        c.equal(
            "volume_f2_x2_equals_y2",
            int(&mesh, vol, FSquaredXX(0, 0), &f),
            int(&mesh, vol, FSquaredXX(1, 1), &f),
            v2_scale,
        );
        c.equal(
            "volume_grad_fx_squared_equals_fy",
            int(&mesh, vol, GradFXSquared(0), &f),
            int(&mesh, vol, GradFXSquared(1), &f),
            v_scale,
        );
    }

    let all_pass = c.checks.iter().all(|k| k.pass);
    Ok(IntegralReport {
        domain: *domain,
        annulus_outer_radius: big_l,
        h,
        sigma11: f.eigenvalue(),
        checks: c.checks,
        all_pass,
    })
}
