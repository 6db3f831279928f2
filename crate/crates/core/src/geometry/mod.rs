//! Planar doubly connected domains: an outer disk, ellipse or rectangle
//! centered at the origin with one circular hole removed.

mod mesh;
mod polyline;
pub mod quadrature;
mod triangulate;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use mesh::{BoundaryEdge, BoundaryTag, Mesh, MeshStats};
pub use polyline::{boundary_polylines, Polylines};
pub use quadrature::{integrate, BoundaryPart, RadialIntegrand, Region};
pub use triangulate::triangulate;

pub type Point = [f64; 2];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid outer shape: {0}")]
    Shape(String),
    #[error("hole of radius {radius} at ({}, {}) leaves clearance {clearance} to the outer boundary", center[0], center[1])]
    HoleOutside {
        center: Point,
        radius: f64,
        clearance: f64,
    },
    #[error("clearance {clearance} is below h/10 = {min}")]
    Degenerate { clearance: f64, min: f64 },
    #[error("mesh size h = {0} is too coarse to resolve the boundary")]
    TooCoarse(f64),
    #[error("mesh size must be positive and finite, got {0}")]
    MeshSize(f64),
    #[error("triangulation failed: {0}")]
    Triangulation(String),
    #[error("mesh invariant violated: {0}")]
    Invariant(String),
    #[error("mesh file line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, GeometryError>;

/// Outer boundary, centered at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum OuterShape {
    Disk { radius: f64 },
    /// Semi-axes along x and y.
    Ellipse { semi_x: f64, semi_y: f64 },
    /// Full side lengths along x and y.
    Rectangle { width: f64, height: f64 },
}

impl OuterShape {
    fn validate(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        let valid = match *self {
            OuterShape::Disk { radius } => ok(radius),
            OuterShape::Ellipse { semi_x, semi_y } => ok(semi_x) && ok(semi_y),
            OuterShape::Rectangle { width, height } => ok(width) && ok(height),
        };
        if valid {
            Ok(())
        } else {
            Err(GeometryError::Shape(format!("{self:?}")))
        }
    }

    pub fn area(&self) -> f64 {
        use std::f64::consts::PI;
        match *self {
            OuterShape::Disk { radius } => PI * radius * radius,
            OuterShape::Ellipse { semi_x, semi_y } => PI * semi_x * semi_y,
            OuterShape::Rectangle { width, height } => width * height,
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match *self {
            OuterShape::Disk { radius } => p[0].hypot(p[1]) < radius,
            OuterShape::Ellipse { semi_x, semi_y } => (p[0] / semi_x).powi(2) + (p[1] / semi_y).powi(2) < 1.0,
            OuterShape::Rectangle { width, height } => p[0].abs() < 0.5 * width && p[1].abs() < 0.5 * height,
        }
    }

    /// Distance from an interior point to the boundary curve.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        match *self {
            OuterShape::Disk { radius } => radius - p[0].hypot(p[1]),
            OuterShape::Rectangle { width, height } => {
                (0.5 * width - p[0].abs()).min(0.5 * height - p[1].abs())
            }
            OuterShape::Ellipse { semi_x, semi_y } => {
                let dist = |t: f64| (semi_x * t.cos() - p[0]).hypot(semi_y * t.sin() - p[1]);
                crate::analysis::scan_minimum(dist, 0.0, std::f64::consts::TAU, 2049).1
            }
        }
    }

    fn is_isotropic(&self) -> bool {
        match *self {
            OuterShape::Disk { .. } => true,
            OuterShape::Ellipse { semi_x, semi_y } => semi_x == semi_y,
            OuterShape::Rectangle { width, height } => width == height,
        }
    }
}

/// Outer region minus the closed disk `|x - hole_center| <= hole_radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub outer: OuterShape,
    pub hole_center: Point,
    pub hole_radius: f64,
}

impl DomainSpec {
    pub fn new(outer: OuterShape, hole_center: Point, hole_radius: f64) -> Result<Self> {
        let spec = Self {
            outer,
            hole_center,
            hole_radius,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Concentric annulus `r_inner < |x| < r_outer`.
    pub fn annulus(r_inner: f64, r_outer: f64) -> Result<Self> {
        Self::new(OuterShape::Disk { radius: r_outer }, [0.0, 0.0], r_inner)
    }

    pub fn validate(&self) -> Result<()> {
        self.outer.validate()?;
        if !(self.hole_radius > 0.0 && self.hole_radius.is_finite()) {
            return Err(GeometryError::Shape(format!("hole radius {}", self.hole_radius)));
        }
        let clearance = self.clearance();
        if !self.outer.contains(self.hole_center) || !(clearance > 0.0) {
            return Err(GeometryError::HoleOutside {
                center: self.hole_center,
                radius: self.hole_radius,
                clearance,
            });
        }
        Ok(())
    }

    /// Gap between the hole and the outer boundary.
    pub fn clearance(&self) -> f64 {
        self.outer.boundary_distance(self.hole_center) - self.hole_radius
    }

    pub fn area(&self) -> f64 {
        self.outer.area() - std::f64::consts::PI * self.hole_radius * self.hole_radius
    }

    fn hole_at_origin(&self) -> bool {
        self.hole_center == [0.0, 0.0]
    }

    /// Invariant under rotation by a half turn about the origin.
    pub fn is_order2_symmetric(&self) -> bool {
        self.hole_at_origin()
    }

    /// Invariant under rotation by a quarter turn about the origin.
    pub fn is_order4_symmetric(&self) -> bool {
        self.hole_at_origin() && self.outer.is_isotropic()
    }
}

/// Radius of the disk with the same area as the outer region.
pub fn volume_matched_outer_radius(spec: &DomainSpec) -> f64 {
    match spec.outer {
        OuterShape::Disk { radius } => radius,
        OuterShape::Ellipse { semi_x, semi_y } => (semi_x * semi_y).sqrt(),
        OuterShape::Rectangle { width, height } => (width * height / std::f64::consts::PI).sqrt(),
    }
}
