use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::{DomainSpec, GeometryError, OuterShape, Point, Result};

/// Fewest segments accepted for either boundary curve.
const MIN_SEGMENTS: usize = 8;

/// Closed boundary polylines; the closing segment from the last point back
/// to the first is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct Polylines {
    /// Outer curve, counterclockwise.
    pub outer: Vec<Point>,
    /// Hole circle, clockwise.
    pub inner: Vec<Point>,
}

/// Samples both boundary curves at spacing close to `h`.
///
/// Curved pieces use a segment count that is a multiple of four so that the
/// polylines keep the mirror symmetries of the curves. Ellipses are sampled at
/// equal arc length and every sample lies exactly on the curve. Rectangle
/// corners are always vertices.
pub fn boundary_polylines(spec: &DomainSpec, h: f64) -> Result<Polylines> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(GeometryError::MeshSize(h));
    }
    let outer = match spec.outer {
        OuterShape::Disk { radius } => circle([0.0, 0.0], radius, h)?,
        OuterShape::Ellipse { semi_x, semi_y } => ellipse(semi_x, semi_y, h)?,
        OuterShape::Rectangle { width, height } => rectangle(width, height, h),
    };
    let mut inner = circle(spec.hole_center, spec.hole_radius, h)?;
    inner.reverse();
    Ok(Polylines { outer, inner })
}

fn quarter_count(length: f64, h: f64) -> Result<usize> {
    let quarters = (length / (4.0 * h)).round() as usize;
    if 4 * quarters < MIN_SEGMENTS {
        return Err(GeometryError::TooCoarse(h));
    }
    Ok(quarters)
}

fn circle(center: Point, radius: f64, h: f64) -> Result<Vec<Point>> {
    let segments = 4 * quarter_count(TAU * radius, h)?;
    Ok((0..segments)
        .map(|i| {
            let t = TAU * i as f64 / segments as f64;
            [center[0] + radius * t.cos(), center[1] + radius * t.sin()]
        })
        .collect())
}

fn ellipse(a: f64, b: f64, h: f64) -> Result<Vec<Point>> {
    // Cumulative chord length over the first quadrant on a fine parameter grid.
    const FINE: usize = 8192;
    let at = |t: f64| [a * t.cos(), b * t.sin()];
    let params: Vec<f64> = (0..=FINE).map(|i| FRAC_PI_2 * i as f64 / FINE as f64).collect();
    let mut arc = vec![0.0; FINE + 1];
    for i in 1..=FINE {
        let (p, q) = (at(params[i - 1]), at(params[i]));
        arc[i] = arc[i - 1] + (q[0] - p[0]).hypot(q[1] - p[1]);
    }
    let quarter = arc[FINE];
    let per_quarter = quarter_count(4.0 * quarter, h)?;

    // Parameters at equal arc length within the quadrant.
    let mut quadrant = Vec::with_capacity(per_quarter);
    let mut j = 0;
    for i in 0..per_quarter {
        let target = quarter * i as f64 / per_quarter as f64;
        while j + 1 < FINE && arc[j + 1] < target {
            j += 1;
        }
        let span = arc[j + 1] - arc[j];
        let w = if span > 0.0 { (target - arc[j]) / span } else { 0.0 };
        quadrant.push(params[j] + w * (params[j + 1] - params[j]));
    }

    // Mirror into the other quadrants: [0, pi/2) as sampled, then
    // pi/2 followed by pi - t in reverse, then the half turn.
    let mut ts = quadrant.clone();
    ts.push(FRAC_PI_2);
    ts.extend(quadrant[1..].iter().rev().map(|&t| PI - t));
    let half = ts.len();
    for i in 0..half {
        ts.push(ts[i] + PI);
    }
    Ok(ts.into_iter().map(|t| exact_on_ellipse(a, b, t)).collect())
}

/// Point at parameter `t`, snapped so the axis points are exact.
fn exact_on_ellipse(a: f64, b: f64, t: f64) -> Point {
    let (s, c) = t.sin_cos();
    let snap = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
    [a * snap(c), b * snap(s)]
}

fn rectangle(width: f64, height: f64, h: f64) -> Vec<Point> {
    let (hx, hy) = (0.5 * width, 0.5 * height);
    let nx = ((width / h).round() as usize).max(1);
    let ny = ((height / h).round() as usize).max(1);
    let corners = [[hx, -hy], [hx, hy], [-hx, hy], [-hx, -hy]];
    let counts = [ny, nx, ny, nx];
    let mut points = Vec::with_capacity(2 * (nx + ny));
    for side in 0..4 {
        let (p, q) = (corners[side], corners[(side + 1) % 4]);
        let m = counts[side];
        for i in 0..m {
            let w = i as f64 / m as f64;
            // Exact corners at i = 0; interior points by linear interpolation.
            points.push([p[0] + w * (q[0] - p[0]), p[1] + w * (q[1] - p[1])]);
        }
    }
    points
}

/// Twice the signed area of a closed polyline.
#[cfg(test)]
pub(crate) fn signed_area2(points: &[Point]) -> f64 {
    let n = points.len();
    (0..n)
        .map(|i| {
            let (p, q) = (points[i], points[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(outer: OuterShape) -> DomainSpec {
        DomainSpec::new(outer, [0.0, 0.0], 1.0).unwrap()
    }

    #[test]
    fn disk_counts_track_circumference() {
        let p = boundary_polylines(&spec(OuterShape::Disk { radius: 5.0 }), 0.5).unwrap();
        // 2 pi R / h = 62.8 and 12.6, rounded to multiples of four.
        assert_eq!(p.outer.len(), 64);
        assert_eq!(p.inner.len(), 12);
        assert!(signed_area2(&p.outer) > 0.0);
        assert!(signed_area2(&p.inner) < 0.0);
    }

    #[test]
    fn rectangle_keeps_corners() {
        let p = boundary_polylines(&spec(OuterShape::Rectangle { width: 13.095, height: 6.0 }), 0.25).unwrap();
        for corner in [[6.5475, -3.0], [6.5475, 3.0], [-6.5475, 3.0], [-6.5475, -3.0]] {
            assert!(p.outer.contains(&corner), "{corner:?}");
        }
        let lens: Vec<f64> = (0..p.outer.len())
            .map(|i| {
                let (a, b) = (p.outer[i], p.outer[(i + 1) % p.outer.len()]);
                (a[0] - b[0]).hypot(a[1] - b[1])
            })
            .collect();
        assert!(lens.iter().all(|&l| (l - 0.25).abs() < 0.02));
    }

    #[test]
    fn ellipse_points_lie_on_curve() {
        let p = boundary_polylines(&spec(OuterShape::Ellipse { semi_x: 8.33, semi_y: 3.0 }), 0.25).unwrap();
        for q in &p.outer {
            let v = (q[0] / 8.33).powi(2) + (q[1] / 3.0).powi(2);
            assert!((v - 1.0).abs() < 1e-12);
        }
        assert!(signed_area2(&p.outer) > 0.0);
        assert_eq!(p.outer.len() % 4, 0);
        let n = p.outer.len();
        let lens: Vec<f64> = (0..n)
            .map(|i| {
                let (a, b) = (p.outer[i], p.outer[(i + 1) % n]);
                (a[0] - b[0]).hypot(a[1] - b[1])
            })
            .collect();
        let (lo, hi) = lens.iter().fold((f64::MAX, 0.0f64), |(lo, hi), &l| (lo.min(l), hi.max(l)));
        assert!(hi - lo < 1e-3, "{lo} {hi}");
        // Mirror symmetry about both axes.
        for q in &p.outer {
            for m in [[-q[0], q[1]], [q[0], -q[1]]] {
                assert!(p.outer.iter().any(|r| (r[0] - m[0]).abs() < 1e-12 && (r[1] - m[1]).abs() < 1e-12));
            }
        }
    }

    #[test]
    fn coarse_mesh_size_is_rejected() {
        assert!(matches!(
            boundary_polylines(&spec(OuterShape::Disk { radius: 5.0 }), 2.0),
            Err(GeometryError::TooCoarse(_))
        ));
        assert!(boundary_polylines(&spec(OuterShape::Disk { radius: 5.0 }), 0.0).is_err());
    }
}
