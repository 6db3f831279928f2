use std::collections::{BTreeMap, HashSet};

use spade::{
    AngleLimit, ConstrainedDelaunayTriangulation, Point2, RefinementParameters, Triangulation,
};

use super::mesh::{BoundaryEdge, BoundaryTag, Mesh};
use super::polyline::boundary_polylines;
use super::{DomainSpec, GeometryError, Result};

/// Angle bound requested from the refiner; a margin above the 20 degree
/// guarantee checked by [`Mesh::validate`].
const REFINE_ANGLE_DEG: f64 = 25.0;

/// Constrained Delaunay mesh of the region between the outer curve and the
/// hole, refined until every triangle meets the angle bound and has area at
/// most that of an equilateral triangle with side `h`.
pub fn triangulate(spec: &DomainSpec, h: f64) -> Result<Mesh> {
    spec.validate()?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(GeometryError::MeshSize(h));
    }
    let clearance = spec.clearance();
    if clearance < 0.1 * h {
        return Err(GeometryError::Degenerate {
            clearance,
            min: 0.1 * h,
        });
    }
    let lines = boundary_polylines(spec, h)?;

    let to_point = |p: &[f64; 2]| Point2::new(p[0], p[1]);
    let mut cdt = ConstrainedDelaunayTriangulation::<Point2<f64>>::new();
    for curve in [&lines.outer, &lines.inner] {
        cdt.add_constraint_edges(curve.iter().map(to_point), true)
            .map_err(|e| GeometryError::Triangulation(format!("{e:?}")))?;
    }

    let max_area = 3f64.sqrt() / 4.0 * h * h;
    let budget = (20.0 * spec.area() / max_area) as usize + 20_000;
    let params = RefinementParameters::<f64>::new()
        .exclude_outer_faces(true)
        .with_angle_limit(AngleLimit::from_deg(REFINE_ANGLE_DEG))
        .with_max_allowed_area(max_area)
        .with_max_additional_vertices(budget);
    let result = cdt.refine(params);
    if !result.refinement_complete {
        return Err(GeometryError::Triangulation(format!(
            "refinement exceeded {budget} additional vertices"
        )));
    }
    let excluded: HashSet<usize> = result.excluded_faces.iter().map(|f| f.index()).collect();

    // Keep the faces inside the domain and renumber the vertices they use in
    // order of first appearance.
    let mut index = BTreeMap::new();
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for face in cdt.inner_faces() {
        if excluded.contains(&face.fix().index()) {
            continue;
        }
        let mut tri = [0usize; 3];
        for (slot, v) in tri.iter_mut().zip(face.vertices()) {
            let next = vertices.len();
            *slot = *index.entry(v.fix().index()).or_insert_with(|| {
                let p = v.position();
                vertices.push([p.x, p.y]);
                next
            });
        }
        triangles.push(tri);
    }
    for tri in &mut triangles {
        let [p, q, r] = tri.map(|i| vertices[i]);
        if (q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]) < 0.0 {
            tri.swap(1, 2);
        }
    }

    // Directed edges whose reverse is absent lie on the boundary, with the
    // domain to their left.
    let directed: HashSet<(usize, usize)> = triangles
        .iter()
        .flat_map(|t| (0..3).map(move |k| (t[k], t[(k + 1) % 3])))
        .collect();
    let split = spec.hole_radius + 0.5 * clearance;
    let mut boundary_edges = Vec::new();
    for t in &triangles {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            if directed.contains(&(b, a)) {
                continue;
            }
            let (p, q) = (vertices[a], vertices[b]);
            let mid = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
            let d = (mid[0] - spec.hole_center[0]).hypot(mid[1] - spec.hole_center[1]);
            let tag = if d < split { BoundaryTag::Inner } else { BoundaryTag::Outer };
            boundary_edges.push(BoundaryEdge { a, b, tag });
        }
    }

    let mesh = Mesh {
        vertices,
        triangles,
        boundary_edges,
        h,
    };
    mesh.validate()?;
    Ok(mesh)
}
