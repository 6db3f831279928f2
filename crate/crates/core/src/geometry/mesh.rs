use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{GeometryError, Point, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryTag {
    Outer,
    Inner,
}

impl BoundaryTag {
    fn as_str(self) -> &'static str {
        match self {
            BoundaryTag::Outer => "outer",
            BoundaryTag::Inner => "inner",
        }
    }
}

impl FromStr for BoundaryTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "outer" => Ok(BoundaryTag::Outer),
            "inner" => Ok(BoundaryTag::Inner),
            other => Err(format!("unknown boundary tag '{other}'")),
        }
    }
}

/// Boundary edge `a -> b`, oriented so the domain lies to its left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryEdge {
    pub a: usize,
    pub b: usize,
    pub tag: BoundaryTag,
}

/// Triangulated doubly connected region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub vertices: Vec<Point>,
    /// Counterclockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    /// Target edge length.
    pub h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshStats {
    pub vertices: usize,
    pub triangles: usize,
    pub edges: usize,
    pub outer_edges: usize,
    pub inner_edges: usize,
    pub area: f64,
    pub min_angle_deg: f64,
    pub max_edge: f64,
}

/// Smallest angle a generated mesh may contain.
pub const MIN_ANGLE_DEG: f64 = 20.0;

impl Mesh {
    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        self.triangles[t].map(|i| self.vertices[i])
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [p, q, r] = self.triangle_points(t);
        0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]))
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    pub fn edge_length(&self, e: &BoundaryEdge) -> f64 {
        let (p, q) = (self.vertices[e.a], self.vertices[e.b]);
        (q[0] - p[0]).hypot(q[1] - p[1])
    }

    pub fn boundary_length(&self, tag: Option<BoundaryTag>) -> f64 {
        self.boundary_edges
            .iter()
            .filter(|e| tag.is_none_or(|t| e.tag == t))
            .map(|e| self.edge_length(e))
            .sum()
    }

    /// Sorted vertex indices on boundary edges carrying `tag` (all tags when
    /// `None`).
    pub fn boundary_vertices(&self, tag: Option<BoundaryTag>) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .boundary_edges
            .iter()
            .filter(|e| tag.is_none_or(|t| e.tag == t))
            .flat_map(|e| [e.a, e.b])
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Undirected edges with the number of triangles containing each.
    fn edge_counts(&self) -> BTreeMap<(usize, usize), usize> {
        let mut counts = BTreeMap::new();
        for tri in &self.triangles {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        counts
    }

    fn min_angle_deg(&self) -> f64 {
        let mut worst = 180.0f64;
        for t in 0..self.triangles.len() {
            let p = self.triangle_points(t);
            for k in 0..3 {
                let (a, b, c) = (p[k], p[(k + 1) % 3], p[(k + 2) % 3]);
                let u = [b[0] - a[0], b[1] - a[1]];
                let v = [c[0] - a[0], c[1] - a[1]];
                let cos = (u[0] * v[0] + u[1] * v[1]) / (u[0].hypot(u[1]) * v[0].hypot(v[1]));
                worst = worst.min(cos.clamp(-1.0, 1.0).acos().to_degrees());
            }
        }
        worst
    }

    pub fn stats(&self) -> MeshStats {
        let counts = self.edge_counts();
        let max_edge = counts
            .keys()
            .map(|&(a, b)| {
                let (p, q) = (self.vertices[a], self.vertices[b]);
                (q[0] - p[0]).hypot(q[1] - p[1])
            })
            .fold(0.0, f64::max);
        MeshStats {
            vertices: self.vertices.len(),
            triangles: self.triangles.len(),
            edges: counts.len(),
            outer_edges: self.boundary_edges.iter().filter(|e| e.tag == BoundaryTag::Outer).count(),
            inner_edges: self.boundary_edges.iter().filter(|e| e.tag == BoundaryTag::Inner).count(),
            area: self.area(),
            min_angle_deg: self.min_angle_deg(),
            max_edge,
        }
    }

    /// Checks orientation, the annulus Euler characteristic, the boundary
    /// edge set and its tags, and the minimum angle.
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(GeometryError::Invariant(m));
        let nv = self.vertices.len();
        if let Some(tri) = self.triangles.iter().find(|t| t.iter().any(|&i| i >= nv)) {
            return fail(format!("triangle {tri:?} references a missing vertex"));
        }
        if let Some(t) = (0..self.triangles.len()).find(|&t| self.triangle_area(t) <= 0.0) {
            return fail(format!("triangle {t} is not counterclockwise"));
        }
        let counts = self.edge_counts();
        if let Some((e, c)) = counts.iter().find(|(_, &c)| c > 2) {
            return fail(format!("edge {e:?} shared by {c} triangles"));
        }
        let euler = nv as i64 - counts.len() as i64 + self.triangles.len() as i64;
        if euler != 0 {
            return fail(format!("Euler characteristic {euler}, expected 0"));
        }
        let mut boundary: Vec<(usize, usize)> = counts
            .iter()
            .filter(|(_, &c)| c == 1)
            .map(|(&e, _)| e)
            .collect();
        let mut tagged: Vec<(usize, usize)> = self
            .boundary_edges
            .iter()
            .map(|e| (e.a.min(e.b), e.a.max(e.b)))
            .collect();
        boundary.sort_unstable();
        tagged.sort_unstable();
        if boundary != tagged {
            return fail("tagged boundary edges differ from the edges owned by one triangle".into());
        }
        for tag in [BoundaryTag::Outer, BoundaryTag::Inner] {
            if !self.boundary_edges.iter().any(|e| e.tag == tag) {
                return fail(format!("no {} boundary edges", tag.as_str()));
            }
        }
        let min_angle = self.min_angle_deg();
        if min_angle < MIN_ANGLE_DEG {
            return fail(format!("minimum angle {min_angle:.2} deg below {MIN_ANGLE_DEG}"));
        }
        Ok(())
    }

    /// Plain-text form with `#vertices`, `#triangles` and `#boundary`
    /// sections, preceded by `#h`. Floats use the shortest representation that
    /// reads back to the same bits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "#h\n{}", self.h);
        out.push_str("#vertices\n");
        for (i, p) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "{i} {:?} {:?}", p[0], p[1]);
        }
        out.push_str("#triangles\n");
        for t in &self.triangles {
            let _ = writeln!(out, "{} {} {}", t[0], t[1], t[2]);
        }
        out.push_str("#boundary\n");
        for e in &self.boundary_edges {
            let _ = writeln!(out, "{} {} {}", e.a, e.b, e.tag.as_str());
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        #[derive(PartialEq)]
        enum Section {
            None,
            H,
            Vertices,
            Triangles,
            Boundary,
        }
        let mut section = Section::None;
        let mut mesh = Mesh {
            vertices: Vec::new(),
            triangles: Vec::new(),
            boundary_edges: Vec::new(),
            h: f64::NAN,
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |message: String| GeometryError::Parse {
                line: lineno + 1,
                message,
            };
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('#') {
                section = match name.trim() {
                    "h" => Section::H,
                    "vertices" => Section::Vertices,
                    "triangles" => Section::Triangles,
                    "boundary" => Section::Boundary,
                    other => return Err(err(format!("unknown section '{other}'"))),
                };
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<f64>().map_err(|e| err(format!("{s}: {e}")));
            let idx = |s: &str| s.parse::<usize>().map_err(|e| err(format!("{s}: {e}")));
            let arity = |n: usize| {
                if fields.len() == n {
                    Ok(())
                } else {
                    Err(err(format!("expected {n} fields, found {}", fields.len())))
                }
            };
            match section {
                Section::None => return Err(err("data before the first section".into())),
                Section::H => {
                    arity(1)?;
                    mesh.h = num(fields[0])?;
                }
                Section::Vertices => {
                    arity(3)?;
                    if idx(fields[0])? != mesh.vertices.len() {
                        return Err(err("vertex indices must be consecutive from 0".into()));
                    }
                    mesh.vertices.push([num(fields[1])?, num(fields[2])?]);
                }
                Section::Triangles => {
                    arity(3)?;
                    mesh.triangles.push([idx(fields[0])?, idx(fields[1])?, idx(fields[2])?]);
                }
                Section::Boundary => {
                    arity(3)?;
                    mesh.boundary_edges.push(BoundaryEdge {
                        a: idx(fields[0])?,
                        b: idx(fields[1])?,
                        tag: fields[2].parse().map_err(err)?,
                    });
                }
            }
        }
        let nv = mesh.vertices.len();
        let bad_triangle = mesh.triangles.iter().any(|t| t.iter().any(|&i| i >= nv));
        let bad_edge = mesh.boundary_edges.iter().any(|e| e.a >= nv || e.b >= nv);
        if bad_triangle || bad_edge {
            return Err(GeometryError::Parse {
                line: 0,
                message: "index out of range".into(),
            });
        }
        Ok(mesh)
    }
}
