//! P1 finite elements for the Steklov and mixed Steklov-Neumann problems,
//! reduced to a dense generalized eigenproblem on the Steklov vertices.

mod sparse;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closed_form::{enumerate_spectrum, AnnulusSpec, ClosedFormError, Problem};
use crate::geometry::{triangulate, BoundaryTag, DomainSpec, GeometryError, Mesh, MeshStats, OuterShape, Point};

pub use sparse::{reverse_cuthill_mckee, EnvelopeCholesky, SparseSymmetricMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FemError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
    #[error("triangle {0} has nonpositive area")]
    DegenerateTriangle(usize),
    #[error("matrix is not positive definite (pivot {0})")]
    NotPositiveDefinite(usize),
    #[error("boundary mass matrix is not positive definite on the Steklov vertices")]
    MassNotPositiveDefinite,
    #[error("requested {k} eigenvalues from a problem of dimension {dim}")]
    TooManyEigenvalues { k: usize, dim: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("convergence study needs at least 3 mesh levels, got {0}")]
    TooFewLevels(usize),
    #[error("numerical invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, FemError>;

/// Which boundary vertices carry the Steklov condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SteklovSet {
    /// Both boundary components (pure Steklov).
    Both,
    /// Outer component only; the hole is a Neumann boundary.
    Outer,
}

impl From<Problem> for SteklovSet {
    fn from(p: Problem) -> Self {
        match p {
            Problem::Steklov => SteklovSet::Both,
            Problem::SteklovNeumann => SteklovSet::Outer,
        }
    }
}

/// P1 element stiffness `(b_i b_j + c_i c_j) / (4A)`; `None` for a
/// degenerate or clockwise triangle.
pub fn element_stiffness(p: [Point; 3]) -> Option<[[f64; 3]; 3]> {
    let b = [p[1][1] - p[2][1], p[2][1] - p[0][1], p[0][1] - p[1][1]];
    let c = [p[2][0] - p[1][0], p[0][0] - p[2][0], p[1][0] - p[0][0]];
    let area2 = b[1] * c[2] - b[2] * c[1];
    if !(area2 > 0.0) {
        return None;
    }
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = (b[i] * b[j] + c[i] * c[j]) / (2.0 * area2);
        }
    }
    Some(k)
}

pub fn assemble_stiffness(mesh: &Mesh) -> Result<SparseSymmetricMatrix> {
    let mut triplets = Vec::with_capacity(9 * mesh.triangles.len());
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let k = element_stiffness(mesh.triangle_points(t)).ok_or(FemError::DegenerateTriangle(t))?;
        for i in 0..3 {
            for j in 0..3 {
                triplets.push((tri[i], tri[j], k[i][j]));
            }
        }
    }
    Ok(SparseSymmetricMatrix::from_triplets(mesh.vertices.len(), triplets))
}

/// Boundary mass matrix `int_{Gamma} u v dS` over the Steklov part of the
/// boundary, at full mesh size and restricted to the Steklov vertices.
#[derive(Debug, Clone)]
pub struct BoundaryMassMatrix {
    pub global: SparseSymmetricMatrix,
    /// Sorted mesh indices of the Steklov vertices.
    pub steklov_vertices: Vec<usize>,
}

impl BoundaryMassMatrix {
    pub fn restricted(&self) -> DMatrix<f64> {
        self.global.principal_submatrix(&self.steklov_vertices).to_dense()
    }

    pub fn total(&self) -> f64 {
        (0..self.global.dim()).flat_map(|i| self.global.row(i).map(|(_, v)| v)).sum()
    }
}

/// Adds `e/6 [[2,1],[1,2]]` for every boundary edge of length `e` in the set.
pub fn assemble_boundary_mass(mesh: &Mesh, set: SteklovSet) -> BoundaryMassMatrix {
    let admits = |tag: BoundaryTag| set == SteklovSet::Both || tag == BoundaryTag::Outer;
    let mut triplets = Vec::new();
    for e in mesh.boundary_edges.iter().filter(|e| admits(e.tag)) {
        let len = mesh.edge_length(e);
        triplets.push((e.a, e.a, len / 3.0));
        triplets.push((e.b, e.b, len / 3.0));
        triplets.push((e.a, e.b, len / 6.0));
        triplets.push((e.b, e.a, len / 6.0));
    }
    let steklov_vertices = match set {
        SteklovSet::Both => mesh.boundary_vertices(None),
        SteklovSet::Outer => mesh.boundary_vertices(Some(BoundaryTag::Outer)),
    };
    BoundaryMassMatrix {
        global: SparseSymmetricMatrix::from_triplets(mesh.vertices.len(), triplets),
        steklov_vertices,
    }
}

/// Schur complement `K_bb - K_bi K_ii^{-1} K_ib` onto the sorted index set
/// `steklov`. `K_ii` is factored once and the columns of `L^{-1} K_ib` are
/// computed in parallel, so `S = K_bb - W^T W` is symmetric by construction.
pub fn dtn_schur(k: &SparseSymmetricMatrix, steklov: &[usize]) -> Result<DMatrix<f64>> {
    let n = k.dim();
    let mut is_b = vec![false; n];
    for &b in steklov {
        if b >= n {
            return Err(FemError::Dimension(format!("vertex {b} outside a matrix of size {n}")));
        }
        is_b[b] = true;
    }
    let interior: Vec<usize> = (0..n).filter(|&i| !is_b[i]).collect();
    let mut s = k.principal_submatrix(steklov).to_dense();
    if interior.is_empty() {
        return Ok(s);
    }
    let mut local = vec![usize::MAX; n];
    for (p, &i) in interior.iter().enumerate() {
        local[i] = p;
    }
    let chol = EnvelopeCholesky::factor(&k.principal_submatrix(&interior))?;
    let columns: Vec<Vec<f64>> = steklov
        .par_iter()
        .map(|&b| {
            let mut rhs = vec![0.0; interior.len()];
            for (j, v) in k.row(b) {
                if local[j] != usize::MAX {
                    rhs[local[j]] = v;
                }
            }
            chol.forward(&rhs)
        })
        .collect();
    let w = DMatrix::from_fn(interior.len(), steklov.len(), |r, c| columns[c][r]);
    s -= w.tr_mul(&w);
    let sym = (&s + s.transpose()) * 0.5;
    Ok(sym)
}

/// Eigenpairs of `S v = lambda M v`, ascending, with `M`-orthonormal
/// columns in `vectors`.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

/// The `k` smallest eigenpairs of the symmetric pencil `(S, M)`: Cholesky
/// `M = L L^T`, dense symmetric eigensolve of `L^{-1} S L^{-T}`, then
/// `v = L^{-T} q`.
pub fn solve_eigs(s: &DMatrix<f64>, m: &DMatrix<f64>, k: usize) -> Result<EigenPairs> {
    let dim = s.nrows();
    if s.shape() != (dim, dim) || m.shape() != (dim, dim) {
        return Err(FemError::Dimension(format!("S is {:?}, M is {:?}", s.shape(), m.shape())));
    }
    if k > dim {
        return Err(FemError::TooManyEigenvalues { k, dim });
    }
    let l = m.clone().cholesky().ok_or(FemError::MassNotPositiveDefinite)?.unpack();
    let lt = l.transpose();
    let x = l.solve_lower_triangular(s).ok_or(FemError::MassNotPositiveDefinite)?;
    let c = l.solve_lower_triangular(&x.transpose()).ok_or(FemError::MassNotPositiveDefinite)?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    order.truncate(k);
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let q = DMatrix::from_fn(dim, k, |r, c| eig.eigenvectors[(r, order[c])]);
    let vectors = lt.solve_upper_triangular(&q).ok_or(FemError::MassNotPositiveDefinite)?;
    Ok(EigenPairs { values, vectors })
}

/// Consecutive eigenvalues within relative `1e-3` of each other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub first: usize,
    pub size: usize,
    pub mean: f64,
}

pub const CLUSTER_TOLERANCE: f64 = 1e-3;

pub fn clusters(values: &[f64]) -> Vec<Cluster> {
    let mut out: Vec<Cluster> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match out.last_mut() {
            Some(c) if (v - values[i - 1]).abs() <= CLUSTER_TOLERANCE * v.abs().max(values[i - 1].abs()) => {
                c.mean = (c.mean * c.size as f64 + v) / (c.size + 1) as f64;
                c.size += 1;
            }
            _ => out.push(Cluster { first: i, size: 1, mean: v }),
        }
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenSolution {
    pub problem: Problem,
    pub spec: Option<DomainSpec>,
    pub h: f64,
    pub mesh: Option<MeshStats>,
    /// Ascending, starting with the constant mode near zero.
    pub eigenvalues: Vec<f64>,
    pub clusters: Vec<Cluster>,
    /// Mesh indices of the Steklov vertices, the rows of each eigenvector.
    #[serde(skip)]
    pub steklov_vertices: Vec<usize>,
    /// Boundary traces, `M`-orthonormal.
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
}

impl EigenSolution {
    /// Eigenvalue with index `i` counted from the zero eigenvalue (`sigma_0 = 0`).
    pub fn value(&self, i: usize) -> f64 {
        self.eigenvalues[i]
    }
}

const STIFFNESS_ROW_SUM_TOL: f64 = 1e-12;
const SCHUR_ROW_SUM_TOL: f64 = 1e-9;
const ORTHONORMALITY_TOL: f64 = 1e-8;

fn check(ok: bool, message: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(FemError::Invariant(message()))
    }
}

/// Full pipeline on an existing mesh, asserting the matrix invariants along
/// the way.
pub fn solve_on_mesh(mesh: &Mesh, problem: Problem, k: usize) -> Result<EigenSolution> {
    let stiffness = assemble_stiffness(mesh)?;
    let scale = stiffness.max_abs().max(1.0);
    let ones = vec![1.0; stiffness.dim()];
    let worst_row = stiffness.mul_vec(&ones).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    check(worst_row <= STIFFNESS_ROW_SUM_TOL * scale, || format!("stiffness row sum {worst_row:e}"))?;

    let mass = assemble_boundary_mass(mesh, problem.into());
    let s = dtn_schur(&stiffness, &mass.steklov_vertices)?;
    let s_rows = (&s * DMatrix::from_element(s.ncols(), 1, 1.0)).amax();
    check(s_rows <= SCHUR_ROW_SUM_TOL * s.amax().max(1.0), || format!("Schur row sum {s_rows:e}"))?;

    let m = mass.restricted();
    let pairs = solve_eigs(&s, &m, k)?;
    if k >= 2 {
        let (l0, l1) = (pairs.values[0], pairs.values[1]);
        check(l0.abs() <= 1e-8 * l1, || format!("lowest eigenvalue {l0:e} is not zero relative to {l1:e}"))?;
        check(pairs.values.windows(2).all(|w| w[0] <= w[1]), || "eigenvalues not ascending".into())?;
    }
    let gram = pairs.vectors.tr_mul(&(&m * &pairs.vectors));
    let off = (gram - DMatrix::identity(k, k)).amax();
    check(off < ORTHONORMALITY_TOL, || format!("M-orthonormality defect {off:e}"))?;

    Ok(EigenSolution {
        problem,
        spec: None,
        h: mesh.h,
        mesh: Some(mesh.stats()),
        clusters: clusters(&pairs.values),
        eigenvalues: pairs.values,
        steklov_vertices: mass.steklov_vertices,
        eigenvectors: pairs.vectors.column_iter().map(|c| c.iter().copied().collect()).collect(),
    })
}

pub fn solve(spec: &DomainSpec, problem: Problem, h: f64, k: usize) -> Result<EigenSolution> {
    let mesh = triangulate(spec, h)?;
    let mut sol = solve_on_mesh(&mesh, problem, k)?;
    sol.spec = Some(*spec);
    Ok(sol)
}

pub fn solve_steklov(spec: &DomainSpec, h: f64, k: usize) -> Result<EigenSolution> {
    solve(spec, Problem::Steklov, h, k)
}

pub fn solve_mixed_sn(spec: &DomainSpec, h: f64, k: usize) -> Result<EigenSolution> {
    solve(spec, Problem::SteklovNeumann, h, k)
}

/// The concentric annulus described by `spec`, if it is one.
pub fn as_annulus(spec: &DomainSpec) -> Option<AnnulusSpec> {
    match spec.outer {
        OuterShape::Disk { radius } if spec.hole_center == [0.0, 0.0] => {
            AnnulusSpec::new(2, spec.hole_radius, radius).ok()
        }
        _ => None,
    }
}

/// First `k` exact eigenvalues (with multiplicity, starting at zero for the
/// Steklov problem) of a concentric planar annulus.
pub fn annulus_reference(spec: &AnnulusSpec, problem: Problem, k: usize) -> Result<Vec<f64>> {
    let lines = enumerate_spectrum(spec, problem, k)?;
    Ok(lines
        .iter()
        .flat_map(|l| std::iter::repeat_n(l.value, l.multiplicity as usize))
        .take(k)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    ClosedForm,
    Richardson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceLevel {
    pub h: f64,
    pub vertices: usize,
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub problem: Problem,
    pub spec: DomainSpec,
    pub reference_kind: ReferenceKind,
    pub levels: Vec<ConvergenceLevel>,
    /// Exact or extrapolated value per eigenvalue index.
    pub reference: Vec<f64>,
    /// Relative error of each level against the reference.
    pub relative_errors: Vec<Vec<f64>>,
    /// Observed order per eigenvalue index from the two finest levels;
    /// `None` where it is undefined (zero or non-shrinking error).
    pub observed_order: Vec<Option<f64>>,
}

/// Solves on every mesh size in `h_list` (descending) and estimates the
/// convergence order of each of the first `k` eigenvalues, against the closed
/// form for concentric annuli and by Richardson extrapolation from the three
/// finest levels otherwise.
pub fn convergence_study(spec: &DomainSpec, problem: Problem, h_list: &[f64], k: usize) -> Result<ConvergenceStudy> {
    if h_list.len() < 3 {
        return Err(FemError::TooFewLevels(h_list.len()));
    }
    let solutions: Vec<EigenSolution> = h_list
        .par_iter()
        .map(|&h| solve(spec, problem, h, k))
        .collect::<Result<_>>()?;
    let levels: Vec<ConvergenceLevel> = solutions
        .iter()
        .map(|s| ConvergenceLevel {
            h: s.h,
            vertices: s.mesh.map_or(0, |m| m.vertices),
            eigenvalues: s.eigenvalues.clone(),
        })
        .collect();
    let m = levels.len();
    let ratio = |a: usize, b: usize| (h_list[a] / h_list[b]).ln();

    let (reference_kind, reference) = match as_annulus(spec) {
        Some(annulus) => (ReferenceKind::ClosedForm, annulus_reference(&annulus, problem, k)?),
        None => {
            let extrapolated = (0..k)
                .map(|i| {
                    let (a, b, c) = (
                        levels[m - 3].eigenvalues[i],
                        levels[m - 2].eigenvalues[i],
                        levels[m - 1].eigenvalues[i],
                    );
                    let p = ((a - b) / (b - c)).ln() / ratio(m - 2, m - 1);
                    let factor = (h_list[m - 2] / h_list[m - 1]).powf(p) - 1.0;
                    if p.is_finite() && p > 0.0 {
                        c + (c - b) / factor
                    } else {
                        c
                    }
                })
                .collect();
            (ReferenceKind::Richardson, extrapolated)
        }
    };

    let relative_errors: Vec<Vec<f64>> = levels
        .iter()
        .map(|lv| {
            lv.eigenvalues
                .iter()
                .zip(&reference)
                .map(|(v, r)| if *r == 0.0 { (v - r).abs() } else { ((v - r) / r).abs() })
                .collect()
        })
        .collect();
    let observed_order = (0..k)
        .map(|i| {
            let (coarse, fine) = (relative_errors[m - 2][i], relative_errors[m - 1][i]);
            let p = (coarse / fine).ln() / ratio(m - 2, m - 1);
            (reference[i] != 0.0 && p.is_finite()).then_some(p)
        })
        .collect();
    Ok(ConvergenceStudy {
        problem,
        spec: *spec,
        reference_kind,
        levels,
        reference,
        relative_errors,
        observed_order,
    })
}
