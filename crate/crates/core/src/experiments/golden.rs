//! Published eigenvalue tables and their reproduction.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sig6, ExperimentError, Result};
use crate::closed_form::Problem;
use crate::fem::solve_on_mesh;
use crate::geometry::{triangulate, DomainSpec, OuterShape, Point};

pub const DISK: OuterShape = OuterShape::Disk { radius: 5.0 };
pub const RECTANGLE: OuterShape = OuterShape::Rectangle { width: 13.095, height: 6.0 };
pub const ELLIPSE: OuterShape = OuterShape::Ellipse { semi_x: 3.0, semi_y: 8.33 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Sigma1,
    Sigma2,
    Mu1,
    Mu2,
}

impl Quantity {
    pub const ALL: [Quantity; 4] = [Quantity::Sigma1, Quantity::Sigma2, Quantity::Mu1, Quantity::Mu2];

    pub fn problem(self) -> Problem {
        match self {
            Quantity::Sigma1 | Quantity::Sigma2 => Problem::Steklov,
            Quantity::Mu1 | Quantity::Mu2 => Problem::SteklovNeumann,
        }
    }

    /// Index in the ascending spectrum, counting the zero eigenvalue as 0.
    pub fn index(self) -> usize {
        match self {
            Quantity::Sigma1 | Quantity::Mu1 => 1,
            Quantity::Sigma2 | Quantity::Mu2 => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Sigma1 => "sigma1",
            Quantity::Sigma2 => "sigma2",
            Quantity::Mu1 => "mu1",
            Quantity::Mu2 => "mu2",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GoldenRow {
    pub label: &'static str,
    pub outer: OuterShape,
    pub center: Point,
    pub values: &'static [(Quantity, f64)],
}

const fn all4(s1: f64, s2: f64, m1: f64, m2: f64) -> [(Quantity, f64); 4] {
    [(Quantity::Sigma1, s1), (Quantity::Sigma2, s2), (Quantity::Mu1, m1), (Quantity::Mu2, m2)]
}

macro_rules! row {
    ($label:expr, $outer:expr, $c:expr, $s1:expr, $s2:expr, $m1:expr, $m2:expr) => {
        GoldenRow {
            label: $label,
            outer: $outer,
            center: $c,
            values: &all4($s1, $s2, $m1, $m2),
        }
    };
}

/// Counterexample table: unit hole at the origin.
pub const COUNTEREXAMPLES: [GoldenRow; 3] = [
    GoldenRow {
        label: "Omega1",
        outer: DISK,
        center: [0.0, 0.0],
        values: &[(Quantity::Sigma2, 0.1783), (Quantity::Mu2, 0.18467)],
    },
    GoldenRow {
        label: "Omega2",
        outer: RECTANGLE,
        center: [0.0, 0.0],
        values: &[(Quantity::Sigma2, 0.2384), (Quantity::Mu2, 0.23222)],
    },
    GoldenRow {
        label: "Omega3",
        outer: ELLIPSE,
        center: [0.0, 0.0],
        values: &[(Quantity::Sigma2, 0.20204), (Quantity::Mu2, 0.24484)],
    },
];

/// Unit hole moving along the x-axis inside the radius-5 disk.
pub const DISK_SWEEP: [GoldenRow; 7] = [
    row!("(0.5, 0)", DISK, [0.5, 0.0], 0.177575, 0.178242, 0.184583, 0.184583),
    row!("(1, 0)", DISK, [1.0, 0.0], 0.175421, 0.178052, 0.18448, 0.18448),
    row!("(1.5, 0)", DISK, [1.5, 0.0], 0.171908, 0.177698, 0.184289, 0.184289),
    row!("(2, 0)", DISK, [2.0, 0.0], 0.167088, 0.177101, 0.183969, 0.183969),
    row!("(2.5, 0)", DISK, [2.5, 0.0], 0.160911, 0.176084, 0.183431, 0.183431),
    row!("(3, 0)", DISK, [3.0, 0.0], 0.152997, 0.174166, 0.182441, 0.182441),
    row!("(3.5, 0)", DISK, [3.5, 0.0], 0.141689, 0.169468, 0.180127, 0.180127),
];

pub const ELLIPSE_X: [GoldenRow; 5] = [
    row!("(0.4, 0)", ELLIPSE, [0.4, 0.0], 0.0671757, 0.200234, 0.0682314, 0.231544),
    row!("(0.8, 0)", ELLIPSE, [0.8, 0.0], 0.0670031, 0.195403, 0.0680922, 0.230396),
    row!("(1.2, 0)", ELLIPSE, [1.2, 0.0], 0.0666325, 0.186742, 0.0677969, 0.228218),
    row!("(1.6, 0)", ELLIPSE, [1.6, 0.0], 0.0657731, 0.17198, 0.0671274, 0.22400),
    row!("(1.9, 0)", ELLIPSE, [1.9, 0.0], 0.0636588, 0.1478, 0.0655633, 0.214635),
];

pub const ELLIPSE_Y: [GoldenRow; 7] = [
    row!("(0, 0.5)", ELLIPSE, [0.0, 0.5], 0.0671408, 0.202004, 0.0682859, 0.231531),
    row!("(0, 1.5)", ELLIPSE, [0.0, 1.5], 0.0664638, 0.203392, 0.0683868, 0.228691),
    row!("(0, 2.5)", ELLIPSE, [0.0, 2.5], 0.0651789, 0.204995, 0.0685867, 0.223756),
    row!("(0, 3.5)", ELLIPSE, [0.0, 3.5], 0.0633908, 0.204736, 0.0688788, 0.217687),
    row!("(0, 4.5)", ELLIPSE, [0.0, 4.5], 0.0611841, 0.200454, 0.0692449, 0.211176),
    row!("(0, 5.5)", ELLIPSE, [0.0, 5.5], 0.0585319, 0.190421, 0.0696235, 0.204242),
    row!("(0, 6.5)", ELLIPSE, [0.0, 6.5], 0.0548775, 0.17005, 0.0697002, 0.19409),
];

pub const ELLIPSE_DIAGONAL: [GoldenRow; 4] = [
    row!("(0.5, 0.5)", ELLIPSE, [0.5, 0.5], 0.0670582, 0.199557, 0.0682192, 0.230959),
    row!("(1, 1)", ELLIPSE, [1.0, 1.0], 0.0664918, 0.192501, 0.0680132, 0.227984),
    row!("(1.5, 1.5)", ELLIPSE, [1.5, 1.5], 0.0651753, 0.177751, 0.0673899, 0.221902),
    row!("(1.9, 1.9)", ELLIPSE, [1.9, 1.9], 0.0600965, 0.128205, 0.0641569, 0.198211),
];

/// Rows of table `id`: 1 is the counterexample table followed by the disk
/// sweep, 2 to 4 are the ellipse sweeps along the x-axis, the y-axis and the
/// diagonal.
pub fn golden_rows(id: u8) -> Result<Vec<GoldenRow>> {
    Ok(match id {
        1 => COUNTEREXAMPLES.iter().chain(&DISK_SWEEP).copied().collect(),
        2 => ELLIPSE_X.to_vec(),
        3 => ELLIPSE_Y.to_vec(),
        4 => ELLIPSE_DIAGONAL.to_vec(),
        other => return Err(ExperimentError::UnknownTable(other)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub quantity: Quantity,
    pub published: f64,
    pub computed: f64,
    pub relative_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub domain: DomainSpec,
    pub entries: Vec<TableEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableArtifact {
    pub id: u8,
    pub h: f64,
    pub rows: Vec<TableRow>,
}

impl TableArtifact {
    pub fn entries(&self) -> impl Iterator<Item = (&TableRow, &TableEntry)> {
        self.rows.iter().flat_map(|r| r.entries.iter().map(move |e| (r, e)))
    }

    pub fn max_deviation(&self) -> f64 {
        self.entries().fold(0.0, |m, (_, e)| m.max(e.relative_deviation))
    }

    pub fn within(&self, tolerance: f64) -> bool {
        self.entries().all(|(_, e)| e.relative_deviation <= tolerance)
    }

    pub fn computed(&self, label: &str, quantity: Quantity) -> Option<f64> {
        self.entries()
            .find(|(r, e)| r.label == label && e.quantity == quantity)
            .map(|(_, e)| e.computed)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("table,domain,t1,t2,quantity,published,computed,relative_deviation\n");
        for (row, e) in self.entries() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                self.id,
                csv_field(&row.label),
                sig6(row.domain.hole_center[0]),
                sig6(row.domain.hole_center[1]),
                e.quantity.name(),
                sig6(e.published),
                sig6(e.computed),
                sig6(e.relative_deviation),
            ));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Runs the FEM pipeline at mesh size `h` for every row of table `id` and
/// compares with the published values. Rows run concurrently; row order is
/// preserved.
pub fn reproduce_table(id: u8, h: f64) -> Result<TableArtifact> {
    let rows = golden_rows(id)?;
    let rows = rows
        .par_iter()
        .map(|g| {
            let domain = DomainSpec::new(g.outer, g.center, 1.0)?;
            let mesh = triangulate(&domain, h)?;
            let mut spectra = Vec::new();
            for problem in [Problem::Steklov, Problem::SteklovNeumann] {
                if g.values.iter().any(|(q, _)| q.problem() == problem) {
                    spectra.push((problem, solve_on_mesh(&mesh, problem, 3)?));
                }
            }
            let entries = g
                .values
                .iter()
                .map(|&(quantity, published)| {
                    let sol = &spectra.iter().find(|(p, _)| *p == quantity.problem()).unwrap().1;
                    let computed = sol.value(quantity.index());
                    TableEntry {
                        quantity,
                        published,
                        computed,
                        relative_deviation: (computed - published).abs() / published,
                    }
                })
                .collect();
            Ok(TableRow {
                label: g.label.to_string(),
                domain,
                entries,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TableArtifact { id, h, rows })
}
