//! Hole-position sweeps and monotonicity verdicts.

use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{outer_of, point_list, KeyValues};
use super::golden::{Quantity, DISK, DISK_SWEEP, ELLIPSE, ELLIPSE_DIAGONAL, ELLIPSE_X, ELLIPSE_Y};
use super::{sig6, ExperimentError, Result};
use crate::closed_form::Problem;
use crate::fem::{clusters, solve_on_mesh};
use crate::geometry::{triangulate, DomainSpec, OuterShape, Point};

/// Relative slack allowed between consecutive sweep points.
pub const MONOTONE_SLACK: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepPath {
    AxisX,
    AxisY,
    Diagonal,
}

impl FromStr for SweepPath {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "x" | "axis-x" | "axis_x" => Ok(SweepPath::AxisX),
            "y" | "axis-y" | "axis_y" => Ok(SweepPath::AxisY),
            "diagonal" | "y=x" => Ok(SweepPath::Diagonal),
            other => Err(format!("unknown path '{other}' (expected x, y or diagonal)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub outer: OuterShape,
    pub hole_radius: f64,
    pub path: SweepPath,
    pub centers: Vec<Point>,
    pub h: f64,
    pub k: usize,
}

impl SweepSpec {
    fn from_golden(rows: &[super::golden::GoldenRow], outer: OuterShape, path: SweepPath, h: f64) -> Self {
        Self {
            outer,
            hole_radius: 1.0,
            path,
            centers: rows.iter().map(|r| r.center).collect(),
            h,
            k: 4,
        }
    }

    /// Centers of the published disk sweep.
    pub fn disk(h: f64) -> Self {
        Self::from_golden(&DISK_SWEEP, DISK, SweepPath::AxisX, h)
    }

    /// Centers of the published ellipse sweep along `path`.
    pub fn ellipse(path: SweepPath, h: f64) -> Self {
        let rows: &[_] = match path {
            SweepPath::AxisX => &ELLIPSE_X,
            SweepPath::AxisY => &ELLIPSE_Y,
            SweepPath::Diagonal => &ELLIPSE_DIAGONAL,
        };
        Self::from_golden(rows, ELLIPSE, path, h)
    }

    /// JSON, or keys `outer`, `hole_radius`, `path`, `centers` (pairs
    /// separated by `;`), `h` and `k`.
    pub fn parse(text: &str) -> Result<Self> {
        let spec: Self = if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| ExperimentError::Config {
                line: e.line(),
                message: e.to_string(),
            })?
        } else {
            let kv = KeyValues::parse(text)?;
            kv.only(&["outer", "hole_radius", "path", "centers", "h", "k"])?;
            Self {
                outer: outer_of(&kv)?,
                hole_radius: kv.parsed("hole_radius")?.unwrap_or(1.0),
                path: kv.parsed("path")?.unwrap_or(SweepPath::AxisX),
                centers: point_list(&kv, "centers")?,
                h: kv.parsed("h")?.unwrap_or(0.125),
                k: kv.parsed("k")?.unwrap_or(4),
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.centers.is_empty() {
            return Err(ExperimentError::Precondition("sweep has no centers".into()));
        }
        if self.k < 3 {
            return Err(ExperimentError::Precondition(format!("k = {} is below 3", self.k)));
        }
        for &c in &self.centers {
            DomainSpec::new(self.outer, c, self.hole_radius)?;
        }
        Ok(())
    }

    /// Trends asserted by the conjectures for this configuration.
    pub fn expected(&self) -> Vec<(Quantity, Trend)> {
        use Quantity::*;
        use Trend::*;
        match self.outer {
            OuterShape::Disk { .. } => Quantity::ALL.iter().map(|&q| (q, Nonincreasing)).collect(),
            OuterShape::Ellipse { .. } => {
                let mu1 = if self.path == SweepPath::AxisY { Nondecreasing } else { Nonincreasing };
                vec![(Sigma1, Nonincreasing), (Mu1, mu1), (Mu2, Nonincreasing)]
            }
            OuterShape::Rectangle { .. } => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Nonincreasing,
    Nondecreasing,
    /// Constant within the slack, including a single point.
    Both,
    Neither,
}

impl Trend {
    pub fn satisfies(self, expected: Trend) -> bool {
        self == expected || self == Trend::Both
    }
}

pub fn trend(values: &[f64], slack: f64) -> Trend {
    let down = values.windows(2).all(|w| w[1] <= w[0] + slack * w[0].abs());
    let up = values.windows(2).all(|w| w[1] >= w[0] - slack * w[0].abs());
    match (down, up) {
        (true, true) => Trend::Both,
        (true, false) => Trend::Nonincreasing,
        (false, true) => Trend::Nondecreasing,
        (false, false) => Trend::Neither,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub center: Point,
    pub distance: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub mu1: f64,
    pub mu2: f64,
    /// Size of the cluster containing `mu1`.
    pub mu1_multiplicity: usize,
}

impl SweepRow {
    pub fn get(&self, q: Quantity) -> f64 {
        match q {
            Quantity::Sigma1 => self.sigma1,
            Quantity::Sigma2 => self.sigma2,
            Quantity::Mu1 => self.mu1,
            Quantity::Mu2 => self.mu2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub quantity: Quantity,
    pub observed: Trend,
    pub expected: Option<Trend>,
    /// `None` when the conjectures make no claim about this quantity.
    pub agrees: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub sweep: SweepSpec,
    pub rows: Vec<SweepRow>,
    pub verdicts: Vec<Verdict>,
    /// Disk sweeps only: whether `mu1` has multiplicity two at every center.
    pub mu1_double_everywhere: Option<bool>,
    /// False if any verdict disagrees with the conjectured trend.
    pub matches_conjectures: bool,
}

impl SweepResult {
    pub fn verdict(&self, q: Quantity) -> &Verdict {
        self.verdicts.iter().find(|v| v.quantity == q).expect("all quantities have verdicts")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t1,t2,distance,sigma1,sigma2,mu1,mu2\n");
        for r in &self.rows {
            let cells = [r.center[0], r.center[1], r.distance, r.sigma1, r.sigma2, r.mu1, r.mu2];
            out.push_str(&cells.map(sig6).join(","));
            out.push('\n');
        }
        out
    }
}

/// Solves both problems at every center (concurrently, order preserved) and
/// classifies each quantity along the path.
pub fn run_sweep(sweep: &SweepSpec) -> Result<SweepResult> {
    sweep.validate()?;
    let rows = sweep
        .centers
        .par_iter()
        .map(|&center| {
            let domain = DomainSpec::new(sweep.outer, center, sweep.hole_radius)?;
            let mesh = triangulate(&domain, sweep.h)?;
            let s = solve_on_mesh(&mesh, Problem::Steklov, sweep.k)?;
            let m = solve_on_mesh(&mesh, Problem::SteklovNeumann, sweep.k)?;
            let mu1_multiplicity = clusters(&m.eigenvalues)
                .iter()
                .find(|c| c.first <= 1 && 1 < c.first + c.size)
                .map_or(1, |c| c.size);
            Ok(SweepRow {
                center,
                distance: center[0].hypot(center[1]),
                sigma1: s.value(1),
                sigma2: s.value(2),
                mu1: m.value(1),
                mu2: m.value(2),
                mu1_multiplicity,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let expected = sweep.expected();
    let verdicts: Vec<Verdict> = Quantity::ALL
        .iter()
        .map(|&q| {
            let values: Vec<f64> = rows.iter().map(|r| r.get(q)).collect();
            let observed = trend(&values, MONOTONE_SLACK);
            let expected = expected.iter().find(|(e, _)| *e == q).map(|&(_, t)| t);
            Verdict {
                quantity: q,
                observed,
                expected,
                agrees: expected.map(|t| observed.satisfies(t)),
            }
        })
        .collect();
    let mu1_double_everywhere =
        matches!(sweep.outer, OuterShape::Disk { .. }).then(|| rows.iter().all(|r| r.mu1_multiplicity == 2));
    let matches_conjectures =
        verdicts.iter().all(|v| v.agrees != Some(false)) && mu1_double_everywhere != Some(false);
    Ok(SweepResult {
        sweep: sweep.clone(),
        rows,
        verdicts,
        mu1_double_everywhere,
        matches_conjectures,
    })
}
