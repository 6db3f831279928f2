//! Grid verification of the inequalities that order the annulus spectrum and
//! of the monotonicity of the radial energy densities `F` and `G`.
//!
//! Every check produces a signed margin (the slack of the inequality, positive
//! when it holds). A report passes when its worst margin is not below
//! `-1e-9 * (1 + scale)`, where `scale` is the largest magnitude among the
//! quantities compared.

use serde::{Deserialize, Serialize};

use crate::closed_form::{
    enumerate_spectrum, quad_coeffs, sigma_21_closed, steklov_eigenvalue, AnnulusSpec, Branch,
    ClosedFormError, Problem, RadialProfile,
};

const REL_TOL: f64 = 1e-9;

/// Parameter grid for the scans.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_values: Vec<usize>,
    pub ratio_values: Vec<f64>,
    pub r_samples: usize,
    pub t_samples: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n_values: vec![2, 3, 4, 5],
            ratio_values: vec![1.1, 1.5, 2.0, 5.0, 10.0],
            r_samples: 64,
            t_samples: 512,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GridError {
    #[error("grid has no {0} values")]
    Empty(&'static str),
    #[error("{0} must be at least 16")]
    TooFewSamples(&'static str),
    #[error("dimension {0} is below 2")]
    Dimension(usize),
    #[error("annulus ratio {0} must exceed 1")]
    Ratio(f64),
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), GridError> {
        if self.n_values.is_empty() {
            return Err(GridError::Empty("n"));
        }
        if self.ratio_values.is_empty() {
            return Err(GridError::Empty("L"));
        }
        if self.r_samples < 16 {
            return Err(GridError::TooFewSamples("r_samples"));
        }
        if self.t_samples < 16 {
            return Err(GridError::TooFewSamples("t_samples"));
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n < 2) {
            return Err(GridError::Dimension(n));
        }
        if let Some(&l) = self.ratio_values.iter().find(|&&l| !(l > 1.0 && l.is_finite())) {
            return Err(GridError::Ratio(l));
        }
        Ok(())
    }

    fn annuli(&self) -> impl Iterator<Item = AnnulusSpec> + '_ {
        self.n_values.iter().flat_map(move |&n| {
            self.ratio_values
                .iter()
                .map(move |&l| AnnulusSpec::normalized(n, l).expect("validated grid"))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub point: String,
    pub margin: f64,
}

/// Outcome of one claim over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: String,
    pub grid_size: usize,
    pub worst_margin: f64,
    pub worst_point: String,
    pub tolerance: f64,
    pub pass: bool,
    pub violations: Vec<Violation>,
}

/// Collects margins for one claim.
#[derive(Debug)]
pub struct MarginLog {
    claim: String,
    samples: Vec<(String, f64)>,
    scale: f64,
}

impl MarginLog {
    pub fn new(claim: impl Into<String>) -> Self {
        Self {
            claim: claim.into(),
            samples: Vec::new(),
            scale: 0.0,
        }
    }

    /// Records `margin` at `point`; `scale` is the magnitude of the compared
    /// quantities.
    pub fn record(&mut self, point: impl Into<String>, margin: f64, scale: f64) {
        self.scale = self.scale.max(scale.abs());
        self.samples.push((point.into(), margin));
    }

    pub fn finish(self) -> VerificationReport {
        let tolerance = REL_TOL * (1.0 + self.scale);
        let mut worst_margin = f64::INFINITY;
        let mut worst_point = String::new();
        let mut violations = Vec::new();
        for (point, margin) in &self.samples {
            // NaN margins count as failures.
            let margin = if margin.is_nan() { f64::NEG_INFINITY } else { *margin };
            if margin < worst_margin {
                worst_margin = margin;
                worst_point.clone_from(point);
            }
            if margin < -tolerance {
                violations.push(Violation {
                    point: point.clone(),
                    margin,
                });
            }
        }
        VerificationReport {
            claim: self.claim,
            grid_size: self.samples.len(),
            worst_margin,
            worst_point,
            tolerance,
            pass: worst_margin >= -tolerance,
            violations,
        }
    }
}

fn point(spec: &AnnulusSpec) -> String {
    format!("n={} L={}", spec.dim(), spec.ratio())
}

/// Polynomial whose nonnegativity on `t >= 1` gives `sigma_{2,1} <= sigma_{0,2}`
/// for `n >= 3`.
pub fn poly_h(n: usize, t: f64) -> f64 {
    poly_h_terms(n, t).iter().sum()
}

fn poly_h_terms(n: usize, t: f64) -> [f64; 7] {
    let nf = n as f64;
    let p = |k: usize| t.powi(k as i32);
    [
        (nf - 2.0) * p(2 * n + 1),
        -(nf + 2.0) * p(2 * n),
        (nf - 2.0) * p(n + 3),
        (3.0 * nf - 2.0) * p(n + 2),
        -2.0 * nf * p(n - 1),
        4.0 * t,
        -2.0 * (nf - 2.0),
    ]
}

/// Auxiliary polynomial for `sigma_{2,1} <= sigma_{1,2}` when `n >= 3`,
/// returned as `(value, scale)` with `scale` the magnitude of the two
/// products being subtracted.
pub fn poly_h_tilde(n: usize, t: f64) -> (f64, f64) {
    let nf = n as f64;
    let p = |k: usize| t.powi(k as i32);
    let first = nf * nf * p(2 * n + 6) - 4.0 * nf * p(2 * n + 5)
        + 4.0 * p(2 * n + 4)
        + (2.0 * nf * nf + 16.0 * nf + 8.0) * p(n + 3)
        + 4.0 * nf * p(n + 2)
        + 4.0 * t * t
        - 4.0 * t * nf
        + nf * nf;
    let tn = p(n) - 1.0;
    let left = first * tn * tn;
    let inner = p(2 * n + 2) - (nf + 1.0) * p(n + 2) + (nf + 1.0) * p(n) - 1.0;
    let right = inner * inner * (1.0 + t) * (1.0 + t);
    (left - right, left.abs() + right.abs())
}

/// `(t+1)^2 ln t - 2(t^2 - 1)`, nonnegative on `t >= 1`.
pub fn planar_log_gap(t: f64) -> (f64, f64) {
    let a = (t + 1.0).powi(2) * t.ln();
    let b = 2.0 * (t * t - 1.0);
    (a - b, a.abs() + b.abs())
}

/// `(t^4-1)(t+1) / (2(1+t^4)) - ln t`, nonnegative on `t >= 1`.
pub fn planar_w(t: f64) -> (f64, f64) {
    let t4 = t.powi(4);
    let a = (t4 - 1.0) * (t + 1.0) / (2.0 * (1.0 + t4));
    let b = t.ln();
    (a - b, a.abs() + b.abs())
}

/// Minimum of `f` on `[a, b]`: a uniform scan, then golden-section refinement
/// inside every bracket where the discrete slope changes from negative to
/// nonnegative. Returns `(argmin, min)`.
pub fn scan_minimum(f: impl Fn(f64) -> f64, a: f64, b: f64, samples: usize) -> (f64, f64) {
    let samples = samples.max(3);
    let step = (b - a) / (samples - 1) as f64;
    let ts: Vec<f64> = (0..samples).map(|i| a + step * i as f64).collect();
    let vs: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let mut best = (ts[0], vs[0]);
    for (i, (&t, &v)) in ts.iter().zip(&vs).enumerate() {
        if v < best.1 {
            best = (t, v);
        }
        if i > 0 && i + 1 < samples && vs[i - 1] > v && vs[i + 1] >= v {
            let refined = golden_section(&f, ts[i - 1], ts[i + 1]);
            if refined.1 < best.1 {
                best = refined;
            }
        }
    }
    best
}

fn golden_section(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Nonnegativity scan of a `(value, scale)` function on `[1, t_max]`.
fn positivity_report(
    claim: &str,
    params: &[usize],
    t_max: f64,
    samples: usize,
    f: impl Fn(usize, f64) -> (f64, f64),
) -> VerificationReport {
    let mut log = MarginLog::new(claim);
    for &n in params {
        let step = (t_max - 1.0) / (samples - 1) as f64;
        for i in 0..samples {
            let t = 1.0 + step * i as f64;
            let (v, scale) = f(n, t);
            log.record(format!("n={n} t={t}"), v, scale);
        }
        // Relative slack near interior minima.
        let (t, _) = scan_minimum(|t| { let (v, s) = f(n, t); v / (1.0 + s) }, 1.0, t_max, samples);
        let (v, scale) = f(n, t);
        log.record(format!("n={n} t={t} (bracketed minimum)"), v, scale);
    }
    log.finish()
}

/// Nonnegativity of `poly_h`, its mixed-problem counterpart `poly_h_tilde` and the
/// two planar auxiliary functions.
pub fn polynomial_scans(grid: &GridSpec) -> Vec<VerificationReport> {
    let t_max = grid.ratio_values.iter().copied().fold(10.0, f64::max);
    let mut dims: Vec<usize> = (3..=8).chain(grid.n_values.iter().copied().filter(|&n| n >= 3)).collect();
    dims.sort_unstable();
    dims.dedup();
    vec![
        positivity_report("poly_h_nonnegative", &dims, t_max, grid.t_samples, |n, t| {
            let terms = poly_h_terms(n, t);
            (terms.iter().sum(), terms.iter().map(|x| x.abs()).sum())
        }),
        positivity_report("poly_h_tilde_nonnegative", &dims, t_max, grid.t_samples, poly_h_tilde),
        positivity_report("planar_log_gap_nonnegative", &[2], t_max, grid.t_samples, |_, t| {
            planar_log_gap(t)
        }),
        positivity_report("planar_w_nonnegative", &[2], t_max, grid.t_samples, |_, t| planar_w(t)),
    ]
}

/// Orderings between the low branches: `sigma_{0,2} <= sigma_{1,2}` (n = 2),
/// `sigma_{2,1} <= sigma_{0,2}`, `sigma_{2,1} <= sigma_{1,2}`,
/// `sigma_{1,1} <= sigma_{0,2}`, strict increase of `l -> sigma_{l,1}` up to
/// `l = 20`, and positivity of the quadratic discriminant.
pub fn eigenvalue_order_check(grid: &GridSpec) -> Vec<VerificationReport> {
    let s = |spec: &AnnulusSpec, l, b| steklov_eigenvalue(spec, l, b).expect("valid branch");
    let mut planar = MarginLog::new("sigma02_le_sigma12_planar");
    let mut s21_s02 = MarginLog::new("sigma21_le_sigma02");
    let mut s21_s12 = MarginLog::new("sigma21_le_sigma12");
    let mut s11_s02 = MarginLog::new("sigma11_le_sigma02");
    let mut increasing = MarginLog::new("sigma_l1_strictly_increasing");
    let mut discriminant = MarginLog::new("discriminant_positive");

    for spec in grid.annuli() {
        let p = point(&spec);
        let s02 = s(&spec, 0, Branch::Upper);
        let s11 = s(&spec, 1, Branch::Lower);
        let s12 = s(&spec, 1, Branch::Upper);
        let s21 = s(&spec, 2, Branch::Lower);
        if spec.dim() == 2 {
            planar.record(&p, s12 - s02, s12);
        }
        s21_s02.record(&p, s02 - s21, s02);
        s21_s12.record(&p, s12 - s21, s12);
        s11_s02.record(&p, s02 - s11, s02);

        let mut previous = 0.0;
        for l in 1..=20 {
            let v = s(&spec, l, Branch::Lower);
            // Strictness: equal consecutive values count as a violation.
            let gap = v - previous;
            let margin = if gap > 0.0 { gap } else { gap.min(-f64::MIN_POSITIVE) - 1.0 };
            increasing.record(format!("{p} l={l}"), margin, v);
            previous = v;
        }
        for l in 0..=20 {
            if let Ok(q) = quad_coeffs(spec.dim(), spec.ratio(), l) {
                let scale = q.b_tilde * q.b_tilde;
                // Normalized so that the margin is comparable across l.
                discriminant.record(format!("{p} l={l}"), q.discriminant() / scale, 1.0);
            }
        }
    }
    vec![
        planar.finish(),
        s21_s02.finish(),
        s21_s12.finish(),
        s11_s02.finish(),
        increasing.finish(),
        discriminant.finish(),
    ]
}

/// `F = f'^2 + (n-1) f^2 / r^2` and `G = 2 f f' + (n-1) f^2 / r` for an
/// `l = 1` profile.
pub fn energy_densities(profile: &RadialProfile, r: f64) -> (f64, f64) {
    let (f, df) = profile.eval_unchecked(r);
    let m = profile.dim() as f64 - 1.0;
    (df * df + m * f * f / (r * r), 2.0 * f * df + m * f * f / r)
}

/// Closed-form `F'` and `G'` for `f = r + c r^{1-n}`:
///
/// ```text
/// F' = -2 n^2 (n-1) c^2 r^{-2n-1}
/// G' = 2 + (n-1) (c r^{-n} - 1)^2 + 2 (n-1)^2 c^2 r^{-2n}
/// ```
pub fn energy_density_slopes(profile: &RadialProfile, r: f64) -> (f64, f64) {
    let n = profile.dim() as f64;
    let c = profile.coefficient();
    let rn = r.powf(-n);
    let f_slope = -2.0 * n * n * (n - 1.0) * c * c * rn * rn / r;
    let g_slope = 2.0 + (n - 1.0) * (c * rn - 1.0).powi(2) + 2.0 * (n - 1.0).powi(2) * c * c * rn * rn;
    (f_slope, g_slope)
}

/// Checks that `F` is nonincreasing and `G` nondecreasing along `r_grid`, and
/// that the closed-form slopes carry the matching signs.
pub fn monotone_f_g(
    spec: &AnnulusSpec,
    problem: Problem,
    r_grid: &[f64],
) -> Result<VerificationReport, ClosedFormError> {
    let profile = RadialProfile::first_mode(spec, problem)?;
    let tag = match problem {
        Problem::Steklov => "steklov",
        Problem::SteklovNeumann => "steklov_neumann",
    };
    let mut log = MarginLog::new(format!("energy_density_monotone_{tag}"));
    let p = point(spec);
    let values: Vec<(f64, f64)> = r_grid.iter().map(|&r| energy_densities(&profile, r)).collect();
    for (i, pair) in values.windows(2).enumerate() {
        let (r0, r1) = (r_grid[i], r_grid[i + 1]);
        log.record(format!("{p} F r={r0}..{r1}"), pair[0].0 - pair[1].0, pair[0].0);
        log.record(format!("{p} G r={r0}..{r1}"), pair[1].1 - pair[0].1, pair[1].1);
    }
    for &r in r_grid {
        let (df, dg) = energy_density_slopes(&profile, r);
        log.record(format!("{p} F' r={r}"), -df, df);
        log.record(format!("{p} G' r={r}"), dg, dg);
    }
    Ok(log.finish())
}

/// `samples` radii from `r_inner` to `2 r_outer`, covering the radial
/// extension beyond the annulus.
pub fn radial_grid(spec: &AnnulusSpec, samples: usize) -> Vec<f64> {
    let (a, b) = (spec.r_inner(), 2.0 * spec.r_outer());
    (0..samples)
        .map(|i| a + (b - a) * i as f64 / (samples - 1) as f64)
        .collect()
}

/// Detail of the brute-force check of the second distinct nonzero eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondEigenvalueCheck {
    pub first_value: f64,
    pub first_multiplicity: u64,
    pub second_value: f64,
    pub second_multiplicity: u64,
    pub closed_form: f64,
    pub relative_error: f64,
    pub holds: bool,
}

/// Sorts the closed-form spectrum and compares its first two distinct
/// nonzero values against `sigma_{1,1}` (multiplicity `n`) and the explicit
/// `sigma_{2,1}` (multiplicity `(n+2)(n-1)/2`).
pub fn second_eigenvalue_check(spec: &AnnulusSpec) -> Result<SecondEigenvalueCheck, ClosedFormError> {
    let n = spec.dim();
    let lines = enumerate_spectrum(spec, Problem::Steklov, 3 * n + 6)?;
    // Group equal values into distinct eigenvalues.
    let mut distinct: Vec<(f64, u64)> = Vec::new();
    for line in lines.iter().filter(|l| l.value > 0.0) {
        match distinct.last_mut() {
            Some((v, m)) if (line.value - *v).abs() <= 1e-12 * v.abs() => *m += line.multiplicity,
            _ => distinct.push((line.value, line.multiplicity)),
        }
    }
    let closed = sigma_21_closed(spec);
    let sigma11 = steklov_eigenvalue(spec, 1, Branch::Lower)?;
    let (first, second) = match (distinct.first(), distinct.get(1)) {
        (Some(&a), Some(&b)) => (a, b),
        _ => ((f64::NAN, 0), (f64::NAN, 0)),
    };
    let relative_error = (second.0 - closed).abs() / closed.abs();
    let holds = (first.0 - sigma11).abs() <= 1e-12 * sigma11
        && first.1 == n as u64
        && relative_error <= 1e-10
        && second.1 == ((n + 2) * (n - 1) / 2) as u64;
    Ok(SecondEigenvalueCheck {
        first_value: first.0,
        first_multiplicity: first.1,
        second_value: second.0,
        second_multiplicity: second.1,
        closed_form: closed,
        relative_error,
        holds,
    })
}

pub fn second_eigenvalue_bruteforce(spec: &AnnulusSpec) -> bool {
    second_eigenvalue_check(spec).map(|c| c.holds).unwrap_or(false)
}

/// All grid checks: orderings, polynomial scans, energy-density monotonicity
/// for both problems and the brute-force second eigenvalue.
pub fn lemma_suite(grid: &GridSpec) -> Result<Vec<VerificationReport>, GridError> {
    grid.validate()?;
    let mut reports = eigenvalue_order_check(grid);
    reports.extend(polynomial_scans(grid));

    for problem in [Problem::Steklov, Problem::SteklovNeumann] {
        let mut merged: Option<VerificationReport> = None;
        for spec in grid.annuli() {
            let report = monotone_f_g(&spec, problem, &radial_grid(&spec, grid.r_samples))
                .expect("first-mode profiles are regular");
            merged = Some(match merged {
                None => report,
                Some(acc) => merge(acc, report),
            });
        }
        reports.extend(merged);
    }

    let mut second = MarginLog::new("second_distinct_eigenvalue");
    for spec in grid.annuli() {
        let margin = match second_eigenvalue_check(&spec) {
            Ok(c) if c.holds => 1e-10 - c.relative_error,
            Ok(c) => -c.relative_error.max(1.0),
            Err(_) => f64::NEG_INFINITY,
        };
        second.record(point(&spec), margin, 0.0);
    }
    reports.push(second.finish());
    Ok(reports)
}

fn merge(a: VerificationReport, b: VerificationReport) -> VerificationReport {
    let tolerance = a.tolerance.max(b.tolerance);
    let (worst_margin, worst_point) = if b.worst_margin < a.worst_margin {
        (b.worst_margin, b.worst_point)
    } else {
        (a.worst_margin, a.worst_point)
    };
    let mut violations = a.violations;
    violations.extend(b.violations);
    VerificationReport {
        claim: a.claim,
        grid_size: a.grid_size + b.grid_size,
        worst_margin,
        worst_point,
        tolerance,
        pass: a.pass && b.pass,
        violations,
    }
}
