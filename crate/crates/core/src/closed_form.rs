//! Exact Steklov and mixed Steklov-Neumann spectra of concentric spherical
//! annuli in any dimension `n >= 2`.
//!
//! Separation of variables reduces both problems to the radial ODE
//!
//! ```text
//! -f'' - (n-1)/r f' + l(l+n-2)/r^2 f = 0
//! ```
//!
//! with `f = r^l + c r^{-(l+n-2)}` (or `a ln r + b` when `l = 0, n = 2`). The
//! Steklov problem yields two eigenvalues per angular index `l`, the roots of
//! a quadratic; the mixed problem (Neumann on the inner sphere) yields one.
//! Each eigenvalue carries the multiplicity `dim H_l` of the degree-`l`
//! spherical harmonics.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosedFormError {
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("radii must satisfy 0 < inner < outer, got inner={inner}, outer={outer}")]
    Radii { inner: f64, outer: f64 },
    #[error("l = 0 in two dimensions has a logarithmic radial solution and no quadratic")]
    LogarithmicMode,
    #[error("branch {0:?} does not apply to the Steklov problem")]
    InvalidBranch(Branch),
    #[error("radial profile is singular: l + n - 2 - sigma * r_inner vanishes")]
    SingularProfile,
    #[error("radius {r} lies inside the inner sphere of radius {r_inner}")]
    OutsideDomain { r: f64, r_inner: f64 },
    #[error("mixed eigenvalue branch not increasing at l = {0}")]
    NonMonotoneBranch(usize),
}

pub type Result<T> = std::result::Result<T, ClosedFormError>;

/// Concentric annulus `B_{r_outer} \ B_{r_inner}` in `R^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusSpec {
    n: usize,
    r_inner: f64,
    r_outer: f64,
}

impl AnnulusSpec {
    pub fn new(n: usize, r_inner: f64, r_outer: f64) -> Result<Self> {
        if n < 2 {
            return Err(ClosedFormError::Dimension(n));
        }
        if !(r_inner > 0.0 && r_outer > r_inner && r_outer.is_finite()) {
            return Err(ClosedFormError::Radii {
                inner: r_inner,
                outer: r_outer,
            });
        }
        Ok(Self {
            n,
            r_inner,
            r_outer,
        })
    }

    /// Annulus with unit inner radius and outer radius `ratio`.
    pub fn normalized(n: usize, ratio: f64) -> Result<Self> {
        Self::new(n, 1.0, ratio)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn r_inner(&self) -> f64 {
        self.r_inner
    }

    pub fn r_outer(&self) -> f64 {
        self.r_outer
    }

    /// `L = r_outer / r_inner`.
    pub fn ratio(&self) -> f64 {
        self.r_outer / self.r_inner
    }
}

/// Coefficients of `a sigma^2 + b sigma + c = 0` for angular index `l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadCoeffs {
    pub a_tilde: f64,
    pub b_tilde: f64,
    pub c_tilde: f64,
}

impl QuadCoeffs {
    pub fn discriminant(&self) -> f64 {
        self.b_tilde * self.b_tilde - 4.0 * self.a_tilde * self.c_tilde
    }
}

/// Which root of the per-mode problem a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Smaller Steklov root `sigma_{l,1}`.
    Lower,
    /// Larger Steklov root `sigma_{l,2}`.
    Upper,
    /// The single mixed Steklov-Neumann eigenvalue `mu_l`.
    Single,
}

impl TryFrom<u8> for Branch {
    type Error = ClosedFormError;

    fn try_from(value: u8) -> Result<Self> {
        match value {
            1 => Ok(Branch::Lower),
            2 => Ok(Branch::Upper),
            _ => Err(ClosedFormError::InvalidBranch(Branch::Single)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Problem {
    Steklov,
    SteklovNeumann,
}

impl std::str::FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "steklov" | "s" => Ok(Problem::Steklov),
            "sn" | "steklov-neumann" | "steklov_neumann" | "mixed" => Ok(Problem::SteklovNeumann),
            other => Err(format!("unknown problem '{other}' (expected steklov or sn)")),
        }
    }
}

/// One eigenvalue branch together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralLine {
    pub l: usize,
    pub branch: Branch,
    pub value: f64,
    pub multiplicity: u64,
}

/// Quadratic coefficients exactly as they arise from the 2x2 boundary system,
/// for the normalized annulus `1 < r < ratio`.
pub fn quad_coeffs(n: usize, ratio: f64, l: usize) -> Result<QuadCoeffs> {
    check_ratio(n, ratio)?;
    if l == 0 && n == 2 {
        return Err(ClosedFormError::LogarithmicMode);
    }
    let lf = l as f64;
    let m = (l + n - 2) as f64;
    let p = ratio.powi((2 * l + n - 2) as i32);
    Ok(QuadCoeffs {
        a_tilde: ratio * (p - 1.0),
        b_tilde: -(lf * p + ratio * p * m + lf * ratio + m),
        c_tilde: lf * m * (p - 1.0),
    })
}

/// The same quadratic divided through by `ratio^{2l+n-2}`, which keeps all
/// three coefficients bounded as `l` grows.
fn scaled_quad(n: usize, ratio: f64, l: usize) -> QuadCoeffs {
    let lf = l as f64;
    let m = (l + n - 2) as f64;
    let q = ratio.powi(-((2 * l + n - 2) as i32));
    QuadCoeffs {
        a_tilde: ratio * (1.0 - q),
        b_tilde: -(lf + ratio * m + (lf * ratio + m) * q),
        c_tilde: lf * m * (1.0 - q),
    }
}

fn check_ratio(n: usize, ratio: f64) -> Result<()> {
    if n < 2 {
        return Err(ClosedFormError::Dimension(n));
    }
    if !(ratio > 1.0 && ratio.is_finite()) {
        return Err(ClosedFormError::Radii {
            inner: 1.0,
            outer: ratio,
        });
    }
    Ok(())
}

/// Both roots of `a x^2 + b x + c` with `a > 0`, `b < 0`, `c >= 0`, ordered.
/// The larger root is formed without cancellation and the smaller one from
/// the product of the roots.
fn stable_roots(q: QuadCoeffs) -> (f64, f64) {
    let disc = q.discriminant().max(0.0);
    let big = 0.5 * (-q.b_tilde + disc.sqrt());
    (q.c_tilde / big, big / q.a_tilde)
}

/// `sigma_{l,branch}` for the normalized annulus `(1, ratio)`.
fn normalized_steklov(n: usize, ratio: f64, l: usize, branch: Branch) -> f64 {
    match (l, branch) {
        (0, Branch::Lower) => 0.0,
        (0, _) if n == 2 => (1.0 + ratio) / (ratio * ratio.ln()),
        (0, _) => {
            let nf = n as f64;
            let t = ratio.powi(n as i32 - 1);
            (nf - 2.0) * (1.0 + t) / (t - ratio)
        }
        (_, Branch::Lower) => stable_roots(scaled_quad(n, ratio, l)).0,
        (_, _) => stable_roots(scaled_quad(n, ratio, l)).1,
    }
}

/// Steklov eigenvalue `sigma_{l,branch}` of the annulus. Eigenvalues scale as
/// `1 / r_inner` under dilation, so arbitrary radii are reduced to the unit
/// inner radius.
pub fn steklov_eigenvalue(spec: &AnnulusSpec, l: usize, branch: Branch) -> Result<f64> {
    if branch == Branch::Single {
        return Err(ClosedFormError::InvalidBranch(branch));
    }
    Ok(normalized_steklov(spec.n, spec.ratio(), l, branch) / spec.r_inner)
}

/// Explicit expression for `sigma_{2,1}`, the second distinct nonzero
/// Steklov eigenvalue. The square root difference in the numerator is
/// rationalized, `P - sqrt(P^2 - Q) = Q / (P + sqrt(P^2 - Q))`, which is the
/// same quantity without the catastrophic cancellation.
pub fn sigma_21_closed(spec: &AnnulusSpec) -> f64 {
    let n = spec.n as f64;
    let big_l = spec.ratio();
    let t = big_l.powi(spec.n as i32 + 2);
    let p = t * (2.0 + big_l * n) + (n + 2.0 * big_l);
    let q = 8.0 * big_l * n * (t - 1.0) * (t - 1.0);
    let root = (p * p - q).max(0.0).sqrt();
    let value = q / ((p + root) * 2.0 * big_l * (t - 1.0));
    value / spec.r_inner
}

/// Mixed Steklov-Neumann eigenvalue `mu_l`: Neumann on `|x| = r_inner`,
/// Steklov on `|x| = r_outer`.
pub fn sn_eigenvalue(spec: &AnnulusSpec, l: usize) -> f64 {
    if l == 0 {
        return 0.0;
    }
    let lf = l as f64;
    let m = (l + spec.n - 2) as f64;
    let q = spec.ratio().powi(-((2 * l + spec.n - 2) as i32));
    lf * m * (1.0 - q) / (spec.r_outer * (m + lf * q))
}

/// `dim H_l`: the number of linearly independent degree-`l` homogeneous
/// harmonic polynomials in `n` variables.
pub fn multiplicity(n: usize, l: usize) -> u64 {
    if l == 0 {
        return 1;
    }
    // dim P_l - dim P_{l-2}, with dim P_k = C(k+n-1, n-1).
    let all = binomial(l + n - 1, n - 1);
    let lower = if l >= 2 { binomial(l + n - 3, n - 1) } else { 0 };
    (all - lower) as u64
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn branches(problem: Problem) -> &'static [Branch] {
    match problem {
        Problem::Steklov => &[Branch::Lower, Branch::Upper],
        Problem::SteklovNeumann => &[Branch::Single],
    }
}

fn line_value(spec: &AnnulusSpec, l: usize, branch: Branch) -> f64 {
    match branch {
        Branch::Single => sn_eigenvalue(spec, l),
        b => normalized_steklov(spec.n, spec.ratio(), l, b) / spec.r_inner,
    }
}

/// Smallest spectral lines whose multiplicities add up to at least `k`,
/// sorted ascending.
///
/// Angular indices are enumerated up to `l_max`, starting at `2k` and
/// doubling until the lowest branch at `l_max` exceeds the current k-th
/// eigenvalue. The lower Steklov branch is increasing in `l`; for the mixed
/// problem this is checked on every call.
pub fn enumerate_spectrum(spec: &AnnulusSpec, problem: Problem, k: usize) -> Result<Vec<SpectralLine>> {
    let k = k.max(1);
    let mut l_max = 2 * k;
    loop {
        let mut lines: Vec<SpectralLine> = (0..=l_max)
            .flat_map(|l| {
                branches(problem).iter().map(move |&branch| SpectralLine {
                    l,
                    branch,
                    value: line_value(spec, l, branch),
                    multiplicity: multiplicity(spec.n, l),
                })
            })
            .collect();

        if problem == Problem::SteklovNeumann {
            for pair in lines.windows(2) {
                if pair[1].value <= pair[0].value {
                    return Err(ClosedFormError::NonMonotoneBranch(pair[0].l));
                }
            }
        }

        lines.sort_by(|a, b| {
            a.value
                .total_cmp(&b.value)
                .then(a.l.cmp(&b.l))
                .then(a.branch.cmp(&b.branch))
        });
        let mut total = 0u64;
        let cut = lines
            .iter()
            .position(|line| {
                total += line.multiplicity;
                total >= k as u64
            })
            .expect("l_max >= 2k always yields at least k eigenvalues");
        lines.truncate(cut + 1);

        let threshold = lines[cut].value;
        let lowest = match problem {
            Problem::Steklov => line_value(spec, l_max, Branch::Lower),
            Problem::SteklovNeumann => line_value(spec, l_max, Branch::Single),
        };
        if lowest > threshold {
            return Ok(lines);
        }
        l_max *= 2;
    }
}

/// Radial factor of an eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ProfileKind {
    Steklov { l: usize, branch: Branch },
    SteklovNeumann { l: usize },
}

/// Radial eigenfunction factor, normalized so the `r^l` coefficient is one:
///
/// * Steklov: `f(r) = r^l + c r^{-(l+n-2)}` with
///   `c = (l + sigma r0) r0^{2l+n-2} / (l + n - 2 - sigma r0)`, or
///   `f(r) = 1 - sigma r0 ln(r / r0)` for `l = 0, n = 2`.
/// * Mixed: `f(r) = r^l + l R1^{2l+n-2} / ((l+n-2) r^{l+n-2})`.
///
/// The function extends radially to `[r_inner, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    kind: ProfileKind,
    n: usize,
    r_inner: f64,
    eigenvalue: f64,
    coefficient: f64,
    logarithmic: bool,
}

impl RadialProfile {
    pub fn steklov(spec: &AnnulusSpec, l: usize, branch: Branch) -> Result<Self> {
        let sigma = steklov_eigenvalue(spec, l, branch)?;
        Self::steklov_with(spec, l, branch, sigma)
    }

    fn steklov_with(spec: &AnnulusSpec, l: usize, branch: Branch, sigma: f64) -> Result<Self> {
        let r0 = spec.r_inner;
        let (coefficient, logarithmic) = if l == 0 && spec.n == 2 {
            (sigma * r0, true)
        } else {
            let denom = (l + spec.n - 2) as f64 - sigma * r0;
            if denom.abs() <= 1e-14 * (1.0 + sigma * r0) {
                return Err(ClosedFormError::SingularProfile);
            }
            let scale = r0.powi((2 * l + spec.n - 2) as i32);
            ((l as f64 + sigma * r0) * scale / denom, false)
        };
        Ok(Self {
            kind: ProfileKind::Steklov { l, branch },
            n: spec.n,
            r_inner: r0,
            eigenvalue: sigma,
            coefficient,
            logarithmic,
        })
    }

    pub fn steklov_neumann(spec: &AnnulusSpec, l: usize) -> Self {
        let coefficient = if l == 0 {
            0.0
        } else {
            l as f64 * spec.r_inner.powi((2 * l + spec.n - 2) as i32) / (l + spec.n - 2) as f64
        };
        Self {
            kind: ProfileKind::SteklovNeumann { l },
            n: spec.n,
            r_inner: spec.r_inner,
            eigenvalue: sn_eigenvalue(spec, l),
            coefficient,
            logarithmic: false,
        }
    }

    /// `f_{1,1}` or `f~_1`, the profiles entering the first nonzero eigenvalue.
    pub fn first_mode(spec: &AnnulusSpec, problem: Problem) -> Result<Self> {
        match problem {
            Problem::Steklov => Self::steklov(spec, 1, Branch::Lower),
            Problem::SteklovNeumann => Ok(Self::steklov_neumann(spec, 1)),
        }
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn eigenvalue(&self) -> f64 {
        self.eigenvalue
    }

    /// Coefficient `c` of the decaying solution `r^{-(l+n-2)}`.
    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn r_inner(&self) -> f64 {
        self.r_inner
    }

    fn l(&self) -> usize {
        match self.kind {
            ProfileKind::Steklov { l, .. } | ProfileKind::SteklovNeumann { l } => l,
        }
    }

    /// Value and first derivative at `r`.
    pub fn eval(&self, r: f64) -> Result<(f64, f64)> {
        if r < self.r_inner * (1.0 - 1e-12) {
            return Err(ClosedFormError::OutsideDomain {
                r,
                r_inner: self.r_inner,
            });
        }
        Ok(self.eval_unchecked(r))
    }

    /// Same as [`eval`](Self::eval) without the domain check, for quadrature
    /// points that may sit marginally inside a polygonal hole.
    pub fn eval_unchecked(&self, r: f64) -> (f64, f64) {
        if self.logarithmic {
            return (1.0 - self.coefficient * (r / self.r_inner).ln(), -self.coefficient / r);
        }
        let l = self.l() as i32;
        let m = (self.l() + self.n - 2) as i32;
        let value = r.powi(l) + self.coefficient * r.powi(-m);
        let slope = if l == 0 { 0.0 } else { l as f64 * r.powi(l - 1) }
            - m as f64 * self.coefficient * r.powi(-m - 1);
        (value, slope)
    }

    /// Second radial derivative.
    pub fn second_derivative(&self, r: f64) -> f64 {
        if self.logarithmic {
            return self.coefficient / (r * r);
        }
        let l = self.l() as i32;
        let m = (self.l() + self.n - 2) as i32;
        let lead = if l < 2 {
            0.0
        } else {
            (l * (l - 1)) as f64 * r.powi(l - 2)
        };
        lead + (m * (m + 1)) as f64 * self.coefficient * r.powi(-m - 2)
    }
}

/// Free-standing form of [`RadialProfile::eval`].
pub fn radial_eval(profile: &RadialProfile, r: f64) -> Result<(f64, f64)> {
    profile.eval(r)
}
