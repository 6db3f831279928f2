//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fail.

use std::process::ExitCode;

use steklov::analysis::second_eigenvalue_check;
use steklov::closed_form::{multiplicity, sigma_21_closed, sn_eigenvalue, steklov_eigenvalue, AnnulusSpec, Branch};
use steklov::experiments::{
    reproduce_table, run_sweep, verify_integral_lemmas, verify_lemmas, Quantity, SweepPath, SweepSpec, TableArtifact,
    ELLIPSE,
};
use steklov::fem::{convergence_study, solve};
use steklov::geometry::{DomainSpec, OuterShape};
use steklov::Problem;

const H: f64 = 0.125;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn closed_form_values() -> Outcome {
    let spec = AnnulusSpec::new(2, 1.0, 5.0).unwrap();
    let sigma = steklov_eigenvalue(&spec, 1, Branch::Lower).unwrap();
    let mu = sn_eigenvalue(&spec, 1);
    let pass = (sigma - 0.1783).abs() < 5e-5 && (mu - 24.0 / 130.0).abs() < 1e-14 && (mu - 0.18467).abs() < 3e-4;
    outcome(pass, format!("sigma11 = {sigma:.6}, mu1 = {mu:.6}"))
}

fn second_eigenvalue_bruteforce() -> Outcome {
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for n in 2..=5 {
        for big_l in [1.1, 1.5, 2.0, 5.0, 10.0] {
            let spec = AnnulusSpec::new(n, 1.0, big_l).unwrap();
            let check = second_eigenvalue_check(&spec).unwrap();
            let direct = steklov_eigenvalue(&spec, 2, Branch::Lower).unwrap();
            let closed = sigma_21_closed(&spec);
            let rel = ((check.second_value - closed) / closed).abs();
            worst = worst.max(rel);
            let ok = rel <= 1e-10
                && ((direct - closed) / closed).abs() <= 1e-10
                && check.second_multiplicity == ((n + 2) * (n - 1) / 2) as u64
                && check.second_multiplicity == multiplicity(n, 2);
            if !ok {
                failures.push(format!("(n={n}, L={big_l})"));
            }
        }
    }
    outcome(failures.is_empty(), format!("20 cases, worst relative error {worst:.2e}, failures {failures:?}"))
}

fn lemma_suite() -> Outcome {
    let bundle = verify_lemmas("").unwrap();
    let worst = bundle.reports.iter().map(|r| r.worst_margin).fold(f64::INFINITY, f64::min);
    let violations: usize = bundle.reports.iter().map(|r| r.violations.len()).sum();
    outcome(
        bundle.all_pass && violations == 0 && worst >= -1e-9,
        format!("{} claims, {violations} violations, worst margin {worst:.3e}", bundle.reports.len()),
    )
}

fn fem_convergence() -> Outcome {
    let spec = DomainSpec::annulus(1.0, 5.0).unwrap();
    let mut pass = true;
    let mut detail = Vec::new();
    for problem in [Problem::Steklov, Problem::SteklovNeumann] {
        let study = convergence_study(&spec, problem, &[0.5, 0.25, 0.125], 3).unwrap();
        let error = *study.relative_errors.last().unwrap().get(1).unwrap();
        let order = study.observed_order[1].unwrap_or(f64::NAN);
        pass &= error <= 0.01 && order >= 1.8;
        detail.push(format!("{problem:?}: error {:.3}% order {order:.2}", 100.0 * error));
    }
    outcome(pass, detail.join("; "))
}

fn table_reproduction(tables: &[TableArtifact]) -> Outcome {
    let mut worst = (0.0, String::new());
    let mut over = Vec::new();
    let mut count = 0;
    for t in tables {
        for (row, e) in t.entries() {
            count += 1;
            let d = e.relative_deviation.abs();
            let cell = format!("table {} {} {}", t.id, row.label, e.quantity.name());
            if d > 0.02 {
                over.push(format!("{cell} {:.2}% (published {}, computed {:.6})", 100.0 * d, e.published, e.computed));
            }
            if d > worst.0 {
                worst = (d, cell);
            }
        }
    }
    outcome(
        over.is_empty(),
        format!("{count} entries, worst {:.2}% at {}, over 2%: {over:?}", 100.0 * worst.0, worst.1),
    )
}

fn counterexamples(table: &TableArtifact) -> Outcome {
    let get = |label: &str, q: Quantity| table.computed(label, q).unwrap();
    let mut pass = true;
    let mut detail = Vec::new();
    for q in [Quantity::Sigma2, Quantity::Mu2] {
        let base = get("Omega1", q);
        for label in ["Omega2", "Omega3"] {
            let margin = get(label, q) / base - 1.0;
            pass &= margin > 0.05;
            detail.push(format!("{} {label} {:+.1}%", q.name(), 100.0 * margin));
        }
    }
    outcome(pass, detail.join(", "))
}

fn symmetric_square() -> Outcome {
    let side = (25.0 * std::f64::consts::PI).sqrt();
    let square = DomainSpec::new(OuterShape::Rectangle { width: side, height: side }, [0.0, 0.0], 1.0).unwrap();
    let annulus = AnnulusSpec::new(2, 1.0, 5.0).unwrap();
    let sigma = steklov_eigenvalue(&annulus, 1, Branch::Lower).unwrap();
    let mu = sn_eigenvalue(&annulus, 1);
    let s = solve(&square, Problem::Steklov, H, 3).unwrap();
    let m = solve(&square, Problem::SteklovNeumann, H, 3).unwrap();
    let ratios = [s.value(1) / sigma, s.value(2) / sigma, m.value(1) / mu, m.value(2) / mu];
    let pass = ratios.iter().all(|&r| r <= 1.02);
    outcome(
        pass,
        format!(
            "square/annulus: sigma1 {:.4}, sigma2 {:.4}, mu1 {:.4}, mu2 {:.4}",
            ratios[0], ratios[1], ratios[2], ratios[3]
        ),
    )
}

fn conjecture_sweeps() -> Outcome {
    let sweeps = [
        SweepSpec::disk(H),
        SweepSpec::ellipse(SweepPath::AxisX, H),
        SweepSpec::ellipse(SweepPath::AxisY, H),
        SweepSpec::ellipse(SweepPath::Diagonal, H),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for sweep in &sweeps {
        let result = run_sweep(sweep).unwrap();
        let double = result.mu1_double_everywhere.unwrap_or(true);
        pass &= result.matches_conjectures && double;
        let trends: Vec<String> =
            result.verdicts.iter().map(|v| format!("{}={:?}", v.quantity.name(), v.observed)).collect();
        let shape = if matches!(sweep.outer, OuterShape::Disk { .. }) { "disk" } else { "ellipse" };
        detail.push(format!("{shape} {:?} [{}]", sweep.path, trends.join(" ")));
    }
    outcome(pass, detail.join("; "))
}

fn integral_inequalities() -> Outcome {
    let side = (25.0 * std::f64::consts::PI).sqrt();
    let domains = [
        ("square", DomainSpec::new(OuterShape::Rectangle { width: side, height: side }, [0.0, 0.0], 1.0).unwrap()),
        ("ellipse", DomainSpec::new(ELLIPSE, [0.0, 0.0], 1.0).unwrap()),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, domain) in &domains {
        let report = verify_integral_lemmas(domain, H).unwrap();
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.claim.as_str()).collect();
        pass &= report.all_pass;
        detail.push(format!("{name}: {} checks, failed {failed:?}", report.checks.len()));
    }
    outcome(pass, detail.join("; "))
}

fn main() -> ExitCode {
    let tables: Vec<TableArtifact> = (1..=4).map(|id| reproduce_table(id, H).unwrap()).collect();
    let results = [
        ("closed-form annulus values", closed_form_values()),
        ("second distinct eigenvalue brute force", second_eigenvalue_bruteforce()),
        ("lemma suite on default grid", lemma_suite()),
        ("FEM convergence on annulus (1, 5)", fem_convergence()),
        ("table reproduction within 2%", table_reproduction(&tables)),
        ("counterexample margins", counterexamples(&tables[0])),
        ("symmetric square vs annulus", symmetric_square()),
        ("conjecture sweeps", conjecture_sweeps()),
        ("integral inequalities", integral_inequalities()),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        println!("criterion {}: {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
