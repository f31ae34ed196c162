//! Acceptance gate: evaluates every acceptance criterion at its stated
//! tolerance, prints one line per criterion and exits non-zero if any fails.

use std::process::ExitCode;
use std::sync::Arc;

use affine_core::affine::{grad_kappa, invariance_residual};
use affine_core::mutation::{Mutation, Site};
use affine_core::phase::checks::check_scalar_momentum_identity;
use affine_core::phase::{GroupLoop, PhasePoint};
use affine_core::sampling::{random_loop, seeded_rng, unit_disc};
use affine_core::{AffineCovector, AffineVector, Complex64, Error, OrthogonalAlgebra};
use affine_verify::{run_suites, SuiteConfig, SuiteReport};

const ALGEBRAS: [&str; 2] = ["sl2", "so3"];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }

    fn and(self, other: Outcome) -> Outcome {
        Outcome::new(self.pass && other.pass, format!("{}; {}", self.detail, other.detail))
    }
}

fn identity_of(case: &str) -> &str {
    let name = case.split_once('/').map_or(case, |(_, rest)| rest);
    name.split(['@', ':']).next().unwrap_or(name)
}

/// Every case of `identity` in every report has a residual below `tol`, and
/// each report holds exactly `count` such cases.
fn residuals_below(reports: &[(&str, SuiteReport)], identity: &str, tol: f64, count: usize) -> Outcome {
    let mut worst = 0.0f64;
    let mut ok = true;
    for (alg, report) in reports {
        let cases: Vec<_> = report.cases.iter().filter(|c| identity_of(&c.case) == identity).collect();
        if cases.len() != count {
            return Outcome::new(false, format!("{alg}: {identity} has {} cases, expected {count}", cases.len()));
        }
        for c in cases {
            match c.residual {
                Some(r) if r < tol => worst = worst.max(r),
                Some(r) => {
                    ok = false;
                    worst = worst.max(r);
                }
                None => {
                    return Outcome::new(false, format!("{}: {}", c.case, c.error.clone().unwrap_or_default()));
                }
            }
        }
    }
    Outcome::new(ok, format!("{identity}: {}x{count} cases, max {worst:.3e} < {tol:.0e}", reports.len()))
}

fn levels_cover(reports: &[(&str, SuiteReport)], identity: &str, levels: &[&str]) -> Outcome {
    let ok = reports.iter().all(|(_, r)| {
        levels
            .iter()
            .all(|k| r.cases.iter().any(|c| identity_of(&c.case) == identity && c.case.contains(&format!("@k={k}:"))))
    });
    Outcome::new(ok, format!("{identity} at k in {levels:?}"))
}

fn witness_nonvacuous() -> Outcome {
    let alg = Arc::new(OrthogonalAlgebra::sl2());
    let mut rng = seeded_rng(0xA11FEE);
    let x0 = random_loop(&alg, 4, &mut rng);
    let linear = |_: &AffineCovector| AffineVector::new(Complex64::new(0.3, 0.0), x0.clone(), Complex64::new(0.0, 0.0));
    let mut witness = 0.0f64;
    for _ in 0..100 {
        let u = AffineVector::new(unit_disc(&mut rng), random_loop(&alg, 4, &mut rng), unit_disc(&mut rng));
        let mu = AffineCovector::new(unit_disc(&mut rng), random_loop(&alg, 4, &mut rng), unit_disc(&mut rng));
        witness = witness.max(invariance_residual(linear, &u, &mu).unwrap_or(0.0));
        // kappa stays invariant on the same samples
        if invariance_residual(grad_kappa, &u, &mu).map_or(true, |r| r >= 1e-10) {
            return Outcome::new(false, "kappa invariance failed on witness samples");
        }
    }
    Outcome::new(witness > 1e-3, format!("linear functional residual max {witness:.3e} > 1e-3"))
}

fn division_by_center() -> Outcome {
    let alg = Arc::new(OrthogonalAlgebra::sl2());
    let mut rng = seeded_rng(3);
    let g = GroupLoop::exp_loop(&random_loop(&alg, 4, &mut rng), 128).expect("group loop");
    let p = PhasePoint::new(g, random_loop(&alg, 4, &mut rng), Complex64::new(0.0, 0.0)).expect("phase point");
    let err = check_scalar_momentum_identity(&p);
    Outcome::new(matches!(err, Err(Error::DivisionByCenter)), "k = 0 raises DivisionByCenter")
}

fn mutations() -> Outcome {
    let mut missed = Vec::new();
    for site in Site::ALL {
        for alg in ALGEBRAS {
            let cfg = SuiteConfig {
                algebra: alg.into(),
                trials: 2,
                mutation: Some(Mutation::new(*site)),
                ..SuiteConfig::default()
            };
            match run_suites(&cfg) {
                Ok(r) if r.summary.failed > 0 => {}
                _ => missed.push(format!("{site}@{alg}")),
            }
        }
    }
    let detail = if missed.is_empty() {
        format!("all {} sites flip a suite in both algebras", Site::ALL.len())
    } else {
        format!("not detected: {}", missed.join(", "))
    };
    Outcome::new(missed.is_empty(), detail)
}

fn main() -> ExitCode {
    let reports: Vec<(&str, SuiteReport)> = ALGEBRAS
        .iter()
        .map(|alg| {
            let cfg = SuiteConfig { algebra: (*alg).into(), ..SuiteConfig::default() };
            (*alg, run_suites(&cfg).expect("default configuration is valid"))
        })
        .collect();
    let r = reports.as_slice();
    let k_levels = ["1", "1+0.5i"];
    let phase = 50 * k_levels.len();

    let criteria: Vec<(&str, Outcome)> = vec![
        ("1 ad-invariance of the base form", residuals_below(r, "ad-invariance", 1e-12, 200)),
        ("2 Jacobi identity of the affine bracket", residuals_below(r, "bar-jacobi", 1e-10, 100)),
        ("3 coadjoint duality", residuals_below(r, "coadjoint-duality", 1e-10, 100)),
        (
            "4 invariance of kappa and pi, non-vacuity",
            residuals_below(r, "kappa-invariance", 1e-10, 100)
                .and(residuals_below(r, "center-invariance", f64::MIN_POSITIVE, 100))
                .and(witness_nonvacuous()),
        ),
        ("5 gradient of kappa against finite differences", residuals_below(r, "kappa-gradient", 1e-6, 100)),
        (
            "6 left, right and mixed momentum brackets",
            residuals_below(r, "left-brackets", 1e-8, phase)
                .and(residuals_below(r, "right-brackets", 1e-8, phase))
                .and(residuals_below(r, "mixed-brackets", 1e-8, phase))
                .and(levels_cover(r, "left-brackets", &k_levels)),
        ),
        (
            "7 momentum-map equations for the three actions",
            residuals_below(r, "momentum-left", 1e-6, phase)
                .and(residuals_below(r, "momentum-right", 1e-6, phase))
                .and(residuals_below(r, "momentum-scalar", 1e-6, phase)),
        ),
        (
            "8 scalar momentum as a difference of squares",
            residuals_below(r, "scalar-momentum-identity", 1e-8, phase).and(division_by_center()),
        ),
        (
            "9 kappa of the combined map and its left invariance",
            residuals_below(r, "casimir-identity", 1e-8, phase).and(residuals_below(
                r,
                "casimir-left-invariance",
                1e-8,
                phase,
            )),
        ),
        (
            "10 cocycle relation",
            residuals_below(r, "cocycle-relation", 1e-8, phase)
                .and(residuals_below(r, "cocycle-derivation-compatibility", 1e-8, phase))
                .and(residuals_below(r, "cocycle-center-independence", 1e-12, phase)),
        ),
        ("11 independence formula", residuals_below(r, "independence-formula", 1e-6, phase)),
        ("12 mutation check", mutations()),
    ];

    let overall = reports.iter().all(|(_, rep)| rep.all_passed() && rep.is_consistent());
    let mut failed = 0;
    for (name, outcome) in &criteria {
        let tag = if outcome.pass { "pass" } else { "FAIL" };
        println!("{tag}  criterion {name}: {}", outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    let total: usize = reports.iter().map(|(_, rep)| rep.summary.total).sum();
    println!("{}  full default suite on {}: {total} cases", if overall { "pass" } else { "FAIL" }, ALGEBRAS.join(", "));
    if failed == 0 && overall {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
