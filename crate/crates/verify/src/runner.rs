//! Case planning and parallel execution.

use std::path::Path;
use std::sync::Arc;

use affine_core::mutation::{with_mutation, Site};
use affine_core::{Complex64, Error, OrthogonalAlgebra};
use rayon::prelude::*;

use crate::config::{format_complex, parse_complex, ConfigError, Suite, SuiteConfig};
use crate::digest::{seed_offset, DigestRng};
use crate::identities::{find, Ctx, Identity, IDENTITIES};
use crate::report::{CaseRecord, SuiteReport};

/// One executable case: an identity, a level (for per-level identities)
/// and a trial index.
#[derive(Clone, Copy)]
pub struct CaseSpec {
    pub identity: &'static Identity,
    pub k: Option<Complex64>,
    pub trial: usize,
}

impl CaseSpec {
    /// `suite/identity[@k=<k>]:trial`.
    pub fn id(&self) -> String {
        let level = self.k.map(|k| format!("@k={}", format_complex(k))).unwrap_or_default();
        format!("{}/{}{}:{}", self.identity.suite, self.identity.name, level, self.trial)
    }

    pub fn parse(id: &str) -> Result<Self, ConfigError> {
        let bad = || ConfigError::BadCaseId(id.to_owned());
        let (suite, rest) = id.split_once('/').ok_or_else(bad)?;
        let suite: Suite = suite.parse().map_err(|_| bad())?;
        let (head, trial) = rest.rsplit_once(':').ok_or_else(bad)?;
        let trial = trial.parse().map_err(|_| bad())?;
        let (name, k) = match head.split_once("@k=") {
            Some((name, k)) => (name, Some(parse_complex(k)?)),
            None => (head, None),
        };
        let identity = find(suite, name).ok_or_else(bad)?;
        if identity.per_level != k.is_some() {
            return Err(bad());
        }
        Ok(Self { identity, k, trial })
    }
}

/// All cases selected by the suite filter, in report order.
pub fn plan(cfg: &SuiteConfig) -> Vec<CaseSpec> {
    let mut cases = Vec::new();
    for suite in Suite::ALL.into_iter().filter(|s| cfg.runs(*s)) {
        for identity in IDENTITIES.iter().filter(|i| i.suite == suite) {
            let levels: Vec<Option<Complex64>> =
                if identity.per_level { cfg.k_values.iter().copied().map(Some).collect() } else { vec![None] };
            for k in levels {
                for trial in 0..cfg.trials * identity.repeat {
                    cases.push(CaseSpec { identity, k, trial });
                }
            }
        }
    }
    cases
}

/// Loads the configured algebra. Unknown names and unreadable files are
/// configuration errors; a basis that fails the algebra checks is returned
/// as the inner error so it can be reported as a failed case.
pub fn load_algebra(name: &str) -> Result<Result<OrthogonalAlgebra, Error>, ConfigError> {
    let config_error = |e: Error| ConfigError::Algebra { name: name.to_owned(), reason: e.to_string() };
    let loaded = match name {
        "sl2" | "so3" => OrthogonalAlgebra::by_name(name),
        path if Path::new(path).is_file() => OrthogonalAlgebra::from_json_file(path),
        _ => return Err(ConfigError::Algebra { name: name.to_owned(), reason: "not a built-in name or file".into() }),
    };
    match loaded {
        Err(e @ (Error::Io(_) | Error::Parse(_) | Error::UnknownAlgebra(_))) => Err(config_error(e)),
        other => Ok(other),
    }
}

/// Applies a structure-constant mutation by corrupting the largest
/// constant `c_{01}^k`.
fn mutate_structure(alg: OrthogonalAlgebra, cfg: &SuiteConfig) -> OrthogonalAlgebra {
    match cfg.mutation {
        Some(m) if m.site == Site::StructureConstant && alg.dim() >= 2 => {
            let k = (0..alg.dim())
                .max_by(|&a, &b| {
                    alg.structure_constant(0, 1, a).norm().total_cmp(&alg.structure_constant(0, 1, b).norm())
                })
                .unwrap_or(0);
            let c = alg.structure_constant(0, 1, k);
            let delta = if c.norm() > 0.0 { c * m.delta } else { Complex64::new(m.delta, 0.0) };
            alg.with_corrupted_constant(0, 1, k, delta)
        }
        _ => alg,
    }
}

fn run_case(spec: &CaseSpec, cfg: &SuiteConfig, algebra: &Arc<OrthogonalAlgebra>) -> CaseRecord {
    let id = spec.id();
    let offset = seed_offset(&id);
    let mut rng = DigestRng::new(cfg.seed ^ offset);
    let ctx =
        Ctx { algebra: algebra.clone(), band: cfg.band, grid: cfg.grid, k: spec.k.unwrap_or_else(|| cfg.k_values[0]) };
    let outcome = with_mutation(cfg.mutation, || (spec.identity.eval)(&ctx, &mut rng)).map_err(|e| e.to_string());
    CaseRecord::new(spec.identity.suite, id, offset, rng.digest(), outcome, spec.identity.tol.resolve(cfg))
}

/// Runs every selected case (or the single case named by `cfg.case`).
pub fn run_suites(cfg: &SuiteConfig) -> Result<SuiteReport, ConfigError> {
    cfg.validate()?;
    let cases = match &cfg.case {
        Some(id) => vec![CaseSpec::parse(id)?],
        None => plan(cfg),
    };
    let algebra = match load_algebra(&cfg.algebra)? {
        Ok(alg) => Arc::new(mutate_structure(alg, cfg)),
        Err(e) => {
            let record = CaseRecord::new(
                Suite::Algebra,
                "algebra/construct:0".into(),
                0,
                String::new(),
                Err(e.to_string()),
                cfg.tol_exact,
            );
            return Ok(SuiteReport::new(cfg.clone(), vec![record]));
        }
    };
    let mut records: Vec<(usize, CaseRecord)> =
        cases.par_iter().enumerate().map(|(i, spec)| (i, run_case(spec, cfg, &algebra))).collect();
    records.sort_by_key(|(i, _)| *i);
    Ok(SuiteReport::new(cfg.clone(), records.into_iter().map(|(_, r)| r).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_ids_round_trip() {
        let cfg = SuiteConfig { trials: 1, ..SuiteConfig::default() };
        let cases = plan(&cfg);
        assert!(!cases.is_empty());
        for spec in &cases {
            let back = CaseSpec::parse(&spec.id()).unwrap();
            assert_eq!(back.id(), spec.id());
        }
        for bad in [
            "",
            "phase",
            "phase/left-brackets:0",
            "loop/derivation-rule@k=1:0",
            "loop/nope:0",
            "loop/derivation-rule:x",
        ] {
            assert!(CaseSpec::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn plan_counts() {
        let cfg = SuiteConfig { trials: 3, suites: vec![Suite::Affine], ..SuiteConfig::default() };
        let cases = plan(&cfg);
        let per = IDENTITIES.iter().filter(|i| i.suite == Suite::Affine).count();
        assert_eq!(cases.len(), per * 3 * 2);
        assert!(cases.iter().all(|c| c.identity.suite == Suite::Affine));
    }

    #[test]
    fn unknown_algebra_is_a_config_error() {
        assert!(matches!(load_algebra("su7"), Err(ConfigError::Algebra { .. })));
    }
}
