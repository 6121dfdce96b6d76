//! Seeded property suites. A report depends only on its configuration.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num::Zero;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::generators::{
    random_axes_cover, random_complement_family, random_kkm_family, random_low_multiplicity_cover, random_sample_cover,
    shifted_brick_cover,
};
use crate::chow::{ample_from_offsets, avoidance_certificate, linearly_equivalent};
use crate::covering::coloring::{palais_coloring, validate_coloring};
use crate::covering::model::{ModelKind, ModelParams};
use crate::covering::sample::{kkm_lebesgue_witness, revalidate_polytope_report, touched_facets};
use crate::covering::witness::{
    axes_witness, complement_witness, kkm_witness, lebesgue_witness, Outcome, Verdict, Violation, WitnessReport,
};
use crate::polytope::SimplePolytope;
use crate::rational::frac;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteKind {
    /// Random covers of multiplicity at most `m` must contain a spanning set.
    Lebesgue,
    /// Staggered bricks must be flagged for multiplicity `n + 1`.
    BrickControl,
    /// The signature coloring of a random cover must validate.
    Coloring,
    /// Families on the simplex missing facets must leave a big complement component.
    Kkm,
    /// Non-spanning families on the cube must leave a big complement component.
    Complement,
    /// Covers by `n` sets must contain a component joining the facets of its axis.
    Axes,
    /// Sample covers of a perturbed polytope must contain a set touching `n + 1` facets.
    KkmLebesgue,
    /// Every touch set of size at most `n` on a perturbed polytope gets a certificate.
    Flux,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub suite: SuiteKind,
    pub model: ModelKind,
    pub n: usize,
    /// Lattice resolution; the sample denominator for `kkm-lebesgue`; unused by `flux`.
    pub r: u32,
    /// Multiplicity targets, cycled over the instances. Empty means `[n]`.
    #[serde(default)]
    pub multiplicities: Vec<usize>,
    pub instances: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub id: usize,
    pub seed: u64,
    pub k: usize,
    pub verdict: Option<Verdict>,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub passed: usize,
    pub failed: usize,
    pub verdicts: BTreeMap<String, usize>,
    pub instances: Vec<InstanceRecord>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.passed == self.config.instances
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SuiteError {
    #[error("suite {suite:?} does not run on the {model:?} model")]
    WrongModel { suite: SuiteKind, model: ModelKind },
    #[error("multiplicity targets must be at least 1")]
    BadMultiplicity,
}

fn check_config(c: &SuiteConfig) -> Result<(), SuiteError> {
    use SuiteKind::*;
    let fits = match c.suite {
        Lebesgue | BrickControl | Complement | Axes => c.model == ModelKind::Cube,
        Kkm => c.model == ModelKind::Simplex,
        Coloring | KkmLebesgue | Flux => true,
    };
    if !fits {
        return Err(SuiteError::WrongModel { suite: c.suite, model: c.model });
    }
    if c.multiplicities.contains(&0) {
        return Err(SuiteError::BadMultiplicity);
    }
    Ok(())
}

/// Instance seeds: consecutive outputs of a ChaCha8 stream keyed by the suite seed.
pub fn instance_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.next_u64()).collect()
}

pub fn run_property_suite(config: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    check_config(config)?;
    let targets = if config.multiplicities.is_empty() { vec![config.n] } else { config.multiplicities.clone() };
    let mut instances = Vec::with_capacity(config.instances);
    for (id, seed) in instance_seeds(config.seed, config.instances).into_iter().enumerate() {
        let k = targets[id % targets.len()];
        let (verdict, result) = run_instance(config, id, k, seed);
        let (ok, detail) = match result {
            Ok(()) => (true, None),
            Err(d) => (false, Some(d)),
        };
        instances.push(InstanceRecord { id, seed, k, verdict, ok, detail });
    }
    let passed = instances.iter().filter(|r| r.ok).count();
    let mut verdicts = BTreeMap::new();
    for r in &instances {
        let key = r.verdict.map_or("error".to_string(), |v| serde_json::to_value(v).unwrap().as_str().unwrap().to_string());
        *verdicts.entry(key).or_insert(0) += 1;
    }
    Ok(SuiteReport {
        config: config.clone(),
        passed,
        failed: instances.len() - passed,
        verdicts,
        instances,
    })
}

type InstanceResult = (Option<Verdict>, Result<(), String>);

fn expect_witness(rep: WitnessReport, revalidated: impl FnOnce(&WitnessReport) -> bool) -> InstanceResult {
    let v = rep.verdict();
    if v != Verdict::WitnessFound {
        return (Some(v), Err(format!("expected a witness, got {}", serde_json::to_string(&rep.outcome).unwrap())));
    }
    if !revalidated(&rep) {
        return (Some(v), Err("witness failed revalidation".into()));
    }
    (Some(v), Ok(()))
}

fn run_instance(c: &SuiteConfig, id: usize, k: usize, seed: u64) -> InstanceResult {
    let err = |e: String| (None, Err(e));
    let n = c.n;
    match c.suite {
        SuiteKind::Lebesgue => {
            let params = ModelParams { kind: ModelKind::Cube, n, r: c.r };
            let g = match random_low_multiplicity_cover(params, k, seed) {
                Ok(g) => g,
                Err(e) => return err(e.to_string()),
            };
            if g.multiplicity as usize > k {
                return err(format!("generator produced multiplicity {} above {k}", g.multiplicity));
            }
            match lebesgue_witness(&g.cover) {
                Ok(rep) => expect_witness(rep, |r| r.revalidate(&g.cover)),
                Err(e) => err(e.to_string()),
            }
        }
        SuiteKind::BrickControl => {
            // Instance 0 uses the configured resolution, the rest cycle through
            // small multiples of 2n.
            let r = if id == 0 { c.r } else { 2 * n as u32 * (1 + (id % 4) as u32) };
            let g = match shifted_brick_cover(n, r) {
                Ok(g) => g,
                Err(e) => return err(e.to_string()),
            };
            if (0..g.cover.sets.len()).any(|s| (0..n).any(|a| g.cover.spans_pair(s, a))) {
                return err("a brick spans an axis".into());
            }
            match lebesgue_witness(&g.cover) {
                Ok(rep) => {
                    let v = rep.verdict();
                    match &rep.outcome {
                        Outcome::HypothesisViolated { violation: Violation::Multiplicity { measured, .. } }
                            if *measured as usize == n + 1 =>
                        {
                            (Some(v), Ok(()))
                        }
                        other => (Some(v), Err(format!("unexpected outcome {}", serde_json::to_string(other).unwrap()))),
                    }
                }
                Err(e) => err(e.to_string()),
            }
        }
        SuiteKind::Coloring => {
            let params = ModelParams { kind: c.model, n, r: c.r };
            let g = match random_low_multiplicity_cover(params, k, seed) {
                Ok(g) => g,
                Err(e) => return err(e.to_string()),
            };
            let col = palais_coloring(&g.cover);
            match validate_coloring(&g.cover, &col) {
                Ok(()) if col.classes.len() == g.multiplicity as usize => (None, Ok(())),
                Ok(()) => err("color count differs from multiplicity".into()),
                Err(e) => err(e.to_string()),
            }
        }
        SuiteKind::Kkm => {
            let g = match random_kkm_family(n, c.r, k, seed) {
                Ok(g) => g,
                Err(e) => return err(e.to_string()),
            };
            match kkm_witness(&g.cover, k) {
                Ok(rep) => expect_witness(rep, |r| r.revalidate(&g.cover)),
                Err(e) => err(e.to_string()),
            }
        }
        SuiteKind::Complement => {
            let g = match random_complement_family(n, c.r, k, seed) {
                Ok(g) => g,
                Err(e) => return err(e.to_string()),
            };
            match complement_witness(&g.cover, k) {
                Ok(rep) => expect_witness(rep, |r| r.revalidate(&g.cover)),
                Err(e) => err(e.to_string()),
            }
        }
        SuiteKind::Axes => {
            let g = match random_axes_cover(n, c.r, seed) {
                Ok(g) => g,
                Err(e) => return err(e.to_string()),
            };
            match axes_witness(&g.cover) {
                Ok(rep) => expect_witness(rep, |r| r.revalidate(&g.cover)),
                Err(e) => err(e.to_string()),
            }
        }
        SuiteKind::KkmLebesgue => {
            let p = match perturbed(c.model, n, seed, frac(1, 20)) {
                Ok(p) => p,
                Err(e) => return err(e),
            };
            let cover = match random_sample_cover(&p, c.r, k, seed) {
                Ok(cv) => cv,
                Err(e) => return err(e.to_string()),
            };
            let eps = frac(1, i64::from(c.r));
            let rep = match kkm_lebesgue_witness(&p, &cover, Some(&eps)) {
                Ok(rep) => rep,
                Err(e) => return err(e.to_string()),
            };
            let covered: BTreeSet<usize> = rep.certificates.iter().map(|t| t.set).collect();
            let missing = (0..cover.sets.len()).find(|&s| {
                !covered.contains(&s) && touched_facets(&p, &cover.points, &cover.sets[s].1, &eps).len() <= n
            });
            let v = rep.verdict();
            if let Some(s) = missing {
                return (Some(v), Err(format!("set {s} has no certificate entry")));
            }
            if let Some(t) = rep.certificates.iter().find(|t| t.certificate.is_none()) {
                return (Some(v), Err(format!("set {} touching {:?} has no certificate", t.set, t.touched)));
            }
            expect_witness(rep, |r| revalidate_polytope_report(&p, &cover, &eps, r))
        }
        SuiteKind::Flux => {
            let p = match perturbed(c.model, n, seed, frac(1, 10)) {
                Ok(p) => p,
                Err(e) => return err(e),
            };
            if !p.generic_normals_check() {
                return err("perturbed normals are not generic".into());
            }
            let h = ample_from_offsets(&p);
            for size in 0..=n {
                for touched in (0..p.facet_count()).combinations(size) {
                    let t: BTreeSet<usize> = touched.into_iter().collect();
                    let Some(cert) = avoidance_certificate(&p, &h, &t) else {
                        return err(format!("no certificate for {t:?}"));
                    };
                    if t.iter().any(|&f| !cert.coeff(f).is_zero()) || !linearly_equivalent(&p, &cert, &h) {
                        return err(format!("bad certificate for {t:?}"));
                    }
                }
            }
            (None, Ok(()))
        }
    }
}


fn perturbed(kind: ModelKind, n: usize, seed: u64, budget: num::BigRational) -> Result<SimplePolytope, String> {
    let base = match kind {
        ModelKind::Cube => SimplePolytope::cube(n),
        ModelKind::Simplex => SimplePolytope::simplex(n),
    };
    base.perturb_seeded(&budget, seed).map_err(|e| e.to_string())
}

/// Suites behind the acceptance gate, in report order.
pub fn acceptance_suites(seed: u64) -> Vec<SuiteConfig> {
    let cfg = |suite, model, n, r, multiplicities: Vec<usize>, instances| SuiteConfig {
        suite,
        model,
        n,
        r,
        multiplicities,
        instances,
        seed,
    };
    use ModelKind::{Cube, Simplex};
    use SuiteKind::*;
    vec![
        cfg(Flux, Cube, 2, 0, vec![], 50),
        cfg(Flux, Simplex, 2, 0, vec![], 50),
        cfg(Flux, Cube, 3, 0, vec![], 50),
        cfg(Flux, Simplex, 3, 0, vec![], 50),
        cfg(Coloring, Cube, 2, 16, vec![2, 3], 200),
        cfg(Coloring, Cube, 3, 12, vec![2, 3], 200),
        cfg(Lebesgue, Cube, 2, 16, vec![1, 2], 200),
        cfg(Lebesgue, Cube, 3, 12, vec![1, 2, 3], 200),
        cfg(BrickControl, Cube, 2, 16, vec![], 8),
        cfg(BrickControl, Cube, 3, 12, vec![], 8),
        cfg(Kkm, Simplex, 2, 12, vec![1], 100),
        cfg(Kkm, Simplex, 2, 12, vec![2], 100),
        cfg(Kkm, Simplex, 3, 12, vec![1], 100),
        cfg(Kkm, Simplex, 3, 12, vec![2], 100),
        cfg(Kkm, Simplex, 3, 12, vec![3], 100),
        cfg(Axes, Cube, 2, 16, vec![], 100),
        cfg(Axes, Cube, 3, 12, vec![], 100),
        cfg(KkmLebesgue, Cube, 3, 6, vec![3], 50),
        cfg(KkmLebesgue, Simplex, 3, 8, vec![3], 50),
    ]
}
