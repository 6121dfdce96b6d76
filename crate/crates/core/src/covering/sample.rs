//! Covers of a rational point sample of a simple polytope, and the facet-count
//! verifier that attaches flux certificates to every set touching few facets.

use std::collections::{BTreeMap, BTreeSet};

use num::integer::Integer;
use num::{BigInt, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::witness::{Outcome, Theorem, TouchCertificate, Violation, Witness, WitnessReport};
use super::CoverError;
use crate::chow::{ample_from_offsets, avoidance_certificate};
use crate::polytope::SimplePolytope;
use crate::rational::{l1_norm, q, serde_qvec, Q};

/// Largest sample accepted by [`lattice_sample`] and [`PointCloudCover::from_json`].
pub const MAX_SAMPLE: usize = 1 << 18;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplePoint(#[serde(with = "serde_qvec")] pub Vec<Q>);

/// JSON form: `{"points": [["p/q", ...], ...], "sets": {"<name>": [point indices]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointCloudJson {
    pub points: Vec<SamplePoint>,
    pub sets: BTreeMap<String, Vec<usize>>,
}

/// Named subsets of a finite sample of a polytope; set ids follow name order.
#[derive(Debug, Clone)]
pub struct PointCloudCover {
    pub points: Vec<Vec<Q>>,
    pub sets: Vec<(String, Vec<usize>)>,
}

impl PointCloudCover {
    pub fn new(points: Vec<Vec<Q>>, sets: BTreeMap<String, Vec<usize>>) -> Result<Self, CoverError> {
        if points.is_empty() || points.len() > MAX_SAMPLE {
            return Err(CoverError::BadSample(format!("sample size {} outside 1..={MAX_SAMPLE}", points.len())));
        }
        let mut out = Vec::with_capacity(sets.len());
        for (name, mut idx) in sets {
            if let Some(bad) = idx.iter().find(|&&i| i >= points.len()) {
                return Err(CoverError::BadSample(format!("set {name:?}: index {bad} out of range")));
            }
            idx.sort_unstable();
            idx.dedup();
            out.push((name, idx));
        }
        Ok(PointCloudCover { points, sets: out })
    }

    pub fn from_json(json: PointCloudJson) -> Result<Self, CoverError> {
        Self::new(json.points.into_iter().map(|p| p.0).collect(), json.sets)
    }

    pub fn to_json(&self) -> PointCloudJson {
        PointCloudJson {
            points: self.points.iter().cloned().map(SamplePoint).collect(),
            sets: self.sets.iter().cloned().collect(),
        }
    }

    pub fn counts(&self) -> Vec<u32> {
        let mut c = vec![0u32; self.points.len()];
        for (_, idx) in &self.sets {
            for &i in idx {
                c[i] += 1;
            }
        }
        c
    }
}

/// `P` intersected with `(1/denominator) Z^n`, in lexicographic order.
pub fn lattice_sample(p: &SimplePolytope, denominator: u32) -> Result<Vec<Vec<Q>>, CoverError> {
    if denominator == 0 {
        return Err(CoverError::BadParameter("denominator must be positive".into()));
    }
    let d = BigInt::from(denominator);
    let n = p.dim();
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    let mut total: u128 = 1;
    for i in 0..n {
        let coords = p.vertices().iter().map(|v| &v.coords[i]);
        let min = coords.clone().min().expect("polytopes have vertices");
        let max = coords.max().expect("polytopes have vertices");
        let a = (min * q(denominator.into())).ceil().to_integer();
        let b = (max * q(denominator.into())).floor().to_integer();
        let span = (&b - &a + 1u32).to_u128().unwrap_or(u128::MAX);
        total = total.saturating_mul(span);
        lo.push(a);
        hi.push(b);
    }
    if total > (MAX_SAMPLE as u128) * 4 {
        return Err(CoverError::BadSample(format!("grid of {total} points is too large")));
    }
    let mut out = Vec::new();
    let mut cur = lo.clone();
    loop {
        let x: Vec<Q> = cur.iter().map(|c| Q::new(c.clone(), d.clone())).collect();
        if p.contains(&x) {
            out.push(x);
        }
        let mut j = n;
        loop {
            if j == 0 {
                return if out.len() > MAX_SAMPLE {
                    Err(CoverError::BadSample("sample too large".into()))
                } else {
                    Ok(out)
                };
            }
            j -= 1;
            if cur[j] < hi[j] {
                cur[j] += 1;
                for (c, l) in cur.iter_mut().zip(&lo).skip(j + 1) {
                    *c = l.clone();
                }
                break;
            }
        }
    }
}

/// Half the smallest positive gap between distinct values of any coordinate.
pub fn default_eps(points: &[Vec<Q>]) -> Q {
    let n = points.first().map_or(0, Vec::len);
    let mut best: Option<Q> = None;
    for i in 0..n {
        let values: BTreeSet<&Q> = points.iter().map(|p| &p[i]).collect();
        for (a, b) in values.iter().zip(values.iter().skip(1)) {
            let gap = *b - *a;
            if best.as_ref().is_none_or(|g| gap < *g) {
                best = Some(gap);
            }
        }
    }
    best.map_or_else(Q::zero, |g| g / q(2))
}

/// Facets `F` with `<u_F, x> + b_F <= eps |u_F|_1` for some sample point `x` of the set.
pub fn touched_facets(p: &SimplePolytope, points: &[Vec<Q>], idx: &[usize], eps: &Q) -> BTreeSet<usize> {
    p.facets()
        .iter()
        .enumerate()
        .filter(|(_, f)| {
            let slack = eps * l1_norm(&f.normal);
            idx.iter().any(|&i| f.eval(&points[i]) <= slack)
        })
        .map(|(id, _)| id)
        .collect()
}

/// Cover of a sample of `P` with multiplicity at most `n`: some set touches at
/// least `n + 1` facets. Every set touching at most `n` facets gets an avoidance
/// certificate for the ample class (or `null` when the flux system has no solution).
pub fn kkm_lebesgue_witness(
    p: &SimplePolytope,
    cover: &PointCloudCover,
    eps: Option<&Q>,
) -> Result<WitnessReport, CoverError> {
    let n = p.dim();
    if let Some(bad) = cover.points.iter().position(|x| x.len() != n || !p.contains(x)) {
        return Err(CoverError::BadSample(format!("sample point {bad} is not a point of the polytope")));
    }
    let eps = eps.cloned().unwrap_or_else(|| default_eps(&cover.points));
    if eps.is_negative() {
        return Err(CoverError::BadParameter("eps must be nonnegative".into()));
    }
    let t = Theorem::KkmLebesgue;
    let counts = cover.counts();
    if let Some(index) = counts.iter().position(|&c| c == 0) {
        return Ok(report(t, Outcome::HypothesisViolated { violation: Violation::UncoveredSample { index } }));
    }
    let measured = counts.iter().copied().max().unwrap_or(0);
    if measured as usize > n {
        let violation = Violation::Multiplicity { measured, bound: n as u32 };
        return Ok(report(t, Outcome::HypothesisViolated { violation }));
    }
    let h = ample_from_offsets(p);
    let mut witness = None;
    let mut certificates = Vec::new();
    for (set, (name, idx)) in cover.sets.iter().enumerate() {
        let touched = touched_facets(p, &cover.points, idx, &eps);
        if touched.len() > n {
            if witness.is_none() {
                witness = Some(Witness::FacetToucher {
                    set,
                    name: name.clone(),
                    touched: touched.iter().copied().collect(),
                });
            }
        } else {
            certificates.push(TouchCertificate {
                set,
                name: name.clone(),
                touched: touched.iter().copied().collect(),
                certificate: avoidance_certificate(p, &h, &touched).map(|d| d.to_json()),
            });
        }
    }
    let outcome = match witness {
        Some(witness) => Outcome::WitnessFound { witness },
        None => Outcome::CounterexampleCandidate {
            detail: format!("no set touches more than {n} facets"),
            instance: serde_json::json!({
                "polytope": p,
                "cover": cover.to_json(),
                "eps": crate::rational::fmt_q(&eps),
            }),
        },
    };
    Ok(WitnessReport { theorem: t, outcome, certificates })
}

fn report(theorem: Theorem, outcome: Outcome) -> WitnessReport {
    WitnessReport { theorem, outcome, certificates: Vec::new() }
}

/// Rechecks a facet-toucher witness and every attached certificate.
pub fn revalidate_polytope_report(p: &SimplePolytope, cover: &PointCloudCover, eps: &Q, rep: &WitnessReport) -> bool {
    let h = ample_from_offsets(p);
    let certs_ok = rep.certificates.iter().all(|c| {
        let Some((_, idx)) = cover.sets.get(c.set) else { return false };
        let touched = touched_facets(p, &cover.points, idx, eps);
        let Some(json) = &c.certificate else { return false };
        let Ok(d) = crate::chow::Divisor::from_json(json, p.facet_count()) else { return false };
        touched.iter().all(|&f| d.coeff(f).is_zero()) && crate::chow::linearly_equivalent(p, &d, &h)
    });
    let witness_ok = match rep.witness() {
        Some(Witness::FacetToucher { set, touched, .. }) => cover
            .sets
            .get(*set)
            .is_some_and(|(_, idx)| {
                let t = touched_facets(p, &cover.points, idx, eps);
                t.len() > p.dim() && t.iter().copied().eq(touched.iter().copied())
            }),
        _ => false,
    };
    certs_ok && witness_ok
}

/// Grid spacing `1/denominator` if every sample coordinate has a denominator dividing it.
pub fn common_denominator(points: &[Vec<Q>]) -> BigInt {
    points
        .iter()
        .flatten()
        .fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()))
}
