//! Divisor classes and intersection numbers on the toric variety of a simple polytope.
//!
//! A divisor is a rational combination `sum_F d_F * D_F` of the toric divisors,
//! one per facet. `div(v) = sum_F <u_F, v> * D_F` is principal for every `v`, so
//! two divisors are linearly equivalent exactly when their difference solves the
//! overdetermined system `d_F = <u_F, v>`.
//!
//! Top intersection numbers come from volumes: for nef `D`, `D^n = n! vol(P_D)`
//! with `P_D = {x : <u_F, x> + d_F >= 0}`, and polarization gives mixed products.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::polytope::{Facet, HalfspaceRegion, SimplePolytope};
use crate::rational::{dot_int, fmt_q, parse_q, q, Q};
use crate::volume::region_volume;

/// Largest nef-lift multiple tried by [`intersection_number`].
pub const MAX_NEF_MULTIPLE: u32 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChowError {
    #[error("divisor has {got} coefficients, polytope has {expected} facets")]
    WrongFacetCount { expected: usize, got: usize },
    #[error("unknown facet id {0:?}")]
    UnknownFacet(String),
    #[error("invalid rational {value:?} for facet {facet}")]
    BadCoefficient { facet: String, value: String },
    #[error("intersection needs exactly {expected} divisors, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("no multiple up to {MAX_NEF_MULTIPLE} of the ample class makes every divisor nef")]
    NefLiftFailed,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Divisor {
    coeffs: Vec<Q>,
}

/// JSON form: `{"coeffs": {"<facet_id>": "p/q"}}`; absent facets have coefficient 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorJson {
    pub coeffs: BTreeMap<String, String>,
}

impl Divisor {
    pub fn new(coeffs: Vec<Q>) -> Self {
        Divisor { coeffs }
    }

    pub fn zero(facets: usize) -> Self {
        Divisor { coeffs: vec![Q::zero(); facets] }
    }

    /// The toric divisor of a single facet.
    pub fn facet(facets: usize, id: usize) -> Self {
        let mut d = Self::zero(facets);
        d.coeffs[id] = Q::one();
        d
    }

    pub fn from_facets(facets: usize, ids: &[(usize, Q)]) -> Self {
        let mut d = Self::zero(facets);
        for (id, c) in ids {
            d.coeffs[*id] += c;
        }
        d
    }

    /// The principal divisor `sum_F <u_F, v> D_F`.
    pub fn principal(p: &SimplePolytope, v: &[Q]) -> Self {
        Divisor { coeffs: p.facets().iter().map(|f| dot_int(&f.normal, v)).collect() }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, facet: usize) -> &Q {
        &self.coeffs[facet]
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        Divisor { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        Divisor { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: &Q) -> Divisor {
        Divisor { coeffs: self.coeffs.iter().map(|a| a * s).collect() }
    }

    pub fn check(&self, p: &SimplePolytope) -> Result<(), ChowError> {
        if self.coeffs.len() != p.facet_count() {
            return Err(ChowError::WrongFacetCount { expected: p.facet_count(), got: self.coeffs.len() });
        }
        Ok(())
    }

    pub fn from_json(json: &DivisorJson, facets: usize) -> Result<Self, ChowError> {
        let mut d = Self::zero(facets);
        for (key, value) in &json.coeffs {
            let id: usize = key
                .parse()
                .ok()
                .filter(|&id| id < facets)
                .ok_or_else(|| ChowError::UnknownFacet(key.clone()))?;
            d.coeffs[id] = parse_q(value)
                .ok_or_else(|| ChowError::BadCoefficient { facet: key.clone(), value: value.clone() })?;
        }
        Ok(d)
    }

    pub fn to_json(&self) -> DivisorJson {
        DivisorJson {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (i.to_string(), fmt_q(c)))
                .collect(),
        }
    }
}

/// Generators `c_F`, linear relations `sum_F u_F[i] c_F = 0`, and the
/// Stanley-Reisner minimal non-faces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingPresentation {
    pub generators: Vec<String>,
    pub linear_relations: Vec<Vec<i64>>,
    pub minimal_nonfaces: Vec<BTreeSet<usize>>,
}

pub fn presentation(p: &SimplePolytope) -> RingPresentation {
    let m = p.facet_count();
    let n = p.dim();
    let generators = (0..m).map(|f| format!("c{f}")).collect();
    let linear_relations = (0..n)
        .map(|i| p.facets().iter().map(|f| f.normal[i]).collect())
        .collect();
    // Faces are closed under subsets, so a non-face is minimal iff every subset
    // obtained by dropping one facet is a face. Minimal non-faces have size <= n + 1.
    let mut minimal_nonfaces = Vec::new();
    for size in 2..=(n + 1).min(m) {
        for subset in (0..m).combinations(size) {
            let set: BTreeSet<usize> = subset.iter().copied().collect();
            if p.is_face(&set) {
                continue;
            }
            let minimal = subset.iter().all(|drop| {
                let smaller: BTreeSet<usize> = set.iter().copied().filter(|f| f != drop).collect();
                p.is_face(&smaller)
            });
            if minimal {
                minimal_nonfaces.push(set);
            }
        }
    }
    RingPresentation { generators, linear_relations, minimal_nonfaces }
}

/// `v` with `coeff_F(D) = <u_F, v>` for all `F`, if `D` is principal.
pub fn is_principal(p: &SimplePolytope, d: &Divisor) -> Option<Vec<Q>> {
    let rows: Vec<Vec<Q>> = p
        .facets()
        .iter()
        .map(|f| f.normal.iter().map(|&x| q(x)).collect())
        .collect();
    linalg::solve(&rows, &d.coeffs, p.dim())
}

pub fn linearly_equivalent(p: &SimplePolytope, a: &Divisor, b: &Divisor) -> bool {
    is_principal(p, &a.sub(b)).is_some()
}

/// The polytope translated so that its vertex centroid sits at the origin.
pub fn centered(p: &SimplePolytope) -> SimplePolytope {
    let shift: Vec<Q> = p.centroid().into_iter().map(|c| -c).collect();
    p.translated(&shift)
}

/// Offsets of [`centered`]`(p)` as a divisor; every coefficient is positive.
pub fn ample_from_offsets(p: &SimplePolytope) -> Divisor {
    Divisor { coeffs: centered(p).facets().iter().map(|f| f.offset.clone()).collect() }
}

/// `{x : <u_F, x> + coeff_F(D) >= 0}`, possibly empty or lower-dimensional.
pub fn polytope_of_divisor(p: &SimplePolytope, d: &Divisor) -> HalfspaceRegion {
    let facets = p
        .facets()
        .iter()
        .zip(&d.coeffs)
        .map(|(f, c)| Facet { normal: f.normal.clone(), offset: c.clone() })
        .collect();
    HalfspaceRegion::new(p.dim(), facets)
}

/// Nef in the combinatorial sense used here: the divisor polytope has the same
/// vertex-facet incidences as `p`, hence the same normal fan.
pub fn is_fan_compatible(p: &SimplePolytope, d: &Divisor) -> bool {
    polytope_of_divisor(p, d).incidence_pattern() == p.incidence_pattern()
}

/// Exact volume of a simple polytope.
pub fn volume(p: &SimplePolytope) -> Q {
    region_volume(&p.as_region())
}

struct VolumeCache<'a> {
    polytope: &'a SimplePolytope,
    memo: HashMap<Vec<Q>, Q>,
}

impl VolumeCache<'_> {
    fn volume(&mut self, d: &Divisor) -> Q {
        if let Some(v) = self.memo.get(&d.coeffs) {
            return v.clone();
        }
        let v = region_volume(&polytope_of_divisor(self.polytope, d));
        self.memo.insert(d.coeffs.clone(), v.clone());
        v
    }

    /// `L_1 ... L_n` for nef `L_i`, by polarization of `D -> n! vol(P_D)`.
    fn mixed(&mut self, list: &[&Divisor]) -> Q {
        let n = list.len();
        let m = self.polytope.facet_count();
        let mut total = Q::zero();
        for mask in 1u32..(1 << n) {
            let mut sum = Divisor::zero(m);
            for (i, d) in list.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    sum = sum.add(d);
                }
            }
            let vol = self.volume(&sum);
            if (n - mask.count_ones() as usize).is_multiple_of(2) {
                total += vol;
            } else {
                total -= vol;
            }
        }
        total
    }
}

/// The top intersection product `D_1 * ... * D_n`.
///
/// Each `D_j` is lifted to `D_j + M H` with `H` ample and `M` the first power of two
/// making every lift fan-compatible; the product of lifts is multilinearly expanded
/// back, each term being a mixed product of nef divisors.
pub fn intersection_number(p: &SimplePolytope, divisors: &[Divisor]) -> Result<Q, ChowError> {
    let n = p.dim();
    if divisors.len() != n {
        return Err(ChowError::WrongArity { expected: n, got: divisors.len() });
    }
    for d in divisors {
        d.check(p)?;
    }
    let h = ample_from_offsets(p);
    let mut multiple = 1u32;
    let lifts = loop {
        let scaled = h.scale(&q(multiple.into()));
        let lifts: Vec<Divisor> = divisors.iter().map(|d| d.add(&scaled)).collect();
        if lifts.iter().all(|d| is_fan_compatible(p, d)) {
            break lifts;
        }
        if multiple >= MAX_NEF_MULTIPLE {
            return Err(ChowError::NefLiftFailed);
        }
        multiple *= 2;
    };
    let mut cache = VolumeCache { polytope: p, memo: HashMap::new() };
    let neg_m = -q(multiple.into());
    let mut total = Q::zero();
    // D_j = L_j - M H: choose the lifted factor for j in `mask`, -M H otherwise.
    for mask in 0u32..(1 << n) {
        let chosen = mask.count_ones() as usize;
        let mut list: Vec<&Divisor> = (0..n)
            .filter(|j| mask & (1 << j) != 0)
            .map(|j| &lifts[j])
            .collect();
        list.extend(std::iter::repeat_n(&h, n - chosen));
        let mut coefficient = Q::one();
        for _ in chosen..n {
            coefficient *= &neg_m;
        }
        total += coefficient * cache.mixed(&list);
    }
    Ok(total)
}

pub fn self_intersection_top(p: &SimplePolytope, d: &Divisor) -> Result<Q, ChowError> {
    intersection_number(p, &vec![d.clone(); p.dim()])
}

/// Product of the facet classes `c_F` for the listed facet ids (with repetition).
pub fn facet_monomial(p: &SimplePolytope, facets: &[usize]) -> Result<Q, ChowError> {
    let m = p.facet_count();
    if let Some(&bad) = facets.iter().find(|&&f| f >= m) {
        return Err(ChowError::UnknownFacet(bad.to_string()));
    }
    let divisors: Vec<Divisor> = facets.iter().map(|&f| Divisor::facet(m, f)).collect();
    intersection_number(p, &divisors)
}

/// `H' = H + div(v)` vanishing on every facet in `touched`, if such `v` exists.
pub fn avoidance_certificate(p: &SimplePolytope, h: &Divisor, touched: &BTreeSet<usize>) -> Option<Divisor> {
    if touched.iter().any(|&f| f >= p.facet_count()) || h.len() != p.facet_count() {
        return None;
    }
    let rows: Vec<Vec<Q>> = touched
        .iter()
        .map(|&f| p.normal(f).iter().map(|&x| q(x)).collect())
        .collect();
    let rhs: Vec<Q> = touched.iter().map(|&f| -h.coeff(f).clone()).collect();
    let v = linalg::solve(&rows, &rhs, p.dim())?;
    Some(h.add(&Divisor::principal(p, &v)))
}

/// Sufficient condition for `[omega] = [H]` to vanish on the preimage of a set
/// touching exactly the facets in `touched`.
pub fn inessential_touch_set(p: &SimplePolytope, h: &Divisor, touched: &BTreeSet<usize>) -> bool {
    avoidance_certificate(p, h, touched).is_some()
}

/// Facets of the divisor with strictly positive coefficient.
pub fn support(d: &Divisor) -> BTreeSet<usize> {
    d.coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_positive())
        .map(|(i, _)| i)
        .collect()
}
