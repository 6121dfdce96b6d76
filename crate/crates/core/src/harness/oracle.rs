//! Exhaustive check of the smallest nontrivial Lebesgue instance.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::covering::model::{LatticeCover, LatticeModel};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub n: usize,
    pub r: u32,
    /// Labeled families of nonempty subsets examined.
    pub families: usize,
    /// Families satisfying the hypotheses (full union, multiplicity at most n).
    pub admissible: usize,
    /// Admissible families with no set meeting two opposite facets.
    pub violations: Vec<Vec<Vec<usize>>>,
}

/// Every labeled family of 1 to 3 nonempty subsets of the four points of the
/// `n = 2, r = 1` cube.
pub fn exhaustive_oracle_tiny() -> OracleReport {
    let model = LatticeModel::cube(2, 1).expect("valid model");
    let points = model.len();
    let subsets: Vec<Vec<usize>> = (1u32..(1 << points))
        .map(|mask| (0..points).filter(|&p| mask & (1 << p) != 0).collect())
        .collect();
    let mut report = OracleReport { n: 2, r: 1, families: 0, admissible: 0, violations: Vec::new() };
    for count in 1..=3 {
        for family in (0..count).map(|_| subsets.iter()).multi_cartesian_product() {
            report.families += 1;
            let sets = family.iter().enumerate().map(|(i, s)| (format!("X{i}"), (*s).clone())).collect();
            let cover = LatticeCover::new(model.clone(), sets).expect("valid points");
            if cover.uncovered_point().is_some() || cover.multiplicity() > 2 {
                continue;
            }
            report.admissible += 1;
            let spans = (0..cover.sets.len()).any(|s| (0..2).any(|axis| cover.spans_pair(s, axis)));
            if !spans {
                report.violations.push(family.into_iter().cloned().collect());
            }
        }
    }
    report
}
