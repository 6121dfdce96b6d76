//! Instance generators, the tiny exhaustive oracle and the seeded property suites.

pub mod generators;
pub mod oracle;

pub use generators::{
    cube_block_multiplicity, kkm_standard_cover, random_axes_cover, random_complement_family, random_kkm_family,
    random_low_multiplicity_cover, random_sample_cover, shifted_brick_cover, GenerateError, Generated, Pattern,
};
pub use oracle::{exhaustive_oracle_tiny, OracleReport};
pub mod suite;

pub use suite::{acceptance_suites, instance_seeds, run_property_suite, InstanceRecord, SuiteConfig, SuiteError, SuiteKind, SuiteReport};
pub mod selftest;

pub use selftest::{selftest, CriterionResult, SelftestReport};
