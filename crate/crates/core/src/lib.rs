//! Exact multicanonical thresholds for quasi-elliptic surfaces.
//!
//! A quasi-elliptic fibration `S -> B` (characteristic 2 or 3) is described here
//! purely by its numerical invariants: the characteristic `p`, the genus `g` of
//! the base curve, `chi = χ(O_S)`, the torsion length `t`, and the list of
//! multiple fibers with their canonical residues `a_i`. From these the crate
//!
//! * decides whether the Kodaira dimension is 1,
//! * evaluates the degree of the pushed-down `m`-canonical class on the base
//!   and whether `|mK_S|` induces the fibration,
//! * computes stable thresholds with auditable certificates,
//! * enumerates bounded regions of invariants and certifies the supremum of
//!   the stable thresholds per case.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod canonical;
pub mod cli;
pub mod enumerator;
pub mod error;
pub mod examples;
pub mod invariants;
pub mod threshold;

pub use canonical::{
    base_degree, canonical_data, gives_fibration, plurigenus_bounds, CanonicalClass,
    PlurigenusBounds,
};
pub use enumerator::{
    certify_bound, classify_case, enumerate_configs, tail_checks, CaseLabel, CertificationReport,
    Exclusion, RegionBounds, TailCheck,
};
pub use error::{Error, Result};
pub use examples::{example_surface_3_1, plurigenus_table, question_3_3_config, PlurigenusRecord};
pub use invariants::{
    kodaira_dim_is_one, kodaira_value, min_chi, validate, validate_with, FiberDatum, FiberKind,
    Rule, SurfaceConfig, ValidationOptions, ValidationReport, Violation,
};
pub use threshold::{
    first_success, stable_threshold, stable_threshold_with, step_increment, ThresholdCertificate,
    ThresholdOptions, DEFAULT_SCAN_CAP,
};
