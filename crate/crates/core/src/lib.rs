//! Exact node counts and factoriality bounds for nodal complete-intersection
//! threefolds.
//!
//! A complete-intersection threefold `X` of degrees `d = (d_1,...,d_k)` that
//! contains a complete-intersection surface `S` of degrees
//! `e = (e_1,...,e_{k+1})` is generically nodal along `S`, and the number of
//! nodes is an explicit polynomial in the degrees.  This crate computes that
//! count exactly, classifies each admissible degree pair (zero nodes, at
//! least the factoriality bound, or one of three exceptional shapes),
//! verifies the classification by brute force over finite degree ranges,
//! scans deliberately relaxed configurations for below-bound node counts,
//! and emits deterministic computer-algebra scripts that double-check
//! individual witnesses.
//!
//! All arithmetic is exact: degrees are machine integers, counts are
//! arbitrary-precision integers, and nothing is ever rounded.
//!
//! ```
//! use ci_nodes::{classify, ClassKind, ConfigPair};
//!
//! let pair = ConfigPair::from_entries(&[2, 2], &[1, 1, 2]).unwrap();
//! let class = classify(&pair).unwrap();
//! assert_eq!(class.kind, ClassKind::Exceptional);
//! assert_eq!(class.s_value.to_string(), "2");
//! ```

pub mod count;
pub mod error;
pub mod seq;
pub mod verify;
pub mod witness;

pub use count::{
    classify, equal_degree_closed_form, factorial_bound, is_exceptional_config, is_vanishing,
    min_nodes_nonfactorial, node_count, BoundResult, ClassKind, Classification, NodeCount,
};
pub use error::{Error, Result};
pub use seq::{
    check_conditions, index_function, is_subsequence, AdmissibilityReport, Condition, ConfigPair,
    DegreeSeq,
};
pub use verify::{
    audit_trichotomy, enumerate_admissible, scan_relaxed, verify_vanishing_equivalence,
    AuditReport, RelaxedFinding, SearchRange,
};
pub use witness::{
    build_schema, emit_cas_script, k1_node_oracle, CoeffDegree, CoefficientField, ScriptDialect,
    WitnessSchema,
};
