//! Super de Rham and Hodge bookkeeping for supercurves.

pub mod derham;
pub mod hodge;

pub use derham::{affine_super_poincare, koszul_acyclicity, KoszulVerdict, PoincareVerdict};
pub use hodge::{
    frolicher_report, hodge_table, integral_forms_table, line_cohomology, FrolicherReport, HodgeInput, HodgeRecord,
    HodgeTable, LineBundle, SuperDim, Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CohomologyError {
    #[error("generic h0 is ambiguous for degree {degree} on genus {genus}; give an explicit descriptor")]
    AmbiguousGenericity { degree: i64, genus: u32 },
    #[error("inconsistent line bundle descriptor: {0}")]
    InconsistentDescriptor(String),
    #[error("missing descriptor: {0}")]
    MissingDescriptor(String),
    #[error("truncation out of range: {0}")]
    CutoffTooLarge(String),
}
