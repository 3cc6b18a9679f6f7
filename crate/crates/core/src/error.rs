use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid level k = {k}: {reason}")]
    InvalidLevel { k: u32, reason: &'static str },

    #[error("context mismatch: element of G_{found} used in G_{expected}")]
    ContextMismatch { expected: u32, found: u32 },

    #[error("cannot parse element: {0}")]
    Parse(String),

    #[error("subgroup is not normal in G_k")]
    NotNormal,

    #[error("quotient is not abelian")]
    NonAbelianQuotient,

    #[error("second argument is not contained in the first")]
    NotNested,

    #[error("exact intersection unsupported at k = {k} for two non-flat subgroups")]
    UnsupportedExact { k: u32 },

    #[error("exact power subgroup unavailable at k = {k}; use the sandwich report")]
    SandwichOnly { k: u32 },

    #[error("element lies outside Z_k")]
    OutsideCenter,

    #[error("invalid subgroup data: {0}")]
    InvalidSubgroup(String),

    #[error("invalid index: {0}")]
    InvalidIndex(String),
}
