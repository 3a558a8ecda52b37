use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("enumeration exceeded cap of {cap} elements")]
    TruncationOverflow { cap: usize },
    #[error("subgroup membership undecidable within radius budget {budget}")]
    UndecidableAtRadius { budget: usize },
    #[error("scale factor must be positive, got {0}")]
    NonpositiveScale(f64),
    #[error("orbit truncation is empty")]
    EmptyOrbit,
    #[error("quadrature failed to stabilize: {0}")]
    QuadratureDivergence(String),
    #[error("geodesics cross; no separating walls")]
    CrossingAxes,
    #[error("bisection failed to bracket the target")]
    BisectionFailure,
    #[error("isometry does not translate along the given geodesic")]
    NotTranslationAxis,
    #[error("complement does not complete the subgroup basis to finite index")]
    RankDeficient,
    #[error("coset table has {0} rows; exact clique search refuses above 40")]
    TableTooLarge(usize),
    #[error("truncated data changed under enlarged budgets: {0}")]
    UnstableTruncation(String),
    #[error("operation requires a cube-type wallspace")]
    NotCubeType,
    #[error("spec parse error: {0}")]
    ParseError(String),
    #[error("modular image is nontrivial: cycle {cycle:?} has product {product}")]
    NontrivialModular { cycle: Vec<String>, product: f64 },
    #[error("fundamental-domain masses differ across edge {edge}: {left} vs {right}")]
    GluePeriodMismatch { edge: String, left: f64, right: f64 },
    #[error("point host {0} lies outside the truncated tree")]
    HostOutsideTruncation(String),
    #[error("spec failed validation with {0} violation(s)")]
    InvalidSpec(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
