//! Exact constructible-sheaf calculus on `M_R` for dimensions up to two: stratifications,
//! poset sheaves, `RHom`, convolution, `Hom^*` and microsupport.

pub mod arrangement;
pub mod cochain;
mod conv;
mod indicator;
mod micro;
mod rhom;
mod sheaf;
mod strat;
mod torus;

pub use conv::{convolve, hom_star, Convolution, Properness};
pub use indicator::{indicator_sheaf, IndicatorComplex};
pub use micro::{microstalk, microsupport, ConormalSector, SSCell, SSCells, SS_CONVENTION};
pub use rhom::{rhom, rhom_complex};
pub use sheaf::{same_profile, PosetSheaf, SheafProfile};
pub use strat::{refine_arrangement, walls_of, Stratification, MAX_DIM};
pub use torus::{torus_hom, torus_hom_bounded, torus_hom_with, TorusHom, TorusOptions};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SheafError {
    #[error("the sheaf engine supports ambient dimension 1 or 2, got {0}")]
    UnsupportedDimension(usize),
    #[error("window radius must be positive")]
    BadWindow,
    #[error("ambient dimensions differ")]
    DimensionMismatch,
    #[error("sheaves live on different stratifications")]
    StratificationMismatch,
    #[error("term {0} is not a union of strata")]
    NotAdapted(usize),
    #[error("stalk at stratum {0} is not a complex")]
    NotAComplex(usize),
    #[error("generization {0} -> {1} is not a chain map")]
    NotAChainMap(usize, usize),
    #[error("generization maps {0} -> {1} disagree along different chains")]
    NotFunctorial(usize, usize),
    #[error("stratification is not a refinement on the requested window")]
    NotARefinement,
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("translation box not stable: boundary translation {0:?} contributes")]
    Unstable(Vec<i64>),
}
