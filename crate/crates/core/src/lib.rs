//! Exact mixed volumes of two-parameter permutahedral families.
//!
//! Two independent computation routes for the same quantity:
//!
//! * [`walk`] — an absorbing-particle walk on `[0,1]` whose success
//!   probability equals the mixed-volume ratio, plus closed-form product
//!   formulas, the hypersimplex shift-sum identity, and the mod-`n`
//!   congruence scan.
//! * [`mixed`] / [`geometry`] — a brute-force oracle that builds the
//!   polytopes exactly, forms Minkowski sums, computes exact volumes and
//!   extracts the fully mixed coefficient by inclusion–exclusion.
//!
//! Everything on the trust path is exact rational arithmetic.

pub mod error;
pub mod family;
pub mod geometry;
pub mod mixed;
pub mod rat;
pub mod record;
pub mod walk;

mod linalg;

pub use error::Error;
pub use family::{
    breakpoints, embed_config, is_zone, target_multiset, BreakpointTable, Capacity, Configuration,
    FamilySpec, OffsetVector, Subset, ZoneSpec,
};
pub use geometry::{
    build_hrep, enumerate_vertices, minkowski_sum, volume, vrep_volume, HPolytope, VPolytope,
};
pub use mixed::{embedding_gram_det, mixed_volume, normalizer_v, superaffine_check, MixedVolumeResult};
pub use rat::{format_rat, parse_rat, rat, Rat};
pub use record::{Method, RunRecord};
pub use walk::{
    guess_check, product_formula, shift_sum, walk_mixed_volume, walk_probability,
    walk_probability_unmemoized, FormulaResult, GuessReport, Reading, WalkOutcome,
};
