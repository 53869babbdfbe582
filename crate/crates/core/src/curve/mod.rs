//! Elliptic curves over `F_q(T)`: invariants, reduction at every place and
//! Frobenius traces.

pub mod count;
mod local;
mod spec;
mod strata;

pub use count::{EXHAUSTIVE_LIMIT, count_bsgs, count_exhaustive, count_points, CountConfig, CountMethod};
pub use local::{
    conductor_degree, infinite_place_model, local_data, minimalize_at, parse_place,
    satake_angle, special_places, AdditiveKind, LocalData, Place, Reduction,
};
pub use spec::{
    check_nonconstant, derive_invariants, field_from_parts, parse_curve, CurveSpec, Invariants,
};
pub use strata::{LocalTable, PlaceClass, Stratum};
