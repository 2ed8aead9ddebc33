//! Fixed-precision arithmetic in a tower of `p`-adic fields `Q_p ⊆ K ⊆ M ⊆ N`.

mod element;
mod expr;
mod fp_poly;
mod galois;
mod log;
mod ramification;
mod roots;
mod tower;

pub use element::{FieldElement, Ring};
pub use expr::Expr;
pub use galois::GaloisAutomorphism;
pub use log::padic_log;
pub use ramification::{h_exponent, lemma_2_5_check, H_exponent, Lemma25Report};
pub use tower::{
    build_tower, preset, AutomorphismSpec, FieldTag, LocalFieldContext, RootOfUnitySpec, Subfield, SubfieldMarker,
    TowerSpec, DEFAULT_PRECISION, PRESET_NAMES,
};
