//! Tropical spin curves, the cone complex of spin tropical curves, and
//! tropicalization of one-parameter families given by valuations.

mod cone;
mod curve;
mod family;
mod length;

pub use cone::{build_cone_complex, check_face_relation, ConeCell, ConeComplex, FaceRelationReport, PairSelection, PurityReport};
pub use curve::{
    distinct_lengths, fiber_size_by_burnside, pi_trop, pi_trop_fiber, SpinTropicalCurve, SpinTropicalCurveJson,
    TropicalCurve, TropicalCurveJson,
};
pub use family::{
    diagram_check, family_generic_fiber, family_stable_model, random_family, stable_model_by_blowup, trop_family,
    DiagramReport, FamilyDescriptor, FamilyJson, GenericFiber, GenericFiberJson,
};
pub use length::{lengths_from_json, lengths_to_json, Inf, Length, LengthJson};
