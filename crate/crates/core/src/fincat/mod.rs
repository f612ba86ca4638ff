//! Explicit finite categories, functors, presheaves, and the limits and
//! colimits the other modules are built from.

mod catalogue;
mod category;
mod fibration;
mod functor;
mod limits;
mod presheaf;

pub use catalogue::{all_functors, parallel_pair, small_categories, walking_iso};
pub use category::{Arrow, FinCat, Mor, Obj};
pub use fibration::{
    check_discrete_fibration, check_final, elements, is_discrete_fibration, is_final, presheaf_iso,
    presheaf_of_dfib, Elements, LiftIndex, NaturalIso,
};
pub use functor::{same_category, FinFunctor, Span, SpanCell};
pub use limits::{
    coend, coend_by_elements, comma_components, comma_objects, comma_under, connected_components,
    pullback, twisted_elements, Coend, Comma, Profunctor, Pullback,
};
pub use presheaf::Presheaf;
