//! Finite groupoids with ℤ/2-actions.
//!
//! The crate builds finite groupoids as explicit tables and computes with
//! them exactly: functors, fibrations and weak equivalences
//! ([`functor`]), homotopy fixed points under an involution ([`gamma`]),
//! nonabelian `H¹(ℤ/2; G)` ([`cohomology`]), twisted-conjugation parameter
//! spaces ([`twisted`]), filtered colimits ([`colimit`]) and presheaves of
//! groupoids on finite spaces ([`presheaf`]).

pub mod cohomology;
pub mod colimit;
pub mod dot;
pub mod fixtures;
pub mod functor;
pub mod gamma;
pub mod generate;
pub mod group;
pub mod groupoid;
pub mod presheaf;
pub mod schema;
pub mod suites;
pub mod twisted;

pub use functor::{is_fibration, is_weak_equivalence, quotient_comparison, GroupoidMap};
pub use gamma::{hfp, hfp_map, iota, EquivariantMap, GammaAction, Hfp, HfpObject};
pub use group::{FiniteGroup, GroupAction, Subgroup};
pub use groupoid::{groupoid_cardinality, validate_groupoid, FiniteGroupoid, MorId, ObjId};
pub use cohomology::{bg_hfp_decomposition, h1, skeletonize, z1, CocycleClass, GroupGammaAction};
pub use colimit::{colimit, hfp_colimit_comparison, Diagram, FilteredDiagram, GammaDiagram, IndexCategory};
pub use presheaf::{
    presheaf_hfp, stalk, stalk_commutation_check, FiniteSite, GroupoidPresheaf, PresheafGammaAction, PresheafMap,
};
pub use suites::{run_suite, Suite, SuiteReport};
pub use twisted::{parameter_fibration, twisted_orbits, z1_theta, InvolutiveGroupData};
