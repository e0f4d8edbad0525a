//! Root systems, Chevalley bases, principal `sl₂` data and representations of
//! the supported simple Lie algebras.

pub mod algebra;
pub mod cache;
pub mod principal;
pub mod rep;
pub mod roots;

pub use cache::{algebra, representation};
pub use algebra::{BasisKind, ChevalleyAlgebra, LieElement};
pub use principal::{
    coxeter_fixed_space, coxeter_matrix, n_plus_e, nilpotent_is_principal, regular_semisimple_check,
    torus_fixed_space, PrincipalData,
};
pub use rep::{RepKind, Representation};
pub use roots::{CartanType, RootSystem, SUPPORTED};
