pub mod abelian;
pub mod action;
pub mod catalog;
pub mod error;
pub mod extension;
pub mod fp;
pub mod group;
pub mod hom;
pub mod perm;
pub mod subgroup;
pub mod tensor;
pub mod verify;

pub use abelian::AbelianInvariants;
pub use error::{Error, Result};
pub use group::{Elem, FiniteGroup};
pub use hom::Homomorphism;
pub use perm::Perm;
pub use subgroup::Subgroup;
