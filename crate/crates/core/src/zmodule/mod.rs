//! Finite abelian groups, modules over finite groups, and `Q/Z`.

mod finab;
mod gmodule;
mod pairing;
mod qz;
pub mod snf;

pub use finab::{FinAb, KernelSubgroup};
pub use gmodule::{dual_module, GModule};
pub use pairing::Pairing;
pub use qz::QmodZ;
pub use snf::{smith_normal_form, IntMatrix, SmithNormalForm};
