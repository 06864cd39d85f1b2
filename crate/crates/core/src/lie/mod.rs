//! Root systems, Chevalley bases and the Killing form.

pub mod algebra;
pub mod killing;
pub mod roots;

pub use algebra::{Element, LieAlgebra, SignConvention};
pub use killing::KillingForm;
pub use roots::{CartanType, Family, RootSystem};
