//! Exact computational models of finite groupoids: convolution algebras,
//! representations, the section and reconstruction functors between
//! representations and modules, principal bibundles and the linear side
//! of their Morita theory. All arithmetic is exact over ℚ(i).

pub mod algebra;
pub mod bibundle;
pub mod error;
pub mod fixtures;
pub mod groupoid;
pub mod matrix;
pub mod module;
pub mod morita;
pub mod rep;
pub mod report;
pub mod scalar;
pub mod workspace;

pub use bibundle::{Composite, EquivariantMap, Point, PrincipalBibundle};
pub use error::{Error, Result};
pub use groupoid::{Arrow, FiniteGroupoid, GroupTable, Object};
pub use matrix::Matrix;
pub use module::{CModule, ModuleMorphism};
pub use rep::{RepMorphism, Representation};
pub use report::{Report, ValidationReport};
pub use scalar::Scalar;
