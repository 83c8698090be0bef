//! Verification engine for idempotent recollements of module categories over
//! finite-dimensional bound quiver algebras.
//!
//! The crate is layered bottom-up:
//!
//! - [`exactlin`]: dense linear algebra over GF(p).
//! - [`quivalg`]: bound quiver algebras, the quotient `A/AeA` and the corner `eAe`.
//! - [`modcat`]: representations, Hom, (co)kernels, decomposition, resolutions, Ext,
//!   and enumeration of indecomposables up to a dimension bound.
//! - [`recol`]: the six functors of the recollement induced by a vertex idempotent,
//!   their exactness, and the identity/adjunction suites.
//! - [`subcat`]: finite subcategories (`add` of a set of indecomposables), `Fac`,
//!   orthogonals, approximations and torsion pairs.
//! - [`tilt`]: Wakamatsu tilting, (weak) support τ-tilting, τ-cotorsion torsion
//!   triples and the Φ/Ψ correspondence.
//! - [`glue`]: gluing and restriction across a recollement, behind hypothesis gates.
//!
//! All quantifiers over "every module" range over an enumerated [`modcat::Universe`]
//! of indecomposables of bounded total dimension; reports always carry that scope.

pub mod error;
pub mod exactlin;
pub mod glue;
pub mod modcat;
pub mod quivalg;
pub mod recol;
pub mod report;
pub mod subcat;
pub mod tilt;

pub use error::{Error, Result};
pub use exactlin::{Field, Mat};
pub use modcat::{Module, ModuleMap, Universe};
pub use quivalg::{Algebra, AlgebraSpec};
pub use recol::{Functor, Recollement};
pub use subcat::Subcat;
