//! Exact-rational discrete copulas and quasi-copulas on rectangular meshes:
//! axiom checking, corner-defect transforms, the associated fixed-point
//! iteration, and LP-backed feasibility tools for imprecise pairs.

pub mod axioms;
pub mod defects;
mod error;
pub mod feasibility;
pub mod fixtures;
pub mod gridfn;
pub mod io;
pub mod mesh;
mod par;
pub mod sample;
pub mod transform;

pub use error::{Error, Result};
pub use gridfn::GridFunction;
pub use mesh::{multiplicity_field, Mesh, MultiplicityField, Rect, RectUnion};
pub use ratlp::{r, Rational};
