//! Exact computation of Milnor algebras, noncommutative Hodge filtration
//! dimensions, Chern characters of matrix factorizations and Shioda's
//! Hodge-class count for homogeneous hypersurface singularities.

pub mod exactfield;
pub mod fermat;
pub mod hodge;
pub mod linalg;
pub mod mfcat;
pub mod milnor;
pub mod par;
pub mod polyforms;
pub mod verify;

pub use exactfield::{CycloNumber, Rational};
pub use polyforms::{poly_parse, DiffForm, GradedPolynomial, Monomial};
