//! Vector fields, differential forms, point maps and symbolic linear algebra.

mod field;
pub(crate) mod form;
mod frame;
pub mod linalg;
mod map;

pub use field::VectorField;
pub use form::KForm;
pub use frame::{expand_in_frame, Frame};
pub use linalg::Matrix;
pub use map::PointMap;
