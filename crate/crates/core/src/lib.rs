pub mod algebra;
pub mod census;
pub mod classes;
pub mod error;
pub mod ffield;
pub mod linalg;
pub mod nullideal;

pub use algebra::{FPoly, Mat2, MatPoly, PolyKind};
pub use census::{ClassCensus, CountMethod, GlobalCensus, UnionCensus, UnionMode};
pub use classes::{ClassPartition, MinPolyClass};
pub use error::{Error, Result};
pub use ffield::{FieldElem, FieldSpec};
pub use nullideal::{CoreVerdict, KernelBasis, LeftIdealDesc};
